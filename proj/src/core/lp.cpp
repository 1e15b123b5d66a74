#include "lp.hpp"

#include <cmath>
#include <cstdint>

#include "error.hpp"

namespace ggt {

std::string status_name(LpSolution::Status s) {
  switch (s) {
    case LpSolution::Status::Optimal: return "optimal";
    case LpSolution::Status::Infeasible: return "infeasible";
    case LpSolution::Status::Unbounded: return "unbounded";
    case LpSolution::Status::IterationCap: return "iteration cap";
  }
  return "?";
}

namespace {

template <class T>
struct Arith;

template <>
struct Arith<double> {
  static constexpr bool exact = false;
  static bool positive(double x) { return x > 1e-9; }
  static bool negative(double x) { return x < -1e-9; }
  static bool pivotable(double x) { return std::fabs(x) > 1e-9; }
  static bool nonzero(double x) { return x != 0.0; }
  static double from(const Rational& q) { return q.get_d(); }
  static double magnitude(double x) { return std::fabs(x); }
};

template <>
struct Arith<Rational> {
  static constexpr bool exact = true;
  static bool positive(const Rational& x) { return sgn(x) > 0; }
  static bool negative(const Rational& x) { return sgn(x) < 0; }
  static bool pivotable(const Rational& x) { return sgn(x) != 0; }
  static bool nonzero(const Rational& x) { return sgn(x) != 0; }
  static Rational from(const Rational& q) { return q; }
  static double magnitude(const Rational& x) { return std::fabs(x.get_d()); }
};

enum Status : std::uint8_t { Basic, AtLower, AtUpper };

template <class T>
class Tableau {
  using A = Arith<T>;

 public:
  explicit Tableau(const LinearProgram& lp) : m_(lp.rows.size()), n_(lp.columns), cols_(lp.columns + m_) {
    a_.assign(m_, std::vector<T>(cols_, T(0)));
    beta_.assign(m_, T(0));
    rhs_.assign(m_, T(0));
    basis_.resize(m_);
    status_.assign(cols_, AtLower);
    upper_.assign(cols_, T(0));
    has_upper_.assign(cols_, false);
    blocked_.assign(cols_, false);
    for (std::size_t i = 0; i < m_; ++i) {
      bool flip = sgn(lp.rhs[i]) < 0;
      for (const auto& [j, v] : lp.rows[i]) a_[i][j] += A::from(flip ? Rational(-v) : v);
      a_[i][n_ + i] = T(1);
      rhs_[i] = A::from(flip ? Rational(-lp.rhs[i]) : lp.rhs[i]);
      beta_[i] = rhs_[i];
      basis_[i] = n_ + i;
      status_[n_ + i] = Basic;
    }
    for (std::size_t j = 0; j < n_; ++j)
      if (lp.upper[j]) {
        has_upper_[j] = true;
        upper_[j] = A::from(*lp.upper[j]);
      }
  }

  std::size_t rows() const { return m_; }
  std::size_t iterations() const { return iterations_; }
  const std::vector<std::size_t>& basis() const { return basis_; }
  Status status(std::size_t j) const { return status_[j]; }

  void set_phase1_costs() {
    cost_.assign(cols_, T(0));
    for (std::size_t i = 0; i < m_; ++i) cost_[n_ + i] = T(-1);
    reduce_costs();
  }

  // Artificials become fixed at zero and may not re-enter.
  void set_phase2_costs(const LinearProgram& lp) {
    for (std::size_t i = 0; i < m_; ++i) {
      blocked_[n_ + i] = true;
      has_upper_[n_ + i] = true;
      upper_[n_ + i] = T(0);
      if (status_[n_ + i] == Basic && !A::exact && std::fabs(A::magnitude(beta_[basis_row(n_ + i)])) < 1e-9)
        beta_[basis_row(n_ + i)] = T(0);
    }
    cost_.assign(cols_, T(0));
    for (std::size_t j = 0; j < n_; ++j) cost_[j] = A::from(lp.objective[j]);
    reduce_costs();
  }

  T objective_value() const {
    T v(0);
    for (std::size_t i = 0; i < m_; ++i) v += cost_[basis_[i]] * beta_[i];
    for (std::size_t j = 0; j < cols_; ++j)
      if (status_[j] == AtUpper) v += cost_[j] * upper_[j];
    return v;
  }

  LpSolution::Status run(std::size_t cap, bool bland) {
    std::size_t degenerate = 0;
    for (;;) {
      if (iterations_ >= cap) return LpSolution::Status::IterationCap;
      bool use_bland = bland || A::exact || degenerate > 50;
      std::size_t enter = cols_;
      double best = 0;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (blocked_[j] || status_[j] == Basic) continue;
        bool up = status_[j] == AtLower && A::positive(d_[j]) && !(has_upper_[j] && !A::positive(upper_[j]));
        bool down = status_[j] == AtUpper && A::negative(d_[j]);
        if (!up && !down) continue;
        if (use_bland) {
          enter = j;
          break;
        }
        double mag = A::magnitude(d_[j]);
        if (mag > best) {
          best = mag;
          enter = j;
        }
      }
      if (enter == cols_) return LpSolution::Status::Optimal;
      const int dir = status_[enter] == AtLower ? 1 : -1;

      // Ratio test; leave == m_ means a bound flip of the entering variable.
      bool limited = has_upper_[enter];
      T theta = limited ? upper_[enter] : T(0);
      std::size_t leave = m_;
      bool leave_to_upper = false;
      double leave_mag = 0;
      for (std::size_t i = 0; i < m_; ++i) {
        T alpha = dir > 0 ? a_[i][enter] : T(-a_[i][enter]);
        if (!A::pivotable(alpha)) continue;
        T lim;
        bool to_upper;
        if (A::positive(alpha)) {
          lim = beta_[i] / alpha;
          to_upper = false;
        } else if (A::negative(alpha) && has_upper_[basis_[i]]) {
          lim = (upper_[basis_[i]] - beta_[i]) / T(-alpha);
          to_upper = true;
        } else {
          continue;
        }
        if (!A::exact && lim < 0) lim = 0;
        bool better = !limited || lim < theta;
        if (!better && lim == theta && leave != m_) {
          better = use_bland ? basis_[i] < basis_[leave] : A::magnitude(alpha) > leave_mag;
        }
        if (better) {
          theta = lim;
          limited = true;
          leave = i;
          leave_to_upper = to_upper;
          leave_mag = A::magnitude(alpha);
        }
      }
      if (!limited) return LpSolution::Status::Unbounded;
      ++iterations_;
      degenerate = A::positive(theta) ? 0 : degenerate + 1;

      for (std::size_t i = 0; i < m_; ++i) {
        if (!A::nonzero(a_[i][enter])) continue;
        if (dir > 0)
          beta_[i] -= theta * a_[i][enter];
        else
          beta_[i] += theta * a_[i][enter];
      }
      if (leave == m_) {
        status_[enter] = status_[enter] == AtLower ? AtUpper : AtLower;
        continue;
      }
      std::size_t out = basis_[leave];
      status_[out] = leave_to_upper ? AtUpper : AtLower;
      T value = dir > 0 ? theta : T(upper_[enter] - theta);
      pivot(leave, enter, false);
      beta_[leave] = value;
      basis_[leave] = enter;
      status_[enter] = Basic;
    }
  }

  // Makes `cols` basic (one per row) by elimination, then recomputes basic
  // values from the nonbasic statuses. Returns false when the basis is
  // singular or infeasible.
  bool install_basis(const std::vector<std::size_t>& cols, const std::vector<Status>& nonbasic) {
    std::vector<bool> row_used(m_, false);
    std::vector<std::size_t> new_basis(m_, cols_);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      std::size_t c = cols[k];
      std::size_t r = m_;
      if (k < m_ && !row_used[k] && A::pivotable(a_[k][c])) r = k;
      for (std::size_t i = 0; i < m_ && r == m_; ++i)
        if (!row_used[i] && A::pivotable(a_[i][c])) r = i;
      if (r == m_) return false;
      pivot(r, c, true);
      row_used[r] = true;
      new_basis[r] = c;
    }
    basis_ = new_basis;
    for (std::size_t j = 0; j < cols_; ++j) status_[j] = nonbasic[j] == Basic ? AtLower : nonbasic[j];
    for (std::size_t i = 0; i < m_; ++i) status_[basis_[i]] = Basic;
    for (std::size_t j = 0; j < cols_; ++j)
      if (status_[j] == AtUpper && !has_upper_[j]) status_[j] = AtLower;
    for (std::size_t i = 0; i < m_; ++i) {
      beta_[i] = rhs_[i];
      for (std::size_t j = 0; j < cols_; ++j)
        if (status_[j] == AtUpper && A::nonzero(a_[i][j])) beta_[i] -= a_[i][j] * upper_[j];
      if (A::negative(beta_[i])) return false;
      if (has_upper_[basis_[i]] && A::positive(T(beta_[i] - upper_[basis_[i]]))) return false;
    }
    return true;
  }

  std::vector<T> solution() const {
    std::vector<T> x(n_, T(0));
    for (std::size_t j = 0; j < n_; ++j)
      if (status_[j] == AtUpper) x[j] = upper_[j];
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = beta_[i];
    return x;
  }

  void reduce_costs() {
    d_ = cost_;
    for (std::size_t i = 0; i < m_; ++i) {
      const T& cb = cost_[basis_[i]];
      if (!A::nonzero(cb)) continue;
      for (std::size_t j = 0; j < cols_; ++j)
        if (A::nonzero(a_[i][j])) d_[j] -= cb * a_[i][j];
    }
    for (std::size_t i = 0; i < m_; ++i) d_[basis_[i]] = T(0);
  }

 private:
  std::size_t basis_row(std::size_t col) const {
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] == col) return i;
    return m_;
  }

  void pivot(std::size_t r, std::size_t c, bool with_rhs) {
    T p = a_[r][c];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < cols_; ++j)
      if (A::nonzero(a_[r][j])) {
        a_[r][j] /= p;
        nz.push_back(j);
      }
    if (with_rhs) rhs_[r] /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || !A::nonzero(a_[i][c])) continue;
      T f = a_[i][c];
      for (std::size_t j : nz) a_[i][j] -= f * a_[r][j];
      if (with_rhs) rhs_[i] -= f * rhs_[r];
      if (!A::exact) a_[i][c] = 0;
    }
    if (A::nonzero(d_.empty() ? T(0) : d_[c])) {
      T f = d_[c];
      for (std::size_t j : nz) d_[j] -= f * a_[r][j];
      if (!A::exact) d_[c] = 0;
    }
  }

  std::size_t m_, n_, cols_;
  std::vector<std::vector<T>> a_;
  std::vector<T> beta_, rhs_;
  std::vector<std::size_t> basis_;
  std::vector<Status> status_;
  std::vector<T> upper_;
  std::vector<bool> has_upper_, blocked_;
  std::vector<T> cost_, d_;
  std::size_t iterations_ = 0;
};

template <class T>
LpSolution::Status two_phase(Tableau<T>& t, const LinearProgram& lp, std::size_t cap, bool bland) {
  t.set_phase1_costs();
  auto s = t.run(cap, bland);
  if (s != LpSolution::Status::Optimal) return s;
  T infeasibility = t.objective_value();
  if (infeasibility < T(Arith<T>::exact ? 0 : -1e-7)) return LpSolution::Status::Infeasible;
  t.set_phase2_costs(lp);
  return t.run(cap, bland);
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, std::size_t iteration_cap) {
  if (lp.rhs.size() != lp.rows.size() || lp.upper.size() != lp.columns || lp.objective.size() != lp.columns)
    fail(ErrorCode::InvalidArgument, "inconsistent linear program dimensions");
  LpSolution sol;

  Tableau<double> approx(lp);
  auto s = two_phase(approx, lp, iteration_cap, false);
  sol.float_iterations = approx.iterations();

  Tableau<Rational> exact(lp);
  exact.set_phase1_costs();
  bool warm = false;
  if (s == LpSolution::Status::Optimal) {
    std::vector<Status> statuses(lp.columns + lp.rows.size());
    for (std::size_t j = 0; j < statuses.size(); ++j) statuses[j] = approx.status(j);
    exact.set_phase2_costs(lp);
    warm = exact.install_basis(approx.basis(), statuses);
  }
  if (warm) {
    exact.reduce_costs();
    s = exact.run(iteration_cap, true);
  } else {
    Tableau<Rational> fresh(lp);
    s = two_phase(fresh, lp, iteration_cap, true);
    exact = std::move(fresh);
  }
  sol.warm_start = warm;
  sol.exact_iterations = exact.iterations();
  sol.status = s;
  if (s == LpSolution::Status::Optimal) {
    sol.x = exact.solution();
    sol.value = 0;
    for (std::size_t j = 0; j < lp.columns; ++j)
      if (sgn(lp.objective[j]) != 0) sol.value += lp.objective[j] * sol.x[j];
  }
  return sol;
}

}  // namespace ggt
