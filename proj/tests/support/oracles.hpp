#pragma once

// Independent reference computations for the tests. Nothing here uses the
// library's balls or backends: lattice points are enumerated directly and
// small linear programs are solved by enumerating bases.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using Q = mpq_class;

// Exponent sums of a word in the compact "abAB" notation over a, b, c, ...
inline std::vector<long> exponents(const std::string& w, std::size_t n) {
  std::vector<long> v(n, 0);
  for (char ch : w) {
    if (ch >= 'a' && ch < 'a' + static_cast<int>(n)) ++v[ch - 'a'];
    else if (ch >= 'A' && ch < 'A' + static_cast<int>(n)) --v[ch - 'A'];
  }
  return v;
}

inline long l1(const std::vector<long>& v) {
  long s = 0;
  for (long x : v) s += std::labs(x);
  return s;
}

// Word norms of the prefixes of w in Z^n with the standard generators.
inline std::vector<long> zn_prefix_norms(const std::string& w, std::size_t n) {
  std::vector<long> out;
  for (std::size_t i = 1; i <= w.size(); ++i) out.push_back(l1(exponents(w.substr(0, i), n)));
  return out;
}

inline Q zn_radial_cost(const std::string& w, std::size_t n, unsigned p) {
  Q s = 0;
  for (long d : zn_prefix_norms(w, n)) {
    mpz_class t;
    mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(d + 1), p - 1);
    s += Q(t);
  }
  return s;
}

inline std::size_t zn_ball_count(std::size_t n, long r) {
  std::size_t count = 0;
  std::vector<long> x(n, -r);
  for (;;) {
    if (l1(x) <= r) ++count;
    std::size_t i = 0;
    while (i < n && x[i] == r) x[i++] = -r;
    if (i == n) break;
    ++x[i];
  }
  return count;
}

// 1 + 2k + 2k(2k-1) + ... on the 2k-regular tree.
inline std::size_t free_ball_count(std::size_t k, unsigned r) {
  std::size_t total = 1, sphere = 2 * k;
  for (unsigned i = 1; i <= r; ++i) {
    total += sphere;
    sphere *= 2 * k - 1;
  }
  return total;
}

// Commutator [a^n, b^n] in compact notation.
inline std::string commutator_power(std::size_t n) {
  return std::string(n, 'a') + std::string(n, 'b') + std::string(n, 'A') + std::string(n, 'B');
}

// Unit squares of the plane with lower-left corner (x, y).
struct Square {
  long x, y;
  auto operator<=>(const Square&) const = default;
};

inline std::vector<Square> torus_squares(long r) {
  std::vector<Square> out;
  for (long x = -r; x <= r; ++x)
    for (long y = -r; y <= r; ++y) {
      long m = std::max({std::labs(x) + std::labs(y), std::labs(x + 1) + std::labs(y),
                         std::labs(x) + std::labs(y + 1), std::labs(x + 1) + std::labs(y + 1)});
      if (m <= r) out.push_back({x, y});
    }
  return out;
}

// Boundary edge count of a union of squares: edges covered exactly once.
inline std::size_t boundary_edges(const std::vector<Square>& squares) {
  std::map<std::tuple<long, long, int>, int> mult;  // (x, y, horizontal?)
  for (const auto& s : squares) {
    ++mult[{s.x, s.y, 1}];
    ++mult[{s.x, s.y + 1, 1}];
    ++mult[{s.x, s.y, 0}];
    ++mult[{s.x + 1, s.y, 0}];
  }
  std::size_t n = 0;
  for (auto& [k, m] : mult)
    if (m % 2 == 1) ++n;
  return n;
}

// max over rho < r of (#squares within rho) / (their boundary length).
inline Q torus_stokes(long r) {
  Q best = 0;
  for (long rho = 1; rho < r; ++rho) {
    auto sq = torus_squares(rho);
    if (sq.empty()) continue;
    Q v(static_cast<long>(sq.size()), static_cast<long>(boundary_edges(sq)));
    v.canonicalize();
    if (v > best) best = v;
  }
  return best;
}

// Maximum of c.x over {A x = b, 0 <= x <= u} by enumerating basic solutions:
// every choice of m basic columns with the rest at a bound. Small sizes only.
struct TinyLp {
  std::vector<std::vector<Q>> A;
  std::vector<Q> b;
  std::vector<Q> u;  // finite upper bounds
  std::vector<Q> c;
};

inline std::optional<Q> brute_force_max(const TinyLp& lp) {
  const std::size_t m = lp.A.size(), n = lp.c.size();
  std::optional<Q> best;
  std::vector<int> pick(n, 0);  // 0 = at zero, 1 = at upper, 2 = basic
  for (;;) {
    std::vector<std::size_t> basic;
    for (std::size_t j = 0; j < n; ++j)
      if (pick[j] == 2) basic.push_back(j);
    if (basic.size() == m) {
      // Solve B x_B = b - N x_N by Gaussian elimination.
      std::vector<std::vector<Q>> M(m, std::vector<Q>(m + 1));
      for (std::size_t i = 0; i < m; ++i) {
        Q rhs = lp.b[i];
        for (std::size_t j = 0; j < n; ++j)
          if (pick[j] == 1) rhs -= lp.A[i][j] * lp.u[j];
        for (std::size_t k = 0; k < m; ++k) M[i][k] = lp.A[i][basic[k]];
        M[i][m] = rhs;
      }
      bool singular = false;
      for (std::size_t col = 0; col < m && !singular; ++col) {
        std::size_t piv = col;
        while (piv < m && M[piv][col] == 0) ++piv;
        if (piv == m) {
          singular = true;
          break;
        }
        std::swap(M[piv], M[col]);
        for (std::size_t i = 0; i < m; ++i) {
          if (i == col || M[i][col] == 0) continue;
          Q f = M[i][col] / M[col][col];
          for (std::size_t k = col; k <= m; ++k) M[i][k] -= f * M[col][k];
        }
      }
      if (!singular) {
        std::vector<Q> x(n, 0);
        for (std::size_t j = 0; j < n; ++j)
          if (pick[j] == 1) x[j] = lp.u[j];
        bool ok = true;
        for (std::size_t k = 0; k < m; ++k) {
          x[basic[k]] = M[k][m] / M[k][k];
          if (x[basic[k]] < 0 || x[basic[k]] > lp.u[basic[k]]) ok = false;
        }
        if (ok) {
          Q v = 0;
          for (std::size_t j = 0; j < n; ++j) v += lp.c[j] * x[j];
          if (!best || v > *best) best = v;
        }
      }
    }
    std::size_t j = 0;
    while (j < n && pick[j] == 2) pick[j++] = 0;
    if (j == n) break;
    ++pick[j];
  }
  return best;
}

// Random word in compact notation over the first n generators.
inline std::string random_word(std::mt19937_64& rng, std::size_t n, std::size_t len) {
  std::uniform_int_distribution<std::size_t> pick(0, 2 * n - 1);
  std::string w;
  for (std::size_t i = 0; i < len; ++i) {
    std::size_t c = pick(rng);
    w.push_back(static_cast<char>(c % 2 == 0 ? 'a' + c / 2 : 'A' + c / 2));
  }
  return w;
}

inline std::string invert(const std::string& w) {
  std::string out(w.rbegin(), w.rend());
  for (char& ch : out) ch = (ch >= 'a' && ch <= 'z') ? static_cast<char>(ch - 'a' + 'A') : static_cast<char>(ch - 'A' + 'a');
  return out;
}

}  // namespace oracle
