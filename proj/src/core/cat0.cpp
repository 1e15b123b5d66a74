#include "cat0.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "error.hpp"
#include "json.hpp"

namespace ggt {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Trees

namespace {

struct TreeEnd {
  Word vertex;
  double offset;
};

std::vector<TreeEnd> tree_ends(const TreePoint& p) {
  if (p.tau <= 0) return {{p.vertex, 0.0}};
  return {{p.vertex, p.tau}, {reduced_product(p.vertex, Word{p.dir}), 1.0 - p.tau}};
}

std::size_t vertex_distance(const Word& a, const Word& b) { return reduced_product(a.inverse(), b).size(); }

TreePoint normalized(Word vertex, Letter dir, double tau) {
  if (tau <= 0) return {std::move(vertex), Letter(0), 0.0};
  if (tau >= 1) return {reduced_product(vertex, Word{dir}), Letter(0), 0.0};
  return {std::move(vertex), dir, tau};
}

// Both points interior to one edge: returns b's parameter measured like a's.
std::optional<double> same_edge(const TreePoint& a, const TreePoint& b) {
  if (a.tau <= 0 || b.tau <= 0) return std::nullopt;
  if (a.vertex == b.vertex && a.dir == b.dir) return b.tau;
  if (a.vertex == reduced_product(b.vertex, Word{b.dir}) && b.vertex == reduced_product(a.vertex, Word{a.dir}))
    return 1.0 - b.tau;
  return std::nullopt;
}

}  // namespace

double tree_distance(const TreePoint& a, const TreePoint& b) {
  if (auto tb = same_edge(a, b)) return std::fabs(a.tau - *tb);
  double best = INFINITY;
  for (const auto& ea : tree_ends(a))
    for (const auto& eb : tree_ends(b))
      best = std::min(best, ea.offset + static_cast<double>(vertex_distance(ea.vertex, eb.vertex)) + eb.offset);
  return best;
}

TreePoint tree_geodesic(const TreePoint& a, const TreePoint& b, double t) {
  if (auto tb = same_edge(a, b)) return normalized(a.vertex, a.dir, a.tau + (*tb >= a.tau ? t : -t));
  TreeEnd ba{{}, 0}, bb{{}, 0};
  double best = INFINITY;
  for (const auto& ea : tree_ends(a))
    for (const auto& eb : tree_ends(b)) {
      double d = ea.offset + static_cast<double>(vertex_distance(ea.vertex, eb.vertex)) + eb.offset;
      if (d < best) {
        best = d;
        ba = ea;
        bb = eb;
      }
    }
  if (t <= ba.offset) {
    bool toward_vertex = ba.vertex == a.vertex;
    return normalized(a.vertex, a.dir, toward_vertex ? a.tau - t : a.tau + t);
  }
  double s = t - ba.offset;
  Word g = reduced_product(ba.vertex.inverse(), bb.vertex);
  if (s < static_cast<double>(g.size())) {
    auto k = static_cast<std::size_t>(std::floor(s));
    return normalized(reduced_product(ba.vertex, g.prefix(k)), g[k], s - static_cast<double>(k));
  }
  s -= static_cast<double>(g.size());
  if (b.tau <= 0) return b;
  return normalized(b.vertex, b.dir, bb.vertex == b.vertex ? s : 1.0 - s);
}

// ---------------------------------------------------------------------------
// Model spaces

ModelSpace::ModelSpace(std::vector<SpaceFactor> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) fail(ErrorCode::InvalidArgument, "model space needs at least one factor");
  for (const auto& f : factors_)
    if (f.dim == 0) fail(ErrorCode::InvalidArgument, "model space factor of dimension 0");
}

namespace {

double factor_distance(const SpaceFactor& f, const FactorPoint& a, const FactorPoint& b) {
  if (f.kind == SpaceFactor::Kind::Tree) return tree_distance(a.t, b.t);
  double s = 0;
  for (std::size_t i = 0; i < f.dim; ++i) s += (a.x[i] - b.x[i]) * (a.x[i] - b.x[i]);
  return std::sqrt(s);
}

}  // namespace

double ModelSpace::distance(const Point& a, const Point& b) const {
  if (factors_.size() == 1) return factor_distance(factors_[0], a[0], b[0]);
  double s = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    double d = factor_distance(factors_[i], a[i], b[i]);
    s += d * d;
  }
  return std::sqrt(s);
}

Point ModelSpace::geodesic(const Point& a, const Point& b, double t) const {
  double total = distance(a, b);
  if (total <= 0) return a;
  t = std::clamp(t, 0.0, total);
  Point out(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    double di = factor_distance(factors_[i], a[i], b[i]);
    double ti = factors_.size() == 1 ? t : t * di / total;
    if (factors_[i].kind == SpaceFactor::Kind::Tree) {
      out[i].t = tree_geodesic(a[i].t, b[i].t, std::min(ti, di));
    } else {
      out[i].x.resize(factors_[i].dim);
      double frac = di > 0 ? ti / di : 0;
      for (std::size_t k = 0; k < factors_[i].dim; ++k) out[i].x[k] = a[i].x[k] + frac * (b[i].x[k] - a[i].x[k]);
    }
  }
  return out;
}

std::string ModelSpace::describe() const {
  std::string s;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) s += " x ";
    s += factors_[i].kind == SpaceFactor::Kind::Tree ? "T" + std::to_string(2 * factors_[i].dim)
                                                     : "E" + std::to_string(factors_[i].dim);
  }
  return s;
}

ComparisonReport comparison_check(const ModelSpace& space, const Point& A, const Point& B, const Point& C,
                                  std::size_t samples, double tol) {
  const double c = space.distance(A, B), a = space.distance(B, C), b = space.distance(C, A);
  if (a > b + c + tol || b > a + c + tol || c > a + b + tol)
    fail(ErrorCode::Verification, "side lengths violate the triangle inequality");
  ComparisonReport rep;
  rep.max_excess = -INFINITY;
  rep.min_gap = INFINITY;
  rep.interior_excess = -INFINITY;
  // Comparison triangle: B' = (0,0), C' = (a,0), A' = (ax, ay).
  double ax = a > 0 ? (c * c + a * a - b * b) / (2 * a) : 0;
  double ay = std::sqrt(std::max(0.0, c * c - ax * ax));
  std::size_t n = std::max<std::size_t>(samples, 1);
  for (std::size_t k = 0; k <= n; ++k) {
    double t = a * static_cast<double>(k) / static_cast<double>(n);
    Point D = space.geodesic(B, C, t);
    double actual = space.distance(A, D);
    double model = std::hypot(ax - t, ay);
    rep.max_excess = std::max(rep.max_excess, actual - model);
    rep.min_gap = std::min(rep.min_gap, model - actual);
    if (k > 0 && k < n) rep.interior_excess = std::max(rep.interior_excess, actual - model);
    ++rep.samples;
  }
  rep.passes = rep.max_excess <= tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Actions

namespace {

std::vector<SpaceFactor> spaces_of(const std::vector<ActionFactor>& fs) {
  std::vector<SpaceFactor> out;
  for (const auto& f : fs) out.push_back(f.space);
  return out;
}

bool full_rank(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) return false;
    std::swap(m[piv], m[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      Rational f = m[r][col] / m[col][col];
      for (std::size_t k = col; k < n; ++k) m[r][k] -= f * m[col][k];
    }
  }
  return true;
}

}  // namespace

Rational quotient_diameter2(const std::vector<ActionFactor>& factors) {
  Rational total = 0;
  for (const auto& f : factors) {
    if (f.space.kind == SpaceFactor::Kind::Tree) {
      total += Rational(1, 4);
    } else {
      for (const auto& b : f.basis)
        for (const auto& x : b) total += x * x / 4;
    }
  }
  total.canonicalize();
  return total;
}

CocompactAction::CocompactAction(std::vector<ActionFactor> factors, std::optional<Rational> supplied_D2)
    : factors_(std::move(factors)), space_(spaces_of(factors_)) {
  for (auto& f : factors_) {
    if (f.space.kind != SpaceFactor::Kind::Euclidean) continue;
    if (f.basis.size() != f.space.dim)
      fail(ErrorCode::Unsupported, "lattice needs exactly dim generators for a cocompact action");
    for (const auto& b : f.basis)
      if (b.size() != f.space.dim) fail(ErrorCode::InvalidArgument, "lattice vector of wrong dimension");
    if (!full_rank(f.basis)) fail(ErrorCode::Unsupported, "lattice vectors are linearly dependent");
    if (f.basepoint.empty()) f.basepoint.assign(f.space.dim, Rational(0));
    if (f.basepoint.size() != f.space.dim) fail(ErrorCode::InvalidArgument, "basepoint of wrong dimension");
  }
  if (supplied_D2) {
    if (*supplied_D2 <= 0) fail(ErrorCode::InvalidArgument, "D must be positive");
    D2_ = *supplied_D2;
    supplied_ = true;
  } else {
    D2_ = quotient_diameter2(factors_);
  }
  D_ = std::sqrt(to_double(D2_));
}

ActionImage CocompactAction::identity() const {
  ActionImage g;
  for (const auto& f : factors_) {
    if (f.space.kind == SpaceFactor::Kind::Tree)
      g.tree.emplace_back();
    else
      g.lattice.emplace_back(f.space.dim, 0);
  }
  return g;
}

ActionImage CocompactAction::multiply(const ActionImage& a, const ActionImage& b) const {
  ActionImage g = a;
  for (std::size_t i = 0; i < g.lattice.size(); ++i)
    for (std::size_t k = 0; k < g.lattice[i].size(); ++k) g.lattice[i][k] += b.lattice[i][k];
  for (std::size_t i = 0; i < g.tree.size(); ++i) g.tree[i] = reduced_product(a.tree[i], b.tree[i]);
  return g;
}

ActionImage CocompactAction::inverse(const ActionImage& a) const {
  ActionImage g = a;
  for (auto& v : g.lattice)
    for (auto& x : v) x = -x;
  for (auto& w : g.tree) w = w.inverse();
  return g;
}

Rational CocompactAction::orbit_distance2(const ActionImage& g, const ActionImage& h) const {
  Rational total = 0;
  std::size_t li = 0, ti = 0;
  for (const auto& f : factors_) {
    if (f.space.kind == SpaceFactor::Kind::Tree) {
      auto d = static_cast<long>(vertex_distance(g.tree[ti], h.tree[ti]));
      total += d * d;
      ++ti;
    } else {
      const auto& a = g.lattice[li];
      const auto& b = h.lattice[li];
      for (std::size_t k = 0; k < f.space.dim; ++k) {
        Rational x = 0;
        for (std::size_t i = 0; i < f.space.dim; ++i)
          if (b[i] != a[i]) x += Rational(static_cast<long>(b[i] - a[i])) * f.basis[i][k];
        total += x * x;
      }
      ++li;
    }
  }
  return total;
}

Point CocompactAction::orbit_point(const ActionImage& g) const {
  Point p;
  std::size_t li = 0, ti = 0;
  for (const auto& f : factors_) {
    FactorPoint fp;
    if (f.space.kind == SpaceFactor::Kind::Tree) {
      fp.t = TreePoint{g.tree[ti++], Letter(0), 0.0};
    } else {
      const auto& c = g.lattice[li++];
      fp.x.resize(f.space.dim);
      for (std::size_t k = 0; k < f.space.dim; ++k) {
        Rational x = f.basepoint[k];
        for (std::size_t i = 0; i < f.space.dim; ++i)
          if (c[i] != 0) x += Rational(static_cast<long>(c[i])) * f.basis[i][k];
        fp.x[k] = to_double(x);
      }
    }
    p.push_back(std::move(fp));
  }
  return p;
}

namespace {

json factor_json(const ActionFactor& f) {
  json j;
  if (f.space.kind == SpaceFactor::Kind::Tree) {
    j["space"] = "tree";
    j["rank"] = f.space.dim;
    return j;
  }
  j["space"] = "euclidean";
  j["dim"] = f.space.dim;
  json lat = json::array();
  for (const auto& b : f.basis) {
    json row = json::array();
    for (const auto& x : b) row.push_back(to_string(x));
    lat.push_back(row);
  }
  j["lattice"] = lat;
  json bp = json::array();
  for (const auto& x : f.basepoint) bp.push_back(to_string(x));
  j["basepoint"] = bp;
  return j;
}

Rational json_rational(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return make_rational(v.get<std::int64_t>());
  if (v.is_number()) return parse_rational(v.dump());
  fail(ErrorCode::Parse, "expected a number or rational string, got " + v.dump());
}

ActionFactor parse_factor(const json& j) {
  ActionFactor f;
  std::string space = j.at("space").get<std::string>();
  if (space == "tree") {
    f.space = {SpaceFactor::Kind::Tree, j.at("rank").get<std::size_t>()};
  } else if (space == "euclidean") {
    f.space = {SpaceFactor::Kind::Euclidean, j.at("dim").get<std::size_t>()};
    if (j.contains("lattice")) {
      for (const auto& row : j.at("lattice")) {
        std::vector<Rational> b;
        for (const auto& x : row) b.push_back(json_rational(x));
        f.basis.push_back(std::move(b));
      }
    } else {
      for (std::size_t i = 0; i < f.space.dim; ++i) {
        std::vector<Rational> b(f.space.dim, Rational(0));
        b[i] = 1;
        f.basis.push_back(std::move(b));
      }
    }
    if (j.contains("basepoint"))
      for (const auto& x : j.at("basepoint")) f.basepoint.push_back(json_rational(x));
  } else {
    fail(ErrorCode::Unsupported, "unsupported space '" + space + "'");
  }
  return f;
}

}  // namespace

std::string CocompactAction::to_json() const {
  json j;
  if (factors_.size() == 1) {
    j = factor_json(factors_[0]);
  } else {
    j["space"] = "product";
    j["factors"] = json::array();
    for (const auto& f : factors_) j["factors"].push_back(factor_json(f));
  }
  if (supplied_)
    j["D2"] = to_string(D2_);
  else
    j["D"] = "auto";
  return j.dump();
}

CocompactAction parse_action(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("action config: ") + e.what());
  }
  try {
    std::vector<ActionFactor> factors;
    if (j.at("space").get<std::string>() == "product") {
      for (const auto& f : j.at("factors")) factors.push_back(parse_factor(f));
    } else {
      factors.push_back(parse_factor(j));
    }
    std::optional<Rational> D2;
    if (j.contains("D2")) {
      D2 = json_rational(j.at("D2"));
    } else if (j.contains("D") && !(j.at("D").is_string() && j.at("D").get<std::string>() == "auto")) {
      Rational d = json_rational(j.at("D"));
      D2 = d * d;
    }
    return CocompactAction(std::move(factors), D2);
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("action config: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Derived generating set

namespace {

// Positive representative: first nonzero lattice coordinate positive, else the
// shortlex-smaller tree word in the first nontrivial tree factor.
bool is_positive(const ActionImage& g) {
  for (const auto& v : g.lattice)
    for (auto x : v)
      if (x != 0) return x > 0;
  for (const auto& w : g.tree)
    if (!w.empty()) return !shortlex_less(w.inverse(), w);
  return true;
}

bool image_order(const ActionImage& a, const ActionImage& b) {
  for (std::size_t i = 0; i < a.lattice.size(); ++i)
    if (a.lattice[i] != b.lattice[i]) return a.lattice[i] > b.lattice[i];
  for (std::size_t i = 0; i < a.tree.size(); ++i)
    if (!(a.tree[i] == b.tree[i])) return shortlex_less(a.tree[i], b.tree[i]);
  return false;
}

void enumerate_lattice(const ActionFactor& f, const Rational& R2, std::vector<std::vector<std::int64_t>>& out) {
  const std::size_t n = f.space.dim;
  // |k_i| <= R sqrt((G^-1)_ii) for |Bk| <= R, with Gram matrix G = B B^T.
  std::vector<std::vector<double>> G(n, std::vector<double>(n, 0)), inv(n, std::vector<double>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) G[i][j] += to_double(f.basis[i][k]) * to_double(f.basis[j][k]);
      inv[i][j] = i == j ? 1 : 0;
    }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(G[r][c]) > std::fabs(G[piv][c])) piv = r;
    std::swap(G[c], G[piv]);
    std::swap(inv[c], inv[piv]);
    double d = G[c][c];
    for (std::size_t k = 0; k < n; ++k) {
      G[c][k] /= d;
      inv[c][k] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      double m = G[r][c];
      for (std::size_t k = 0; k < n; ++k) {
        G[r][k] -= m * G[c][k];
        inv[r][k] -= m * inv[c][k];
      }
    }
  }
  double R = std::sqrt(to_double(R2));
  std::vector<std::int64_t> bound(n);
  for (std::size_t i = 0; i < n; ++i)
    bound[i] = static_cast<std::int64_t>(std::floor(R * std::sqrt(std::max(0.0, inv[i][i])))) + 1;

  std::vector<std::int64_t> k(n);
  for (std::size_t i = 0; i < n; ++i) k[i] = -bound[i];
  for (;;) {
    Rational len2 = 0;
    for (std::size_t c = 0; c < n; ++c) {
      Rational x = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (k[i] != 0) x += Rational(static_cast<long>(k[i])) * f.basis[i][c];
      len2 += x * x;
    }
    if (len2 < R2) out.push_back(k);
    std::size_t i = 0;
    while (i < n && k[i] == bound[i]) {
      k[i] = -bound[i];
      ++i;
    }
    if (i == n) break;
    ++k[i];
  }
}

void enumerate_tree(std::size_t rank, const Rational& R2, std::vector<Word>& out) {
  out.push_back(Word{});
  std::size_t begin = 0;
  for (std::size_t len = 1; Rational(static_cast<unsigned long>(len * len)) < R2; ++len) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (std::uint32_t c = 0; c < 2 * rank; ++c) {
        const Word& w = out[i];
        if (!w.empty() && w.back().inverse() == Letter(c)) continue;
        Word v = w;
        v.push_back(Letter(c));
        out.push_back(std::move(v));
      }
    begin = end;
  }
}

}  // namespace

std::optional<Letter> DerivedGeneratingSet::letter_for(const ActionImage& g) const {
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (generators[i] == g) return Letter::of(static_cast<std::uint32_t>(i), false);
  }
  // Inverses: negate lattice parts and invert tree parts.
  ActionImage inv = g;
  for (auto& v : inv.lattice)
    for (auto& x : v) x = -x;
  for (auto& w : inv.tree) w = w.inverse();
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (generators[i] == inv) return Letter::of(static_cast<std::uint32_t>(i), true);
  return std::nullopt;
}

ActionImage DerivedGeneratingSet::image(const Word& w, const CocompactAction& action) const {
  ActionImage g = action.identity();
  std::size_t li = 0, ti = 0;
  for (std::size_t k = 0; k < action.factors().size(); ++k) {
    if (action.factors()[k].space.kind == SpaceFactor::Kind::Tree)
      g.tree[ti++] = backend->free_image(k, w);
    else
      g.lattice[li++] = backend->abelian_image(k, w);
  }
  return g;
}

DerivedGeneratingSet build_generating_set(const CocompactAction& action) {
  const Rational R2 = 64 * action.D2();  // d(p, gp) < 8D
  // Per-factor candidates, then products whose squared distances sum below R2.
  std::vector<ActionImage> all{action.identity()};
  std::size_t li = 0, ti = 0;
  for (const auto& f : action.factors()) {
    std::vector<ActionImage> next;
    if (f.space.kind == SpaceFactor::Kind::Tree) {
      std::vector<Word> words;
      enumerate_tree(f.space.dim, R2, words);
      for (const auto& g : all)
        for (const auto& w : words) {
          ActionImage h = g;
          h.tree[ti] = w;
          if (action.orbit_distance2(action.identity(), h) < R2) next.push_back(std::move(h));
        }
      ++ti;
    } else {
      std::vector<std::vector<std::int64_t>> vecs;
      enumerate_lattice(f, R2, vecs);
      for (const auto& g : all)
        for (const auto& v : vecs) {
          ActionImage h = g;
          h.lattice[li] = v;
          if (action.orbit_distance2(action.identity(), h) < R2) next.push_back(std::move(h));
        }
      ++li;
    }
    all = std::move(next);
  }

  DerivedGeneratingSet set;
  set.overlap_count = all.size();
  std::vector<std::pair<Rational, ActionImage>> gens;
  for (const auto& g : all) {
    if (g == action.identity() || !is_positive(g)) continue;
    Rational d2 = action.orbit_distance2(action.identity(), g);
    if (d2 > 144 * action.D2()) fail(ErrorCode::Verification, "generator farther than 12D from the basepoint");
    gens.emplace_back(d2, g);
  }
  if (gens.empty()) fail(ErrorCode::InvalidArgument, "derived generating set is empty; D is too small");
  std::sort(gens.begin(), gens.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return image_order(a.second, b.second);
  });

  std::vector<std::string> names;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    names.push_back("s" + std::to_string(i));
    set.generators.push_back(gens[i].second);
  }
  std::vector<Factor> factors;
  li = ti = 0;
  for (const auto& f : action.factors()) {
    Factor fac;
    fac.rank = f.space.dim;
    if (f.space.kind == SpaceFactor::Kind::Tree) {
      fac.kind = Factor::Kind::Free;
      for (const auto& g : set.generators) fac.free_images.push_back(g.tree[ti]);
      ++ti;
    } else {
      fac.kind = Factor::Kind::Abelian;
      for (const auto& g : set.generators) fac.abelian_images.push_back(g.lattice[li]);
      ++li;
    }
    factors.push_back(std::move(fac));
  }
  set.backend = std::make_shared<const Backend>(Backend::from_images(Alphabet(names), std::move(factors)));
  return set;
}

SandwichReport qi_sandwich_check(const CocompactAction& action, const DerivedGeneratingSet& set,
                                 const CayleyBall& ball, std::size_t samples, std::uint64_t seed) {
  SandwichReport rep;
  rep.worst_lower_margin = INFINITY;
  rep.worst_upper_margin = std::numeric_limits<long>::max();
  std::vector<ActionImage> images;
  images.reserve(ball.size());
  for (ElementId g = 0; g < ball.size(); ++g) images.push_back(set.image(ball.element(g).rep, action));

  auto check = [&](ElementId g, ElementId h) {
    auto q = ball.quotient(g, h);
    if (!q) return false;
    unsigned ds = ball.element(*q).distance;
    Rational d2 = action.orbit_distance2(images[g], images[h]);
    bool lower = d2 <= 144 * action.D2() * Rational(static_cast<unsigned long>(ds) * ds);
    mpz_class fl = floor_sqrt(d2 / action.D2());
    bool upper = mpz_class(ds) <= fl + 1;
    ++rep.pairs;
    if (!lower || !upper) ++rep.violations;
    double d = std::sqrt(to_double(d2));
    rep.worst_lower_margin = std::min(rep.worst_lower_margin, 12 * action.D() * ds - d);
    rep.worst_upper_margin = std::min(rep.worst_upper_margin, static_cast<long>(fl.get_si()) + 1 - static_cast<long>(ds));
    return true;
  };
  if (samples == 0) {
    for (ElementId g = 0; g < ball.size(); ++g)
      for (ElementId h = 0; h < ball.size(); ++h) check(g, h);
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<ElementId> pick(0, static_cast<ElementId>(ball.size() - 1));
    // Pairs whose quotient leaves the ball have no known d_S; draw again.
    for (std::size_t tries = 0; rep.pairs < samples && tries < 50 * samples; ++tries) {
      ElementId g = pick(rng);
      ElementId h = pick(rng);
      check(g, h);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Certifier

Cat0Certificate certify_cat0_word(const CocompactAction& action, const DerivedGeneratingSet& set,
                                  const CayleyBall& ball, const Word& w) {
  const Backend& backend = *set.backend;
  if (!backend.is_identity(w)) fail(ErrorCode::NotIdentity, "word is not trivial in the group");
  const double D = action.D();
  constexpr double tol = 1e-9;

  std::vector<ElementId> ids = ball.walk(w);
  std::vector<Point> orbit(ball.size());
  for (ElementId g = 0; g < ball.size(); ++g) orbit[g] = action.orbit_point(set.image(ball.element(g).rep, action));
  const Point p = action.basepoint();
  const ModelSpace& X = action.space();

  Cat0Certificate out;
  out.D2 = action.D2();
  out.action_json = action.to_json();
  out.cert.word = w;
  out.cert.convention = RelatorConvention::BoundedIdentity;
  out.cert.max_relator_length = 46;

  // Samples p^j_i and snapped elements g^j_i for every prefix.
  std::vector<std::vector<Point>> samples(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    Cat0TraceRow row;
    row.row = i;
    Rational d2 = action.orbit_distance2(action.identity(), set.image(ball.element(ids[i]).rep, action));
    row.distance = std::sqrt(to_double(d2));
    std::size_t n = floor_sqrt(d2 / action.D2()).get_ui();
    const Point& q = orbit[ids[i]];
    for (std::size_t j = 0; j <= n; ++j) samples[i].push_back(X.geodesic(p, q, static_cast<double>(j) * D));
    samples[i].push_back(q);
    row.samples = samples[i].size();
    for (std::size_t j = 0; j < samples[i].size(); ++j) {
      ElementId chosen = kNoElement;
      if (j == 0) {
        chosen = ball.identity();
      } else if (j + 1 == samples[i].size()) {
        chosen = ids[i];
      } else {
        for (ElementId g = 0; g < ball.size(); ++g)
          if (X.distance(orbit[g], samples[i][j]) <= 2 * D + tol) {
            chosen = g;
            break;
          }
      }
      if (chosen == kNoElement)
        throw OutOfBallError("no orbit point within 2D of a sample; enlarge the derived ball", ball.radius() + 1);
      double snap = X.distance(orbit[chosen], samples[i][j]);
      if (snap > 2 * D + tol) fail(ErrorCode::Verification, "snapped orbit point farther than 2D from its sample");
      row.elements.push_back(chosen);
      row.snap.push_back(snap);
    }
    out.trace.push_back(std::move(row));
  }
  Rational sum = 0;
  for (std::size_t i = 1; i < ids.size(); ++i) sum += ball.element(ids[i]).distance + 1;
  out.bound = 24 * sum;
  out.sample_bound = 0;
  for (std::size_t i = 1; i < ids.size(); ++i) out.sample_bound += 2 * static_cast<long>(out.trace[i].samples - 1);

  auto leg = [&](ElementId a, ElementId b) -> Word {
    auto q = ball.quotient(a, b);
    if (!q) throw OutOfBallError("leg between snapped elements leaves the derived ball", ball.radius() + 1);
    return ball.element(*q).rep;
  };

  // Vertical legs along each row; P_i is their concatenation.
  std::vector<std::vector<Word>> vertical(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto& els = out.trace[i].elements;
    for (std::size_t j = 0; j + 1 < els.size(); ++j) {
      Word v = leg(els[j], els[j + 1]);
      if (v.size() > 6) fail(ErrorCode::Verification, "vertical leg of length " + std::to_string(v.size()) + " > 6");
      out.max_vertical = std::max(out.max_vertical, v.size());
      out.trace[i].vertical.push_back(v.size());
      vertical[i].push_back(std::move(v));
    }
  }

  const double chain_limit = 12 * D + tol;
  for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
    const auto& ea = out.trace[i].elements;
    const auto& eb = out.trace[i + 1].elements;
    const std::size_t J = std::max(ea.size(), eb.size()) - 1;  // last padded index
    auto at = [](const std::vector<ElementId>& e, std::size_t j) { return e[std::min(j, e.size() - 1)]; };
    auto sample = [&](std::size_t row, std::size_t j) -> const Point& {
      return samples[row][std::min(j, samples[row].size() - 1)];
    };

    std::vector<Word> horiz(J + 1);
    for (std::size_t j = 0; j <= J; ++j) {
      double chain = X.distance(sample(i, j), sample(i + 1, j));
      out.trace[i].max_chain = std::max(out.trace[i].max_chain, chain);
      if (chain > chain_limit)
        fail(ErrorCode::Verification, "sample chain distance exceeds 12D at row " + std::to_string(i));
      if (j == 0) continue;
      horiz[j] = j == J ? Word{w[i]} : leg(at(ea, j), at(eb, j));
      if (horiz[j].size() > 17)
        fail(ErrorCode::Verification, "horizontal leg of length " + std::to_string(horiz[j].size()) + " > 17");
      out.max_horizontal = std::max(out.max_horizontal, horiz[j].size());
      out.trace[i].horizontal.push_back(horiz[j].size());
    }

    auto vert = [&](std::size_t row, std::size_t j) -> Word {
      return j < vertical[row].size() ? vertical[row][j] : Word{};
    };
    std::vector<Word> prefix(J + 1);  // v^0 ... v^{j-1} along row i
    for (std::size_t j = 1; j <= J; ++j) prefix[j] = reduced_product(prefix[j - 1], vert(i, j - 1).reduced());
    for (std::size_t j = J; j-- > 0;) {
      Word loop = vert(i, j) * horiz[j + 1] * vert(i + 1, j).inverse() * horiz[j].inverse();
      loop = loop.reduced();
      if (loop.empty()) continue;
      if (loop.size() > 46) fail(ErrorCode::Verification, "loop of length " + std::to_string(loop.size()) + " > 46");
      out.max_loop = std::max(out.max_loop, loop.size());
      out.cert.entries.push_back({prefix[j], std::move(loop)});
    }
  }
  return out;
}

VerifyResult verify_cat0(const Cat0Certificate& cert, const Backend& backend, const CayleyBall* ball) {
  if (cert.cert.convention != RelatorConvention::BoundedIdentity || cert.cert.max_relator_length != 46)
    return VerifyResult::failure("certificate must use relators of length <= 46");
  Presentation bare(backend.alphabet(), {});
  VerifyResult r = verify_certificate(bare, cert.cert, &backend);
  if (!r) return r;
  if (Rational(static_cast<unsigned long>(cert.count())) > cert.bound)
    return VerifyResult::failure("count " + std::to_string(cert.count()) + " exceeds the stated bound " +
                                 to_string(cert.bound));
  if (ball) {
    Rational sum = 0;
    try {
      for (unsigned d : prefix_distances(*ball, cert.cert.word)) sum += d + 1;
    } catch (const OutOfBallError&) {
      return VerifyResult::failure("word leaves the verification ball");
    }
    if (24 * sum != cert.bound)
      return VerifyResult::failure("stated bound differs from 24 sum(d+1) = " + to_string(Rational(24 * sum)));
  }
  return {};
}

}  // namespace ggt
