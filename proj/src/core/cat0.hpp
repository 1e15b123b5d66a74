#pragma once

// Model CAT(0) spaces (Euclidean spaces, regular trees and their products),
// cocompact actions of Z^n and F_n on them, the derived generating set
// S = {g : g(B(p,4D)) meets B(p,4D)}, and the orbit-sampling certifier that
// writes an identity word over S as a product of conjugated loops of length <= 46.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "area.hpp"
#include "cayley.hpp"
#include "rational.hpp"

namespace ggt {

/// A point on the Cayley tree of F_n: tau in [0,1) along the edge from
/// `vertex` to vertex*dir. tau == 0 is the vertex itself.
struct TreePoint {
  Word vertex;
  Letter dir;
  double tau = 0;
};

struct SpaceFactor {
  enum class Kind { Euclidean, Tree } kind = Kind::Euclidean;
  std::size_t dim = 0;  // Euclidean dimension, or free rank of the tree
};

struct FactorPoint {
  std::vector<double> x;  // Euclidean
  TreePoint t;            // Tree
};

using Point = std::vector<FactorPoint>;

class ModelSpace {
 public:
  explicit ModelSpace(std::vector<SpaceFactor> factors);
  static ModelSpace euclidean(std::size_t dim) { return ModelSpace({{SpaceFactor::Kind::Euclidean, dim}}); }
  static ModelSpace tree(std::size_t rank) { return ModelSpace({{SpaceFactor::Kind::Tree, rank}}); }

  const std::vector<SpaceFactor>& factors() const { return factors_; }
  double distance(const Point& a, const Point& b) const;
  /// Point at arclength t from a toward b, 0 <= t <= d(a, b).
  Point geodesic(const Point& a, const Point& b, double t) const;
  std::string describe() const;

 private:
  std::vector<SpaceFactor> factors_;
};

double tree_distance(const TreePoint& a, const TreePoint& b);
TreePoint tree_geodesic(const TreePoint& a, const TreePoint& b, double t);

struct ComparisonReport {
  bool passes = true;
  std::size_t samples = 0;
  double max_excess = 0;  // max of d(A,D) - d(A',D'); <= tol when passing
  double min_gap = 0;     // min of d(A',D') - d(A,D)
  double interior_excess = 0;  // max of d(A,D) - d(A',D') over samples strictly inside BC
};

/// Samples D on BC uniformly in arclength and checks d(A,D) <= d(A',D') + tol
/// against the Euclidean comparison triangle.
ComparisonReport comparison_check(const ModelSpace& space, const Point& A, const Point& B, const Point& C,
                                  std::size_t samples, double tol);

/// Group element image in each action factor.
struct ActionImage {
  std::vector<std::vector<std::int64_t>> lattice;  // per Euclidean factor: coefficients
  std::vector<Word> tree;                          // per Tree factor: reduced word
  bool operator==(const ActionImage&) const = default;
};

struct ActionFactor {
  SpaceFactor space;
  std::vector<std::vector<Rational>> basis;  // Euclidean: generator translation vectors
  std::vector<Rational> basepoint;           // Euclidean
};

class CocompactAction {
 public:
  /// supplied_D2: an upper bound for D^2 replacing the computed one.
  CocompactAction(std::vector<ActionFactor> factors, std::optional<Rational> supplied_D2);

  const std::vector<ActionFactor>& factors() const { return factors_; }
  const ModelSpace& space() const { return space_; }
  /// Upper bound used for D, squared and exact.
  const Rational& D2() const { return D2_; }
  double D() const { return D_; }
  bool D_supplied() const { return supplied_; }

  ActionImage identity() const;
  ActionImage multiply(const ActionImage& a, const ActionImage& b) const;
  ActionImage inverse(const ActionImage& a) const;
  /// d(g p, h p)^2, exact.
  Rational orbit_distance2(const ActionImage& g, const ActionImage& h) const;
  /// g(p) as a point.
  Point orbit_point(const ActionImage& g) const;
  Point basepoint() const { return orbit_point(identity()); }

  std::string to_json() const;

 private:
  std::vector<ActionFactor> factors_;
  ModelSpace space_;
  Rational D2_;
  double D_ = 0;
  bool supplied_ = false;
};

/// {"space": "euclidean", "dim": 2, "lattice": [[1,0],[0,1]], "basepoint": [0,0], "D": "auto"},
/// {"space": "tree", "rank": 2, "D": "auto"}, or {"space": "product", "factors": [...], "D": ...}.
CocompactAction parse_action(const std::string& json_text);

/// Squared upper bound for the quotient diameter: sum |b_i|^2 / 4 for a
/// lattice, 1/4 for a tree with unit edges, summed over product factors.
Rational quotient_diameter2(const std::vector<ActionFactor>& factors);

struct DerivedGeneratingSet {
  std::vector<ActionImage> generators;  // one per alphabet generator; inverses are implicit
  std::size_t overlap_count = 0;        // |{g : g(Omega) meets Omega}|, including e
  std::shared_ptr<const Backend> backend;

  /// Letter whose image is `g`, if g or g^-1 is a generator.
  std::optional<Letter> letter_for(const ActionImage& g) const;
  ActionImage image(const Word& w, const CocompactAction& action) const;
};

/// S = {g != e : d(p, g p) < 8D}, named s0, s1, ... with inverses S0, S1, ...
DerivedGeneratingSet build_generating_set(const CocompactAction& action);

struct SandwichReport {
  std::size_t pairs = 0;
  std::size_t violations = 0;
  double worst_lower_margin = 0;  // min of 12 D d_S - d
  long worst_upper_margin = 0;    // min of floor(d/D) + 1 - d_S
};

/// d(g1 p, g2 p) / 12D <= d_S(g1, g2) <= floor(d(g1 p, g2 p) / D) + 1 on
/// `samples` pseudo-random pairs of ball elements (all pairs if samples == 0).
/// Only pairs with g1^-1 g2 inside the ball are evaluated and counted.
SandwichReport qi_sandwich_check(const CocompactAction& action, const DerivedGeneratingSet& set,
                                 const CayleyBall& ball, std::size_t samples, std::uint64_t seed);

struct Cat0TraceRow {
  std::size_t row = 0;
  double distance = 0;             // d(p, w(i) p)
  std::size_t samples = 0;         // [d/D] + 2 including the endpoint
  std::vector<ElementId> elements;  // g^j_i
  std::vector<double> snap;         // d(g^j_i p, p^j_i)
  std::vector<std::size_t> vertical;    // leg lengths to row's next sample
  std::vector<std::size_t> horizontal;  // leg lengths to the next row (padded)
  double max_chain = 0;                 // max_j d(p^j_i, p^j_{i+1})
};

struct Cat0Certificate {
  AreaCertificate cert;  // convention R_46
  Rational D2;
  Rational bound;         // 24 sum (d_S + 1)
  Rational sample_bound;  // 2 sum ([d/D] + 1)
  std::size_t max_loop = 0;
  std::size_t max_horizontal = 0;
  std::size_t max_vertical = 0;
  std::vector<Cat0TraceRow> trace;
  std::string action_json;

  std::size_t count() const { return cert.count(); }
};

Cat0Certificate certify_cat0_word(const CocompactAction& action, const DerivedGeneratingSet& set,
                                  const CayleyBall& ball, const Word& w);

/// Product identity, loops are identity words of length <= 46, count <= bound;
/// with a ball, the bound must match 24 sum (d_S + 1) recomputed on it.
VerifyResult verify_cat0(const Cat0Certificate& cert, const Backend& backend, const CayleyBall* ball = nullptr);

}  // namespace ggt
