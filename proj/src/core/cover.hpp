#pragma once

// Balls in the universal cover of the presentation 2-complex, pulled-back
// 2-cochains and their primitives: one from a combing plus fillings, one from
// the weighted minimax linear program. Growth of the primitives' sup norms is
// fitted on a log-log scale.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "area.hpp"
#include "cayley.hpp"
#include "lp.hpp"
#include "radial.hpp"

namespace ggt {

struct CoverEdge {
  ElementId from = 0;
  ElementId to = 0;  // from * gen
  std::uint32_t gen = 0;
};

struct CellSide {
  std::size_t edge = 0;
  int sign = 1;
};

struct CoverCell {
  std::size_t relator = 0;
  ElementId base = 0;
  std::vector<ElementId> vertices;  // base * r(k), k = 0..|r|-1
  std::vector<CellSide> boundary;
  bool interior = false;
};

class CoverBall {
 public:
  const CayleyBall& ball() const { return *ball_; }
  const Presentation& presentation() const { return presentation_; }
  unsigned radius() const { return radius_; }
  std::size_t vertices() const { return vertex_count_; }
  const std::vector<CoverEdge>& edges() const { return edges_; }
  const std::vector<CoverCell>& cells() const { return cells_; }
  std::vector<std::size_t> interior_cells() const;

  unsigned distance(ElementId v) const { return ball_->element(v).distance; }
  /// The edge traversed by letter l from v, with orientation.
  std::optional<CellSide> side(ElementId v, Letter l) const;
  /// Both endpoints at distance <= radius - 1.
  bool interior_edge(std::size_t e) const;
  /// Anchor distance of an edge: its endpoint nearer the identity.
  unsigned anchor(std::size_t e) const;

 private:
  friend CoverBall build_cover_ball(const Presentation&, std::shared_ptr<const CayleyBall>, unsigned);
  std::shared_ptr<const CayleyBall> ball_;
  Presentation presentation_;
  unsigned radius_ = 0;
  std::size_t vertex_count_ = 0;
  std::vector<CoverEdge> edges_;
  std::vector<std::size_t> edge_at_;  // vertex * gens + gen -> edge id, or npos
  std::vector<CoverCell> cells_;
};

/// Uses the elements of `ball` within `radius` (default: the ball radius).
CoverBall build_cover_ball(const Presentation& p, std::shared_ptr<const CayleyBall> ball,
                           unsigned radius = ~0u);

/// Value per relator; every lift of relator cell r gets omega[r].
struct InvariantTwoCochain {
  std::vector<Rational> values;
  Rational operator()(std::size_t relator) const { return values.at(relator); }
};

/// "r1=1,r2=1/2"; unspecified relators get 0.
InvariantTwoCochain parse_two_cochain(const std::string& text, const Presentation& p);

using OneCochain = std::vector<Rational>;  // per edge of the cover ball

std::vector<Rational> coboundary(const CoverBall& cb, const OneCochain& eta);

/// max over interior edges of |eta(e)| / f(anchor(e)).
Rational weighted_sup(const CoverBall& cb, const OneCochain& eta, const WeightFn& f);

enum class Filler { Dehn, Grid, Search };
std::string filler_name(Filler f);
Filler parse_filler(const std::string& name);
/// Dehn for small cancellation, grid for free abelian, search otherwise.
Filler default_filler(const Backend& backend);

struct SearchCaps {
  std::size_t cap_len = 16;
  std::size_t cap_states = 200000;
};

/// eta(u -> us) is the omega-content of a filling of rep(u) s rep(us)^-1.
/// Throws Verification unless d(eta) = omega on every interior cell.
OneCochain combing_primitive(const CoverBall& cb, const Backend& backend, const InvariantTwoCochain& omega,
                             Filler filler, const SearchCaps& caps = {});

/// A closed edge path: start vertex and the word it reads.
struct CoverLoop {
  ElementId start = 0;
  Word word;
};

/// max over loops of |sum eta| / sum_{x on loop} f(d(x, e)). Throws on open paths.
Rational loop_functional_check(const CoverBall& cb, const OneCochain& eta, const std::vector<CoverLoop>& loops,
                               const WeightFn& f);

struct MinimaxResult {
  OneCochain eta;
  Rational objective;  // least t with d(eta) = omega and |eta(e)| <= t f(anchor(e))
  std::size_t rows = 0;
  std::size_t columns = 0;
  LpSolution lp;
};

/// Constraints on `cells` (default: all interior cells).
MinimaxResult minimax_primitive(const CoverBall& cb, const InvariantTwoCochain& omega, const WeightFn& f,
                                const std::vector<std::size_t>* cells = nullptr);

/// |sum_c omega(c)| / sum_e |coefficient of e in the boundary| f(anchor(e)).
Rational chain_ratio(const CoverBall& cb, const std::vector<std::size_t>& cells, const InvariantTwoCochain& omega,
                     const WeightFn& f);

/// max of chain_ratio over the subballs of interior cells within rho of e, rho < radius.
Rational stokes_lower_bound(const CoverBall& cb, const InvariantTwoCochain& omega,
                            const WeightFn& f = WeightFn::power(1));

struct GrowthFit {
  double slope = 0;
  double intercept = 0;
  double residual = 0;  // root mean square of the log residuals
  bool shifted = false;  // fitted value + 1 because some value was <= 0
};

GrowthFit growth_exponent(const std::vector<std::pair<double, double>>& points);

struct GrowthRow {
  unsigned radius = 0;
  std::optional<Rational> sup_eta;
  std::optional<Rational> lp_objective;
  Rational stokes;
  std::size_t interior_cells = 0;
};

enum class GrowthMethod { Combing, Lp, Both };
GrowthMethod parse_growth_method(const std::string& name);

std::vector<GrowthRow> cover_growth(const Presentation& p, std::shared_ptr<const Backend> backend,
                                    const InvariantTwoCochain& omega, const std::vector<unsigned>& radii,
                                    const WeightFn& f, GrowthMethod method, Filler filler, const BallProvider& balls,
                                    const SearchCaps& caps = {}, unsigned jobs = 1);

/// radius,sup_eta,lp_objective,stokes_lb followed by floating approximations.
std::string growth_csv(const std::vector<GrowthRow>& rows);

}  // namespace ggt
