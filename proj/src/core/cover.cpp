#include "cover.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "error.hpp"
#include "parallel.hpp"

namespace ggt {

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

// Smallest rotation period of w.
std::size_t period(const Word& w) {
  for (std::size_t p = 1; p < w.size(); ++p) {
    if (w.size() % p != 0) continue;
    if (w.rotated(p) == w) return p;
  }
  return w.size();
}

std::string approx(const std::optional<Rational>& q) {
  if (!q) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", to_double(*q));
  return buf;
}

Rational abs_q(const Rational& q) { return q < 0 ? Rational(-q) : q; }

}  // namespace

std::vector<std::size_t> CoverBall::interior_cells() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cells_.size(); ++i)
    if (cells_[i].interior) out.push_back(i);
  return out;
}

std::optional<CellSide> CoverBall::side(ElementId v, Letter l) const {
  if (v >= vertex_count_) return std::nullopt;
  const std::size_t gens = presentation_.alphabet().generators();
  if (!l.inverted()) {
    std::size_t e = edge_at_[static_cast<std::size_t>(v) * gens + l.gen()];
    if (e == npos) return std::nullopt;
    return CellSide{e, 1};
  }
  ElementId u = ball_->neighbor(v, l);
  if (u == kNoElement || u >= vertex_count_) return std::nullopt;
  std::size_t e = edge_at_[static_cast<std::size_t>(u) * gens + l.gen()];
  if (e == npos) return std::nullopt;
  return CellSide{e, -1};
}

bool CoverBall::interior_edge(std::size_t e) const {
  const auto& ed = edges_.at(e);
  return distance(ed.from) + 1 <= radius_ && distance(ed.to) + 1 <= radius_;
}

unsigned CoverBall::anchor(std::size_t e) const {
  const auto& ed = edges_.at(e);
  return std::min(distance(ed.from), distance(ed.to));
}

CoverBall build_cover_ball(const Presentation& p, std::shared_ptr<const CayleyBall> ball, unsigned radius) {
  if (!ball) fail(ErrorCode::InvalidArgument, "no ball");
  if (!(ball->backend().alphabet() == p.alphabet()))
    fail(ErrorCode::InvalidArgument, "presentation and ball use different alphabets");
  if (radius == ~0u) radius = ball->radius();
  if (radius > ball->radius()) throw OutOfBallError("cover radius exceeds the ball", radius);

  CoverBall cb;
  cb.ball_ = ball;
  cb.presentation_ = p;
  cb.radius_ = radius;
  // BFS order: the elements within `radius` are a prefix of the ids.
  std::size_t n = 0;
  while (n < ball->size() && ball->element(static_cast<ElementId>(n)).distance <= radius) ++n;
  cb.vertex_count_ = n;

  const std::size_t gens = p.alphabet().generators();
  cb.edge_at_.assign(n * gens, npos);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::uint32_t g = 0; g < gens; ++g) {
      ElementId h = ball->neighbor(static_cast<ElementId>(v), Letter::of(g, false));
      if (h == kNoElement || h >= n) continue;
      cb.edge_at_[v * gens + g] = cb.edges_.size();
      cb.edges_.push_back({static_cast<ElementId>(v), h, g});
    }
  }

  for (std::size_t ri = 0; ri < p.relators().size(); ++ri) {
    const Word& r = p.relators()[ri];
    const std::size_t per = period(r);
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<ElementId> verts{static_cast<ElementId>(v)};
      bool inside = true;
      for (std::size_t k = 0; k + 1 < r.size() && inside; ++k) {
        ElementId next = ball->neighbor(verts.back(), r[k]);
        if (next == kNoElement || next >= n) inside = false;
        else verts.push_back(next);
      }
      if (!inside) continue;
      // Lifts starting at base*r[0..j) with j a multiple of the period are the
      // same cell; keep the one with the least base.
      bool least = true;
      for (std::size_t j = per; j < r.size(); j += per)
        if (verts[j] < verts[0]) least = false;
      if (!least) continue;
      CoverCell cell;
      cell.relator = ri;
      cell.base = verts[0];
      cell.vertices = verts;
      cell.interior = true;
      for (std::size_t k = 0; k < r.size(); ++k) {
        auto s = cb.side(verts[k], r[k]);
        if (!s) fail(ErrorCode::Verification, "cell boundary leaves the cover ball");
        cell.boundary.push_back(*s);
        if (cb.distance(verts[k]) + 1 > radius) cell.interior = false;
      }
      cb.cells_.push_back(std::move(cell));
    }
  }
  return cb;
}

InvariantTwoCochain parse_two_cochain(const std::string& text, const Presentation& p) {
  InvariantTwoCochain out;
  out.values.assign(p.relators().size(), Rational(0));
  if (text.find('=') == std::string::npos) {
    Rational q = parse_rational(text);
    for (auto& v : out.values) v = q;
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos || item.size() < 2 || item[0] != 'r')
      fail(ErrorCode::Parse, "expected r<i>=<rational> in 2-cochain: " + item);
    std::size_t idx = 0;
    try {
      idx = std::stoul(item.substr(1, eq - 1));
    } catch (const std::exception&) {
      fail(ErrorCode::Parse, "bad relator index in 2-cochain: " + item);
    }
    if (idx < 1 || idx > out.values.size()) fail(ErrorCode::InvalidArgument, "relator index out of range: " + item);
    out.values[idx - 1] = parse_rational(item.substr(eq + 1));
  }
  return out;
}

std::vector<Rational> coboundary(const CoverBall& cb, const OneCochain& eta) {
  if (eta.size() != cb.edges().size()) fail(ErrorCode::InvalidArgument, "1-cochain size does not match the edges");
  std::vector<Rational> out;
  out.reserve(cb.cells().size());
  for (const auto& c : cb.cells()) {
    Rational s = 0;
    for (const auto& side : c.boundary) s += side.sign * eta[side.edge];
    out.push_back(s);
  }
  return out;
}

Rational weighted_sup(const CoverBall& cb, const OneCochain& eta, const WeightFn& f) {
  if (eta.size() != cb.edges().size()) fail(ErrorCode::InvalidArgument, "1-cochain size does not match the edges");
  Rational best = 0;
  for (std::size_t e = 0; e < eta.size(); ++e) {
    if (!cb.interior_edge(e)) continue;
    Rational v = abs_q(eta[e]) / f(cb.anchor(e));
    if (v > best) best = v;
  }
  return best;
}

std::string filler_name(Filler f) {
  switch (f) {
    case Filler::Dehn: return "dehn";
    case Filler::Grid: return "grid";
    case Filler::Search: return "search";
  }
  return "?";
}

Filler parse_filler(const std::string& name) {
  if (name == "dehn") return Filler::Dehn;
  if (name == "grid") return Filler::Grid;
  if (name == "search") return Filler::Search;
  fail(ErrorCode::InvalidArgument, "unknown filler: " + name);
}

Filler default_filler(const Backend& backend) {
  if (backend.kind() == BackendKind::SmallCancellation) return Filler::Dehn;
  if (backend.kind() == BackendKind::FreeAbelian) return Filler::Grid;
  return Filler::Search;
}

OneCochain combing_primitive(const CoverBall& cb, const Backend& backend, const InvariantTwoCochain& omega,
                             Filler filler, const SearchCaps& caps) {
  const Presentation& p = cb.presentation();
  if (omega.values.size() != p.relators().size())
    fail(ErrorCode::InvalidArgument, "2-cochain size does not match the relators");
  const auto& forms = p.symmetrized_forms();
  const CayleyBall& ball = cb.ball();
  OneCochain eta(cb.edges().size(), Rational(0));
  for (std::size_t e = 0; e < cb.edges().size(); ++e) {
    const auto& ed = cb.edges()[e];
    Word loop = ball.element(ed.from).rep;
    loop.push_back(Letter::of(ed.gen, false));
    loop.append(ball.element(ed.to).rep.inverse());
    loop = loop.reduced();
    if (loop.empty()) continue;
    AreaCertificate cert;
    switch (filler) {
      case Filler::Dehn: cert = *area_from_dehn(backend, loop).certificate; break;
      case Filler::Grid: cert = commuting_filler(p, backend, loop); break;
      case Filler::Search: {
        AreaBounds b = area_search(p, backend, loop, std::max(caps.cap_len, loop.size()), caps.cap_states);
        if (!b.certificate)
          fail(ErrorCode::CapExceeded, "search filler found no filling for " + format_word(loop, p.alphabet()));
        cert = *b.certificate;
        break;
      }
    }
    Rational content = 0;
    for (const auto& entry : cert.entries) {
      std::ptrdiff_t idx = p.find_symmetrized(entry.relator);
      if (idx < 0) fail(ErrorCode::Verification, "filling uses a word that is not a symmetrized relator");
      const auto& form = forms[static_cast<std::size_t>(idx)];
      Rational v = omega(form.relator);
      content += form.inverted ? Rational(-v) : v;
    }
    eta[e] = content;
  }
  auto d = coboundary(cb, eta);
  for (std::size_t c = 0; c < cb.cells().size(); ++c) {
    const auto& cell = cb.cells()[c];
    if (cell.interior && d[c] != omega(cell.relator))
      fail(ErrorCode::Verification, "combing primitive has the wrong coboundary on an interior cell");
  }
  return eta;
}

Rational loop_functional_check(const CoverBall& cb, const OneCochain& eta, const std::vector<CoverLoop>& loops,
                               const WeightFn& f) {
  if (eta.size() != cb.edges().size()) fail(ErrorCode::InvalidArgument, "1-cochain size does not match the edges");
  Rational best = 0;
  for (const auto& loop : loops) {
    if (loop.start >= cb.vertices()) fail(ErrorCode::InvalidArgument, "loop starts outside the cover ball");
    ElementId v = loop.start;
    Rational num = 0, den = 0;
    for (Letter l : loop.word) {
      auto s = cb.side(v, l);
      if (!s) throw OutOfBallError("loop leaves the cover ball", cb.radius() + 1);
      num += s->sign * eta[s->edge];
      const auto& ed = cb.edges()[s->edge];
      v = l.inverted() ? ed.from : ed.to;
      den += f(cb.distance(v));
    }
    if (v != loop.start) fail(ErrorCode::InvalidArgument, "path is not closed");
    if (den == 0) continue;
    Rational r = abs_q(num) / den;
    if (r > best) best = r;
  }
  return best;
}

MinimaxResult minimax_primitive(const CoverBall& cb, const InvariantTwoCochain& omega, const WeightFn& f,
                                const std::vector<std::size_t>* cells) {
  if (omega.values.size() != cb.presentation().relators().size())
    fail(ErrorCode::InvalidArgument, "2-cochain size does not match the relators");
  std::vector<std::size_t> chosen = cells ? *cells : cb.interior_cells();
  MinimaxResult out;
  out.eta.assign(cb.edges().size(), Rational(0));
  out.objective = 0;
  bool all_zero = true;
  for (std::size_t c : chosen) {
    if (c >= cb.cells().size()) fail(ErrorCode::InvalidArgument, "cell index out of range");
    if (omega(cb.cells()[c].relator) != 0) all_zero = false;
  }
  if (chosen.empty() || all_zero) return out;

  // Variables zeta_e = eta_e + f_e in [0, 2 f_e] for t = 1 (scaled by s = 1/t),
  // and s >= 0: maximize s subject to d(zeta) - omega s = d(f).
  std::vector<std::size_t> column(cb.edges().size(), npos);
  std::vector<std::size_t> edge_of;
  for (std::size_t c : chosen)
    for (const auto& side : cb.cells()[c].boundary)
      if (column[side.edge] == npos) {
        column[side.edge] = edge_of.size();
        edge_of.push_back(side.edge);
      }
  const std::size_t m = edge_of.size();
  std::vector<Rational> fe(m);
  for (std::size_t j = 0; j < m; ++j) fe[j] = f(cb.anchor(edge_of[j]));

  LinearProgram lp;
  lp.columns = m + 1;
  lp.upper.resize(m + 1);
  lp.objective.assign(m + 1, Rational(0));
  lp.objective[m] = 1;
  for (std::size_t j = 0; j < m; ++j) lp.upper[j] = 2 * fe[j];
  for (std::size_t c : chosen) {
    std::map<std::size_t, Rational> coef;
    for (const auto& side : cb.cells()[c].boundary) coef[column[side.edge]] += side.sign;
    std::vector<std::pair<std::size_t, Rational>> row;
    Rational rhs = 0;
    for (auto& [j, a] : coef) {
      if (a == 0) continue;
      rhs += a * fe[j];
      row.emplace_back(j, a);
    }
    row.emplace_back(m, -omega(cb.cells()[c].relator));
    lp.rows.push_back(std::move(row));
    lp.rhs.push_back(rhs);
  }
  out.rows = lp.rows.size();
  out.columns = lp.columns;
  out.lp = solve_lp(lp);
  if (out.lp.status != LpSolution::Status::Optimal)
    fail(ErrorCode::Infeasible, "minimax LP: " + status_name(out.lp.status));
  const Rational s = out.lp.value;
  if (s <= 0) fail(ErrorCode::Infeasible, "the 2-cochain has no primitive on these cells");
  for (std::size_t j = 0; j < m; ++j) out.eta[edge_of[j]] = (out.lp.x[j] - fe[j]) / s;
  out.objective = 1 / s;

  // Exact re-check of the optimum.
  auto d = coboundary(cb, out.eta);
  for (std::size_t c : chosen)
    if (d[c] != omega(cb.cells()[c].relator)) fail(ErrorCode::Verification, "LP primitive fails d(eta) = omega");
  for (std::size_t j = 0; j < m; ++j)
    if (abs_q(out.eta[edge_of[j]]) > out.objective * fe[j])
      fail(ErrorCode::Verification, "LP primitive exceeds its weighted bound");
  return out;
}

Rational chain_ratio(const CoverBall& cb, const std::vector<std::size_t>& cells, const InvariantTwoCochain& omega,
                     const WeightFn& f) {
  Rational total = 0;
  std::map<std::size_t, Rational> coef;
  for (std::size_t c : cells) {
    const auto& cell = cb.cells().at(c);
    total += omega(cell.relator);
    for (const auto& side : cell.boundary) coef[side.edge] += side.sign;
  }
  Rational den = 0;
  for (auto& [e, a] : coef) den += abs_q(a) * f(cb.anchor(e));
  if (den == 0) return 0;
  return abs_q(total) / den;
}

Rational stokes_lower_bound(const CoverBall& cb, const InvariantTwoCochain& omega, const WeightFn& f) {
  Rational best = 0;
  for (unsigned rho = 1; rho < cb.radius(); ++rho) {
    std::vector<std::size_t> cells;
    for (std::size_t c = 0; c < cb.cells().size(); ++c) {
      const auto& v = cb.cells()[c].vertices;
      if (std::all_of(v.begin(), v.end(), [&](ElementId x) { return cb.distance(x) <= rho; })) cells.push_back(c);
    }
    if (cells.empty()) continue;
    Rational r = chain_ratio(cb, cells, omega, f);
    if (r > best) best = r;
  }
  return best;
}

GrowthFit growth_exponent(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) fail(ErrorCode::InvalidArgument, "growth fit needs at least two points");
  GrowthFit fit;
  for (const auto& [x, y] : points) {
    if (!(x > 0)) fail(ErrorCode::InvalidArgument, "growth fit needs positive radii");
    if (!(y > 0)) fit.shifted = true;
  }
  std::vector<double> lx, ly;
  for (const auto& [x, y] : points) {
    double v = fit.shifted ? y + 1 : y;
    if (!(v > 0)) fail(ErrorCode::InvalidArgument, "growth fit needs values > -1");
    lx.push_back(std::log(x));
    ly.push_back(std::log(v));
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0) fail(ErrorCode::InvalidArgument, "growth fit needs distinct radii");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

GrowthMethod parse_growth_method(const std::string& name) {
  if (name == "combing") return GrowthMethod::Combing;
  if (name == "lp") return GrowthMethod::Lp;
  if (name == "both") return GrowthMethod::Both;
  fail(ErrorCode::InvalidArgument, "unknown method: " + name);
}

std::vector<GrowthRow> cover_growth(const Presentation& p, std::shared_ptr<const Backend> backend,
                                    const InvariantTwoCochain& omega, const std::vector<unsigned>& radii,
                                    const WeightFn& f, GrowthMethod method, Filler filler, const BallProvider& balls,
                                    const SearchCaps& caps, unsigned jobs) {
  if (radii.empty()) return {};
  unsigned top = *std::max_element(radii.begin(), radii.end());
  auto ball = balls(top);
  std::vector<GrowthRow> rows(radii.size());
  parallel_for(radii.size(), jobs, [&](std::size_t i) {
    unsigned r = radii[i];
    CoverBall cb = build_cover_ball(p, ball, r);
    GrowthRow row;
    row.radius = r;
    row.interior_cells = cb.interior_cells().size();
    if (method != GrowthMethod::Lp) row.sup_eta = weighted_sup(cb, combing_primitive(cb, *backend, omega, filler, caps), f);
    if (method != GrowthMethod::Combing) row.lp_objective = minimax_primitive(cb, omega, f).objective;
    row.stokes = stokes_lower_bound(cb, omega, f);
    rows[i] = std::move(row);
  });
  return rows;
}

std::string growth_csv(const std::vector<GrowthRow>& rows) {
  std::ostringstream out;
  out << "radius,sup_eta,lp_objective,stokes_lb,sup_eta_approx,lp_objective_approx,stokes_lb_approx\n";
  for (const auto& r : rows) {
    out << r.radius << ',' << (r.sup_eta ? to_string(*r.sup_eta) : "") << ','
        << (r.lp_objective ? to_string(*r.lp_objective) : "") << ',' << to_string(r.stokes) << ','
        << approx(r.sup_eta) << ',' << approx(r.lp_objective) << ',' << approx(r.stokes) << '\n';
  }
  return out.str();
}

}  // namespace ggt
