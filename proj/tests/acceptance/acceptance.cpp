// Acceptance run: ten criteria, one PASS/FAIL line each. Artifacts go to
// --out (default ./acceptance-artifacts); the CLI is found through --cli or
// GGT_CLI_PATH.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "area.hpp"
#include "automatic.hpp"
#include "cat0.hpp"
#include "cayley.hpp"
#include "cover.hpp"
#include "error.hpp"
#include "fixtures.hpp"
#include "io.hpp"
#include "oracle.hpp"
#include "oracles.hpp"
#include "radial.hpp"

namespace fs = std::filesystem;
using namespace ggt;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Context {
  fs::path dir;
  std::string cli;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double x, int digits = 3) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << x;
  return s.str();
}

void write(const Context& ctx, const std::string& name, const std::string& data) {
  fs::create_directories(ctx.dir);
  std::ofstream out(ctx.dir / name, std::ios::binary);
  out << data;
}

// Collects failed clauses; the outcome passes when none failed.
struct Clauses {
  std::vector<std::string> failed;
  std::vector<std::string> notes;
  void require(bool ok, const std::string& what) {
    if (!ok) failed.push_back(what);
  }
  Outcome outcome() const {
    Outcome o;
    o.pass = failed.empty();
    std::string s;
    for (const auto& f : failed) s += (s.empty() ? "" : "; ") + f;
    for (const auto& n : notes) s += (s.empty() ? "" : "; ") + n;
    o.detail = s;
    return o;
  }
};

Word random_word(std::mt19937_64& rng, std::size_t gens, std::size_t len) {
  std::uniform_int_distribution<std::uint32_t> letter(0, static_cast<std::uint32_t>(2 * gens - 1));
  Word w;
  for (std::size_t i = 0; i < len; ++i) w.push_back(Letter(letter(rng)));
  return w;
}

// u r^{+-1} u^-1 for a random relator r and |u| <= max_u.
Word random_conjugate(std::mt19937_64& rng, const Presentation& p, std::size_t max_u) {
  std::uniform_int_distribution<std::size_t> pick(0, p.relators().size() - 1), ulen(0, max_u);
  std::bernoulli_distribution inv(0.5);
  Word u = random_word(rng, p.alphabet().generators(), ulen(rng));
  Word r = p.relators()[pick(rng)];
  if (inv(rng)) r = r.inverse();
  return u * r * u.inverse();
}

// ---------------------------------------------------------------------------

Outcome c1_area_oracle(Context& ctx) {
  Clauses c;
  auto z = fixtures::z2();
  json certs = json::array();
  std::string times;
  for (std::size_t n = 1; n <= 3; ++n) {
    Word w = z.word(oracle::commutator_power(n));
    auto t0 = Clock::now();
    AreaBounds b = area_search(z.pres, *z.backend, w, 4 * n + 4, 20000000);
    double dt = seconds_since(t0);
    times += (times.empty() ? "" : ",") + fmt(dt, 2) + "s";
    std::string tag = "n=" + std::to_string(n);
    c.require(b.exhausted, tag + " search not exhausted");
    c.require(b.upper && *b.upper == n * n && b.lower == n * n,
              tag + " area " + std::to_string(b.lower) + ".." + (b.upper ? std::to_string(*b.upper) : "?") +
                  ", expected " + std::to_string(n * n));
    c.require(b.certificate && verify_certificate(z.pres, *b.certificate), tag + " certificate failed");
    c.require(dt < 60, tag + " took " + fmt(dt, 1) + "s");
    if (b.certificate) certs.push_back(certificate_json(*b.certificate, z.pres.alphabet()));
  }
  write(ctx, "c1_area_certificates.json", dump_json(certs));
  c.notes.push_back("areas 1,4,9 exhausted; times " + times);
  return c.outcome();
}

Outcome c2_radial_witness(Context& ctx) {
  Clauses c;
  auto z = fixtures::z2();
  std::vector<std::size_t> ns{1, 2, 3, 4, 5, 6, 7, 8};
  ProfileOptions opts;
  opts.cap_states = 2000000;
  auto rows = profile(z.pres, z.backend, parse_family("commutator-power"), WeightFn::power(2), ns, opts,
                      default_ball_provider(z.backend, 1000000));
  write(ctx, "c2_profile.csv", profile_csv(rows));
  std::vector<ProfileRow> fit_rows(rows.begin(), rows.begin() + 3);
  Rational fit = fit_constant(fit_rows);
  Rational limit = fit * make_rational(11, 10);
  for (const auto& r : rows) {
    if (!r.ratio) {
      c.require(false, "n=" + std::to_string(r.n) + " has no upper bound");
      continue;
    }
    c.require(*r.ratio <= limit, "n=" + std::to_string(r.n) + " ratio " + to_string(*r.ratio) + " = " +
                                     fmt(r.ratio->get_d(), 4) + " > 1.10 x " + to_string(fit) + " = " +
                                     fmt(limit.get_d(), 5));
    c.require(r.area_hi && *r.area_hi == r.n * r.n, "n=" + std::to_string(r.n) + " area differs from n^2");
  }
  c.require(rows[0].radial == 8, "n=1 radial cost " + to_string(rows[0].radial) + " != 8");
  c.require(rows[1].radial == 26, "n=2 radial cost " + to_string(rows[1].radial) + " != 26");
  c.notes.push_back("fit(n<=3) = " + to_string(fit) + ", radial costs 4n^2+4n = " + to_string(rows[0].radial) + "," +
                    to_string(rows[1].radial) + "," + to_string(rows[2].radial) + ",...");
  return c.outcome();
}

Outcome c3_classical_chain(Context& ctx) {
  Clauses c;
  std::ostringstream csv;
  csv << "group,index,L,p,radial_cost,classical_bound,length_bound\n";
  std::size_t violations = 0, checked = 0;
  std::mt19937_64 rng(3);
  struct G {
    const char* name;
    fixtures::Group g;
    unsigned radius;
  };
  std::vector<G> groups{{"z2", fixtures::z2(), 6}, {"f2", fixtures::f2(), 5}, {"genus2", fixtures::genus2(), 5}};
  const std::size_t total = 1000;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& [name, g, radius] = groups[gi];
    auto ball = g.ball(radius);
    std::size_t count = total / 3 + (gi < total % 3 ? 1 : 0);
    for (std::size_t t = 0; t < count; ++t) {
      // Alternate x rep(x)^-1 with products of conjugated relators.
      Word w;
      if (t % 2 == 0 || g.pres.relators().empty()) {
        w = fixtures::random_identity(rng, *ball, 4);
        if (t % 4 == 2) w = w * fixtures::random_identity(rng, *ball, 4);
      } else {
        w = random_conjugate(rng, g.pres, 1);
        if (t % 4 == 3) w = w * random_conjugate(rng, g.pres, 1);
      }
      for (unsigned p = 1; p <= 4; ++p) {
        Rational radial = radial_cost(*ball, w, WeightFn::power(p));
        auto ds = prefix_distances(*ball, w);
        unsigned diam = ds.empty() ? 0 : *std::max_element(ds.begin(), ds.end());
        mpz_class a, b;
        mpz_ui_pow_ui(a.get_mpz_t(), diam + 1, p - 1);
        mpz_ui_pow_ui(b.get_mpz_t(), w.size() + 1, p - 1);
        Rational classical = Rational(a) * static_cast<unsigned long>(w.size());
        Rational top = Rational(b) * static_cast<unsigned long>(w.size());
        if (!(radial <= classical && classical <= top)) ++violations;
        ++checked;
        csv << name << ',' << t << ',' << w.size() << ',' << p << ',' << to_string(radial) << ','
            << to_string(classical) << ',' << to_string(top) << '\n';
      }
    }
  }
  write(ctx, "c3_classical_chain.csv", csv.str());
  c.require(violations == 0, std::to_string(violations) + " violations");
  c.notes.push_back(std::to_string(total) + " words, " + std::to_string(checked) + " exact checks (p=1..4), " +
                    std::to_string(violations) + " violations");
  return c.outcome();
}

Outcome c4_automatic(Context& ctx) {
  Clauses c;
  auto t0 = Clock::now();
  auto z = fixtures::z2();
  Combing measured = combing_from_ball(z.ball(6));
  unsigned k = fellow_traveler_constant(measured);
  unsigned K_len = length_diff_bound(measured);
  c.require(k == 2, "measured k = " + std::to_string(k));
  c.require(K_len == 1, "measured K_len = " + std::to_string(K_len));
  Combing comb = combing_from_ball(z.ball(16));
  std::mt19937_64 rng(4);
  json certs = json::array();
  std::size_t bad = 0, max_rel = 0, max_len = 0;
  for (int t = 0; t < 100; ++t) {
    Word w = fixtures::random_identity(rng, *comb.ball, 12);
    max_len = std::max(max_len, w.size());
    LadderCertificate cert = certify_identity_word(comb, k, K_len, w);
    bool ok = static_cast<bool>(verify_ladder(cert, *z.backend, comb.ball.get()));
    Rational sum = 0;
    for (unsigned d : prefix_distances(*comb.ball, w)) sum += d + 1;
    ok = ok && Rational(static_cast<unsigned long>(cert.count())) <= 2 * std::max(K_len, 1u) * sum;
    for (const auto& e : cert.cert.entries) {
      max_rel = std::max(max_rel, e.relator.size());
      ok = ok && e.relator.size() <= 2 * k + 2;
    }
    bad += !ok;
    certs.push_back(ladder_json(cert, z.pres.alphabet()));
  }
  double dt = seconds_since(t0);
  write(ctx, "c4_ladder_certificates.json", dump_json(certs));
  c.require(bad == 0, std::to_string(bad) + " certificates failed");
  c.require(max_len <= 24, "word length " + std::to_string(max_len) + " > 24");
  c.require(dt < 120, "took " + fmt(dt, 1) + "s");
  c.notes.push_back("k=" + std::to_string(k) + " K_len=" + std::to_string(K_len) + ", 100 words (max L " +
                    std::to_string(max_len) + "), longest relator " + std::to_string(max_rel) + ", " + fmt(dt, 2) +
                    "s");
  return c.outcome();
}

Outcome c5_cat0(Context& ctx) {
  Clauses c;
  auto t0 = Clock::now();
  auto action = parse_action(R"({"space": "euclidean", "dim": 2, "lattice": [[1,0],[0,1]], "basepoint": [0,0], "D": "auto"})");
  c.require(action.D2() == make_rational(1, 2), "D^2 = " + to_string(action.D2()));
  auto s = build_generating_set(action);
  c.require(s.overlap_count == 97, "|S| = " + std::to_string(s.overlap_count));
  const double D = action.D();
  double worst_gen = 0;
  for (const auto& g : s.generators)
    worst_gen = std::max(worst_gen, std::sqrt(action.orbit_distance2(action.identity(), g).get_d()));
  c.require(worst_gen <= 12 * D + 1e-9, "generator displacement " + fmt(worst_gen, 4) + " > 12D");

  auto ball = std::make_shared<const CayleyBall>(build_ball(s.backend, 4, 5000000));
  SandwichReport sw = qi_sandwich_check(action, s, *ball, 1000, 5);
  c.require(sw.violations == 0, std::to_string(sw.violations) + " sandwich violations");
  c.require(sw.pairs == 1000, "sandwich evaluated " + std::to_string(sw.pairs) + " pairs");

  std::mt19937_64 rng(5);
  json certs = json::array();
  std::size_t bad = 0, max_loop = 0;
  double max_chain = 0;
  for (int t = 0; t < 20; ++t) {
    Word x = random_word(rng, s.backend->alphabet().generators(), 1 + t % 3);
    Word w = x * ball->element(ball->locate(x)).rep.inverse();
    Cat0Certificate cert = certify_cat0_word(action, s, *ball, w);
    bool ok = static_cast<bool>(verify_cat0(cert, *s.backend, ball.get()));
    for (const auto& e : cert.cert.entries) ok = ok && e.relator.size() <= 46;
    Rational sum = 0;
    for (unsigned d : prefix_distances(*ball, w)) sum += d + 1;
    ok = ok && Rational(static_cast<unsigned long>(cert.count())) <= 24 * sum;
    for (const auto& row : cert.trace) {
      max_chain = std::max(max_chain, row.max_chain);
      ok = ok && row.max_chain <= 12 * D + 1e-9;
    }
    max_loop = std::max(max_loop, cert.max_loop);
    bad += !ok;
    certs.push_back(cat0_json(cert, s.backend->alphabet()));
  }
  double dt = seconds_since(t0);
  json report = {{"D2", to_string(action.D2())},
                 {"overlap_count", s.overlap_count},
                 {"max_generator_displacement", worst_gen},
                 {"sandwich", {{"pairs", sw.pairs}, {"violations", sw.violations}}},
                 {"max_chain", max_chain},
                 {"max_loop", max_loop}};
  write(ctx, "c5_cat0_certificates.json", dump_json(certs));
  write(ctx, "c5_cat0_report.json", dump_json(report));
  c.require(bad == 0, std::to_string(bad) + " certificates failed");
  c.require(dt < 300, "took " + fmt(dt, 1) + "s");
  c.notes.push_back("D^2=1/2, |S|=97, 1000 sandwich pairs, max chain " + fmt(max_chain, 3) + " <= 12D = " +
                    fmt(12 * D, 3) + ", 20 words, longest loop " + std::to_string(max_loop) + ", " + fmt(dt, 2) + "s");
  return c.outcome();
}

Outcome c6_linear(Context& ctx) {
  Clauses c;
  auto g = fixtures::genus2();
  PieceReport pr = check_small_cancellation(g.pres, make_rational(1, 6));
  c.require(pr.passes, "C'(1/6) fails");
  c.require(pr.max_piece == 1, "max piece " + std::to_string(pr.max_piece));
  c.require(pr.min_relator_length == 8, "relator length " + std::to_string(pr.min_relator_length));
  std::mt19937_64 rng(6);
  json certs = json::array();
  Rational worst = 0;
  std::size_t bad = 0, words = 0;
  while (words < 100) {
    std::uniform_int_distribution<int> factors(1, 3);
    Word w;
    int n = factors(rng);
    for (int i = 0; i < n; ++i) w = w * random_conjugate(rng, g.pres, 3);
    w = w.reduced();
    if (w.empty()) continue;
    ++words;
    AreaBounds d = area_from_dehn(*g.backend, w);
    bool ok = d.certificate && verify_certificate(g.pres, *d.certificate) && d.upper && *d.upper <= w.size();
    bad += !ok;
    if (d.upper) {
      Rational ratio = Rational(static_cast<unsigned long>(*d.upper)) / static_cast<unsigned long>(w.size());
      if (ratio > worst) worst = ratio;
    }
    if (d.certificate) certs.push_back(certificate_json(*d.certificate, g.pres.alphabet()));
  }
  json out = {{"small_cancellation", piece_report_json(pr)}, {"fitted_C", to_string(worst)}, {"certificates", certs}};
  write(ctx, "c6_dehn_certificates.json", dump_json(out));
  c.require(bad == 0, std::to_string(bad) + " Dehn certificates failed or exceeded L(w)");
  c.require(worst <= 1, "fitted C = " + to_string(worst));
  c.notes.push_back("max piece 1, relator length 8, 100 words, fitted C = " + to_string(worst) + " = " +
                    fmt(worst.get_d(), 3));
  return c.outcome();
}

Outcome c7_flat_growth(Context& ctx) {
  Clauses c;
  auto t0 = Clock::now();
  auto z = fixtures::z2();
  std::vector<unsigned> radii;
  for (unsigned r = 4; r <= 12; ++r) radii.push_back(r);
  auto omega = parse_two_cochain("r1=1", z.pres);
  auto rows = cover_growth(z.pres, z.backend, omega, radii, WeightFn::power(1), GrowthMethod::Lp, Filler::Grid,
                           default_ball_provider(z.backend, 1000000));
  write(ctx, "c7_torus_growth.csv", growth_csv(rows));
  std::vector<std::pair<double, double>> pts;
  std::string vals;
  for (const auto& r : rows) {
    c.require(*r.lp_objective >= r.stokes, "radius " + std::to_string(r.radius) + " objective " +
                                               to_string(*r.lp_objective) + " < stokes " + to_string(r.stokes));
    pts.push_back({r.radius, r.lp_objective->get_d()});
    vals += (vals.empty() ? "" : ",") + to_string(*r.lp_objective);
  }
  GrowthFit fit = growth_exponent(pts);
  double dt = seconds_since(t0);
  c.require(fit.slope >= 0.8 && fit.slope <= 1.2, "fitted slope " + fmt(fit.slope, 4) + " outside [0.8, 1.2]");
  c.require(dt < 600, "took " + fmt(dt, 1) + "s");
  c.notes.push_back("objectives r=4..12: " + vals + "; slope " + fmt(fit.slope, 4) + ", " + fmt(dt, 2) + "s");
  return c.outcome();
}

Outcome c8_hyperbolic_growth(Context& ctx) {
  Clauses c;
  auto t0 = Clock::now();
  auto g = fixtures::genus2();
  auto omega = parse_two_cochain("r1=1", g.pres);
  std::vector<unsigned> radii{2, 3, 4, 5};
  auto ball = std::make_shared<const CayleyBall>(build_ball(g.backend, 5, 5000000));
  std::vector<std::pair<double, double>> pts;
  std::ostringstream csv;
  csv << "radius,sup_eta,interior_cells,interior_edges\n";
  std::string vals;
  std::size_t mismatched = 0, interior_total = 0;
  for (unsigned r : radii) {
    CoverBall cb = build_cover_ball(g.pres, ball, r);
    OneCochain eta = combing_primitive(cb, *g.backend, omega, Filler::Dehn);
    auto d = coboundary(cb, eta);
    for (std::size_t i : cb.interior_cells()) mismatched += d[i] != omega(cb.cells()[i].relator);
    interior_total += cb.interior_cells().size();
    Rational sup = weighted_sup(cb, eta, WeightFn::power(1));
    std::size_t edges = 0;
    for (std::size_t e = 0; e < cb.edges().size(); ++e) edges += cb.interior_edge(e);
    csv << r << ',' << to_string(sup) << ',' << cb.interior_cells().size() << ',' << edges << '\n';
    pts.push_back({r, sup.get_d()});
    vals += (vals.empty() ? "" : ",") + to_string(sup);
    if (r == radii.back()) write(ctx, "c8_genus2_cochain.json", dump_json(cochain_json(cb, eta)));
  }
  write(ctx, "c8_genus2_growth.csv", csv.str());
  GrowthFit fit = growth_exponent(pts);
  double dt = seconds_since(t0);
  c.require(mismatched == 0, std::to_string(mismatched) + " interior cells with delta eta != omega");
  c.require(fit.slope <= 0.2, "fitted slope " + fmt(fit.slope, 4) + (fit.shifted ? " (values shifted by +1)" : "") +
                                  " > 0.2");
  c.require(dt < 600, "took " + fmt(dt, 1) + "s");
  c.notes.push_back("sup|eta| r=2..5: " + vals + ", delta eta = omega on " + std::to_string(interior_total) +
                    " interior cells, " + fmt(dt, 2) + "s");
  return c.outcome();
}

// ---------------------------------------------------------------------------

int run_cli(const Context& ctx, const std::vector<std::string>& args) {
  std::string cmd = "'" + ctx.cli + "'";
  for (const auto& a : args) cmd += " '" + a + "'";
  cmd += " >/dev/null 2>&1";
  int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

Word flip_at(const Word& w, std::size_t i) {
  Word out;
  for (std::size_t j = 0; j < w.size(); ++j) out.push_back(j == i ? w[j].inverse() : w[j]);
  return out;
}

Outcome c9_soundness(Context& ctx) {
  Clauses c;
  if (ctx.cli.empty() || !fs::exists(ctx.cli)) {
    c.require(false, "CLI not found (set GGT_CLI_PATH)");
    return c.outcome();
  }
  fs::path dir = ctx.dir / "c9_mutants";
  fs::create_directories(dir);
  auto z = fixtures::z2();
  const Alphabet& al = z.pres.alphabet();
  std::mt19937_64 rng(9);
  std::vector<std::pair<std::string, std::vector<std::string>>> mutants;  // file, extra args
  std::vector<std::string> zargs{"--pres", "<a,b|abAB>", "--backend", "abelian"};
  auto add = [&](const json& j, const std::string& kind, bool group) {
    std::string name = "m" + std::to_string(1000 + mutants.size()).substr(1) + "_" + kind + ".json";
    std::ofstream(dir / name) << dump_json(j);
    mutants.push_back({name, group ? zargs : std::vector<std::string>{}});
  };

  // Area certificates.
  std::vector<AreaCertificate> area;
  for (std::size_t n = 1; n <= 3; ++n)
    area.push_back(*area_bounds(z.pres, *z.backend, z.word(oracle::commutator_power(n)), 4 * n + 4, 200000).certificate);
  auto ball = z.ball(8);
  while (area.size() < 6) {
    Word w = fixtures::random_identity(rng, *ball, 6);
    auto b = area_bounds(z.pres, *z.backend, w, 12, 50000);
    if (b.certificate && b.certificate->count() > 0) area.push_back(*b.certificate);
  }
  for (int t = 0; t < 34; ++t) {
    AreaCertificate m = area[t % area.size()];
    std::uniform_int_distribution<std::size_t> pos(0, 1000);
    switch (t % 3) {
      case 0: m.word = flip_at(m.word, pos(rng) % m.word.size()); add(certificate_json(m, al), "flip_word", true); break;
      case 1: {
        auto& e = m.entries[pos(rng) % m.entries.size()];
        e.relator = flip_at(e.relator, pos(rng) % e.relator.size());
        add(certificate_json(m, al), "flip_relator", true);
        break;
      }
      default: m.entries.pop_back(); add(certificate_json(m, al), "drop_entry", true); break;
    }
  }

  // Ladder certificates.
  Combing comb = combing_from_ball(z.ball(14));
  std::vector<LadderCertificate> ladders;
  while (ladders.size() < 8) {
    Word w = fixtures::random_identity(rng, *comb.ball, 10);
    auto cert = certify_identity_word(comb, 2, 1, w);
    if (cert.count() > 0) ladders.push_back(cert);
  }
  for (int t = 0; t < 33; ++t) {
    LadderCertificate m = ladders[t % ladders.size()];
    std::uniform_int_distribution<std::size_t> pos(0, 1000);
    switch (t % 4) {
      case 0: m.k -= 1; add(ladder_json(m, al), "lower_k", true); break;
      case 1: {
        // Lower k together with the stated convention; the long loops no longer fit.
        std::size_t longest = 0;
        for (const auto& e : m.cert.entries) longest = std::max(longest, e.relator.size());
        m.k -= 1;
        if (longest > 2 * m.k + 2) m.cert.max_relator_length = 2 * m.k + 2;
        add(ladder_json(m, al), "lower_k_convention", true);
        break;
      }
      case 2: {
        Word loop;
        for (unsigned i = 0; i < m.k + 2; ++i) loop = loop * z.word("aA");
        m.cert.entries.push_back({Word{}, loop});
        add(ladder_json(m, al), "oversized_loop", true);
        break;
      }
      default: m.cert.word = flip_at(m.cert.word, pos(rng) % m.cert.word.size()); add(ladder_json(m, al), "flip_word", true); break;
    }
  }

  // Cat0 certificates.
  auto action = parse_action(R"({"space": "euclidean", "dim": 2, "lattice": [[1,0],[0,1]], "basepoint": [0,0], "D": "auto"})");
  auto s = build_generating_set(action);
  auto sball = std::make_shared<const CayleyBall>(build_ball(s.backend, 3, 5000000));
  const Alphabet& sl = s.backend->alphabet();
  std::vector<Cat0Certificate> cats;
  while (cats.size() < 5) {
    Word x = random_word(rng, sl.generators(), 2);
    Word w = x * sball->element(sball->locate(x)).rep.inverse();
    auto cert = certify_cat0_word(action, s, *sball, w);
    if (cert.count() > 0) cats.push_back(cert);
  }
  for (int t = 0; t < 33; ++t) {
    Cat0Certificate m = cats[t % cats.size()];
    std::uniform_int_distribution<std::size_t> pos(0, 1000);
    switch (t % 4) {
      case 0: {
        Word loop;
        for (int i = 0; i < 24; ++i) loop = loop * parse_word("s0.S0", sl);
        m.cert.entries.push_back({Word{}, loop});
        add(cat0_json(m, sl), "oversized_loop", false);
        break;
      }
      case 1: m.cert.word = flip_at(m.cert.word, pos(rng) % m.cert.word.size()); add(cat0_json(m, sl), "flip_word", false); break;
      case 2: {
        auto& e = m.cert.entries[pos(rng) % m.cert.entries.size()];
        e.relator = flip_at(e.relator, pos(rng) % e.relator.size());
        add(cat0_json(m, sl), "flip_relator", false);
        break;
      }
      default: m.D2 = make_rational(1, 4); add(cat0_json(m, sl), "wrong_D", false); break;
    }
  }

  std::map<int, std::size_t> codes;
  std::vector<std::string> accepted;
  for (const auto& [name, extra] : mutants) {
    std::vector<std::string> args{"verify", "--cert", (dir / name).string()};
    args.insert(args.end(), extra.begin(), extra.end());
    int rc = run_cli(ctx, args);
    ++codes[rc];
    if (rc != 2) accepted.push_back(name + " -> " + std::to_string(rc));
  }
  // The unmutated originals must still pass.
  std::size_t originals_ok = 0;
  {
    std::ofstream(dir / "orig_area.json") << dump_json(certificate_json(area[0], al));
    std::ofstream(dir / "orig_ladder.json") << dump_json(ladder_json(ladders[0], al));
    std::ofstream(dir / "orig_cat0.json") << dump_json(cat0_json(cats[0], sl));
    std::vector<std::string> a{"verify", "--cert", (dir / "orig_area.json").string()};
    a.insert(a.end(), zargs.begin(), zargs.end());
    originals_ok += run_cli(ctx, a) == 0;
    std::vector<std::string> l{"verify", "--cert", (dir / "orig_ladder.json").string()};
    l.insert(l.end(), zargs.begin(), zargs.end());
    originals_ok += run_cli(ctx, l) == 0;
    originals_ok += run_cli(ctx, {"verify", "--cert", (dir / "orig_cat0.json").string()}) == 0;
  }
  c.require(mutants.size() == 100, std::to_string(mutants.size()) + " mutants");
  c.require(accepted.empty(), std::to_string(accepted.size()) + " mutants not rejected with exit 2 (first: " +
                                  (accepted.empty() ? "" : accepted[0]) + ")");
  c.require(originals_ok == 3, "an unmutated certificate was rejected");
  c.notes.push_back(std::to_string(codes[2]) + "/100 rejected with exit 2; originals accepted");
  return c.outcome();
}

using Criterion = std::function<Outcome(Context&)>;

struct Entry {
  std::string id;
  std::string title;
  Criterion run;
};

std::vector<Entry> criteria_1_to_8() {
  return {{"c1", "area oracle", c1_area_oracle},
          {"c2", "radial inequality witness", c2_radial_witness},
          {"c3", "classical-bound chain", c3_classical_chain},
          {"c4", "automatic certifier", c4_automatic},
          {"c5", "CAT(0) certifier", c5_cat0},
          {"c6", "linear case", c6_linear},
          {"c7", "cover growth, flat", c7_flat_growth},
          {"c8", "cover growth, hyperbolic", c8_hyperbolic_growth}};
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  if (!fs::exists(root)) return files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    files[fs::relative(e.path(), root).string()] = ss.str();
  }
  return files;
}

Outcome c10_determinism(Context& ctx) {
  Clauses c;
  std::map<std::string, std::string> runs[2];
  for (int i = 0; i < 2; ++i) {
    Context sub{ctx.dir / ("c10_run" + std::to_string(i + 1)), ctx.cli};
    fs::remove_all(sub.dir);
    for (auto& e : criteria_1_to_8()) {
      try {
        e.run(sub);
      } catch (const std::exception& ex) {
        c.require(false, e.id + " threw in run " + std::to_string(i + 1) + ": " + ex.what());
      }
    }
    // CLI artifacts; manifests differ only in their run field.
    if (!ctx.cli.empty() && fs::exists(ctx.cli)) {
      fs::path d = sub.dir / "cli";
      fs::create_directories(d);
      std::string base = d.string() + "/";
      run_cli(sub, {"area", "--pres", "<a,b|abAB>", "--word", "aabbAABB", "--cap-len", "12", "--out", base + "area.csv",
                    "--cert", base + "area_cert.json", "--manifest", base + "area.manifest"});
      run_cli(sub, {"profile", "--pres", "<a,b|abAB>", "--family", "commutator-power", "--p", "2", "--n", "1:3",
                    "--out", base + "profile.csv", "--manifest", base + "profile.manifest"});
      run_cli(sub, {"cover", "growth", "--pres", "<a,b|abAB>", "--omega", "r1=1", "--radii", "2:6", "--method", "both",
                    "--jobs", "3", "--out", base + "growth.csv", "--cochain-out", base + "cochain.json", "--manifest",
                    base + "growth.manifest"});
      for (const char* m : {"area.manifest", "profile.manifest", "growth.manifest"}) {
        std::ifstream in(d / m);
        if (!in) continue;
        json j = json::parse(in);
        j.erase("run");
        for (auto& a : j["artifacts"]) a["path"] = fs::path(a["path"].get<std::string>()).filename().string();
        std::ofstream(d / (std::string(m) + ".stable")) << dump_json(j);
        fs::remove(d / m);
      }
    }
    runs[i] = read_tree(sub.dir);
  }
  std::size_t differing = 0;
  std::string first;
  for (const auto& [name, data] : runs[0]) {
    auto it = runs[1].find(name);
    if (it == runs[1].end() || it->second != data) {
      ++differing;
      if (first.empty()) first = name;
    }
  }
  for (const auto& [name, data] : runs[1])
    if (!runs[0].count(name)) ++differing;
  c.require(!runs[0].empty(), "no artifacts");
  c.require(differing == 0, std::to_string(differing) + " artifacts differ (first: " + first + ")");
  c.notes.push_back(std::to_string(runs[0].size()) + " artifacts byte-identical across two runs");
  return c.outcome();
}

}  // namespace

int main(int argc, char** argv) {
  Context ctx;
  ctx.dir = "acceptance-artifacts";
  if (const char* cli = std::getenv("GGT_CLI_PATH")) ctx.cli = cli;
  std::vector<std::string> only;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--out" && i + 1 < argc) {
      ctx.dir = argv[++i];
    } else if (a == "--cli" && i + 1 < argc) {
      ctx.cli = argv[++i];
    } else if (a == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string id;
      while (std::getline(ss, id, ',')) only.push_back(id);
    } else {
      std::cerr << "usage: ggt_acceptance [--out DIR] [--cli PATH] [--only c1,c2,...]\n";
      return 2;
    }
  }
  auto all = criteria_1_to_8();
  all.push_back({"c9", "soundness probes", c9_soundness});
  all.push_back({"c10", "determinism", c10_determinism});

  bool ok = true;
  for (auto& e : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), e.id) == only.end()) continue;
    Outcome o;
    auto t0 = Clock::now();
    try {
      o = e.run(ctx);
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    ok = ok && o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << e.id << " " << e.title << " [" << fmt(seconds_since(t0), 2)
              << "s]: " << o.detail << std::endl;
  }
  return ok ? 0 : 1;
}
