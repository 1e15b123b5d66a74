#include "ggt/ggt.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <mutex>
#include <new>
#include <sstream>
#include <string>

#include "area.hpp"
#include "automatic.hpp"
#include "cat0.hpp"
#include "cayley.hpp"
#include "cover.hpp"
#include "error.hpp"
#include "io.hpp"
#include "oracle.hpp"
#include "radial.hpp"

using namespace ggt;

struct ggt_group {
  std::string text;
  std::string backend_spec;
  Presentation pres;
  std::shared_ptr<const Backend> backend;
  std::size_t cap = 0;
  BallProvider balls;
};

struct ggt_combing {
  ggt_group* group = nullptr;
  std::optional<FSA> fsa;
  unsigned radius = 0;
  unsigned k = 0;
  unsigned K_len = 0;
  Rational ratio;
  Combing combing;
};

struct ggt_action {
  CocompactAction action;
  DerivedGeneratingSet set;
  std::shared_ptr<const CayleyBall> ball;
  std::size_t cap = 0;
};

namespace {

thread_local std::string g_error;
std::mutex g_cache_mutex;
std::string g_cache_dir = default_cache_dir();
bool g_cache_set = false;

ggt_status status_of(ErrorCode c) {
  switch (c) {
    case ErrorCode::Parse: return GGT_ERR_PARSE;
    case ErrorCode::InvalidArgument: return GGT_ERR_INVALID_ARGUMENT;
    case ErrorCode::CapExceeded: return GGT_ERR_CAP_EXCEEDED;
    case ErrorCode::NotIdentity: return GGT_ERR_NOT_IDENTITY;
    case ErrorCode::OutOfBall: return GGT_ERR_OUT_OF_BALL;
    case ErrorCode::Verification: return GGT_ERR_VERIFICATION;
    case ErrorCode::Unsupported: return GGT_ERR_UNSUPPORTED;
    case ErrorCode::Infeasible: return GGT_ERR_INFEASIBLE;
    case ErrorCode::Io: return GGT_ERR_IO;
  }
  return GGT_ERR_INTERNAL;
}

template <class F>
ggt_status guard(F&& f) {
  try {
    f();
    g_error.clear();
    return GGT_OK;
  } catch (const Error& e) {
    g_error = e.what();
    return status_of(e.code());
  } catch (const json::exception& e) {
    g_error = e.what();
    return GGT_ERR_PARSE;
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
    return GGT_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_error = e.what();
    return GGT_ERR_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void need(const void* p, const char* what) {
  if (!p) fail(ErrorCode::InvalidArgument, std::string("null ") + what);
}

// Largest prefix distance of an identity word is at most half its length.
unsigned half_length(const Word& w) { return static_cast<unsigned>((w.size() + 1) / 2); }

json image_json(const ActionImage& g) {
  json j;
  j["lattice"] = g.lattice;
  json t = json::array();
  for (const Word& w : g.tree) {
    std::string s;
    for (Letter l : w) {
      char c = static_cast<char>('a' + l.gen());
      s.push_back(l.inverted() ? static_cast<char>(c - 'a' + 'A') : c);
    }
    t.push_back(s);
  }
  j["tree"] = t;
  return j;
}

VerifyResult verify_json(ggt_group* g, const json& j, json& report) {
  std::string kind = certificate_kind(j);
  report["kind"] = kind;
  report["bound_checked"] = false;
  if (kind == "cat0") {
    if (!j.contains("action") || j.at("action").is_null())
      fail(ErrorCode::InvalidArgument, "cat0 certificate carries no action");
    CocompactAction action = parse_action(j.at("action").dump());
    DerivedGeneratingSet set = build_generating_set(action);
    Cat0Certificate c = cat0_from_json(j, set.backend->alphabet());
    report["count"] = c.count();
    if (c.D2 != action.D2()) return VerifyResult::failure("stated D differs from the action's");
    std::shared_ptr<const CayleyBall> ball;
    try {
      ball = std::make_shared<const CayleyBall>(build_ball(set.backend, half_length(c.cert.word), 2000000));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::CapExceeded) throw;
    }
    report["bound_checked"] = static_cast<bool>(ball);
    return verify_cat0(c, *set.backend, ball.get());
  }
  need(g, "group");
  if (kind == "ladder") {
    LadderCertificate c = ladder_from_json(j, g->pres.alphabet());
    report["count"] = c.count();
    std::shared_ptr<const CayleyBall> ball;
    try {
      ball = g->balls(half_length(c.cert.word));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::CapExceeded) throw;
    }
    report["bound_checked"] = static_cast<bool>(ball);
    return verify_ladder(c, *g->backend, ball.get());
  }
  AreaCertificate c = certificate_from_json(j, g->pres.alphabet());
  report["count"] = c.count();
  return verify_certificate(g->pres, c, g->backend.get());
}

}  // namespace

extern "C" {

const char* ggt_version(void) { return "0.1.0"; }

const char* ggt_last_error(void) { return g_error.c_str(); }

const char* ggt_status_name(ggt_status s) {
  switch (s) {
    case GGT_OK: return "ok";
    case GGT_ERR_PARSE: return "parse error";
    case GGT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case GGT_ERR_CAP_EXCEEDED: return "cap exceeded";
    case GGT_ERR_NOT_IDENTITY: return "not an identity word";
    case GGT_ERR_OUT_OF_BALL: return "outside the ball";
    case GGT_ERR_VERIFICATION: return "verification failed";
    case GGT_ERR_UNSUPPORTED: return "unsupported";
    case GGT_ERR_INFEASIBLE: return "infeasible";
    case GGT_ERR_IO: return "i/o error";
    case GGT_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

void ggt_string_free(char* s) { std::free(s); }

ggt_status ggt_sha256_hex(const char* data, size_t len, char** out) {
  return guard([&] {
    need(out, "output");
    if (len) need(data, "data");
    *out = dup(sha256_hex(std::string_view(data ? data : "", len)));
  });
}

ggt_status ggt_set_cache_dir(const char* dir) {
  return guard([&] {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    g_cache_dir = dir ? dir : "";
    g_cache_set = true;
  });
}

ggt_status ggt_group_new(const char* presentation, const char* backend, size_t ball_cap, ggt_group** out) {
  return guard([&] {
    need(presentation, "presentation");
    need(backend, "backend");
    need(out, "output");
    auto g = std::make_unique<ggt_group>();
    g->text = presentation;
    g->backend_spec = backend;
    g->pres = parse_presentation(g->text);
    g->backend = std::make_shared<const Backend>(parse_backend(g->backend_spec, g->pres));
    g->cap = ball_cap ? ball_cap : 5000000;
    std::string dir;
    {
      std::lock_guard<std::mutex> lock(g_cache_mutex);
      dir = g_cache_set ? g_cache_dir : default_cache_dir();
    }
    g->balls = cached_ball_provider(g->backend, g->pres.to_string(), g->backend_spec, g->cap, dir);
    *out = g.release();
  });
}

void ggt_group_free(ggt_group* g) { delete g; }

ggt_status ggt_group_info(const ggt_group* g, char** json_out) {
  return guard([&] {
    need(g, "group");
    need(json_out, "output");
    json j;
    j["presentation"] = g->pres.to_string();
    j["backend"] = g->backend->describe();
    j["generators"] = g->pres.alphabet().generators();
    json rels = json::array();
    for (const Word& r : g->pres.relators()) rels.push_back(format_word(r, g->pres.alphabet()));
    j["relators"] = rels;
    if (!g->pres.relators().empty())
      j["small_cancellation"] = piece_report_json(check_small_cancellation(g->pres, make_rational(1, 6)));
    *json_out = dup(dump_json(j));
  });
}

ggt_status ggt_group_is_identity(const ggt_group* g, const char* word, int* out) {
  return guard([&] {
    need(g, "group");
    need(word, "word");
    need(out, "output");
    *out = g->backend->is_identity(parse_word(word, g->pres.alphabet())) ? 1 : 0;
  });
}

ggt_status ggt_ball(ggt_group* g, unsigned radius, char** json_out) {
  return guard([&] {
    need(g, "group");
    need(json_out, "output");
    auto ball = g->balls(radius);
    json j = ball_json(*ball);
    if (ball->radius() != radius) {
      // A larger cached ball; report its restriction.
      std::vector<std::size_t> h = ball->sphere_sizes();
      h.resize(radius + 1);
      std::size_t n = 0;
      for (auto x : h) n += x;
      j = {{"radius", radius}, {"count", n}, {"histogram", h}};
    }
    *json_out = dup(dump_json(j));
  });
}

ggt_status ggt_area(ggt_group* g, const char* word, size_t cap_len, size_t cap_states, char** csv_out,
                    char** cert_out) {
  return guard([&] {
    need(g, "group");
    need(word, "word");
    need(csv_out, "output");
    Word w = parse_word(word, g->pres.alphabet());
    if (cap_len == 0) cap_len = std::max(w.size(), 4 * w.size() / 3 + 4);
    AreaBounds b = area_bounds(g->pres, *g->backend, w, cap_len, cap_states ? cap_states : 2000000);
    if (b.certificate && !verify_certificate(g->pres, *b.certificate, g->backend.get()))
      fail(ErrorCode::Verification, "area certificate failed its own verification");
    std::ostringstream csv;
    csv << "word,L,area_lo,area_hi,exhausted,states\n";
    csv << format_word(w, g->pres.alphabet()) << ',' << w.size() << ',' << b.lower << ',';
    if (b.upper) csv << *b.upper;
    csv << ',' << (b.exhausted ? "true" : "false") << ',' << b.states << '\n';
    std::string cert = b.certificate ? dump_json(certificate_json(*b.certificate, g->pres.alphabet())) : "";
    *csv_out = dup(csv.str());
    if (cert_out) *cert_out = b.certificate ? dup(cert) : nullptr;
  });
}

ggt_status ggt_profile(ggt_group* g, const char* family, unsigned weight_p, const size_t* ns, size_t count,
                       size_t cap_len, size_t cap_states, unsigned jobs, char** csv_out) {
  return guard([&] {
    need(g, "group");
    need(family, "family");
    need(csv_out, "output");
    if (count) need(ns, "n list");
    ProfileOptions opts;
    opts.cap_len = cap_len;
    if (cap_states) opts.cap_states = cap_states;
    opts.jobs = jobs ? jobs : 1;
    std::vector<std::size_t> list(ns, ns + count);
    auto rows = profile(g->pres, g->backend, parse_family(family), WeightFn::power(weight_p), list, opts, g->balls);
    *csv_out = dup(profile_csv(rows));
  });
}

ggt_status ggt_combing_new(ggt_group* g, const char* fsa_json, unsigned radius, ggt_combing** out) {
  return guard([&] {
    need(g, "group");
    need(out, "output");
    auto c = std::make_unique<ggt_combing>();
    c->group = g;
    c->radius = radius;
    if (fsa_json) c->fsa = parse_fsa(fsa_json, g->pres.alphabet());
    auto ball = g->balls(radius);
    if (ball->radius() != radius) ball = std::make_shared<const CayleyBall>(build_ball(g->backend, radius, g->cap));
    Combing measured = c->fsa ? combing_from_fsa(ball, *c->fsa, radius) : combing_from_ball(ball);
    c->k = fellow_traveler_constant(measured);
    c->K_len = length_diff_bound(measured);
    c->ratio = geodesic_ratio(measured);
    c->combing = std::move(measured);
    *out = c.release();
  });
}

void ggt_combing_free(ggt_combing* c) { delete c; }

ggt_status ggt_combing_info(const ggt_combing* c, char** json_out) {
  return guard([&] {
    need(c, "combing");
    need(json_out, "output");
    json j;
    j["source"] = c->fsa ? "fsa" : "shortlex";
    j["radius"] = c->radius;
    j["k"] = c->k;
    j["K_len"] = c->K_len;
    j["geodesic_ratio"] = to_string(c->ratio);
    *json_out = dup(dump_json(j));
  });
}

ggt_status ggt_certify_auto(ggt_combing* c, const char* word, char** json_out) {
  return guard([&] {
    need(c, "combing");
    need(word, "word");
    need(json_out, "output");
    ggt_group* g = c->group;
    Word w = parse_word(word, g->pres.alphabet());
    std::optional<LadderCertificate> cert;
    for (int attempt = 0; attempt < 8 && !cert; ++attempt) {
      try {
        cert = certify_identity_word(c->combing, c->k, c->K_len, w);
      } catch (const OutOfBallError& e) {
        unsigned r = std::max(e.needed_radius(), c->combing.ball->radius() + 1);
        auto ball = g->balls(r);
        c->combing = c->fsa ? combing_from_fsa(ball, *c->fsa, ball->radius()) : combing_from_ball(ball);
      }
    }
    if (!cert) fail(ErrorCode::OutOfBall, "word keeps leaving the combing ball");
    auto ball = g->balls(std::max(half_length(w), c->combing.ball->radius()));
    VerifyResult v = verify_ladder(*cert, *g->backend, ball.get());
    if (!v) fail(ErrorCode::Verification, "ladder certificate failed its own verification: " + v.reason);
    *json_out = dup(dump_json(ladder_json(*cert, g->pres.alphabet())));
  });
}

ggt_status ggt_action_new(const char* action_json, unsigned ball_radius, size_t ball_cap, ggt_action** out) {
  return guard([&] {
    need(action_json, "action");
    need(out, "output");
    CocompactAction action = parse_action(action_json);
    DerivedGeneratingSet set = build_generating_set(action);
    std::size_t cap = ball_cap ? ball_cap : 5000000;
    auto ball = std::make_shared<const CayleyBall>(build_ball(set.backend, ball_radius, cap));
    *out = new ggt_action{std::move(action), std::move(set), std::move(ball), cap};
  });
}

void ggt_action_free(ggt_action* a) { delete a; }

ggt_status ggt_action_info(const ggt_action* a, char** json_out) {
  return guard([&] {
    need(a, "action");
    need(json_out, "output");
    json j;
    j["D"] = a->action.D();
    j["D2"] = to_string(a->action.D2());
    j["D_supplied"] = a->action.D_supplied();
    j["overlap_count"] = a->set.overlap_count;
    j["generator_count"] = a->set.generators.size();
    json gens = json::array();
    const Alphabet& al = a->set.backend->alphabet();
    for (std::size_t i = 0; i < a->set.generators.size(); ++i) {
      json e = image_json(a->set.generators[i]);
      e["name"] = al.letter_name(Letter::of(static_cast<std::uint32_t>(i), false));
      e["displacement2"] = to_string(a->action.orbit_distance2(a->action.identity(), a->set.generators[i]));
      gens.push_back(e);
    }
    j["generators"] = gens;
    j["ball"] = ball_json(*a->ball);
    *json_out = dup(dump_json(j));
  });
}

ggt_status ggt_action_sandwich(const ggt_action* a, size_t samples, uint64_t seed, char** json_out) {
  return guard([&] {
    need(a, "action");
    need(json_out, "output");
    SandwichReport r = qi_sandwich_check(a->action, a->set, *a->ball, samples, seed);
    json j;
    j["pairs"] = r.pairs;
    j["violations"] = r.violations;
    j["worst_lower_margin"] = r.worst_lower_margin;
    j["worst_upper_margin"] = r.worst_upper_margin;
    *json_out = dup(dump_json(j));
  });
}

ggt_status ggt_certify_cat0(ggt_action* a, const char* word, char** json_out) {
  return guard([&] {
    need(a, "action");
    need(word, "word");
    need(json_out, "output");
    const Alphabet& al = a->set.backend->alphabet();
    Word w = parse_word(word, al);
    if (half_length(w) > a->ball->radius())
      a->ball = std::make_shared<const CayleyBall>(build_ball(a->set.backend, half_length(w), a->cap));
    Cat0Certificate cert = certify_cat0_word(a->action, a->set, *a->ball, w);
    VerifyResult v = verify_cat0(cert, *a->set.backend, a->ball.get());
    if (!v) fail(ErrorCode::Verification, "cat0 certificate failed its own verification: " + v.reason);
    *json_out = dup(dump_json(cat0_json(cert, al)));
  });
}

ggt_status ggt_cover_growth(ggt_group* g, const char* omega, const unsigned* radii, size_t count, unsigned weight_p,
                            const char* method, const char* filler, unsigned jobs, char** csv_out,
                            char** cochain_out) {
  return guard([&] {
    need(g, "group");
    need(omega, "omega");
    need(csv_out, "output");
    if (count) need(radii, "radii");
    InvariantTwoCochain w = parse_two_cochain(omega, g->pres);
    GrowthMethod m = parse_growth_method(method ? method : "combing");
    Filler fl = filler ? parse_filler(filler) : default_filler(*g->backend);
    std::vector<unsigned> rs(radii, radii + count);
    WeightFn f = WeightFn::power(weight_p);
    auto rows = cover_growth(g->pres, g->backend, w, rs, f, m, fl, g->balls, SearchCaps{}, jobs ? jobs : 1);
    std::string dump;
    if (cochain_out && m != GrowthMethod::Lp && !rs.empty()) {
      unsigned top = *std::max_element(rs.begin(), rs.end());
      CoverBall cb = build_cover_ball(g->pres, g->balls(top), top);
      dump = dump_json(cochain_json(cb, combing_primitive(cb, *g->backend, w, fl)));
    }
    *csv_out = dup(growth_csv(rows));
    if (cochain_out) *cochain_out = dump.empty() ? nullptr : dup(dump);
  });
}

ggt_status ggt_verify(ggt_group* g, const char* cert_json, char** report_out) {
  VerifyResult result;
  json report;
  json cert;
  ggt_status s = guard([&] {
    need(cert_json, "certificate");
    cert = parse_json(cert_json, "certificate");
    if (!cert.is_object()) fail(ErrorCode::Parse, "certificate must be a JSON object");
  });
  if (s != GGT_OK) return s;
  s = guard([&] { result = verify_json(g, cert, report); });
  if (s == GGT_ERR_VERIFICATION || s == GGT_ERR_PARSE) {
    // Certificates with missing fields or inconsistent values are rejected.
    result = VerifyResult::failure(g_error);
    s = GGT_OK;
  }
  if (s != GGT_OK) return s;
  report["valid"] = result.ok;
  report["reason"] = result.reason;
  if (report_out) *report_out = dup(dump_json(report));
  if (!result) {
    g_error = result.reason;
    return GGT_ERR_VERIFICATION;
  }
  return GGT_OK;
}

}  // extern "C"
