#include "io.hpp"

#include <openssl/evp.h>

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "error.hpp"

namespace ggt {

namespace {

std::string word_str(const Word& w, const Alphabet& a) { return format_word(w, a); }

Word word_at(const json& j, const char* field, const Alphabet& a) {
  return parse_word(j.at(field).get<std::string>(), a);
}

Rational rational_at(const json& j, const char* field) {
  const json& v = j.at(field);
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return make_rational(v.get<std::int64_t>());
  fail(ErrorCode::Parse, std::string("field '") + field + "' must be an exact rational string");
}

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string(what) + ": " + e.what());
  }
}

}  // namespace

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, what + ": " + e.what());
  }
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

json certificate_json(const AreaCertificate& c, const Alphabet& a) {
  json j;
  j["word"] = word_str(c.word, a);
  j["relator_convention"] = convention_name(c.convention, c.max_relator_length);
  j["entries"] = json::array();
  for (const auto& e : c.entries) j["entries"].push_back({{"v", word_str(e.conjugator, a)}, {"r", word_str(e.relator, a)}});
  return j;
}

AreaCertificate certificate_from_json(const json& j, const Alphabet& a) {
  return guarded("certificate", [&] {
    AreaCertificate c;
    c.word = word_at(j, "word", a);
    c.convention = parse_convention(j.at("relator_convention").get<std::string>(), c.max_relator_length);
    for (const auto& e : j.at("entries")) c.entries.push_back({word_at(e, "v", a), word_at(e, "r", a)});
    return c;
  });
}

json ladder_json(const LadderCertificate& c, const Alphabet& a) {
  json j = certificate_json(c.cert, a);
  j["k"] = c.k;
  j["K"] = c.K;
  j["radial_bound"] = to_string(c.radial_bound);
  j["count"] = c.count();
  j["provenance"] = json::array();
  for (const auto& p : c.provenance) j["provenance"].push_back({p.row, p.rung});
  return j;
}

LadderCertificate ladder_from_json(const json& j, const Alphabet& a) {
  LadderCertificate c;
  c.cert = certificate_from_json(j, a);
  guarded("ladder certificate", [&] {
    c.k = j.at("k").get<unsigned>();
    c.K = j.at("K").get<unsigned>();
    c.radial_bound = rational_at(j, "radial_bound");
    if (j.at("count").get<std::size_t>() != c.count()) fail(ErrorCode::Verification, "stated count differs from the entries");
    if (j.contains("provenance"))
      for (const auto& p : j.at("provenance")) c.provenance.push_back({p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>()});
    return 0;
  });
  return c;
}

json cat0_json(const Cat0Certificate& c, const Alphabet& a) {
  json j = certificate_json(c.cert, a);
  j["D2"] = to_string(c.D2);
  j["D"] = std::sqrt(c.D2.get_d());
  j["bound"] = to_string(c.bound);
  j["sample_bound"] = to_string(c.sample_bound);
  j["count"] = c.count();
  j["max_loop"] = c.max_loop;
  j["max_horizontal"] = c.max_horizontal;
  j["max_vertical"] = c.max_vertical;
  j["trace"] = json::array();
  for (const auto& r : c.trace) {
    j["trace"].push_back({{"row", r.row},
                          {"distance", r.distance},
                          {"samples", r.samples},
                          {"elements", r.elements},
                          {"snap", r.snap},
                          {"vertical", r.vertical},
                          {"horizontal", r.horizontal},
                          {"max_chain", r.max_chain}});
  }
  j["action"] = c.action_json.empty() ? json(nullptr) : json::parse(c.action_json);
  return j;
}

Cat0Certificate cat0_from_json(const json& j, const Alphabet& a) {
  Cat0Certificate c;
  c.cert = certificate_from_json(j, a);
  guarded("cat0 certificate", [&] {
    c.D2 = rational_at(j, "D2");
    c.bound = rational_at(j, "bound");
    if (j.contains("sample_bound")) c.sample_bound = rational_at(j, "sample_bound");
    if (j.at("count").get<std::size_t>() != c.count()) fail(ErrorCode::Verification, "stated count differs from the entries");
    c.max_loop = j.value("max_loop", std::size_t{0});
    c.max_horizontal = j.value("max_horizontal", std::size_t{0});
    c.max_vertical = j.value("max_vertical", std::size_t{0});
    for (const auto& r : j.at("trace")) {
      Cat0TraceRow row;
      row.row = r.at("row").get<std::size_t>();
      row.distance = r.at("distance").get<double>();
      row.samples = r.at("samples").get<std::size_t>();
      row.elements = r.at("elements").get<std::vector<ElementId>>();
      row.snap = r.at("snap").get<std::vector<double>>();
      row.vertical = r.at("vertical").get<std::vector<std::size_t>>();
      row.horizontal = r.at("horizontal").get<std::vector<std::size_t>>();
      row.max_chain = r.at("max_chain").get<double>();
      c.trace.push_back(std::move(row));
    }
    if (j.contains("action") && !j.at("action").is_null()) c.action_json = j.at("action").dump();
    return 0;
  });
  return c;
}

std::string certificate_kind(const json& j) {
  if (j.contains("trace")) return "cat0";
  if (j.contains("k")) return "ladder";
  return "area";
}

json ball_json(const CayleyBall& ball) {
  json j;
  j["radius"] = ball.radius();
  j["count"] = ball.size();
  j["histogram"] = ball.sphere_sizes();
  return j;
}

json piece_report_json(const PieceReport& r) {
  return {{"max_piece", r.max_piece},
          {"min_relator_length", r.min_relator_length},
          {"ratio", to_string(r.ratio)},
          {"lambda", to_string(r.lambda)},
          {"passes", r.passes}};
}

json cochain_json(const CoverBall& cb, const OneCochain& eta) {
  if (eta.size() != cb.edges().size()) fail(ErrorCode::InvalidArgument, "cochain size differs from the edge count");
  const Alphabet& a = cb.presentation().alphabet();
  json j = json::object();
  for (std::size_t e = 0; e < eta.size(); ++e) {
    const CoverEdge& edge = cb.edges()[e];
    const Word& rep = cb.ball().element(edge.from).rep;
    std::string key = rep.empty() ? "e" : format_word(rep, a);
    key += ":" + a.letter_name(Letter::of(edge.gen, false));
    j[key] = to_string(eta[e]);
  }
  return j;
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr)) fail(ErrorCode::Io, "sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

std::string ball_cache_name(const std::string& presentation, const std::string& backend, unsigned radius) {
  std::string id = presentation + "\n" + backend + "\n" + std::to_string(radius);
  return sha256_hex(id) + ".ball";
}

BallProvider cached_ball_provider(std::shared_ptr<const Backend> backend, const std::string& presentation,
                                  const std::string& backend_spec, std::size_t cap, const std::string& dir) {
  if (dir.empty()) return default_ball_provider(std::move(backend), cap);
  auto memo = std::make_shared<std::shared_ptr<const CayleyBall>>();
  return [=](unsigned radius) {
    if (*memo && (*memo)->radius() >= radius) return *memo;
    namespace fs = std::filesystem;
    fs::path path = fs::path(dir) / ball_cache_name(presentation, backend_spec, radius);
    std::shared_ptr<const CayleyBall> ball;
    if (fs::exists(path)) {
      std::ifstream in(path, std::ios::binary);
      try {
        ball = std::make_shared<const CayleyBall>(load_ball(backend, in));
        if (ball->radius() != radius) ball.reset();
      } catch (const Error&) {
        ball.reset();
      }
    }
    if (!ball) {
      ball = std::make_shared<const CayleyBall>(build_ball(backend, radius, cap));
      std::error_code ec;
      fs::create_directories(dir, ec);
      fs::path tmp = path;
      tmp += ".tmp" + std::to_string(::getpid());
      try {
        {
          std::ofstream out(tmp, std::ios::binary);
          save_ball(*ball, out);
        }
        fs::rename(tmp, path, ec);
      } catch (const Error&) {
        ec = std::make_error_code(std::errc::io_error);
      }
      if (ec) fs::remove(tmp, ec);
    }
    *memo = ball;
    return ball;
  };
}

std::string default_cache_dir() {
  const char* d = std::getenv("GGT_CACHE_DIR");
  return d ? std::string(d) : std::string();
}

}  // namespace ggt
