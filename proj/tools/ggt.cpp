// ggt: command-line driver over the C interface.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ggt/ggt.h"
#include "json.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kVerification = 2;

struct Failure {
  int code;
  std::string message;
};

void check(ggt_status s) {
  if (s == GGT_OK) return;
  std::string msg = std::string(ggt_status_name(s)) + ": " + ggt_last_error();
  throw Failure{s == GGT_ERR_VERIFICATION ? kVerification : kUsage, msg};
}

// Owns a string returned by the library.
struct Str {
  char* p = nullptr;
  ~Str() { ggt_string_free(p); }
  std::string get() const { return p ? std::string(p) : std::string(); }
};

struct Group {
  ggt_group* g = nullptr;
  Group(const std::string& pres, const std::string& backend, std::size_t cap) {
    check(ggt_group_new(pres.c_str(), backend.c_str(), cap, &g));
  }
  ~Group() { ggt_group_free(g); }
};

std::string sha256(const std::string& s) {
  Str out;
  check(ggt_sha256_hex(s.data(), s.size(), &out.p));
  return out.get();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kUsage, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// "1:8", "2,4,7" or "3".
std::vector<std::size_t> parse_range(const std::string& text) {
  std::vector<std::size_t> out;
  auto num = [&](const std::string& s) -> std::size_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw Failure{kUsage, "bad range '" + text + "'"};
    return std::stoul(s);
  };
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto colon = part.find(':');
    if (colon == std::string::npos) {
      out.push_back(num(part));
      continue;
    }
    std::size_t lo = num(part.substr(0, colon)), hi = num(part.substr(colon + 1));
    if (lo > hi) throw Failure{kUsage, "empty range '" + part + "'"};
    for (std::size_t i = lo; i <= hi; ++i) out.push_back(i);
  }
  if (out.empty()) throw Failure{kUsage, "empty range"};
  return out;
}

struct Run {
  std::string command;
  json config = json::object();
  json artifacts = json::array();
  std::string manifest;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  // Writes to `path`, or to stdout when path is empty.
  void emit(const std::string& path, const std::string& data) {
    if (path.empty()) {
      std::cout << data;
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Failure{kUsage, "cannot write " + path};
    out << data;
    out.close();
    artifacts.push_back({{"path", path}, {"sha256", sha256(data)}, {"bytes", data.size()}});
    if (manifest.empty()) manifest = path + ".manifest.json";
  }

  void finish() {
    if (manifest.empty() || manifest == "-") return;
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    json m;
    m["command"] = command;
    m["tool_version"] = ggt_version();
    m["config"] = config;
    m["artifacts"] = artifacts;
    m["run"] = {{"timestamp", stamp}, {"elapsed_seconds", elapsed}};
    std::ofstream out(manifest, std::ios::binary);
    out << m.dump(2) << "\n";
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Word metrics, areas, radial costs, certificates and cover growth for finitely presented groups"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ggt_version()));

  std::string pres, backend = "abelian", cache_dir, manifest;
  std::size_t ball_cap = 5000000;
  unsigned jobs = 1;
  bool cache_set = false;
  auto common = [&](CLI::App* s, bool with_group) {
    if (with_group) {
      s->add_option("--pres", pres, "Presentation \"<a,b|abAB>\"")->required();
      s->add_option("--backend", backend, "free|abelian|c16|product:...")->capture_default_str();
    }
    s->add_option("--ball-cap", ball_cap, "Largest ball (elements)")->capture_default_str();
    s->add_option_function<std::string>(
        "--cache-dir", [&](const std::string& d) {
          cache_dir = d;
          cache_set = true;
        }, "Ball cache directory");
    s->add_option("--manifest", manifest, "Manifest path (default <first output>.manifest.json, - for none)");
  };

  auto* ball = app.add_subcommand("ball", "BFS ball summary");
  unsigned radius = 0;
  std::string out;
  common(ball, true);
  ball->add_option("--radius", radius)->required();
  ball->add_option("--out", out, "JSON output");

  auto* area = app.add_subcommand("area", "Exact area bounds with a certificate");
  std::string word, cert_out;
  std::size_t cap_len = 0, cap_states = 0;
  common(area, true);
  area->add_option("--word", word)->required();
  area->add_option("--cap-len", cap_len, "Longest intermediate word (0: default)");
  area->add_option("--cap-states", cap_states, "Search state cap (0: default)");
  area->add_option("--out", out, "CSV output");
  area->add_option("--cert", cert_out, "Certificate JSON output");

  auto* prof = app.add_subcommand("profile", "Radial cost profile over a word family");
  std::string family = "commutator-power", ns = "1:3";
  unsigned p = 2;
  common(prof, true);
  prof->add_option("--family", family)->capture_default_str();
  prof->add_option("--p", p, "Weight exponent: f(t) = (t+1)^(p-1)")->capture_default_str();
  prof->add_option("--n", ns, "Members, e.g. 1:8 or 1,3,5")->capture_default_str();
  prof->add_option("--cap-len", cap_len);
  prof->add_option("--cap-states", cap_states);
  prof->add_option("--jobs", jobs)->capture_default_str();
  prof->add_option("--out", out, "CSV output");

  auto* automatic = app.add_subcommand("certify-auto", "Ladder certificates from a combing");
  std::string fsa;
  std::vector<std::string> words;
  unsigned measure_radius = 6;
  common(automatic, true);
  automatic->add_option("--fsa", fsa, "Word acceptor JSON file (default: shortlex geodesics)");
  automatic->add_option("--radius", measure_radius, "Ball radius for measuring k and K")->capture_default_str();
  automatic->add_option("--word", words, "Identity word (repeatable)")->required();
  automatic->add_option("--out", out, "Certificate JSON output (an array for several words)");

  auto* cat0 = app.add_subcommand("certify-cat0", "Certificates from a cocompact CAT(0) action");
  std::string action;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  unsigned cat0_radius = 3;
  common(cat0, false);
  cat0->add_option("--action", action, "Action config JSON file")->required();
  cat0->add_option("--radius", cat0_radius, "Ball radius over the derived generators")->capture_default_str();
  cat0->add_option("--word", words, "Identity word over s0, S0, s1, ... (repeatable)");
  cat0->add_option("--samples", samples, "Pairs for the quasi-isometry check (0: all)")->capture_default_str();
  cat0->add_option("--seed", seed)->capture_default_str();
  cat0->add_option("--out", out, "Certificate JSON output");
  cat0->add_option("--report", cert_out, "Generating set and sandwich report JSON");

  auto* cover = app.add_subcommand("cover", "Universal-cover experiments");
  cover->require_subcommand(1);
  auto* growth = cover->add_subcommand("growth", "Primitive growth over radii");
  std::string omega = "1", radii = "2:4", method = "combing", filler, cochain_out;
  unsigned weight_p = 1, lp_max_radius = 20;
  common(growth, true);
  growth->add_option("--omega", omega, "\"r1=1,r2=-1/2\" or one value for all relators")->capture_default_str();
  growth->add_option("--radii", radii)->capture_default_str();
  growth->add_option("--weight-p", weight_p)->capture_default_str();
  growth->add_option("--method", method, "combing|lp|both")->capture_default_str();
  growth->add_option("--filler", filler, "dehn|grid|search (default per backend)");
  growth->add_option("--lp-max-radius", lp_max_radius, "Largest radius accepted with the lp method")->capture_default_str();
  growth->add_option("--jobs", jobs)->capture_default_str();
  growth->add_option("--out", out, "CSV output");
  growth->add_option("--cochain-out", cochain_out, "Primitive on the largest radius as JSON");

  auto* ver = app.add_subcommand("verify", "Verify a certificate file");
  std::string cert_in;
  bool have_group = false;
  ver->add_option("--cert", cert_in)->required();
  ver->add_option("--pres", pres, "Presentation (not needed for cat0 certificates)")
      ->each([&](const std::string&) { have_group = true; });
  ver->add_option("--backend", backend)->capture_default_str();
  ver->add_option("--ball-cap", ball_cap)->capture_default_str();
  ver->add_option("--out", out, "Report JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  Run run;
  run.manifest = manifest;
  try {
    if (cache_set) check(ggt_set_cache_dir(cache_dir.c_str()));
    auto base = [&](const char* cmd) {
      run.command = cmd;
      run.config["presentation"] = pres;
      run.config["backend"] = backend;
      run.config["ball_cap"] = ball_cap;
    };

    if (*ball) {
      base("ball");
      run.config["radius"] = radius;
      Group g(pres, backend, ball_cap);
      Str j;
      check(ggt_ball(g.g, radius, &j.p));
      run.emit(out, j.get());
    } else if (*area) {
      base("area");
      run.config["word"] = word;
      run.config["cap_len"] = cap_len;
      run.config["cap_states"] = cap_states;
      Group g(pres, backend, ball_cap);
      Str csv, cert;
      check(ggt_area(g.g, word.c_str(), cap_len, cap_states, &csv.p, &cert.p));
      run.emit(out, csv.get());
      if (!cert_out.empty() && cert.p) run.emit(cert_out, cert.get());
    } else if (*prof) {
      base("profile");
      auto list = parse_range(ns);
      run.config["family"] = family;
      run.config["p"] = p;
      run.config["n"] = list;
      run.config["cap_len"] = cap_len;
      run.config["cap_states"] = cap_states;
      Group g(pres, backend, ball_cap);
      Str csv;
      check(ggt_profile(g.g, family.c_str(), p, list.data(), list.size(), cap_len, cap_states, jobs, &csv.p));
      run.emit(out, csv.get());
    } else if (*automatic) {
      base("certify-auto");
      run.config["radius"] = measure_radius;
      run.config["words"] = words;
      std::string fsa_text = fsa.empty() ? "" : read_file(fsa);
      if (!fsa.empty()) run.config["fsa_sha256"] = sha256(fsa_text);
      Group g(pres, backend, ball_cap);
      ggt_combing* c = nullptr;
      check(ggt_combing_new(g.g, fsa.empty() ? nullptr : fsa_text.c_str(), measure_radius, &c));
      std::unique_ptr<ggt_combing, void (*)(ggt_combing*)> hold(c, ggt_combing_free);
      Str info;
      check(ggt_combing_info(c, &info.p));
      run.config["combing"] = json::parse(info.get());
      json certs = json::array();
      for (const auto& w : words) {
        Str cert;
        check(ggt_certify_auto(c, w.c_str(), &cert.p));
        certs.push_back(json::parse(cert.get()));
      }
      run.emit(out, (certs.size() == 1 ? certs[0] : certs).dump(2) + "\n");
    } else if (*cat0) {
      run.command = "certify-cat0";
      run.config["radius"] = cat0_radius;
      run.config["words"] = words;
      run.config["samples"] = samples;
      run.config["seed"] = seed;
      std::string text = read_file(action);
      run.config["action"] = json::parse(text);
      ggt_action* a = nullptr;
      check(ggt_action_new(text.c_str(), cat0_radius, ball_cap, &a));
      std::unique_ptr<ggt_action, void (*)(ggt_action*)> hold(a, ggt_action_free);
      Str info, sandwich;
      check(ggt_action_info(a, &info.p));
      check(ggt_action_sandwich(a, samples, seed, &sandwich.p));
      json report = json::parse(info.get());
      report["sandwich"] = json::parse(sandwich.get());
      if (report["sandwich"]["violations"].get<std::size_t>() != 0)
        throw Failure{kVerification, "quasi-isometry sandwich violated"};
      json certs = json::array();
      for (const auto& w : words) {
        Str cert;
        check(ggt_certify_cat0(a, w.c_str(), &cert.p));
        certs.push_back(json::parse(cert.get()));
      }
      if (!words.empty()) run.emit(out, (certs.size() == 1 ? certs[0] : certs).dump(2) + "\n");
      if (words.empty())
        run.emit(out, report.dump(2) + "\n");
      else if (!cert_out.empty())
        run.emit(cert_out, report.dump(2) + "\n");
    } else if (*growth) {
      base("cover growth");
      auto rs = parse_range(radii);
      std::vector<unsigned> list(rs.begin(), rs.end());
      if (method != "combing")
        for (unsigned r : list)
          if (r > lp_max_radius)
            throw Failure{kUsage, "--method " + method + " with radius " + std::to_string(r) +
                                      " beyond --lp-max-radius " + std::to_string(lp_max_radius)};
      run.config["omega"] = omega;
      run.config["radii"] = list;
      run.config["weight_p"] = weight_p;
      run.config["method"] = method;
      run.config["filler"] = filler.empty() ? "default" : filler;
      Group g(pres, backend, ball_cap);
      Str csv, cochain;
      check(ggt_cover_growth(g.g, omega.c_str(), list.data(), list.size(), weight_p, method.c_str(),
                             filler.empty() ? nullptr : filler.c_str(), jobs, &csv.p,
                             cochain_out.empty() ? nullptr : &cochain.p));
      run.emit(out, csv.get());
      if (!cochain_out.empty() && cochain.p) run.emit(cochain_out, cochain.get());
    } else if (*ver) {
      run.command = "verify";
      std::string text = read_file(cert_in);
      run.config["certificate_sha256"] = sha256(text);
      std::unique_ptr<Group> g;
      if (have_group) {
        run.config["presentation"] = pres;
        run.config["backend"] = backend;
        g = std::make_unique<Group>(pres, backend, ball_cap);
      }
      json doc;
      try {
        doc = json::parse(text);
      } catch (const json::exception& e) {
        throw Failure{kUsage, std::string("certificate is not JSON: ") + e.what()};
      }
      std::vector<json> items = doc.is_array() ? doc.get<std::vector<json>>() : std::vector<json>{doc};
      json reports = json::array();
      bool all = !items.empty();
      std::string first_reason;
      for (const auto& item : items) {
        Str rep;
        ggt_status s = ggt_verify(g ? g->g : nullptr, item.dump().c_str(), &rep.p);
        if (s != GGT_OK && s != GGT_ERR_VERIFICATION) check(s);
        json r = json::parse(rep.get());
        if (!r["valid"].get<bool>()) {
          all = false;
          if (first_reason.empty()) first_reason = r["reason"].get<std::string>();
        }
        reports.push_back(r);
      }
      run.emit(out, (reports.size() == 1 ? reports[0] : reports).dump(2) + "\n");
      run.finish();
      if (!all) {
        std::cerr << "ggt: rejected: " << (first_reason.empty() ? "no certificates" : first_reason) << "\n";
        return kVerification;
      }
      return kOk;
    }
    run.finish();
  } catch (const Failure& f) {
    std::cerr << "ggt: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "ggt: " << e.what() << "\n";
    return kUsage;
  }
  return kOk;
}
