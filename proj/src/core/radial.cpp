#include "radial.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "error.hpp"
#include "parallel.hpp"

namespace ggt {

WeightFn WeightFn::power(unsigned p) {
  if (p < 1) fail(ErrorCode::InvalidArgument, "weight exponent p must be >= 1");
  WeightFn f;
  f.p_ = p;
  return f;
}

WeightFn WeightFn::custom(std::vector<Rational> table) {
  if (table.empty()) fail(ErrorCode::InvalidArgument, "custom weight table is empty");
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i] < 1) fail(ErrorCode::InvalidArgument, "weight must be >= 1 (entry " + std::to_string(i) + ")");
    if (i > 0 && table[i] < table[i - 1])
      fail(ErrorCode::InvalidArgument, "weight must be nondecreasing (entry " + std::to_string(i) + ")");
  }
  WeightFn f;
  f.table_ = std::move(table);
  return f;
}

Rational WeightFn::operator()(unsigned t) const {
  if (table_.empty()) {
    mpz_class v;
    mpz_ui_pow_ui(v.get_mpz_t(), t + 1, p_ - 1);
    return Rational(v);
  }
  if (t >= table_.size())
    fail(ErrorCode::InvalidArgument, "custom weight undefined at t = " + std::to_string(t));
  return table_[t];
}

std::string WeightFn::describe() const {
  if (table_.empty()) return "power:" + std::to_string(p_);
  std::string s = "custom:";
  for (std::size_t i = 0; i < table_.size(); ++i) s += (i ? "," : "") + to_string(table_[i]);
  return s;
}

Rational radial_cost(const CayleyBall& ball, const Word& w, const WeightFn& f) {
  Rational total = 0;
  for (unsigned d : prefix_distances(ball, w)) total += f(d);
  return total;
}

ClassicalCost classical_cost(const CayleyBall& ball, const Word& w, unsigned p) {
  ClassicalCost c;
  auto ds = prefix_distances(ball, w);
  Rational radial = 0;
  WeightFn f = WeightFn::power(p);
  for (unsigned d : ds) {
    c.diam = std::max(c.diam, d);
    radial += f(d);
  }
  c.bound = f(c.diam) * Rational(static_cast<unsigned long>(w.size()));
  if (radial > c.bound)
    fail(ErrorCode::Verification, "radial cost " + to_string(radial) + " exceeds classical bound " + to_string(c.bound));
  return c;
}

std::string WordFamily::describe() const {
  switch (kind) {
    case Kind::CommutatorPower: return "commutator-power";
    case Kind::RelatorPower: return "relator-power:" + std::to_string(relator + 1);
    case Kind::ConjugateChain: return "conjugate-chain:" + std::to_string(relator + 1);
    case Kind::List: return "list";
  }
  return "?";
}

WordFamily parse_family(const std::string& name) {
  WordFamily f;
  auto with_index = [&](const std::string& head) -> std::optional<std::size_t> {
    if (name == head) return 0;
    if (name.rfind(head + ":", 0) != 0) return std::nullopt;
    std::string idx = name.substr(head.size() + 1);
    if (idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos || std::stoul(idx) == 0)
      fail(ErrorCode::Parse, "bad relator index in family '" + name + "'");
    return std::stoul(idx) - 1;
  };
  if (name == "commutator-power") {
    f.kind = WordFamily::Kind::CommutatorPower;
  } else if (auto i = with_index("relator-power")) {
    f.kind = WordFamily::Kind::RelatorPower;
    f.relator = *i;
  } else if (auto j = with_index("conjugate-chain")) {
    f.kind = WordFamily::Kind::ConjugateChain;
    f.relator = *j;
  } else {
    fail(ErrorCode::Parse, "unknown word family '" + name + "'");
  }
  return f;
}

Word family_word(const WordFamily& family, std::size_t n, const Presentation& p) {
  auto relator = [&]() -> const Word& {
    if (family.relator >= p.relators().size())
      fail(ErrorCode::InvalidArgument, "family refers to relator " + std::to_string(family.relator + 1) +
                                           " but the presentation has " + std::to_string(p.relators().size()));
    return p.relators()[family.relator];
  };
  switch (family.kind) {
    case WordFamily::Kind::CommutatorPower: {
      if (p.alphabet().generators() < 2) fail(ErrorCode::InvalidArgument, "commutator family needs two generators");
      Word an = Word{Letter::of(0, false)}.power(n);
      Word bn = Word{Letter::of(1, false)}.power(n);
      return an * bn * an.inverse() * bn.inverse();
    }
    case WordFamily::Kind::RelatorPower: return relator().power(n);
    case WordFamily::Kind::ConjugateChain: {
      Word out;
      const Word& r = relator();
      Word a{Letter::of(0, false)};
      for (std::size_t j = 0; j < n; ++j) out = out * a.power(j) * r * a.power(j).inverse();
      return out;
    }
    case WordFamily::Kind::List:
      if (n == 0 || n > family.words.size())
        fail(ErrorCode::InvalidArgument, "word list has no member " + std::to_string(n));
      return family.words[n - 1];
  }
  return {};
}

BallProvider default_ball_provider(std::shared_ptr<const Backend> backend, std::size_t cap) {
  auto cache = std::make_shared<std::shared_ptr<const CayleyBall>>();
  return [backend, cap, cache](unsigned radius) {
    if (!*cache || (*cache)->radius() < radius)
      *cache = std::make_shared<const CayleyBall>(build_ball(backend, radius, cap));
    return *cache;
  };
}

std::vector<ProfileRow> profile(const Presentation& p, std::shared_ptr<const Backend> backend,
                                const WordFamily& family, const WeightFn& f, const std::vector<std::size_t>& ns,
                                const ProfileOptions& opts, const BallProvider& balls) {
  std::vector<Word> words;
  std::size_t max_len = 0;
  for (std::size_t n : ns) {
    Word w = family_word(family, n, p);
    if (!backend->is_identity(w))
      fail(ErrorCode::NotIdentity, "family member n=" + std::to_string(n) + " is not an identity word");
    max_len = std::max(max_len, w.size());
    words.push_back(std::move(w));
  }
  // Prefix i of an identity word lies within min(i, L-i) of e.
  auto ball = balls(static_cast<unsigned>((max_len + 1) / 2));

  std::vector<ProfileRow> rows(ns.size());
  parallel_for(ns.size(), opts.jobs, [&](std::size_t k) {
    const Word& w = words[k];
    ProfileRow row;
    row.n = ns[k];
    row.length = w.size();
    std::size_t cap_len = opts.cap_len ? opts.cap_len : std::max(w.size(), 4 * w.size() / 3 + 4);
    cap_len = std::max(cap_len, w.reduced().size());
    AreaBounds b = area_bounds(p, *backend, w, cap_len, opts.cap_states);
    row.area_lo = b.lower;
    row.area_hi = b.upper;
    row.exhausted = b.exhausted;
    row.radial = radial_cost(*ball, w, f);
    if (f.is_power()) {
      row.classical = classical_cost(*ball, w, f.p()).bound;
    } else {
      auto ds = prefix_distances(*ball, w);
      unsigned diam = ds.empty() ? 0 : *std::max_element(ds.begin(), ds.end());
      row.classical = f(diam) * Rational(static_cast<unsigned long>(w.size()));
    }
    if (row.area_hi) {
      if (row.radial == 0)
        row.ratio = Rational(0);
      else
        row.ratio = Rational(static_cast<unsigned long>(*row.area_hi)) / row.radial;
    }
    rows[k] = std::move(row);
  });
  return rows;
}

Rational fit_constant(const std::vector<ProfileRow>& rows) {
  if (rows.empty()) fail(ErrorCode::InvalidArgument, "no profile rows to fit");
  Rational best = 0;
  for (const auto& r : rows) {
    if (!r.ratio) fail(ErrorCode::InvalidArgument, "row n=" + std::to_string(r.n) + " has no finite area bound");
    best = std::max(best, *r.ratio);
  }
  return best;
}

std::string profile_csv(const std::vector<ProfileRow>& rows) {
  std::ostringstream out;
  out << "n,L,area_lo,area_hi,radial_cost,classical_bound,ratio,ratio_approx\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.length << ',' << r.area_lo << ',' << (r.area_hi ? std::to_string(*r.area_hi) : "inf")
        << ',' << to_string(r.radial) << ',' << to_string(r.classical) << ',';
    if (r.ratio) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.9f", to_double(*r.ratio));
      out << to_string(*r.ratio) << ',' << buf;
    } else {
      out << ",";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace ggt
