#include "automatic.hpp"

#include <algorithm>
#include "json.hpp"

#include "error.hpp"

namespace ggt {

using nlohmann::json;

FSA::FSA(Alphabet alphabet, std::size_t states, std::size_t initial, std::vector<std::size_t> accepting)
    : alphabet_(std::move(alphabet)), states_(states), initial_(initial), accepting_(states, false) {
  if (states == 0) fail(ErrorCode::InvalidArgument, "automaton needs at least one state");
  if (initial >= states) fail(ErrorCode::InvalidArgument, "initial state out of range");
  for (std::size_t s : accepting) {
    if (s >= states) fail(ErrorCode::InvalidArgument, "accepting state " + std::to_string(s) + " out of range");
    accepting_[s] = true;
  }
  delta_.assign(states * alphabet_.letters(), -1);
}

void FSA::add_transition(std::size_t from, Letter l, std::size_t to) {
  if (from >= states_ || to >= states_) fail(ErrorCode::InvalidArgument, "transition state out of range");
  if (l.code() >= alphabet_.letters()) fail(ErrorCode::InvalidArgument, "transition letter outside the alphabet");
  auto& slot = delta_[from * alphabet_.letters() + l.code()];
  if (slot >= 0 && static_cast<std::size_t>(slot) != to)
    fail(ErrorCode::InvalidArgument, "nondeterministic transition from state " + std::to_string(from) + " on '" +
                                         alphabet_.letter_name(l) + "'");
  slot = static_cast<std::ptrdiff_t>(to);
}

std::optional<std::size_t> FSA::next(std::size_t s, Letter l) const {
  if (l.code() >= alphabet_.letters()) return std::nullopt;
  auto t = delta_[s * alphabet_.letters() + l.code()];
  if (t < 0) return std::nullopt;
  return static_cast<std::size_t>(t);
}

bool FSA::accepts(const Word& w) const {
  std::size_t s = initial_;
  for (Letter l : w) {
    auto t = next(s, l);
    if (!t) return false;
    s = *t;
  }
  return accepting_[s];
}

std::vector<Word> FSA::enumerate_language(std::size_t max_len) const {
  // live[s][n]: some accepting state is reachable from s in at most n steps.
  const std::size_t nl = alphabet_.letters();
  std::vector<std::vector<bool>> live(max_len + 1, std::vector<bool>(states_, false));
  for (std::size_t s = 0; s < states_; ++s) live[0][s] = accepting_[s];
  for (std::size_t n = 1; n <= max_len; ++n)
    for (std::size_t s = 0; s < states_; ++s) {
      bool ok = live[n - 1][s];
      for (std::uint32_t c = 0; c < nl && !ok; ++c) {
        auto t = delta_[s * nl + c];
        ok = t >= 0 && live[n - 1][t];
      }
      live[n][s] = ok;
    }

  std::vector<Word> out;
  for (std::size_t len = 0; len <= max_len; ++len) {
    // Depth-first in letter order emits words of this length lexicographically.
    Word cur;
    std::vector<std::pair<std::size_t, std::uint32_t>> stack{{initial_, 0}};
    while (!stack.empty()) {
      auto& [state, code] = stack.back();
      if (cur.size() == len) {
        if (accepting_[state]) out.push_back(cur);
        stack.pop_back();
        if (!cur.empty()) cur.pop_back();
        continue;
      }
      if (code == nl) {
        stack.pop_back();
        if (!cur.empty()) cur.pop_back();
        continue;
      }
      std::uint32_t c = code++;
      auto t = delta_[state * nl + c];
      std::size_t remaining = len - cur.size() - 1;
      if (t < 0 || !live[remaining][t]) continue;
      cur.push_back(Letter(c));
      stack.emplace_back(static_cast<std::size_t>(t), 0);
    }
  }
  return out;
}

FSA parse_fsa(const std::string& json_text, const Alphabet& alphabet) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("automaton file: ") + e.what());
  }
  try {
    std::vector<Letter> letters;
    // A generator name admits the generator and its inverse; an inverse token admits only itself.
    for (const auto& tok : j.at("alphabet")) {
      Letter l = alphabet.letter(tok.get<std::string>());
      letters.push_back(l);
      if (!l.inverted()) letters.push_back(l.inverse());
    }
    std::vector<std::size_t> accepting = j.at("accepting").get<std::vector<std::size_t>>();
    FSA fsa(alphabet, j.at("states").get<std::size_t>(), j.at("initial").get<std::size_t>(), accepting);
    for (const auto& t : j.at("transitions")) {
      if (!t.is_array() || t.size() != 3) fail(ErrorCode::Parse, "transition must be [from, letter, to]");
      Letter l = alphabet.letter(t[1].get<std::string>());
      if (std::find(letters.begin(), letters.end(), l) == letters.end())
        fail(ErrorCode::Parse, "transition letter '" + t[1].get<std::string>() + "' not in the automaton alphabet");
      fsa.add_transition(t[0].get<std::size_t>(), l, t[2].get<std::size_t>());
    }
    return fsa;
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("automaton file: ") + e.what());
  }
}

FSA reduced_word_acceptor(const Alphabet& alphabet) {
  // State 0 is the start; state c+1 remembers that the last letter had code c.
  const std::size_t nl = alphabet.letters();
  std::vector<std::size_t> all(nl + 1);
  for (std::size_t s = 0; s <= nl; ++s) all[s] = s;
  FSA fsa(alphabet, nl + 1, 0, all);
  for (std::size_t s = 0; s <= nl; ++s)
    for (std::uint32_t c = 0; c < nl; ++c) {
      if (s > 0 && Letter(static_cast<std::uint32_t>(s - 1)).inverse().code() == c) continue;
      fsa.add_transition(s, Letter(c), c + 1);
    }
  return fsa;
}

// ---------------------------------------------------------------------------

Combing combing_from_ball(std::shared_ptr<const CayleyBall> ball) {
  Combing c;
  c.source = Combing::Source::ShortlexFromBall;
  c.reps.reserve(ball->size());
  for (ElementId g = 0; g < ball->size(); ++g) c.reps.push_back(ball->element(g).rep);
  c.ball = std::move(ball);
  return c;
}

Combing combing_from_fsa(std::shared_ptr<const CayleyBall> ball, const FSA& fsa, std::size_t max_len) {
  if (!(fsa.alphabet() == ball->backend().alphabet()))
    fail(ErrorCode::InvalidArgument, "automaton alphabet differs from the group alphabet");
  Combing c;
  c.source = Combing::Source::FromFSA;
  std::vector<bool> seen(ball->size(), false);
  c.reps.assign(ball->size(), Word{});
  for (const Word& w : fsa.enumerate_language(max_len)) {
    auto id = ball->find(w);
    if (!id) continue;
    if (seen[*id])
      fail(ErrorCode::Verification, "language is not bijective: two accepted words represent element " +
                                        std::to_string(*id));
    seen[*id] = true;
    c.reps[*id] = w;
  }
  for (ElementId g = 0; g < ball->size(); ++g)
    if (!seen[g])
      fail(ErrorCode::Verification, "language misses ball element " + std::to_string(g) + " up to length " +
                                        std::to_string(max_len));
  if (!c.reps[ball->identity()].empty())
    fail(ErrorCode::Verification, "representative of the identity is not the empty word");
  c.ball = std::move(ball);
  return c;
}

namespace {

std::vector<std::vector<ElementId>> rep_paths(const Combing& c) {
  std::vector<std::vector<ElementId>> paths;
  paths.reserve(c.reps.size());
  for (const Word& r : c.reps) paths.push_back(c.ball->walk(r));
  return paths;
}

}  // namespace

unsigned fellow_traveler_constant(const Combing& c) {
  const CayleyBall& ball = *c.ball;
  auto paths = rep_paths(c);
  const std::size_t nl = ball.backend().alphabet().letters();
  unsigned k = 0;
  for (ElementId g = 0; g < ball.size(); ++g)
    for (std::uint32_t code = 0; code < nl; ++code) {
      ElementId h = ball.neighbor(g, Letter(code));
      if (h == kNoElement || h < g) continue;
      const auto& pg = paths[g];
      const auto& ph = paths[h];
      std::size_t steps = std::max(pg.size(), ph.size());
      for (std::size_t i = 0; i < steps; ++i) {
        ElementId a = pg[std::min(i, pg.size() - 1)];
        ElementId b = ph[std::min(i, ph.size() - 1)];
        k = std::max(k, ball.distance(a, b));
      }
    }
  return k;
}

unsigned length_diff_bound(const Combing& c) {
  const CayleyBall& ball = *c.ball;
  const std::size_t nl = ball.backend().alphabet().letters();
  unsigned K = 0;
  for (ElementId g = 0; g < ball.size(); ++g)
    for (std::uint32_t code = 0; code < nl; ++code) {
      ElementId h = ball.neighbor(g, Letter(code));
      if (h == kNoElement) continue;
      std::size_t a = c.reps[g].size(), b = c.reps[h].size();
      K = std::max<unsigned>(K, static_cast<unsigned>(a > b ? a - b : b - a));
    }
  return K;
}

Rational geodesic_ratio(const Combing& c) {
  Rational best = 0;
  for (ElementId g = 1; g < c.ball->size(); ++g) {
    Rational r(static_cast<unsigned long>(c.reps[g].size()), c.ball->element(g).distance);
    r.canonicalize();
    best = std::max(best, r);
  }
  return best;
}

LadderCertificate certify_identity_word(const Combing& c, unsigned k, unsigned K_len, const Word& w) {
  const CayleyBall& ball = *c.ball;
  const Backend& backend = ball.backend();
  if (!backend.is_identity(w)) fail(ErrorCode::NotIdentity, "word is not trivial in the group");

  std::vector<ElementId> ids;
  try {
    ids = ball.walk(w);
  } catch (const OutOfBallError& e) {
    // Some prefix lies at distance >= e.needed_radius(); its rungs reach k further.
    throw OutOfBallError(std::string(e.what()) + "; rebuild with a larger radius", e.needed_radius() + k + 1);
  }
  unsigned max_d = 0;
  for (ElementId id : ids) max_d = std::max(max_d, ball.element(id).distance);
  auto escape = [&](const std::string& what) {
    throw OutOfBallError(what + "; rebuild with a larger radius", max_d + k + 1);
  };

  LadderCertificate out;
  out.k = k;
  out.K = std::max(K_len, 1u);
  out.cert.word = w;
  out.cert.convention = RelatorConvention::BoundedIdentity;
  out.cert.max_relator_length = 2 * static_cast<std::size_t>(k) + 2;

  Rational sum = 0;
  for (std::size_t i = 1; i < ids.size(); ++i) sum += ball.element(ids[i]).distance + 1;
  out.radial_bound = Rational(2 * out.K) * sum;

  for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
    const Word& x = c.reps[ids[i]];
    const Word& y = c.reps[ids[i + 1]];
    std::vector<ElementId> px, py;
    try {
      px = ball.walk(x);
      py = ball.walk(y);
    } catch (const OutOfBallError&) {
      escape("representative leaves the ball");
    }
    const std::size_t T = std::max(x.size(), y.size());
    std::vector<Word> rung(T + 1);
    rung[T] = Word{w[i]};
    for (std::size_t t = 1; t < T; ++t) {
      auto q = ball.quotient(px[std::min(t, x.size())], py[std::min(t, y.size())]);
      if (!q) escape("rung connector leaves the ball");
      rung[t] = ball.element(*q).rep;
      if (rung[t].size() > k)
        fail(ErrorCode::Verification, "rung of length " + std::to_string(rung[t].size()) + " exceeds k = " +
                                          std::to_string(k));
    }
    for (std::size_t t = T; t-- > 0;) {
      Word loop;
      if (t < x.size()) loop.push_back(x[t]);
      loop.append(rung[t + 1]);
      if (t < y.size()) loop.push_back(y[t].inverse());
      loop.append(rung[t].inverse());
      loop = loop.reduced();
      if (loop.empty()) continue;
      out.cert.entries.push_back({x.prefix(std::min(t, x.size())), std::move(loop)});
      out.provenance.push_back({i, t});
    }
  }
  return out;
}

VerifyResult verify_ladder(const LadderCertificate& cert, const Backend& backend, const CayleyBall* ball) {
  if (cert.cert.convention != RelatorConvention::BoundedIdentity)
    return VerifyResult::failure("ladder certificate must use the bounded-identity convention");
  if (cert.cert.max_relator_length != 2 * static_cast<std::size_t>(cert.k) + 2)
    return VerifyResult::failure("relator bound is not 2k+2 for k = " + std::to_string(cert.k));
  Presentation bare(backend.alphabet(), {});
  VerifyResult r = verify_certificate(bare, cert.cert, &backend);
  if (!r) return r;
  if (Rational(static_cast<unsigned long>(cert.count())) > cert.radial_bound)
    return VerifyResult::failure("count " + std::to_string(cert.count()) + " exceeds the stated bound " +
                                 to_string(cert.radial_bound));
  if (ball) {
    Rational sum = 0;
    try {
      for (unsigned d : prefix_distances(*ball, cert.cert.word)) sum += d + 1;
    } catch (const OutOfBallError&) {
      return VerifyResult::failure("word leaves the verification ball");
    }
    if (Rational(2 * std::max(cert.K, 1u)) * sum != cert.radial_bound)
      return VerifyResult::failure("stated bound differs from 2K sum(d+1) = " +
                                   to_string(Rational(2 * std::max(cert.K, 1u)) * sum));
  }
  return {};
}

}  // namespace ggt
