#pragma once

// Word acceptors, combings measured on a Cayley ball, and the ladder
// certificate: an identity word rewritten as a product of conjugated short
// loops between the representatives of consecutive prefixes.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "area.hpp"
#include "cayley.hpp"

namespace ggt {

/// Deterministic finite automaton over the letters of an alphabet.
class FSA {
 public:
  FSA(Alphabet alphabet, std::size_t states, std::size_t initial, std::vector<std::size_t> accepting);

  /// Throws when (from, l) already has a different target.
  void add_transition(std::size_t from, Letter l, std::size_t to);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t states() const { return states_; }
  std::size_t initial() const { return initial_; }
  bool accepting(std::size_t s) const { return accepting_[s]; }
  std::optional<std::size_t> next(std::size_t s, Letter l) const;

  bool accepts(const Word& w) const;
  /// Accepted words of length <= max_len in shortlex order.
  std::vector<Word> enumerate_language(std::size_t max_len) const;

 private:
  Alphabet alphabet_;
  std::size_t states_;
  std::size_t initial_;
  std::vector<bool> accepting_;
  std::vector<std::ptrdiff_t> delta_;  // states x letters, -1 = reject
};

/// {"alphabet": [...], "states": N, "initial": 0, "accepting": [...],
///  "transitions": [[from, "letter", to], ...]}. Letter tokens are resolved
/// against `alphabet`.
FSA parse_fsa(const std::string& json_text, const Alphabet& alphabet);

/// The reduced-word acceptor of the free group on `alphabet`.
FSA reduced_word_acceptor(const Alphabet& alphabet);

struct Combing {
  enum class Source { ShortlexFromBall, FromFSA } source = Source::ShortlexFromBall;
  std::shared_ptr<const CayleyBall> ball;
  std::vector<Word> reps;  // indexed by ElementId
};

Combing combing_from_ball(std::shared_ptr<const CayleyBall> ball);

/// Representatives from the acceptor's language up to max_len. Throws
/// Verification unless every ball element gets exactly one accepted word.
Combing combing_from_fsa(std::shared_ptr<const CayleyBall> ball, const FSA& fsa, std::size_t max_len);

/// max over pairs (g, gs) in the ball and steps i of d(rep(g)(i), rep(gs)(i)),
/// a word past its end staying at its endpoint.
unsigned fellow_traveler_constant(const Combing& c);
/// max over adjacent pairs of |L(rep(g)) - L(rep(gs))|.
unsigned length_diff_bound(const Combing& c);
/// max over g != e of L(rep(g)) / d(g, e).
Rational geodesic_ratio(const Combing& c);

struct LadderEntry {
  std::size_t row = 0;   // prefix index i
  std::size_t rung = 0;  // t
};

struct LadderCertificate {
  AreaCertificate cert;  // convention R_{2k+2}
  unsigned k = 0;
  unsigned K = 0;
  Rational radial_bound;  // 2K sum_i (d(w(i), e) + 1)
  std::vector<LadderEntry> provenance;

  std::size_t count() const { return cert.count(); }
};

/// Requires a combing whose reps fellow-travel with constant k and whose length
/// differences are bounded by K_len (both measured beforehand); K = max(K_len, 1).
LadderCertificate certify_identity_word(const Combing& c, unsigned k, unsigned K_len, const Word& w);

/// Product identity, relator lengths <= 2k+2 and identity words, count <= bound.
/// With a ball, the stated bound must also match 2K sum (d+1) recomputed on it.
VerifyResult verify_ladder(const LadderCertificate& cert, const Backend& backend,
                           const CayleyBall* ball = nullptr);

}  // namespace ggt
