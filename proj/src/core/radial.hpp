#pragma once

// Radial isoperimetric cost sum_i f(d(w(i), e)), the classical
// (diam+1)^(p-1) L(w) bound, and profile tables over word families.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "area.hpp"
#include "cayley.hpp"
#include "rational.hpp"

namespace ggt {

class WeightFn {
 public:
  /// f(t) = (t+1)^(p-1); integer p >= 1 keeps every value exact.
  static WeightFn power(unsigned p);
  /// f(t) = table[t]; must be >= 1 and nondecreasing.
  static WeightFn custom(std::vector<Rational> table);

  Rational operator()(unsigned t) const;
  bool is_power() const { return table_.empty(); }
  unsigned p() const { return p_; }
  std::string describe() const;

 private:
  unsigned p_ = 1;
  std::vector<Rational> table_;
};

/// sum_{i=1}^{L} f(d(w(i), e)); includes the final d = 0 term.
Rational radial_cost(const CayleyBall& ball, const Word& w, const WeightFn& f);

struct ClassicalCost {
  unsigned diam = 0;
  Rational bound;  // (diam+1)^(p-1) * L(w)
};

/// Throws Verification if the radial cost exceeds the classical bound.
ClassicalCost classical_cost(const CayleyBall& ball, const Word& w, unsigned p);

struct ProfileRow {
  std::size_t n = 0;
  std::size_t length = 0;
  std::size_t area_lo = 0;
  std::optional<std::size_t> area_hi;
  bool exhausted = false;
  Rational radial;
  Rational classical;
  std::optional<Rational> ratio;  // area_hi / radial
};

struct WordFamily {
  enum class Kind { CommutatorPower, RelatorPower, ConjugateChain, List } kind = Kind::CommutatorPower;
  std::size_t relator = 0;     // RelatorPower, ConjugateChain
  std::vector<Word> words;     // List: member n is words[n-1]
  std::string describe() const;
};

WordFamily parse_family(const std::string& name);
/// [a^n, b^n] over the first two generators, r^n, prod_{j<n} a^j r a^-j, or the list entry.
Word family_word(const WordFamily& family, std::size_t n, const Presentation& p);

/// Supplies a ball of at least the requested radius.
using BallProvider = std::function<std::shared_ptr<const CayleyBall>(unsigned radius)>;
BallProvider default_ball_provider(std::shared_ptr<const Backend> backend, std::size_t cap);

struct ProfileOptions {
  std::size_t cap_len = 0;     // 0: 4 L(w) / 3 + 4, at least L(w)
  std::size_t cap_states = 2000000;
  unsigned jobs = 1;           // worker threads over rows
};

/// Rows for n in ns. Non-identity members are an error.
std::vector<ProfileRow> profile(const Presentation& p, std::shared_ptr<const Backend> backend,
                                const WordFamily& family, const WeightFn& f, const std::vector<std::size_t>& ns,
                                const ProfileOptions& opts, const BallProvider& balls);

/// max area_hi / radial over the rows; throws if some row has no upper bound.
Rational fit_constant(const std::vector<ProfileRow>& rows);

/// n,L,area_lo,area_hi,radial_cost,classical_bound,ratio,ratio_approx
std::string profile_csv(const std::vector<ProfileRow>& rows);

}  // namespace ggt
