#pragma once

// Word-problem backends: free groups, free abelian groups, C'(1/6) small
// cancellation presentations (Dehn's algorithm) and direct products of free
// and free abelian factors.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rational.hpp"
#include "words.hpp"

namespace ggt {

struct ElementKey {
  std::vector<std::int64_t> data;

  auto operator<=>(const ElementKey&) const = default;
  bool operator==(const ElementKey&) const = default;
};

struct ElementKeyHash {
  std::size_t operator()(const ElementKey& k) const noexcept;
};

enum class BackendKind { FreeGroup, FreeAbelian, SmallCancellation, DirectProduct };

/// One factor of a backend built from generator images.
struct Factor {
  enum class Kind { Free, Abelian } kind = Kind::Free;
  std::size_t rank = 0;
  /// Per generator of the backend alphabet: image word over this factor's
  /// rank generators (Free) ...
  std::vector<Word> free_images;
  /// ... or exponent vector of length rank (Abelian).
  std::vector<std::vector<std::int64_t>> abelian_images;
};

struct PieceReport {
  std::size_t max_piece = 0;
  std::size_t min_relator_length = 0;
  Rational ratio;
  Rational lambda;
  bool passes = false;
};

PieceReport check_small_cancellation(const Presentation& p, const Rational& lambda);

struct DehnMove {
  std::size_t position = 0;
  std::size_t symmetrized = 0;  // index into Presentation::symmetrized()
  std::size_t replaced = 0;     // length of the removed subword
  Word prefix;                  // word before the move, up to position
};

struct DehnResult {
  Word word;
  std::vector<DehnMove> moves;
};

class Backend {
 public:
  /// F_S; the presentation must have no relators.
  static Backend free_group(Presentation p);
  /// Z^n; relators must be identity words and include every generator commutator.
  static Backend free_abelian(Presentation p);
  /// Requires check_small_cancellation(p, 1/6) to pass.
  static Backend small_cancellation(Presentation p);
  /// Generators are split into consecutive blocks, one per factor; relators
  /// must include the commutators across blocks and inside abelian blocks.
  static Backend direct_product(Presentation p, std::vector<std::pair<Factor::Kind, std::size_t>> blocks);

  /// Abstract backends over a derived alphabet, keyed through generator images.
  static Backend from_images(Alphabet alphabet, std::vector<Factor> factors);

  BackendKind kind() const { return kind_; }
  const Alphabet& alphabet() const { return alphabet_; }
  const std::optional<Presentation>& presentation() const { return presentation_; }
  const std::vector<Factor>& factors() const { return factors_; }
  std::string describe() const;

  /// True unless the backend is SmallCancellation (whose keys come from a ball).
  bool exact_keys() const { return kind_ != BackendKind::SmallCancellation; }
  /// Canonical key realizing the evaluation map. Throws for SmallCancellation.
  ElementKey exact_key(const Word& w) const;
  /// A hash that depends only on the group element.
  std::uint64_t invariant_hash(const Word& w) const;

  bool is_identity(const Word& w) const;
  bool equal(const Word& u, const Word& v) const { return is_identity(u.inverse() * v); }

  /// Dehn's algorithm; SmallCancellation only.
  DehnResult dehn_reduce(const Word& w) const;

  Word free_image(std::size_t factor, const Word& w) const;
  std::vector<std::int64_t> abelian_image(std::size_t factor, const Word& w) const;

 private:
  Backend() = default;
  void check_alphabet(const Word& w) const;

  BackendKind kind_ = BackendKind::FreeGroup;
  Alphabet alphabet_;
  std::optional<Presentation> presentation_;
  std::vector<Factor> factors_;
  // SmallCancellation: integer rows spanning the exponent-sum invariants.
  std::vector<std::vector<std::int64_t>> invariant_rows_;
  // SmallCancellation: symmetrized relator indices grouped by first letter code.
  std::vector<std::vector<std::size_t>> by_first_letter_;
};

/// "free", "abelian", "c16", or "product:free:2,abelian:1".
Backend parse_backend(const std::string& spec, const Presentation& p);

inline ElementKey canonical_key(const Backend& b, const Word& w) { return b.exact_key(w); }
inline bool is_identity(const Backend& b, const Word& w) { return b.is_identity(w); }

}  // namespace ggt
