#pragma once

// Free-group words over a symmetric alphabet, and finite presentations.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ggt {

/// A signed generator. The code is 2*gen for the generator and 2*gen+1 for its
/// inverse, so comparing codes gives the shortlex letter order a < A < b < B.
class Letter {
 public:
  constexpr Letter() = default;
  constexpr explicit Letter(std::uint32_t code) : code_(code) {}
  static constexpr Letter of(std::uint32_t gen, bool inverted) {
    return Letter(2 * gen + (inverted ? 1u : 0u));
  }

  constexpr std::uint32_t code() const { return code_; }
  constexpr std::uint32_t gen() const { return code_ >> 1; }
  constexpr bool inverted() const { return (code_ & 1u) != 0; }
  constexpr int sign() const { return inverted() ? -1 : 1; }
  constexpr Letter inverse() const { return Letter(code_ ^ 1u); }

  constexpr auto operator<=>(const Letter&) const = default;

 private:
  std::uint32_t code_ = 0;
};

class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}
  Word(std::initializer_list<Letter> letters) : letters_(letters) {}

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  std::span<const Letter> letters() const { return letters_; }
  auto begin() const { return letters_.begin(); }
  auto end() const { return letters_.end(); }

  void push_back(Letter l) { letters_.push_back(l); }
  void pop_back() { letters_.pop_back(); }
  Letter back() const { return letters_.back(); }
  void append(const Word& other) {
    letters_.insert(letters_.end(), other.letters_.begin(), other.letters_.end());
  }

  Word inverse() const;
  /// First i letters, unreduced. Throws when i > size().
  Word prefix(std::size_t i) const;
  Word subword(std::size_t pos, std::size_t len) const;
  /// Cyclic rotation starting at letter j: w[j..] w[..j].
  Word rotated(std::size_t j) const;
  /// Unique freely reduced representative.
  Word reduced() const;
  /// Freely and cyclically reduced core (conjugate of the reduction).
  Word cyclically_reduced() const;
  bool is_reduced() const;
  Word power(std::size_t n) const;

  friend Word operator*(const Word& a, const Word& b) {
    Word out = a;
    out.append(b);
    return out;
  }

  bool operator==(const Word&) const = default;

  /// Shortlex: length first, then letter codes lexicographically.
  friend std::strong_ordering shortlex_compare(const Word& a, const Word& b);
  friend bool shortlex_less(const Word& a, const Word& b) {
    return shortlex_compare(a, b) < 0;
  }

 private:
  std::vector<Letter> letters_;
};

/// Free reduction of x*y where x and y are already reduced.
Word reduced_product(const Word& x, const Word& y);

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept;
};

/// Ordered generator names. Single-letter names use the compact textual form
/// "abAB"; longer names use dot-separated tokens with an uppercased inverse
/// ("s1.S12").
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);

  std::size_t generators() const { return names_.size(); }
  std::size_t letters() const { return 2 * names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  bool compact() const { return compact_; }

  std::string letter_name(Letter l) const;
  /// Looks up a letter token ("a", "A", "s3", "S3"). Throws on unknown names.
  Letter letter(std::string_view token) const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<std::string> names_;
  bool compact_ = true;
};

/// Parses `letter (^ integer)?` repeated; returns the word unreduced.
Word parse_word(std::string_view text, const Alphabet& alphabet);
std::string format_word(const Word& w, const Alphabet& alphabet);

/// Where a symmetrized relator came from.
struct RelatorForm {
  std::size_t relator = 0;  // index into Presentation::relators()
  bool inverted = false;
  std::size_t rotation = 0;
};

class Presentation {
 public:
  Presentation() = default;
  /// Relators are freely and cyclically reduced; a relator that becomes empty
  /// is rejected.
  Presentation(Alphabet alphabet, std::vector<Word> relators);

  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<Word>& relators() const { return relators_; }
  /// All distinct cyclic rotations of each relator and its inverse, in order
  /// relator, rotation of r, then rotations of r^-1; first occurrence wins.
  const std::vector<Word>& symmetrized() const { return symmetrized_; }
  const std::vector<RelatorForm>& symmetrized_forms() const { return forms_; }
  /// Index into symmetrized(), or -1.
  std::ptrdiff_t find_symmetrized(const Word& w) const;
  std::size_t max_relator_length() const;
  std::size_t min_relator_length() const;

  std::string to_string() const;

 private:
  Alphabet alphabet_;
  std::vector<Word> relators_;
  std::vector<Word> symmetrized_;
  std::vector<RelatorForm> forms_;
};

Presentation parse_presentation(std::string_view text);

/// Rotations of each relator and its inverse, deduplicated.
std::vector<Word> symmetrize_relators(const Presentation& p);

}  // namespace ggt
