#include "words.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_map>

#include "error.hpp"

namespace ggt {

Word Word::inverse() const {
  std::vector<Letter> out;
  out.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.push_back(it->inverse());
  return Word(std::move(out));
}

Word Word::prefix(std::size_t i) const {
  if (i > letters_.size())
    fail(ErrorCode::InvalidArgument, "prefix length " + std::to_string(i) +
                                         " exceeds word length " + std::to_string(size()));
  return Word(std::vector<Letter>(letters_.begin(), letters_.begin() + i));
}

Word Word::subword(std::size_t pos, std::size_t len) const {
  if (pos + len > letters_.size()) fail(ErrorCode::InvalidArgument, "subword out of range");
  return Word(std::vector<Letter>(letters_.begin() + pos, letters_.begin() + pos + len));
}

Word Word::rotated(std::size_t j) const {
  if (letters_.empty()) return *this;
  j %= letters_.size();
  std::vector<Letter> out(letters_.begin() + j, letters_.end());
  out.insert(out.end(), letters_.begin(), letters_.begin() + j);
  return Word(std::move(out));
}

Word Word::reduced() const {
  std::vector<Letter> out;
  out.reserve(letters_.size());
  for (Letter l : letters_) {
    if (!out.empty() && out.back() == l.inverse())
      out.pop_back();
    else
      out.push_back(l);
  }
  return Word(std::move(out));
}

Word Word::cyclically_reduced() const {
  Word r = reduced();
  std::size_t lo = 0, hi = r.size();
  while (hi - lo >= 2 && r[lo] == r[hi - 1].inverse()) {
    ++lo;
    --hi;
  }
  return r.subword(lo, hi - lo);
}

bool Word::is_reduced() const {
  for (std::size_t i = 1; i < letters_.size(); ++i)
    if (letters_[i] == letters_[i - 1].inverse()) return false;
  return true;
}

Word Word::power(std::size_t n) const {
  Word out;
  for (std::size_t i = 0; i < n; ++i) out.append(*this);
  return out;
}

std::strong_ordering shortlex_compare(const Word& a, const Word& b) {
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(a.letters_.begin(), a.letters_.end(),
                                                b.letters_.begin(), b.letters_.end());
}

Word reduced_product(const Word& x, const Word& y) {
  std::size_t cancel = 0;
  while (cancel < x.size() && cancel < y.size() &&
         x[x.size() - 1 - cancel] == y[cancel].inverse())
    ++cancel;
  std::vector<Letter> out(x.begin(), x.end() - static_cast<std::ptrdiff_t>(cancel));
  out.insert(out.end(), y.begin() + static_cast<std::ptrdiff_t>(cancel), y.end());
  return Word(std::move(out));
}

std::size_t WordHash::operator()(const Word& w) const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (Letter l : w) {
    h ^= l.code() + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h ^ (h >> 29));
}

// ---------------------------------------------------------------------------

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) fail(ErrorCode::InvalidArgument, "empty generator name");
    bool ok = n[0] >= 'a' && n[0] <= 'z';
    for (char c : n) ok = ok && ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'));
    if (!ok) fail(ErrorCode::InvalidArgument, "generator name '" + n + "' must be lowercase");
    if (!seen.insert(n).second) fail(ErrorCode::InvalidArgument, "duplicate generator '" + n + "'");
    if (n.size() != 1) compact_ = false;
  }
}

std::string Alphabet::letter_name(Letter l) const {
  if (l.gen() >= names_.size()) fail(ErrorCode::InvalidArgument, "letter outside alphabet");
  std::string name = names_[l.gen()];
  if (l.inverted())
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return name;
}

Letter Alphabet::letter(std::string_view token) const {
  if (token.empty()) fail(ErrorCode::Parse, "empty letter token");
  bool inverted = std::isupper(static_cast<unsigned char>(token[0])) != 0;
  std::string lower(token);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (std::size_t g = 0; g < names_.size(); ++g) {
    if (names_[g] == lower) {
      // Mixed case such as "sA1" is not a valid token.
      std::string canonical = letter_name(Letter::of(static_cast<std::uint32_t>(g), inverted));
      if (canonical != token) break;
      return Letter::of(static_cast<std::uint32_t>(g), inverted);
    }
  }
  fail(ErrorCode::Parse, "unknown letter '" + std::string(token) + "'");
}

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

// Reads an optional "^k" exponent starting at text[pos]; advances pos.
long read_exponent(std::string_view text, std::size_t& pos) {
  while (pos < text.size() && is_space(text[pos])) ++pos;
  if (pos >= text.size() || text[pos] != '^') return 1;
  ++pos;
  while (pos < text.size() && is_space(text[pos])) ++pos;
  std::size_t start = pos;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
  std::size_t digits = pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  if (digits == pos) {
    if (start == pos) fail(ErrorCode::Parse, "empty exponent token");
    fail(ErrorCode::Parse, "malformed exponent '" + std::string(text.substr(start, pos - start)) + "'");
  }
  if (pos - digits > 6) fail(ErrorCode::Parse, "exponent too large");
  return std::stol(std::string(text.substr(start, pos - start)));
}

void emit(Word& out, Letter l, long exponent) {
  if (exponent < 0) {
    l = l.inverse();
    exponent = -exponent;
  }
  for (long i = 0; i < exponent; ++i) out.push_back(l);
}

}  // namespace

Word parse_word(std::string_view text, const Alphabet& alphabet) {
  Word out;
  std::size_t pos = 0;
  auto skip = [&] { while (pos < text.size() && is_space(text[pos])) ++pos; };
  skip();
  if (pos < text.size() && text[pos] == '1' && text.find_first_not_of(" \t\r\n", pos + 1) == std::string_view::npos)
    return out;  // "1" denotes the empty word
  while (pos < text.size()) {
    skip();
    if (pos >= text.size()) break;
    std::string token;
    if (alphabet.compact()) {
      if (!std::isalpha(static_cast<unsigned char>(text[pos])))
        fail(ErrorCode::Parse, std::string("unexpected character '") + text[pos] + "'");
      token = std::string(1, text[pos++]);
    } else {
      if (text[pos] == '.') {
        ++pos;
        continue;
      }
      std::size_t start = pos;
      while (pos < text.size() && std::isalnum(static_cast<unsigned char>(text[pos]))) ++pos;
      if (start == pos) fail(ErrorCode::Parse, std::string("unexpected character '") + text[pos] + "'");
      token = std::string(text.substr(start, pos - start));
    }
    Letter l = alphabet.letter(token);
    emit(out, l, read_exponent(text, pos));
  }
  return out;
}

std::string format_word(const Word& w, const Alphabet& alphabet) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!alphabet.compact() && i > 0) out.push_back('.');
    out += alphabet.letter_name(w[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------

Presentation::Presentation(Alphabet alphabet, std::vector<Word> relators)
    : alphabet_(std::move(alphabet)) {
  if (alphabet_.generators() == 0) fail(ErrorCode::InvalidArgument, "empty generator list");
  for (const Word& r : relators) {
    for (Letter l : r)
      if (l.gen() >= alphabet_.generators())
        fail(ErrorCode::InvalidArgument, "relator uses a letter outside the alphabet");
    Word core = r.cyclically_reduced();
    if (core.empty()) fail(ErrorCode::InvalidArgument, "relator reduces to the empty word");
    relators_.push_back(std::move(core));
  }
  std::unordered_map<Word, std::size_t, WordHash> seen;
  for (std::size_t i = 0; i < relators_.size(); ++i) {
    for (bool inverted : {false, true}) {
      Word base = inverted ? relators_[i].inverse() : relators_[i];
      for (std::size_t j = 0; j < base.size(); ++j) {
        Word rot = base.rotated(j);
        if (seen.emplace(rot, symmetrized_.size()).second) {
          symmetrized_.push_back(std::move(rot));
          forms_.push_back({i, inverted, j});
        }
      }
    }
  }
}

std::ptrdiff_t Presentation::find_symmetrized(const Word& w) const {
  for (std::size_t i = 0; i < symmetrized_.size(); ++i)
    if (symmetrized_[i] == w) return static_cast<std::ptrdiff_t>(i);
  return -1;
}

std::size_t Presentation::max_relator_length() const {
  std::size_t m = 0;
  for (const Word& r : relators_) m = std::max(m, r.size());
  return m;
}

std::size_t Presentation::min_relator_length() const {
  std::size_t m = relators_.empty() ? 0 : relators_.front().size();
  for (const Word& r : relators_) m = std::min(m, r.size());
  return m;
}

std::string Presentation::to_string() const {
  std::string out = "<";
  for (std::size_t g = 0; g < alphabet_.generators(); ++g) {
    if (g) out += ",";
    out += alphabet_.names()[g];
  }
  out += "|";
  for (std::size_t i = 0; i < relators_.size(); ++i) {
    if (i) out += ",";
    out += format_word(relators_[i], alphabet_);
  }
  return out + ">";
}

Presentation parse_presentation(std::string_view text) {
  auto open = text.find('<');
  auto bar = text.find('|');
  auto close = text.rfind('>');
  if (open == std::string_view::npos || bar == std::string_view::npos ||
      close == std::string_view::npos || !(open < bar && bar < close))
    fail(ErrorCode::Parse, "presentation must look like <gens | relators>");
  for (std::size_t i = 0; i < open; ++i)
    if (!is_space(text[i])) fail(ErrorCode::Parse, "text before '<'");
  for (std::size_t i = close + 1; i < text.size(); ++i)
    if (!is_space(text[i])) fail(ErrorCode::Parse, "text after '>'");

  auto split = [](std::string_view s) {
    std::vector<std::string> items;
    std::string cur;
    bool any = false;
    for (char c : s) {
      if (c == ',') {
        items.push_back(cur);
        cur.clear();
        any = true;
      } else if (!is_space(c)) {
        cur.push_back(c);
      }
    }
    if (any || !cur.empty()) items.push_back(cur);
    return items;
  };

  std::vector<std::string> gens = split(text.substr(open + 1, bar - open - 1));
  if (gens.empty()) fail(ErrorCode::Parse, "empty generator list");
  for (const auto& g : gens)
    if (g.empty()) fail(ErrorCode::Parse, "empty generator name");
  Alphabet alphabet(gens);

  std::vector<Word> relators;
  for (const auto& item : split(text.substr(bar + 1, close - bar - 1))) {
    if (item.empty()) fail(ErrorCode::Parse, "empty relator");
    relators.push_back(parse_word(item, alphabet));
  }
  return Presentation(std::move(alphabet), std::move(relators));
}

std::vector<Word> symmetrize_relators(const Presentation& p) { return p.symmetrized(); }

}  // namespace ggt
