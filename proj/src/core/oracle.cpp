#include "oracle.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "error.hpp"

namespace ggt {

std::size_t ElementKeyHash::operator()(const ElementKey& k) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::int64_t v : k.data) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0x100000001b3ull;
  }
  return static_cast<std::size_t>(h);
}

namespace {

Word commutator(std::uint32_t x, std::uint32_t y) {
  return Word{Letter::of(x, false), Letter::of(y, false), Letter::of(x, true), Letter::of(y, true)};
}

bool has_commutator(const Presentation& p, std::uint32_t x, std::uint32_t y) {
  return p.find_symmetrized(commutator(x, y)) >= 0;
}

Factor identity_factor(Factor::Kind kind, std::size_t offset, std::size_t rank, std::size_t total) {
  Factor f;
  f.kind = kind;
  f.rank = rank;
  for (std::size_t g = 0; g < total; ++g) {
    bool inside = g >= offset && g < offset + rank;
    if (kind == Factor::Kind::Free) {
      Word img;
      if (inside) img.push_back(Letter::of(static_cast<std::uint32_t>(g - offset), false));
      f.free_images.push_back(img);
    } else {
      std::vector<std::int64_t> v(rank, 0);
      if (inside) v[g - offset] = 1;
      f.abelian_images.push_back(v);
    }
  }
  return f;
}

// Integer basis of {x : M x = 0} for a rational matrix M with rows of length n.
std::vector<std::vector<std::int64_t>> integer_nullspace(std::vector<std::vector<Rational>> m, std::size_t n) {
  std::vector<std::size_t> pivot_cols;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < m.size(); ++col) {
    std::size_t piv = row;
    while (piv < m.size() && m[piv][col] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[row]);
    Rational inv = 1 / m[row][col];
    for (auto& v : m[row]) v *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      Rational f = m[r][col];
      for (std::size_t c = 0; c < n; ++c) m[r][c] -= f * m[row][c];
    }
    pivot_cols.push_back(col);
    ++row;
  }
  std::vector<std::vector<std::int64_t>> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (std::find(pivot_cols.begin(), pivot_cols.end(), free) != pivot_cols.end()) continue;
    std::vector<Rational> x(n, 0);
    x[free] = 1;
    for (std::size_t r = 0; r < pivot_cols.size(); ++r) x[pivot_cols[r]] = -m[r][free];
    mpz_class lcm = 1;
    for (const auto& v : x) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), v.get_den_mpz_t());
    std::vector<std::int64_t> ints;
    for (const auto& v : x) ints.push_back(mpz_class(v * lcm).get_si());
    basis.push_back(ints);
  }
  return basis;
}

std::vector<std::int64_t> exponent_sums(const Word& w, std::size_t n) {
  std::vector<std::int64_t> v(n, 0);
  for (Letter l : w) v[l.gen()] += l.sign();
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------

PieceReport check_small_cancellation(const Presentation& p, const Rational& lambda) {
  struct Form {
    std::size_t relator;
    bool inverted;
    std::size_t rotation;
    Word word;
  };
  std::vector<Form> forms;
  for (std::size_t i = 0; i < p.relators().size(); ++i)
    for (bool inv : {false, true}) {
      Word base = inv ? p.relators()[i].inverse() : p.relators()[i];
      for (std::size_t j = 0; j < base.size(); ++j) forms.push_back({i, inv, j, base.rotated(j)});
    }

  PieceReport rep;
  rep.lambda = lambda;
  rep.min_relator_length = p.min_relator_length();
  for (std::size_t a = 0; a < forms.size(); ++a) {
    for (std::size_t b = a + 1; b < forms.size(); ++b) {
      const Word& x = forms[a].word;
      const Word& y = forms[b].word;
      std::size_t lim = std::min(x.size(), y.size());
      std::size_t common = 0;
      while (common < lim && x[common] == y[common]) ++common;
      // Equal words at distinct offsets (proper powers) overlap in all but one letter.
      common = std::min(common, lim - 1);
      rep.max_piece = std::max(rep.max_piece, common);
    }
  }
  if (rep.min_relator_length == 0)
    fail(ErrorCode::InvalidArgument, "small cancellation check needs at least one relator");
  rep.ratio = Rational(static_cast<unsigned long>(rep.max_piece),
                       static_cast<unsigned long>(rep.min_relator_length));
  rep.ratio.canonicalize();
  rep.passes = rep.ratio < lambda;
  return rep;
}

// ---------------------------------------------------------------------------

Backend Backend::free_group(Presentation p) {
  if (!p.relators().empty())
    fail(ErrorCode::InvalidArgument, "free backend requires a presentation without relators");
  Backend b;
  b.kind_ = BackendKind::FreeGroup;
  b.alphabet_ = p.alphabet();
  std::size_t n = p.alphabet().generators();
  b.factors_.push_back(identity_factor(Factor::Kind::Free, 0, n, n));
  b.presentation_ = std::move(p);
  return b;
}

Backend Backend::free_abelian(Presentation p) {
  Backend b;
  b.kind_ = BackendKind::FreeAbelian;
  b.alphabet_ = p.alphabet();
  std::size_t n = p.alphabet().generators();
  b.factors_.push_back(identity_factor(Factor::Kind::Abelian, 0, n, n));
  for (const Word& r : p.relators())
    if (!b.is_identity(r))
      fail(ErrorCode::InvalidArgument, "relator " + format_word(r, p.alphabet()) +
                                           " is not trivial in the free abelian group");
  for (std::uint32_t x = 0; x < n; ++x)
    for (std::uint32_t y = x + 1; y < n; ++y)
      if (!has_commutator(p, x, y))
        fail(ErrorCode::InvalidArgument, "abelian backend needs the commutator of generators " +
                                             p.alphabet().names()[x] + "," + p.alphabet().names()[y]);
  b.presentation_ = std::move(p);
  return b;
}

Backend Backend::small_cancellation(Presentation p) {
  PieceReport rep = check_small_cancellation(p, Rational(1, 6));
  if (!rep.passes)
    fail(ErrorCode::InvalidArgument, "presentation is not C'(1/6): max piece " +
                                         std::to_string(rep.max_piece) + ", ratio " + to_string(rep.ratio));
  Backend b;
  b.kind_ = BackendKind::SmallCancellation;
  b.alphabet_ = p.alphabet();
  std::size_t n = p.alphabet().generators();

  std::vector<std::vector<Rational>> m;
  for (const Word& r : p.relators()) {
    std::vector<Rational> row;
    for (auto v : exponent_sums(r, n)) row.emplace_back(static_cast<long>(v));
    m.push_back(row);
  }
  b.invariant_rows_ = integer_nullspace(m, n);

  b.by_first_letter_.assign(2 * n, {});
  for (std::size_t i = 0; i < p.symmetrized().size(); ++i)
    b.by_first_letter_[p.symmetrized()[i][0].code()].push_back(i);
  b.presentation_ = std::move(p);
  return b;
}

Backend Backend::direct_product(Presentation p, std::vector<std::pair<Factor::Kind, std::size_t>> blocks) {
  std::size_t n = p.alphabet().generators();
  std::size_t total = 0;
  for (auto& [kind, rank] : blocks) {
    if (rank == 0) fail(ErrorCode::InvalidArgument, "product factor of rank 0");
    total += rank;
  }
  if (total != n)
    fail(ErrorCode::InvalidArgument, "product factor ranks sum to " + std::to_string(total) +
                                         " but the presentation has " + std::to_string(n) + " generators");
  Backend b;
  b.kind_ = BackendKind::DirectProduct;
  b.alphabet_ = p.alphabet();
  std::vector<std::size_t> block_of(n);
  std::size_t offset = 0;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    b.factors_.push_back(identity_factor(blocks[k].first, offset, blocks[k].second, n));
    for (std::size_t g = offset; g < offset + blocks[k].second; ++g) block_of[g] = k;
    offset += blocks[k].second;
  }
  for (const Word& r : p.relators())
    if (!b.is_identity(r))
      fail(ErrorCode::InvalidArgument, "relator " + format_word(r, p.alphabet()) + " is not trivial in the product");
  for (std::uint32_t x = 0; x < n; ++x)
    for (std::uint32_t y = x + 1; y < n; ++y) {
      bool needed = block_of[x] != block_of[y] || blocks[block_of[x]].first == Factor::Kind::Abelian;
      if (needed && !has_commutator(p, x, y))
        fail(ErrorCode::InvalidArgument, "product backend needs the commutator of generators " +
                                             p.alphabet().names()[x] + "," + p.alphabet().names()[y]);
    }
  b.presentation_ = std::move(p);
  return b;
}

Backend Backend::from_images(Alphabet alphabet, std::vector<Factor> factors) {
  if (factors.empty()) fail(ErrorCode::InvalidArgument, "backend needs at least one factor");
  for (const Factor& f : factors) {
    std::size_t count = f.kind == Factor::Kind::Free ? f.free_images.size() : f.abelian_images.size();
    if (count != alphabet.generators())
      fail(ErrorCode::InvalidArgument, "factor images do not cover the alphabet");
    if (f.kind == Factor::Kind::Abelian)
      for (const auto& v : f.abelian_images)
        if (v.size() != f.rank) fail(ErrorCode::InvalidArgument, "abelian image of wrong rank");
    if (f.kind == Factor::Kind::Free)
      for (const auto& w : f.free_images)
        for (Letter l : w)
          if (l.gen() >= f.rank) fail(ErrorCode::InvalidArgument, "free image outside factor rank");
  }
  Backend b;
  b.alphabet_ = std::move(alphabet);
  b.factors_ = std::move(factors);
  if (b.factors_.size() > 1)
    b.kind_ = BackendKind::DirectProduct;
  else
    b.kind_ = b.factors_[0].kind == Factor::Kind::Free ? BackendKind::FreeGroup : BackendKind::FreeAbelian;
  return b;
}

std::string Backend::describe() const {
  switch (kind_) {
    case BackendKind::FreeGroup: return "free";
    case BackendKind::FreeAbelian: return "abelian";
    case BackendKind::SmallCancellation: return "c16";
    case BackendKind::DirectProduct: {
      std::string out = "product:";
      for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i) out += ",";
        out += factors_[i].kind == Factor::Kind::Free ? "free:" : "abelian:";
        out += std::to_string(factors_[i].rank);
      }
      return out;
    }
  }
  return "?";
}

void Backend::check_alphabet(const Word& w) const {
  for (Letter l : w)
    if (l.gen() >= alphabet_.generators()) fail(ErrorCode::InvalidArgument, "letter outside backend alphabet");
}

Word Backend::free_image(std::size_t factor, const Word& w) const {
  const Factor& f = factors_.at(factor);
  Word out;
  for (Letter l : w) {
    const Word& img = f.free_images[l.gen()];
    out = reduced_product(out, l.inverted() ? img.inverse() : img);
  }
  return out;
}

std::vector<std::int64_t> Backend::abelian_image(std::size_t factor, const Word& w) const {
  const Factor& f = factors_.at(factor);
  std::vector<std::int64_t> v(f.rank, 0);
  for (Letter l : w) {
    const auto& img = f.abelian_images[l.gen()];
    for (std::size_t i = 0; i < f.rank; ++i) v[i] += l.sign() * img[i];
  }
  return v;
}

ElementKey Backend::exact_key(const Word& w) const {
  if (kind_ == BackendKind::SmallCancellation)
    fail(ErrorCode::Unsupported, "small cancellation keys come from a Cayley ball");
  check_alphabet(w);
  ElementKey key;
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    if (factors_[k].kind == Factor::Kind::Free) {
      Word img = free_image(k, w);
      if (factors_.size() > 1) key.data.push_back(static_cast<std::int64_t>(img.size()));
      for (Letter l : img) key.data.push_back(l.code());
    } else {
      auto v = abelian_image(k, w);
      key.data.insert(key.data.end(), v.begin(), v.end());
    }
  }
  return key;
}

std::uint64_t Backend::invariant_hash(const Word& w) const {
  if (kind_ != BackendKind::SmallCancellation) return ElementKeyHash{}(exact_key(w));
  auto sums = exponent_sums(w, alphabet_.generators());
  ElementKey inv;
  for (const auto& row : invariant_rows_)
    inv.data.push_back(std::inner_product(row.begin(), row.end(), sums.begin(), std::int64_t{0}));
  return ElementKeyHash{}(inv);
}

bool Backend::is_identity(const Word& w) const {
  check_alphabet(w);
  if (kind_ == BackendKind::SmallCancellation) return dehn_reduce(w).word.empty();
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    if (factors_[k].kind == Factor::Kind::Free) {
      if (!free_image(k, w).empty()) return false;
    } else {
      for (auto v : abelian_image(k, w))
        if (v != 0) return false;
    }
  }
  return true;
}

DehnResult Backend::dehn_reduce(const Word& w) const {
  if (kind_ != BackendKind::SmallCancellation)
    fail(ErrorCode::Unsupported, "Dehn reduction needs a small cancellation backend");
  check_alphabet(w);
  const auto& sym = presentation_->symmetrized();
  DehnResult res;
  Word cur = w.reduced();
  for (;;) {
    bool moved = false;
    for (std::size_t pos = 0; pos < cur.size() && !moved; ++pos) {
      for (std::size_t idx : by_first_letter_[cur[pos].code()]) {
        const Word& r = sym[idx];
        std::size_t common = 0;
        while (common < r.size() && pos + common < cur.size() && cur[pos + common] == r[common]) ++common;
        if (2 * common <= r.size()) continue;
        Word before = cur.prefix(pos);
        Word complement = r.subword(common, r.size() - common).inverse();
        Word after = cur.subword(pos + common, cur.size() - pos - common);
        res.moves.push_back({pos, idx, common, before});
        cur = reduced_product(reduced_product(before, complement), after);
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  res.word = std::move(cur);
  return res;
}

// ---------------------------------------------------------------------------

Backend parse_backend(const std::string& spec, const Presentation& p) {
  if (spec == "free") return Backend::free_group(p);
  if (spec == "abelian") return Backend::free_abelian(p);
  if (spec == "c16") return Backend::small_cancellation(p);
  const std::string prefix = "product:";
  if (spec.rfind(prefix, 0) == 0) {
    std::vector<std::pair<Factor::Kind, std::size_t>> blocks;
    std::string rest = spec.substr(prefix.size());
    std::size_t start = 0;
    while (start <= rest.size()) {
      std::size_t comma = rest.find(',', start);
      std::string item = rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      auto colon = item.find(':');
      if (colon == std::string::npos) fail(ErrorCode::Parse, "product factor '" + item + "' needs kind:rank");
      std::string kind = item.substr(0, colon), rank = item.substr(colon + 1);
      if (rank.empty() || rank.find_first_not_of("0123456789") != std::string::npos)
        fail(ErrorCode::Parse, "bad factor rank in '" + item + "'");
      Factor::Kind k;
      if (kind == "free")
        k = Factor::Kind::Free;
      else if (kind == "abelian")
        k = Factor::Kind::Abelian;
      else
        fail(ErrorCode::Parse, "unknown product factor kind '" + kind + "'");
      blocks.emplace_back(k, std::stoul(rank));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return Backend::direct_product(p, std::move(blocks));
  }
  fail(ErrorCode::Parse, "unknown backend '" + spec + "' (expected free|abelian|c16|product:...)");
}

}  // namespace ggt
