#include "cayley.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "error.hpp"

namespace ggt {

namespace {

ElementKey word_key(const Word& w) {
  ElementKey k;
  k.data.reserve(w.size());
  for (Letter l : w) k.data.push_back(l.code());
  return k;
}

}  // namespace

std::optional<ElementId> CayleyBall::find_key(const ElementKey& key) const {
  auto it = by_key_.find(key);
  if (it == by_key_.end()) return std::nullopt;
  return it->second;
}

std::optional<ElementId> CayleyBall::search_buckets(const Word& w, unsigned lo, unsigned hi) const {
  auto it = buckets_.find(backend_->invariant_hash(w));
  if (it == buckets_.end()) return std::nullopt;
  for (ElementId id : it->second) {
    const BallElement& e = elements_[id];
    if (e.distance < lo || e.distance > hi) continue;
    if (backend_->equal(e.rep, w)) return id;
  }
  return std::nullopt;
}

void CayleyBall::insert_index(ElementId id) {
  const BallElement& e = elements_[id];
  by_key_.emplace(e.key, id);
  if (!backend_->exact_keys()) buckets_[backend_->invariant_hash(e.rep)].push_back(id);
}

std::optional<ElementId> CayleyBall::find(const Word& w) const {
  if (backend_->exact_keys()) return find_key(backend_->exact_key(w));
  Word u = backend_->dehn_reduce(w).word;
  unsigned hi = static_cast<unsigned>(std::min<std::size_t>(u.size(), radius_));
  return search_buckets(u, 0, hi);
}

ElementId CayleyBall::locate(const Word& w) const {
  if (auto id = find(w)) return *id;
  throw OutOfBallError("element escapes the Cayley ball of radius " + std::to_string(radius_),
                       static_cast<unsigned>(std::max<std::size_t>(radius_ + 1, w.reduced().size())));
}

std::optional<ElementId> CayleyBall::quotient(ElementId g, ElementId h) const {
  if (g == h) return identity();
  if (g == identity()) return h;
  return find(elements_.at(g).rep.inverse() * elements_.at(h).rep);
}

unsigned CayleyBall::distance(ElementId g, ElementId h) const {
  auto q = quotient(g, h);
  if (!q)
    throw OutOfBallError("distance query escapes the Cayley ball of radius " + std::to_string(radius_),
                         element(g).distance + element(h).distance);
  return elements_[*q].distance;
}

std::vector<ElementId> CayleyBall::walk(const Word& w, ElementId start) const {
  std::vector<ElementId> ids{start};
  ids.reserve(w.size() + 1);
  for (Letter l : w) {
    ElementId next = neighbor(ids.back(), l);
    if (next == kNoElement) {
      throw OutOfBallError("word prefix escapes the Cayley ball of radius " + std::to_string(radius_),
                           radius_ + 1);
    }
    ids.push_back(next);
  }
  return ids;
}

std::vector<std::size_t> CayleyBall::sphere_sizes() const {
  std::vector<std::size_t> out(radius_ + 1, 0);
  for (const auto& e : elements_) ++out[e.distance];
  return out;
}

CayleyBall build_ball(std::shared_ptr<const Backend> backend, unsigned radius, std::size_t cap) {
  if (!backend) fail(ErrorCode::InvalidArgument, "null backend");
  CayleyBall ball;
  ball.backend_ = backend;
  ball.radius_ = radius;
  ball.letters_ = backend->alphabet().letters();
  const std::size_t nl = ball.letters_;
  const bool exact = backend->exact_keys();

  BallElement root;
  root.key = exact ? backend->exact_key(Word{}) : word_key(Word{});
  ball.elements_.push_back(root);
  ball.adjacency_.assign(nl, kNoElement);
  ball.insert_index(0);
  if (cap < 1) fail(ErrorCode::CapExceeded, "ball cap exceeded at radius 0");

  std::size_t level_begin = 0;
  for (unsigned d = 0; d <= radius; ++d) {
    std::size_t level_end = ball.elements_.size();
    for (std::size_t g = level_begin; g < level_end; ++g) {
      for (std::uint32_t code = 0; code < nl; ++code) {
        if (ball.adjacency_[g * nl + code] != kNoElement) continue;
        Letter l(code);
        Word cand = ball.elements_[g].rep;
        cand.push_back(l);

        std::optional<ElementId> found;
        ElementKey key;
        if (exact) {
          key = backend->exact_key(cand);
          found = ball.find_key(key);
        } else {
          found = ball.search_buckets(cand, d == 0 ? 0 : d - 1, d + 1);
        }
        ElementId nb = kNoElement;
        if (found) {
          nb = *found;
        } else if (d < radius) {
          if (ball.elements_.size() >= cap)
            fail(ErrorCode::CapExceeded, "ball cap of " + std::to_string(cap) + " elements exceeded; reached radius " +
                                             std::to_string(d));
          BallElement e;
          e.key = exact ? std::move(key) : word_key(cand);
          e.distance = d + 1;
          e.parent = static_cast<ElementId>(g);
          e.parent_letter = l;
          e.rep = std::move(cand);
          nb = static_cast<ElementId>(ball.elements_.size());
          ball.elements_.push_back(std::move(e));
          ball.adjacency_.resize(ball.adjacency_.size() + nl, kNoElement);
          ball.insert_index(nb);
        }
        if (nb != kNoElement) {
          ball.adjacency_[g * nl + code] = nb;
          ball.adjacency_[static_cast<std::size_t>(nb) * nl + l.inverse().code()] = static_cast<ElementId>(g);
        }
      }
    }
    level_begin = level_end;
  }
  return ball;
}

namespace {

constexpr char kBallMagic[8] = {'G', 'G', 'T', 'B', 'A', 'L', 'L', '1'};

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) fail(ErrorCode::Io, "truncated ball file");
  return v;
}

}  // namespace

void save_ball(const CayleyBall& ball, std::ostream& out) {
  out.write(kBallMagic, sizeof kBallMagic);
  put<std::uint32_t>(out, ball.radius_);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ball.letters_));
  put<std::uint64_t>(out, ball.elements_.size());
  for (const BallElement& e : ball.elements_) {
    put<std::uint32_t>(out, e.parent);
    put<std::uint32_t>(out, e.parent_letter.code());
    put<std::uint32_t>(out, e.distance);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(e.key.data.size()));
    for (std::int64_t x : e.key.data) put<std::int64_t>(out, x);
  }
  for (ElementId a : ball.adjacency_) put<std::uint32_t>(out, a);
  if (!out) fail(ErrorCode::Io, "failed to write ball");
}

CayleyBall load_ball(std::shared_ptr<const Backend> backend, std::istream& in) {
  if (!backend) fail(ErrorCode::InvalidArgument, "null backend");
  char magic[sizeof kBallMagic];
  if (!in.read(magic, sizeof magic) || !std::equal(magic, magic + sizeof magic, kBallMagic))
    fail(ErrorCode::Io, "not a ball file");
  CayleyBall ball;
  ball.backend_ = backend;
  ball.radius_ = get<std::uint32_t>(in);
  ball.letters_ = get<std::uint32_t>(in);
  if (ball.letters_ != backend->alphabet().letters()) fail(ErrorCode::Io, "ball file alphabet mismatch");
  auto n = get<std::uint64_t>(in);
  ball.elements_.reserve(n);
  for (std::uint64_t id = 0; id < n; ++id) {
    BallElement e;
    e.parent = get<std::uint32_t>(in);
    e.parent_letter = Letter(get<std::uint32_t>(in));
    e.distance = get<std::uint32_t>(in);
    auto len = get<std::uint32_t>(in);
    e.key.data.resize(len);
    for (auto& x : e.key.data) x = get<std::int64_t>(in);
    if (id > 0) {
      if (e.parent >= id || e.parent_letter.code() >= ball.letters_) fail(ErrorCode::Io, "corrupt ball file");
      e.rep = ball.elements_[e.parent].rep;
      e.rep.push_back(e.parent_letter);
    }
    ball.elements_.push_back(std::move(e));
    ball.insert_index(static_cast<ElementId>(id));
  }
  ball.adjacency_.resize(n * ball.letters_);
  for (auto& a : ball.adjacency_) {
    a = get<std::uint32_t>(in);
    if (a != kNoElement && a >= n) fail(ErrorCode::Io, "corrupt ball file");
  }
  return ball;
}

std::vector<unsigned> prefix_distances(const CayleyBall& ball, const Word& w) {
  auto ids = ball.walk(w);
  std::vector<unsigned> out;
  out.reserve(w.size());
  for (std::size_t i = 1; i < ids.size(); ++i) out.push_back(ball.element(ids[i]).distance);
  return out;
}

Word geodesic_rep(const CayleyBall& ball, const ElementKey& key) {
  auto id = ball.find_key(key);
  if (!id) fail(ErrorCode::OutOfBall, "key not in ball");
  return ball.element(*id).rep;
}

DeltaReport four_point_delta(const CayleyBall& ball, const std::vector<std::array<ElementId, 4>>& quadruples) {
  DeltaReport rep;
  rep.max_defect = 0;
  for (const auto& q : quadruples) {
    auto d = [&](int i, int j) { return static_cast<long>(ball.distance(q[i], q[j])); };
    std::array<long, 3> sums{d(0, 1) + d(2, 3), d(0, 2) + d(1, 3), d(0, 3) + d(1, 2)};
    std::sort(sums.begin(), sums.end(), std::greater<>());
    Rational defect(sums[0] - sums[1], 2);
    defect.canonicalize();
    if (defect > rep.max_defect) rep.max_defect = defect;
    ++rep.samples;
  }
  return rep;
}

}  // namespace ggt
