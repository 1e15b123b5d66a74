#pragma once

// Finite balls of the Cayley graph: BFS from the identity with shortlex
// parents, word-metric queries, and a four-point hyperbolicity estimate.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "oracle.hpp"
#include "rational.hpp"
#include "words.hpp"

namespace ggt {

using ElementId = std::uint32_t;
inline constexpr ElementId kNoElement = std::numeric_limits<ElementId>::max();

struct BallElement {
  ElementKey key;
  unsigned distance = 0;
  ElementId parent = kNoElement;
  Letter parent_letter;
  Word rep;  // shortlex-least geodesic from the identity
};

struct DeltaReport {
  std::size_t samples = 0;
  Rational max_defect;
};

class CayleyBall {
 public:
  const Backend& backend() const { return *backend_; }
  std::shared_ptr<const Backend> backend_ptr() const { return backend_; }
  unsigned radius() const { return radius_; }
  std::size_t size() const { return elements_.size(); }
  const BallElement& element(ElementId id) const { return elements_.at(id); }
  ElementId identity() const { return 0; }

  /// Neighbor g*l, or kNoElement when it lies outside the ball.
  ElementId neighbor(ElementId g, Letter l) const {
    return adjacency_[static_cast<std::size_t>(g) * letters_ + l.code()];
  }

  std::optional<ElementId> find_key(const ElementKey& key) const;
  /// Element represented by w, if it lies in the ball.
  std::optional<ElementId> find(const Word& w) const;
  /// Like find(), but throws OutOfBallError.
  ElementId locate(const Word& w) const;
  /// Ball key of w (exact key, or the shortlex geodesic for small cancellation).
  ElementKey canonical_key(const Word& w) const { return element(locate(w)).key; }

  /// d_S(g, h) = |g^-1 h|, looked up in the ball.
  unsigned distance(ElementId g, ElementId h) const;
  /// Id of g^-1 h, if it lies in the ball.
  std::optional<ElementId> quotient(ElementId g, ElementId h) const;

  /// Element ids visited by the prefixes of w starting from `start` (inclusive
  /// of start, so the result has size L(w)+1). Throws when a prefix escapes.
  std::vector<ElementId> walk(const Word& w, ElementId start = 0) const;

  std::vector<std::size_t> sphere_sizes() const;

 private:
  friend CayleyBall build_ball(std::shared_ptr<const Backend>, unsigned, std::size_t);
  friend void save_ball(const CayleyBall&, std::ostream&);
  friend CayleyBall load_ball(std::shared_ptr<const Backend>, std::istream&);

  CayleyBall() = default;
  std::optional<ElementId> search_buckets(const Word& w, unsigned lo, unsigned hi) const;
  void insert_index(ElementId id);

  std::shared_ptr<const Backend> backend_;
  unsigned radius_ = 0;
  std::size_t letters_ = 0;
  std::vector<BallElement> elements_;
  std::vector<ElementId> adjacency_;
  std::unordered_map<ElementKey, ElementId, ElementKeyHash> by_key_;
  // Small cancellation only: invariant hash -> ids, used with exact Dehn tests.
  std::unordered_map<std::uint64_t, std::vector<ElementId>> buckets_;
};

/// BFS out to `radius`; throws CapExceeded (naming the radius reached) when the
/// element count would pass `cap`.
CayleyBall build_ball(std::shared_ptr<const Backend> backend, unsigned radius, std::size_t cap);

/// Binary form of a ball; load_ball checks it against the backend's alphabet.
void save_ball(const CayleyBall& ball, std::ostream& out);
CayleyBall load_ball(std::shared_ptr<const Backend> backend, std::istream& in);

/// [d(w(1)), ..., d(w(n))]; throws OutOfBallError when a prefix escapes.
std::vector<unsigned> prefix_distances(const CayleyBall& ball, const Word& w);

Word geodesic_rep(const CayleyBall& ball, const ElementKey& key);

DeltaReport four_point_delta(const CayleyBall& ball, const std::vector<std::array<ElementId, 4>>& quadruples);

}  // namespace ggt
