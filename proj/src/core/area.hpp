#pragma once

// Combinatorial area: relator decompositions w = prod v_i r_i v_i^-1 in the
// free group, a bounded best-first search for the least number of factors,
// constructive fillers, and certificate verification.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "words.hpp"

namespace ggt {

enum class RelatorConvention {
  Literal,          // r or r^-1 is one of the presentation's relators
  Symmetrized,      // r is a cyclic rotation of a relator or its inverse
  BoundedIdentity,  // r is any identity word of length <= max_relator_length
};

std::string convention_name(RelatorConvention c, std::size_t max_length = 0);
/// "literal", "symmetrized" or "R_<n>".
RelatorConvention parse_convention(const std::string& text, std::size_t& max_length);

struct CertificateEntry {
  Word conjugator;
  Word relator;
};

struct AreaCertificate {
  Word word;
  RelatorConvention convention = RelatorConvention::Symmetrized;
  std::size_t max_relator_length = 0;
  std::vector<CertificateEntry> entries;

  std::size_t count() const { return entries.size(); }
  /// Free reduction of prod v_i r_i v_i^-1.
  Word product() const;
};

struct VerifyResult {
  bool ok = true;
  std::string reason;

  explicit operator bool() const { return ok; }
  static VerifyResult failure(std::string why) { return {false, std::move(why)}; }
};

/// Checks the free-group identity and the relator convention. BoundedIdentity
/// needs a backend to decide which relators are identity words.
VerifyResult verify_certificate(const Presentation& p, const AreaCertificate& cert,
                                const Backend* backend = nullptr);

struct AreaBounds {
  std::size_t lower = 0;
  std::optional<std::size_t> upper;  // nullopt = no decomposition found
  std::optional<AreaCertificate> certificate;
  bool exhausted = false;
  std::size_t states = 0;
  std::size_t cap_len = 0;
  std::size_t cap_states = 0;

  bool exact() const { return upper && *upper == lower; }
};

/// Best-first search from reduce(w) to the empty word. A move inserts a
/// symmetrized relator at some position (cost 1) and freely reduces (cost 0);
/// states longer than cap_len are pruned. The search is Dijkstra ordered by
/// cost plus an admissible, consistent lower bound (the invariant bound below,
/// or 1 for a nonempty word), ties broken by shorter word then lexicographic.
/// Throws NotIdentity when w is not trivial in the backend.
AreaBounds area_search(const Presentation& p, const Backend& backend, const Word& w,
                       std::size_t cap_len, std::size_t cap_states);

/// Dehn's algorithm as a filling: upper = number of moves.
AreaBounds area_from_dehn(const Backend& backend, const Word& w);

/// Free abelian backends: sorts letters by generator, one commutator per swap.
AreaCertificate commuting_filler(const Presentation& p, const Backend& backend, const Word& w);

/// Lower bound from projected signed areas, valid for free abelian backends:
/// each conjugated relator changes sum_{i<j} |A_ij| by at most the largest
/// contribution of a single relator. Returns 0 for other backends.
std::size_t signed_area_lower_bound(const Presentation& p, const Backend& backend, const Word& w);

/// Best available bounds: constructive fillers for the backend, refined by
/// area_search when the word fits under cap_len.
AreaBounds area_bounds(const Presentation& p, const Backend& backend, const Word& w,
                       std::size_t cap_len, std::size_t cap_states);

}  // namespace ggt
