#pragma once

// JSON forms of certificates, ball summaries and cochains, SHA-256 digests,
// and the content-addressed Cayley ball cache.

#include <string>
#include <string_view>

#include "json.hpp"

#include "area.hpp"
#include "automatic.hpp"
#include "cat0.hpp"
#include "cayley.hpp"
#include "cover.hpp"
#include "oracle.hpp"
#include "radial.hpp"

namespace ggt {

using json = nlohmann::ordered_json;

json parse_json(const std::string& text, const std::string& what);
/// Two-space indent and a trailing newline.
std::string dump_json(const json& j);

json certificate_json(const AreaCertificate& c, const Alphabet& a);
AreaCertificate certificate_from_json(const json& j, const Alphabet& a);

/// The certificate schema plus k, K, radial_bound, count and provenance.
json ladder_json(const LadderCertificate& c, const Alphabet& a);
LadderCertificate ladder_from_json(const json& j, const Alphabet& a);

/// The certificate schema plus D, bound, trace and the action config.
json cat0_json(const Cat0Certificate& c, const Alphabet& a);
Cat0Certificate cat0_from_json(const json& j, const Alphabet& a);

/// "area", "ladder" or "cat0", from the fields present.
std::string certificate_kind(const json& j);

/// {radius, count, histogram}.
json ball_json(const CayleyBall& ball);
json piece_report_json(const PieceReport& r);

/// Edge key "<rep of from>:<generator>" (rep "e" for the identity) to value.
json cochain_json(const CoverBall& cb, const OneCochain& eta);

std::string sha256_hex(std::string_view data);

/// Cache file name for a ball of `radius` over (presentation, backend).
std::string ball_cache_name(const std::string& presentation, const std::string& backend, unsigned radius);

/// Balls are read from and written to `dir` when it is nonempty, otherwise
/// built directly. A cached ball of larger radius is not reused.
BallProvider cached_ball_provider(std::shared_ptr<const Backend> backend, const std::string& presentation,
                                  const std::string& backend_spec, std::size_t cap, const std::string& dir);

/// GGT_CACHE_DIR, or empty.
std::string default_cache_dir();

}  // namespace ggt
