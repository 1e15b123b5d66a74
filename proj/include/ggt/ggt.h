#ifndef GGT_GGT_H
#define GGT_GGT_H

/*
 * C interface to the ggt toolkit. Every call returns a ggt_status; on failure
 * ggt_last_error() describes the problem (thread-local). Strings returned
 * through char** are owned by the caller and released with ggt_string_free.
 * Exact values are rational strings such as "4/26".
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GGT_API __declspec(dllexport)
#else
#define GGT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ggt_status {
  GGT_OK = 0,
  GGT_ERR_PARSE = 1,
  GGT_ERR_INVALID_ARGUMENT = 2,
  GGT_ERR_CAP_EXCEEDED = 3,
  GGT_ERR_NOT_IDENTITY = 4,
  GGT_ERR_OUT_OF_BALL = 5,
  GGT_ERR_VERIFICATION = 6,
  GGT_ERR_UNSUPPORTED = 7,
  GGT_ERR_INFEASIBLE = 8,
  GGT_ERR_IO = 9,
  GGT_ERR_INTERNAL = 10
} ggt_status;

/* A presentation with its word-problem backend and a ball cache. */
typedef struct ggt_group ggt_group;
/* A combing measured on a ball, for ladder certificates. */
typedef struct ggt_combing ggt_combing;
/* A cocompact action with its derived generating set. */
typedef struct ggt_action ggt_action;

GGT_API const char* ggt_version(void);
GGT_API const char* ggt_last_error(void);
GGT_API const char* ggt_status_name(ggt_status s);
GGT_API void ggt_string_free(char* s);

GGT_API ggt_status ggt_sha256_hex(const char* data, size_t len, char** out);

/* Directory for cached balls; NULL or "" disables caching. Defaults to
 * GGT_CACHE_DIR. Applies to groups created afterwards. */
GGT_API ggt_status ggt_set_cache_dir(const char* dir);

/* backend: "free", "abelian", "c16" or "product:free:2,abelian:1".
 * ball_cap bounds the element count of any ball built for this group. */
GGT_API ggt_status ggt_group_new(const char* presentation, const char* backend, size_t ball_cap, ggt_group** out);
GGT_API void ggt_group_free(ggt_group* g);
/* {"presentation", "backend", "generators", "relators", "small_cancellation"}. */
GGT_API ggt_status ggt_group_info(const ggt_group* g, char** json_out);
/* 1 when the word is trivial in the group, 0 otherwise. */
GGT_API ggt_status ggt_group_is_identity(const ggt_group* g, const char* word, int* out);

/* {"radius", "count", "histogram"}. */
GGT_API ggt_status ggt_ball(ggt_group* g, unsigned radius, char** json_out);

/* CSV header and one row: word,L,area_lo,area_hi,exhausted,states; plus the
 * certificate JSON when an upper bound was found (otherwise *cert_out = NULL). */
GGT_API ggt_status ggt_area(ggt_group* g, const char* word, size_t cap_len, size_t cap_states, char** csv_out,
                            char** cert_out);

/* family: commutator-power, relator-power[:i], conjugate-chain[:i]. weight_p >= 1.
 * cap_len = 0 picks a default per member. */
GGT_API ggt_status ggt_profile(ggt_group* g, const char* family, unsigned weight_p, const size_t* ns, size_t count,
                               size_t cap_len, size_t cap_states, unsigned jobs, char** csv_out);

/* fsa_json NULL: the shortlex geodesic combing. Measures k and K_len on the
 * ball of the given radius. */
GGT_API ggt_status ggt_combing_new(ggt_group* g, const char* fsa_json, unsigned radius, ggt_combing** out);
GGT_API void ggt_combing_free(ggt_combing* c);
/* {"source", "radius", "k", "K_len", "geodesic_ratio"}. */
GGT_API ggt_status ggt_combing_info(const ggt_combing* c, char** json_out);
/* Ladder certificate JSON, verified before it is returned. The ball grows
 * when a prefix leaves it. */
GGT_API ggt_status ggt_certify_auto(ggt_combing* c, const char* word, char** json_out);

/* action_json as in the action config schema; ball_radius sizes the ball over
 * the derived generating set. */
GGT_API ggt_status ggt_action_new(const char* action_json, unsigned ball_radius, size_t ball_cap, ggt_action** out);
GGT_API void ggt_action_free(ggt_action* a);
/* {"D", "D2", "overlap_count", "generators": [{"name", "image"}...], "ball"}. */
GGT_API ggt_status ggt_action_info(const ggt_action* a, char** json_out);
/* {"pairs", "violations", "worst_lower_margin", "worst_upper_margin"}; samples = 0 checks all pairs. */
GGT_API ggt_status ggt_action_sandwich(const ggt_action* a, size_t samples, uint64_t seed, char** json_out);
/* Cat0 certificate JSON for a word over s0, S0, s1, ..., verified before it is returned. */
GGT_API ggt_status ggt_certify_cat0(ggt_action* a, const char* word, char** json_out);

/* omega: "r1=1,r2=-1/2" or a single value for every relator. method:
 * combing, lp or both. filler: dehn, grid or search (NULL: per backend).
 * CSV radius,sup_eta,lp_objective,stokes_lb plus float approximations.
 * When cochain_out is non-NULL and the method includes combing, it receives
 * the primitive on the largest radius as {edge key: value}. */
GGT_API ggt_status ggt_cover_growth(ggt_group* g, const char* omega, const unsigned* radii, size_t count,
                                    unsigned weight_p, const char* method, const char* filler, unsigned jobs,
                                    char** csv_out, char** cochain_out);

/* Verifies an area, ladder or cat0 certificate. report_out receives
 * {"kind", "valid", "reason", "count", "bound_checked"}. Returns GGT_OK when
 * valid and GGT_ERR_VERIFICATION when not. g may be NULL for cat0
 * certificates, which carry their action. */
GGT_API ggt_status ggt_verify(ggt_group* g, const char* cert_json, char** report_out);

#ifdef __cplusplus
}
#endif

#endif
