#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstring>
#include <string>

#include "doctest.h"
#include "ggt/ggt.h"

namespace {

struct Str {
  char* p = nullptr;
  ~Str() { ggt_string_free(p); }
  std::string s() const { return p ? p : ""; }
};

}  // namespace

TEST_CASE("version and errors") {
  CHECK(std::string(ggt_version()) == "0.1.0");
  ggt_group* g = nullptr;
  CHECK(ggt_group_new("<a,b|abAB", "abelian", 0, &g) == GGT_ERR_PARSE);
  CHECK(g == nullptr);
  CHECK(std::strlen(ggt_last_error()) > 0);
  CHECK(ggt_group_new(nullptr, "abelian", 0, &g) == GGT_ERR_INVALID_ARGUMENT);
  CHECK(ggt_group_new("<a,b|abAB>", "nonsense", 0, &g) != GGT_OK);
  Str h;
  CHECK(ggt_sha256_hex("abc", 3, &h.p) == GGT_OK);
  CHECK(h.s() == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("area, verify and tampering") {
  REQUIRE(ggt_set_cache_dir(nullptr) == GGT_OK);
  ggt_group* g = nullptr;
  REQUIRE(ggt_group_new("<a,b|abAB>", "abelian", 0, &g) == GGT_OK);
  int id = -1;
  CHECK(ggt_group_is_identity(g, "aabbAABB", &id) == GGT_OK);
  CHECK(id == 1);
  CHECK(ggt_group_is_identity(g, "ab", &id) == GGT_OK);
  CHECK(id == 0);

  Str csv, cert;
  REQUIRE(ggt_area(g, "aabbAABB", 12, 0, &csv.p, &cert.p) == GGT_OK);
  CHECK(csv.s().find("aabbAABB,8,4,4,") != std::string::npos);
  REQUIRE(cert.p);
  Str rep;
  CHECK(ggt_verify(g, cert.p, &rep.p) == GGT_OK);
  CHECK(rep.s().find("\"valid\": true") != std::string::npos);

  std::string bad = cert.s();
  bad.replace(bad.find("\"word\": \"aabbAABB\""), 18, "\"word\": \"aabbAABb\"");
  Str rep2;
  CHECK(ggt_verify(g, bad.c_str(), &rep2.p) == GGT_ERR_VERIFICATION);
  CHECK(rep2.s().find("\"valid\": false") != std::string::npos);
  CHECK(ggt_verify(g, "{not json", nullptr) == GGT_ERR_PARSE);

  Str prof;
  size_t ns[] = {1, 2, 3};
  REQUIRE(ggt_profile(g, "commutator-power", 2, ns, 3, 0, 0, 2, &prof.p) == GGT_OK);
  CHECK(prof.s().find("2,8,4,4,24,40,1/6,") != std::string::npos);

  Str ball;
  REQUIRE(ggt_ball(g, 3, &ball.p) == GGT_OK);
  CHECK(ball.s().find("\"count\": 25") != std::string::npos);
  ggt_group_free(g);
}

TEST_CASE("combing and ladder certificates") {
  ggt_group* g = nullptr;
  REQUIRE(ggt_group_new("<a,b|abAB>", "abelian", 0, &g) == GGT_OK);
  ggt_combing* c = nullptr;
  REQUIRE(ggt_combing_new(g, nullptr, 6, &c) == GGT_OK);
  Str info;
  REQUIRE(ggt_combing_info(c, &info.p) == GGT_OK);
  CHECK(info.s().find("\"k\": 2") != std::string::npos);
  CHECK(info.s().find("\"K_len\": 1") != std::string::npos);
  // Needs a ball larger than the measuring one.
  Str cert;
  REQUIRE(ggt_certify_auto(c, "aaaaaaabbbbbbbAAAAAAABBBBBBB", &cert.p) == GGT_OK);
  Str rep;
  CHECK(ggt_verify(g, cert.p, &rep.p) == GGT_OK);
  CHECK(rep.s().find("\"bound_checked\": true") != std::string::npos);
  Str none;
  CHECK(ggt_certify_auto(c, "ab", &none.p) == GGT_ERR_NOT_IDENTITY);
  ggt_combing_free(c);
  ggt_group_free(g);
}

TEST_CASE("cat0 action") {
  ggt_action* a = nullptr;
  REQUIRE(ggt_action_new(R"({"space": "euclidean", "dim": 2, "lattice": [[1,0],[0,1]], "basepoint": [0,0], "D": "auto"})",
                         2, 0, &a) == GGT_OK);
  Str info, sw, cert, rep;
  REQUIRE(ggt_action_info(a, &info.p) == GGT_OK);
  CHECK(info.s().find("\"overlap_count\": 97") != std::string::npos);
  REQUIRE(ggt_action_sandwich(a, 200, 3, &sw.p) == GGT_OK);
  CHECK(sw.s().find("\"violations\": 0") != std::string::npos);
  REQUIRE(ggt_certify_cat0(a, "s0.s1.S0.S1", &cert.p) == GGT_OK);
  CHECK(ggt_verify(nullptr, cert.p, &rep.p) == GGT_OK);
  ggt_action_free(a);
}

TEST_CASE("cover growth") {
  ggt_group* g = nullptr;
  REQUIRE(ggt_group_new("<a,b|abAB>", "abelian", 0, &g) == GGT_OK);
  unsigned radii[] = {3, 4};
  Str csv, cochain;
  REQUIRE(ggt_cover_growth(g, "r1=1", radii, 2, 1, "both", nullptr, 2, &csv.p, &cochain.p) == GGT_OK);
  CHECK(csv.s().find("3,1,1/2,1/2,") != std::string::npos);
  CHECK(csv.s().find("4,2,3/4,3/4,") != std::string::npos);
  CHECK(cochain.s().find("\"e:a\"") != std::string::npos);
  Str bad;
  CHECK(ggt_cover_growth(g, "r1=1", radii, 2, 1, "simplex", nullptr, 1, &bad.p, nullptr) != GGT_OK);
  ggt_group_free(g);
}
