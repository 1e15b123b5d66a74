#include <random>

#include "doctest.h"
#include "error.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "radial.hpp"

using namespace ggt;

TEST_SUITE("radial") {
  TEST_CASE("weights") {
    auto f2 = WeightFn::power(2);
    CHECK(f2(0) == 1);
    CHECK(f2(3) == 4);
    CHECK(WeightFn::power(3)(2) == 9);
    CHECK(WeightFn::power(1)(100) == 1);
    CHECK_THROWS_AS(WeightFn::power(0), Error);
    CHECK_THROWS_AS(WeightFn::custom({Rational(1), Rational(1, 2)}), Error);
    CHECK_THROWS_AS(WeightFn::custom({Rational(1, 2)}), Error);
    auto c = WeightFn::custom({Rational(1), Rational(3, 2)});
    CHECK(c(1) == Rational(3, 2));
  }

  TEST_CASE("radial cost of commutators") {
    auto z = fixtures::z2();
    auto ball = z.ball(8);
    CHECK(radial_cost(*ball, z.word("abAB"), WeightFn::power(2)) == 8);
    // Prefix norms of aabbAABB are 1,2,3,4,3,2,1,0.
    CHECK(radial_cost(*ball, z.word("aabbAABB"), WeightFn::power(2)) == 24);
    for (std::size_t n = 1; n <= 4; ++n) {
      std::string s = oracle::commutator_power(n);
      CHECK(radial_cost(*ball, z.word(s), WeightFn::power(2)) == oracle::zn_radial_cost(s, 2, 2));
      CHECK(radial_cost(*ball, z.word(s), WeightFn::power(2)) == Rational(4 * n * n + 4 * n));
      CHECK(radial_cost(*ball, z.word(s), WeightFn::power(1)) == Rational(4 * n));
    }
  }

  TEST_CASE("classical bound") {
    auto z = fixtures::z2();
    auto ball = z.ball(6);
    auto c = classical_cost(*ball, z.word("abAB"), 2);
    CHECK(c.diam == 2);
    CHECK(c.bound == 12);
    auto c2 = classical_cost(*ball, z.word("aabbAABB"), 2);
    CHECK(c2.diam == 4);
    CHECK(c2.bound == 40);
    auto e = classical_cost(*ball, Word{}, 2);
    CHECK(e.diam == 0);
    CHECK(e.bound == 0);
  }

  TEST_CASE("chain of inequalities and monotonicity in p") {
    std::mt19937_64 rng(21);
    for (auto g : {fixtures::z2(), fixtures::f2(), fixtures::genus2()}) {
      auto ball = g.ball(4);
      for (int t = 0; t < 50; ++t) {
        Word w = fixtures::random_identity(rng, *ball, 4);
        Rational prev = 0;
        for (unsigned p = 1; p <= 4; ++p) {
          Rational r = radial_cost(*ball, w, WeightFn::power(p));
          auto c = classical_cost(*ball, w, p);
          CHECK(r <= c.bound);
          mpz_class top;
          mpz_ui_pow_ui(top.get_mpz_t(), w.size() + 1, p - 1);
          CHECK(c.bound <= Rational(top) * static_cast<long>(w.size()));
          CHECK(r >= prev);
          prev = r;
        }
        CHECK(radial_cost(*ball, w, WeightFn::power(1)) == static_cast<long>(w.size()));
      }
    }
  }

  TEST_CASE("commutator profile") {
    auto z = fixtures::z2();
    auto rows = profile(z.pres, z.backend, parse_family("commutator-power"), WeightFn::power(2), {1, 2, 3}, {},
                        default_ball_provider(z.backend, 1000000));
    REQUIRE(rows.size() == 3);
    CHECK(*rows[0].ratio == Rational(1, 8));
    CHECK(*rows[1].ratio == Rational(1, 6));
    CHECK(*rows[2].ratio == Rational(3, 16));
    CHECK(fit_constant(rows) == Rational(3, 16));
    for (const auto& r : rows) {
      CHECK(r.area_lo == r.n * r.n);
      CHECK(*r.area_hi == r.n * r.n);
    }
    std::string csv = profile_csv(rows);
    CHECK(csv.rfind("n,L,area_lo,area_hi,radial_cost,classical_bound,ratio", 0) == 0);
    CHECK(csv.find("2,8,4,4,24,40,1/6,") != std::string::npos);
  }

  TEST_CASE("families") {
    auto z = fixtures::z2();
    CHECK(family_word(parse_family("commutator-power"), 2, z.pres) == z.word("aabbAABB"));
    CHECK(family_word(parse_family("relator-power"), 2, z.pres) == z.word("abABabAB"));
    auto f = fixtures::f2();
    auto free_rows = profile(f.pres, f.backend, WordFamily{WordFamily::Kind::List, 0, {f.word("abBA"), f.word("aA")}},
                             WeightFn::power(2), {1, 2}, {}, default_ball_provider(f.backend, 100000));
    for (const auto& r : free_rows) CHECK(*r.ratio == 0);
    CHECK(fit_constant(free_rows) == 0);
    CHECK_THROWS_AS(profile(f.pres, f.backend, WordFamily{WordFamily::Kind::List, 0, {f.word("ab")}},
                            WeightFn::power(2), {1}, {}, default_ball_provider(f.backend, 100000)),
                    Error);
  }

  TEST_CASE("genus-2 linear ratio") {
    auto g = fixtures::genus2();
    auto ball = g.ball(4);
    std::mt19937_64 rng(8);
    WordFamily fam{WordFamily::Kind::List, 0, {}};
    for (int t = 0; t < 20; ++t) fam.words.push_back(fixtures::random_identity(rng, *ball, 4));
    std::vector<std::size_t> ns;
    for (std::size_t n = 1; n <= fam.words.size(); ++n) ns.push_back(n);
    auto rows = profile(g.pres, g.backend, fam, WeightFn::power(1), ns, {}, default_ball_provider(g.backend, 1000000));
    CHECK(fit_constant(rows) <= 1);
  }
}
