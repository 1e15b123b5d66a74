#include <random>

#include "doctest.h"
#include "error.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace ggt;

TEST_SUITE("oracle") {
  TEST_CASE("exact keys") {
    auto z = fixtures::z2();
    CHECK(z.backend->exact_key(z.word("abAB")) == z.backend->exact_key(Word{}));
    CHECK(z.backend->exact_key(z.word("aab")).data == std::vector<std::int64_t>{2, 1});
    auto f = fixtures::f2();
    CHECK(f.backend->exact_key(f.word("abBA")) == f.backend->exact_key(Word{}));
    CHECK(f.backend->exact_key(f.word("ab")) != f.backend->exact_key(f.word("ba")));
  }

  TEST_CASE("is_identity") {
    auto z = fixtures::z2();
    CHECK(z.backend->is_identity(z.word("aabbAABB")));
    CHECK_FALSE(z.backend->is_identity(z.word("aab")));
    auto g = fixtures::genus2();
    CHECK(g.backend->is_identity(g.word("abABcdCD")));
    CHECK(g.backend->is_identity(g.word("cdCDabAB")));
    CHECK_FALSE(g.backend->is_identity(g.word("abAB")));
    auto f = fixtures::f2();
    CHECK_FALSE(f.backend->is_identity(f.word("ab")));
    CHECK(f.backend->is_identity(f.word("abBA")));
  }

  TEST_CASE("small cancellation report") {
    auto g2 = check_small_cancellation(parse_presentation("<a,b,c,d|abABcdCD>"), Rational(1, 6));
    CHECK(g2.max_piece == 1);
    CHECK(g2.min_relator_length == 8);
    CHECK(g2.ratio == Rational(1, 8));
    CHECK(g2.passes);

    auto z2 = check_small_cancellation(parse_presentation("<a,b|abAB>"), Rational(1, 6));
    CHECK(z2.ratio >= Rational(1, 6));
    CHECK_FALSE(z2.passes);

    auto z4 = check_small_cancellation(parse_presentation("<a|aaaa>"), Rational(1, 6));
    CHECK(z4.max_piece == 3);
    CHECK_FALSE(z4.passes);

    CHECK_THROWS_AS(Backend::small_cancellation(parse_presentation("<a,b|abAB>")), Error);
  }

  TEST_CASE("Dehn reduction") {
    auto g = fixtures::genus2();
    auto r = g.backend->dehn_reduce(g.word("abABcdCD"));
    CHECK(r.word.empty());
    CHECK(r.moves.size() == 1);

    auto c = g.backend->dehn_reduce(g.word("ab") * g.word("abABcdCD") * g.word("BA"));
    CHECK(c.word.empty());
    CHECK(c.moves.size() == 1);

    auto n = g.backend->dehn_reduce(g.word("abAB"));
    CHECK_FALSE(n.word.empty());
  }

  TEST_CASE("Dehn moves never lengthen and stay within L(w)") {
    auto g = fixtures::genus2();
    std::mt19937_64 rng(11);
    const Word rel = g.word("abABcdCD");
    for (int t = 0; t < 200; ++t) {
      // Products of conjugated relators.
      Word w;
      int factors = 1 + t % 3;
      for (int i = 0; i < factors; ++i) {
        Word v = g.word(oracle::random_word(rng, 4, t % 5));
        w = w * v * (t % 2 ? rel : rel.inverse()) * v.inverse();
      }
      w = w.reduced();
      auto res = g.backend->dehn_reduce(w);
      CHECK(res.word.empty());
      CHECK(res.moves.size() <= w.size());
      std::size_t len = w.size();
      for (const auto& m : res.moves) {
        const Word& r = g.pres.symmetrized()[m.symmetrized];
        CHECK(2 * m.replaced > r.size());
        std::size_t next = len - m.replaced + (r.size() - m.replaced);
        CHECK(next < len);
        len = next;
      }
    }
  }

  TEST_CASE("identity is invariant under inversion and rotation") {
    auto g = fixtures::genus2();
    std::mt19937_64 rng(3);
    for (int t = 0; t < 300; ++t) {
      Word w = g.word(oracle::random_word(rng, 4, 1 + t % 12));
      bool id = g.backend->is_identity(w);
      CHECK(id == g.backend->is_identity(w.inverse()));
      for (std::size_t j = 0; j < w.size(); ++j) CHECK(id == g.backend->is_identity(w.rotated(j)));
    }
  }

  TEST_CASE("Dehn agrees with the exhaustive ball on genus-2 words") {
    auto g = fixtures::genus2();
    auto ball = g.ball(3);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 300; ++t) {
      // u v^-1 with |u|, |v| <= 3 stays inside the ball's lookup range.
      Word u = g.word(oracle::random_word(rng, 4, t % 4));
      Word v = g.word(oracle::random_word(rng, 4, (t / 4) % 4));
      bool same = ball->find(u) == ball->find(v);
      CHECK(same == g.backend->is_identity(u * v.inverse()));
    }
  }

  TEST_CASE("direct product backend") {
    auto p = fixtures::make("<a,b,c|acAC,bcBC>", "product:free:2,abelian:1");
    CHECK(p.backend->is_identity(p.word("acAC")));
    CHECK_FALSE(p.backend->is_identity(p.word("abAB")));
    CHECK(p.backend->exact_key(p.word("ac")) == p.backend->exact_key(p.word("ca")));
    CHECK_THROWS_AS(parse_backend("product:free", parse_presentation("<a|>")), Error);
    CHECK_THROWS_AS(parse_backend("quaternion", parse_presentation("<a|>")), Error);
  }

  TEST_CASE("free abelian backend requires commutators") {
    CHECK_THROWS_AS(parse_backend("abelian", parse_presentation("<a,b|>")), Error);
    CHECK_THROWS_AS(parse_backend("free", parse_presentation("<a,b|abAB>")), Error);
  }
}
