#pragma once

#include <memory>
#include <random>
#include <string>

#include "cayley.hpp"
#include "oracle.hpp"
#include "words.hpp"

namespace fixtures {

struct Group {
  ggt::Presentation pres;
  std::shared_ptr<const ggt::Backend> backend;

  ggt::Word word(const std::string& s) const { return ggt::parse_word(s, pres.alphabet()); }
  std::shared_ptr<const ggt::CayleyBall> ball(unsigned r, std::size_t cap = 5000000) const {
    return std::make_shared<const ggt::CayleyBall>(ggt::build_ball(backend, r, cap));
  }
};

inline Group make(const std::string& text, const std::string& backend) {
  Group g;
  g.pres = ggt::parse_presentation(text);
  g.backend = std::make_shared<const ggt::Backend>(ggt::parse_backend(backend, g.pres));
  return g;
}

inline Group z2() { return make("<a,b|abAB>", "abelian"); }
inline Group f2() { return make("<a,b|>", "free"); }
inline Group genus2() { return make("<a,b,c,d|abABcdCD>", "c16"); }

// x * rep(x)^-1 for a random word x of length <= max_len: an identity word
// whose prefixes stay within max_len of e.
inline ggt::Word random_identity(std::mt19937_64& rng, const ggt::CayleyBall& ball, std::size_t max_len) {
  const std::size_t gens = ball.backend().alphabet().generators();
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::uniform_int_distribution<std::uint32_t> letter(0, static_cast<std::uint32_t>(2 * gens - 1));
  ggt::Word x;
  std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) x.push_back(ggt::Letter(letter(rng)));
  ggt::Word rep = ball.element(ball.locate(x)).rep;
  return x * rep.inverse();
}

}  // namespace fixtures
