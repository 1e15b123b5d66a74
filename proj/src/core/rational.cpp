#include "rational.hpp"

#include <cctype>

#include "error.hpp"

namespace ggt {

Rational parse_rational(const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
  if (text.empty()) fail(ErrorCode::Parse, "empty rational");

  auto bad = [&] { fail(ErrorCode::Parse, "malformed rational '" + raw + "'"); };
  auto check_int = [&](const std::string& s, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    if (i == s.size()) bad();
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) bad();
  };

  Rational q;
  if (auto slash = text.find('/'); slash != std::string::npos) {
    std::string num = text.substr(0, slash), den = text.substr(slash + 1);
    check_int(num, true);
    check_int(den, false);
    mpz_class d(den);
    if (d == 0) fail(ErrorCode::Parse, "zero denominator in '" + raw + "'");
    q = Rational(mpz_class(num[0] == '+' ? num.substr(1) : num), d);
  } else if (auto dot = text.find('.'); dot != std::string::npos) {
    std::string whole = text.substr(0, dot), frac = text.substr(dot + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) whole.erase(0, 1);
    if (whole.empty()) whole = "0";
    if (frac.empty()) frac = "0";
    check_int(whole, false);
    check_int(frac, false);
    mpz_class den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    q = Rational(mpz_class(whole) * den + mpz_class(frac), den);
    if (neg) q = -q;
  } else {
    check_int(text, true);
    q = Rational(mpz_class(text[0] == '+' ? text.substr(1) : text));
  }
  q.canonicalize();
  return q;
}

mpz_class floor_sqrt(const Rational& q) {
  if (q < 0) fail(ErrorCode::InvalidArgument, "floor_sqrt of negative value");
  mpz_class approx = sqrt(mpz_class(q.get_num() / q.get_den()));
  while (Rational(approx * approx) > q) --approx;
  while (Rational((approx + 1) * (approx + 1)) <= q) ++approx;
  return approx;
}

}  // namespace ggt
