#include "dualdepth/rational.hpp"

#include <cctype>
#include <cmath>

namespace dualdepth {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s))
    throw RationalSyntaxError("malformed number: '" + std::string(whole) + "'");
  mpz_class z(std::string(s), 10);
  return neg ? mpz_class(-z) : z;
}

mpz_class pow10(unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  const std::string_view whole = text;
  if (text.empty()) throw RationalSyntaxError("empty number");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(text.substr(0, slash), whole);
    std::string_view den_text = text.substr(slash + 1);
    if (!all_digits(den_text))
      throw RationalSyntaxError("malformed denominator: '" + std::string(whole) + "'");
    mpz_class den(std::string(den_text), 10);
    if (den == 0) throw RationalSyntaxError("zero denominator: '" + std::string(whole) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  bool neg = false;
  if (text.front() == '-' || text.front() == '+') {
    neg = text.front() == '-';
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mpz_class ez = parse_integer(text.substr(e + 1), whole);
    if (!ez.fits_slong_p() || abs(ez) > 100000)
      throw RationalSyntaxError("exponent out of range: '" + std::string(whole) + "'");
    exponent = ez.get_si();
    text = text.substr(0, e);
  }
  std::string digits;
  long frac_len = 0;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view ip = text.substr(0, dot), fp = text.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) ||
        (!fp.empty() && !all_digits(fp)))
      throw RationalSyntaxError("malformed decimal: '" + std::string(whole) + "'");
    digits = std::string(ip) + std::string(fp);
    frac_len = static_cast<long>(fp.size());
  } else {
    if (!all_digits(text))
      throw RationalSyntaxError("malformed number: '" + std::string(whole) + "'");
    digits = std::string(text);
  }
  mpz_class mant(digits, 10);
  if (neg) mant = -mant;
  const long scale = exponent - frac_len;
  Rational q;
  if (scale >= 0) {
    q = Rational(mant * pow10(static_cast<unsigned long>(scale)));
  } else {
    q = Rational(mant, pow10(static_cast<unsigned long>(-scale)));
    q.canonicalize();
  }
  return q;
}

std::string to_string(const Rational& q_in) {
  Rational q = q_in;
  q.canonicalize();
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational from_double(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite double");
  return Rational(v);
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> to_doubles(std::span<const Rational> v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& q : v) out.push_back(q.get_d());
  return out;
}

RVec from_doubles(std::span<const double> v) {
  RVec out;
  out.reserve(v.size());
  for (double x : v) out.push_back(from_double(x));
  return out;
}

bool lex_less(std::span<const Rational> a, std::span<const Rational> b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return a.size() < b.size();
}

}  // namespace dualdepth
