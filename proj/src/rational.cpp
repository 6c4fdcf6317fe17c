#include "qcwb/rational.hpp"

#include "qcwb/errors.hpp"

#include <limits>

namespace qcwb {

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InputError("zero denominator");
  return Rational(BigInt(num), BigInt(den));
}

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in '" + text + "'");
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw InputError("not a rational: '" + text + "'");
  }
}

std::string to_string(const Rational& q) {
  return numerator_of(q).str() + "/" + denominator_of(q).str();
}

BigInt floor_of(const Rational& q) {
  BigInt n = numerator_of(q), d = denominator_of(q);
  BigInt r = n / d;  // truncates toward zero
  if (r * d != n && n < 0) r -= 1;
  return r;
}

BigInt ceil_of(const Rational& q) {
  BigInt f = floor_of(q);
  return Rational(f) == q ? f : f + 1;
}

std::int64_t to_int64(const BigInt& v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw InputError("integer out of 64-bit range: " + v.str());
  return v.convert_to<std::int64_t>();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

unsigned ceil_log2(const BigInt& v) {
  unsigned l = 0;
  BigInt p = 1;
  while (p < v) {
    p <<= 1;
    ++l;
  }
  return l;
}

bool is_power_of_two(const BigInt& v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace qcwb
