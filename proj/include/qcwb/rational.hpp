#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>

namespace qcwb {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

Rational make_rational(std::int64_t num, std::int64_t den);
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

BigInt ceil_of(const Rational& q);
BigInt floor_of(const Rational& q);
std::int64_t to_int64(const BigInt& v);  // throws InputError when out of range
double to_double(const Rational& q);

inline BigInt numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

// Smallest l with 2^l >= v (v >= 1).
unsigned ceil_log2(const BigInt& v);
bool is_power_of_two(const BigInt& v);

}  // namespace qcwb
