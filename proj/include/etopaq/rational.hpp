#pragma once

#include <gmpxx.h>

#include <string>

namespace etopaq {

using Rational = mpq_class;

// floor of a rational as a (small) integer
long floor_int(const Rational& q);
Rational frac(const Rational& q);
bool is_integer(const Rational& q);

// accepts "3", "-1/2", "0.25"
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

}  // namespace etopaq
