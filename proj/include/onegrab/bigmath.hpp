#pragma once

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

#include "onegrab/errors.hpp"
#include "onegrab/logmath.hpp"

namespace onegrab {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// C(n, k) as an exact integer. Throws DomainError unless 0 <= k <= n.
BigInt choose_exact(std::int64_t n, std::int64_t k);

// Natural log of a non-negative big integer (-inf at zero).
double log_of_big(const BigInt& value);

// Correctly rounded double of a non-negative rational. The quotient is formed
// with 192 guard bits before the single rounding to double.
double rational_to_double(const BigRational& value);

// Natural log of a non-negative rational (-inf at zero).
double log_of_rational(const BigRational& value);

}  // namespace onegrab
