#include "onegrab/bigmath.hpp"

#include <cmath>

namespace onegrab {

BigInt choose_exact(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) {
    throw DomainError("choose_exact: need 0 <= k <= n");
  }
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    result *= (n - k + i);
    result /= i;  // exact: result is C(n-k+i, i) after each step
  }
  return result;
}

double log_of_big(const BigInt& value) {
  if (value < 0) throw DomainError("log_of_big: negative value");
  if (value == 0) return kNegInfinity;
  const auto bits = boost::multiprecision::msb(value);
  if (bits < 900) {
    return std::log(value.convert_to<double>());
  }
  // Keep 512 significant bits, fold the rest into an exponent.
  const unsigned drop = bits - 512;
  const BigInt window = value >> drop;
  return std::log(window.convert_to<double>()) +
         static_cast<double>(drop) * 0.6931471805599453094172321214581766;
}

double rational_to_double(const BigRational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (num < 0) throw DomainError("rational_to_double: negative value");
  if (num == 0) return 0.0;
  // Scale so the integer quotient keeps ~192 significant bits, then let the
  // single conversion to double do the rounding.
  const auto num_bits = static_cast<std::int64_t>(boost::multiprecision::msb(num));
  const auto den_bits = static_cast<std::int64_t>(boost::multiprecision::msb(den));
  std::int64_t shift = 192 + den_bits - num_bits;
  if (shift < 0) shift = 0;
  const BigInt quotient = (num << static_cast<unsigned>(shift)) / den;
  return std::ldexp(quotient.convert_to<double>(), static_cast<int>(-shift));
}

double log_of_rational(const BigRational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  if (num == 0) return kNegInfinity;
  return log_of_big(num) - log_of_big(boost::multiprecision::denominator(value));
}

}  // namespace onegrab
