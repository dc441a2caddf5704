#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace mfcong {

using Integer = mpz_class;
using Rational = mpq_class;

bool is_prime(std::int64_t n);

/* Prime factorization of n >= 1 by trial division, primes ascending. */
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);
std::vector<std::int64_t> prime_divisors(std::int64_t n);
std::vector<std::int64_t> divisors(std::int64_t n);
std::vector<std::int64_t> primes_up_to(std::int64_t bound);

std::int64_t lcm64(std::int64_t a, std::int64_t b);
std::int64_t ipow(std::int64_t base, int exponent);
std::int64_t powmod(std::int64_t base, std::int64_t exponent, std::int64_t modulus);

/* p-adic valuations; the argument must be nonzero. */
int vp(std::int64_t n, std::int64_t p);
long vp(Integer const& n, std::int64_t p);
long vp(Rational const& q, std::int64_t p);

/* Strict exact parsing: "a", "-a", "a/b". Anything else (decimal points,
 * exponents, whitespace, zero denominators) is rejected with InputError. */
Rational parse_rational(std::string_view text);
Integer parse_integer(std::string_view text);
std::string to_string(Rational const& q);
std::string to_string(Integer const& z);

}  // namespace mfcong
