#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mfcong/arith.hpp"

namespace mfcong::poly {

/* Dense univariate polynomials, coefficients ascending (index = degree).
 * The zero polynomial is the empty vector. */
using ZPoly = std::vector<Integer>;
using FpPoly = std::vector<std::uint64_t>;

int degree(ZPoly const& f);
int degree(FpPoly const& f);
void trim(ZPoly& f);
void trim(FpPoly& f);

ZPoly mul(ZPoly const& a, ZPoly const& b);
ZPoly add(ZPoly const& a, ZPoly const& b);
ZPoly sub(ZPoly const& a, ZPoly const& b);
ZPoly pow(ZPoly const& a, int k);

/* Arithmetic in F_p[x]; p must be prime and below 2^32. */
FpPoly reduce(ZPoly const& f, std::uint64_t p);
ZPoly lift(FpPoly const& f);
FpPoly mul(FpPoly const& a, FpPoly const& b, std::uint64_t p);
FpPoly sub(FpPoly const& a, FpPoly const& b, std::uint64_t p);
std::pair<FpPoly, FpPoly> divmod(FpPoly const& a, FpPoly const& b, std::uint64_t p);
FpPoly rem(FpPoly const& a, FpPoly const& b, std::uint64_t p);
FpPoly gcd(FpPoly a, FpPoly b, std::uint64_t p);
FpPoly monic(FpPoly f, std::uint64_t p);
FpPoly derivative(FpPoly const& f, std::uint64_t p);
FpPoly powmod(FpPoly base, Integer exponent, FpPoly const& modulus, std::uint64_t p);
bool divides(FpPoly const& d, FpPoly const& f, std::uint64_t p);

struct FpFactor {
    FpPoly factor;  // monic irreducible
    int multiplicity;
};

/* Complete factorization of a nonzero polynomial over F_p into monic
 * irreducibles (squarefree + distinct-degree + Cantor-Zassenhaus).
 * Deterministic: factors are sorted by (degree, coefficients). */
std::vector<FpFactor> factor_mod_p(FpPoly const& f, std::uint64_t p);

bool is_squarefree_mod_p(FpPoly const& f, std::uint64_t p);

/* Characteristic polynomial det(xI - A) of a square integer matrix
 * (row-major, size n*n), monic, by the division-free Berkowitz algorithm. */
ZPoly charpoly(std::vector<Integer> const& a, int n);

enum class Irreducibility { irreducible, reducible_or_unknown };

/* Irreducibility over Q of a monic integer polynomial via modular
 * factorization degree patterns; returns irreducible only when certified. */
Irreducibility certify_irreducible(ZPoly const& f, int max_primes = 400);

}  // namespace mfcong::poly
