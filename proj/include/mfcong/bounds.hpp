#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mfcong/arith.hpp"

namespace mfcong::bounds {

/* N' = N p^2 prod_{q|N} q if p does not divide N, else N prod_{q|N} q. */
std::int64_t n_prime(std::int64_t n, std::int64_t p);

/* [SL_2(Z) : Gamma_1(M)] and [SL_2(Z) : Gamma_0(M)]. */
std::int64_t index_gamma1(std::int64_t m);
std::int64_t index_gamma0(std::int64_t m);

enum class IndexKind { gamma0, gamma1 };
std::string to_string(IndexKind kind);

struct LevelData {
    std::int64_t n = 0;
    std::int64_t p = 0;
    std::int64_t n_prime = 0;
    std::int64_t mu1 = 0;
    std::int64_t mu0 = 0;
    IndexKind index_used = IndexKind::gamma1;
    std::int64_t mu() const { return index_used == IndexKind::gamma0 ? mu0 : mu1; }
    friend bool operator==(LevelData const&, LevelData const&) = default;
};
LevelData level_data(std::int64_t n, std::int64_t p, IndexKind kind);

/* k mu / 12 exactly; primes l <= this bound (inclusive) are checked. */
Rational sturm_prime_bound(std::int64_t k, std::int64_t mu);
/* Largest integer <= the bound. */
std::int64_t floor_bound(Rational const& bound);

std::int64_t ceil_div(std::int64_t b, std::int64_t eps);

/* alpha(u) = u - 1 for u <= 2, u - 2 for u >= 3. */
std::int64_t alpha(std::int64_t u);
std::int64_t s_value(std::int64_t m, std::int64_t e, std::int64_t r, std::int64_t p);

std::int64_t weight_modulus_thm1(std::int64_t s, std::int64_t p);
/* Throws Error when delta > ceil(m/e) - 1 or d does not divide p - 1. */
std::int64_t weight_modulus_thm2(std::int64_t m, std::int64_t e, std::int64_t delta, std::int64_t d, std::int64_t p);
std::int64_t cyclotomic_order(std::int64_t m, std::int64_t e, std::int64_t p);

/* r = v_p(e(L, p)) for the Galois closure L, when a divisibility argument pins it to 0. */
struct RValue {
    std::optional<std::int64_t> r;  // nullopt: inconclusive
    std::string provenance;
};
RValue r_value(std::int64_t field_degree, std::int64_t p, std::optional<std::int64_t> galois_closure_degree);

}  // namespace mfcong::bounds
