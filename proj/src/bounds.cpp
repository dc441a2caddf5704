#include "mfcong/bounds.hpp"

#include "mfcong/errors.hpp"

namespace mfcong::bounds {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw InputError("level arithmetic overflows 64 bits");
    return r;
}

}  // namespace

std::int64_t n_prime(std::int64_t n, std::int64_t p) {
    if (n < 1) throw InputError("level must be positive");
    if (!is_prime(p)) throw InputError("p must be prime");
    std::int64_t r = n;
    for (auto q : prime_divisors(n)) r = checked_mul(r, q);
    if (n % p != 0) r = checked_mul(r, p * p);
    return r;
}

std::int64_t index_gamma1(std::int64_t m) {
    if (m < 1) throw InputError("index of Gamma_1(M) needs M >= 1");
    std::int64_t r = checked_mul(m, m);
    for (auto q : prime_divisors(m)) r = r / (q * q) * (q * q - 1);
    return r;
}

std::int64_t index_gamma0(std::int64_t m) {
    if (m < 1) throw InputError("index of Gamma_0(M) needs M >= 1");
    std::int64_t r = m;
    for (auto q : prime_divisors(m)) r = r / q * (q + 1);
    return r;
}

std::string to_string(IndexKind kind) { return kind == IndexKind::gamma0 ? "gamma0" : "gamma1"; }

LevelData level_data(std::int64_t n, std::int64_t p, IndexKind kind) {
    LevelData d;
    d.n = n;
    d.p = p;
    d.n_prime = n_prime(n, p);
    d.mu1 = index_gamma1(d.n_prime);
    d.mu0 = index_gamma0(d.n_prime);
    d.index_used = kind;
    return d;
}

Rational sturm_prime_bound(std::int64_t k, std::int64_t mu) {
    if (k < 1 || mu < 1) throw InputError("Sturm bound needs k >= 1 and mu >= 1");
    Rational b(Integer(static_cast<long>(k)) * Integer(static_cast<long>(mu)), 12);
    b.canonicalize();
    return b;
}

std::int64_t floor_bound(Rational const& bound) {
    Integer f;
    mpz_fdiv_q(f.get_mpz_t(), bound.get_num_mpz_t(), bound.get_den_mpz_t());
    if (!f.fits_slong_p()) throw InputError("Sturm bound does not fit in 64 bits");
    return f.get_si();
}

std::int64_t ceil_div(std::int64_t b, std::int64_t eps) {
    if (b < 1 || eps < 1) throw Error("ceil_div needs positive arguments");
    return (b + eps - 1) / eps;
}

std::int64_t alpha(std::int64_t u) { return u <= 2 ? u - 1 : u - 2; }

std::int64_t s_value(std::int64_t m, std::int64_t e, std::int64_t r, std::int64_t p) {
    if (m < 1 || e < 1 || r < 0) throw InputError("s needs m >= 1, e >= 1, r >= 0");
    std::int64_t const c = ceil_div(m, e);
    if (p == 2) return std::max<std::int64_t>(0, alpha(c - r));
    return std::max<std::int64_t>(0, c - 1 - r);
}

std::int64_t weight_modulus_thm1(std::int64_t s, std::int64_t p) { return checked_mul(ipow(p, static_cast<int>(s)), p - 1); }

std::int64_t weight_modulus_thm2(std::int64_t m, std::int64_t e, std::int64_t delta, std::int64_t d, std::int64_t p) {
    std::int64_t const top = ceil_div(m, e) - 1;
    if (delta > top) throw Error("delta exceeds ceil(m/e) - 1");
    if (d < 1 || (p - 1) % d != 0) throw Error("d does not divide p - 1");
    return checked_mul(ipow(p, static_cast<int>(top - delta)), (p - 1) / d);
}

std::int64_t cyclotomic_order(std::int64_t m, std::int64_t e, std::int64_t p) {
    if (p == 2) throw Error("cyclotomic_order needs p odd");
    return checked_mul(ipow(p, static_cast<int>(ceil_div(m, e) - 1)), p - 1);
}

RValue r_value(std::int64_t field_degree, std::int64_t p, std::optional<std::int64_t> galois_closure_degree) {
    if (field_degree < 1) throw InputError("field degree must be positive");
    if (galois_closure_degree) {
        if (*galois_closure_degree < 1 || *galois_closure_degree % field_degree != 0)
            throw InputError("Galois closure degree must be a positive multiple of the field degree");
        if (*galois_closure_degree % p != 0)
            return {0, "p does not divide [L:Q] = " + std::to_string(*galois_closure_degree)};
        return {std::nullopt, "p divides the supplied [L:Q] = " + std::to_string(*galois_closure_degree)};
    }
    // [L:Q] divides n!, so p > n rules out p | e(L, p).
    if (p > field_degree) return {0, "p does not divide n! for n = " + std::to_string(field_degree)};
    return {std::nullopt, "p divides n! for n = " + std::to_string(field_degree) + " and no Galois closure degree given"};
}

}  // namespace mfcong::bounds
