#include "mfcong/arith.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

#include "mfcong/errors.hpp"

namespace mfcong {

IndexDivisible::IndexDivisible(std::int64_t p)
    : Error("p = " + std::to_string(p) +
            " may divide the index of the stored order (Dedekind's criterion failed for every "
            "candidate generator); supply explicit place data in the field file"),
      p_(p) {}

InsufficientPrecision::InsufficientPrecision(std::int64_t needed, std::int64_t have)
    : Error("insufficient precision: need precision ≥ " + std::to_string(needed) + ", have " +
            std::to_string(have)),
      needed_(needed),
      have_(have) {}

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::int64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
    assert(n >= 1);
    std::vector<std::pair<std::int64_t, int>> out;
    for (std::int64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
        int k = 0;
        while (n % d == 0) {
            n /= d;
            ++k;
        }
        if (k) out.emplace_back(d, k);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
    std::vector<std::int64_t> out;
    for (auto const& [q, k] : factorize(n)) out.push_back(q);
    return out;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
    std::vector<std::int64_t> out{1};
    for (auto const& [q, k] : factorize(n)) {
        std::size_t const base = out.size();
        std::int64_t qq = 1;
        for (int i = 1; i <= k; ++i) {
            qq *= q;
            for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * qq);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::int64_t> primes_up_to(std::int64_t bound) {
    std::vector<std::int64_t> out;
    if (bound < 2) return out;
    std::vector<bool> composite(static_cast<std::size_t>(bound) + 1, false);
    for (std::int64_t i = 2; i <= bound; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::int64_t j = i * i; j <= bound; j += i) composite[j] = true;
    }
    return out;
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

std::int64_t ipow(std::int64_t base, int exponent) {
    std::int64_t r = 1;
    for (int i = 0; i < exponent; ++i) {
        if (__builtin_mul_overflow(r, base, &r)) throw Error("integer overflow in ipow");
    }
    return r;
}

std::int64_t powmod(std::int64_t base, std::int64_t exponent, std::int64_t modulus) {
    __int128 r = 1 % modulus;
    __int128 b = ((base % modulus) + modulus) % modulus;
    while (exponent > 0) {
        if (exponent & 1) r = r * b % modulus;
        b = b * b % modulus;
        exponent >>= 1;
    }
    return static_cast<std::int64_t>(r);
}

int vp(std::int64_t n, std::int64_t p) {
    assert(n != 0);
    int k = 0;
    while (n % p == 0) {
        n /= p;
        ++k;
    }
    return k;
}

long vp(Integer const& n, std::int64_t p) {
    assert(n != 0);
    Integer q = n;
    Integer const pz(static_cast<long>(p));
    return static_cast<long>(mpz_remove(q.get_mpz_t(), q.get_mpz_t(), pz.get_mpz_t()));
}

long vp(Rational const& q, std::int64_t p) { return vp(q.get_num(), p) - vp(q.get_den(), p); }

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

}  // namespace

Integer parse_integer(std::string_view text) {
    std::string_view body = text;
    if (!body.empty() && body.front() == '-') body.remove_prefix(1);
    if (!all_digits(body)) throw InputError("not an exact integer: '" + std::string(text) + "'");
    return Integer(std::string(text), 10);
}

Rational parse_rational(std::string_view text) {
    auto const slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_integer(text));
    Integer const num = parse_integer(text.substr(0, slash));
    std::string_view const den_text = text.substr(slash + 1);
    if (!all_digits(den_text))
        throw InputError("not an exact rational: '" + std::string(text) + "'");
    Integer const den(std::string(den_text), 10);
    if (den == 0) throw InputError("zero denominator: '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

std::string to_string(Rational const& q) { return q.get_str(10); }
std::string to_string(Integer const& z) { return z.get_str(10); }

}  // namespace mfcong
