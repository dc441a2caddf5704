#include <doctest.h>

#include <random>

#include "mfcong/engine.hpp"
#include "mfcong/errors.hpp"
#include "mfcong/qseries.hpp"
#include "test_support.hpp"

using namespace mfcong;

namespace {

bool divisible(Integer const& x, Integer const& m) { return mpz_divisible_p(x.get_mpz_t(), m.get_mpz_t()) != 0; }

Integer sigma(std::int64_t n, int k, bool odd_only = false) {
    Integer s = 0;
    for (std::int64_t d = 1; d <= n; ++d) {
        if (n % d || (odd_only && d % 2 == 0)) continue;
        Integer t;
        mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(k));
        s += t;
    }
    return s;
}

// Akiyama-Tanigawa; gives B_1 = +1/2, only even indices are compared.
Rational bernoulli_at(int k) {
    std::vector<Rational> a(static_cast<std::size_t>(k) + 1);
    for (int m = 0; m <= k; ++m) {
        a[m] = Rational(1, m + 1);
        for (int j = m; j >= 1; --j) a[j - 1] = j * (a[j - 1] - a[j]);
    }
    return a[0];
}

QExpansion rational_series(std::vector<Integer> const& c, int weight = 0, std::int64_t level = 1) {
    auto const q = NumberField::rationals();
    std::vector<FieldElement> v;
    for (auto const& x : c) v.push_back(q->from_rational(Rational(x)));
    return QExpansion(q, weight, level, std::move(v));
}

std::vector<Rational> rational_coefficients(QExpansion const& h) {
    std::vector<Rational> out;
    for (auto const& a : h.coefficients()) out.push_back(a[0]);
    return out;
}

// x = 0 mod m in Z_(p): numerator divisible by m, denominator prime to p.
bool divisible_at(Rational const& x, Integer const& m, std::int64_t p) {
    return x.get_den() % static_cast<long>(p) != 0 && divisible(x.get_num(), m);
}

std::vector<Integer> integer_coefficients(QExpansion const& h) {
    std::vector<Integer> out;
    for (auto const& a : h.coefficients()) {
        REQUIRE(a[0].get_den() == 1);
        out.push_back(a[0].get_num());
    }
    return out;
}

QExpansion random_series(FieldPtr const& k, std::int64_t b, std::mt19937_64& rng) {
    std::vector<FieldElement> c;
    for (std::int64_t n = 0; n <= b; ++n) c.push_back(testing::random_element(k, 5, rng));
    return QExpansion(k, 2, 9, std::move(c));
}

}  // namespace

TEST_CASE("bernoulli numbers match an independent recurrence") {
    CHECK(bernoulli(2) == Rational(1, 6));
    CHECK(bernoulli(12) == Rational(-691, 2730));
    for (int k = 2; k <= 60; k += 2) CHECK(bernoulli(k) == bernoulli_at(k));
    for (int k = 3; k <= 31; k += 2) CHECK(bernoulli(k) == 0);
}

TEST_CASE("eisenstein series against divisor sums") {
    for (int k : {4, 6, 8, 10, 12}) {
        auto const e = rational_coefficients(eisenstein_series(k, 60));
        Rational const c = Rational(-2 * k) / bernoulli_at(k);
        CHECK(e[0] == 1);
        for (std::int64_t n = 1; n <= 60; ++n) CHECK(e[n] == c * Rational(sigma(n, k - 1)));
    }
    auto const e4 = eisenstein_series(4, 300);
    auto const e8 = eisenstein_series(8, 300);
    CHECK(series_mul(e4, e4).coefficients() == e8.coefficients());
    CHECK(series_mul(e4, e4).weight() == 8);
}

TEST_CASE("weight one unit at p = 2 counts hexagonal lattice points") {
    std::int64_t const b = 500;
    auto const e = integer_coefficients(eisenstein_unit(2, b));
    std::vector<Integer> count(b + 1, 0);
    for (std::int64_t x = -30; x <= 30; ++x)
        for (std::int64_t y = -30; y <= 30; ++y) {
            auto const n = x * x + x * y + y * y;
            if (n <= b) count[n] += 1;
        }
    CHECK(e == count);
    CHECK(eisenstein_unit(2, 10).weight() == 1);
    CHECK(eisenstein_unit(2, 10).level() == 3);
}

TEST_CASE("weight two unit at p = 3 uses odd divisors") {
    auto const e = integer_coefficients(eisenstein_unit(3, 200));
    CHECK(e[0] == 1);
    for (std::int64_t n = 1; n <= 200; ++n) CHECK(e[n] == 24 * sigma(n, 1, true));
    CHECK(eisenstein_unit(3, 10).level() == 2);
}

TEST_CASE("units are congruent to 1 mod p") {
    for (std::int64_t p : {2, 3, 5, 7, 11, 13}) {
        auto const e = rational_coefficients(eisenstein_unit(p, 500));
        CHECK(e[0] == 1);
        int bad = 0;
        for (std::size_t n = 1; n < e.size(); ++n) bad += !divisible_at(e[n], Integer(static_cast<long>(p)), p);
        CHECK_MESSAGE(bad == 0, "p = " << p);
    }
}

TEST_CASE("p^j-th powers of units are congruent to 1 mod p^(j+1)") {
    for (std::int64_t p : {2, 3, 5}) {
        for (int j = 0; j <= 3; ++j) {
            auto const u = static_cast<std::uint64_t>(ipow(p, j));
            auto const e = rational_coefficients(unit_power(p, u, 200));
            Integer const mod(static_cast<long>(ipow(p, j + 1)));
            int bad = 0;
            for (std::size_t n = 1; n < e.size(); ++n) bad += !divisible_at(e[n], mod, p);
            CHECK_MESSAGE(bad == 0, "p = " << p << ", j = " << j);
            CHECK(e[0] == 1);
            CHECK_NOTHROW(unit_power(p, u, 200, j));
        }
    }
    CHECK_THROWS_AS(unit_power(5, 5, 50, 2), Error);
}

TEST_CASE("product is commutative, associative and matches naive convolution") {
    auto const k = testing::quartic();
    std::mt19937_64 rng(11);
    auto const a = random_series(k, 20, rng);
    auto const b = random_series(k, 20, rng);
    auto const c = random_series(k, 15, rng);
    CHECK(series_mul(a, b).coefficients() == series_mul(b, a).coefficients());
    CHECK(series_mul(series_mul(a, b), c).coefficients() == series_mul(a, series_mul(b, c)).coefficients());
    auto const ab = series_mul(a, b);
    CHECK(ab.precision() == 20);
    CHECK(ab.weight() == 4);
    for (std::int64_t n = 0; n <= 20; ++n) {
        auto s = k->zero();
        for (std::int64_t i = 0; i <= n; ++i) s += a[i] * b[n - i];
        CHECK(ab[n] == s);
    }
    CHECK(series_mul(a, c).precision() == 15);
}

TEST_CASE("sum, difference and precision") {
    auto const g = rational_series({0, 1, 2, 3}, 2);
    auto const h = rational_series({0, 1, 5, 7}, 2);
    CHECK(integer_coefficients(series_sub(h, g)) == std::vector<Integer>{0, 0, 3, 4});
    CHECK(integer_coefficients(series_add(h, g)) == std::vector<Integer>{0, 2, 7, 10});
    CHECK_THROWS_AS(g[4], InsufficientPrecision);
    CHECK_THROWS(series_add(g, rational_series({0, 1}, 4)));
    CHECK(g.truncate(2).precision() == 2);
}

TEST_CASE("strip zeroes indices sharing a factor with Np") {
    auto const f1 = formats::load_form(testing::fixture("f1_9_4.json")).form.truncate(200);
    auto const s = strip(f1, 45, 675);
    CHECK(s.level() == 675);
    CHECK(s.weight() == f1.weight());
    for (std::int64_t n = 0; n <= 200; ++n) {
        if (std::gcd(n, std::int64_t{45}) == 1)
            CHECK(s[n] == f1[n]);
        else
            CHECK(s[n].is_zero());
    }
}

TEST_CASE("ord_mod finds the first index below the exponent") {
    auto const q = NumberField::rationals();
    auto const place = factor_prime(q, 5).at(0);
    auto const h = rational_series({0, 125, 25, 250, 10, 3});
    CHECK(ord_mod(h, place, 1).exhausted == false);
    CHECK(ord_mod(h, place, 1).index == 5);
    CHECK(ord_mod(h, place, 2).index == 4);
    CHECK(ord_mod(h, place, 3).index == 2);
    auto const z = rational_series({0, 0, 0});
    CHECK(ord_mod(z, place, 50).exhausted);
    CHECK(ord_mod(z, place, 50).index == 3);
}

TEST_CASE("fixture difference f1 - f2 vanishes mod P^3 through 2160") {
    auto f1 = formats::load_form(testing::fixture("f1_9_4.json")).form;
    auto f2 = formats::load_form(testing::fixture("f2_9_24.json")).form;
    unify_fields(f1, f2);
    auto const place = factor_prime(f2.field(), 5).at(1);
    REQUIRE(place.ramification_index() == 2);
    auto const k = f2.field();
    QExpansion const a(k, 0, 9, f1.truncate(2160).coefficients());
    QExpansion const b(k, 0, 9, f2.truncate(2160).coefficients());
    auto const r = ord_mod(series_sub(a, b), place, 3);
    CHECK(r.exhausted);
    CHECK(r.index == 2161);
    CHECK_FALSE(ord_mod(series_sub(a, b), place, 4).exhausted);
    CHECK(f1[7] == k->from_rational(20));
    CHECK(congruent(f1[7], f2[7], place, 3));
}
