#include <doctest.h>

#include "mfcong/arith.hpp"
#include "mfcong/errors.hpp"
#include "mfcong/poly.hpp"

using namespace mfcong;

TEST_CASE("primes and factorization") {
    CHECK(primes_up_to(30) == std::vector<std::int64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
    CHECK(factorize(675) == std::vector<std::pair<std::int64_t, int>>{{3, 3}, {5, 2}});
    CHECK(divisors(12).size() == 6);
    CHECK(vp(Rational(50, 3), 5) == 2);
    CHECK(vp(Rational(3, 250), 5) == -3);
    CHECK(ipow(5, 3) == 125);
    CHECK(powmod(2, 10, 1000) == 24);
}

TEST_CASE("exact parsing rejects floats") {
    CHECK(parse_rational("-6/4") == Rational(-3, 2));
    CHECK(parse_rational("17") == 17);
    CHECK_THROWS_AS(parse_rational("1.5"), InputError);
    CHECK_THROWS_AS(parse_rational("1e3"), InputError);
    CHECK_THROWS_AS(parse_rational("1/0"), InputError);
    CHECK_THROWS_AS(parse_rational(" 1"), InputError);
}

TEST_CASE("polynomial factorization over F_p") {
    using namespace poly;
    // x^4 - 29258x^2 + 97377280 = x^2 (x^2 + 2) mod 5
    ZPoly const f{97377280, 0, -29258, 0, 1};
    auto const fac = factor_mod_p(reduce(f, 5), 5);
    REQUIRE(fac.size() == 2);
    CHECK(fac[0].factor == FpPoly{0, 1});
    CHECK(fac[0].multiplicity == 2);
    CHECK(fac[1].factor == FpPoly{2, 0, 1});
    // (x+1)^2 over F_2 and a product of all linear factors over F_7
    CHECK(factor_mod_p(FpPoly{1, 0, 1}, 2).at(0).multiplicity == 2);
    CHECK(factor_mod_p(FpPoly{0, 6, 0, 0, 0, 0, 0, 1}, 7).size() == 7);
    CHECK(certify_irreducible(f) == Irreducibility::irreducible);
    CHECK(certify_irreducible(ZPoly{4, 0, 0, 0, 1}) == Irreducibility::reducible_or_unknown);
    // Klein four Galois groups: no prime leaves x^4 + 1 irreducible, so only
    // the lifted-factor exclusion can certify it.
    CHECK(certify_irreducible(ZPoly{1, 0, 0, 0, 1}) == Irreducibility::irreducible);
    CHECK(certify_irreducible(ZPoly{6, 0, -5, 0, 1}) == Irreducibility::reducible_or_unknown);
    CHECK(certify_irreducible(ZPoly{Integer("40426030666768772025"), 0, Integer("-2968020622607040"), 0,
                                    Integer("60873718294"), 0, -438896, 0, 1}) == Irreducibility::irreducible);
}

TEST_CASE("charpoly by Berkowitz") {
    // companion matrix of x^3 - 2x + 5
    std::vector<Integer> a{0, 0, -5, 1, 0, 2, 0, 1, 0};
    CHECK(poly::charpoly(a, 3) == poly::ZPoly{5, -2, 0, 1});
}
