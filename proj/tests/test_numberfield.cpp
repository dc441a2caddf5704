#include <doctest.h>

#include <fstream>
#include <map>
#include <random>

#include <json.hpp>

#include "mfcong/errors.hpp"
#include "mfcong/numberfield.hpp"
#include "test_support.hpp"

using namespace mfcong;
using mfcong::testing::fixture;

namespace {

FieldPtr gaussian() { return NumberField::create(poly::ZPoly{1, 0, 1}); }

std::vector<std::pair<int, int>> ef_pattern(std::vector<PrimePlace> const& places) {
    std::vector<std::pair<int, int>> out;
    for (auto const& pl : places) out.emplace_back(pl.ramification_index(), pl.residue_degree());
    return out;
}

}  // namespace

TEST_CASE("ring operations reduce by the minimal polynomial") {
    auto const k = gaussian();
    auto const a = k->alpha();
    CHECK(a * a == k->from_rational(-1));
    CHECK(a * k->one() == a);

    auto const q = testing::quartic();
    auto const x = q->alpha();
    std::vector<Rational> expected{Rational(-97377280), 0, 29258, 0};
    CHECK(q->to_power_basis(x * x.pow(3)) == expected);
}

TEST_CASE("inverse and field mismatch") {
    auto const q = testing::octic();
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) {
        auto const x = testing::random_element(q, 5, rng);
        if (x.is_zero()) continue;
        CHECK(x * x.inverse() == q->one());
    }
    CHECK_THROWS_AS(gaussian()->alpha() + testing::quartic()->alpha(), FieldMismatch);
}

TEST_CASE("field validation rejects reducible or non-monic polynomials") {
    CHECK_THROWS_AS(NumberField::create(poly::ZPoly{-1, 0, 1}), InputError);
    CHECK_THROWS_AS(NumberField::create(poly::ZPoly{1, 0, 2}), InputError);
    CHECK_THROWS_AS(formats::parse_field(R"({"schema":"mfcong-field/1","polynomial":[1.5,0,1]})"), InputError);
    NumberField::Options opt;
    opt.integral_basis = RationalMatrix(2, 2);
    CHECK_THROWS_AS(NumberField::create(poly::ZPoly{1, 0, 1}, opt), InputError);
}

TEST_CASE("factor_prime on small quadratic fields") {
    auto const k = gaussian();
    CHECK(ef_pattern(factor_prime(k, 5)) == std::vector<std::pair<int, int>>{{1, 1}, {1, 1}});
    CHECK(ef_pattern(factor_prime(k, 2)) == std::vector<std::pair<int, int>>{{2, 1}});
    CHECK(ef_pattern(factor_prime(k, 3)) == std::vector<std::pair<int, int>>{{1, 2}});
    // Z[sqrt(-3)] has index 2 in the maximal order; the power basis cannot be trusted at 2.
    CHECK_THROWS_AS(factor_prime(NumberField::create(poly::ZPoly{3, 0, 1}), 2), IndexDivisible);
}

TEST_CASE("factor_prime at 5 on the example fields") {
    auto const q = factor_prime(testing::quartic(), 5);
    CHECK(ef_pattern(q) == std::vector<std::pair<int, int>>{{1, 2}, {2, 1}});
    auto const o = factor_prime(testing::octic(), 5);
    CHECK(ef_pattern(o) == std::vector<std::pair<int, int>>{{2, 1}, {2, 1}, {4, 1}});
}

TEST_CASE("place invariants") {
    for (auto const& k : {testing::quartic(), testing::octic(), gaussian()}) {
        for (std::int64_t p : {2, 3, 5, 7}) {
            std::vector<PrimePlace> places;
            try {
                places = factor_prime(k, p);
            } catch (IndexDivisible const&) {
                continue;
            }
            int total = 0;
            for (auto const& pl : places) {
                total += pl.ramification_index() * pl.residue_degree();
                CHECK(valuation(k->from_rational(p), pl) == pl.ramification_index());
                CHECK(valuation(pl.tau(), pl) == -1);
                CHECK(valuation(pl.generator(), pl) == 1);
                CHECK((pl.tau() * Rational(p)).is_integral_at(p));
                for (auto const& other : places)
                    if (&other != &pl) CHECK(*valuation(pl.tau(), other) >= 0);
            }
            CHECK(total == k->degree());
        }
    }
}

TEST_CASE("valuation basics and congruent") {
    auto const places = factor_prime(testing::quartic(), 5);
    auto const& p2 = places[1];
    REQUIRE(p2.ramification_index() == 2);
    auto const k = testing::quartic();
    CHECK_FALSE(valuation(k->zero(), p2).has_value());
    CHECK(valuation(k->from_rational(5), p2) == 2);
    CHECK(valuation(k->from_rational(Rational(3, 125)), p2) == -6);
    CHECK(congruent(k->alpha(), k->alpha(), p2, 50));
    CHECK(congruent(k->zero(), k->from_rational(5), p2, 2));
    CHECK_FALSE(congruent(k->zero(), k->from_rational(5), p2, 3));
    CHECK(capped_valuation(k->from_rational(625), p2, 3) == 3);
}

TEST_CASE("valuations agree with the CAS spot-check table") {
    std::ifstream in(fixture("valuation_spotchecks.json"));
    auto const doc = nlohmann::json::parse(in);
    std::map<std::string, FieldPtr> fields{{"quartic", testing::quartic()}, {"octic", testing::octic()}};
    for (auto const& table : doc.at("tables")) {
        auto const k = fields.at(table.at("field").get<std::string>());
        std::int64_t const p = table.at("p").get<std::int64_t>();
        std::vector<FieldElement> elements;
        for (auto const& coords : table.at("elements")) {
            std::vector<Rational> c;
            for (auto const& s : coords) c.push_back(parse_rational(s.get<std::string>()));
            elements.push_back(k->element(std::move(c)));
        }
        auto const ours = factor_prime(k, p);
        REQUIRE(ours.size() == table.at("places").size());
        std::vector<bool> used(ours.size());
        for (auto const& theirs : table.at("places")) {
            bool matched = false;
            for (std::size_t i = 0; i < ours.size() && !matched; ++i) {
                if (used[i] || ours[i].ramification_index() != theirs.at("e").get<int>() ||
                    ours[i].residue_degree() != theirs.at("f").get<int>())
                    continue;
                bool all = true;
                for (std::size_t j = 0; j < elements.size() && all; ++j) {
                    auto const& want = theirs.at("valuations")[j];
                    auto const got = valuation(elements[j], ours[i]);
                    all = want.is_null() ? !got.has_value() : (got && *got == want.get<std::int64_t>());
                }
                if (all) used[i] = matched = true;
            }
            INFO("field " << table.at("field") << ", CAS place e=" << theirs.at("e") << " f=" << theirs.at("f"));
            CHECK(matched);
        }
    }
}

TEST_CASE("valuation properties on random elements") {
    std::mt19937_64 rng(20240501);
    for (auto const& k : {testing::quartic(), testing::octic()}) {
        for (auto const& pl : factor_prime(k, 5)) {
            for (int i = 0; i < 200; ++i) {
                auto const x = testing::random_element(k, 5, rng);
                auto const y = testing::random_element(k, 5, rng);
                if (x.is_zero() || y.is_zero()) continue;
                auto const vx = *valuation(x, pl);
                auto const vy = *valuation(y, pl);
                CHECK(valuation(x * y, pl) == vx + vy);
                auto const s = valuation(x + y, pl);
                if (s) {
                    CHECK(*s >= std::min(vx, vy));
                    if (vx != vy) CHECK(*s == std::min(vx, vy));
                }
                Rational const r(rng() % 1000 + 1, rng() % 1000 + 1);
                CHECK(valuation(k->from_rational(r), pl) == pl.ramification_index() * vp(r, 5));
            }
        }
    }
}
