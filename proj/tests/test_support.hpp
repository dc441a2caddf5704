#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "mfcong/formats.hpp"
#include "mfcong/numberfield.hpp"

namespace mfcong::testing {

inline std::filesystem::path fixture(std::string const& name) { return std::filesystem::path(MFCONG_FIXTURES) / name; }

inline FieldPtr quartic() {
    static FieldPtr const k = formats::load_field(fixture("field_quartic.json"));
    return k;
}

inline FieldPtr octic() {
    static FieldPtr const k = formats::load_field(fixture("field_octic.json"));
    return k;
}

/* Random element with small integral coordinates, scaled by p^j for a
 * random j in [0, 2] so that positive valuations actually occur. */
inline FieldElement random_element(FieldPtr const& k, std::int64_t p, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coord(-40, 40);
    std::uniform_int_distribution<int> scale(0, 2);
    std::vector<Rational> c(static_cast<std::size_t>(k->degree()));
    for (auto& x : c) x = coord(rng);
    Rational factor = 1;
    for (int j = scale(rng); j > 0; --j) factor *= p;
    return k->element(std::move(c)) * factor;
}

}  // namespace mfcong::testing
