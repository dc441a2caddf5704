#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mfcong/characters.hpp"
#include "mfcong/numberfield.hpp"

namespace mfcong {

/* Truncated q-expansion a_0 + a_1 q + ... + a_B q^B with coefficients in K,
 * tagged with weight, level and nebentypus (nullopt means trivial). */
class QExpansion {
  public:
    QExpansion(FieldPtr field, int weight, std::int64_t level, std::vector<FieldElement> coefficients,
               std::optional<DirichletCharacter> character = std::nullopt);

    FieldPtr const& field() const { return field_; }
    int weight() const { return weight_; }
    std::int64_t level() const { return level_; }
    std::optional<DirichletCharacter> const& character() const { return character_; }
    bool has_trivial_character() const { return !character_ || character_->is_trivial(); }
    std::int64_t precision() const { return static_cast<std::int64_t>(coeffs_.size()) - 1; }
    std::vector<FieldElement> const& coefficients() const { return coeffs_; }
    /* a_n; throws InsufficientPrecision beyond B. */
    FieldElement const& operator[](std::int64_t n) const;

    QExpansion truncate(std::int64_t precision) const;
    /* Series over Q mapped into K (character values too). */
    QExpansion embed(FieldPtr const& field) const;

  private:
    FieldPtr field_;
    int weight_;
    std::int64_t level_;
    std::vector<FieldElement> coeffs_;
    std::optional<DirichletCharacter> character_;
};

QExpansion series_add(QExpansion const& g, QExpansion const& h);
QExpansion series_sub(QExpansion const& g, QExpansion const& h);
/* Cauchy product to min precision; weights add, levels take the lcm. */
QExpansion series_mul(QExpansion const& g, QExpansion const& h);

/* ord_{P^a}(h): the first index n <= B with v_P(a_n) < a. exhausted = true
 * means no such index within precision (index is then B + 1). */
struct OrdResult {
    std::int64_t index;
    bool exhausted;
};
OrdResult ord_mod(QExpansion const& h, PrimePlace const& place, std::int64_t a);

Rational bernoulli(int k);
/* 1 - (2k/B_k) sum sigma_{k-1}(n) q^n, for even k >= 4. */
QExpansion eisenstein_series(int k, std::int64_t precision);
/* Weight-shifting unit E = 1 mod p: E_{p-1} for p >= 5; for p = 2 the weight 1
 * level 3 series 1 + 6 sum (sum_{d|n} psi(d)) q^n; for p = 3 the weight 2
 * level 2 series 1 + 24 sum (sum_{d|n, d odd} d) q^n. */
QExpansion eisenstein_unit(std::int64_t p, std::int64_t precision);
/* E^u. With check_modulus j (and p^j | u) asserts E^u = 1 mod p^{j+1} and
 * throws InternalError if not. */
QExpansion unit_power(std::int64_t p, std::uint64_t u, std::int64_t precision,
                      std::optional<int> check_modulus = std::nullopt);

/* Zero every a_n with gcd(n, Np) > 1 (a_0 included); the result has level new_level. */
QExpansion strip(QExpansion const& h, std::int64_t np, std::int64_t new_level);

}  // namespace mfcong
