#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mfcong/bounds.hpp"
#include "mfcong/qseries.hpp"

namespace mfcong {

enum class VerdictKind {
    certified_full,
    certified_partial,
    refuted_at_prime,
    refuted_at_index,  // some a_n differs (n composite, or a raw full-expansion check)
    refuted_by_weight_congruence,
    refuted_by_character_order,
    inconclusive,
};

std::string to_string(VerdictKind kind);
VerdictKind verdict_kind_from_string(std::string const& name);
bool is_refutation(VerdictKind kind);

struct Verdict {
    VerdictKind kind = VerdictKind::inconclusive;
    std::int64_t exponent = 0;  // certified exponent; for refutations the exponent that was tested
    std::int64_t witness = 0;   // failing prime or index
    std::int64_t achieved = 0;  // min(v_P(a_w(f1) - a_w(f2)), exponent) at the witness
    std::string reason;
    friend bool operator==(Verdict const&, Verdict const&) = default;
};

/* Stronger verdict first: Full beats Partial (by exponent), which beats Inconclusive. */
bool stronger(Verdict const& a, Verdict const& b);

enum class IndexChoice { automatic, gamma0, gamma1 };

struct Problem {
    QExpansion f1;
    QExpansion f2;
    std::int64_t p = 0;
    std::size_t place_index = 0;
    std::int64_t m = 1;
    bool forms_on_gamma0_p = true;
    bool abs_irreducible = false;
    std::optional<std::int64_t> galois_closure_degree;  // overrides the field file
    std::optional<std::int64_t> r_override;              // used only when r cannot be certified
    IndexChoice index = IndexChoice::automatic;
    int spot_checks = 25;
    std::uint64_t spot_check_seed = 0x5eed;
};

struct PrimeResult {
    std::int64_t ell = 0;
    std::int64_t achieved = 0;  // min(v_P(difference), tested exponent)
    bool congruent = false;
    friend bool operator==(PrimeResult const&, PrimeResult const&) = default;
};

struct InputRecord {
    std::string label;
    std::string path;
    std::string digest;
    std::int64_t level = 0;
    std::int64_t weight = 0;
    std::int64_t precision = 0;
    std::string character;
    friend bool operator==(InputRecord const&, InputRecord const&) = default;
};

struct CongruenceCertificate {
    std::string tool_version;
    std::string timestamp;
    std::string procedure;
    InputRecord f1;
    InputRecord f2;
    std::string field_name;
    std::vector<std::string> field_polynomial;
    std::string field_digest;

    std::int64_t p = 0;
    std::int64_t place_index = 0;
    std::int64_t e = 0;
    std::int64_t f = 0;
    std::vector<std::string> place_generator;
    std::vector<std::string> place_tau;
    std::int64_t m = 0;

    bounds::LevelData level;
    std::int64_t bound_weight = 0;
    std::string sturm_bound;  // exact rational k mu' / 12
    std::int64_t bound_floor = 0;

    std::optional<std::int64_t> r;
    std::string r_provenance;
    std::optional<std::int64_t> s;
    std::optional<std::int64_t> weight_modulus;
    std::optional<std::int64_t> t;
    std::optional<std::int64_t> delta;
    std::optional<std::int64_t> d;

    bool forms_on_gamma0_p = false;
    bool abs_irreducible = false;
    std::vector<std::string> notes;

    std::vector<PrimeResult> primes;
    std::vector<PrimeResult> spot_checks;
    std::int64_t coefficient_comparisons = 0;
    std::optional<Verdict> alternative;  // the weaker route when two procedures ran
    Verdict verdict;

    friend bool operator==(CongruenceCertificate const&, CongruenceCertificate const&) = default;
};

/* Both forms over one field (a form over Q is embedded into the other's field). */
void unify_fields(QExpansion& f1, QExpansion& f2);

/* ord_{P^a}(f1 - f2) > k mu / 12 on the common level of f1, f2. */
Verdict check_equal_weight(QExpansion const& f1, QExpansion const& f2, PrimePlace const& place, std::int64_t a,
                           IndexChoice index = IndexChoice::automatic);
/* Strip both forms to level N' and compare every index coprime to Np up to the bound. */
Verdict check_outside_np(QExpansion const& f1, QExpansion const& f2, PrimePlace const& place, std::int64_t p,
                         std::int64_t a, IndexChoice index = IndexChoice::automatic);

/* Full pipeline: equal weights go straight to check_outside_np, otherwise the
 * weight-congruence theorem (and the character route when it can do better). */
CongruenceCertificate decide(Problem const& problem);
CongruenceCertificate decide_theorem1(Problem const& problem);
CongruenceCertificate decide_theorem2(Problem const& problem);
CongruenceCertificate verify_by_twist(Problem const& problem);

}  // namespace mfcong
