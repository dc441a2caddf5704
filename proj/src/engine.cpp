#include "mfcong/engine.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "mfcong/errors.hpp"

namespace mfcong {

namespace {

struct KindName {
    VerdictKind kind;
    char const* name;
};

constexpr KindName kind_names[] = {
    {VerdictKind::certified_full, "CertifiedFull"},
    {VerdictKind::certified_partial, "CertifiedPartial"},
    {VerdictKind::refuted_at_prime, "RefutedAtPrime"},
    {VerdictKind::refuted_at_index, "RefutedAtIndex"},
    {VerdictKind::refuted_by_weight_congruence, "RefutedByWeightCongruence"},
    {VerdictKind::refuted_by_character_order, "RefutedByCharacterOrder"},
    {VerdictKind::inconclusive, "Inconclusive"},
};

}  // namespace

std::string to_string(VerdictKind kind) {
    for (auto const& kn : kind_names)
        if (kn.kind == kind) return kn.name;
    return "Inconclusive";
}

VerdictKind verdict_kind_from_string(std::string const& name) {
    for (auto const& kn : kind_names)
        if (name == kn.name) return kn.kind;
    throw InputError("unknown verdict '" + name + "'");
}

bool is_refutation(VerdictKind kind) {
    return kind == VerdictKind::refuted_at_prime || kind == VerdictKind::refuted_at_index ||
           kind == VerdictKind::refuted_by_weight_congruence || kind == VerdictKind::refuted_by_character_order;
}

namespace {

int rank(Verdict const& v) {
    if (v.kind == VerdictKind::certified_full) return 4;
    if (is_refutation(v.kind)) return 3;
    if (v.kind == VerdictKind::certified_partial) return 2;
    return 1;
}

Verdict make_verdict(VerdictKind kind, std::int64_t exponent, std::string reason = {}) {
    Verdict v;
    v.kind = kind;
    v.exponent = exponent;
    v.reason = std::move(reason);
    return v;
}

Verdict inconclusive(std::string reason) { return make_verdict(VerdictKind::inconclusive, 0, std::move(reason)); }

Verdict certified(std::int64_t exponent, std::int64_t m) {
    return make_verdict(exponent >= m ? VerdictKind::certified_full : VerdictKind::certified_partial, std::min(exponent, m));
}

std::int64_t common_level(QExpansion const& f1, QExpansion const& f2) { return std::lcm(f1.level(), f2.level()); }

bounds::IndexKind index_kind(IndexChoice choice, QExpansion const& f1, QExpansion const& f2) {
    if (choice == IndexChoice::gamma0) return bounds::IndexKind::gamma0;
    if (choice == IndexChoice::gamma1) return bounds::IndexKind::gamma1;
    return f1.has_trivial_character() && f2.has_trivial_character() ? bounds::IndexKind::gamma0
                                                                     : bounds::IndexKind::gamma1;
}

void require_precision(QExpansion const& f, std::int64_t needed) {
    if (f.precision() < needed) throw InsufficientPrecision(needed, f.precision());
}

std::vector<std::string> strings(std::span<Rational const> coords) {
    std::vector<std::string> out;
    for (auto const& c : coords) out.push_back(to_string(c));
    return out;
}

std::string describe_character(QExpansion const& f) {
    if (f.has_trivial_character()) return "trivial";
    auto const& chi = *f.character();
    return "modulus " + std::to_string(chi.modulus()) + ", order " + std::to_string(chi.order());
}

/* Everything the procedures share: the unified forms, the place and the level data. */
struct Setup {
    QExpansion f1;
    QExpansion f2;
    PrimePlace place;
    std::int64_t p;
    std::int64_t m;
    std::int64_t e;
    std::int64_t n;
    std::int64_t np;
    bounds::LevelData level;
    std::int64_t bound_floor;
};

Setup prepare(Problem const& problem, CongruenceCertificate& cert, std::string procedure) {
    if (problem.m < 1) throw InputError("m must be >= 1");
    QExpansion f1 = problem.f1;
    QExpansion f2 = problem.f2;
    unify_fields(f1, f2);
    auto places = factor_prime(f1.field(), problem.p);
    if (problem.place_index >= places.size())
        throw InputError("place index " + std::to_string(problem.place_index) + " out of range: p has " +
                         std::to_string(places.size()) + " places");
    PrimePlace place = places[problem.place_index];
    std::int64_t const n = common_level(f1, f2);
    auto const kind = index_kind(problem.index, f1, f2);
    auto const level = bounds::level_data(n, problem.p, kind);
    std::int64_t const k = std::max(f1.weight(), f2.weight());
    Rational const bound = bounds::sturm_prime_bound(k, level.mu());

    cert.procedure = std::move(procedure);
    cert.p = problem.p;
    cert.place_index = static_cast<std::int64_t>(problem.place_index);
    cert.e = place.ramification_index();
    cert.f = place.residue_degree();
    cert.place_generator = strings(place.generator().coordinates());
    cert.place_tau = strings(place.tau().coordinates());
    cert.m = problem.m;
    cert.level = level;
    cert.bound_weight = k;
    cert.sturm_bound = to_string(bound);
    cert.bound_floor = bounds::floor_bound(bound);
    cert.forms_on_gamma0_p = problem.forms_on_gamma0_p;
    cert.abs_irreducible = problem.abs_irreducible;
    if (cert.f1.level == 0) {
        cert.f1 = {"", "", "", f1.level(), f1.weight(), f1.precision(), describe_character(f1)};
        cert.f2 = {"", "", "", f2.level(), f2.weight(), f2.precision(), describe_character(f2)};
    }
    if (cert.field_polynomial.empty()) {
        cert.field_name = f1.field()->name();
        for (auto const& c : f1.field()->minimal_polynomial()) cert.field_polynomial.push_back(to_string(c));
    }
    return Setup{std::move(f1), std::move(f2), std::move(place), problem.p, problem.m, cert.e, n, n * problem.p,
                 level, cert.bound_floor};
}

/* Compare a_l for primes l <= bound, l not dividing Np, stopping at the first failure. */
std::optional<PrimeResult> prime_checks(Setup const& s, std::int64_t exponent, CongruenceCertificate& cert) {
    require_precision(s.f1, s.bound_floor);
    require_precision(s.f2, s.bound_floor);
    for (auto ell : primes_up_to(s.bound_floor)) {
        if (s.np % ell == 0) continue;
        PrimeResult r;
        r.ell = ell;
        r.achieved = capped_valuation(s.f1[ell] - s.f2[ell], s.place, exponent);
        r.congruent = r.achieved >= exponent;
        ++cert.coefficient_comparisons;
        cert.primes.push_back(r);
        if (!r.congruent) return r;
    }
    return std::nullopt;
}

Verdict refuted_at(PrimeResult const& r, std::int64_t exponent) {
    Verdict v = make_verdict(VerdictKind::refuted_at_prime, exponent);
    v.witness = r.ell;
    v.achieved = r.achieved;
    return v;
}

/* Direct comparisons at up to `count` random primes beyond the bound; a
 * failure withdraws the certification. */
void spot_check(Setup const& s, Problem const& problem, CongruenceCertificate& cert) {
    if (cert.verdict.kind != VerdictKind::certified_full && cert.verdict.kind != VerdictKind::certified_partial) return;
    std::int64_t const top = std::min(s.f1.precision(), s.f2.precision());
    std::vector<std::int64_t> candidates;
    for (auto ell : primes_up_to(top))
        if (ell > s.bound_floor && s.np % ell != 0) candidates.push_back(ell);
    std::mt19937_64 rng(problem.spot_check_seed);
    std::shuffle(candidates.begin(), candidates.end(), rng);
    candidates.resize(std::min<std::size_t>(candidates.size(), static_cast<std::size_t>(problem.spot_checks)));
    std::sort(candidates.begin(), candidates.end());
    std::int64_t const exponent = cert.verdict.exponent;
    for (auto ell : candidates) {
        PrimeResult r;
        r.ell = ell;
        r.achieved = capped_valuation(s.f1[ell] - s.f2[ell], s.place, exponent);
        r.congruent = r.achieved >= exponent;
        cert.spot_checks.push_back(r);
    }
    if (static_cast<int>(candidates.size()) < problem.spot_checks)
        cert.notes.push_back("only " + std::to_string(candidates.size()) +
                             " primes beyond the bound lie within precision for spot checks");
    for (auto const& r : cert.spot_checks) {
        if (!r.congruent) {
            cert.alternative = cert.verdict;
            cert.verdict = inconclusive("spot check beyond the bound fails at l = " + std::to_string(r.ell) +
                                        "; the input data contradicts the certification");
            return;
        }
    }
}

bool refutation_hypotheses(Setup const& s, Problem const& problem, std::string& why) {
    if (s.n < 3) why = "N < 3";
    else if (s.n % s.p == 0) why = "p divides N";
    else if (!problem.forms_on_gamma0_p) why = "forms are not asserted to lie on Gamma_1(N) cap Gamma_0(p)";
    else return true;
    return false;
}

bool side_conditions(Setup const& s, std::string& why) {
    if (s.p == 2 && s.n % 3 != 0) why = "p = 2 needs 3 | N";
    else if (s.p == 3 && s.n % 2 != 0) why = "p = 3 needs 2 | N";
    else return true;
    return false;
}

/* r from the supplied Galois closure degree or n!, else the user's value. */
std::optional<std::int64_t> resolve_r(Setup const& s, Problem const& problem, CongruenceCertificate& cert) {
    auto gal = problem.galois_closure_degree;
    if (!gal) gal = s.f1.field()->galois_closure_degree();
    auto const rv = bounds::r_value(s.f1.field()->degree(), s.p, gal);
    cert.r = rv.r;
    cert.r_provenance = rv.provenance;
    if (!rv.r && problem.r_override) {
        cert.r = problem.r_override;
        cert.r_provenance = rv.provenance + "; user-supplied r = " + std::to_string(*problem.r_override);
    }
    return cert.r;
}

}  // namespace

bool stronger(Verdict const& a, Verdict const& b) {
    if (rank(a) != rank(b)) return rank(a) > rank(b);
    return a.exponent > b.exponent;
}

void unify_fields(QExpansion& f1, QExpansion& f2) {
    if (same_field(f1.field(), f2.field())) return;
    if (f1.field()->degree() == 1) f1 = f1.embed(f2.field());
    else if (f2.field()->degree() == 1) f2 = f2.embed(f1.field());
    else throw InputError("the two forms have coefficients in different number fields");
}

Verdict check_equal_weight(QExpansion const& f1_in, QExpansion const& f2_in, PrimePlace const& place, std::int64_t a,
                           IndexChoice index) {
    QExpansion f1 = f1_in, f2 = f2_in;
    unify_fields(f1, f2);
    if (f1.weight() != f2.weight()) throw InputError("check_equal_weight needs equal weights");
    std::int64_t const n = common_level(f1, f2);
    std::int64_t const mu = index_kind(index, f1, f2) == bounds::IndexKind::gamma0 ? bounds::index_gamma0(n)
                                                                                  : bounds::index_gamma1(n);
    std::int64_t const b = bounds::floor_bound(bounds::sturm_prime_bound(f1.weight(), mu));
    require_precision(f1, b);
    require_precision(f2, b);
    auto const ord = ord_mod(series_sub(f1.truncate(b), f2.truncate(b)), place, a);
    if (ord.exhausted) return make_verdict(VerdictKind::certified_full, a);
    Verdict v = make_verdict(VerdictKind::refuted_at_index, a);
    v.witness = ord.index;
    v.achieved = capped_valuation(f1[ord.index] - f2[ord.index], place, a);
    return v;
}

Verdict check_outside_np(QExpansion const& f1_in, QExpansion const& f2_in, PrimePlace const& place, std::int64_t p,
                         std::int64_t a, IndexChoice index) {
    QExpansion f1 = f1_in, f2 = f2_in;
    unify_fields(f1, f2);
    if (f1.weight() != f2.weight()) throw InputError("check_outside_np needs equal weights");
    std::int64_t const n = common_level(f1, f2);
    std::int64_t const np = n * p;
    auto const level = bounds::level_data(n, p, index_kind(index, f1, f2));
    std::int64_t const b = bounds::floor_bound(bounds::sturm_prime_bound(f1.weight(), level.mu()));
    require_precision(f1, b);
    require_precision(f2, b);
    QExpansion const s1 = strip(f1.truncate(b), np, level.n_prime);
    QExpansion const s2 = strip(f2.truncate(b), np, level.n_prime);
    auto const ord = ord_mod(series_sub(s1, s2), place, a);
    if (ord.exhausted) return make_verdict(VerdictKind::certified_full, a);
    auto achieved_at = [&](std::int64_t i) { return capped_valuation(f1[i] - f2[i], place, a); };
    if (is_prime(ord.index)) {
        Verdict v = make_verdict(VerdictKind::refuted_at_prime, a);
        v.witness = ord.index;
        v.achieved = achieved_at(ord.index);
        return v;
    }
    for (auto ell : primes_up_to(b)) {
        if (np % ell == 0 || ell < ord.index) continue;
        if (auto const v_ell = achieved_at(ell); v_ell < a) {
            Verdict v = make_verdict(VerdictKind::refuted_at_prime, a);
            v.witness = ell;
            v.achieved = v_ell;
            return v;
        }
    }
    Verdict v = inconclusive("stripped expansions differ at the composite index " + std::to_string(ord.index) +
                             " while every prime up to the bound agrees");
    v.witness = ord.index;
    v.achieved = achieved_at(ord.index);
    return v;
}

namespace {

CongruenceCertificate equal_weight_route(Problem const& problem) {
    CongruenceCertificate cert;
    Setup const s = prepare(problem, cert, "equal-weight");
    auto const failure = prime_checks(s, s.m, cert);
    cert.verdict = check_outside_np(s.f1, s.f2, s.place, s.p, s.m, problem.index);
    cert.coefficient_comparisons += s.bound_floor;
    if (failure && cert.verdict.kind != VerdictKind::refuted_at_prime)
        throw InternalError("prime table and stripped comparison disagree");
    spot_check(s, problem, cert);
    return cert;
}

}  // namespace

CongruenceCertificate decide_theorem1(Problem const& problem) {
    CongruenceCertificate cert;
    Setup const s = prepare(problem, cert, "theorem1");
    auto const r = resolve_r(s, problem, cert);
    if (!r) {
        cert.verdict = inconclusive("r cannot be certified: " + cert.r_provenance);
        return cert;
    }
    std::int64_t const sv = bounds::s_value(s.m, s.e, *r, s.p);
    std::int64_t const modulus = bounds::weight_modulus_thm1(sv, s.p);
    cert.s = sv;
    cert.weight_modulus = modulus;
    std::int64_t const gap = s.f2.weight() - s.f1.weight();
    if (gap % modulus != 0) {
        std::string why;
        if (refutation_hypotheses(s, problem, why)) {
            cert.verdict = make_verdict(VerdictKind::refuted_by_weight_congruence, s.m,
                                        "k2 - k1 = " + std::to_string(gap) + " is not divisible by p^s(p-1) = " +
                                            std::to_string(modulus));
        } else {
            cert.verdict = inconclusive("weights are not congruent mod " + std::to_string(modulus) +
                                        ", but the necessity hypotheses fail: " + why);
        }
        return cert;
    }
    cert.t = std::abs(gap) / modulus;
    std::string why;
    if (!side_conditions(s, why)) {
        cert.verdict = inconclusive(why);
        return cert;
    }
    if (auto const failure = prime_checks(s, s.m, cert)) {
        cert.verdict = refuted_at(*failure, s.m);
        return cert;
    }
    cert.verdict = certified(s.e * (sv + 1), s.m);
    spot_check(s, problem, cert);
    return cert;
}

CongruenceCertificate decide_theorem2(Problem const& problem) {
    CongruenceCertificate cert;
    Setup const s = prepare(problem, cert, "theorem2");
    if (s.p == 2) {
        cert.verdict = inconclusive("the character route needs p odd");
        return cert;
    }
    if (!problem.abs_irreducible) {
        cert.verdict = inconclusive("the character route needs the mod P representation of f1 to be "
                                    "absolutely irreducible (not asserted)");
        return cert;
    }
    FieldPtr const& k = s.f1.field();
    auto const psi1 = s.f1.has_trivial_character() ? DirichletCharacter::trivial(k) : *s.f1.character();
    auto const psi2 = s.f2.has_trivial_character() ? DirichletCharacter::trivial(k) : *s.f2.character();
    auto const chi = p_part(quotient_char(psi2, psi1), s.p);
    auto const ro = reduced_order(chi, s.place, s.m);
    cert.delta = ro.delta;
    cert.d = ro.d;
    std::int64_t const top = bounds::ceil_div(s.m, s.e) - 1;
    if (ro.necessity_refuted) {
        cert.verdict = make_verdict(VerdictKind::refuted_by_character_order, s.m,
                                    "the prime-to-p order d = " + std::to_string(ro.d) + " does not divide p - 1");
        return cert;
    }
    if (ro.delta > top) {
        cert.verdict = make_verdict(VerdictKind::refuted_by_character_order, s.m,
                                    "delta = " + std::to_string(ro.delta) + " exceeds ceil(m/e) - 1 = " +
                                        std::to_string(top));
        return cert;
    }
    std::int64_t const modulus = bounds::weight_modulus_thm2(s.m, s.e, ro.delta, ro.d, s.p);
    cert.weight_modulus = modulus;
    std::int64_t const gap = s.f2.weight() - s.f1.weight();
    if (gap % modulus != 0) {
        cert.verdict = make_verdict(VerdictKind::refuted_by_weight_congruence, s.m,
                                    "k2 - k1 = " + std::to_string(gap) + " is not divisible by " +
                                        std::to_string(modulus));
        return cert;
    }
    if (ro.delta > 0) {
        cert.verdict = inconclusive("delta = " + std::to_string(ro.delta) +
                                    " > 0: the weight congruence holds but sufficiency is only known for delta = 0");
        return cert;
    }
    if (auto const failure = prime_checks(s, s.m, cert)) {
        cert.verdict = refuted_at(*failure, s.m);
        return cert;
    }
    cert.verdict = make_verdict(VerdictKind::certified_full, s.m);
    spot_check(s, problem, cert);
    return cert;
}

CongruenceCertificate decide(Problem const& problem) {
    if (problem.f1.weight() == problem.f2.weight()) return equal_weight_route(problem);
    CongruenceCertificate c1 = decide_theorem1(problem);
    bool const try_characters = problem.p != 2 && problem.abs_irreducible &&
                                (c1.verdict.kind == VerdictKind::certified_partial ||
                                 c1.verdict.kind == VerdictKind::inconclusive);
    if (!try_characters) return c1;
    CongruenceCertificate c2 = decide_theorem2(problem);
    if (stronger(c2.verdict, c1.verdict)) {
        c2.alternative = c1.verdict;
        c2.notes.push_back("theorem1 route gave " + to_string(c1.verdict.kind) + "; character route is stronger");
        return c2;
    }
    c1.alternative = c2.verdict;
    return c1;
}

CongruenceCertificate verify_by_twist(Problem const& problem_in) {
    Problem problem = problem_in;
    if (problem.f1.weight() > problem.f2.weight()) std::swap(problem.f1, problem.f2);
    CongruenceCertificate cert;
    Setup s = prepare(problem, cert, "twist");
    std::int64_t const gap = s.f2.weight() - s.f1.weight();
    std::int64_t sv = 0;
    std::int64_t modulus = s.p - 1;
    if (gap > 0) {
        auto const r = resolve_r(s, problem, cert);
        if (!r) {
            cert.verdict = inconclusive("r cannot be certified: " + cert.r_provenance);
            return cert;
        }
        sv = bounds::s_value(s.m, s.e, *r, s.p);
        modulus = bounds::weight_modulus_thm1(sv, s.p);
        cert.s = sv;
        cert.weight_modulus = modulus;
    }
    if (gap % modulus != 0) {
        cert.verdict = inconclusive("t = (k2 - k1)/(p^s(p-1)) = " + std::to_string(gap) + "/" +
                                    std::to_string(modulus) + " is not an integer; no twist exists");
        return cert;
    }
    std::int64_t const t = gap / modulus;
    cert.t = t;
    std::int64_t const a = gap == 0 ? s.m : std::min(s.e * (sv + 1), s.m);
    require_precision(s.f1, s.bound_floor);
    require_precision(s.f2, s.bound_floor);

    QExpansion twisted = s.f1;
    if (t > 0) {
        std::uint64_t const u = static_cast<std::uint64_t>(t) * static_cast<std::uint64_t>(ipow(s.p, static_cast<int>(sv)));
        QExpansion e = unit_power(s.p, u, s.bound_floor, static_cast<int>(sv));
        if (s.f1.field()->degree() == 1) {
            twisted = series_mul(e, s.f1.truncate(s.bound_floor));
        } else {
            twisted = series_mul(e.embed(s.f1.field()), s.f1.truncate(s.bound_floor));
        }
        cert.notes.push_back("twisted f1 by E^" + std::to_string(u) + " (E = 1 mod p, weight " +
                             std::to_string(e.weight() / static_cast<int>(u)) + ")");
    }
    cert.verdict = check_outside_np(twisted, s.f2.truncate(s.bound_floor), s.place, s.p, a, problem.index);
    cert.coefficient_comparisons += s.bound_floor;
    if (cert.verdict.kind == VerdictKind::certified_full) cert.verdict = certified(a, s.m);
    if (cert.verdict.kind == VerdictKind::refuted_at_prime && a < s.m) {
        // A failure mod P^a with a < m refutes mod P^m as well.
        cert.verdict.exponent = a;
    }
    spot_check(s, problem, cert);
    return cert;
}

}  // namespace mfcong
