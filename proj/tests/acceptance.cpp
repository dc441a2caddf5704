// Acceptance run: one PASS/FAIL line per criterion, with wall time.
// Exit status 0 iff every criterion passes, except criteria listed as
// unattainable, which must fail with the recorded outcome.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "mfcong/bounds.hpp"
#include "mfcong/engine.hpp"
#include "mfcong/errors.hpp"
#include "mfcong/formats.hpp"
#include "mfcong/runner.hpp"
#include "test_support.hpp"

using namespace mfcong;
using mfcong::testing::fixture;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    std::function<Outcome()> run;
    // Non-empty: the criterion cannot pass on the data as given; this is the outcome it must report.
    std::string unattainable;
};

std::string join(std::vector<std::string> const& parts, std::string const& sep = ", ") {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

std::string e_pattern(std::vector<PrimePlace> const& places) {
    std::vector<int> es;
    for (auto const& pl : places) es.push_back(pl.ramification_index());
    std::sort(es.rbegin(), es.rend());
    std::vector<std::string> s;
    for (int e : es) s.push_back(std::to_string(e));
    return "(" + join(s, ",") + ")";
}

int sum_ef(std::vector<PrimePlace> const& places) {
    int s = 0;
    for (auto const& pl : places) s += pl.ramification_index() * pl.residue_degree();
    return s;
}

std::string verdict_text(Verdict const& v) {
    std::string s = to_string(v.kind);
    if (v.kind == VerdictKind::certified_full || v.kind == VerdictKind::certified_partial)
        s += "(" + std::to_string(v.exponent) + ")";
    if (v.kind == VerdictKind::refuted_at_prime) s += "(" + std::to_string(v.witness) + ")";
    return s;
}

fs::path output_dir() {
    static fs::path const d = [] {
        auto p = fs::temp_directory_path() / "mfcong_acceptance";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return d;
}

formats::FormFile const& form(std::string const& name) {
    static std::map<std::string, formats::FormFile> cache;
    auto it = cache.find(name);
    if (it == cache.end()) it = cache.emplace(name, formats::load_form(fixture(name))).first;
    return it->second;
}

formats::FormFile truncated(formats::FormFile f, std::int64_t b) {
    f.form = f.form.truncate(b);
    return f;
}

runner::CheckOptions example1_options() {
    runner::CheckOptions o;
    o.p = 5;
    o.place_index = 1;
    o.m = 3;
    return o;
}

runner::CheckOptions example2_options() {
    runner::CheckOptions o;
    o.p = 5;
    o.place_index = 2;
    o.m = 5;
    o.galois_closure_degree = 384;
    return o;
}

// Every CertifiedFull certificate produced during the run, for the soundness sampling criterion.
std::vector<CongruenceCertificate>& certified() {
    static std::vector<CongruenceCertificate> v;
    return v;
}

void remember(CongruenceCertificate const& c) {
    if (c.verdict.kind == VerdictKind::certified_full) certified().push_back(c);
}

Outcome levels() {
    using namespace bounds;
    auto const np = n_prime(9, 5);
    auto const mu = index_gamma0(675);
    auto const b1 = sturm_prime_bound(24, 1080);
    auto const b2 = sturm_prime_bound(44, 1080);
    bool const ok = np == 675 && mu == 1080 && b1 == 2160 && b2 == 3960;
    return {ok, "N'=" + std::to_string(np) + ", mu'=" + std::to_string(mu) + ", bounds " + to_string(b1) + ", " +
                    to_string(b2)};
}

Outcome factorization() {
    auto const q = factor_prime(testing::quartic(), 5);
    bool const quartic_ok =
        sum_ef(q) == 4 && std::any_of(q.begin(), q.end(), [](auto const& pl) { return pl.ramification_index() == 2; });
    auto const printed = formats::load_field(fixture("field_printed_octic.json"));
    auto const o = factor_prime(printed, 5);
    bool const octic_ok = e_pattern(o) == "(4,2,2)" && sum_ef(o) == 8;
    auto const actual = factor_prime(testing::octic(), 5);
    return {quartic_ok && octic_ok, "quartic e-pattern " + e_pattern(q) + " sum ef=" + std::to_string(sum_ef(q)) +
                                        "; printed octic e-pattern " + e_pattern(o) + " (want (4,2,2)); coefficient "
                                        "field of f3 e-pattern " + e_pattern(actual)};
}

Outcome exponents() {
    using namespace bounds;
    auto const s1 = s_value(3, 2, 0, 5);
    auto const s2 = s_value(5, 4, 0, 5);
    auto const r1 = r_value(4, 5, std::nullopt).r;
    auto const r2 = r_value(8, 5, 384).r;
    bool const ok = s1 == 1 && s2 == 1 && r1 == 0 && r2 == 0;
    auto show = [](std::optional<std::int64_t> r) { return r ? std::to_string(*r) : std::string("unresolved"); };
    return {ok, "s=" + std::to_string(s1) + ", " + std::to_string(s2) + "; r=" + show(r1) + ", " + show(r2)};
}

Outcome end_to_end(std::string const& f2_name, runner::CheckOptions const& opt, std::int64_t bound) {
    auto const full = runner::run_check(form("f1_9_4.json"), form(f2_name), opt, output_dir());
    remember(full.certificate);
    auto const t1 = truncated(form("f1_9_4.json"), bound + 1);
    auto const t2 = truncated(form(f2_name), bound + 1);
    auto const tight = runner::run_check(t1, t2, opt, output_dir() / "tight");
    bool const ok = runner::exit_code(full.certificate.verdict) == runner::exit_full &&
                    full.certificate.verdict.exponent == opt.m &&
                    tight.certificate.verdict == full.certificate.verdict;
    return {ok, verdict_text(full.certificate.verdict) + " on committed fixtures, " +
                    verdict_text(tight.certificate.verdict) + " at precision " + std::to_string(bound + 1)};
}

Outcome twists() {
    std::vector<std::string> parts;
    bool ok = true;
    for (auto const& [name, opt] : {std::pair{std::string("f2_9_24.json"), example1_options()},
                                    std::pair{std::string("f3_9_44.json"), example2_options()}}) {
        auto const c = runner::run_check(form("f1_9_4.json"), form(name), opt, output_dir()).certificate;
        auto const t = runner::run_twist(form("f1_9_4.json"), form(name), opt, output_dir()).certificate;
        remember(t);
        ok = ok && runner::exit_code(c.verdict) == runner::exit_code(t.verdict) && t.verdict.kind == c.verdict.kind;
        parts.push_back(name.substr(0, 2) + ": check " + verdict_text(c.verdict) + ", twist t=" +
                        (t.t ? std::to_string(*t.t) : "?") + " " + verdict_text(t.verdict));
    }
    return {ok, join(parts, "; ")};
}

bool integral_multiple(Rational const& x, std::int64_t p, Integer const& m) {
    return x.get_den() % static_cast<long>(p) != 0 && mpz_divisible_p(x.get_num_mpz_t(), m.get_mpz_t());
}

Outcome units() {
    std::int64_t violations = 0, checked = 0;
    for (std::int64_t p : {2, 3, 5, 7, 11, 13}) {
        auto const e = eisenstein_unit(p, 500);
        violations += e[0][0] != 1;
        for (std::int64_t n = 1; n <= 500; ++n, ++checked)
            violations += !integral_multiple(e[n][0], p, Integer(static_cast<long>(p)));
    }
    for (std::int64_t p : {2, 3, 5}) {
        for (int j = 0; j <= 3; ++j) {
            auto const u = static_cast<std::uint64_t>(ipow(p, j));
            auto const e = unit_power(p, u, 200);
            Integer const mod(static_cast<long>(ipow(p, j + 1)));
            violations += e[0][0] != 1;
            for (std::int64_t n = 1; n <= 200; ++n, ++checked) violations += !integral_multiple(e[n][0], p, mod);
        }
    }
    return {violations == 0, std::to_string(checked) + " coefficients checked, " + std::to_string(violations) +
                                 " violations"};
}

Outcome valuations() {
    std::mt19937_64 rng(0xacce97);
    std::int64_t const per_place = 1000;
    std::int64_t violations = 0, samples = 0, places = 0;
    std::map<std::string, FieldPtr> fields{{"quartic", testing::quartic()},
                                           {"octic", testing::octic()},
                                           {"printed_octic", formats::load_field(fixture("field_printed_octic.json"))}};
    for (auto const& [name, k] : fields) {
        for (auto const& pl : factor_prime(k, 5)) {
            ++places;
            violations += valuation(k->from_rational(5), pl) != pl.ramification_index();
            violations += valuation(k->from_rational(Rational(125, 7)), pl) != 3 * pl.ramification_index();
            for (std::int64_t i = 0; i < per_place; ++i, ++samples) {
                auto const x = testing::random_element(k, 5, rng);
                auto const y = testing::random_element(k, 5, rng);
                if (x.is_zero() || y.is_zero()) continue;
                auto const vx = *valuation(x, pl);
                auto const vy = *valuation(y, pl);
                violations += valuation(x * y, pl) != vx + vy;
                auto const vs = valuation(x + y, pl);
                if (vs) {
                    violations += *vs < std::min(vx, vy);
                    violations += vx != vy && *vs != std::min(vx, vy);
                }
                violations += valuation(x.inverse(), pl) != -vx;
            }
        }
    }

    std::ifstream in(fixture("valuation_spotchecks.json"));
    auto const doc = nlohmann::json::parse(in);
    std::int64_t table_checks = 0, table_misses = 0;
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
            table_checks += static_cast<std::int64_t>(elements.size());
            table_misses += !matched;
        }
    }
    return {violations == 0 && table_misses == 0,
            std::to_string(samples) + " random pairs over " + std::to_string(places) + " places, " +
                std::to_string(violations) + " violations; " + std::to_string(table_checks) +
                " table valuations, " + std::to_string(table_misses) + " unmatched places"};
}

Outcome soundness() {
    if (certified().empty()) return {false, "no CertifiedFull verdicts were produced"};
    std::int64_t primes = 0, bad = 0;
    bool enough = true;
    for (auto const& c : certified()) {
        enough = enough && c.spot_checks.size() == 25;
        for (auto const& s : c.spot_checks) {
            ++primes;
            bad += !s.congruent || s.ell <= c.bound_floor || s.achieved < c.verdict.exponent;
        }
    }
    return {enough && bad == 0, std::to_string(certified().size()) + " certificates, " + std::to_string(primes) +
                                    " primes beyond the bound, " + std::to_string(bad) + " counterexamples"};
}

Outcome negative_paths() {
    auto const& f1 = form("f1_9_4.json");
    auto const& f2 = form("f2_9_24.json");
    auto const k = f2.form.field();
    auto const place = factor_prime(k, 5).at(1);
    // The place generator is a uniformizer; p^(m-1) itself has valuation e(m-1) >= m here.
    auto const pi = place.generator();
    std::int64_t const ell = 7, m = 3;
    auto bumped = f2;
    auto c = f2.form.coefficients();
    c[ell] += pi.pow(m - 1) * Rational(2);
    bumped.form = QExpansion(k, f2.form.weight(), f2.form.level(), std::move(c), f2.form.character());
    auto const r = runner::run_check(f1, bumped, example1_options(), output_dir() / "perturbed").certificate;
    bool const perturbed_ok = valuation(pi, place) == 1 && r.verdict.kind == VerdictKind::refuted_at_prime &&
                              r.verdict.witness == ell && r.verdict.achieved == m - 1;

    auto heavy = f2;
    heavy.label = "weight10";
    heavy.form = QExpansion(k, 10, f2.form.level(), f2.form.coefficients(), f2.form.character());
    auto const w = runner::run_check(f1, heavy, example1_options(), output_dir() / "weights").certificate;
    bool const weight_ok = w.verdict.kind == VerdictKind::refuted_by_weight_congruence &&
                           w.coefficient_comparisons == 0 && w.primes.empty();
    return {perturbed_ok && weight_ok,
            "bump at l=7: " + verdict_text(r.verdict) + " achieved " + std::to_string(r.verdict.achieved) +
                "; weights 4 vs 10: " + verdict_text(w.verdict) + " with " +
                std::to_string(w.coefficient_comparisons) + " coefficient comparisons"};
}

}  // namespace

int main() {
    std::vector<Criterion> const criteria{
        {1, "Level/bound reproduction", levels, ""},
        {2, "Factorization reproduction", factorization, "printed octic e-pattern (2,2)"},
        {3, "Exponent reproduction", exponents, ""},
        {4, "End-to-end example 1", [] { return end_to_end("f2_9_24.json", example1_options(), 2160); }, ""},
        {5, "End-to-end example 2", [] { return end_to_end("f3_9_44.json", example2_options(), 3960); }, ""},
        {6, "Twist cross-validation", twists, ""},
        {7, "Eisenstein-unit property suite", units, ""},
        {8, "Valuation property suite", valuations, ""},
        {9, "Sturm soundness sampling", soundness, ""},
        {10, "Negative-path checks", negative_paths, ""},
    };

    int passed = 0, as_recorded = 0, surprises = 0;
    for (auto const& c : criteria) {
        auto const start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (std::exception const& ex) {
            o = {false, std::string("exception: ") + ex.what()};
        }
        double const secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        char timing[32];
        std::snprintf(timing, sizeof timing, "%.3fs", secs);
        std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.name << "  (" << timing << ")  "
                  << o.detail << "\n";
        if (o.pass) {
            ++passed;
            if (!c.unattainable.empty()) ++surprises;
        } else if (!c.unattainable.empty() && o.detail.find(c.unattainable) != std::string::npos) {
            ++as_recorded;
            std::cout << "      unattainable on the data as given: " << c.unattainable << "\n";
        } else {
            ++surprises;
        }
    }
    std::cout << passed << "/" << criteria.size() << " criteria pass";
    if (as_recorded) std::cout << ", " << as_recorded << " fail as recorded";
    if (surprises) std::cout << ", " << surprises << " unexpected";
    std::cout << "\n";
    return surprises == 0 ? 0 : 1;
}
