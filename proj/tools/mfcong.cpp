// mfcong: decide and certify congruences between eigenforms modulo powers of a prime ideal.

#include <cstdlib>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "mfcong/bounds.hpp"
#include "mfcong/errors.hpp"
#include "mfcong/formats.hpp"
#include "mfcong/runner.hpp"

using namespace mfcong;

namespace {

std::filesystem::path default_output_dir() {
    if (char const* env = std::getenv("MFCONG_OUTPUT_DIR"); env && *env) return env;
    return ".";
}

IndexChoice parse_index(std::string const& s) {
    if (s == "gamma0") return IndexChoice::gamma0;
    if (s == "gamma1") return IndexChoice::gamma1;
    return IndexChoice::automatic;
}

struct CheckArgs {
    std::string form1;
    std::string form2;
    runner::CheckOptions opt;
    std::string index = "auto";
    std::string output_dir;
    std::string forms_on_gamma0_p = "true";
};

void add_check_options(CLI::App* cmd, CheckArgs& a, bool with_forms = true) {
    if (with_forms) {
        cmd->add_option("form1", a.form1, "first form file")->required()->check(CLI::ExistingFile);
        cmd->add_option("form2", a.form2, "second form file")->required()->check(CLI::ExistingFile);
    }
    cmd->add_option("--p", a.opt.p, "rational prime p")->required();
    cmd->add_option("--place", a.opt.place_index, "index of the prime P among the sorted places over p")
        ->default_val(0);
    cmd->add_option("--m", a.opt.m, "exponent m of P^m")->default_val(1)->check(CLI::PositiveNumber);
    cmd->add_option("--galois-closure-degree", a.opt.galois_closure_degree,
                    "[L:Q] for the Galois closure L of K (overrides the field file)");
    cmd->add_option("--r", a.opt.r, "r to use when it cannot be certified (recorded as an assumption)");
    cmd->add_option("--forms-on-gamma0-p", a.forms_on_gamma0_p,
                    "assert the forms lie on Gamma_1(N) cap Gamma_0(p)")
        ->check(CLI::IsMember({"true", "false"}))
        ->default_val("true");
    cmd->add_flag("--abs-irreducible", a.opt.abs_irreducible,
                  "assert the mod P representation of f1 is absolutely irreducible");
    cmd->add_option("--index", a.index, "Sturm index: auto, gamma0 or gamma1")
        ->check(CLI::IsMember({"auto", "gamma0", "gamma1"}))
        ->default_val("auto");
    cmd->add_option("--output-dir", a.output_dir, "certificate directory (default $MFCONG_OUTPUT_DIR or .)");
}

void finalize(CheckArgs& a) {
    a.opt.index = parse_index(a.index);
    a.opt.forms_on_gamma0_p = a.forms_on_gamma0_p == "true";
    if (a.output_dir.empty()) a.output_dir = default_output_dir().string();
}

void print_verdict(runner::RunResult const& r) {
    auto const& c = r.certificate;
    auto const& v = c.verdict;
    std::cout << "procedure      " << c.procedure << "\n"
              << "place          index " << c.place_index << " (e=" << c.e << ", f=" << c.f << ")\n"
              << "N' / mu'       " << c.level.n_prime << " / " << c.level.mu() << " ("
              << bounds::to_string(c.level.index_used) << ")\n"
              << "Sturm bound    " << c.sturm_bound << "\n";
    if (c.r) std::cout << "r              " << *c.r << "  (" << c.r_provenance << ")\n";
    if (c.s) std::cout << "s              " << *c.s << "\n";
    if (c.delta) std::cout << "delta, d       " << *c.delta << ", " << *c.d << "\n";
    std::cout << "verdict        " << to_string(v.kind);
    if (v.kind == VerdictKind::certified_full || v.kind == VerdictKind::certified_partial)
        std::cout << "(" << v.exponent << ")";
    if (v.kind == VerdictKind::refuted_at_prime || v.kind == VerdictKind::refuted_at_index)
        std::cout << "(" << v.witness << ", achieved " << v.achieved << " < " << v.exponent << ")";
    std::cout << "\n";
    if (!v.reason.empty()) std::cout << "reason         " << v.reason << "\n";
    std::cout << "certificate    " << r.written_to.string() << "\n";
}

int run_factor_prime(std::string const& field_file, std::int64_t p) {
    auto const field = formats::load_field(field_file);
    auto const places = factor_prime(field, p);
    std::cout << "field " << (field->name().empty() ? field_file : field->name()) << ", degree " << field->degree()
              << ", p = " << p << ": " << places.size() << " place(s)\n";
    for (std::size_t i = 0; i < places.size(); ++i) {
        auto const& pl = places[i];
        std::cout << "  [" << i << "] e=" << pl.ramification_index() << " f=" << pl.residue_degree()
                  << " generator=(";
        auto const g = pl.generator().coordinates();
        for (std::size_t j = 0; j < g.size(); ++j) std::cout << (j ? ", " : "") << to_string(g[j]);
        std::cout << ")\n";
    }
    return 0;
}

int run_bound(std::int64_t n, std::int64_t p, std::optional<std::int64_t> k1, std::optional<std::int64_t> k2,
              bool gamma0, bool gamma1) {
    auto const kind = gamma1 && !gamma0 ? bounds::IndexKind::gamma1 : bounds::IndexKind::gamma0;
    auto const d = bounds::level_data(n, p, kind);
    std::cout << "N         " << d.n << "\n"
              << "p         " << d.p << "\n"
              << "N'        " << d.n_prime << "\n"
              << "mu0       " << d.mu0 << "  [SL2(Z):Gamma_0(N')]\n"
              << "mu1       " << d.mu1 << "  [SL2(Z):Gamma_1(N')]\n"
              << "index     " << bounds::to_string(kind) << "\n";
    for (auto k : {k1, k2})
        if (k) std::cout << "bound k=" << *k << "  " << to_string(bounds::sturm_prime_bound(*k, d.mu())) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mfcong: congruences of modular forms modulo prime-ideal powers"};
    app.require_subcommand(1);

    CheckArgs check_args;
    auto* check = app.add_subcommand("check", "decide a_l(f1) = a_l(f2) mod P^m for all primes l not dividing Np");
    add_check_options(check, check_args);

    CheckArgs twist_args;
    auto* twist = app.add_subcommand("twist-verify", "confirm a congruence constructively via E^(t p^s) * f1");
    add_check_options(twist, twist_args);

    std::int64_t bound_n = 0, bound_p = 0;
    std::optional<std::int64_t> bound_k1, bound_k2;
    bool bound_g0 = false, bound_g1 = false;
    auto* bound = app.add_subcommand("bound", "print N', the group indexes and Sturm bounds");
    bound->add_option("--N", bound_n, "level N")->required()->check(CLI::PositiveNumber);
    bound->add_option("--p", bound_p, "prime p")->required();
    bound->add_option("--k1", bound_k1, "weight");
    bound->add_option("--k2", bound_k2, "weight");
    auto* g0 = bound->add_flag("--gamma0", bound_g0, "use [SL2(Z):Gamma_0(N')] (default)");
    bound->add_flag("--gamma1", bound_g1, "use [SL2(Z):Gamma_1(N')]")->excludes(g0);

    std::string field_file;
    std::int64_t factor_p = 0;
    auto* factor = app.add_subcommand("factor-prime", "list the places of K over p");
    factor->add_option("field", field_file, "field file")->required()->check(CLI::ExistingFile);
    factor->add_option("--p", factor_p, "prime p")->required();

    CheckArgs batch_args;
    std::string batch_dir;
    std::optional<std::size_t> max_pairs;
    int jobs = 1;
    auto* batch = app.add_subcommand("batch", "scan all form pairs in a directory");
    batch->add_option("directory", batch_dir, "directory of form files")->required()->check(CLI::ExistingDirectory);
    add_check_options(batch, batch_args, false);
    batch->add_option("--max-pairs", max_pairs, "process at most this many pairs");
    batch->add_option("--jobs", jobs, "pairs processed concurrently")->default_val(1)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        int const rc = app.exit(e);
        return rc == 0 ? 0 : runner::exit_input_error;
    }

    try {
        if (*check || *twist) {
            CheckArgs& a = *check ? check_args : twist_args;
            finalize(a);
            auto const f1 = formats::load_form(a.form1);
            auto const f2 = formats::load_form(a.form2);
            auto const r = *check ? runner::run_check(f1, f2, a.opt, a.output_dir)
                                  : runner::run_twist(f1, f2, a.opt, a.output_dir);
            print_verdict(r);
            return runner::exit_code(r.certificate.verdict);
        }
        if (*bound) return run_bound(bound_n, bound_p, bound_k1, bound_k2, bound_g0, bound_g1);
        if (*factor) return run_factor_prime(field_file, factor_p);
        if (*batch) {
            finalize(batch_args);
            runner::BatchOptions bo{batch_args.opt, max_pairs, jobs};
            auto const rows = runner::run_batch(batch_dir, bo, batch_args.output_dir);
            std::cout << std::left << std::setw(14) << "f1" << std::setw(14) << "f2" << std::setw(14) << "status"
                      << std::setw(7) << "place" << std::setw(7) << "max m" << "verdict\n";
            for (auto const& r : rows) {
                std::cout << std::setw(14) << r.f1 << std::setw(14) << r.f2 << std::setw(14) << r.status
                          << std::setw(7) << (r.place_index ? std::to_string(*r.place_index) : "-") << std::setw(7)
                          << r.best_m << (r.verdict.empty() ? r.detail : r.verdict) << "\n";
            }
            std::cout << rows.size() << " row(s); summary in "
                      << (std::filesystem::path(batch_args.output_dir) / "summary.json").string() << "\n";
            return 0;
        }
    } catch (InternalError const& ex) {
        std::cerr << "mfcong: internal error: " << ex.what() << "\n";
        return runner::exit_internal_error;
    } catch (Error const& ex) {
        std::cerr << "mfcong: " << ex.what() << "\n";
        return runner::exit_input_error;
    } catch (std::filesystem::filesystem_error const& ex) {
        std::cerr << "mfcong: " << ex.what() << "\n";
        return runner::exit_input_error;
    }
    return 0;
}
