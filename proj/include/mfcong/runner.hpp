#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mfcong/engine.hpp"
#include "mfcong/formats.hpp"

namespace mfcong::runner {

/* Process exit statuses of the CLI. */
enum ExitCode : int {
    exit_full = 0,
    exit_partial = 10,
    exit_refuted = 20,
    exit_inconclusive = 30,
    exit_input_error = 64,
    exit_internal_error = 70,
};

int exit_code(Verdict const& v);

struct CheckOptions {
    std::int64_t p = 0;
    std::size_t place_index = 0;
    std::int64_t m = 1;
    bool forms_on_gamma0_p = true;
    bool abs_irreducible = false;
    std::optional<std::int64_t> galois_closure_degree;
    std::optional<std::int64_t> r;
    IndexChoice index = IndexChoice::automatic;
};

Problem make_problem(formats::FormFile const& f1, formats::FormFile const& f2, CheckOptions const& opt);
/* Copies labels, paths, digests and the timestamp into a finished certificate. */
void stamp(CongruenceCertificate& cert, formats::FormFile const& f1, formats::FormFile const& f2);
std::string certificate_name(CongruenceCertificate const& cert, std::string const& suffix);

struct RunResult {
    CongruenceCertificate certificate;
    std::filesystem::path written_to;
};

RunResult run_check(formats::FormFile const& f1, formats::FormFile const& f2, CheckOptions const& opt,
                    std::filesystem::path const& output_dir);
RunResult run_twist(formats::FormFile const& f1, formats::FormFile const& f2, CheckOptions const& opt,
                    std::filesystem::path const& output_dir);

struct BatchOptions {
    CheckOptions check;  // p, m (largest exponent searched) and the hypothesis flags
    std::optional<std::size_t> max_pairs;
    int jobs = 1;
};

struct BatchRow {
    std::string f1;
    std::string f2;
    std::string status;  // certified, partial, refuted, inconclusive, skipped, error
    std::optional<std::int64_t> place_index;
    std::int64_t best_m = 0;  // largest certified exponent found (0: none)
    std::string verdict;
    std::string detail;
    std::int64_t coefficient_comparisons = 0;
    std::string certificate;
};

/* Every pair of forms in the directory with nested levels and a common field:
 * cheap weight filter first, then for each place over p the largest m <= opt.m
 * with a CertifiedFull verdict. One certificate per pair, plus summary.json. */
std::vector<BatchRow> run_batch(std::filesystem::path const& dir, BatchOptions const& opt,
                                std::filesystem::path const& output_dir);

}  // namespace mfcong::runner
