#include "mfcong/runner.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "mfcong/errors.hpp"

namespace mfcong::runner {

int exit_code(Verdict const& v) {
    switch (v.kind) {
        case VerdictKind::certified_full: return exit_full;
        case VerdictKind::certified_partial: return exit_partial;
        case VerdictKind::inconclusive: return exit_inconclusive;
        default: return exit_refuted;
    }
}

Problem make_problem(formats::FormFile const& f1, formats::FormFile const& f2, CheckOptions const& opt) {
    return Problem{f1.form,
                   f2.form,
                   opt.p,
                   opt.place_index,
                   opt.m,
                   opt.forms_on_gamma0_p,
                   opt.abs_irreducible,
                   opt.galois_closure_degree,
                   opt.r,
                   opt.index,
                   25,
                   0x5eed};
}

namespace {

std::string label_of(formats::FormFile const& f) {
    if (!f.label.empty()) return f.label;
    return f.path.stem().string();
}

std::string sanitize(std::string s) {
    for (auto& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-' && c != '_') c = '-';
    return s;
}

InputRecord record(formats::FormFile const& f, InputRecord base) {
    base.label = label_of(f);
    base.path = f.path.string();
    base.digest = f.digest;
    return base;
}

}  // namespace

void stamp(CongruenceCertificate& cert, formats::FormFile const& f1, formats::FormFile const& f2) {
    cert.tool_version = formats::tool_version;
    cert.timestamp = formats::utc_timestamp();
    cert.f1 = record(f1, cert.f1);
    cert.f2 = record(f2, cert.f2);
    cert.field_digest = !f2.field_digest.empty() ? f2.field_digest : f1.field_digest;
}

std::string certificate_name(CongruenceCertificate const& cert, std::string const& suffix) {
    return sanitize(cert.f1.label) + "_vs_" + sanitize(cert.f2.label) + "_p" + std::to_string(cert.p) + "_P" +
           std::to_string(cert.place_index) + "_m" + std::to_string(cert.m) + suffix + ".json";
}

namespace {

RunResult finish(CongruenceCertificate cert, formats::FormFile const& f1, formats::FormFile const& f2,
                 std::filesystem::path const& output_dir, std::string const& suffix) {
    stamp(cert, f1, f2);
    RunResult r{std::move(cert), {}};
    r.written_to = output_dir / certificate_name(r.certificate, suffix);
    formats::write_file_atomic(r.written_to, formats::serialize_certificate(r.certificate));
    return r;
}

}  // namespace

RunResult run_check(formats::FormFile const& f1, formats::FormFile const& f2, CheckOptions const& opt,
                    std::filesystem::path const& output_dir) {
    return finish(decide(make_problem(f1, f2, opt)), f1, f2, output_dir, ".cert");
}

RunResult run_twist(formats::FormFile const& f1, formats::FormFile const& f2, CheckOptions const& opt,
                    std::filesystem::path const& output_dir) {
    if (f1.form.weight() > f2.form.weight()) return run_twist(f2, f1, opt, output_dir);
    return finish(verify_by_twist(make_problem(f1, f2, opt)), f1, f2, output_dir, ".twist");
}

namespace {

std::string status_of(Verdict const& v) {
    switch (v.kind) {
        case VerdictKind::certified_full: return "certified";
        case VerdictKind::certified_partial: return "partial";
        case VerdictKind::inconclusive: return "inconclusive";
        default: return "refuted";
    }
}

struct Pair {
    std::size_t a;
    std::size_t b;
};

bool fields_compatible(FieldPtr const& x, FieldPtr const& y) {
    return x->degree() == 1 || y->degree() == 1 || same_field(x, y);
}

BatchRow run_pair(formats::FormFile const& f1, formats::FormFile const& f2, BatchOptions const& opt,
                  std::filesystem::path const& output_dir) {
    BatchRow row;
    row.f1 = label_of(f1);
    row.f2 = label_of(f2);
    try {
        CheckOptions co = opt.check;
        std::int64_t const gap = f2.form.weight() - f1.form.weight();
        std::optional<CongruenceCertificate> best;
        if (gap % (co.p - 1) != 0) {
            // No m can work: every weight modulus is a multiple of p - 1.
            co.m = 1;
            best = decide(make_problem(f1, f2, co));
        } else {
            QExpansion x = f1.form, y = f2.form;
            unify_fields(x, y);
            std::size_t const places = factor_prime(x.field(), co.p).size();
            std::optional<CongruenceCertificate> fallback;
            for (std::size_t i = 0; i < places; ++i) {
                co.place_index = i;
                for (std::int64_t m = opt.check.m; m >= 1; --m) {
                    co.m = m;
                    auto cert = decide(make_problem(f1, f2, co));
                    row.coefficient_comparisons += cert.coefficient_comparisons;
                    if (cert.verdict.kind == VerdictKind::certified_full) {
                        if (!best || m > best->m) best = std::move(cert);
                        break;
                    }
                    if (!fallback) fallback = std::move(cert);
                }
            }
            if (!best) best = std::move(fallback);
        }
        stamp(*best, f1, f2);
        if (best->verdict.kind == VerdictKind::certified_full) row.best_m = best->m;
        if (gap % (co.p - 1) != 0) row.coefficient_comparisons = best->coefficient_comparisons;
        row.status = status_of(best->verdict);
        row.place_index = best->place_index;
        row.verdict = to_string(best->verdict.kind);
        row.detail = best->verdict.reason;
        auto const path = output_dir / certificate_name(*best, ".cert");
        formats::write_file_atomic(path, formats::serialize_certificate(*best));
        row.certificate = path.filename().string();
    } catch (Error const& ex) {
        row.status = "error";
        row.detail = ex.what();
    }
    return row;
}

}  // namespace

std::vector<BatchRow> run_batch(std::filesystem::path const& dir, BatchOptions const& opt,
                                std::filesystem::path const& output_dir) {
    if (!std::filesystem::is_directory(dir)) throw InputError(dir.string() + " is not a directory");
    std::vector<std::filesystem::path> files;
    for (auto const& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::vector<BatchRow> rows;
    std::vector<formats::FormFile> forms;
    for (auto const& path : files) {
        std::string const text = formats::read_file(path);
        auto const doc = nlohmann::json::parse(text, nullptr, false);
        if (doc.is_discarded() || !doc.is_object() || doc.value("schema", "") != "mfcong-form/1") continue;
        try {
            forms.push_back(formats::load_form(path));
        } catch (Error const& ex) {
            rows.push_back({path.filename().string(), "", "error", std::nullopt, 0, "", ex.what(), 0, ""});
        }
    }

    std::vector<Pair> pairs;
    for (std::size_t a = 0; a < forms.size(); ++a) {
        for (std::size_t b = a + 1; b < forms.size(); ++b) {
            auto const na = forms[a].form.level(), nb = forms[b].form.level();
            if (na % nb != 0 && nb % na != 0) continue;
            if (!fields_compatible(forms[a].form.field(), forms[b].form.field())) {
                rows.push_back({label_of(forms[a]), label_of(forms[b]), "skipped", std::nullopt, 0, "",
                                "coefficients lie in different number fields", 0, ""});
                continue;
            }
            std::size_t x = a, y = b;
            if (forms[x].form.weight() > forms[y].form.weight()) std::swap(x, y);
            pairs.push_back({x, y});
        }
    }
    if (opt.max_pairs && pairs.size() > *opt.max_pairs) pairs.resize(*opt.max_pairs);

    std::vector<BatchRow> results(pairs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < pairs.size();)
            results[i] = run_pair(forms[pairs[i].a], forms[pairs[i].b], opt, output_dir);
    };
    int const jobs = std::max(1, std::min<int>(opt.jobs, static_cast<int>(pairs.size())));
    std::vector<std::thread> threads;
    for (int j = 1; j < jobs; ++j) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();
    rows.insert(rows.end(), results.begin(), results.end());

    nlohmann::json summary;
    summary["schema"] = "mfcong-batch-summary/1";
    summary["tool_version"] = formats::tool_version;
    summary["p"] = opt.check.p;
    summary["max_m"] = opt.check.m;
    summary["rows"] = nlohmann::json::array();
    for (auto const& r : rows) {
        summary["rows"].push_back({{"f1", r.f1},
                                   {"f2", r.f2},
                                   {"status", r.status},
                                   {"place_index", r.place_index ? nlohmann::json(*r.place_index) : nlohmann::json()},
                                   {"best_m", r.best_m},
                                   {"verdict", r.verdict},
                                   {"detail", r.detail},
                                   {"coefficient_comparisons", r.coefficient_comparisons},
                                   {"certificate", r.certificate}});
    }
    formats::write_file_atomic(output_dir / "summary.json", summary.dump(1) + "\n");
    return rows;
}

}  // namespace mfcong::runner
