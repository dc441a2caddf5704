#include "mfcong/formats.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "mfcong/errors.hpp"

namespace mfcong::formats {

using nlohmann::json;

namespace {

json parse_json(std::string const& text) {
    try {
        return json::parse(text);
    } catch (json::parse_error const& ex) {
        throw InputError(std::string("malformed JSON: ") + ex.what());
    }
}

json const& member(json const& obj, char const* key) {
    if (!obj.is_object() || !obj.contains(key)) throw InputError(std::string("missing field '") + key + "'");
    return obj.at(key);
}

void expect_schema(json const& doc, std::string const& schema) {
    json const& s = member(doc, "schema");
    if (!s.is_string() || s.get<std::string>() != schema)
        throw InputError("expected schema '" + schema + "', found " + s.dump());
}

}  // namespace

/* Exact numbers: JSON integers or "num/den" strings. Floats never parse. */
Rational rational_from_json(json const& v) {
    if (v.is_string()) return parse_rational(v.get_ref<std::string const&>());
    if (v.is_number_integer()) return Rational(Integer(v.dump(), 10));
    throw InputError("expected an exact rational (integer or \"num/den\" string), found " + v.dump());
}

std::int64_t int_from_json(json const& v, char const* what) {
    Rational const q = rational_from_json(v);
    if (q.get_den() != 1 || !q.get_num().fits_slong_p())
        throw InputError(std::string(what) + " must be a machine-size integer, found " + v.dump());
    return q.get_num().get_si();
}

std::vector<Rational> rational_vector(json const& v, std::size_t expected, char const* what) {
    if (!v.is_array()) throw InputError(std::string(what) + " must be an array");
    if (expected && v.size() != expected)
        throw InputError(std::string(what) + " has " + std::to_string(v.size()) + " entries, expected " +
                         std::to_string(expected));
    std::vector<Rational> out;
    out.reserve(v.size());
    for (auto const& x : v) out.push_back(rational_from_json(x));
    return out;
}

FieldPtr field_from_json(json const& doc) {
    expect_schema(doc, "mfcong-field/1");
    auto const coeffs = rational_vector(member(doc, "polynomial"), 0, "polynomial");
    if (coeffs.size() < 2) throw InputError("polynomial must have degree >= 1");
    poly::ZPoly f;
    for (auto const& c : coeffs) {
        if (c.get_den() != 1) throw InputError("polynomial coefficients must be integers");
        f.push_back(c.get_num());
    }
    std::size_t const n = coeffs.size() - 1;

    NumberField::Options opt;
    if (doc.contains("name")) opt.name = member(doc, "name").get<std::string>();
    if (doc.contains("integral_basis")) {
        json const& rows = doc.at("integral_basis");
        if (!rows.is_array() || rows.size() != n)
            throw InputError("integral_basis must have " + std::to_string(n) + " rows");
        RationalMatrix b(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            auto const row = rational_vector(rows[i], n, "integral_basis row");
            for (std::size_t j = 0; j < n; ++j) b(i, j) = row[j];
        }
        opt.integral_basis = std::move(b);
    }
    if (doc.contains("galois_closure_degree"))
        opt.galois_closure_degree = int_from_json(doc.at("galois_closure_degree"), "galois_closure_degree");
    if (doc.contains("places")) {
        for (auto const& rec : doc.at("places")) {
            PlaceRecord r;
            r.p = int_from_json(member(rec, "p"), "p");
            r.e = static_cast<int>(int_from_json(member(rec, "e"), "e"));
            r.f = static_cast<int>(int_from_json(member(rec, "f"), "f"));
            r.generator = rational_vector(member(rec, "generator"), n, "generator");
            r.tau = rational_vector(member(rec, "tau"), n, "tau");
            opt.places.push_back(std::move(r));
        }
    }
    return NumberField::create(std::move(f), std::move(opt));
}

FieldPtr parse_field(std::string const& text) { return field_from_json(parse_json(text)); }

std::string read_file(std::filesystem::path const& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

FieldPtr load_field(std::filesystem::path const& path) { return parse_field(read_file(path)); }

std::string sha256_hex(std::string const& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw InternalError("SHA-256 failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

namespace {

struct CachedField {
    FieldPtr field;
    std::string digest;
};

/* Field files shared by many forms are parsed once per process. */
CachedField cached_field(std::filesystem::path const& path) {
    static std::mutex mutex;
    static std::map<std::string, CachedField> cache;
    std::string const text = read_file(path);
    std::string const digest = sha256_hex(text);
    std::lock_guard lock(mutex);
    auto it = cache.find(digest);
    if (it == cache.end()) it = cache.emplace(digest, CachedField{parse_field(text), digest}).first;
    return it->second;
}

std::optional<DirichletCharacter> character_from_json(json const& v, FieldPtr const& field) {
    if (v.is_string()) {
        if (v.get<std::string>() != "trivial") throw InputError("character must be \"trivial\" or an object");
        return std::nullopt;
    }
    std::int64_t const modulus = int_from_json(member(v, "modulus"), "character modulus");
    UnitGroup const group(modulus);
    json const& values = member(v, "values");
    if (!values.is_array() || values.size() != group.generators().size())
        throw InputError("character mod " + std::to_string(modulus) + " needs values at " +
                         std::to_string(group.generators().size()) + " generators");
    std::vector<FieldElement> vals;
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::int64_t const g = int_from_json(member(values[i], "generator"), "generator");
        if (g != group.generators()[i])
            throw InputError("character generator " + std::to_string(i) + " must be " +
                             std::to_string(group.generators()[i]) + ", found " + std::to_string(g));
        vals.push_back(field->element(
            rational_vector(member(values[i], "value"), static_cast<std::size_t>(field->degree()), "character value")));
    }
    return DirichletCharacter(field, modulus, std::move(vals));
}

}  // namespace

FormFile parse_form(std::string const& text, std::filesystem::path const& base_dir) {
    json const doc = parse_json(text);
    expect_schema(doc, "mfcong-form/1");
    FormFile out{"", {}, sha256_hex(text), "", QExpansion(NumberField::rationals(), 0, 1, {NumberField::rationals()->zero()})};
    if (doc.contains("label")) out.label = member(doc, "label").get<std::string>();

    json const& fref = member(doc, "field");
    FieldPtr field;
    if (fref.is_string() && fref.get<std::string>() == "rational") {
        field = NumberField::rationals();
    } else if (fref.is_string()) {
        auto const cf = cached_field(base_dir / fref.get<std::string>());
        field = cf.field;
        out.field_digest = cf.digest;
    } else if (fref.is_object()) {
        field = field_from_json(fref);
    } else {
        throw InputError("field must be \"rational\", a file name or an inline field object");
    }

    std::int64_t const level = int_from_json(member(doc, "level"), "level");
    std::int64_t const weight = int_from_json(member(doc, "weight"), "weight");
    std::int64_t const precision = int_from_json(member(doc, "precision"), "precision");
    if (weight < 1) throw InputError("weight must be >= 1");
    if (precision < 1) throw InputError("precision must be >= 1");
    json const& coeffs = member(doc, "coefficients");
    if (!coeffs.is_array() || static_cast<std::int64_t>(coeffs.size()) != precision + 1)
        throw InputError("expected precision + 1 = " + std::to_string(precision + 1) + " coefficients, found " +
                         std::to_string(coeffs.is_array() ? coeffs.size() : 0));
    auto const n = static_cast<std::size_t>(field->degree());
    std::vector<FieldElement> a;
    a.reserve(coeffs.size());
    for (auto const& c : coeffs) a.push_back(field->element(rational_vector(c, n, "coefficient")));
    if (!a[0].is_zero()) throw InputError("a_0 must be 0 for a cusp form");
    if (!(a[1] == field->one())) throw InputError("a_1 must be 1 (normalized form)");

    auto chi = character_from_json(member(doc, "character"), field);
    if (chi && level % chi->modulus() != 0) throw InputError("character modulus must divide the level");
    out.form = QExpansion(field, static_cast<int>(weight), level, std::move(a), std::move(chi));
    return out;
}

FormFile load_form(std::filesystem::path const& path) {
    FormFile f = parse_form(read_file(path), path.parent_path());
    f.path = path;
    return f;
}

/* ---------------------------------------------------------- certificates */

namespace {

json opt(std::optional<std::int64_t> const& v) { return v ? json(*v) : json(nullptr); }

std::optional<std::int64_t> opt_int(json const& v) {
    if (v.is_null()) return std::nullopt;
    return v.get<std::int64_t>();
}

json verdict_json(Verdict const& v) {
    return {{"kind", to_string(v.kind)}, {"exponent", v.exponent}, {"witness", v.witness},
            {"achieved", v.achieved}, {"reason", v.reason}};
}

Verdict verdict_from(json const& j) {
    Verdict v;
    v.kind = verdict_kind_from_string(j.at("kind").get<std::string>());
    v.exponent = j.at("exponent").get<std::int64_t>();
    v.witness = j.at("witness").get<std::int64_t>();
    v.achieved = j.at("achieved").get<std::int64_t>();
    v.reason = j.at("reason").get<std::string>();
    return v;
}

json input_json(InputRecord const& r) {
    return {{"label", r.label}, {"path", r.path}, {"sha256", r.digest}, {"level", r.level},
            {"weight", r.weight}, {"precision", r.precision}, {"character", r.character}};
}

InputRecord input_from(json const& j) {
    return {j.at("label").get<std::string>(), j.at("path").get<std::string>(), j.at("sha256").get<std::string>(),
            j.at("level").get<std::int64_t>(), j.at("weight").get<std::int64_t>(),
            j.at("precision").get<std::int64_t>(), j.at("character").get<std::string>()};
}

json prime_table(std::vector<PrimeResult> const& rows) {
    json out = json::array();
    for (auto const& r : rows) out.push_back({r.ell, r.achieved, r.congruent});
    return out;
}

std::vector<PrimeResult> prime_table_from(json const& j) {
    std::vector<PrimeResult> out;
    for (auto const& row : j)
        out.push_back({row.at(0).get<std::int64_t>(), row.at(1).get<std::int64_t>(), row.at(2).get<bool>()});
    return out;
}

}  // namespace

std::string serialize_certificate(CongruenceCertificate const& c) {
    json j;
    j["schema"] = "mfcong-certificate/1";
    j["tool_version"] = c.tool_version;
    j["timestamp"] = c.timestamp;
    j["procedure"] = c.procedure;
    j["inputs"] = {{"f1", input_json(c.f1)}, {"f2", input_json(c.f2)}};
    j["field"] = {{"name", c.field_name}, {"polynomial", c.field_polynomial}, {"sha256", c.field_digest}};
    j["place"] = {{"p", c.p},           {"index", c.place_index},         {"e", c.e},
                  {"f", c.f},           {"generator", c.place_generator}, {"tau", c.place_tau}};
    j["m"] = c.m;
    j["level"] = {{"N", c.level.n},
                  {"p", c.level.p},
                  {"N_prime", c.level.n_prime},
                  {"mu_gamma1", c.level.mu1},
                  {"mu_gamma0", c.level.mu0},
                  {"index_used", bounds::to_string(c.level.index_used)}};
    j["sturm"] = {{"weight", c.bound_weight}, {"bound", c.sturm_bound}, {"bound_floor", c.bound_floor}};
    j["exponents"] = {{"r", opt(c.r)}, {"r_provenance", c.r_provenance}, {"s", opt(c.s)},
                      {"weight_modulus", opt(c.weight_modulus)}, {"t", opt(c.t)}, {"delta", opt(c.delta)},
                      {"d", opt(c.d)}};
    j["assumptions"] = {{"forms_on_gamma0_p", c.forms_on_gamma0_p}, {"abs_irreducible", c.abs_irreducible}};
    j["notes"] = c.notes;
    j["primes"] = prime_table(c.primes);
    j["spot_checks"] = prime_table(c.spot_checks);
    j["coefficient_comparisons"] = c.coefficient_comparisons;
    j["alternative"] = c.alternative ? verdict_json(*c.alternative) : json(nullptr);
    j["verdict"] = verdict_json(c.verdict);
    return j.dump(1) + "\n";
}

CongruenceCertificate parse_certificate(std::string const& text) {
    json const j = parse_json(text);
    expect_schema(j, "mfcong-certificate/1");
    try {
        CongruenceCertificate c;
        c.tool_version = j.at("tool_version").get<std::string>();
        c.timestamp = j.at("timestamp").get<std::string>();
        c.procedure = j.at("procedure").get<std::string>();
        c.f1 = input_from(j.at("inputs").at("f1"));
        c.f2 = input_from(j.at("inputs").at("f2"));
        c.field_name = j.at("field").at("name").get<std::string>();
        c.field_polynomial = j.at("field").at("polynomial").get<std::vector<std::string>>();
        c.field_digest = j.at("field").at("sha256").get<std::string>();
        auto const& pl = j.at("place");
        c.p = pl.at("p").get<std::int64_t>();
        c.place_index = pl.at("index").get<std::int64_t>();
        c.e = pl.at("e").get<std::int64_t>();
        c.f = pl.at("f").get<std::int64_t>();
        c.place_generator = pl.at("generator").get<std::vector<std::string>>();
        c.place_tau = pl.at("tau").get<std::vector<std::string>>();
        c.m = j.at("m").get<std::int64_t>();
        auto const& lv = j.at("level");
        c.level.n = lv.at("N").get<std::int64_t>();
        c.level.p = lv.at("p").get<std::int64_t>();
        c.level.n_prime = lv.at("N_prime").get<std::int64_t>();
        c.level.mu1 = lv.at("mu_gamma1").get<std::int64_t>();
        c.level.mu0 = lv.at("mu_gamma0").get<std::int64_t>();
        c.level.index_used = lv.at("index_used").get<std::string>() == "gamma0" ? bounds::IndexKind::gamma0
                                                                               : bounds::IndexKind::gamma1;
        c.bound_weight = j.at("sturm").at("weight").get<std::int64_t>();
        c.sturm_bound = j.at("sturm").at("bound").get<std::string>();
        c.bound_floor = j.at("sturm").at("bound_floor").get<std::int64_t>();
        auto const& ex = j.at("exponents");
        c.r = opt_int(ex.at("r"));
        c.r_provenance = ex.at("r_provenance").get<std::string>();
        c.s = opt_int(ex.at("s"));
        c.weight_modulus = opt_int(ex.at("weight_modulus"));
        c.t = opt_int(ex.at("t"));
        c.delta = opt_int(ex.at("delta"));
        c.d = opt_int(ex.at("d"));
        c.forms_on_gamma0_p = j.at("assumptions").at("forms_on_gamma0_p").get<bool>();
        c.abs_irreducible = j.at("assumptions").at("abs_irreducible").get<bool>();
        c.notes = j.at("notes").get<std::vector<std::string>>();
        c.primes = prime_table_from(j.at("primes"));
        c.spot_checks = prime_table_from(j.at("spot_checks"));
        c.coefficient_comparisons = j.at("coefficient_comparisons").get<std::int64_t>();
        if (!j.at("alternative").is_null()) c.alternative = verdict_from(j.at("alternative"));
        c.verdict = verdict_from(j.at("verdict"));
        return c;
    } catch (json::exception const& ex) {
        throw InputError(std::string("malformed certificate: ") + ex.what());
    }
}

void write_file_atomic(std::filesystem::path const& path, std::string const& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw Error("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string utc_timestamp() {
    std::time_t const now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace mfcong::formats
