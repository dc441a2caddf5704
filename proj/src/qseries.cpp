#include "mfcong/qseries.hpp"

#include <algorithm>
#include <numeric>

#include "mfcong/errors.hpp"

namespace mfcong {

QExpansion::QExpansion(FieldPtr field, int weight, std::int64_t level, std::vector<FieldElement> coefficients,
                       std::optional<DirichletCharacter> character)
    : field_(std::move(field)), weight_(weight), level_(level), coeffs_(std::move(coefficients)),
      character_(std::move(character)) {
    if (weight_ < 0) throw InputError("weight must be non-negative");
    if (level_ < 1) throw InputError("level must be positive");
    if (coeffs_.empty()) throw InputError("a q-expansion needs at least the coefficient a_0");
    for (auto const& c : coeffs_)
        if (!same_field(c.field(), field_)) throw FieldMismatch("q-expansion coefficient in a different field");
    if (character_ && !same_field(character_->field(), field_)) *character_ = character_->embed(field_);
}

FieldElement const& QExpansion::operator[](std::int64_t n) const {
    if (n < 0) throw Error("negative coefficient index");
    if (n > precision()) throw InsufficientPrecision(n, precision());
    return coeffs_[static_cast<std::size_t>(n)];
}

QExpansion QExpansion::truncate(std::int64_t b) const {
    if (b > precision()) throw InsufficientPrecision(b, precision());
    return QExpansion(field_, weight_, level_, {coeffs_.begin(), coeffs_.begin() + b + 1}, character_);
}

QExpansion QExpansion::embed(FieldPtr const& field) const {
    if (same_field(field, field_)) return *this;
    if (field_->degree() != 1) throw FieldMismatch("only q-expansions over Q can be embedded");
    std::vector<FieldElement> out;
    out.reserve(coeffs_.size());
    for (auto const& c : coeffs_) out.push_back(field->from_rational(field_->to_power_basis(c)[0]));
    std::optional<DirichletCharacter> chi;
    if (character_) chi = character_->embed(field);
    return QExpansion(field, weight_, level_, std::move(out), std::move(chi));
}

namespace {

void require_same_field(QExpansion const& g, QExpansion const& h) {
    if (!same_field(g.field(), h.field())) throw FieldMismatch("q-expansions over different fields");
    if (g.precision() < 0 || h.precision() < 0) throw InputError("empty q-expansion");
}

std::optional<DirichletCharacter> combined_character(QExpansion const& g, QExpansion const& h) {
    if (g.has_trivial_character()) return h.character();
    if (h.has_trivial_character()) return g.character();
    return product_char(*g.character(), *h.character());
}

QExpansion add_or_sub(QExpansion const& g, QExpansion const& h, bool subtract) {
    require_same_field(g, h);
    if (g.weight() != h.weight()) throw InputError("cannot add q-expansions of different weights");
    std::int64_t const b = std::min(g.precision(), h.precision());
    std::vector<FieldElement> out;
    out.reserve(static_cast<std::size_t>(b) + 1);
    for (std::int64_t n = 0; n <= b; ++n) out.push_back(subtract ? g[n] - h[n] : g[n] + h[n]);
    std::optional<DirichletCharacter> chi = g.character();
    if (g.has_trivial_character() && !h.has_trivial_character()) chi = h.character();
    return QExpansion(g.field(), g.weight(), std::lcm(g.level(), h.level()), std::move(out), std::move(chi));
}

/* Coordinate u of a series as integers, with the common denominator pulled out. */
struct ScaledColumn {
    std::vector<Integer> values;
    std::vector<std::size_t> support;
    Integer denominator = 1;
};

ScaledColumn column(QExpansion const& s, std::size_t u, std::int64_t b) {
    ScaledColumn col;
    for (std::int64_t n = 0; n <= b; ++n) {
        Rational const& c = s[n][u];
        if (c != 0) mpz_lcm(col.denominator.get_mpz_t(), col.denominator.get_mpz_t(), c.get_den_mpz_t());
    }
    col.values.resize(static_cast<std::size_t>(b) + 1);
    for (std::int64_t n = 0; n <= b; ++n) {
        Rational const& c = s[n][u];
        if (c == 0) continue;
        col.values[n] = c.get_num() * (col.denominator / c.get_den());
        col.support.push_back(static_cast<std::size_t>(n));
    }
    return col;
}

/* Schoolbook convolution skipping zero coefficients, truncated at b. */
std::vector<Integer> convolve(ScaledColumn const& a, ScaledColumn const& c, std::int64_t b) {
    std::vector<Integer> out(static_cast<std::size_t>(b) + 1);
    auto const limit = static_cast<std::size_t>(b);
    for (std::size_t i : a.support) {
        mpz_srcptr ai = a.values[i].get_mpz_t();
        for (std::size_t j : c.support) {
            if (i + j > limit) break;
            mpz_addmul(out[i + j].get_mpz_t(), ai, c.values[j].get_mpz_t());
        }
    }
    return out;
}

}  // namespace

QExpansion series_add(QExpansion const& g, QExpansion const& h) { return add_or_sub(g, h, false); }
QExpansion series_sub(QExpansion const& g, QExpansion const& h) { return add_or_sub(g, h, true); }

QExpansion series_mul(QExpansion const& g, QExpansion const& h) {
    require_same_field(g, h);
    NumberField const& k = *g.field();
    auto const n = static_cast<std::size_t>(k.degree());
    std::int64_t const b = std::min(g.precision(), h.precision());

    std::vector<ScaledColumn> gc, hc;
    for (std::size_t u = 0; u < n; ++u) {
        gc.push_back(column(g, u, b));
        hc.push_back(column(h, u, b));
    }

    // Result coordinate w accumulates sum_{u,v} c(u,v,w) conv(g_u, h_v) / (D_u D_v)
    // over the common denominator lcm(D_u D_v).
    std::vector<Integer> denom(n, Integer(1));
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
            if (gc[u].support.empty() || hc[v].support.empty()) continue;
            Integer const d = gc[u].denominator * hc[v].denominator;
            for (std::size_t w = 0; w < n; ++w)
                if (k.structure_constant(int(u), int(v), int(w)) != 0)
                    mpz_lcm(denom[w].get_mpz_t(), denom[w].get_mpz_t(), d.get_mpz_t());
        }
    std::vector<std::vector<Integer>> acc(n, std::vector<Integer>(static_cast<std::size_t>(b) + 1));
    for (std::size_t u = 0; u < n; ++u) {
        if (gc[u].support.empty()) continue;
        for (std::size_t v = 0; v < n; ++v) {
            if (hc[v].support.empty()) continue;
            std::vector<Integer> const conv = convolve(gc[u], hc[v], b);
            Integer const d = gc[u].denominator * hc[v].denominator;
            for (std::size_t w = 0; w < n; ++w) {
                Integer const& t = k.structure_constant(int(u), int(v), int(w));
                if (t == 0) continue;
                Integer const scale = t * (denom[w] / d);
                for (std::size_t i = 0; i < conv.size(); ++i)
                    if (conv[i] != 0) mpz_addmul(acc[w][i].get_mpz_t(), scale.get_mpz_t(), conv[i].get_mpz_t());
            }
        }
    }

    std::vector<FieldElement> out;
    out.reserve(static_cast<std::size_t>(b) + 1);
    for (std::int64_t i = 0; i <= b; ++i) {
        std::vector<Rational> coords(n);
        for (std::size_t w = 0; w < n; ++w) {
            coords[w] = Rational(acc[w][i], denom[w]);
            coords[w].canonicalize();
        }
        out.push_back(k.element(std::move(coords)));
    }
    return QExpansion(g.field(), g.weight() + h.weight(), std::lcm(g.level(), h.level()), std::move(out),
                      combined_character(g, h));
}

OrdResult ord_mod(QExpansion const& h, PrimePlace const& place, std::int64_t a) {
    if (!same_field(h.field(), place.field())) return ord_mod(h.embed(place.field()), place, a);
    for (std::int64_t n = 0; n <= h.precision(); ++n)
        if (capped_valuation(h[n], place, a) < a) return {n, false};
    return {h.precision() + 1, true};
}

Rational bernoulli(int k) {
    if (k < 0) throw Error("bernoulli index must be non-negative");
    std::vector<Rational> b(static_cast<std::size_t>(k) + 1);
    b[0] = 1;
    for (int m = 1; m <= k; ++m) {
        Rational s = 0;
        Integer binom = 1;  // C(m+1, j)
        for (int j = 0; j < m; ++j) {
            s += binom * b[j];
            binom = binom * (m + 1 - j) / (j + 1);
        }
        b[m] = -s / (m + 1);
    }
    return b[k];
}

namespace {

template <typename T>
QExpansion rational_series(int weight, std::int64_t level, std::vector<T> const& coeffs,
                           std::optional<DirichletCharacter> chi = std::nullopt) {
    FieldPtr const q = NumberField::rationals();
    std::vector<FieldElement> out;
    out.reserve(coeffs.size());
    for (auto const& c : coeffs) out.push_back(q->from_rational(Rational(c)));
    return QExpansion(q, weight, level, std::move(out), std::move(chi));
}

/* sum_{d | n, keep(d)} w(d) for n = 1..b, by a sieve. */
template <typename Keep, typename Weight>
std::vector<Integer> divisor_sums(std::int64_t b, Keep keep, Weight w) {
    std::vector<Integer> s(static_cast<std::size_t>(b) + 1);
    for (std::int64_t d = 1; d <= b; ++d) {
        if (!keep(d)) continue;
        Integer const wd = w(d);
        for (std::int64_t n = d; n <= b; n += d) s[n] += wd;
    }
    return s;
}

}  // namespace

QExpansion eisenstein_series(int k, std::int64_t precision) {
    if (k < 4 || k % 2 != 0) throw Error("eisenstein_series needs even weight k >= 4");
    if (precision < 0) throw Error("negative precision");
    Rational const factor = -Rational(2 * k) / bernoulli(k);
    auto s = divisor_sums(precision, [](std::int64_t) { return true; }, [k](std::int64_t d) {
        Integer r;
        mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(k - 1));
        return r;
    });
    std::vector<Rational> c(s.size());
    c[0] = 1;
    for (std::int64_t n = 1; n <= precision; ++n) c[n] = factor * Rational(s[n]);
    return rational_series(k, 1, c);
}

QExpansion eisenstein_unit(std::int64_t p, std::int64_t precision) {
    if (!is_prime(p)) throw InputError("eisenstein_unit needs a prime p");
    if (precision < 1) throw Error("eisenstein_unit needs precision >= 1");
    if (p >= 5) return eisenstein_series(static_cast<int>(p - 1), precision);
    if (p == 2) {
        auto psi = [](std::int64_t d) { return d % 3 == 0 ? 0 : (d % 3 == 1 ? 1 : -1); };
        auto s = divisor_sums(precision, [](std::int64_t d) { return d % 3 != 0; },
                              [&](std::int64_t d) { return Integer(psi(d)); });
        s[0] = 1;
        for (std::int64_t n = 1; n <= precision; ++n) s[n] *= 6;
        FieldPtr const q = NumberField::rationals();
        DirichletCharacter chi(q, 3, {q->from_rational(-1)});
        return rational_series(1, 3, s, std::move(chi));
    }
    auto s = divisor_sums(precision, [](std::int64_t d) { return d % 2 == 1; },
                          [](std::int64_t d) { return Integer(static_cast<long>(d)); });
    s[0] = 1;
    for (std::int64_t n = 1; n <= precision; ++n) s[n] *= 24;
    return rational_series(2, 2, s);
}

QExpansion unit_power(std::int64_t p, std::uint64_t u, std::int64_t precision, std::optional<int> check_modulus) {
    std::vector<Integer> one(static_cast<std::size_t>(precision) + 1);
    one[0] = 1;
    QExpansion result = rational_series(0, 1, one);
    if (u > 0) {
        QExpansion base = eisenstein_unit(p, precision);
        for (std::uint64_t e = u;;) {
            if (e & 1) result = series_mul(result, base);
            e >>= 1;
            if (!e) break;
            base = series_mul(base, base);
        }
    }
    if (check_modulus) {
        int const j = *check_modulus;
        Integer pj = 1;
        for (int i = 0; i < j; ++i) pj *= static_cast<long>(p);
        if (Integer(static_cast<unsigned long>(u)) % pj != 0)
            throw Error("unit_power check needs p^j | u");
        Integer const modulus = pj * static_cast<long>(p);
        for (std::int64_t n = 0; n <= precision; ++n) {
            Rational const c = result[n][0] - (n == 0 ? 1 : 0);
            if (c.get_den() % static_cast<long>(p) == 0 || c.get_num() % modulus != 0)
                throw InternalError("E^" + std::to_string(u) + " is not 1 mod " + modulus.get_str() +
                                    " at q^" + std::to_string(n));
        }
    }
    return result;
}

QExpansion strip(QExpansion const& h, std::int64_t np, std::int64_t new_level) {
    std::vector<FieldElement> out = h.coefficients();
    FieldElement const zero = h.field()->zero();
    for (std::size_t n = 0; n < out.size(); ++n)
        if (std::gcd(static_cast<std::int64_t>(n), np) != 1) out[n] = zero;
    return QExpansion(h.field(), h.weight(), new_level, std::move(out), h.character());
}

}  // namespace mfcong
