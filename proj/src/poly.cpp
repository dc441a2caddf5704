#include "mfcong/poly.hpp"

#include <algorithm>
#include <cassert>
#include <random>
#include <set>
#include <utility>

#include "mfcong/errors.hpp"

namespace mfcong::poly {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
    std::uint64_t r = 1, b = a % p, e = p - 2;
    while (e) {
        if (e & 1) r = mulmod(r, b, p);
        b = mulmod(b, b, p);
        e >>= 1;
    }
    return r;
}

bool less_poly(FpPoly const& a, FpPoly const& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
}

}  // namespace

int degree(ZPoly const& f) { return static_cast<int>(f.size()) - 1; }
int degree(FpPoly const& f) { return static_cast<int>(f.size()) - 1; }

void trim(ZPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}
void trim(FpPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

ZPoly mul(ZPoly const& a, ZPoly const& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

ZPoly add(ZPoly const& a, ZPoly const& b) {
    ZPoly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    trim(r);
    return r;
}

ZPoly sub(ZPoly const& a, ZPoly const& b) {
    ZPoly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    return r;
}

ZPoly pow(ZPoly const& a, int k) {
    ZPoly r{Integer(1)};
    for (int i = 0; i < k; ++i) r = mul(r, a);
    return r;
}

FpPoly reduce(ZPoly const& f, std::uint64_t p) {
    FpPoly r(f.size());
    Integer const pz(static_cast<unsigned long>(p));
    for (std::size_t i = 0; i < f.size(); ++i) {
        Integer c = f[i] % pz;
        if (c < 0) c += pz;
        r[i] = c.get_ui();
    }
    trim(r);
    return r;
}

ZPoly lift(FpPoly const& f) {
    ZPoly r(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) r[i] = static_cast<unsigned long>(f[i]);
    return r;
}

FpPoly mul(FpPoly const& a, FpPoly const& b, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
    }
    trim(r);
    return r;
}

FpPoly sub(FpPoly const& a, FpPoly const& b, std::uint64_t p) {
    FpPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + p - b[i]) % p;
    trim(r);
    return r;
}

std::pair<FpPoly, FpPoly> divmod(FpPoly const& a, FpPoly const& b, std::uint64_t p) {
    assert(!b.empty());
    FpPoly r = a;
    trim(r);
    if (r.size() < b.size()) return {FpPoly{}, r};
    FpPoly q(r.size() - b.size() + 1, 0);
    std::uint64_t const lead_inv = inv_mod(b.back(), p);
    for (std::size_t k = q.size(); k-- > 0;) {
        std::uint64_t const c = mulmod(r[k + b.size() - 1], lead_inv, p);
        q[k] = c;
        if (!c) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[k + j] = (r[k + j] + p - mulmod(c, b[j], p)) % p;
    }
    trim(q);
    trim(r);
    return {q, r};
}

FpPoly rem(FpPoly const& a, FpPoly const& b, std::uint64_t p) { return divmod(a, b, p).second; }

FpPoly monic(FpPoly f, std::uint64_t p) {
    trim(f);
    if (f.empty()) return f;
    std::uint64_t const inv = inv_mod(f.back(), p);
    for (auto& c : f) c = mulmod(c, inv, p);
    return f;
}

FpPoly gcd(FpPoly a, FpPoly b, std::uint64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        FpPoly r = rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a, p);
}

FpPoly derivative(FpPoly const& f, std::uint64_t p) {
    if (f.size() <= 1) return {};
    FpPoly r(f.size() - 1);
    for (std::size_t i = 1; i < f.size(); ++i) r[i - 1] = mulmod(f[i], i % p, p);
    trim(r);
    return r;
}

FpPoly powmod(FpPoly base, Integer exponent, FpPoly const& modulus, std::uint64_t p) {
    FpPoly result{1};
    result = rem(result, modulus, p);
    base = rem(base, modulus, p);
    while (exponent > 0) {
        if (mpz_odd_p(exponent.get_mpz_t())) result = rem(mul(result, base, p), modulus, p);
        base = rem(mul(base, base, p), modulus, p);
        exponent >>= 1;
    }
    return result;
}

bool divides(FpPoly const& d, FpPoly const& f, std::uint64_t p) { return rem(f, d, p).empty(); }

namespace {

/* f(x) = g(x^p) over F_p: return g with coefficients c^(1/p) = c. */
FpPoly pth_root(FpPoly const& f, std::uint64_t p) {
    FpPoly r;
    for (std::size_t i = 0; i < f.size(); i += p) r.push_back(f[i]);
    trim(r);
    return r;
}

void squarefree_decomposition(FpPoly f, std::uint64_t p, int scale, std::vector<FpFactor>& out) {
    f = monic(f, p);
    if (degree(f) < 1) return;
    FpPoly const df = derivative(f, p);
    if (df.empty()) {
        squarefree_decomposition(pth_root(f, p), p, scale * static_cast<int>(p), out);
        return;
    }
    FpPoly c = gcd(f, df, p);
    FpPoly w = divmod(f, c, p).first;
    int i = 1;
    while (degree(w) > 0) {
        FpPoly const y = gcd(w, c, p);
        FpPoly const z = divmod(w, y, p).first;
        if (degree(z) > 0) out.push_back({monic(z, p), i * scale});
        ++i;
        w = y;
        c = divmod(c, y, p).first;
    }
    if (degree(c) > 0) squarefree_decomposition(pth_root(c, p), p, scale * static_cast<int>(p), out);
}

void equal_degree_split(FpPoly const& f, int d, std::uint64_t p, std::mt19937_64& rng,
                        std::vector<FpPoly>& out) {
    int const n = degree(f);
    if (n == d) {
        out.push_back(monic(f, p));
        return;
    }
    std::uniform_int_distribution<std::uint64_t> coin(0, p - 1);
    for (;;) {
        FpPoly a(static_cast<std::size_t>(n));
        for (auto& c : a) c = coin(rng);
        trim(a);
        if (degree(a) < 1) continue;
        FpPoly g;
        if (p == 2) {
            // trace map a + a^2 + ... + a^(2^(d-1))
            FpPoly t = a, acc = a;
            for (int i = 1; i < d; ++i) {
                t = rem(mul(t, t, p), f, p);
                acc = sub(acc, t, p);  // characteristic 2: minus is plus
            }
            g = gcd(f, acc, p);
        } else {
            Integer e;
            mpz_ui_pow_ui(e.get_mpz_t(), p, static_cast<unsigned long>(d));
            e = (e - 1) / 2;
            FpPoly b = powmod(a, e, f, p);
            b = sub(b, FpPoly{1}, p);
            g = gcd(f, b, p);
        }
        if (degree(g) > 0 && degree(g) < n) {
            equal_degree_split(g, d, p, rng, out);
            equal_degree_split(divmod(f, g, p).first, d, p, rng, out);
            return;
        }
    }
}

}  // namespace

bool is_squarefree_mod_p(FpPoly const& f, std::uint64_t p) {
    FpPoly const df = derivative(f, p);
    if (df.empty()) return degree(f) <= 0;
    return degree(gcd(f, df, p)) == 0;
}

std::vector<FpFactor> factor_mod_p(FpPoly const& f_in, std::uint64_t p) {
    FpPoly f = f_in;
    trim(f);
    if (f.empty()) throw Error("factor_mod_p: zero polynomial");
    std::vector<FpFactor> sqf;
    squarefree_decomposition(f, p, 1, sqf);

    std::mt19937_64 rng(0x5eed'0000'0000'0001ULL ^ p);
    std::vector<FpFactor> out;
    for (auto const& [part, mult] : sqf) {
        FpPoly rest = part;
        FpPoly h{0, 1};  // x
        for (int d = 1; 2 * d <= degree(rest); ++d) {
            h = powmod(h, Integer(static_cast<unsigned long>(p)), rest, p);
            FpPoly const g = gcd(rest, sub(h, FpPoly{0, 1}, p), p);
            if (degree(g) > 0) {
                std::vector<FpPoly> pieces;
                equal_degree_split(g, d, p, rng, pieces);
                for (auto& piece : pieces) out.push_back({std::move(piece), mult});
                rest = divmod(rest, g, p).first;
                h = rem(h, rest, p);
            }
        }
        if (degree(rest) > 0) out.push_back({monic(rest, p), mult});
    }
    std::sort(out.begin(), out.end(), [](FpFactor const& a, FpFactor const& b) {
        if (a.factor != b.factor) return less_poly(a.factor, b.factor);
        return a.multiplicity < b.multiplicity;
    });
    // merge repeated factors coming from distinct squarefree layers (cannot happen
    // in characteristic 0 style decompositions, but p-th power layers may repeat)
    std::vector<FpFactor> merged;
    for (auto& fac : out) {
        if (!merged.empty() && merged.back().factor == fac.factor)
            merged.back().multiplicity += fac.multiplicity;
        else
            merged.push_back(std::move(fac));
    }
    return merged;
}

ZPoly charpoly(std::vector<Integer> const& a, int n) {
    assert(static_cast<int>(a.size()) == n * n);
    auto at = [&](int i, int j) -> Integer const& { return a[static_cast<std::size_t>(i) * n + j]; };
    // coefficients highest degree first
    std::vector<Integer> c{Integer(1), Integer(-at(0, 0))};
    for (int r = 1; r < n; ++r) {
        // Toeplitz column: 1, -a_rr, -R S, -R A S, ..., -R A^{r-1} S
        std::vector<Integer> q(static_cast<std::size_t>(r) + 2);
        q[0] = 1;
        q[1] = -at(r, r);
        std::vector<Integer> v(static_cast<std::size_t>(r));
        for (int i = 0; i < r; ++i) v[i] = at(i, r);  // S
        for (int k = 2; k <= r + 1; ++k) {
            Integer dot = 0;
            for (int j = 0; j < r; ++j) dot += at(r, j) * v[j];
            q[k] = -dot;
            if (k == r + 1) break;
            std::vector<Integer> nv(static_cast<std::size_t>(r));
            for (int i = 0; i < r; ++i) {
                Integer s = 0;
                for (int j = 0; j < r; ++j) s += at(i, j) * v[j];
                nv[i] = s;
            }
            v = std::move(nv);
        }
        std::vector<Integer> nc(static_cast<std::size_t>(r) + 2);
        for (int i = 0; i <= r + 1; ++i) {
            Integer s = 0;
            for (int j = 0; j <= std::min(i, r); ++j) s += q[i - j] * c[j];
            nc[i] = s;
        }
        c = std::move(nc);
    }
    ZPoly out(c.rbegin(), c.rend());
    return out;
}

namespace {

/* s, t with s*a + t*b = 1 over F_p, for coprime a and b. */
std::pair<FpPoly, FpPoly> bezout(FpPoly const& a, FpPoly const& b, std::uint64_t p) {
    FpPoly r0 = a, r1 = b, s0{1}, s1, t0, t1{1};
    while (!r1.empty()) {
        auto [q, r] = divmod(r0, r1, p);
        r0 = std::exchange(r1, std::move(r));
        s0 = std::exchange(s1, sub(s0, mul(q, s1, p), p));
        t0 = std::exchange(t1, sub(t0, mul(q, t1, p), p));
    }
    assert(degree(r0) == 0);
    FpPoly const c{inv_mod(r0[0], p)};
    return {mul(s0, c, p), mul(t0, c, p)};
}

/* Lift f = g*h mod q (all monic, g and h coprime) to f = G*H mod q^k and
 * return G with coefficients in the symmetric range. */
ZPoly hensel_lift(ZPoly const& f, FpPoly const& g, FpPoly const& h, std::uint64_t q, int k) {
    auto const [s, t] = bezout(g, h, q);
    ZPoly big_g = lift(g);
    ZPoly big_h = lift(h);
    Integer const qz(static_cast<unsigned long>(q));
    Integer qi = qz;
    for (int i = 1; i < k; ++i) {
        ZPoly err = sub(f, mul(big_g, big_h));
        for (auto& c : err) {
            assert(mpz_divisible_p(c.get_mpz_t(), qi.get_mpz_t()));
            mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), qi.get_mpz_t());
        }
        FpPoly const e = reduce(err, q);
        auto const [quo, sigma] = divmod(mul(s, e, q), h, q);
        FpPoly const tau = sub(mul(t, e, q), sub(FpPoly{}, mul(quo, g, q), q), q);
        ZPoly dg = lift(tau), dh = lift(sigma);
        for (auto& c : dg) c *= qi;
        for (auto& c : dh) c *= qi;
        big_g = add(big_g, dg);
        big_h = add(big_h, dh);
        qi *= qz;
    }
    Integer const half = qi / 2;
    for (auto& c : big_g) {
        c %= qi;
        if (c < 0) c += qi;
        if (c > half) c -= qi;
    }
    return big_g;
}

/* Exact division test for a monic divisor over Z. */
bool divides_over_z(ZPoly const& g, ZPoly r) {
    int const dg = degree(g);
    for (int i = degree(r); i >= dg; --i) {
        if (r[i] == 0) continue;
        Integer const c = r[i];
        for (int j = 0; j <= dg; ++j) r[i - dg + j] -= c * g[j];
    }
    trim(r);
    return r.empty();
}

}  // namespace

Irreducibility certify_irreducible(ZPoly const& f, int max_primes) {
    int const n = degree(f);
    if (n < 1 || f.back() != 1) return Irreducibility::reducible_or_unknown;
    if (n == 1) return Irreducibility::irreducible;
    // possible[d] == true: some rational factor of degree d is still consistent
    std::vector<bool> possible(static_cast<std::size_t>(n) + 1, true);
    std::vector<FpFactor> best;
    std::uint64_t best_q = 0;
    int used = 0;
    for (std::int64_t q = 2; used < max_primes && q < 100000; ++q) {
        if (!is_prime(q)) continue;
        auto const uq = static_cast<std::uint64_t>(q);
        FpPoly const fq = reduce(f, uq);
        if (degree(fq) != n || !is_squarefree_mod_p(fq, uq)) continue;
        ++used;
        auto factors = factor_mod_p(fq, uq);
        std::vector<bool> sums(static_cast<std::size_t>(n) + 1, false);
        sums[0] = true;
        for (auto const& fac : factors) {
            int const d = degree(fac.factor);
            for (int s = n; s >= d; --s)
                if (sums[s - d]) sums[s] = true;
        }
        bool open = false;
        for (int d = 1; d < n; ++d) {
            possible[d] = possible[d] && sums[d];
            open = open || possible[d];
        }
        if (!open) return Irreducibility::irreducible;
        if (best.empty() || factors.size() < best.size()) {
            best = std::move(factors);
            best_q = uq;
        }
    }
    if (best.empty() || best.size() > 16) return Irreducibility::reducible_or_unknown;

    // Some degree survives every modular pattern (e.g. small non-cyclic Galois
    // groups). Exclude it by lifting candidate factors past the coefficient bound.
    Integer norm2 = 0;
    for (auto const& c : f) norm2 += c * c;
    Integer norm = sqrt(norm2) + 1;
    Integer const bound = 2 * (Integer(1) << static_cast<unsigned>(n / 2)) * norm;
    int k = 1;
    for (Integer qk(static_cast<unsigned long>(best_q)); qk <= bound; qk *= static_cast<unsigned long>(best_q)) ++k;

    std::size_t const r = best.size();
    for (std::uint32_t mask = 1; mask + 1 < (1u << r); ++mask) {
        int d = 0;
        FpPoly g{1}, h{1};
        for (std::size_t i = 0; i < r; ++i) {
            if (mask >> i & 1) {
                d += degree(best[i].factor);
                g = mul(g, best[i].factor, best_q);
            } else {
                h = mul(h, best[i].factor, best_q);
            }
        }
        if (2 * d > n || !possible[d]) continue;
        if (divides_over_z(hensel_lift(f, g, h, best_q, k), f)) return Irreducibility::reducible_or_unknown;
    }
    return Irreducibility::irreducible;
}

}  // namespace mfcong::poly
