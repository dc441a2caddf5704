#include "mfcong/characters.hpp"

#include <numeric>

#include "mfcong/errors.hpp"

namespace mfcong {

namespace {

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
    std::int64_t old_r = a % m, r = m, old_s = 1, s = 0;
    if (old_r < 0) old_r += m;
    while (r != 0) {
        std::int64_t const q = old_r / r;
        old_r = std::exchange(r, old_r - q * r);
        old_s = std::exchange(s, old_s - q * s);
    }
    if (old_r != 1) throw InternalError("inverse_mod of a non-unit");
    old_s %= m;
    return old_s < 0 ? old_s + m : old_s;
}

/* x with x = a mod m1 and x = 1 mod m2, for coprime m1, m2. */
std::int64_t crt_with_one(std::int64_t a, std::int64_t m1, std::int64_t m2) {
    if (m2 == 1) return ((a % m1) + m1) % m1;
    __int128 const k = static_cast<__int128>(((a - 1) % m1 + m1) % m1) * inverse_mod(m2 % m1, m1) % m1;
    return static_cast<std::int64_t>((1 + k * m2) % (static_cast<__int128>(m1) * m2));
}

std::int64_t mulmod64(std::int64_t a, std::int64_t b, std::int64_t m) {
    return static_cast<std::int64_t>(static_cast<__int128>(a) * b % m);
}

std::int64_t primitive_root(std::int64_t q, std::int64_t pp) {
    std::int64_t const phi = pp / q * (q - 1);
    auto const rs = prime_divisors(phi);
    for (std::int64_t g = 2; g < pp; ++g) {
        if (g % q == 0) continue;
        bool ok = true;
        for (auto r : rs) ok = ok && powmod(g, phi / r, pp) != 1;
        if (ok) return g;
    }
    return 1;  // pp == 2
}

std::vector<std::int64_t> power_table(std::int64_t base, std::int64_t pp, std::int64_t count) {
    std::vector<std::int64_t> table(static_cast<std::size_t>(pp), -1);
    std::int64_t x = 1;
    for (std::int64_t e = 0; e < count; ++e) {
        table[static_cast<std::size_t>(x)] = e;
        x = mulmod64(x, base, pp);
    }
    return table;
}

std::int64_t exact_order(FieldElement const& v, std::int64_t bound) {
    for (auto t : divisors(bound))
        if (v.pow(static_cast<std::uint64_t>(t)) == v.field()->one()) return t;
    return 0;
}

}  // namespace

UnitGroup::UnitGroup(std::int64_t modulus) : modulus_(modulus) {
    if (modulus < 1) throw InputError("character modulus must be positive");
    for (auto const& [q, a] : factorize(modulus)) {
        std::int64_t const pp = ipow(q, a);
        std::int64_t const rest = modulus / pp;
        if (q == 2) {
            if (a == 1) continue;
            generators_.push_back(crt_with_one(pp - 1, pp, rest));
            orders_.push_back(2);
            std::int64_t const n5 = a >= 3 ? pp / 4 : 1;
            if (a >= 3) {
                generators_.push_back(crt_with_one(5, pp, rest));
                orders_.push_back(n5);
            }
            components_.push_back({pp, 5, power_table(5, pp, n5), true});
        } else {
            std::int64_t const g = primitive_root(q, pp);
            std::int64_t const phi = pp / q * (q - 1);
            generators_.push_back(crt_with_one(g, pp, rest));
            orders_.push_back(phi);
            components_.push_back({pp, g, power_table(g, pp, phi), false});
        }
    }
}

std::vector<std::int64_t> UnitGroup::log(std::int64_t n) const {
    n %= modulus_;
    if (n < 0) n += modulus_;
    if (std::gcd(n, modulus_) != 1)
        throw Error(std::to_string(n) + " is not a unit modulo " + std::to_string(modulus_));
    std::vector<std::int64_t> out;
    for (auto const& c : components_) {
        std::int64_t x = n % c.prime_power;
        if (c.two_power) {
            bool const negative = x % 4 == 3;
            out.push_back(negative ? 1 : 0);
            if (negative) x = c.prime_power - x;
            if (c.prime_power >= 8) out.push_back(c.log_table[static_cast<std::size_t>(x)]);
        } else {
            out.push_back(c.log_table[static_cast<std::size_t>(x)]);
        }
    }
    return out;
}

DirichletCharacter::DirichletCharacter(FieldPtr field, std::int64_t modulus, std::vector<FieldElement> generator_values)
    : field_(std::move(field)), group_(std::make_shared<UnitGroup const>(modulus)), values_(std::move(generator_values)) {
    auto const& orders = group_->orders();
    if (values_.size() != orders.size())
        throw InputError("character mod " + std::to_string(modulus) + " needs " + std::to_string(orders.size()) +
                         " generator values, got " + std::to_string(values_.size()));
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!same_field(values_[i].field(), field_)) throw FieldMismatch("character value lies in a different field");
        std::int64_t const t = exact_order(values_[i], orders[i]);
        if (t == 0)
            throw InputError("character value at generator " + std::to_string(group_->generators()[i]) +
                             " is not a root of unity of order dividing " + std::to_string(orders[i]));
        value_orders_.push_back(t);
        order_ = lcm64(order_, t);
    }
}

DirichletCharacter DirichletCharacter::trivial(FieldPtr const& field, std::int64_t modulus) {
    UnitGroup const g(modulus);
    return DirichletCharacter(field, modulus, std::vector<FieldElement>(g.generators().size(), field->one()));
}

FieldElement DirichletCharacter::operator()(std::int64_t n) const {
    auto const e = group_->log(n);
    FieldElement r = field_->one();
    for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] % value_orders_[i] != 0) r = r * values_[i].pow(static_cast<std::uint64_t>(e[i] % value_orders_[i]));
    return r;
}

DirichletCharacter DirichletCharacter::lift(std::int64_t new_modulus) const {
    if (new_modulus % modulus() != 0)
        throw Error("cannot lift a character mod " + std::to_string(modulus()) + " to modulus " +
                    std::to_string(new_modulus));
    if (new_modulus == modulus()) return *this;
    UnitGroup const g(new_modulus);
    std::vector<FieldElement> vals;
    for (auto x : g.generators()) vals.push_back((*this)(x));
    return DirichletCharacter(field_, new_modulus, std::move(vals));
}

DirichletCharacter DirichletCharacter::embed(FieldPtr const& field) const {
    if (same_field(field, field_)) return *this;
    if (field_->degree() != 1) throw FieldMismatch("only characters with rational values can be embedded");
    std::vector<FieldElement> vals;
    for (auto const& v : values_) vals.push_back(field->from_rational(field_->to_power_basis(v)[0]));
    return DirichletCharacter(field, modulus(), std::move(vals));
}

bool operator==(DirichletCharacter const& a, DirichletCharacter const& b) {
    return a.modulus() == b.modulus() && a.values() == b.values();
}

namespace {

DirichletCharacter combine(DirichletCharacter const& a, DirichletCharacter const& b, bool invert_b) {
    if (!same_field(a.field(), b.field())) throw FieldMismatch("characters with values in different fields");
    std::int64_t const m = lcm64(a.modulus(), b.modulus());
    auto const la = a.lift(m);
    auto const lb = b.lift(m);
    std::vector<FieldElement> vals;
    for (std::size_t i = 0; i < la.values().size(); ++i) {
        FieldElement w = lb.values()[i];
        if (invert_b) w = w.pow(static_cast<std::uint64_t>(lb.value_orders()[i] - 1));
        vals.push_back(la.values()[i] * w);
    }
    return DirichletCharacter(a.field(), m, std::move(vals));
}

/* Restriction of chi to the CRT factor (Z/m1)^x of (Z/M)^x, M = m1 * m2. */
DirichletCharacter component(DirichletCharacter const& chi, std::int64_t m1, std::int64_t m2) {
    UnitGroup const g(m1);
    std::vector<FieldElement> vals;
    for (auto x : g.generators()) vals.push_back(chi(crt_with_one(x, m1, m2)));
    return DirichletCharacter(chi.field(), m1, std::move(vals));
}

}  // namespace

DirichletCharacter product_char(DirichletCharacter const& a, DirichletCharacter const& b) { return combine(a, b, false); }

DirichletCharacter quotient_char(DirichletCharacter const& psi2, DirichletCharacter const& psi1) {
    return combine(psi2, psi1, true);
}

DirichletCharacter p_part(DirichletCharacter const& chi, std::int64_t p) {
    std::int64_t pa = 1;
    while (chi.modulus() % (pa * p) == 0) pa *= p;
    return component(chi, pa, chi.modulus() / pa);
}

DirichletCharacter prime_to_p_part(DirichletCharacter const& chi, std::int64_t p) {
    std::int64_t pa = 1;
    while (chi.modulus() % (pa * p) == 0) pa *= p;
    return component(chi, chi.modulus() / pa, pa);
}

ReducedOrder reduced_order(DirichletCharacter const& chi, PrimePlace const& place, std::int64_t m) {
    if (m < 1) throw InputError("m must be >= 1");
    std::int64_t const p = place.prime();
    FieldPtr const& k = place.field();
    DirichletCharacter const c = chi.embed(k);
    std::int64_t order = 1;
    for (std::size_t i = 0; i < c.values().size(); ++i) {
        FieldElement const& v = c.values()[i];
        if (!v.is_integral_at(p)) throw InputError("character value is not integral at p");
        for (auto t : divisors(c.value_orders()[i])) {
            if (capped_valuation(v.pow(static_cast<std::uint64_t>(t)) - k->one(), place, m) >= m) {
                order = lcm64(order, t);
                break;
            }
        }
    }
    ReducedOrder r;
    while (order % p == 0) {
        order /= p;
        ++r.delta;
    }
    r.d = order;
    r.necessity_refuted = (p - 1) % order != 0;
    return r;
}

}  // namespace mfcong
