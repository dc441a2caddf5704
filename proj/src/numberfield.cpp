#include "mfcong/numberfield.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "mfcong/errors.hpp"

namespace mfcong {

/* ---------------------------------------------------------------- elements */

FieldElement::FieldElement(FieldPtr field, std::vector<Rational> coordinates)
    : field_(std::move(field)), coords_(std::move(coordinates)) {
    if (!field_ || static_cast<int>(coords_.size()) != field_->degree())
        throw InputError("field element has " + std::to_string(coords_.size()) +
                         " coordinates, expected " + std::to_string(field_ ? field_->degree() : 0));
}

bool FieldElement::is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](Rational const& c) { return c == 0; });
}

bool FieldElement::is_integral_at(std::int64_t p) const {
    Integer const pz(static_cast<long>(p));
    for (auto const& c : coords_)
        if (mpz_divisible_p(c.get_den_mpz_t(), pz.get_mpz_t())) return false;
    return true;
}

FieldElement& FieldElement::operator+=(FieldElement const& b) {
    if (!same_field(field_, b.field_)) throw FieldMismatch();
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += b.coords_[i];
    return *this;
}

FieldElement& FieldElement::operator-=(FieldElement const& b) {
    if (!same_field(field_, b.field_)) throw FieldMismatch();
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= b.coords_[i];
    return *this;
}

FieldElement& FieldElement::operator*=(Rational const& c) {
    for (auto& x : coords_) x *= c;
    return *this;
}

FieldElement operator*(FieldElement const& a, FieldElement const& b) {
    if (!same_field(a.field_, b.field_)) throw FieldMismatch();
    NumberField const& k = *a.field_;
    int const n = k.degree();
    std::vector<Rational> out(static_cast<std::size_t>(n));
    Rational ab;
    for (int i = 0; i < n; ++i) {
        if (a.coords_[i] == 0) continue;
        for (int j = 0; j < n; ++j) {
            if (b.coords_[j] == 0) continue;
            ab = a.coords_[i] * b.coords_[j];
            for (int l = 0; l < n; ++l) {
                Integer const& t = k.structure_constant(i, j, l);
                if (t != 0) out[l] += ab * t;
            }
        }
    }
    return FieldElement(a.field_, std::move(out));
}

bool operator==(FieldElement const& a, FieldElement const& b) {
    return same_field(a.field_, b.field_) && a.coords_ == b.coords_;
}

FieldElement FieldElement::pow(std::uint64_t k) const {
    FieldElement result = field_->one();
    FieldElement base = *this;
    while (k) {
        if (k & 1) result = result * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return result;
}

FieldElement FieldElement::inverse() const {
    if (is_zero()) throw Error("inverse of zero");
    int const n = field_->degree();
    RationalMatrix m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        std::vector<Rational> basis_j(static_cast<std::size_t>(n));
        basis_j[j] = 1;
        FieldElement const prod = *this * FieldElement(field_, std::move(basis_j));
        for (int l = 0; l < n; ++l) m(j, l) = prod[l];
    }
    RationalMatrix const inv = mfcong::inverse(m);
    return FieldElement(field_, row_times<Rational>(field_->one_coordinates(), inv));
}

/* ------------------------------------------------------------------ fields */

namespace {

/* Reduce a rational polynomial modulo the monic integer polynomial f. */
std::vector<Rational> reduce_mod(std::vector<Rational> r, poly::ZPoly const& f) {
    int const n = poly::degree(f);
    for (int d = static_cast<int>(r.size()) - 1; d >= n; --d) {
        if (r[d] == 0) continue;
        Rational const c = r[d];
        for (int i = 0; i <= n; ++i) r[d - n + i] -= c * f[i];
    }
    r.resize(static_cast<std::size_t>(n));
    return r;
}

}  // namespace

NumberField::NumberField(poly::ZPoly minimal_polynomial, Options options)
    : n_(poly::degree(minimal_polynomial)), minpoly_(std::move(minimal_polynomial)), options_(std::move(options)) {
    if (n_ < 1) throw InputError("minimal polynomial must have degree >= 1");
    if (minpoly_.back() != 1) throw InputError("minimal polynomial must be monic");
    if (poly::certify_irreducible(minpoly_) != poly::Irreducibility::irreducible)
        throw InputError("minimal polynomial is not (certifiably) irreducible over Q");

    auto const n = static_cast<std::size_t>(n_);
    if (options_.integral_basis) {
        basis_ = *options_.integral_basis;
        if (basis_.rows() != n || basis_.cols() != n)
            throw InputError("integral basis must be a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
        if (determinant(basis_) == 0) throw InputError("integral basis matrix is singular");
        basis_inverse_ = mfcong::inverse(basis_);
    } else {
        basis_ = RationalMatrix::identity(n);
        basis_inverse_ = basis_;
    }

    std::vector<Rational> unit(n);
    unit[0] = 1;
    one_ = row_times<Rational>(unit, basis_inverse_);
    for (auto const& c : one_)
        if (c.get_den() != 1) throw InputError("integral basis does not span a ring containing 1");

    table_.assign(n * n * n, Integer(0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<Rational> prod(2 * n - 1);
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) prod[a + b] += basis_(i, a) * basis_(j, b);
            std::vector<Rational> const red = reduce_mod(std::move(prod), minpoly_);
            std::vector<Rational> const coords = row_times<Rational>(red, basis_inverse_);
            for (std::size_t l = 0; l < n; ++l) {
                if (coords[l].get_den() != 1)
                    throw InputError("integral basis is not closed under multiplication");
                table_[(i * n + j) * n + l] = coords[l].get_num();
            }
        }
    }
}

FieldPtr NumberField::create(poly::ZPoly minimal_polynomial, Options options) {
    return std::make_shared<NumberField>(std::move(minimal_polynomial), std::move(options));
}

FieldPtr NumberField::rationals() {
    static FieldPtr const q = create(poly::ZPoly{Integer(0), Integer(1)}, Options{{}, "Q", 1, {}});
    return q;
}

FieldElement NumberField::zero() const {
    return FieldElement(shared_from_this(), std::vector<Rational>(static_cast<std::size_t>(n_)));
}

FieldElement NumberField::one() const { return FieldElement(shared_from_this(), one_); }

FieldElement NumberField::from_rational(Rational const& q) const {
    std::vector<Rational> c = one_;
    for (auto& x : c) x *= q;
    return FieldElement(shared_from_this(), std::move(c));
}

FieldElement NumberField::alpha() const {
    std::vector<Rational> pw(static_cast<std::size_t>(n_));
    if (n_ == 1) {
        pw[0] = -Rational(minpoly_[0]);
    } else {
        pw[1] = 1;
    }
    return from_power_basis(pw);
}

FieldElement NumberField::element(std::vector<Rational> coordinates) const {
    return FieldElement(shared_from_this(), std::move(coordinates));
}

FieldElement NumberField::from_power_basis(std::span<Rational const> power_coordinates) const {
    return FieldElement(shared_from_this(), row_times<Rational>(power_coordinates, basis_inverse_));
}

std::vector<Rational> NumberField::to_power_basis(FieldElement const& x) const {
    return row_times<Rational>(x.coordinates(), basis_);
}

bool same_field(FieldPtr const& a, FieldPtr const& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return a->minimal_polynomial() == b->minimal_polynomial() && a->basis() == b->basis();
}

/* ------------------------------------------------------------------ places */

PrimePlace::PrimePlace(std::int64_t p, int e, int f, FieldElement generator, FieldElement tau)
    : p_(p), e_(e), f_(f), generator_(std::move(generator)), tau_(std::move(tau)) {
    if (!same_field(generator_.field(), tau_.field())) throw FieldMismatch();
    NumberField const& k = *generator_.field();
    auto const n = static_cast<std::size_t>(k.degree());
    scaled_tau_ = IntegerMatrix(n, n);
    FieldElement const ptau = tau_ * Rational(p_);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<Rational> wj(n);
        wj[j] = 1;
        FieldElement const col = ptau * k.element(std::move(wj));
        for (std::size_t l = 0; l < n; ++l) {
            if (col[l].get_den() != 1) throw Error("p * tau is not integral");
            scaled_tau_(l, j) = col[l].get_num();
        }
    }
}

namespace {

FieldElement evaluate(poly::ZPoly const& g, FieldElement const& theta) {
    NumberField const& k = *theta.field();
    FieldElement acc = k.zero();
    for (std::size_t i = g.size(); i-- > 0;) acc = acc * theta + k.from_rational(Rational(g[i]));
    return acc;
}

bool less_coords(std::span<Rational const> a, std::span<Rational const> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void sort_places(std::vector<PrimePlace>& places) {
    std::sort(places.begin(), places.end(), [](PrimePlace const& a, PrimePlace const& b) {
        if (a.ramification_index() != b.ramification_index())
            return a.ramification_index() < b.ramification_index();
        if (a.residue_degree() != b.residue_degree()) return a.residue_degree() < b.residue_degree();
        return less_coords(a.generator().coordinates(), b.generator().coordinates());
    });
}

/* tau invariants: tau is not integral at p, tau * generator is (generator
 * being a uniformizer, this pins v_P(tau) = -1). */
bool tau_checks(PrimePlace const& place) {
    return !place.tau().is_integral_at(place.prime()) &&
           (place.tau() * place.generator()).is_integral_at(place.prime());
}

bool squarefree_over_q(poly::ZPoly const& g) {
    int tried = 0;
    for (std::int64_t q = 2; tried < 60; ++q) {
        if (!is_prime(q)) continue;
        ++tried;
        auto const gq = poly::reduce(g, static_cast<std::uint64_t>(q));
        if (poly::degree(gq) == poly::degree(g) && poly::is_squarefree_mod_p(gq, static_cast<std::uint64_t>(q)))
            return true;
    }
    return false;
}

/* Places over p read off from a p-maximal generator theta, or nullopt when
 * Dedekind's criterion fails for theta. */
std::optional<std::vector<PrimePlace>> places_from_generator(FieldElement const& theta, std::int64_t p) {
    NumberField const& k = *theta.field();
    int const n = k.degree();
    for (auto const& c : theta.coordinates())
        if (c.get_den() != 1) return std::nullopt;

    std::vector<Integer> mult(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (theta[i] == 0) continue;
            for (int l = 0; l < n; ++l) mult[static_cast<std::size_t>(l) * n + j] += theta[i].get_num() * k.structure_constant(i, j, l);
        }
    poly::ZPoly const g = poly::charpoly(mult, n);
    if (!squarefree_over_q(g)) return std::nullopt;

    auto const up = static_cast<std::uint64_t>(p);
    auto const factors = poly::factor_mod_p(poly::reduce(g, up), up);
    poly::ZPoly h{Integer(1)};
    for (auto const& fac : factors) h = poly::mul(h, poly::pow(poly::lift(fac.factor), fac.multiplicity));
    poly::ZPoly t = poly::sub(g, h);
    Integer const pz(static_cast<long>(p));
    for (auto& c : t) {
        if (!mpz_divisible_p(c.get_mpz_t(), pz.get_mpz_t())) throw InternalError("Dedekind: G - h not divisible by p");
        c /= pz;
    }
    poly::FpPoly const tbar = poly::reduce(t, up);

    std::vector<poly::ZPoly> gens;
    for (auto const& fac : factors) {
        bool const divides_t = poly::divides(fac.factor, tbar, up);
        if (divides_t && fac.multiplicity >= 2) return std::nullopt;
        poly::ZPoly gi = poly::lift(fac.factor);
        if (divides_t) gi[0] += pz;  // make v_P(g_i(theta)) = 1 at an unramified place
        gens.push_back(std::move(gi));
    }

    std::vector<PrimePlace> places;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        poly::ZPoly num = poly::pow(gens[i], factors[i].multiplicity - 1);
        for (std::size_t j = 0; j < factors.size(); ++j)
            if (j != i) num = poly::mul(num, poly::pow(gens[j], factors[j].multiplicity));
        FieldElement tau = evaluate(num, theta) * Rational(1, pz);
        places.emplace_back(p, factors[i].multiplicity, poly::degree(factors[i].factor), evaluate(gens[i], theta),
                            std::move(tau));
        if (!tau_checks(places.back())) throw InternalError("anti-uniformizer verification failed");
    }
    return places;
}

std::vector<PrimePlace> places_from_records(FieldPtr const& field, std::int64_t p) {
    std::vector<PrimePlace> places;
    for (auto const& rec : field->place_records()) {
        if (rec.p != p) continue;
        if (rec.e < 1 || rec.f < 1) throw InputError("place record with e or f < 1");
        try {
            places.emplace_back(p, rec.e, rec.f, field->element(rec.generator), field->element(rec.tau));
        } catch (InputError const&) {
            throw;
        } catch (Error const& ex) {
            throw InputError(std::string("place record: ") + ex.what());
        }
        if (!tau_checks(places.back())) throw InputError("place record: tau fails the anti-uniformizer checks");
    }
    return places;
}

void verify_places(std::vector<PrimePlace> const& places, FieldPtr const& field, std::int64_t p, bool from_input) {
    int total = 0;
    for (auto const& place : places) {
        total += place.ramification_index() * place.residue_degree();
        auto const v = valuation(field->from_rational(Rational(p)), place);
        if (!v || *v != place.ramification_index()) {
            std::string const msg = "v_P(p) = " + (v ? std::to_string(*v) : std::string("inf")) +
                                    " disagrees with e = " + std::to_string(place.ramification_index());
            if (from_input) throw InputError("place record: " + msg);
            throw InternalError(msg);
        }
    }
    if (total != field->degree()) {
        std::string const msg = "sum of e*f over places is " + std::to_string(total) + ", expected " +
                                std::to_string(field->degree());
        if (from_input) throw InputError("place records for p are incomplete: " + msg);
        throw InternalError(msg);
    }
}

}  // namespace

std::vector<PrimePlace> factor_prime(FieldPtr const& field, std::int64_t p) {
    if (!is_prime(p) || p >= (std::int64_t{1} << 31)) throw InputError("p must be a prime below 2^31");
    bool const has_records = std::any_of(field->place_records().begin(), field->place_records().end(),
                                         [p](PlaceRecord const& r) { return r.p == p; });
    if (has_records) {
        auto places = places_from_records(field, p);
        verify_places(places, field, p, true);
        sort_places(places);
        return places;
    }

    int const n = field->degree();
    std::vector<FieldElement> candidates{field->alpha()};
    for (int i = 1; i < n; ++i) {
        std::vector<Rational> c(static_cast<std::size_t>(n));
        c[i] = 1;
        candidates.push_back(field->element(std::move(c)));
    }
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    std::uniform_int_distribution<int> coef(-3, 3);
    for (int t = 0; t < 400; ++t) {
        std::vector<Rational> c(static_cast<std::size_t>(n));
        for (int i = 1; i < n; ++i) c[i] = coef(rng);
        candidates.push_back(field->element(std::move(c)));
    }

    for (auto const& theta : candidates) {
        auto places = places_from_generator(theta, p);
        if (!places) continue;
        verify_places(*places, field, p, false);
        sort_places(*places);
        return std::move(*places);
    }
    throw IndexDivisible(p);
}

/* -------------------------------------------------------------- valuations */

std::int64_t capped_valuation(FieldElement const& x, PrimePlace const& place, std::int64_t cap) {
    if (!same_field(x.field(), place.field())) throw FieldMismatch();
    if (x.is_zero()) return cap;
    std::int64_t const p = place.prime();
    std::int64_t const e = place.ramification_index();
    Integer const pz(static_cast<long>(p));

    Integer num_gcd = 0;
    Integer den_lcm = 1;
    for (auto const& c : x.coordinates()) {
        if (c == 0) continue;
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
    }
    std::int64_t w = e * (vp(num_gcd, p) - vp(den_lcm, p));
    if (w >= cap) return cap;

    auto const n = x.size();
    std::vector<Integer> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        Integer t = x[i].get_num() * (den_lcm / x[i].get_den());
        mpz_divexact(v[i].get_mpz_t(), t.get_mpz_t(), num_gcd.get_mpz_t());
    }

    IntegerMatrix const& a = place.scaled_tau_matrix();
    std::vector<Integer> y(n);
    while (w < cap) {
        for (std::size_t l = 0; l < n; ++l) {
            y[l] = 0;
            for (std::size_t j = 0; j < n; ++j)
                if (v[j] != 0 && a(l, j) != 0) mpz_addmul(y[l].get_mpz_t(), a(l, j).get_mpz_t(), v[j].get_mpz_t());
        }
        bool divisible = true;
        for (std::size_t l = 0; l < n && divisible; ++l)
            divisible = mpz_divisible_p(y[l].get_mpz_t(), pz.get_mpz_t()) != 0;
        if (!divisible) break;
        ++w;
        Integer g = 0;
        for (std::size_t l = 0; l < n; ++l) {
            mpz_divexact(v[l].get_mpz_t(), y[l].get_mpz_t(), pz.get_mpz_t());
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v[l].get_mpz_t());
        }
        if (g != 1) {
            w += e * vp(g, p);
            for (auto& c : v) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
        }
    }
    return std::min(w, cap);
}

Valuation valuation(FieldElement const& x, PrimePlace const& place) {
    if (!same_field(x.field(), place.field())) throw FieldMismatch();
    if (x.is_zero()) return std::nullopt;
    return capped_valuation(x, place, std::numeric_limits<std::int64_t>::max());
}

bool congruent(FieldElement const& x, FieldElement const& y, PrimePlace const& place, std::int64_t a) {
    return capped_valuation(x - y, place, a) >= a;
}

}  // namespace mfcong
