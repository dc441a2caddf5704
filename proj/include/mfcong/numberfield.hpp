#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mfcong/arith.hpp"
#include "mfcong/matrix.hpp"
#include "mfcong/poly.hpp"

namespace mfcong {

class NumberField;
using FieldPtr = std::shared_ptr<NumberField const>;

/* An element of K = Q[x]/(F), stored as exact rational coordinates with
 * respect to the field's stored basis (integral basis, or the power basis). */
class FieldElement {
  public:
    FieldElement() = default;
    FieldElement(FieldPtr field, std::vector<Rational> coordinates);

    FieldPtr const& field() const { return field_; }
    std::span<Rational const> coordinates() const { return coords_; }
    Rational const& operator[](std::size_t i) const { return coords_[i]; }
    std::size_t size() const { return coords_.size(); }

    bool is_zero() const;
    /* True iff every coordinate denominator is prime to p. */
    bool is_integral_at(std::int64_t p) const;

    FieldElement pow(std::uint64_t k) const;
    FieldElement inverse() const;

    FieldElement& operator+=(FieldElement const& b);
    FieldElement& operator-=(FieldElement const& b);
    FieldElement& operator*=(Rational const& c);

    friend FieldElement operator+(FieldElement a, FieldElement const& b) { return a += b; }
    friend FieldElement operator-(FieldElement a, FieldElement const& b) { return a -= b; }
    friend FieldElement operator-(FieldElement a) { return a *= Rational(-1); }
    friend FieldElement operator*(FieldElement a, Rational const& c) { return a *= c; }
    friend FieldElement operator*(FieldElement const& a, FieldElement const& b);
    friend bool operator==(FieldElement const& a, FieldElement const& b);

  private:
    FieldPtr field_;
    std::vector<Rational> coords_;
};

/* Explicit place data for primes where Dedekind's criterion cannot be used. */
struct PlaceRecord {
    std::int64_t p = 0;
    int e = 0;
    int f = 0;
    std::vector<Rational> generator;
    std::vector<Rational> tau;
};

/* A prime P = (p, generator) of K over p, with an anti-uniformizer tau:
 * v_P(tau) = -1 and tau integral at every other place over p. */
class PrimePlace {
  public:
    PrimePlace(std::int64_t p, int e, int f, FieldElement generator, FieldElement tau);

    std::int64_t prime() const { return p_; }
    int ramification_index() const { return e_; }
    int residue_degree() const { return f_; }
    FieldElement const& generator() const { return generator_; }
    FieldElement const& tau() const { return tau_; }
    FieldPtr const& field() const { return generator_.field(); }

    /* p * (multiplication by tau), acting on basis coordinate columns. */
    IntegerMatrix const& scaled_tau_matrix() const { return scaled_tau_; }

  private:
    std::int64_t p_;
    int e_;
    int f_;
    FieldElement generator_;
    FieldElement tau_;
    IntegerMatrix scaled_tau_;
};

class NumberField : public std::enable_shared_from_this<NumberField> {
  public:
    struct Options {
        std::optional<RationalMatrix> integral_basis;  // row i = omega_i in power-basis coordinates
        std::string name;
        std::optional<std::int64_t> galois_closure_degree;
        std::vector<PlaceRecord> places;
    };

    /* Validates the polynomial (monic, irreducible) and the basis (nonsingular,
     * closed under multiplication, contains 1). Throws InputError otherwise. */
    static FieldPtr create(poly::ZPoly minimal_polynomial, Options options = {});
    static FieldPtr rationals();

    int degree() const { return n_; }
    poly::ZPoly const& minimal_polynomial() const { return minpoly_; }
    std::string const& name() const { return options_.name; }
    bool has_power_basis() const { return !options_.integral_basis.has_value(); }
    RationalMatrix const& basis() const { return basis_; }
    std::optional<std::int64_t> galois_closure_degree() const { return options_.galois_closure_degree; }
    std::vector<PlaceRecord> const& place_records() const { return options_.places; }

    FieldElement zero() const;
    FieldElement one() const;
    FieldElement from_rational(Rational const& q) const;
    /* The root alpha of the minimal polynomial. */
    FieldElement alpha() const;
    FieldElement element(std::vector<Rational> coordinates) const;
    FieldElement from_power_basis(std::span<Rational const> power_coordinates) const;
    std::vector<Rational> to_power_basis(FieldElement const& x) const;

    /* omega_i * omega_j = sum_k c(i,j,k) omega_k, integral because the basis spans an order. */
    Integer const& structure_constant(int i, int j, int k) const {
        return table_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k];
    }
    std::span<Rational const> one_coordinates() const { return one_; }

    NumberField(poly::ZPoly minimal_polynomial, Options options);

  private:
    int n_;
    poly::ZPoly minpoly_;
    Options options_;
    RationalMatrix basis_;
    RationalMatrix basis_inverse_;
    std::vector<Integer> table_;
    std::vector<Rational> one_;
};

bool same_field(FieldPtr const& a, FieldPtr const& b);

/* All places of K over p, sorted by (e, f, generator coordinates). */
std::vector<PrimePlace> factor_prime(FieldPtr const& field, std::int64_t p);

/* v_P(x); std::nullopt stands for +infinity (x = 0). */
using Valuation = std::optional<std::int64_t>;

Valuation valuation(FieldElement const& x, PrimePlace const& place);
/* min(v_P(x), cap) without computing past the cap. */
std::int64_t capped_valuation(FieldElement const& x, PrimePlace const& place, std::int64_t cap);
bool congruent(FieldElement const& x, FieldElement const& y, PrimePlace const& place, std::int64_t a);

}  // namespace mfcong
