#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "mfcong/numberfield.hpp"

namespace mfcong {

/* (Z/M)^x with its canonical generators: for each odd prime power q^a || M the
 * smallest primitive root mod q^a, for 4 || M the class of -1, for 2^a || M
 * with a >= 3 the classes of -1 and 5. Each generator is lifted by CRT to be
 * 1 modulo the rest of M. */
class UnitGroup {
  public:
    explicit UnitGroup(std::int64_t modulus);

    std::int64_t modulus() const { return modulus_; }
    std::vector<std::int64_t> const& generators() const { return generators_; }
    std::vector<std::int64_t> const& orders() const { return orders_; }
    /* Exponents e with n = prod g_i^{e_i} mod M; n must be a unit. */
    std::vector<std::int64_t> log(std::int64_t n) const;

  private:
    struct Component {
        std::int64_t prime_power;
        std::int64_t base;                   // primitive root, or 5 for 2^a with a >= 3
        std::vector<std::int64_t> log_table;  // residue -> exponent, -1 when not in <base> (or not a unit)
        bool two_power;
    };
    std::int64_t modulus_;
    std::vector<std::int64_t> generators_;
    std::vector<std::int64_t> orders_;
    std::vector<Component> components_;
};

/* A Dirichlet character mod M with values in K, given on the canonical
 * generators. Claimed values are verified to be roots of unity of the right
 * order at construction. */
class DirichletCharacter {
  public:
    DirichletCharacter(FieldPtr field, std::int64_t modulus, std::vector<FieldElement> generator_values);
    static DirichletCharacter trivial(FieldPtr const& field, std::int64_t modulus = 1);

    std::int64_t modulus() const { return group_->modulus(); }
    FieldPtr const& field() const { return field_; }
    UnitGroup const& group() const { return *group_; }
    std::vector<FieldElement> const& values() const { return values_; }
    /* Exact orders of the generator values, and their lcm. */
    std::vector<std::int64_t> const& value_orders() const { return value_orders_; }
    std::int64_t order() const { return order_; }
    bool is_trivial() const { return order_ == 1; }

    /* chi(n); throws Error when gcd(n, M) > 1. */
    FieldElement operator()(std::int64_t n) const;

    /* The same character viewed modulo a multiple of M. */
    DirichletCharacter lift(std::int64_t new_modulus) const;
    /* Coefficients of a character over Q embedded into K. */
    DirichletCharacter embed(FieldPtr const& field) const;

  private:
    FieldPtr field_;
    std::shared_ptr<UnitGroup const> group_;
    std::vector<FieldElement> values_;
    std::vector<std::int64_t> value_orders_;
    std::int64_t order_ = 1;
};

bool operator==(DirichletCharacter const& a, DirichletCharacter const& b);

DirichletCharacter product_char(DirichletCharacter const& a, DirichletCharacter const& b);
/* psi2 * psi1^{-1} on the lcm of the moduli. */
DirichletCharacter quotient_char(DirichletCharacter const& psi2, DirichletCharacter const& psi1);

/* With M = p^a * M0 and p not dividing M0: the component of chi modulo p^a,
 * and the component modulo M0. */
DirichletCharacter p_part(DirichletCharacter const& chi, std::int64_t p);
DirichletCharacter prime_to_p_part(DirichletCharacter const& chi, std::int64_t p);

struct ReducedOrder {
    int delta = 0;
    std::int64_t d = 1;
    /* d does not divide p - 1: the character-order necessity condition fails for every weight pair. */
    bool necessity_refuted = false;
};

/* Order of chi mod P^m, written p^delta * d with p not dividing d. */
ReducedOrder reduced_order(DirichletCharacter const& chi, PrimePlace const& place, std::int64_t m);

}  // namespace mfcong
