#pragma once

// Oracle constraint systems for the generator actions, written out as
// explicit relation rows over the beta basis b0 b1 b2 b01 b02 b10 b12 b20
// b21 b012.  The derivation code never reads these; tests compare its
// mechanically computed systems against them as row spaces.

#include <vector>

#include "ab13/heis_actions.hpp"

namespace ab13::testsupport {

template <class F>
ConstraintSystem<F> make_fixture(const F& field,
                                 const std::vector<std::vector<typename F::Elem>>& rows) {
    std::vector<std::string> names;
    for (const char* n : beta_names()) names.push_back(n);
    return detail::reduce_system(field, std::move(names), rows);
}

// sigma with twist a: the three xi^a-chains b0 -> b1 -> b2, b01 -> b12 ->
// b20, b02 -> b10 -> b21, and (1 - xi^a) b012.
template <class F>
ConstraintSystem<F> sigma_chain_system(const F& field, int a) {
    auto xa = xi_pow(field, a);
    auto zero = field.zero();
    auto one = field.one();
    std::vector<std::vector<typename F::Elem>> rows;
    auto chain = [&](std::size_t i, std::size_t j) {
        std::vector<typename F::Elem> r(10, zero);
        r[i] = one;
        r[j] = -xa;
        rows.push_back(r);
    };
    chain(0, 1);  // b0 = xi^a b1
    chain(1, 2);  // b1 = xi^a b2
    chain(3, 6);  // b01 = xi^a b12
    chain(6, 7);  // b12 = xi^a b20
    chain(4, 5);  // b02 = xi^a b10
    chain(5, 8);  // b10 = xi^a b21
    std::vector<typename F::Elem> fix(10, zero);
    fix[9] = one - xa;  // b012 = xi^a b012
    rows.push_back(fix);
    return make_fixture(field, rows);
}

// iota with sign (-1)^b: conjugate-index pairs b1 <-> b2, b01 <-> b02,
// b12 <-> b21, b20 <-> b10, and the self-paired b0, b012.
template <class F>
ConstraintSystem<F> iota_pairing_system(const F& field, int b) {
    auto s = detail::mod2(b) == 0 ? field.one() : -field.one();
    auto zero = field.zero();
    auto one = field.one();
    std::vector<std::vector<typename F::Elem>> rows;
    auto pair = [&](std::size_t i, std::size_t j) {
        std::vector<typename F::Elem> r(10, zero);
        r[i] = one;
        r[j] = r[j] - s;  // i == j for the self-paired parameters
        rows.push_back(r);
    };
    pair(1, 2);  // b1 = s b2
    pair(3, 4);  // b01 = s b02
    pair(6, 8);  // b12 = s b21
    pair(7, 5);  // b20 = s b10
    pair(0, 0);  // b0 = s b0
    pair(9, 9);  // b012 = s b012
    return make_fixture(field, rows);
}

// A variant reproducing one published form of the involution system, which
// pairs b20 with b02 instead of b10 and omits the b0 self-pairing; kept as a
// negative control for the derivation.
template <class F>
ConstraintSystem<F> iota_pairing_variant(const F& field, int b) {
    auto s = detail::mod2(b) == 0 ? field.one() : -field.one();
    auto zero = field.zero();
    auto one = field.one();
    std::vector<std::vector<typename F::Elem>> rows;
    auto pair = [&](std::size_t i, std::size_t j) {
        std::vector<typename F::Elem> r(10, zero);
        r[i] = one;
        r[j] = r[j] - s;
        rows.push_back(r);
    };
    pair(1, 2);
    pair(3, 4);
    pair(6, 8);
    pair(7, 4);  // b20 = s b02
    pair(9, 9);
    return make_fixture(field, rows);
}

// tau scales b_jk by xi^{2j+k}; with twist c only the class of weight -c
// survives and every other parameter vanishes.
inline const std::array<int, 10>& beta_tau_weights() {
    static const std::array<int, 10> w = {0, 0, 0, 1, 2, 2, 1, 1, 2, 0};
    return w;
}

template <class F>
ConstraintSystem<F> tau_weight_system(const F& field, int c) {
    auto zero = field.zero();
    auto one = field.one();
    std::vector<std::vector<typename F::Elem>> rows;
    for (std::size_t i = 0; i < 10; ++i) {
        if ((beta_tau_weights()[i] + detail::mod3(c)) % 3 == 0) continue;
        std::vector<typename F::Elem> r(10, zero);
        r[i] = one;
        rows.push_back(r);
    }
    return make_fixture(field, rows);
}

// Variant with the two twisted survivor classes exchanged (weight +c instead
// of -c), matching one published table; a negative control for c != 0.
template <class F>
ConstraintSystem<F> tau_weight_variant(const F& field, int c) {
    auto zero = field.zero();
    auto one = field.one();
    std::vector<std::vector<typename F::Elem>> rows;
    for (std::size_t i = 0; i < 10; ++i) {
        if (detail::mod3(beta_tau_weights()[i] - c) == 0) continue;
        std::vector<typename F::Elem> r(10, zero);
        r[i] = one;
        rows.push_back(r);
    }
    return make_fixture(field, rows);
}

}  // namespace ab13::testsupport
