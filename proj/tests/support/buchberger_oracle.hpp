// Minimal Buchberger engine for zero-dimensional specialised ideals: the
// independent route for fiber dimensions and normal forms.  The ambient
// context must give every variable weight one, so the built-in term order is
// graded-lex and leading() picks the graded-lex leading term.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ab13/errors.hpp"
#include "ab13/poly.hpp"

namespace ab13_test {

template <class F>
bool mono_divides(const ab13::Mono& d, const ab13::Mono& m) {
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] > m[i]) return false;
    return true;
}

template <class F>
ab13::Poly<F> normal_form(const std::vector<ab13::Poly<F>>& basis, ab13::Poly<F> p) {
    using P = ab13::Poly<F>;
    auto ctx = p.ctx();
    P r = P::zero(ctx);
    while (!p.is_zero()) {
        auto [m, c] = p.leading();
        bool reduced = false;
        for (const auto& g : basis) {
            auto [gm, gc] = g.leading();
            if (!mono_divides<F>(gm, m)) continue;
            p = p - g * P::term(ctx, m.div(gm), c / gc);
            reduced = true;
            break;
        }
        if (!reduced) {
            P t = P::term(ctx, m, c);
            r = r + t;
            p = p - t;
        }
    }
    return r;
}

template <class F>
std::vector<ab13::Poly<F>> buchberger(const std::vector<ab13::Poly<F>>& gens) {
    using P = ab13::Poly<F>;
    if (gens.empty()) throw ab13::input_error("empty generating set");
    auto ctx = gens[0].ctx();
    std::vector<P> basis;
    for (const auto& g : gens)
        if (!g.is_zero()) basis.push_back(g);

    std::vector<std::pair<std::size_t, std::size_t>> queue;
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j) queue.push_back({i, j});

    while (!queue.empty()) {
        auto [i, j] = queue.back();
        queue.pop_back();
        auto [mi, ci] = basis[i].leading();
        auto [mj, cj] = basis[j].leading();
        ab13::Mono lcm(mi.size());
        bool coprime = true;
        for (std::size_t v = 0; v < mi.size(); ++v) {
            lcm[v] = std::max(mi[v], mj[v]);
            if (mi[v] > 0 && mj[v] > 0) coprime = false;
        }
        if (coprime) continue;
        P s = basis[i] * P::term(ctx, lcm.div(mi), ctx->field.one() / ci) -
              basis[j] * P::term(ctx, lcm.div(mj), ctx->field.one() / cj);
        P r = normal_form(basis, s);
        if (r.is_zero()) continue;
        auto [rm, rc] = r.leading();
        basis.push_back(r.scaled(ctx->field.one() / rc));
        for (std::size_t k = 0; k + 1 < basis.size(); ++k) queue.push_back({k, basis.size() - 1});
    }
    return basis;
}

// Monomials not divisible by any basis lead, enumerated by total degree.
// The set is an order ideal, so a degree with no survivors ends the search;
// the cap guards against accidentally positive-dimensional input.
template <class F>
std::vector<ab13::Mono> standard_monomials(const std::vector<ab13::Poly<F>>& basis,
                                           std::size_t cap = 64) {
    if (basis.empty()) throw ab13::input_error("empty basis");
    std::size_t nvars = basis[0].ctx()->vars.size();
    std::vector<ab13::Mono> leads;
    for (const auto& g : basis) leads.push_back(g.leading().first);

    std::vector<ab13::Mono> standard;
    std::vector<ab13::Mono> level = {ab13::Mono(nvars)};
    while (!level.empty()) {
        std::vector<ab13::Mono> next;
        for (const auto& m : level) {
            bool divisible = false;
            for (const auto& l : leads)
                if (mono_divides<F>(l, m)) { divisible = true; break; }
            if (divisible) continue;
            standard.push_back(m);
            if (standard.size() > cap)
                throw ab13::verify_error("standard monomial count exceeds the cap",
                                         std::to_string(cap));
            for (std::size_t v = 0; v < nvars; ++v) {
                ab13::Mono e = m;
                e[v] += 1;
                bool seen = false;
                for (const auto& u : next)
                    if (u == e) { seen = true; break; }
                if (!seen) next.push_back(e);
            }
        }
        level = std::move(next);
    }
    return standard;
}

}  // namespace ab13_test
