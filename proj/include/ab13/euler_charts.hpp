// Graded ambient rings for presented bundles over the projective plane:
// Euler-sequence presentations, their affine trivialization charts, the
// transition substitutions between charts, and the unprojection variable t
// for the two-copy presentation.
//
// A presentation is generators (fiber variables with weights) plus a matrix
// M whose columns give the linear relations ybar*M = 0. Only Euler-type
// presentations are constructed here, but trivialize/transition work for any
// presentation whose relations are linear in the fiber variables.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ab13/errors.hpp"
#include "ab13/linalg.hpp"
#include "ab13/poly.hpp"

namespace ab13 {

template <class F>
struct Presentation {
    using P = Poly<F>;
    typename P::CtxPtr ctx;             // x0,x1,x2 plus all fiber generators
    std::vector<std::string> fiber;     // generator names, in row order of M
    PMat<P> matrix;                     // |fiber| x |relations|, entries in x only
    std::vector<P> relations;           // ybar * M, expanded
    long twist = 0;
    int copies = 1;
};

template <class F>
struct Chart {
    using P = Poly<F>;
    typename P::CtxPtr ctx;             // x vars (one inverted) + surviving basis
    std::size_t inverted_x = 2;         // 0, 1 or 2
    std::vector<std::string> basis;     // surviving fiber variables
    std::vector<P> back_map;            // one entry per presentation fiber var
};

// Result of eliminating t from the two-copy presentation: on the chart with
// x_k inverted, wedge[k] = t * x_k holds exactly, with wedge the displayed
// cross-product vector (y1z2-y2z1, y2z0-y0z2, y0z1-y1z0).
template <class F>
struct UnprojectionT {
    Poly<F> t;
    int sign = +1;  // wedge[k] == sign * t * x_k on the chart
};

template <class F>
Presentation<F> build_euler_ring(const F& field, long m, int copies) {
    if (m < 0) throw input_error("twist must be >= 0");
    if (copies != 1 && copies != 2) throw input_error("copies must be 1 or 2");
    if (copies == 2 && m != 0) throw input_error("two-copy presentation requires twist 0");

    using P = Poly<F>;
    std::vector<VarInfo> vars = {{"x0", 1}, {"x1", 1}, {"x2", 1}};
    std::vector<std::string> fiber;
    for (int i = 0; i < 3; ++i) {
        vars.push_back({"y" + std::to_string(i), m + 2});
        fiber.push_back("y" + std::to_string(i));
    }
    if (copies == 2) {
        for (int i = 0; i < 3; ++i) {
            vars.push_back({"z" + std::to_string(i), 2});
            fiber.push_back("z" + std::to_string(i));
        }
    }
    auto ctx = Context<F>::make(field, vars);

    std::size_t nrel = static_cast<std::size_t>(copies);
    PMat<P> M(fiber.size(), std::vector<P>(nrel, P::zero(ctx)));
    for (int c = 0; c < copies; ++c)
        for (int i = 0; i < 3; ++i) M[3 * c + i][c] = P::variable(ctx, "x" + std::to_string(i));

    std::vector<P> rels;
    for (std::size_t j = 0; j < nrel; ++j) {
        P r = P::zero(ctx);
        for (std::size_t g = 0; g < fiber.size(); ++g)
            r = r + P::variable(ctx, fiber[g]) * M[g][j];
        if (!r.homogeneous_degree()) throw error("inhomogeneous presentation relation");
        rels.push_back(r);
    }

    return Presentation<F>{ctx, fiber, std::move(M), std::move(rels), m, copies};
}

template <class F>
Chart<F> trivialize(const Presentation<F>& p, std::string_view inverted) {
    using P = Poly<F>;
    auto inv_idx = p.ctx->index_of(inverted);
    if (inv_idx > 2) throw input_error("chart variable must be one of x0,x1,x2");

    // Working context: all presentation variables, with the chosen x inverted.
    auto work = Context<F>::make(p.ctx->field, p.ctx->vars, std::string(inverted));

    std::vector<std::optional<P>> eliminated(p.fiber.size());
    auto fiber_index = [&](std::size_t ctx_var) -> std::optional<std::size_t> {
        for (std::size_t g = 0; g < p.fiber.size(); ++g)
            if (p.ctx->vars[3 + g].name == work->vars[ctx_var].name && ctx_var == 3 + g) return g;
        return std::nullopt;
    };

    for (const auto& rel0 : p.relations) {
        P rel = rel0.rename_into(work);
        // Substitute the eliminations found so far.
        std::vector<P> images;
        for (std::size_t v = 0; v < work->vars.size(); ++v) {
            auto g = fiber_index(v);
            if (g && eliminated[*g]) images.push_back(*eliminated[*g]);
            else images.push_back(P::variable(work, v));
        }
        rel = rel.subst(work, images);
        if (rel.is_zero()) continue;

        // Coefficient of each still-free fiber variable; the relation must be
        // linear in the fiber variables for this elimination to make sense.
        std::vector<char> subset(work->vars.size(), 0);
        for (std::size_t g = 0; g < p.fiber.size(); ++g) subset[3 + g] = 1;
        auto groups = rel.split(subset);

        std::optional<std::size_t> pivot;      // fiber index to eliminate
        P pivot_coeff = P::zero(work);
        P rest = P::zero(work);
        std::vector<std::pair<std::size_t, P>> linear_parts;
        for (const auto& [key, cof] : groups) {
            int total = 0;
            std::optional<std::size_t> which;
            for (std::size_t v = 0; v < work->vars.size(); ++v) {
                total += key[v] < 0 ? 2 : key[v];
                if (key[v] == 1) which = v;
            }
            if (total == 0) { rest = rest + cof; continue; }
            if (total != 1) throw error("relation not linear in fiber variables");
            auto g = fiber_index(*which);
            linear_parts.push_back({*g, cof});
        }
        // Pivot rule: smallest fiber row whose coefficient involves the
        // inverted variable and is a unit in the localized ring; fall back to
        // the smallest row with any unit coefficient.
        std::sort(linear_parts.begin(), linear_parts.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (bool require_inverted : {true, false}) {
            if (pivot) break;
            for (const auto& [g, cof] : linear_parts) {
                if (!cof.unit_inverse()) continue;
                if (require_inverted && cof.degree_in(inv_idx) == 0 && cof.min_degree_in(inv_idx) == 0)
                    continue;
                pivot = g;
                pivot_coeff = cof;
                break;
            }
        }
        if (!pivot) throw verify_error("trivialization failed: no unit pivot", rel.str());

        P expr = rest;
        for (const auto& [g, cof] : linear_parts) {
            if (g == *pivot) continue;
            expr = expr + cof * P::variable(work, 3 + g);
        }
        eliminated[*pivot] = -(expr * *pivot_coeff.unit_inverse());
    }

    // Final chart context: x vars plus surviving fiber variables.
    std::vector<VarInfo> cvars = {p.ctx->vars[0], p.ctx->vars[1], p.ctx->vars[2]};
    std::vector<std::string> basis;
    for (std::size_t g = 0; g < p.fiber.size(); ++g) {
        if (!eliminated[g]) {
            cvars.push_back(p.ctx->vars[3 + g]);
            basis.push_back(p.fiber[g]);
        }
    }
    auto cctx = Context<F>::make(p.ctx->field, cvars, std::string(inverted));

    std::vector<P> back;
    for (std::size_t g = 0; g < p.fiber.size(); ++g) {
        if (eliminated[g]) back.push_back(eliminated[g]->rename_into(cctx));
        else back.push_back(P::variable(cctx, p.fiber[g]));
    }

    // Every relation must vanish identically under the back map.
    Chart<F> chart{cctx, inv_idx, std::move(basis), std::move(back)};
    for (const auto& rel : p.relations) {
        std::vector<P> images;
        for (std::size_t v = 0; v < p.ctx->vars.size(); ++v) {
            if (v < 3) images.push_back(P::variable(cctx, p.ctx->vars[v].name));
            else images.push_back(chart.back_map[v - 3]);
        }
        if (!rel.subst(cctx, images).is_zero())
            throw verify_error("chart back map does not satisfy the relations", rel.str());
    }
    return chart;
}

// Substitution rewriting a polynomial on chart `to` into chart `from`
// coordinates: images are indexed by the variables of to.ctx and live in
// from.ctx.
template <class F>
std::vector<Poly<F>> transition(const Presentation<F>& p, const Chart<F>& from, const Chart<F>& to) {
    using P = Poly<F>;
    std::vector<P> images;
    for (const auto& v : to.ctx->vars) {
        if (auto g = [&]() -> std::optional<std::size_t> {
                for (std::size_t i = 0; i < p.fiber.size(); ++i)
                    if (p.fiber[i] == v.name) return i;
                return std::nullopt;
            }()) {
            images.push_back(from.back_map[*g]);
        } else {
            images.push_back(P::variable(from.ctx, v.name));
        }
    }
    return images;
}

// Transport a chart polynomial to another chart. The source chart's inverted
// variable is a plain variable on the target, so the denominator is cleared
// first: the result is (image of q * x_from^k, k) with k minimal. Identities
// between charts are checked in this cross-multiplied form.
template <class F>
std::pair<Poly<F>, long> transport_cleared(const Presentation<F>& p, const Chart<F>& from,
                                           const Chart<F>& to, const Poly<F>& q) {
    long k = std::max<long>(0, -q.min_degree_in(from.inverted_x));
    auto cleared = q.shifted(from.inverted_x, k);
    return {cleared.subst(to.ctx, transition(p, to, from)), k};
}

template <class F>
UnprojectionT<F> unprojection_t(const Presentation<F>& p, const Chart<F>& chart) {
    using P = Poly<F>;
    if (p.copies != 2) throw input_error("unprojection requires the two-copy presentation");
    auto y = [&](int i) { return chart.back_map[i]; };
    auto z = [&](int i) { return chart.back_map[3 + i]; };
    std::vector<P> wedge = {y(1) * z(2) - y(2) * z(1), y(2) * z(0) - y(0) * z(2),
                            y(0) * z(1) - y(1) * z(0)};
    P xk = P::variable(chart.ctx, chart.inverted_x);
    P t = exact_divide(wedge[chart.inverted_x], xk);
    // The Cramer identity makes every coordinate of the wedge vector a
    // multiple of the matching x on the chart, with the same quotient.
    for (int j = 0; j < 3; ++j) {
        if (wedge[j] != t * P::variable(chart.ctx, static_cast<std::size_t>(j)))
            throw verify_error("wedge vector is not proportional to x on the chart",
                               wedge[j].str());
    }
    auto deg = t.homogeneous_degree();
    if (!deg || *deg != 3) throw verify_error("unprojection variable has unexpected degree", t.str());
    return UnprojectionT<F>{std::move(t), +1};
}

}  // namespace ab13
