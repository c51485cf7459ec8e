// Graded coordinate rings of (1,3)-polarised abelian surfaces on the affine
// charts of the plane: nine generators coupling the quadratic fiber monomials
// to a 9x4 block matrix built from a chain of four covers, plus the quartic
// tails closing the multiplication.  Companion checks: the admissibility
// equation on the parameter pair, equivariance under the untwisted Heisenberg
// substitutions, degree-six fiber algebras with their trace form, exact
// branch-locus scans along lines, and the weight-(2,3) irregular variant.
#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ab13/errors.hpp"
#include "ab13/euler_charts.hpp"
#include "ab13/heis_actions.hpp"
#include "ab13/linalg.hpp"
#include "ab13/poly.hpp"
#include "ab13/triple_cover.hpp"

namespace ab13 {

// Left-hand side of the admissibility equation coupling the two parameter
// vectors: 3 a0 b3 - a1 b2 + a2 b1 - 3 a3 b0.  Generic so it can be evaluated
// on field elements or on polynomials with symbolic entries.
template <class T>
T check_moduli_equation(const std::array<T, 4>& a, const std::array<T, 4>& b) {
    auto triple = [](const T& t) { return t + t + t; };
    return triple(a[0] * b[3]) - a[1] * b[2] + a[2] * b[1] - triple(a[3] * b[0]);
}

template <class F>
struct SurfaceParams {
    F field;
    std::array<typename F::Elem, 4> alpha;
    std::array<typename F::Elem, 4> beta;
};

template <class F>
SurfaceParams<F> surface_params(const F& field, const std::array<long, 4>& alpha,
                                const std::array<long, 4>& beta) {
    SurfaceParams<F> p{field, {}, {}};
    for (int i = 0; i < 4; ++i) {
        p.alpha[i] = field.from_int(alpha[i]);
        p.beta[i] = field.from_int(beta[i]);
    }
    return p;
}

// A chart presentation of the graded ring.  The context holds x0,x1,x2 of
// weight one with the chart variable inverted, then the four surviving fiber
// variables y_a,y_b,z_a,z_b (weights 2,2 for abelian surfaces, 2,3 for the
// irregular family).  Generator k couples the k-th quadratic fiber monomial
// with the k-th row of the coupling matrix and the k-th quartic tail.
template <class F>
struct GradedIdeal {
    using P = Poly<F>;
    typename P::CtxPtr ctx;
    int chart = 2;
    std::array<std::size_t, 2> basis{0, 1};  // cover indices {a,b} alive on the chart
    std::array<std::size_t, 4> wvar{};       // context indices of y_a, y_b, z_a, z_b
    std::array<P, 9> gens;
    std::array<std::array<P, 4>, 4> c;       // coefficient table c[i][j], in x only
    std::optional<SurfaceParams<F>> params;
};

namespace detail {

// Rows of the 9x4 coupling matrix in block form [[C1,C0],[-C2,-C1],[C3,C2]];
// block Ci contributes the row pattern (ci1, ci0), (-ci2, -ci1), (ci3, ci2).
template <class F>
std::array<std::array<Poly<F>, 4>, 9> coupling_rows(const std::array<std::array<Poly<F>, 4>, 4>& c) {
    using A = std::array<Poly<F>, 4>;
    auto blocks = [&](int left, int right, bool neg) -> std::array<A, 3> {
        const auto& l = c[static_cast<std::size_t>(left)];
        const auto& r = c[static_cast<std::size_t>(right)];
        if (neg) {
            return {A{-l[1], -l[0], -r[1], -r[0]},  //
                    A{l[2], l[1], r[2], r[1]},      //
                    A{-l[3], -l[2], -r[3], -r[2]}};
        }
        return {A{l[1], l[0], r[1], r[0]},      //
                A{-l[2], -l[1], -r[2], -r[1]},  //
                A{l[3], l[2], r[3], r[2]}};
    };
    auto top = blocks(1, 0, false);
    auto mid = blocks(2, 1, true);
    auto bot = blocks(3, 2, false);
    return {top[0], top[1], top[2], mid[0], mid[1], mid[2], bot[0], bot[1], bot[2]};
}

// The quartic tails, as fixed polynomial expressions in the sixteen entries
// of the coefficient table.
template <class F>
std::array<Poly<F>, 9> d_vector(const std::array<std::array<Poly<F>, 4>, 4>& c) {
    using P = Poly<F>;
    auto ctx = c[1][1].ctx();
    const auto& field = ctx->field;
    auto n = [&](long k) { return P::from_int(ctx, k); };
    P half = P::constant(ctx, field.from_fraction(1, 2));
    const auto& c0 = c[0];
    const auto& c1 = c[1];
    const auto& c2 = c[2];
    const auto& c3 = c[3];
    return {
        n(-2) * c1[1] * c1[1] + n(2) * c1[0] * c1[2] + n(2) * c0[1] * c2[1] - c0[2] * c2[0] -
            c0[0] * c2[2],
        -c1[0] * c1[3] + c1[1] * c1[2] - n(2) * c0[2] * c2[1] + c0[3] * c2[0] + c0[1] * c2[2],
        n(2) * c1[1] * c1[3] - n(2) * c1[2] * c1[2] - c0[3] * c2[1] - c0[1] * c2[3] +
            n(2) * c0[2] * c2[2],
        -c0[1] * c3[1] + c0[0] * c3[2] + c1[1] * c2[1] + c1[2] * c2[0] - n(2) * c1[0] * c2[2],
        half * (-c0[0] * c3[3] + c0[1] * c3[2] - n(5) * c1[2] * c2[1] + c1[3] * c2[0] +
                n(4) * c1[1] * c2[2]),
        c0[1] * c3[3] - c0[2] * c3[2] + c1[3] * c2[1] - n(2) * c1[1] * c2[3] + c1[2] * c2[2],
        n(2) * c1[1] * c3[1] - c1[2] * c3[0] - c1[0] * c3[2] - n(2) * c2[1] * c2[1] +
            n(2) * c2[0] * c2[2],
        c1[2] * c3[1] + c1[0] * c3[3] - n(2) * c1[1] * c3[2] - c2[0] * c2[3] + c2[1] * c2[2],
        -c1[3] * c3[1] - c1[1] * c3[3] + n(2) * c1[2] * c3[2] + n(2) * c2[1] * c2[3] -
            n(2) * c2[2] * c2[2],
    };
}

// The nine quadratic fiber monomials in the generator order; the fifth is the
// symmetrised mixed product.
template <class F>
std::array<Poly<F>, 9> quadratic_leads(const std::shared_ptr<const Context<F>>& ctx,
                                       const std::array<std::string, 4>& wnames) {
    using P = Poly<F>;
    P ya = P::variable(ctx, wnames[0]), yb = P::variable(ctx, wnames[1]);
    P za = P::variable(ctx, wnames[2]), zb = P::variable(ctx, wnames[3]);
    P half = P::constant(ctx, ctx->field.from_fraction(1, 2));
    return {ya * ya, ya * yb, yb * yb,          //
            ya * za, (ya * zb + yb * za) * half, yb * zb,  //
            za * za, za * zb, zb * zb};
}

template <class F>
std::array<std::string, 4> fiber_names(const GradedIdeal<F>& ideal) {
    std::string sa = std::to_string(ideal.basis[0]), sb = std::to_string(ideal.basis[1]);
    return {"y" + sa, "y" + sb, "z" + sa, "z" + sb};
}

template <class F>
GradedIdeal<F> assemble_ideal(std::shared_ptr<const Context<F>> ctx, int chart,
                              std::array<std::size_t, 2> basis,
                              std::array<std::array<Poly<F>, 4>, 4> c,
                              const std::array<long, 9>& degrees,
                              std::optional<SurfaceParams<F>> params) {
    using P = Poly<F>;
    std::string sa = std::to_string(basis[0]), sb = std::to_string(basis[1]);
    std::array<std::string, 4> wnames = {"y" + sa, "y" + sb, "z" + sa, "z" + sb};
    std::array<std::size_t, 4> wvar{};
    for (int j = 0; j < 4; ++j) wvar[j] = ctx->index_of(wnames[j]);

    auto q = quadratic_leads(ctx, wnames);
    std::array<P, 4> w = {P::variable(ctx, wvar[0]), P::variable(ctx, wvar[1]),
                          P::variable(ctx, wvar[2]), P::variable(ctx, wvar[3])};
    auto rows = coupling_rows(c);
    auto d = d_vector(c);

    auto gen = [&](int k) {
        P g = q[static_cast<std::size_t>(k)];
        for (int j = 0; j < 4; ++j)
            g = g - w[static_cast<std::size_t>(j)] * rows[static_cast<std::size_t>(k)]
                                                         [static_cast<std::size_t>(j)];
        return g + d[static_cast<std::size_t>(k)];
    };
    std::array<P, 9> gens = {gen(0), gen(1), gen(2), gen(3), gen(4),
                             gen(5), gen(6), gen(7), gen(8)};
    for (int k = 0; k < 9; ++k) {
        auto deg = gens[static_cast<std::size_t>(k)].homogeneous_degree();
        if (!deg || *deg != degrees[static_cast<std::size_t>(k)])
            throw verify_error("generator " + std::to_string(k + 1) +
                                   " is not homogeneous of degree " +
                                   std::to_string(degrees[static_cast<std::size_t>(k)]),
                               gens[static_cast<std::size_t>(k)].str());
    }
    return GradedIdeal<F>{std::move(ctx), chart,           basis, wvar,
                          std::move(gens), std::move(c), std::move(params)};
}

}  // namespace detail

// Build the chart presentation of the graded ring from the parameter pair.
// Block i of the coupling matrix comes from the local chart equations of the
// cover with chain betas beta_i and mixed beta alpha_i.  The gate rejects
// parameter pairs violating the admissibility equation; pass check=false to
// study the failure modes downstream.
template <class F>
GradedIdeal<F> build_ideal(const SurfaceParams<F>& sp, int chart = 2, bool check = true) {
    using P = Poly<F>;
    const auto& field = sp.field;
    if (field.characteristic() == 2 || field.characteristic() == 3)
        throw input_error("construction requires characteristic away from 2 and 3");
    if (check) {
        auto r = check_moduli_equation(sp.alpha, sp.beta);
        if (!r.is_zero())
            throw input_error("parameters violate the admissibility equation; residual " +
                              field.str(r));
    }

    auto pres = build_euler_ring(field, 0, 2);
    auto chart_data = trivialize(pres, "x" + std::to_string(chart));
    auto ctx = chart_data.ctx;

    auto base = Context<F>::make(field, {{"x0", 1}, {"x1", 1}, {"x2", 1}});
    P zero = P::zero(base);
    std::size_t a = chart == 0 ? 1 : 0;
    std::size_t b = chart == 2 ? 1 : 2;

    // Block i is fed the parameter pair scaled by 1/binom(3,i): the alpha and
    // beta vectors list plain cubic coefficients, while the cover construction
    // wants the binomial-basis coefficients of the same cubics.
    static constexpr long binom3[4] = {1, 3, 3, 1};
    auto block = [&](int i) -> std::array<P, 4> {
        auto wt = field.from_fraction(1, binom3[i]);
        P bc = P::constant(base, wt * sp.beta[static_cast<std::size_t>(i)]);
        P ac = P::constant(base, wt * sp.alpha[static_cast<std::size_t>(i)]);
        BetaVector<F> bv{bc, bc, bc, zero, zero, zero, zero, zero, zero, ac};
        auto t = cover_from_beta<F>(base, bv);
        auto eq = local_equations(t, chart);
        return {eq.c0.rename_into(ctx), eq.c1.rename_into(ctx), eq.c2.rename_into(ctx),
                eq.c3.rename_into(ctx)};
    };
    std::array<std::array<P, 4>, 4> c = {block(0), block(1), block(2), block(3)};
    return detail::assemble_ideal(ctx, chart, {a, b}, std::move(c),
                                  {4, 4, 4, 4, 4, 4, 4, 4, 4},
                                  std::optional<SurfaceParams<F>>(sp));
}

// Export form: each generator multiplied by the minimal power of the chart
// variable clearing its inverted exponents.
template <class F>
std::array<Poly<F>, 9> cleared_generators(const GradedIdeal<F>& ideal) {
    std::size_t xk = ideal.ctx->index_of("x" + std::to_string(ideal.chart));
    auto clear = [&](const Poly<F>& g) {
        long m = g.min_degree_in(xk);
        return m < 0 ? g.shifted(xk, -m) : g;
    };
    const auto& g = ideal.gens;
    return {clear(g[0]), clear(g[1]), clear(g[2]), clear(g[3]), clear(g[4]),
            clear(g[5]), clear(g[6]), clear(g[7]), clear(g[8])};
}

namespace detail {

// Express p as sum h_k G_k with Laurent x-coefficients h_k read off the nine
// quadratic fiber monomials, then subtract.  Returns a witness string when
// the quadratic part steps outside the span of the generator leads or the
// remainder refuses to vanish; nullopt means p is certified in the span.
template <class F>
std::optional<std::string> generator_span_witness(const std::shared_ptr<const Context<F>>& ctx,
                                                  const std::array<Poly<F>, 9>& gens,
                                                  const std::array<std::string, 4>& wnames,
                                                  const Poly<F>& p) {
    using P = Poly<F>;
    std::array<std::size_t, 4> wv{};
    for (int j = 0; j < 4; ++j) wv[j] = ctx->index_of(wnames[j]);
    std::vector<char> mask(ctx->vars.size(), 0);
    for (auto v : wv) mask[v] = 1;

    auto pattern = [&](std::initializer_list<std::pair<int, int>> l) {
        std::vector<std::int32_t> e(ctx->vars.size(), 0);
        for (const auto& [j, k] : l) e[wv[static_cast<std::size_t>(j)]] += k;
        return e;
    };
    // Slots 0..8 follow the generator order; 10 and 11 are the two halves of
    // the symmetrised mixed product.
    std::map<std::vector<std::int32_t>, int> slot;
    slot[pattern({{0, 2}})] = 0;
    slot[pattern({{0, 1}, {1, 1}})] = 1;
    slot[pattern({{1, 2}})] = 2;
    slot[pattern({{0, 1}, {2, 1}})] = 3;
    slot[pattern({{0, 1}, {3, 1}})] = 10;
    slot[pattern({{1, 1}, {2, 1}})] = 11;
    slot[pattern({{1, 1}, {3, 1}})] = 5;
    slot[pattern({{2, 2}})] = 6;
    slot[pattern({{2, 1}, {3, 1}})] = 7;
    slot[pattern({{3, 2}})] = 8;

    std::array<P, 9> h = {P::zero(ctx), P::zero(ctx), P::zero(ctx), P::zero(ctx), P::zero(ctx),
                          P::zero(ctx), P::zero(ctx), P::zero(ctx), P::zero(ctx)};
    P hab = P::zero(ctx), hba = P::zero(ctx);
    for (const auto& [key, cof] : p.split(mask)) {
        long deg = 0;
        for (auto v : wv) deg += key[v];
        if (deg <= 1) continue;  // absorbed by the final subtraction
        auto it = slot.find(key.exps());
        if (it == slot.end())
            return "fiber monomial outside the quadratic leads: " + P::term(ctx, key, ctx->field.one()).str();
        if (it->second == 10)
            hab = cof;
        else if (it->second == 11)
            hba = cof;
        else
            h[static_cast<std::size_t>(it->second)] = cof;
    }
    if (!(hab == hba))
        return "mixed quadratic coefficients disagree: " + hab.str() + " vs " + hba.str();
    h[4] = hab + hba;

    P rem = p;
    for (int k = 0; k < 9; ++k)
        rem = rem - h[static_cast<std::size_t>(k)] * gens[static_cast<std::size_t>(k)];
    if (!rem.is_zero()) return "remainder " + rem.str();
    return std::nullopt;
}

}  // namespace detail

struct EquivarianceReport {
    bool pass = true;
    std::string witness;
};

// Check that the untwisted cyclic, involution and diagonal substitutions
// preserve the ideal in the chart localisation.  Each generator is lifted to
// the full fiber alphabet, cleared, transported by the substitution, pushed
// back through the chart eliminations, and matched against the nine quadratic
// leads; the remainder after subtracting the matched combination must vanish
// identically.
template <class F>
EquivarianceReport check_equivariance(const GradedIdeal<F>& ideal) {
    using P = Poly<F>;
    const auto& field = ideal.ctx->field;
    int chart = ideal.chart;
    std::string xk = "x" + std::to_string(chart);

    auto pres = build_euler_ring(field, 0, 2);
    auto chart_data = trivialize(pres, xk);
    auto ext = Context<F>::make(field, pres.ctx->vars, xk);
    std::size_t xki = ext->index_of(xk);

    std::array<P, 9> lift = [&] {
        std::array<P, 9> r;
        for (int k = 0; k < 9; ++k)
            r[static_cast<std::size_t>(k)] = ideal.gens[static_cast<std::size_t>(k)].rename_into(ext);
        return r;
    }();

    // Chart eliminations of the dropped fiber variables, as substitution
    // images indexed by the ext variables.
    std::vector<P> elim;
    for (std::size_t v = 0; v < ext->vars.size(); ++v) {
        if (v < 3)
            elim.push_back(P::variable(ext, v));
        else
            elim.push_back(chart_data.back_map[v - 3].rename_into(ext));
    }

    auto wnames = detail::fiber_names(ideal);
    const std::array<std::pair<const char*, GroupAction>, 3> actions = {
        std::pair<const char*, GroupAction>{"cyclic", GroupAction::sigma_pair(0, 0)},
        std::pair<const char*, GroupAction>{"involution", GroupAction::iota_pair(0, 0)},
        std::pair<const char*, GroupAction>{"diagonal", GroupAction::tau_pair(0, 0)},
    };
    for (const auto& [label, ga] : actions) {
        auto act = substitution(field, ga);
        std::vector<P> images;
        for (int i = 0; i < 3; ++i)
            images.push_back(P::variable(ext, "x" + std::to_string(act.xperm[i]))
                                 .scaled(act.xscale[static_cast<std::size_t>(i)]));
        for (int j = 0; j < 3; ++j)
            images.push_back(P::variable(ext, "y" + std::to_string(act.yperm[j]))
                                 .scaled(act.yscale[static_cast<std::size_t>(j)]));
        for (int j = 0; j < 3; ++j)
            images.push_back(P::variable(ext, "z" + std::to_string(act.zperm[j]))
                                 .scaled(act.zscale[static_cast<std::size_t>(j)]));

        for (int k = 0; k < 9; ++k) {
            P g = lift[static_cast<std::size_t>(k)];
            long m = g.min_degree_in(xki);
            if (m < 0) g = g.shifted(xki, -m);
            P moved = g.subst(ext, images).subst(ext, elim);
            if (auto w = detail::generator_span_witness(ext, lift, wnames, moved))
                return {false, std::string(label) + " image of generator " + std::to_string(k + 1) +
                                   " leaves the ideal: " + *w};
        }
    }
    return {true, ""};
}

// The degree-six algebra of a scheme-theoretic fiber: multiplication table on
// the basis {1, y_a, y_b, z_a, z_b, w} with w = y_a z_b - y_b z_a, plus the
// trace form.  Construction throws verify_error when the specialised
// relations are inconsistent or the product fails associativity; both signal
// a point where the fiber degenerates.
template <class F>
struct FiberAlgebra {
    using Elem = typename F::Elem;
    F field;
    std::array<Elem, 3> point;
    std::array<std::array<std::array<Elem, 6>, 6>, 6> table;
    Matrix<F> trace_form;

    FiberAlgebra(const F& f, const std::array<Elem, 3>& pt)
        : field(f), point(pt), table{}, trace_form(f, 6, 6) {}
};

template <class F>
FiberAlgebra<F> fiber_algebra(const GradedIdeal<F>& ideal,
                              const std::array<typename F::Elem, 3>& pt) {
    using P = Poly<F>;
    using Elem = typename F::Elem;
    const auto& field = ideal.ctx->field;
    if (pt[static_cast<std::size_t>(ideal.chart)].is_zero())
        throw input_error("point lies outside the chart: coordinate " +
                          std::to_string(ideal.chart) + " vanishes");

    auto wnames = detail::fiber_names(ideal);
    auto fctx = Context<F>::make(field, {{wnames[0], 1}, {wnames[1], 1}, {wnames[2], 1},
                                         {wnames[3], 1}});
    std::vector<P> images;
    for (const auto& v : ideal.ctx->vars) {
        if (v.name.size() == 2 && v.name[0] == 'x')
            images.push_back(P::constant(fctx, pt[static_cast<std::size_t>(v.name[1] - '0')]));
        else
            images.push_back(P::variable(fctx, v.name));
    }

    auto q = detail::quadratic_leads(fctx, wnames);
    Elem half = field.from_fraction(1, 2);
    std::array<P, 9> rel;
    for (int k = 0; k < 9; ++k) {
        P r = q[static_cast<std::size_t>(k)] -
              ideal.gens[static_cast<std::size_t>(k)].subst(fctx, images);
        for (const auto& t : r.terms()) {
            long deg = 0;
            for (auto e : t.first.exps()) deg += e;
            if (deg > 1)
                throw verify_error("specialised relation is not linear", r.str());
        }
        rel[static_cast<std::size_t>(k)] = r;
    }

    // Quadratic rewrite rules keyed by exponent pattern; the two halves of
    // the mixed product split through w.
    std::map<std::vector<std::int32_t>, int> rule;
    rule[{2, 0, 0, 0}] = 0;
    rule[{1, 1, 0, 0}] = 1;
    rule[{0, 2, 0, 0}] = 2;
    rule[{1, 0, 1, 0}] = 3;
    rule[{0, 1, 0, 1}] = 5;
    rule[{0, 0, 2, 0}] = 6;
    rule[{0, 0, 1, 1}] = 7;
    rule[{0, 0, 0, 2}] = 8;
    const std::vector<std::int32_t> mixed_ab = {1, 0, 0, 1};
    const std::vector<std::int32_t> mixed_ba = {0, 1, 1, 0};

    auto reduce = [&](P p) {
        std::array<Elem, 6> out = {field.zero(), field.zero(), field.zero(),
                                   field.zero(), field.zero(), field.zero()};
        while (!p.is_zero()) {
            auto lead = p.leading();
            const Mono& m = lead.first;
            Elem cf = lead.second;
            long deg = 0;
            for (auto e : m.exps()) deg += e;
            p = p - P::term(fctx, m, cf);
            if (deg == 0) {
                out[0] = out[0] + cf;
            } else if (deg == 1) {
                for (std::size_t v = 0; v < 4; ++v)
                    if (m[v] == 1) out[1 + v] = out[1 + v] + cf;
            } else if (deg == 2 && m.exps() == mixed_ab) {
                out[5] = out[5] + cf * half;
                p = p + rel[4].scaled(cf);
            } else if (deg == 2 && m.exps() == mixed_ba) {
                out[5] = out[5] - cf * half;
                p = p + rel[4].scaled(cf);
            } else {
                bool done = false;
                for (const auto& [pat, idx] : rule) {
                    bool divides = true;
                    for (std::size_t v = 0; v < 4; ++v)
                        if (m[v] < pat[v]) { divides = false; break; }
                    if (!divides) continue;
                    Mono quot = m.div(Mono(pat));
                    p = p + rel[static_cast<std::size_t>(idx)] * P::term(fctx, quot, cf);
                    done = true;
                    break;
                }
                if (!done)
                    throw verify_error("no rewrite rule applies", P::term(fctx, m, cf).str());
            }
        }
        return out;
    };

    // The specialised generators themselves must reduce to zero; this fails
    // exactly when the rules are inconsistent at the point.
    for (int k = 0; k < 9; ++k) {
        auto z = reduce(ideal.gens[static_cast<std::size_t>(k)].subst(fctx, images));
        for (const auto& e : z)
            if (!e.is_zero())
                throw verify_error("specialised relations are inconsistent at the point",
                                   "generator " + std::to_string(k + 1));
    }

    P ya = P::variable(fctx, 0), yb = P::variable(fctx, 1);
    P za = P::variable(fctx, 2), zb = P::variable(fctx, 3);
    std::array<P, 6> rep = {P::from_int(fctx, 1), ya, yb, za, zb, ya * zb - yb * za};

    FiberAlgebra<F> fa(field, pt);
    for (int i = 0; i < 6; ++i)
        for (int j = i; j < 6; ++j) {
            auto prod = reduce(rep[static_cast<std::size_t>(i)] * rep[static_cast<std::size_t>(j)]);
            fa.table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = prod;
            fa.table[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = prod;
        }

    // Associativity of the finished table is the flatness certificate.
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            for (int k = 0; k < 6; ++k) {
                std::array<Elem, 6> left{}, right{};
                for (int s = 0; s < 6; ++s) left[static_cast<std::size_t>(s)] = field.zero();
                for (int s = 0; s < 6; ++s) right[static_cast<std::size_t>(s)] = field.zero();
                for (int m = 0; m < 6; ++m) {
                    Elem lm = fa.table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                                      [static_cast<std::size_t>(m)];
                    Elem rm = fa.table[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]
                                      [static_cast<std::size_t>(m)];
                    for (int s = 0; s < 6; ++s) {
                        left[static_cast<std::size_t>(s)] =
                            left[static_cast<std::size_t>(s)] +
                            lm * fa.table[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)]
                                         [static_cast<std::size_t>(s)];
                        right[static_cast<std::size_t>(s)] =
                            right[static_cast<std::size_t>(s)] +
                            rm * fa.table[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)]
                                         [static_cast<std::size_t>(s)];
                    }
                }
                for (int s = 0; s < 6; ++s)
                    if (!(left[static_cast<std::size_t>(s)] == right[static_cast<std::size_t>(s)]))
                        throw verify_error("fiber multiplication is not associative at the point",
                                           "triple (" + std::to_string(i) + "," +
                                               std::to_string(j) + "," + std::to_string(k) + ")");
            }

    std::array<Elem, 6> tr;
    for (int m = 0; m < 6; ++m) {
        Elem t = field.zero();
        for (int r = 0; r < 6; ++r)
            t = t + fa.table[static_cast<std::size_t>(m)][static_cast<std::size_t>(r)]
                            [static_cast<std::size_t>(r)];
        tr[static_cast<std::size_t>(m)] = t;
    }
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            Elem t = field.zero();
            for (int m = 0; m < 6; ++m)
                t = t + fa.table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                                [static_cast<std::size_t>(m)] *
                            tr[static_cast<std::size_t>(m)];
            fa.trace_form.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = t;
        }
    return fa;
}

template <class F>
typename F::Elem trace_discriminant(const FiberAlgebra<F>& fa) {
    return fa.trace_form.det();
}

// The branch sextic family
//   sum x_i^6 + 2(2l^3-1) sum x_i^3 x_{i+1}^3 - 6l^2 sum x_i^4 x_{i+1} x_{i+2}
//   - 3l(l^3-4) x0^2 x1^2 x2^2,
// indexed by the branch modulus l.  bl_family_params maps l to the diagonal
// parameter pair whose surface branches exactly over this sextic.
template <class F>
Poly<F> bl_branch_sextic(const Poly<F>& lambda) {
    using P = Poly<F>;
    auto ctx = lambda.ctx();
    P x0 = P::variable(ctx, "x0"), x1 = P::variable(ctx, "x1"), x2 = P::variable(ctx, "x2");
    auto n = [&](long k) { return P::from_int(ctx, k); };
    const P& l = lambda;
    P s6 = x0.pow(6) + x1.pow(6) + x2.pow(6);
    P s33 = x0.pow(3) * x1.pow(3) + x1.pow(3) * x2.pow(3) + x2.pow(3) * x0.pow(3);
    P s411 = x0.pow(4) * x1 * x2 + x0 * x1.pow(4) * x2 + x0 * x1 * x2.pow(4);
    P s222 = x0.pow(2) * x1.pow(2) * x2.pow(2);
    return s6 + n(2) * (n(2) * l.pow(3) - n(1)) * s33 - n(6) * l.pow(2) * s411 -
           n(3) * l * (l.pow(3) - n(4)) * s222;
}

template <class F>
Poly<F> bl_branch_sextic(const std::shared_ptr<const Context<F>>& ctx,
                         const typename F::Elem& lambda) {
    return bl_branch_sextic(Poly<F>::constant(ctx, lambda));
}

// The member of the diagonal family beta = (0,1,1,0) whose branch locus is
// bl_branch_sextic(lambda): alpha = (0, -3l/2, -3l/2, 0).  The diagonal shape
// makes the admissibility equation vanish identically.
template <class F>
SurfaceParams<F> bl_family_params(const F& field, const typename F::Elem& lambda) {
    auto a = field.from_fraction(-3, 2) * lambda;
    SurfaceParams<F> sp{field,
                        {field.zero(), a, a, field.zero()},
                        {field.zero(), field.one(), field.one(), field.zero()}};
    return sp;
}

namespace detail {

// Dense univariate helpers on ascending coefficient vectors.
template <class F>
typename F::Elem univ_eval(const F& field, const std::vector<typename F::Elem>& a,
                           const typename F::Elem& x) {
    auto r = field.zero();
    for (std::size_t i = a.size(); i-- > 0;) r = r * x + a[i];
    return r;
}

template <class F>
std::vector<typename F::Elem> lagrange_interpolate(const F& field,
                                                   const std::vector<typename F::Elem>& xs,
                                                   const std::vector<typename F::Elem>& ys) {
    using Elem = typename F::Elem;
    std::size_t n = xs.size();
    std::vector<Elem> acc(n, field.zero());
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Elem> basis = {field.one()};
        Elem denom = field.one();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            std::vector<Elem> nb(basis.size() + 1, field.zero());
            for (std::size_t k = 0; k < basis.size(); ++k) {
                nb[k + 1] = nb[k + 1] + basis[k];
                nb[k] = nb[k] - xs[j] * basis[k];
            }
            basis = std::move(nb);
            denom = denom * (xs[i] - xs[j]);
        }
        Elem scale = ys[i] / denom;
        for (std::size_t k = 0; k < basis.size(); ++k) acc[k] = acc[k] + scale * basis[k];
    }
    return acc;
}

}  // namespace detail

// Exact coefficient vector (ascending) of the cleared trace discriminant
// along the pencil s -> p + s q: sample disc * x_chart(s)^clear_power at
// integer nodes, interpolate up to degree_bound, and confirm on extra
// holdout nodes.  Samples falling on a degenerate fiber abort with the
// offending node in the message.
template <class F>
std::vector<typename F::Elem> branch_on_line(const GradedIdeal<F>& ideal,
                                             const std::array<typename F::Elem, 3>& p,
                                             const std::array<typename F::Elem, 3>& q,
                                             long degree_bound = 48, long clear_power = 24) {
    using Elem = typename F::Elem;
    const auto& field = ideal.ctx->field;
    Matrix<F> span(field, 2, 3);
    for (std::size_t j = 0; j < 3; ++j) {
        span.at(0, j) = p[j];
        span.at(1, j) = q[j];
    }
    if (span.rank() < 2) throw input_error("the two points do not span a line");

    const long holdout = 5;
    long wanted = degree_bound + 1 + holdout;
    unsigned long chr = field.characteristic();
    long budget = chr == 0 ? 4 * wanted : static_cast<long>(chr);
    std::vector<Elem> xs, vs;
    for (long i = 0; i < budget && static_cast<long>(xs.size()) < wanted; ++i) {
        Elem s = field.from_int(i);
        std::array<Elem, 3> pt;
        for (std::size_t j = 0; j < 3; ++j) pt[j] = p[j] + s * q[j];
        Elem xc = pt[static_cast<std::size_t>(ideal.chart)];
        if (xc.is_zero()) continue;
        Elem d;
        try {
            d = trace_discriminant(fiber_algebra(ideal, pt));
        } catch (const verify_error& e) {
            throw verify_error("degenerate fiber on the line at s = " + field.str(s), e.what());
        }
        Elem scale = field.one();
        for (long k = 0; k < clear_power; ++k) scale = scale * xc;
        xs.push_back(s);
        vs.push_back(d * scale);
    }
    if (static_cast<long>(xs.size()) < wanted)
        throw input_error("field too small for the requested degree bound");

    std::vector<Elem> nx(xs.begin(), xs.begin() + (degree_bound + 1));
    std::vector<Elem> nv(vs.begin(), vs.begin() + (degree_bound + 1));
    auto coeffs = detail::lagrange_interpolate(field, nx, nv);
    for (long i = degree_bound + 1; i < wanted; ++i) {
        auto got = detail::univ_eval(field, coeffs, xs[static_cast<std::size_t>(i)]);
        if (!(got == vs[static_cast<std::size_t>(i)]))
            throw verify_error("cleared discriminant exceeds the degree bound on the line",
                               "holdout s = " + field.str(xs[static_cast<std::size_t>(i)]));
    }
    while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
    return coeffs;
}

// The irregular variant: only the middle and bottom coefficient blocks are
// populated, subject to the four-term relation
//   c13 c30 - 3 c12 c31 + 3 c11 c32 - c10 c33 = 0,
// with fiber weights (2,3); the generators come out in degrees 4,4,4, 5,5,5,
// 6,6,6 on the x2 chart.
template <class F>
GradedIdeal<F> build_irregular_ideal(const std::array<Poly<F>, 4>& c1,
                                     const std::array<Poly<F>, 4>& c3) {
    using P = Poly<F>;
    auto src = c1[0].ctx();
    const auto& field = src->field;
    if (field.characteristic() == 2 || field.characteristic() == 3)
        throw input_error("construction requires characteristic away from 2 and 3");
    for (int j = 0; j < 4; ++j) {
        const P& e1 = c1[static_cast<std::size_t>(j)];
        const P& e3 = c3[static_cast<std::size_t>(j)];
        auto d1 = e1.homogeneous_degree();
        auto d3 = e3.homogeneous_degree();
        if (!d1 || (!e1.is_zero() && *d1 != 2))
            throw input_error("middle block entries must be homogeneous of degree 2");
        if (!d3 || (!e3.is_zero() && *d3 != 4))
            throw input_error("bottom block entries must be homogeneous of degree 4");
    }
    P three = P::from_int(src, 3);
    P rel = c1[3] * c3[0] - three * c1[2] * c3[1] + three * c1[1] * c3[2] - c1[0] * c3[3];
    if (!rel.is_zero())
        throw input_error("block relation violated; residual " + rel.str());

    auto ctx = Context<F>::make(field,
                                {{"x0", 1}, {"x1", 1}, {"x2", 1},
                                 {"y0", 2}, {"y1", 2}, {"z0", 3}, {"z1", 3}},
                                "x2");
    P zero = P::zero(ctx);
    std::array<P, 4> z4 = {zero, zero, zero, zero};
    auto move4 = [&](const std::array<P, 4>& a) -> std::array<P, 4> {
        return {a[0].rename_into(ctx), a[1].rename_into(ctx), a[2].rename_into(ctx),
                a[3].rename_into(ctx)};
    };
    std::array<std::array<P, 4>, 4> c = {z4, move4(c1), z4, move4(c3)};
    return detail::assemble_ideal(ctx, 2, {0, 1}, std::move(c),
                                  {4, 4, 4, 5, 5, 5, 6, 6, 6},
                                  std::optional<SurfaceParams<F>>());
}

}  // namespace ab13
