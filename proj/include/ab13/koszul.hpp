// The antisymmetric syzygy matrix M3 of (x0,x1,x2), the constructive
// decomposition L = M3*N*M3 for symmetric L annihilating x, and dimension
// bookkeeping for the associated Hom families.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ab13/errors.hpp"
#include "ab13/linalg.hpp"
#include "ab13/poly.hpp"

namespace ab13 {

// Monomials of the given weighted degree supported on a variable subset (all
// of which must have positive weight), in canonical order.
template <class F>
std::vector<Mono> monomials_of_degree(const typename Poly<F>::CtxPtr& ctx,
                                      const std::vector<std::size_t>& vars, long degree) {
    for (auto v : vars)
        if (ctx->vars[v].weight <= 0) throw error("monomial enumeration needs positive weights");
    std::vector<Mono> out;
    Mono cur(ctx->vars.size());
    auto rec = [&](auto&& self, std::size_t pos, long remaining) -> void {
        if (pos == vars.size()) {
            if (remaining == 0) out.push_back(cur);
            return;
        }
        long w = ctx->vars[vars[pos]].weight;
        for (long e = remaining / w; e >= 0; --e) {
            cur[vars[pos]] = static_cast<std::int32_t>(e);
            self(self, pos + 1, remaining - e * w);
        }
        cur[vars[pos]] = 0;
    };
    rec(rec, 0, degree);
    std::sort(out.begin(), out.end(),
              [&](const Mono& a, const Mono& b) { return ctx->mono_cmp(a, b) > 0; });
    return out;
}

// Solve sum_k u_k * C[e][k] = rhs[e] over all equations e, for unknown
// polynomials u_k homogeneous of the given weighted degree in the x
// variables. Canonical solution: reduced echelon with free coefficients zero.
template <class F>
std::optional<std::vector<Poly<F>>> solve_poly_linear(const typename Poly<F>::CtxPtr& ctx,
                                                      const PMat<Poly<F>>& coeffs,
                                                      const std::vector<Poly<F>>& rhs,
                                                      long unknown_degree) {
    using P = Poly<F>;
    std::size_t neq = coeffs.size();
    if (neq == 0 || rhs.size() != neq) throw error("poly solve shape mismatch");
    std::size_t nu = coeffs[0].size();

    std::vector<std::size_t> xvars = {0, 1, 2};
    auto monos = unknown_degree < 0 ? std::vector<Mono>{}
                                    : monomials_of_degree<F>(ctx, xvars, unknown_degree);

    // Column index = (unknown, monomial); rows indexed by monomials of the
    // expanded equations, discovered on the fly.
    auto cmp = [&](const Mono& a, const Mono& b) { return ctx->mono_cmp(a, b) > 0; };
    std::map<Mono, std::size_t, decltype(cmp)> row_of(cmp);
    struct Entry {
        std::size_t row, col;
        typename F::Elem val;
    };
    std::vector<Entry> entries;
    std::vector<std::pair<std::size_t, typename F::Elem>> rhs_entries;

    std::vector<std::map<Mono, std::size_t, decltype(cmp)>> rows_per_eq(neq, row_of);
    std::size_t nrows = 0;
    for (std::size_t e = 0; e < neq; ++e) {
        for (std::size_t k = 0; k < nu; ++k) {
            for (std::size_t mi = 0; mi < monos.size(); ++mi) {
                P prod = P::term(ctx, monos[mi], ctx->field.one()) * coeffs[e][k];
                for (const auto& [m, c] : prod.terms()) {
                    auto [it, fresh] = rows_per_eq[e].try_emplace(m, nrows);
                    if (fresh) ++nrows;
                    entries.push_back({it->second, k * monos.size() + mi, c});
                }
            }
        }
        for (const auto& [m, c] : rhs[e].terms()) {
            auto [it, fresh] = rows_per_eq[e].try_emplace(m, nrows);
            if (fresh) ++nrows;
            rhs_entries.push_back({it->second, c});
        }
    }

    std::size_t ncols = nu * monos.size();
    Matrix<F> A(ctx->field, std::max<std::size_t>(nrows, 1), std::max<std::size_t>(ncols, 1));
    std::vector<typename F::Elem> b(std::max<std::size_t>(nrows, 1), ctx->field.zero());
    for (const auto& en : entries) A.at(en.row, en.col) += en.val;
    for (const auto& [r, c] : rhs_entries) b[r] += c;

    auto sol = A.solve(b);
    if (!sol) return std::nullopt;

    std::vector<P> out;
    for (std::size_t k = 0; k < nu; ++k) {
        P u = P::zero(ctx);
        for (std::size_t mi = 0; mi < monos.size(); ++mi) {
            const auto& c = (*sol)[k * monos.size() + mi];
            if (!c.is_zero()) u = u + P::term(ctx, monos[mi], c);
        }
        out.push_back(std::move(u));
    }
    return out;
}

template <class F>
PMat<Poly<F>> koszul_m3(const typename Poly<F>::CtxPtr& ctx) {
    using P = Poly<F>;
    auto x = [&](int i) { return P::variable(ctx, "x" + std::to_string(i)); };
    P z = P::zero(ctx);
    return {{z, x(2), -x(1)}, {-x(2), z, x(0)}, {x(1), -x(0), z}};
}

template <class F>
std::vector<Poly<F>> xbar(const typename Poly<F>::CtxPtr& ctx) {
    using P = Poly<F>;
    return {P::variable(ctx, "x0"), P::variable(ctx, "x1"), P::variable(ctx, "x2")};
}

namespace detail {

template <class F>
void check_annihilates_x(const PMat<Poly<F>>& L) {
    auto ctx = L[0][0].ctx();
    auto x = xbar<F>(ctx);
    for (int i = 0; i < 3; ++i) {
        auto s = Poly<F>::zero(ctx);
        for (int j = 0; j < 3; ++j) s = s + L[i][j] * x[j];
        if (!s.is_zero()) throw input_error("matrix does not annihilate (x0,x1,x2)");
    }
}

}  // namespace detail

// Given symmetric L with L*x = 0 and homogeneous entries of common degree
// d >= 2, produce symmetric N of degree d-2 with M3*N*M3 = L. Follows the
// constructive proof: solve P*M3 = L row by row, split P^t = Q*M3 + lambda*I,
// then N = -(Q+Q^t)/2.
template <class F>
PMat<Poly<F>> kovacec_decompose(const PMat<Poly<F>>& L) {
    using P = Poly<F>;
    if (L.size() != 3 || L[0].size() != 3) throw input_error("expected a 3x3 matrix");
    auto ctx = L[0][0].ctx();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (L[i][j] != L[j][i]) throw input_error("matrix is not symmetric");
    detail::check_annihilates_x<F>(L);

    auto M3 = koszul_m3<F>(ctx);
    P zero = P::zero(ctx);
    if (pmat_is_zero(L)) return {{zero, zero, zero}, {zero, zero, zero}, {zero, zero, zero}};

    std::optional<long> d;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (L[i][j].is_zero()) continue;
            auto h = L[i][j].homogeneous_degree();
            if (!h) throw input_error("matrix entries must be homogeneous");
            if (d && *d != *h) throw input_error("matrix entries must share one degree");
            d = *h;
        }
    if (*d < 2) throw input_error("decomposition needs degree >= 2");

    // P*M3 = L, solved independently per row: unknowns P[i][*] of degree d-1.
    PMat<P> Pm(3, std::vector<P>(3, zero));
    for (int i = 0; i < 3; ++i) {
        PMat<P> coeffs(3, std::vector<P>(3, zero));
        std::vector<P> rhs(3, zero);
        for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) coeffs[j][k] = M3[k][j];
            rhs[j] = L[i][j];
        }
        auto row = solve_poly_linear<F>(ctx, coeffs, rhs, *d - 1);
        if (!row) throw verify_error("no solution of P*M3 = L", "row " + std::to_string(i));
        for (int k = 0; k < 3; ++k) Pm[i][k] = (*row)[k];
    }

    // P^t * x = lambda * x for a single polynomial lambda of degree d-2.
    auto Pt = pmat_transpose(Pm);
    auto x = xbar<F>(ctx);
    std::vector<P> v(3, zero);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) v[i] = v[i] + Pt[i][j] * x[j];
    P lambda = exact_divide(v[0], x[0]);
    for (int i = 1; i < 3; ++i)
        if (v[i] != lambda * x[i])
            throw verify_error("P^t does not scale (x0,x1,x2) uniformly", v[i].str());

    // Q*M3 = P^t - lambda*I.
    PMat<P> B = Pt;
    for (int i = 0; i < 3; ++i) B[i][i] = B[i][i] - lambda * P::from_int(ctx, 1);
    PMat<P> Q(3, std::vector<P>(3, zero));
    for (int i = 0; i < 3; ++i) {
        PMat<P> coeffs(3, std::vector<P>(3, zero));
        std::vector<P> rhs(3, zero);
        for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) coeffs[j][k] = M3[k][j];
            rhs[j] = B[i][j];
        }
        auto row = solve_poly_linear<F>(ctx, coeffs, rhs, *d - 2);
        if (!row) throw verify_error("no solution of Q*M3 = P^t - lambda*I", "row " + std::to_string(i));
        for (int k = 0; k < 3; ++k) Q[i][k] = (*row)[k];
    }

    auto Qt = pmat_transpose(Q);
    PMat<P> N(3, std::vector<P>(3, zero));
    auto half = P::constant(ctx, ctx->field.from_fraction(1, 2));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) N[i][j] = -(Q[i][j] + Qt[i][j]) * half;

    auto back = pmat_mul(pmat_mul(M3, N, zero), M3, zero);
    if (!pmat_eq(back, L))
        throw verify_error("decomposition check M3*N*M3 = L failed", back[0][0].str());
    return N;
}

template <class F>
struct HomFamily {
    long dimension = 0;
    long form_degree = 0;  // degree of each of the six parameter forms
    std::optional<PMat<Poly<F>>> matrix;  // upper-triangular d1..d6 placeholder matrix
};

template <class F>
HomFamily<F> hom_family_dimension(const F& field, long m1, long m2) {
    if (m1 < 0) throw input_error("twist must be >= 0");
    long d = 2 * m1 - m2 + 2;
    HomFamily<F> out;
    out.form_degree = d;
    if (d < 0) return out;
    long forms = (d + 1) * (d + 2) / 2;
    out.dimension = 6 * forms;

    using P = Poly<F>;
    std::vector<VarInfo> vars = {{"x0", 1}, {"x1", 1}, {"x2", 1}};
    for (int i = 1; i <= 6; ++i) vars.push_back({"d" + std::to_string(i), d});
    auto ctx = Context<F>::make(field, vars);
    auto dd = [&](int i) { return P::variable(ctx, "d" + std::to_string(i)); };
    P z = P::zero(ctx);
    out.matrix = PMat<P>{{dd(1), dd(2), dd(3)}, {z, dd(4), dd(5)}, {z, z, dd(6)}};
    return out;
}

}  // namespace ab13
