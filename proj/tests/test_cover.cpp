#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ab13/field.hpp"
#include "ab13/rng.hpp"
#include "ab13/triple_cover.hpp"

using namespace ab13;

namespace {

template <class F>
typename Poly<F>::CtxPtr x_ctx(F field) {
    return Context<F>::make(std::move(field), {{"x0", 1}, {"x1", 1}, {"x2", 1}});
}

template <class F>
typename Poly<F>::CtxPtr beta_ctx(F field) {
    std::vector<VarInfo> vars = {{"x0", 1}, {"x1", 1}, {"x2", 1}};
    for (const char* n : beta_names()) vars.push_back({n, 0});
    return Context<F>::make(std::move(field), std::move(vars));
}

template <class F>
BetaVector<F> beta_vars(const typename Poly<F>::CtxPtr& ctx) {
    BetaVector<F> b;
    for (int i = 0; i < 10; ++i) b[i] = Poly<F>::variable(ctx, beta_names()[i]);
    return b;
}

template <class F>
BetaVector<F> random_beta(const typename Poly<F>::CtxPtr& ctx, Rng& rng) {
    BetaVector<F> b;
    for (int i = 0; i < 10; ++i) b[i] = Poly<F>::constant(ctx, ctx->field.random(rng));
    return b;
}

template <class F>
Poly<F> random_linear(const typename Poly<F>::CtxPtr& ctx, Rng& rng) {
    auto p = Poly<F>::zero(ctx);
    for (int i = 0; i < 3; ++i)
        p = p + Poly<F>::constant(ctx, ctx->field.random(rng)) *
                    Poly<F>::variable(ctx, "x" + std::to_string(i));
    return p;
}

template <class F>
std::array<Poly<F>, 3> random_legal_shift(const typename Poly<F>::CtxPtr& ctx, Rng& rng) {
    auto M3 = koszul_m3<F>(ctx);
    std::array<Poly<F>, 3> w = {random_linear<F>(ctx, rng), random_linear<F>(ctx, rng),
                                random_linear<F>(ctx, rng)};
    std::array<Poly<F>, 3> s = {Poly<F>::zero(ctx), Poly<F>::zero(ctx), Poly<F>::zero(ctx)};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s[i] = s[i] + M3[i][j] * w[j];
    return s;
}

template <class F>
std::array<PMat<Poly<F>>, 3> random_certificates(const typename Poly<F>::CtxPtr& ctx, Rng& rng) {
    std::array<PMat<Poly<F>>, 3> N;
    for (int i = 0; i < 3; ++i) {
        PMat<Poly<F>> m(3, std::vector<Poly<F>>(3, Poly<F>::zero(ctx)));
        for (int a = 0; a < 3; ++a)
            for (int b = a; b < 3; ++b) {
                m[a][b] = Poly<F>::constant(ctx, ctx->field.random(rng));
                m[b][a] = m[a][b];
            }
        N[i] = m;
    }
    return N;
}

template <class F>
bool triples_equal(const CoverTriple<F>& s, const CoverTriple<F>& t) {
    for (int i = 0; i < 3; ++i)
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                if (!cross_equal(s.C[i][a][b], t.C[i][a][b])) return false;
    return true;
}

}  // namespace

TEST_CASE("ten-parameter local equations on U2") {
    auto ctx = beta_ctx(QField{});
    auto t = cover_from_beta(ctx, beta_vars<QField>(ctx));
    auto eq = local_equations(t, 2);
    CHECK(eq.ya == 0);
    CHECK(eq.yb == 1);
    auto P = [&](const char* s) { return Poly<QField>::parse(eq.ctx, s); };
    CHECK(eq.c0 == P("b1*x2^2 - b12*x1*x2 + b21*x1^2 - b2*x1^3*x2^-1"));
    CHECK(eq.c1 == P("1/3*b10*x2^2 - 2/3*b012*x1*x2 + 1/3*b20*x1^2 - 1/3*b12*x0*x2 "
                     "+ 2/3*b21*x0*x1 - b2*x0*x1^2*x2^-1"));
    CHECK(eq.c2 == P("1/3*b01*x2^2 - 1/3*b02*x1*x2 - 2/3*b012*x0*x2 + 2/3*b20*x0*x1 "
                     "+ 1/3*b21*x0^2 - b2*x0^2*x1*x2^-1"));
    CHECK(eq.c3 == P("b0*x2^2 - b02*x0*x2 + b20*x0^2 - b2*x0^3*x2^-1"));
}

TEST_CASE("ten-parameter local equations on U1") {
    auto ctx = beta_ctx(QField{});
    auto t = cover_from_beta(ctx, beta_vars<QField>(ctx));
    auto eq = local_equations(t, 1);
    CHECK(eq.ya == 0);
    CHECK(eq.yb == 2);
    auto P = [&](const char* s) { return Poly<QField>::parse(eq.ctx, s); };
    CHECK(eq.c0 == P("b2*x1^2 + b12*x2^2 - b21*x1*x2 - b1*x2^3*x1^-1"));
    CHECK(eq.c1 == P("1/3*b10*x2^2 - 2/3*b012*x1*x2 + 1/3*b20*x1^2 + 2/3*b12*x0*x2 "
                     "- 1/3*b21*x0*x1 - b1*x0*x2^2*x1^-1"));
    CHECK(eq.c2 == P("-1/3*b01*x1*x2 + 1/3*b02*x1^2 + 2/3*b10*x0*x2 - 2/3*b012*x0*x1 "
                     "+ 1/3*b12*x0^2 - b1*x0^2*x2*x1^-1"));
    CHECK(eq.c3 == P("b0*x1^2 - b01*x0*x1 + b10*x0^2 - b1*x0^3*x1^-1"));
}

TEST_CASE("single-parameter examples") {
    auto ctx = x_ctx(QField{});
    auto zero = Poly<QField>::zero(ctx);
    BetaVector<QField> b;
    b.fill(zero);

    SUBCASE("all betas zero gives the trivial cover") {
        auto eq = local_equations(cover_from_beta(ctx, b), 2);
        CHECK(eq.c0.is_zero());
        CHECK(eq.c1.is_zero());
        CHECK(eq.c2.is_zero());
        CHECK(eq.c3.is_zero());
    }
    SUBCASE("b1 = 1 on U2") {
        b[1] = Poly<QField>::from_int(ctx, 1);
        auto eq = local_equations(cover_from_beta(ctx, b), 2);
        CHECK(eq.c0 == Poly<QField>::parse(eq.ctx, "x2^2"));
        CHECK(eq.c1.is_zero());
        CHECK(eq.c2.is_zero());
        CHECK(eq.c3.is_zero());
    }
    SUBCASE("b1 = 1 on U1 picks up the chart denominator") {
        b[1] = Poly<QField>::from_int(ctx, 1);
        auto eq = local_equations(cover_from_beta(ctx, b), 1);
        auto P = [&](const char* s) { return Poly<QField>::parse(eq.ctx, s); };
        CHECK(eq.c0 == P("-x2^3*x1^-1"));
        CHECK(eq.c1 == P("-x0*x2^2*x1^-1"));
        CHECK(eq.c2 == P("-x0^2*x2*x1^-1"));
        CHECK(eq.c3 == P("-x0^3*x1^-1"));
    }
}

TEST_CASE("beta round trip through U2 equations") {
    Rng rng(52301);
    FpField f31(31);
    auto ctx = x_ctx(f31);
    for (int trial = 0; trial < 25; ++trial) {
        auto b = random_beta<FpField>(ctx, rng);
        auto eq = local_equations(cover_from_beta(ctx, b), 2);
        auto back = beta_from_u2_equations(eq);
        for (int i = 0; i < 10; ++i) CHECK(cross_equal(b[i], back[i]));
    }

    auto qctx = x_ctx(QField{});
    BetaVector<QField> b;
    for (int i = 0; i < 10; ++i) b[i] = Poly<QField>::from_int(qctx, 2 * i - 7);
    auto back = beta_from_u2_equations(local_equations(cover_from_beta(qctx, b), 2));
    for (int i = 0; i < 10; ++i) CHECK(cross_equal(b[i], back[i]));
}

TEST_CASE("local equations are injective in the betas") {
    // The beta -> (c0..c3) map is linear; a zero quadruple forces beta = 0.
    Rng rng(52302);
    FpField f31(31);
    auto ctx = x_ctx(f31);
    for (int trial = 0; trial < 50; ++trial) {
        auto b = random_beta<FpField>(ctx, rng);
        bool all_zero = true;
        for (const auto& bi : b) all_zero = all_zero && bi.is_zero();
        if (all_zero) continue;
        auto eq = local_equations(cover_from_beta(ctx, b), 2);
        bool zero_eq = eq.c0.is_zero() && eq.c1.is_zero() && eq.c2.is_zero() && eq.c3.is_zero();
        CHECK_FALSE(zero_eq);
    }
}

TEST_CASE("chart multiplication closes into a rank-3 algebra") {
    // Symbolically over the rationals: mult matrices satisfy the defining
    // relations of a commutative associative algebra on {1, y_a, y_b}.
    auto ctx = beta_ctx(QField{});
    auto t = cover_from_beta(ctx, beta_vars<QField>(ctx));
    for (int chart = 0; chart < 3; ++chart) {
        auto eq = local_equations(t, chart);
        auto A = mult_matrix(eq, false);
        auto B = mult_matrix(eq, true);
        auto z = Poly<QField>::zero(eq.ctx);
        auto AB = pmat_mul(A, B, z);
        CHECK(pmat_eq(AB, pmat_mul(B, A, z)));
        auto I = [&](const Poly<QField>& c) {
            PMat<Poly<QField>> m(3, std::vector<Poly<QField>>(3, z));
            for (int i = 0; i < 3; ++i) m[i][i] = c;
            return m;
        };
        // A^2 = k_aa I + c1 A + c0 B, etc.
        auto scale = [&](const PMat<Poly<QField>>& m, const Poly<QField>& c) {
            auto r = m;
            for (auto& row : r)
                for (auto& e : row) e = e * c;
            return r;
        };
        CHECK(pmat_eq(pmat_mul(A, A, z), pmat_add(I(eq.k_aa), pmat_add(scale(A, eq.c1), scale(B, eq.c0)))));
        CHECK(pmat_eq(pmat_mul(B, B, z), pmat_add(I(eq.k_bb), pmat_add(scale(A, eq.c3), scale(B, eq.c2)))));
        CHECK(pmat_eq(AB, pmat_sub(I(eq.k_ab), pmat_add(scale(A, eq.c2), scale(B, eq.c1)))));
    }
}

TEST_CASE("already-normalized input is returned unchanged") {
    Rng rng(52303);
    FpField f31(31);
    auto ctx = x_ctx(f31);
    auto t = cover_from_beta(ctx, random_beta<FpField>(ctx, rng));
    auto r = annihilation_normalize(t);
    CHECK(triples_equal(r.triple, t));
    for (const auto& s : r.shift) CHECK(s.is_zero());
}

TEST_CASE("pure Euler-relation multiples normalize to zero") {
    Rng rng(52304);
    FpField f31(31);
    auto ctx = x_ctx(f31);
    auto x = xbar<FpField>(ctx);
    PMat<Poly<FpField>> C(3, std::vector<Poly<FpField>>(3, Poly<FpField>::zero(ctx)));
    for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b) {
            C[a][b] = random_linear<FpField>(ctx, rng);
            C[b][a] = C[a][b];
        }
    CoverTriple<FpField> t{ctx, {}};
    for (int i = 0; i < 3; ++i) {
        PMat<Poly<FpField>> m(3, std::vector<Poly<FpField>>(3, Poly<FpField>::zero(ctx)));
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) m[a][b] = x[i] * C[a][b];
        t.C[i] = m;
    }
    auto r = annihilation_normalize(t);
    for (int i = 0; i < 3; ++i)
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) CHECK(r.triple.C[i][a][b].is_zero());
    for (const auto& s : r.shift) CHECK(s.is_zero());
}

TEST_CASE("Euler-relation perturbations are removed exactly") {
    Rng rng(52305);
    FpField f31(31);
    auto ctx = x_ctx(f31);
    auto x = xbar<FpField>(ctx);
    for (int trial = 0; trial < 10; ++trial) {
        auto t = cover_from_beta(ctx, random_beta<FpField>(ctx, rng));
        auto pert = t;
        PMat<Poly<FpField>> C(3, std::vector<Poly<FpField>>(3, Poly<FpField>::zero(ctx)));
        for (int a = 0; a < 3; ++a)
            for (int b = a; b < 3; ++b) {
                C[a][b] = random_linear<FpField>(ctx, rng);
                C[b][a] = C[a][b];
            }
        for (int i = 0; i < 3; ++i)
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) pert.C[i][a][b] = pert.C[i][a][b] + x[i] * C[a][b];
        auto r = annihilation_normalize(pert);
        CHECK(triples_equal(r.triple, t));
        for (const auto& s : r.shift) CHECK(s.is_zero());
    }
}

TEST_CASE("y-shift round trip recovers the trace-free form") {
    Rng rng(52306);
    FpField f31(31);
    auto ctx = x_ctx(f31);
    auto three = Poly<FpField>::from_int(ctx, 3);
    for (int trial = 0; trial < 10; ++trial) {
        auto t = cover_from_beta(ctx, random_beta<FpField>(ctx, rng));
        auto s = random_legal_shift<FpField>(ctx, rng);
        auto shifted = apply_y_shift(t, s);

        auto ann = annihilation_normalize(shifted);
        CHECK(is_annihilating(ann.triple));
        for (const auto& sh : ann.shift) CHECK(sh.is_zero());

        // In the shifted coordinates the trace of mult-by-y_i is 3 s_i.
        auto v = trace_vector(ann.triple);
        for (int i = 0; i < 3; ++i) CHECK(v[i] == three * s[i]);

        auto tf = trace_free_normalize(ann.triple);
        CHECK(triples_equal(tf.triple, t));
        for (int i = 0; i < 3; ++i) CHECK(tf.shift[i] == -s[i]);
    }
}

TEST_CASE("trace vector matches the chart multiplication traces") {
    Rng rng(52307);
    FpField f31(31);
    auto ctx = x_ctx(f31);
    auto t = cover_from_beta(ctx, random_beta<FpField>(ctx, rng));
    auto s = random_legal_shift<FpField>(ctx, rng);
    auto ann = annihilation_normalize(apply_y_shift(t, s));
    auto v = trace_vector(ann.triple);

    // U2 chart: trace of mult-by-y_a is D_a[a][a] + D_b[a][b].
    auto cctx = Context<FpField>::make(ctx->field, ctx->vars, "x2");
    auto inv_x2 = *Poly<FpField>::variable(cctx, "x2").unit_inverse();
    auto D = [&](int i, int r, int c) {
        return ann.triple.C[i][r][c].rename_into(cctx) -
               Poly<FpField>::variable(cctx, "x" + std::to_string(i)) * inv_x2 *
                   ann.triple.C[2][r][c].rename_into(cctx);
    };
    for (int a = 0; a < 2; ++a) {
        int b = 1 - a;
        auto chart_trace = D(a, a, a) + D(b, a, b);
        CHECK(chart_trace == v[a].rename_into(cctx));
    }
}

TEST_CASE("random certificates normalize to a beta form") {
    Rng rng(52308);
    FpField f31(31);
    auto ctx = x_ctx(f31);
    for (int trial = 0; trial < 30; ++trial) {
        auto t = cover_from_certificates<FpField>(random_certificates<FpField>(ctx, rng));
        CHECK(is_annihilating(t));
        auto tf = trace_free_normalize(t);
        auto b = beta_of_triple(tf.triple);
        CHECK(triples_equal(cover_from_beta(ctx, b), tf.triple));
        auto eq = local_equations(tf.triple, 2);
        auto back = beta_from_u2_equations(eq);
        for (int i = 0; i < 10; ++i) CHECK(cross_equal(b[i], back[i]));
    }
}

TEST_CASE("chart consistency check and its negative control") {
    auto ctx = x_ctx(QField{});
    BetaVector<QField> b;
    for (int i = 0; i < 10; ++i) b[i] = Poly<QField>::from_int(ctx, 3 * i - 11);
    auto t = cover_from_beta(ctx, b);
    auto u0 = local_equations(t, 0);
    auto u1 = local_equations(t, 1);
    auto u2 = local_equations(t, 2);
    CHECK(chart_consistency_check(u0, u1, u2).pass);

    auto corrupted = u1;
    corrupted.c2 = corrupted.c2 + Poly<QField>::parse(u1.ctx, "x1^2");
    auto r = chart_consistency_check(u0, corrupted, u2);
    CHECK_FALSE(r.pass);
    CHECK(r.witness == "U1: c2");

    auto bad2 = u2;
    bad2.c0 = bad2.c0 + Poly<QField>::parse(u2.ctx, "x0*x1");
    CHECK_FALSE(chart_consistency_check(u0, u1, bad2).pass);
}

TEST_CASE("spec validation") {
    auto ctx = x_ctx(QField{});
    BetaVector<QField> b;
    for (int i = 0; i < 10; ++i) b[i] = Poly<QField>::from_int(ctx, i - 4);
    auto t = cover_from_beta(ctx, b);

    CoverHomSpec<QField> both{t, b};
    validate_spec(both);

    auto wrong = b;
    wrong[3] = Poly<QField>::from_int(ctx, 99);
    CoverHomSpec<QField> bad{t, wrong};
    CHECK_THROWS_AS(validate_spec(bad), verify_error);

    CoverHomSpec<QField> none{std::nullopt, std::nullopt};
    CHECK_THROWS_AS(validate_spec(none), input_error);
}

TEST_CASE("input validation") {
    auto ctx = x_ctx(QField{});
    auto zero = Poly<QField>::zero(ctx);
    auto x2sq = Poly<QField>::parse(ctx, "x2^2");

    SUBCASE("illegal y-shift") {
        BetaVector<QField> b;
        b.fill(zero);
        auto t = cover_from_beta(ctx, b);
        CHECK_THROWS_AS(apply_y_shift(t, {x2sq, zero, zero}), input_error);
    }
    SUBCASE("triple violating the chart relations") {
        PMat<Poly<QField>> z3(3, std::vector<Poly<QField>>(3, zero));
        CoverTriple<QField> t{ctx, {z3, z3, z3}};
        t.C[0][0][0] = x2sq;
        CHECK_THROWS_AS(annihilation_normalize(t), input_error);
    }
    SUBCASE("asymmetric certificate") {
        PMat<Poly<QField>> z3(3, std::vector<Poly<QField>>(3, zero));
        auto n = z3;
        n[0][1] = x2sq;
        CHECK_THROWS_AS(cover_from_certificates<QField>({n, z3, z3}), input_error);
    }
}

TEST_CASE("cover homomorphisms over the Eisenstein field") {
    QOmegaField qw;
    auto ctx = x_ctx(qw);
    BetaVector<QOmegaField> b;
    auto om = Poly<QOmegaField>::constant(ctx, qw.cube_root_of_unity());
    for (int i = 0; i < 10; ++i)
        b[i] = Poly<QOmegaField>::from_int(ctx, i) + (i % 2 ? om : Poly<QOmegaField>::zero(ctx));
    auto t = cover_from_beta(ctx, b);
    auto back = beta_from_u2_equations(local_equations(t, 2));
    for (int i = 0; i < 10; ++i) CHECK(cross_equal(b[i], back[i]));
    CHECK(chart_consistency_check(local_equations(t, 0), local_equations(t, 1),
                                  local_equations(t, 2))
              .pass);
}
