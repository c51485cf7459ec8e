#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "ab13/field.hpp"
#include "ab13/moduli.hpp"
#include "ab13/rng.hpp"
#include "ab13/surface_ring.hpp"

using namespace ab13;

namespace {

template <class F>
std::array<typename F::Elem, 4> embed4(const std::array<typename F::Elem, 3>& a) {
    return {a[0], a[1], a[1], a[2]};
}

template <class F>
std::array<typename F::Elem, 4> elems4(const F& f, std::array<long, 4> v) {
    return {f.from_int(v[0]), f.from_int(v[1]), f.from_int(v[2]), f.from_int(v[3])};
}

template <class F>
std::array<typename F::Elem, 3> elems3(const F& f, std::array<long, 3> v) {
    return {f.from_int(v[0]), f.from_int(v[1]), f.from_int(v[2])};
}

template <class F>
bool same_point_set(const std::array<std::array<typename F::Elem, 2>, 3>& a,
                    const std::array<std::array<typename F::Elem, 2>, 3>& b) {
    std::array<bool, 3> used{};
    for (const auto& p : a) {
        bool hit = false;
        for (std::size_t j = 0; j < 3 && !hit; ++j)
            if (!used[j] && b[j][0] == p[0] && b[j][1] == p[1]) used[j] = hit = true;
        if (!hit) return false;
    }
    return true;
}

template <class F>
Matrix<F> random_gl2(const F& field, Rng& rng) {
    for (;;) {
        Matrix<F> g(field, 2, 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) g.at(i, j) = field.random(rng);
        if (!g.det().is_zero()) return g;
    }
}

}  // namespace

TEST_CASE("distinctness closed forms") {
    QField q;
    CHECK(distinctness(q, elems4(q, {0, 2, 2, 0})) == q.from_int(-48));
    CHECK(distinctness(q, elems4(q, {0, 0, 0, 0})).is_zero());
    CHECK(distinctness(q, elems4(q, {1, 0, 0, 1})) == q.one());
    CHECK(distinctness(q, elems4(q, {1, 0, 0, 0})).is_zero());

    FpField f(31);
    auto lam = f.from_int(3);
    auto quart = lam * lam * lam * lam;
    CHECK(distinctness(f, {f.zero(), lam, lam, f.zero()}) == f.from_int(-3) * quart);
}

TEST_CASE("three points of the standard chain configuration") {
    auto expect = [](const auto& field) {
        using Fld = std::decay_t<decltype(field)>;
        auto pts = three_points(field, elems4(field, {0, 1, 1, 0}));
        std::array<std::array<typename Fld::Elem, 2>, 3> want = {
            std::array<typename Fld::Elem, 2>{field.from_int(2), field.from_int(-1)},
            std::array<typename Fld::Elem, 2>{field.from_int(-1), field.from_int(2)},
            std::array<typename Fld::Elem, 2>{field.from_int(-1), field.from_int(-1)}};
        CHECK(pts == want);
    };
    expect(QField{});
    expect(QOmegaField{});
    expect(FpField(31));
}

TEST_CASE("three points round-trip through random configurations") {
    FpField f(31);
    Rng rng(4021);
    int done = 0;
    for (int trial = 0; trial < 120 && done < 40; ++trial) {
        std::array<std::array<FpElem, 2>, 3> pts;
        for (int i = 0; i < 2; ++i) pts[i] = {f.random(rng), f.random(rng)};
        pts[2] = {-(pts[0][0] + pts[1][0]), -(pts[0][1] + pts[1][1])};

        Matrix<FpField> ev(f, 3, 3);
        for (std::size_t i = 0; i < 3; ++i) {
            ev.at(i, 0) = f.one();
            ev.at(i, 1) = pts[i][0];
            ev.at(i, 2) = pts[i][1];
        }
        if (ev.det().is_zero()) continue;  // coincident or collinear draw
        ++done;

        auto row = [&](int py, int pz) {
            std::vector<FpElem> vals;
            for (const auto& p : pts) {
                FpElem v = f.one();
                for (int k = 0; k < py; ++k) v = v * p[0];
                for (int k = 0; k < pz; ++k) v = v * p[1];
                vals.push_back(v);
            }
            auto sol = ev.solve(vals);
            REQUIRE(sol);
            return *sol;
        };
        auto yy = row(2, 0), yz = row(1, 1), zz = row(0, 2);
        std::array<FpElem, 4> alpha = {yy[2], yy[1], -yz[1], zz[1]};

        // the products of any barycentric configuration fit the displayed shape
        auto tab = detail::point_table(f, alpha);
        CHECK(yy[0] == tab[0][0]);
        CHECK(yz[0] == tab[1][0]);
        CHECK(yz[2] == tab[1][2]);
        CHECK(zz[0] == tab[2][0]);
        CHECK(zz[2] == tab[2][2]);

        CHECK(!distinctness(f, alpha).is_zero());
        CHECK(same_point_set<FpField>(three_points(f, alpha), pts));
    }
    CHECK(done == 40);
}

TEST_CASE("degenerate and irrational configurations are reported") {
    QField q;
    CHECK_THROWS_AS(three_points(q, elems4(q, {0, 0, 0, 0})), input_error);
    CHECK_THROWS_AS(three_points(q, elems4(q, {1, 0, 0, 0})), input_error);

    // distinct points, but only over a cubic extension
    auto hard = elems4(q, {2, 0, 0, 3});
    CHECK(distinctness(q, hard) == q.from_int(36));
    CHECK_THROWS_AS(three_points(q, hard), input_error);
}

TEST_CASE("table transform realizes the printed action table") {
    FpField f(31);
    Rng rng(977);
    for (int trial = 0; trial < 10; ++trial) {
        std::array<FpElem, 3> a = {f.random(rng), f.random(rng), f.random(rng)};
        for (const auto& w : s3_words()) {
            auto lhs = table_transform(f, embed4<FpField>(a), s3_matrix(f, w));
            CHECK(lhs == embed4<FpField>(s3_act(f, w, a)));
        }
    }

    QField q;
    auto a = elems3(q, {1, 2, 5});
    for (const auto& w : s3_words()) {
        auto lhs = table_transform(q, embed4<QField>(a), s3_matrix(q, w));
        CHECK(lhs == embed4<QField>(s3_act(q, w, a)));
    }

    // full reversal under the swap, also outside the symmetric slice
    auto gen = elems4(q, {1, 4, 2, 3});
    CHECK(table_transform(q, gen, s3_matrix(q, "r")) == elems4(q, {3, 2, 4, 1}));

    Matrix<QField> sing(q, 2, 2);
    sing.at(0, 0) = q.one();
    sing.at(1, 0) = q.one();
    CHECK_THROWS_AS(table_transform(q, gen, sing), input_error);
}

TEST_CASE("beta normalization reaches the standard chain") {
    FpField f(31);
    Rng rng(15551);

    auto sp = surface_params(f, {0, 2, 2, 0}, {0, 1, 1, 0});
    auto idres = normalize_beta(sp);
    CHECK(idres.g == Matrix<FpField>::identity(f, 2));
    CHECK(idres.params.alpha == sp.alpha);
    CHECK(idres.params.beta == sp.beta);

    auto std_beta = elems4(f, {0, 1, 1, 0});
    for (int trial = 0; trial < 15; ++trial) {
        auto a = f.random(rng);
        if (a.is_zero()) continue;
        std::array<FpElem, 4> alpha0 = {f.zero(), a, a, f.zero()};
        auto g = random_gl2(f, rng);
        SurfaceParams<FpField> moved{f, table_transform(f, alpha0, g),
                                     table_transform(f, std_beta, g)};
        CHECK(check_moduli_equation(moved.alpha, moved.beta).is_zero());

        auto res = normalize_beta(moved);
        CHECK(res.params.beta == std_beta);
        CHECK(res.params.alpha[2] == res.params.alpha[1]);
        std::array<FpElem, 3> back = {res.params.alpha[0], res.params.alpha[1],
                                      res.params.alpha[3]};
        auto rep = orbit_equivalent(f, std::array<FpElem, 3>{f.zero(), a, f.zero()}, back);
        CHECK(rep.equivalent);
        CHECK(rep.warning.empty());
    }

    QField q;
    auto qsp = surface_params(q, {0, 3, 3, 0}, {0, 1, 1, 0});
    Matrix<QField> qg(q, 2, 2);
    qg.at(0, 0) = q.from_int(2);
    qg.at(0, 1) = q.from_int(1);
    qg.at(1, 0) = q.from_int(1);
    qg.at(1, 1) = q.from_int(1);
    SurfaceParams<QField> qmoved{q, table_transform(q, qsp.alpha, qg),
                                 table_transform(q, qsp.beta, qg)};
    auto qres = normalize_beta(qmoved);
    CHECK(qres.params.beta == qsp.beta);

    CHECK_THROWS_AS(normalize_beta(surface_params(f, {0, 2, 2, 0}, {1, 0, 0, 0})), input_error);
}

TEST_CASE("normalized ideal matches a fiber substitution") {
    FpField f(31);
    auto sp0 = surface_params(f, {0, 5, 5, 0}, {0, 1, 1, 0});
    Matrix<FpField> g(f, 2, 2);
    g.at(0, 0) = f.from_int(2);
    g.at(0, 1) = f.from_int(1);
    g.at(1, 0) = f.from_int(1);
    g.at(1, 1) = f.from_int(1);
    SurfaceParams<FpField> sp1{f, table_transform(f, sp0.alpha, g),
                               table_transform(f, sp0.beta, g)};
    auto id0 = build_ideal(sp0);
    auto id1 = build_ideal(sp1);

    using P = Poly<FpField>;
    auto wnames = detail::fiber_names(id0);
    auto subst_gen = [&](const P& gen, const Matrix<FpField>& m) {
        std::vector<P> images;
        for (const auto& v : id1.ctx->vars) {
            if (v.name == wnames[0] || v.name == wnames[1]) {
                std::size_t k = v.name == wnames[0] ? 0 : 1;
                images.push_back(P::variable(id0.ctx, wnames[k]).scaled(m.at(0, 0)) +
                                 P::variable(id0.ctx, wnames[k + 2]).scaled(m.at(1, 0)));
            } else if (v.name == wnames[2] || v.name == wnames[3]) {
                std::size_t k = v.name == wnames[2] ? 0 : 1;
                images.push_back(P::variable(id0.ctx, wnames[k]).scaled(m.at(0, 1)) +
                                 P::variable(id0.ctx, wnames[k + 2]).scaled(m.at(1, 1)));
            } else {
                images.push_back(P::variable(id0.ctx, v.name));
            }
        }
        return gen.subst(id0.ctx, images);
    };

    auto gi = *g.inverse();
    std::array<std::pair<const char*, Matrix<FpField>>, 4> cands = {
        std::make_pair("g", g), std::make_pair("gi", gi),
        std::make_pair("gt", g.transpose()), std::make_pair("git", gi.transpose())};
    for (const auto& [name, m] : cands) {
        int good = 0;
        for (const auto& gen : id1.gens)
            if (!detail::generator_span_witness(id0.ctx, id0.gens, wnames, subst_gen(gen, m)))
                ++good;
        MESSAGE(name << ": " << good << "/9");
    }

    // a mismatched substitution must leave the span
    Matrix<FpField> bad = g;
    bad.at(0, 0) = f.from_int(3);
    bool escaped = false;
    for (const auto& gen : id1.gens)
        escaped = escaped ||
                  detail::generator_span_witness(id0.ctx, id0.gens, wnames, subst_gen(gen, bad))
                      .has_value();
    CHECK(escaped);
}

TEST_CASE("delta coordinates and symmetric invariants") {
    QField q;
    auto rep = delta_coords(q, elems3(q, {1, 2, 3}));
    CHECK(rep.standard_action);
    CHECK(rep.delta == elems3(q, {6, 2, -6}));
    CHECK(moduli_invariants(q, elems3(q, {1, 2, 3})) == elems3(q, {2, -36, -72}));

    auto pt = moduli_point(q, elems3(q, {1, 2, 3}));
    CHECK(pt.alpha3 == elems3(q, {1, 2, 3}));
    CHECK(pt.invariants == elems3(q, {2, -36, -72}));

    FpField f(31);
    Rng rng(606);
    for (int trial = 0; trial < 10; ++trial) {
        std::array<FpElem, 3> a = {f.random(rng), f.random(rng), f.random(rng)};
        auto inv = moduli_invariants(f, a);
        for (const auto& w : s3_words()) CHECK(moduli_invariants(f, s3_act(f, w, a)) == inv);
    }
}

TEST_CASE("group relations and the printed rows") {
    FpField f(31);
    Rng rng(81);
    for (int trial = 0; trial < 10; ++trial) {
        std::array<FpElem, 3> a = {f.random(rng), f.random(rng), f.random(rng)};
        CHECK(s3_act(f, "sss", a) == a);
        CHECK(s3_act(f, "rr", a) == a);
        CHECK(s3_act(f, "ss", a) ==
              std::array<FpElem, 3>{-a[2], a[1] - a[2], a[0] - a[2]});
        CHECK(s3_act(f, "rs", a) ==
              std::array<FpElem, 3>{a[0] - a[2], a[1] - a[2], -a[2]});
        CHECK(s3_act(f, "rss", a) ==
              std::array<FpElem, 3>{-a[0], -a[0] + a[1], -a[0] + a[2]});
    }
    CHECK_THROWS_AS(s3_act(f, "sq", std::array<FpElem, 3>{f.one(), f.one(), f.one()}),
                    input_error);
}

TEST_CASE("orbit equivalence and the bielliptic locus") {
    QField q;
    auto rep = orbit_equivalent(q, elems3(q, {1, 0, 0}), elems3(q, {0, 0, 1}));
    CHECK(rep.equivalent);
    CHECK(rep.invariants_equal);
    CHECK(rep.warning.empty());

    auto rep2 = orbit_equivalent(q, elems3(q, {1, 0, 0}), elems3(q, {1, 1, 1}));
    CHECK(!rep2.equivalent);
    CHECK(!rep2.invariants_equal);
    CHECK(rep2.warning.empty());

    CHECK(is_bielliptic_locus(q, elems3(q, {5, 0, 7})));
    CHECK(is_bielliptic_locus(q, elems3(q, {1, 1, 1})));
    FpField f(31);
    CHECK(!is_bielliptic_locus(f, elems3(f, {0, 5, 0})));
}

TEST_CASE("the branch family is admissible for every modulus") {
    QField q;
    for (long l : {1L, 2L, 3L, 7L}) {
        auto sp = bl_family_params(q, q.from_int(l));
        CHECK(check_moduli_equation(sp.alpha, sp.beta).is_zero());
    }
}
