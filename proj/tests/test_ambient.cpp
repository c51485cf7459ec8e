#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ab13/euler_charts.hpp"

using namespace ab13;

namespace {
using QP = Poly<QField>;
}

TEST_CASE("euler presentations") {
    auto p = build_euler_ring(QField{}, 0, 1);
    REQUIRE(p.relations.size() == 1);
    CHECK(p.relations[0].str() == "x0*y0 + x1*y1 + x2*y2");
    CHECK(p.ctx->vars[3].weight == 2);
    CHECK(p.ctx->vars[0].weight == 1);

    auto p1 = build_euler_ring(QField{}, 1, 1);
    CHECK(p1.ctx->vars[3].weight == 3);
    CHECK(p1.relations[0].homogeneous_degree() == 4);

    auto p2 = build_euler_ring(QField{}, 0, 2);
    REQUIRE(p2.relations.size() == 2);
    CHECK(p2.relations[1].str() == "x0*z0 + x1*z1 + x2*z2");
    CHECK(p2.fiber == std::vector<std::string>{"y0", "y1", "y2", "z0", "z1", "z2"});

    CHECK_THROWS_AS(build_euler_ring(QField{}, -1, 1), input_error);
    CHECK_THROWS_AS(build_euler_ring(QField{}, 0, 3), input_error);
    CHECK_THROWS_AS(build_euler_ring(QField{}, 1, 2), input_error);
}

TEST_CASE("trivialization charts") {
    auto p = build_euler_ring(QField{}, 0, 1);

    auto u2 = trivialize(p, "x2");
    CHECK(u2.basis == std::vector<std::string>{"y0", "y1"});
    CHECK(u2.inverted_x == 2);
    CHECK(u2.back_map[2] == QP::parse(u2.ctx, "-(x0*y0 + x1*y1)/x2"));
    CHECK(u2.back_map[0] == QP::variable(u2.ctx, "y0"));

    auto u1 = trivialize(p, "x1");
    CHECK(u1.basis == std::vector<std::string>{"y0", "y2"});
    CHECK(u1.back_map[1] == QP::parse(u1.ctx, "-(x0*y0 + x2*y2)/x1"));

    auto u0 = trivialize(p, "x0");
    CHECK(u0.basis == std::vector<std::string>{"y1", "y2"});

    auto p2 = build_euler_ring(QField{}, 0, 2);
    auto v2 = trivialize(p2, "x2");
    CHECK(v2.basis == std::vector<std::string>{"y0", "y1", "z0", "z1"});
    CHECK(v2.back_map[5] == QP::parse(v2.ctx, "-(x0*z0 + x1*z1)/x2"));
}

TEST_CASE("transitions compose to the identity") {
    auto p = build_euler_ring(QField{}, 0, 1);
    auto u0 = trivialize(p, "x0");
    auto u1 = trivialize(p, "x1");
    auto u2 = trivialize(p, "x2");

    // Rewriting U1 data into U2 coordinates: y2's image is the displayed one.
    auto t21 = transition(p, u2, u1);
    REQUIRE(t21.size() == u1.ctx->vars.size());
    CHECK(t21[u1.ctx->index_of("y0")] == QP::variable(u2.ctx, "y0"));
    CHECK(t21[u1.ctx->index_of("y2")] == QP::parse(u2.ctx, "-(x0/x2)*y0 - (x1/x2)*y1"));

    // Identity transition.
    auto t22 = transition(p, u2, u2);
    for (std::size_t v = 0; v < u2.ctx->vars.size(); ++v)
        CHECK(t22[v] == QP::variable(u2.ctx, v));

    // Round trip U1 -> U2 -> U1 on a sample chart polynomial; the image picks
    // up x2 denominators, so the return leg runs in cleared form.
    auto q = QP::parse(u1.ctx, "y2^2 + x0*y0 - 3*y0*y2");
    auto [r, k1] = transport_cleared(p, u1, u2, q);
    auto [s, k2] = transport_cleared(p, u2, u1, r);
    CHECK(s == q * QP::variable(u1.ctx, "x1").pow(k1) * QP::variable(u1.ctx, "x2").pow(k2));

    // Triple composition U2 -> U1 -> U0 -> U2 is the identity, again in
    // cleared form: the net effect is multiplication by the cleared powers.
    auto r2q = QP::parse(u2.ctx, "y0*y1 - x2^2 + x0*x1");
    auto [a, ka] = transport_cleared(p, u2, u1, r2q);
    auto [b, kb] = transport_cleared(p, u1, u0, a);
    auto [c, kc] = transport_cleared(p, u0, u2, b);
    CHECK(c == r2q * QP::variable(u2.ctx, "x2").pow(ka) * QP::variable(u2.ctx, "x1").pow(kb) *
                   QP::variable(u2.ctx, "x0").pow(kc));
}

TEST_CASE("unprojection variable") {
    auto p = build_euler_ring(QField{}, 0, 2);
    auto u2 = trivialize(p, "x2");
    auto up = unprojection_t(p, u2);
    CHECK(up.t == QP::parse(u2.ctx, "(y0*z1 - y1*z0)/x2"));
    CHECK(up.t.homogeneous_degree() == 3);
    CHECK(up.sign == +1);

    CHECK_THROWS_AS(unprojection_t(build_euler_ring(QField{}, 0, 1), trivialize(build_euler_ring(QField{}, 0, 1), "x2")),
                    input_error);

    // Chart consistency: the cleared identity x1 * t(U1) transports to
    // x1 * t(U2) under the U1 -> U2 rewriting.
    auto u1 = trivialize(p, "x1");
    auto up1 = unprojection_t(p, u1);
    auto cleared = up1.t * QP::variable(u1.ctx, "x1");  // polynomial in the basis
    CHECK(cleared.min_degree_in(u1.ctx->index_of("x1")) >= 0);
    auto transported = cleared.subst(u2.ctx, transition(p, u2, u1));
    CHECK(transported == up.t * QP::variable(u2.ctx, "x1"));

    auto u0 = trivialize(p, "x0");
    auto up0 = unprojection_t(p, u0);
    auto cleared0 = up0.t * QP::variable(u0.ctx, "x0");
    auto transported0 = cleared0.subst(u2.ctx, transition(p, u2, u0));
    CHECK(transported0 == up.t * QP::variable(u2.ctx, "x0"));
}

TEST_CASE("charts work over prime fields") {
    auto p = build_euler_ring(FpField(31), 0, 2);
    auto u2 = trivialize(p, "x2");
    CHECK(u2.basis.size() == 4);
    auto up = unprojection_t(p, u2);
    CHECK(up.t.homogeneous_degree() == 3);
}
