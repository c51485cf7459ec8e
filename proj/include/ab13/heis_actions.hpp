#pragma once

// Extended Heisenberg actions on the plane coordinates and the trace-free
// cover basis, and the linear constraint systems they impose on the ten
// beta-parameters of a cover homomorphism.
//
// The three generators act as
//   sigma(x_i, y_j) = (x_{i+1}, xi^a y_{j+1})
//   iota (x_i, y_j) = (x_{-i}, (-1)^b y_{-j})
//   tau  (x_i, y_j) = (xi^i x_i, xi^{c-j} y_j)
// with indices mod 3 and xi a primitive cube root of unity.  Constraints are
// never transcribed from closed-form tables: derive_constraints applies the
// substitution to the local chart equations, transports the result to the
// image chart, and equates coefficients, so every relation it returns is
// recomputed from the cover structure itself.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ab13/triple_cover.hpp"

namespace ab13 {

enum class Generator { sigma, iota, tau };

// x_only covers the projective-plane action; x_and_y adds one trace-free
// cover basis, x_y_z the two-copy basis used in the twist classification.
enum class ActionScope { x_only, x_and_y, x_y_z };

namespace detail {
inline int mod3(int k) { return ((k % 3) + 3) % 3; }
inline int mod2(int k) { return ((k % 2) + 2) % 2; }
}  // namespace detail

struct GroupAction {
    Generator generator = Generator::sigma;
    ActionScope scope = ActionScope::x_and_y;
    int twist = 0;         // a mod 3, b mod 2, c mod 3; first-copy twist for x_y_z
    int second_twist = 0;  // second-copy twist for x_y_z scope

    static GroupAction sigma(int a) {
        return {Generator::sigma, ActionScope::x_and_y, detail::mod3(a), 0};
    }
    static GroupAction iota(int b) {
        return {Generator::iota, ActionScope::x_and_y, detail::mod2(b), 0};
    }
    static GroupAction tau(int c) {
        return {Generator::tau, ActionScope::x_and_y, detail::mod3(c), 0};
    }
    static GroupAction sigma_plane() { return {Generator::sigma, ActionScope::x_only, 0, 0}; }
    static GroupAction iota_plane() { return {Generator::iota, ActionScope::x_only, 0, 0}; }
    static GroupAction tau_plane() { return {Generator::tau, ActionScope::x_only, 0, 0}; }
    static GroupAction sigma_pair(int m, int n) {
        return {Generator::sigma, ActionScope::x_y_z, detail::mod3(m), detail::mod3(n)};
    }
    static GroupAction iota_pair(int by, int bz) {
        return {Generator::iota, ActionScope::x_y_z, detail::mod2(by), detail::mod2(bz)};
    }
    static GroupAction tau_pair(int m, int n) {
        return {Generator::tau, ActionScope::x_y_z, detail::mod3(m), detail::mod3(n)};
    }
};

// Substitution form of an action: x_i -> xscale[i] x_{xperm[i]} and likewise
// for the cover bases.  Every action here permutes and scales variables, so
// this shape is closed under composition and inversion.
template <class F>
struct SubstAction {
    using Elem = typename F::Elem;
    F field;
    ActionScope scope = ActionScope::x_and_y;
    std::array<int, 3> xperm{0, 1, 2};
    std::array<Elem, 3> xscale;
    std::array<int, 3> yperm{0, 1, 2};
    std::array<Elem, 3> yscale;
    std::array<int, 3> zperm{0, 1, 2};
    std::array<Elem, 3> zscale;

    explicit SubstAction(F f, ActionScope s = ActionScope::x_and_y)
        : field(std::move(f)),
          scope(s),
          xscale{field.one(), field.one(), field.one()},
          yscale{field.one(), field.one(), field.one()},
          zscale{field.one(), field.one(), field.one()} {}
};

template <class F>
SubstAction<F> substitution(const F& field, const GroupAction& g) {
    bool needs_xi = g.generator == Generator::tau ||
                    (g.generator == Generator::sigma &&
                     g.scope != ActionScope::x_only &&
                     (detail::mod3(g.twist) != 0 || (g.scope == ActionScope::x_y_z &&
                                                     detail::mod3(g.second_twist) != 0)));
    if (needs_xi && !field.has_cube_root_of_unity())
        throw input_error("action requires a cube root of unity in " + field.name());

    SubstAction<F> act(field, g.scope);
    auto cycle = std::array<int, 3>{1, 2, 0};   // i -> i+1
    auto negate = std::array<int, 3>{0, 2, 1};  // i -> -i
    switch (g.generator) {
        case Generator::sigma: {
            act.xperm = cycle;
            act.yperm = cycle;
            act.zperm = cycle;
            for (int j = 0; j < 3; ++j) {
                act.yscale[j] = xi_pow(field, g.twist);
                act.zscale[j] = xi_pow(field, g.scope == ActionScope::x_y_z ? g.second_twist
                                                                           : g.twist);
            }
            break;
        }
        case Generator::iota: {
            act.xperm = negate;
            act.yperm = negate;
            act.zperm = negate;
            auto sign = [&](int b) {
                return detail::mod2(b) == 0 ? field.one() : -field.one();
            };
            for (int j = 0; j < 3; ++j) {
                act.yscale[j] = sign(g.twist);
                act.zscale[j] = sign(g.scope == ActionScope::x_y_z ? g.second_twist : g.twist);
            }
            break;
        }
        case Generator::tau: {
            for (int i = 0; i < 3; ++i) act.xscale[i] = xi_pow(field, i);
            for (int j = 0; j < 3; ++j) {
                act.yscale[j] = xi_pow(field, g.twist - j);
                act.zscale[j] = xi_pow(field, (g.scope == ActionScope::x_y_z ? g.second_twist
                                                                            : g.twist) -
                                                  j);
            }
            break;
        }
    }
    if (g.scope == ActionScope::x_only) {
        act.yperm = {0, 1, 2};
        act.zperm = {0, 1, 2};
        for (int j = 0; j < 3; ++j) act.yscale[j] = act.zscale[j] = field.one();
    }
    return act;
}

// compose(f, g) applies g first: the image of x_i is g, then f on its result.
template <class F>
SubstAction<F> compose(const SubstAction<F>& f, const SubstAction<F>& g) {
    SubstAction<F> r(f.field, f.scope);
    for (int i = 0; i < 3; ++i) {
        r.xperm[i] = f.xperm[g.xperm[i]];
        r.xscale[i] = g.xscale[i] * f.xscale[g.xperm[i]];
        r.yperm[i] = f.yperm[g.yperm[i]];
        r.yscale[i] = g.yscale[i] * f.yscale[g.yperm[i]];
        r.zperm[i] = f.zperm[g.zperm[i]];
        r.zscale[i] = g.zscale[i] * f.zscale[g.zperm[i]];
    }
    return r;
}

template <class F>
SubstAction<F> inverse(const SubstAction<F>& a) {
    SubstAction<F> r(a.field, a.scope);
    for (int i = 0; i < 3; ++i) {
        r.xperm[a.xperm[i]] = i;
        r.xscale[a.xperm[i]] = a.field.one() / a.xscale[i];
        r.yperm[a.yperm[i]] = i;
        r.yscale[a.yperm[i]] = a.field.one() / a.yscale[i];
        r.zperm[a.zperm[i]] = i;
        r.zscale[a.zperm[i]] = a.field.one() / a.zscale[i];
    }
    return r;
}

template <class F>
bool is_identity(const SubstAction<F>& a) {
    for (int i = 0; i < 3; ++i) {
        if (a.xperm[i] != i || !(a.xscale[i] == a.field.one())) return false;
        if (a.scope == ActionScope::x_only) continue;
        if (a.yperm[i] != i || !(a.yscale[i] == a.field.one())) return false;
        if (a.scope == ActionScope::x_y_z &&
            (a.zperm[i] != i || !(a.zscale[i] == a.field.one())))
            return false;
    }
    return true;
}

// If a = lambda * b as variable maps (same permutations, one global ratio on
// the x-scales), returns lambda.  Used for the projective commutation check.
template <class F>
std::optional<typename F::Elem> projective_ratio(const SubstAction<F>& a,
                                                 const SubstAction<F>& b) {
    if (a.xperm != b.xperm) return std::nullopt;
    auto lambda = a.xscale[0] / b.xscale[0];
    for (int i = 1; i < 3; ++i)
        if (!(a.xscale[i] == lambda * b.xscale[i])) return std::nullopt;
    return lambda;
}

// A reduced homogeneous linear system in the ten beta-parameters.  rows()
// of `relations` equals the rank; solutions() is the canonical nullspace
// basis, one vector per free parameter.
template <class F>
struct ConstraintSystem {
    F field;
    std::vector<std::string> unknowns;
    Matrix<F> relations;

    std::size_t rank() const { return relations.rows(); }
    std::size_t solution_dim() const { return unknowns.size() - rank(); }
    std::vector<std::vector<typename F::Elem>> solutions() const {
        return relations.nullspace();
    }
    bool same_relations(const ConstraintSystem& o) const {
        return unknowns == o.unknowns && Matrix<F>::same_row_space(relations, o.relations);
    }
};

namespace detail {

template <class F>
ConstraintSystem<F> reduce_system(F field, std::vector<std::string> unknowns,
                                  const std::vector<std::vector<typename F::Elem>>& raw) {
    Matrix<F> m(field, raw.size(), unknowns.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
        for (std::size_t j = 0; j < unknowns.size(); ++j) m.at(i, j) = raw[i][j];
    auto pivots = m.rref();
    Matrix<F> reduced(field, pivots.size(), unknowns.size());
    for (std::size_t i = 0; i < pivots.size(); ++i)
        for (std::size_t j = 0; j < unknowns.size(); ++j) reduced.at(i, j) = m.at(i, j);
    return {std::move(field), std::move(unknowns), std::move(reduced)};
}

}  // namespace detail

// Context with the plane coordinates plus the ten beta-parameters as
// weight-zero variables; the symbolic spec built on it feeds the derivation.
template <class F>
typename Poly<F>::CtxPtr beta_parameter_context(const F& field) {
    std::vector<VarInfo> vars = {{"x0", 1}, {"x1", 1}, {"x2", 1}};
    for (const char* n : beta_names()) vars.push_back({n, 0});
    return Context<F>::make(field, vars);
}

template <class F>
CoverHomSpec<F> symbolic_cover_spec(const std::shared_ptr<const Context<F>>& ctx) {
    CoverHomSpec<F> spec;
    BetaVector<F> b{};
    for (std::size_t i = 0; i < 10; ++i)
        b[i] = Poly<F>::variable(ctx, beta_names()[i]);
    spec.betas = b;
    return spec;
}

namespace detail {

// Coefficient of y_w in the chart expansion of the product y_u y_v.
template <class F>
Poly<F> product_lin(const LocalEquations<F>& eq, std::size_t u, std::size_t v, std::size_t w) {
    if (u > v) std::swap(u, v);
    if (w != eq.ya && w != eq.yb) throw input_error("basis index outside the chart");
    if (u == eq.ya && v == eq.ya) return w == eq.ya ? eq.c1 : eq.c0;
    if (u == eq.ya && v == eq.yb) return w == eq.ya ? -eq.c2 : -eq.c1;
    if (u == eq.yb && v == eq.yb) return w == eq.ya ? eq.c3 : eq.c2;
    throw input_error("product indices outside the chart");
}

// The symbolic spec must expose each beta as a bare parameter variable;
// returns the variable index of each in the shared context.
template <class F>
std::array<std::size_t, 10> parameter_slots(const CoverHomSpec<F>& spec) {
    if (!spec.betas) throw input_error("constraint derivation needs a beta-form spec");
    std::array<std::size_t, 10> slot{};
    for (std::size_t i = 0; i < 10; ++i) {
        const auto& p = (*spec.betas)[i];
        const auto& terms = p.terms();
        bool ok = terms.size() == 1 && terms[0].second == p.ctx()->field.one();
        std::size_t var = 0;
        int seen = 0;
        if (ok) {
            const auto& m = terms[0].first;
            for (std::size_t v = 0; v < m.size(); ++v) {
                if (m[v] == 0) continue;
                ++seen;
                var = v;
                if (m[v] != 1 || p.ctx()->vars[v].weight != 0) ok = false;
            }
        }
        if (!ok || seen != 1)
            throw input_error("constraint derivation needs symbolic beta parameters");
        slot[i] = var;
    }
    return slot;
}

// Splits a polynomial that is linear over the parameter variables into rows:
// one linear relation per distinct x-monomial.  Keys carry the identity tag
// so distinct identities never merge rows even on equal monomials.
template <class F>
void collect_rows(const Poly<F>& identity, const std::array<std::size_t, 10>& slot,
                  std::map<std::vector<std::int32_t>, std::vector<typename F::Elem>>& rows,
                  const F& field, std::int32_t tag) {
    std::vector<std::optional<std::size_t>> column(identity.ctx()->vars.size());
    for (std::size_t i = 0; i < 10; ++i) column[slot[i]] = i;
    for (const auto& t : identity.terms()) {
        std::optional<std::size_t> param;
        Mono xpart = t.first;
        for (std::size_t v = 0; v < t.first.size(); ++v) {
            if (t.first[v] == 0 || !column[v]) continue;
            if (param || t.first[v] != 1)
                throw verify_error("constraint identity is not linear in the parameters");
            param = *column[v];
            xpart[v] = 0;
        }
        if (!param) throw verify_error("constraint identity has a parameter-free term");
        auto key = xpart.exps();
        key.push_back(tag);
        auto& row = rows[key];
        if (row.empty()) row.assign(10, field.zero());
        row[*param] = row[*param] + t.second;
    }
}

}  // namespace detail

// Mechanical derivation: apply the substitution to the three local products
// on `source_chart`, transport to the image chart, reduce against that
// chart's products, and equate coefficients of every x-monomial.  The action
// must map the source chart onto a chart (it sends x_s to a scalar multiple
// of x_t and the eliminated basis element accordingly).
template <class F>
ConstraintSystem<F> derive_constraints(const SubstAction<F>& act, const CoverHomSpec<F>& spec,
                                       int source_chart) {
    using P = Poly<F>;
    auto slot = detail::parameter_slots(spec);
    auto ctx = (*spec.betas)[0].ctx();
    const F& field = ctx->field;
    auto t = cover_from_beta(ctx, *spec.betas);

    int target_chart = act.xperm[source_chart];
    if (act.yperm[source_chart] != target_chart)
        throw input_error("action does not align the cover basis with the chart image");
    auto src = local_equations(t, source_chart);
    auto tgt = target_chart == source_chart ? src : local_equations(t, target_chart);

    std::vector<P> images;
    images.reserve(ctx->vars.size());
    for (std::size_t v = 0; v < ctx->vars.size(); ++v) {
        const auto& name = ctx->vars[v].name;
        if (name.size() == 2 && name[0] == 'x' && name[1] >= '0' && name[1] <= '2') {
            int i = name[1] - '0';
            auto img = P::variable(tgt.ctx, "x" + std::to_string(act.xperm[i]));
            images.push_back(img.scaled(act.xscale[i]));
        } else {
            images.push_back(P::variable(tgt.ctx, name));
        }
    }

    auto pinv = [&](std::size_t w) {
        for (std::size_t j = 0; j < 3; ++j)
            if (static_cast<std::size_t>(act.yperm[j]) == w) return j;
        throw input_error("cover basis map is not a permutation");
    };

    std::map<std::vector<std::int32_t>, std::vector<typename F::Elem>> rows;
    std::array<std::pair<std::size_t, std::size_t>, 3> products = {
        std::make_pair(src.ya, src.ya), std::make_pair(src.ya, src.yb),
        std::make_pair(src.yb, src.yb)};
    std::int32_t tag = 0;
    for (auto [u, v] : products) {
        auto lambda_pair = act.yscale[u] * act.yscale[v];
        for (std::size_t wt : {tgt.ya, tgt.yb}) {
            std::size_t w = pinv(wt);
            if (w != src.ya && w != src.yb)
                throw input_error("action does not align the cover basis with the chart image");
            auto lhs = detail::product_lin(tgt, act.yperm[u], act.yperm[v], wt)
                           .scaled(lambda_pair);
            auto rhs = detail::product_lin(src, u, v, w)
                           .subst(tgt.ctx, images)
                           .scaled(act.yscale[w]);
            auto identity = lhs - rhs;
            if (!identity.is_zero()) detail::collect_rows(identity, slot, rows, field, tag);
            ++tag;
        }
    }

    std::vector<std::string> names;
    for (std::size_t i = 0; i < 10; ++i) names.push_back(ctx->vars[slot[i]].name);
    std::vector<std::vector<typename F::Elem>> raw;
    raw.reserve(rows.size());
    for (auto& [m, row] : rows) raw.push_back(std::move(row));
    return detail::reduce_system(field, std::move(names), raw);
}

// Chart pairing per generator: sigma moves the x1-chart onto the x2-chart,
// iota fixes the x0-chart, tau fixes the x2-chart.
inline int derivation_chart(Generator g) {
    switch (g) {
        case Generator::sigma: return 1;
        case Generator::iota: return 0;
        case Generator::tau: return 2;
    }
    return 2;
}

template <class F>
ConstraintSystem<F> derive_constraints(const GroupAction& g, const CoverHomSpec<F>& spec) {
    if (g.scope != ActionScope::x_and_y)
        throw input_error("constraint derivation acts on one cover copy");
    if (!spec.betas) throw input_error("constraint derivation needs a beta-form spec");
    const F& field = (*spec.betas)[0].ctx()->field;
    return derive_constraints(substitution(field, g), spec, derivation_chart(g.generator));
}

// Stacks the constraint systems of several actions and reduces once; the
// family of simultaneously equivariant covers is the joint nullspace.
template <class F>
struct EquivariantFamily {
    ConstraintSystem<F> system;
    std::vector<std::vector<typename F::Elem>> basis;
    std::size_t dimension() const { return basis.size(); }
};

template <class F>
EquivariantFamily<F> solve_equivariant(const std::vector<GroupAction>& actions,
                                       const CoverHomSpec<F>& spec) {
    if (!spec.betas) throw input_error("constraint derivation needs a beta-form spec");
    const F& field = (*spec.betas)[0].ctx()->field;
    std::vector<std::vector<typename F::Elem>> raw;
    std::vector<std::string> names;
    for (const auto& g : actions) {
        auto sys = derive_constraints(g, spec);
        names = sys.unknowns;
        for (std::size_t i = 0; i < sys.relations.rows(); ++i) {
            std::vector<typename F::Elem> row;
            for (std::size_t j = 0; j < sys.relations.cols(); ++j)
                row.push_back(sys.relations.at(i, j));
            raw.push_back(std::move(row));
        }
    }
    if (names.empty()) {
        for (const char* n : beta_names()) names.push_back(n);
    }
    auto sys = detail::reduce_system(field, std::move(names), raw);
    auto basis = sys.solutions();
    return {std::move(sys), std::move(basis)};
}

// ---------------------------------------------------------------------------
// Global beta-action and the monomial model.

// Pushforward of a cover triple along an action: the transformed structure
// constants of the conjugated multiplication.  Annihilation is preserved and
// checked.
template <class F>
CoverTriple<F> transform_triple(const CoverTriple<F>& t, const SubstAction<F>& act) {
    using P = Poly<F>;
    auto ctx = t.ctx;
    std::vector<P> images;
    for (std::size_t v = 0; v < ctx->vars.size(); ++v) {
        const auto& name = ctx->vars[v].name;
        if (name.size() == 2 && name[0] == 'x' && name[1] >= '0' && name[1] <= '2') {
            int i = name[1] - '0';
            images.push_back(
                P::variable(ctx, "x" + std::to_string(act.xperm[i])).scaled(act.xscale[i]));
        } else {
            images.push_back(P::variable(ctx, name));
        }
    }
    std::array<std::size_t, 3> pinv{};
    for (std::size_t j = 0; j < 3; ++j) pinv[act.yperm[j]] = j;

    CoverTriple<F> r;
    r.ctx = ctx;
    for (auto& c : r.C) c.assign(3, std::vector<P>(3, P::zero(ctx)));
    for (std::size_t k = 0; k < 3; ++k) {
        auto k2 = static_cast<std::size_t>(act.yperm[k]);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                auto scale = act.yscale[k] / (act.yscale[pinv[i]] * act.yscale[pinv[j]]);
                r.C[k2][i][j] = t.C[k][pinv[i]][pinv[j]].subst(ctx, images).scaled(scale);
            }
    }
    if (!is_annihilating(r))
        throw verify_error("transformed cover no longer annihilates the coordinate vector");
    return r;
}

// Matrix of the induced linear action on beta-space, columns in beta_names()
// order: column k is the beta-vector of the transformed unit cover e_k.
template <class F>
Matrix<F> beta_action_matrix(const F& field, const GroupAction& g) {
    auto ctx = Context<F>::make(field, {{"x0", 1}, {"x1", 1}, {"x2", 1}});
    auto act = substitution(field, g);
    Matrix<F> m(field, 10, 10);
    for (std::size_t k = 0; k < 10; ++k) {
        BetaVector<F> b{};
        for (std::size_t i = 0; i < 10; ++i)
            b[i] = i == k ? Poly<F>::from_int(ctx, 1) : Poly<F>::zero(ctx);
        auto moved = transform_triple(cover_from_beta(ctx, b), act);
        auto image = beta_of_triple(moved);
        if (!(cover_from_beta(ctx, image).C == moved.C))
            throw verify_error("transformed cover left the canonical beta form");
        for (std::size_t i = 0; i < 10; ++i) {
            const auto& p = image[i];
            if (p.is_zero())
                m.at(i, k) = field.zero();
            else if (p.terms().size() == 1 && p.terms()[0].first.is_constant())
                m.at(i, k) = p.terms()[0].second;
            else
                throw verify_error("beta image of a unit cover is not constant");
        }
    }
    return m;
}

// The ten parameters paired with cubic monomials: b_i with x_i^3, b_ij with
// x_i^2 x_j, b_012 with x0 x1 x2.  Returns the matrix of the x-substitution
// on that monomial basis.
template <class F>
Matrix<F> monomial_action_matrix(const F& field, const GroupAction& g) {
    auto act = substitution(field, g);
    static const std::array<std::array<int, 3>, 10> exponents = {{
        {3, 0, 0}, {0, 3, 0}, {0, 0, 3}, {2, 1, 0}, {2, 0, 1},
        {1, 2, 0}, {0, 2, 1}, {1, 0, 2}, {0, 1, 2}, {1, 1, 1},
    }};
    auto index_of = [&](const std::array<int, 3>& e) {
        for (std::size_t i = 0; i < 10; ++i)
            if (exponents[i] == e) return i;
        throw verify_error("substituted monomial left the cubic basis");
    };
    Matrix<F> m(field, 10, 10);
    for (std::size_t k = 0; k < 10; ++k) {
        std::array<int, 3> image{0, 0, 0};
        auto scale = field.one();
        for (int i = 0; i < 3; ++i) {
            image[act.xperm[i]] += exponents[k][i];
            for (int e = 0; e < exponents[k][i]; ++e) scale = scale * act.xscale[i];
        }
        m.at(index_of(image), k) = scale;
    }
    return m;
}

// The parameters transform as the dual basis of the cubic monomials: the
// beta pushforward equals the contragredient (inverse transpose) of the
// substitution matrix on monomials.  For the permutation generators sigma
// and iota the contragredient coincides with the matrix itself; the diagonal
// tau separates the two.
template <class F>
bool monomial_model_check(const F& field, const GroupAction& g) {
    auto inv = monomial_action_matrix(field, g).inverse();
    if (!inv) return false;
    return beta_action_matrix(field, g) == inv->transpose();
}

// ---------------------------------------------------------------------------
// Two-copy twist classification.

enum class TwoTwistCase { common_family, c0_c3_proportional, c1_only, c2_only };

struct TwoTwistReport {
    int m = 0, n = 0;
    TwoTwistCase kind = TwoTwistCase::common_family;
    std::array<int, 4> block_twist{};        // effective sigma twist of C0..C3
    std::array<std::size_t, 4> block_dim{};  // per-block solution dimension
    std::size_t solution_dim = 0;            // all 40 unknowns
    std::string label;
};

namespace detail {

// Effective one-copy sigma twist of each block of the two-copy structure
// matrix [[C1, C0], [-C2, -C1], [C3, C2]].  Block B arising from the product
// pair (u, v) with image component w transforms with the scalar
// lambda_w / (lambda_u lambda_v); the twist is its xi-exponent.
inline std::array<int, 4> two_copy_block_twists(int m, int n) {
    // C0: y.y -> z; C1: y.y -> y; C2: z.z -> z; C3: z.z -> y.  The scalar of
    // a block with twist a is xi^{-a}, so C0 and C3 both carry -(m + n).
    return {mod3(2 * m - n), mod3(m), mod3(n), mod3(2 * n - m)};
}

}  // namespace detail

// Scalar picked up by each block under sigma_pair(m, n), in block order
// C0..C3; the classification derives per-block chain systems from these.
template <class F>
std::array<typename F::Elem, 4> two_copy_block_scalars(const F& field, int m, int n) {
    auto act = substitution(field, GroupAction::sigma_pair(m, n));
    auto ratio = [&](const typename F::Elem& u, const typename F::Elem& v,
                     const typename F::Elem& w) { return w / (u * v); };
    return {
        ratio(act.yscale[0], act.yscale[0], act.zscale[0]),  // C0
        ratio(act.yscale[0], act.yscale[0], act.yscale[0]),  // C1
        ratio(act.zscale[0], act.zscale[0], act.zscale[0]),  // C2
        ratio(act.zscale[0], act.zscale[0], act.yscale[0]),  // C3
    };
}

// Exact rank test: true when the stacked pair of coefficient vectors has
// rank at most one.
template <class F>
bool proportional_vectors(const F& field, const std::vector<typename F::Elem>& a,
                          const std::vector<typename F::Elem>& b) {
    if (a.size() != b.size()) throw input_error("proportionality needs equal lengths");
    Matrix<F> m(field, 2, a.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        m.at(0, j) = a[j];
        m.at(1, j) = b[j];
    }
    return m.rank() <= 1;
}

template <class F>
TwoTwistReport classify_two_twist(const F& field, int m, int n) {
    m = detail::mod3(m);
    n = detail::mod3(n);
    auto spec = symbolic_cover_spec(beta_parameter_context(field));

    auto twists = detail::two_copy_block_twists(m, n);
    auto scalars = two_copy_block_scalars(field, m, n);
    std::map<int, ConstraintSystem<F>> by_twist;
    for (int a : twists)
        if (!by_twist.count(a))
            by_twist.emplace(a, derive_constraints(GroupAction::sigma(a), spec));
    for (std::size_t i = 0; i < 4; ++i)
        if (!(scalars[i] == xi_pow(field, -twists[i])))
            throw verify_error("two-copy block scalar disagrees with its chain twist");

    TwoTwistReport rep;
    rep.m = m;
    rep.n = n;
    rep.block_twist = twists;
    for (std::size_t i = 0; i < 4; ++i) {
        rep.block_dim[i] = by_twist.at(twists[i]).solution_dim();
        rep.solution_dim += rep.block_dim[i];
    }

    if (m == n) {
        rep.kind = TwoTwistCase::common_family;
        rep.label = "all blocks satisfy the common chain relations";
        for (std::size_t i = 1; i < 4; ++i)
            if (!by_twist.at(twists[i]).same_relations(by_twist.at(twists[0])))
                throw verify_error("equal twists should impose one common system");
        return rep;
    }

    // With m != n exactly one of the effective twists vanishes; blocks with a
    // nonzero twist admit no cover compatible with the untwisted structure
    // (their chain system stacked with the untwisted one has full rank), so
    // the surviving family is carried by the zero-twist blocks alone.
    auto untwisted = derive_constraints(GroupAction::sigma(0), spec);
    int zero_slots = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        if (twists[i] == 0) {
            ++zero_slots;
            continue;
        }
        std::vector<std::vector<typename F::Elem>> raw;
        for (const auto* sys : {&by_twist.at(twists[i]), &untwisted})
            for (std::size_t r = 0; r < sys->relations.rows(); ++r) {
                std::vector<typename F::Elem> row;
                for (std::size_t c = 0; c < 10; ++c) row.push_back(sys->relations.at(r, c));
                raw.push_back(std::move(row));
            }
        auto joint = detail::reduce_system(field, untwisted.unknowns, raw);
        if (joint.solution_dim() != 0)
            throw verify_error("twisted block unexpectedly meets the untwisted family");
    }
    if ((twists[0] == 0) != (twists[3] == 0) || zero_slots != (twists[0] == 0 ? 2 : 1))
        throw verify_error("unexpected zero-twist pattern in the two-copy blocks");

    if (twists[0] == 0) {
        rep.kind = TwoTwistCase::c0_c3_proportional;
        rep.label = "C0 = gamma C3 with C1 = C2 = 0";
        if (!by_twist.at(twists[0]).same_relations(by_twist.at(twists[3])))
            throw verify_error("paired blocks should share one relation system");
    } else if (twists[1] == 0) {
        rep.kind = TwoTwistCase::c1_only;
        rep.label = "C0 = C2 = C3 = 0";
    } else {
        rep.kind = TwoTwistCase::c2_only;
        rep.label = "C0 = C1 = C3 = 0";
    }
    return rep;
}

template <class F>
std::vector<TwoTwistReport> classify_all_two_twists(const F& field) {
    std::vector<TwoTwistReport> out;
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n) out.push_back(classify_two_twist(field, m, n));
    return out;
}

// ---------------------------------------------------------------------------
// Joint reduction of the two-copy sigma twist against the involution signs.

// One row per (diagonal sigma twist m, involution signs on y and z): the
// per-block solution dimensions of the stacked sigma/iota chain systems and
// whether every block still contains the pure-trace family (equal pure
// cubes plus the symmetric mixed parameter).
struct SigmaReductionRow {
    int m = 0;
    int sign_y = 0, sign_z = 0;  // exponents b in (-1)^b
    std::array<std::size_t, 4> block_dim{};
    bool pure_family_everywhere = false;
};

template <class F>
std::vector<SigmaReductionRow> sigma_twist_reduction_table(const F& field) {
    auto spec = symbolic_cover_spec(beta_parameter_context(field));
    std::vector<typename F::Elem> chain(10, field.zero());
    for (int i = 0; i < 3; ++i) chain[i] = field.one();
    std::vector<typename F::Elem> mixed(10, field.zero());
    mixed[9] = field.one();

    std::vector<SigmaReductionRow> table;
    for (int m = 0; m < 3; ++m)
        for (int by = 0; by < 2; ++by)
            for (int bz = 0; bz < 2; ++bz) {
                auto sigma_sys = derive_constraints(GroupAction::sigma(m), spec);
                // Involution block signs mirror the sigma block scalars:
                // C1, C3 carry the y sign, C0, C2 the z sign.
                std::array<int, 4> signs = {bz, by, bz, by};
                SigmaReductionRow row;
                row.m = m;
                row.sign_y = by;
                row.sign_z = bz;
                row.pure_family_everywhere = true;
                for (std::size_t blk = 0; blk < 4; ++blk) {
                    auto iota_sys = derive_constraints(GroupAction::iota(signs[blk]), spec);
                    std::vector<std::vector<typename F::Elem>> raw;
                    for (const auto* sys : {&sigma_sys, &iota_sys})
                        for (std::size_t r = 0; r < sys->relations.rows(); ++r) {
                            std::vector<typename F::Elem> v;
                            for (std::size_t c = 0; c < 10; ++c)
                                v.push_back(sys->relations.at(r, c));
                            raw.push_back(std::move(v));
                        }
                    auto joint = detail::reduce_system(field, sigma_sys.unknowns, raw);
                    row.block_dim[blk] = joint.solution_dim();
                    auto satisfies = [&](const std::vector<typename F::Elem>& v) {
                        auto img = joint.relations.apply(v);
                        for (const auto& e : img)
                            if (!e.is_zero()) return false;
                        return true;
                    };
                    if (!satisfies(chain) || !satisfies(mixed))
                        row.pure_family_everywhere = false;
                }
                table.push_back(row);
            }
    return table;
}

}  // namespace ab13
