// Parameter normalization for the chain side of a surface model: the three
// distinguished points in the affine (y,z)-plane, the GL2 change of variables
// sending a nondegenerate chain configuration to the standard one, the
// residual S3 action on the remaining parameters, and the symmetric-function
// invariants that coordinatize orbits.
#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ab13/errors.hpp"
#include "ab13/field.hpp"
#include "ab13/linalg.hpp"
#include "ab13/surface_ring.hpp"

namespace ab13 {

template <class F>
struct ModuliPoint {
    std::array<typename F::Elem, 3> alpha3;      // (a0, a1, a3) with a2 = a1
    std::array<typename F::Elem, 3> invariants;  // elementary symmetric in the deltas
};

template <class F>
struct ChainNormalization {
    Matrix<F> g;  // fiber substitution (y, z) -> (y, z) g
    SurfaceParams<F> params;
};

struct OrbitReport {
    bool equivalent = false;
    bool invariants_equal = false;
    std::string warning;
};

namespace detail {

// ---- exact square roots ----------------------------------------------------

inline std::optional<Rat> sqrt_rat(const Rat& d) {
    if (d.is_zero()) return Rat(0);
    mpz_class num = d.num(), den = d.den();
    if (num < 0) return std::nullopt;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    if (rn * rn != num || rd * rd != den) return std::nullopt;
    mpq_class q(rn, rd);
    q.canonicalize();
    return Rat(q);
}

inline std::optional<Rat> sqrt_elem(const QField&, const Rat& d) { return sqrt_rat(d); }

inline std::optional<QOmega> sqrt_elem(const QOmegaField&, const QOmega& d) {
    const Rat &a = d.re(), &b = d.wc();
    Rat two(2), three(3), six(6), four(4);
    if (b.is_zero()) {
        if (auto r = sqrt_rat(a)) return QOmega(*r, Rat(0));
        // a negative rational can still be a square: (x + 2x*om)^2 = -3x^2
        if (auto x = sqrt_rat(-(a / three))) return QOmega(*x, two * *x);
        return std::nullopt;
    }
    // (x + y om)^2 = (x^2 - y^2) + (2xy - y^2) om; eliminating x gives
    // 3 y^4 + (4a - 2b) y^2 - b^2 = 0.
    Rat din = (four * a - two * b) * (four * a - two * b) + Rat(12) * b * b;
    auto rin = sqrt_rat(din);
    if (!rin) return std::nullopt;
    for (int sign = 0; sign < 2; ++sign) {
        Rat y2 = (two * b - four * a + (sign == 0 ? *rin : -*rin)) / six;
        auto y = sqrt_rat(y2);
        if (!y || y->is_zero()) continue;
        Rat x = (b + y2) / (two * *y);
        return QOmega(x, *y);
    }
    return std::nullopt;
}

inline std::optional<FpElem> sqrt_elem(const FpField& f, const FpElem& d) {
    if (f.characteristic() > 1000000)
        throw input_error("root search over F_p needs p <= 1000000");
    // TODO: Tonelli-Shanks for large p
    for (unsigned long t = 0; 2 * t < f.characteristic() + 1; ++t) {
        auto e = f.from_int(static_cast<long>(t));
        if (e * e == d) return e;
    }
    return std::nullopt;
}

// ---- one rational root of a monic cubic ------------------------------------

inline std::vector<mpz_class> signed_divisors(const mpz_class& n_in) {
    mpz_class n = abs(n_in);
    std::vector<std::pair<mpz_class, int>> factors;
    for (mpz_class p = 2; p * p <= n && p < 1000000; p += (p == 2 ? 1 : 2)) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        factors.push_back({p, e});
    }
    if (n > 1) {
        if (mpz_probab_prime_p(n.get_mpz_t(), 25) == 0)
            throw input_error("constant term too hard to factor for rational root search");
        factors.push_back({n, 1});
    }
    std::vector<mpz_class> divs = {1};
    for (const auto& [p, e] : factors) {
        std::size_t base = divs.size();
        mpz_class pw = 1;
        for (int k = 1; k <= e; ++k) {
            pw *= p;
            for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pw);
        }
        if (divs.size() > 20000)
            throw input_error("constant term has too many divisors for rational root search");
    }
    std::size_t base = divs.size();
    for (std::size_t i = 0; i < base; ++i) divs.push_back(-divs[i]);
    return divs;
}

// monic t^3 + c2 t^2 + c1 t + c0
inline std::optional<Rat> one_cubic_root(const QField&, const Rat& c2, const Rat& c1,
                                         const Rat& c0) {
    if (c0.is_zero()) return Rat(0);
    // substituting t = s/L with L the common denominator gives a monic integer
    // cubic in s whose roots divide its constant term
    mpz_class L = 1;
    for (const Rat* c : {&c2, &c1, &c0}) {
        mpz_class d = c->den();
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), L.get_mpz_t(), d.get_mpz_t());
        L = L / g * d;
    }
    Rat rl{mpq_class(L)};
    Rat n2 = c2 * rl, n1 = c1 * rl * rl, n0 = c0 * rl * rl * rl;
    for (const mpz_class& s : signed_divisors(n0.num())) {
        Rat t{mpq_class(s)};
        if (((t + n2) * t + n1) * t + n0 == Rat(0)) return t / rl;
    }
    return std::nullopt;
}

inline std::optional<QOmega> one_cubic_root(const QOmegaField&, const QOmega& c2,
                                            const QOmega& c1, const QOmega& c0) {
    if (c0.is_zero()) return QOmega();
    if (!c2.wc().is_zero() || !c1.wc().is_zero() || !c0.wc().is_zero())
        throw input_error("cubic root search over the omega field needs rational coefficients");
    // TODO: factor over Q(om) directly instead of only lifting rational roots
    QField q;
    if (auto r = one_cubic_root(q, c2.re(), c1.re(), c0.re())) return QOmega(*r, Rat(0));
    return std::nullopt;
}

inline std::optional<FpElem> one_cubic_root(const FpField& f, const FpElem& c2,
                                            const FpElem& c1, const FpElem& c0) {
    if (f.characteristic() > 1000000)
        throw input_error("root search over F_p needs p <= 1000000");
    for (unsigned long k = 0; k < f.characteristic(); ++k) {
        auto t = f.from_int(static_cast<long>(k));
        if ((((t + c2) * t + c1) * t + c0).is_zero()) return t;
    }
    return std::nullopt;
}

// All roots of a monic cubic in the field, distinct ones only, in the
// deterministic order (first found root, then the + and - quadratic roots).
template <class F>
std::vector<typename F::Elem> cubic_roots(const F& field, const typename F::Elem& c2,
                                          const typename F::Elem& c1,
                                          const typename F::Elem& c0) {
    using Elem = typename F::Elem;
    std::vector<Elem> roots;
    auto r1 = one_cubic_root(field, c2, c1, c0);
    if (!r1) return roots;
    roots.push_back(*r1);
    // t^3+c2 t^2+c1 t+c0 = (t - r1)(t^2 + b t + c)
    Elem b = c2 + *r1;
    Elem c = c1 + *r1 * b;
    Elem disc = b * b - field.from_int(4) * c;
    auto s = sqrt_elem(field, disc);
    if (!s) return roots;
    Elem half = field.from_fraction(1, 2);
    for (const Elem& r : {*s, -*s}) {
        Elem t = (r - b) * half;
        bool seen = false;
        for (const auto& u : roots) seen = seen || (u == t);
        if (!seen) roots.push_back(t);
    }
    return roots;
}

// ---- the three-point multiplication table ----------------------------------

// Coefficient vectors over the basis {1, y, z} of the products y*y, y*z, z*z
// for the displayed system.
template <class F>
std::array<std::array<typename F::Elem, 3>, 3> point_table(
    const F& field, const std::array<typename F::Elem, 4>& a) {
    using Elem = typename F::Elem;
    Elem two = field.from_int(2);
    std::array<Elem, 3> yy = {two * (a[1] * a[1] - a[0] * a[2]), a[1], a[0]};
    std::array<Elem, 3> yz = {-(a[1] * a[2] - a[0] * a[3]), -a[2], -a[1]};
    std::array<Elem, 3> zz = {two * (a[2] * a[2] - a[1] * a[3]), a[3], a[2]};
    return {yy, yz, zz};
}

template <class F>
Matrix<F> mult_matrix(const F& field, const std::array<typename F::Elem, 4>& a, bool by_z) {
    auto tab = point_table(field, a);
    Matrix<F> m(field, 3, 3);
    // column j holds the coefficients of (y or z) * basis_j
    m.at(by_z ? 2 : 1, 0) = field.one();
    const auto& cy = by_z ? tab[1] : tab[0];
    const auto& cz = by_z ? tab[2] : tab[1];
    for (int i = 0; i < 3; ++i) {
        m.at(static_cast<std::size_t>(i), 1) = cy[static_cast<std::size_t>(i)];
        m.at(static_cast<std::size_t>(i), 2) = cz[static_cast<std::size_t>(i)];
    }
    return m;
}

}  // namespace detail

// The printed quartic whose nonvanishing makes the three points distinct.
template <class F>
typename F::Elem distinctness(const F& field, const std::array<typename F::Elem, 4>& a) {
    auto n = [&](long k) { return field.from_int(k); };
    return a[0] * a[0] * a[3] * a[3] + n(4) * a[0] * a[2] * a[2] * a[2] -
           n(3) * a[1] * a[1] * a[2] * a[2] + n(4) * a[1] * a[1] * a[1] * a[3] -
           n(6) * a[0] * a[1] * a[2] * a[3];
}

// Solve the displayed quadric system exactly.  The points come back in the
// deterministic order induced by the root search; their barycenter is checked
// to be the origin and each point is checked against all three equations.
template <class F>
std::array<std::array<typename F::Elem, 2>, 3> three_points(
    const F& field, const std::array<typename F::Elem, 4>& a) {
    using Elem = typename F::Elem;
    if (distinctness(field, a).is_zero()) throw input_error("the three points are not distinct");

    auto my = detail::mult_matrix(field, a, false);
    auto mz = detail::mult_matrix(field, a, true);

    std::vector<Elem> roots;
    Matrix<F> mu = my;
    bool found = false;
    for (long c = 0; c < 8 && !found; ++c) {
        mu = my + mz.scaled(field.from_int(c));
        Elem tr = mu.at(0, 0) + mu.at(1, 1) + mu.at(2, 2);
        Elem m2 = mu.at(0, 0) * mu.at(1, 1) - mu.at(0, 1) * mu.at(1, 0) +
                  mu.at(0, 0) * mu.at(2, 2) - mu.at(0, 2) * mu.at(2, 0) +
                  mu.at(1, 1) * mu.at(2, 2) - mu.at(1, 2) * mu.at(2, 1);
        roots = detail::cubic_roots(field, -tr, m2, -mu.det());
        found = roots.size() == 3;
    }
    if (!found) throw input_error("the three points are not rational over the field");

    std::array<std::array<Elem, 2>, 3> pts;
    auto mt = mu.transpose();
    for (int i = 0; i < 3; ++i) {
        Matrix<F> shifted = mt - Matrix<F>::identity(field, 3).scaled(roots[i]);
        auto ns = shifted.nullspace();
        if (ns.size() != 1 || ns[0][0].is_zero())
            throw verify_error("evaluation functional lost the unit coordinate");
        Elem inv = ns[0][0].inv();
        pts[static_cast<std::size_t>(i)] = {ns[0][1] * inv, ns[0][2] * inv};
    }

    Elem sy = pts[0][0] + pts[1][0] + pts[2][0];
    Elem sz = pts[0][1] + pts[1][1] + pts[2][1];
    if (!sy.is_zero() || !sz.is_zero())
        throw verify_error("barycenter of the three points is not the origin");
    auto tab = detail::point_table(field, a);
    for (const auto& p : pts) {
        std::array<Elem, 3> prods = {p[0] * p[0], p[0] * p[1], p[1] * p[1]};
        for (int e = 0; e < 3; ++e) {
            Elem rhs = tab[static_cast<std::size_t>(e)][0] +
                       tab[static_cast<std::size_t>(e)][1] * p[0] +
                       tab[static_cast<std::size_t>(e)][2] * p[1];
            if (prods[static_cast<std::size_t>(e)] != rhs)
                throw verify_error("three-point solution fails its defining equations");
        }
    }
    return pts;
}

// Parameters of the system satisfied by the substituted coordinate functions
// (y', z') = (y, z) g.  Conjugating an honest multiplication table yields an
// honest one, which the closed-form constants check certifies.
template <class F>
std::array<typename F::Elem, 4> table_transform(const F& field,
                                                const std::array<typename F::Elem, 4>& a,
                                                const Matrix<F>& g) {
    using Elem = typename F::Elem;
    auto gi = g.inverse();
    if (!gi) throw input_error("substitution matrix is singular");
    auto tab = detail::point_table(field, a);
    Elem two = field.from_int(2);

    auto combine = [&](const Elem& cyy, const Elem& cyz, const Elem& czz) {
        std::array<Elem, 3> r;
        for (int i = 0; i < 3; ++i)
            r[static_cast<std::size_t>(i)] = cyy * tab[0][static_cast<std::size_t>(i)] +
                                             cyz * tab[1][static_cast<std::size_t>(i)] +
                                             czz * tab[2][static_cast<std::size_t>(i)];
        // rewrite the linear part in the new functions via y = gi11 y' + gi21 z',
        // z = gi12 y' + gi22 z'
        Elem ly = r[1] * gi->at(0, 0) + r[2] * gi->at(0, 1);
        Elem lz = r[1] * gi->at(1, 0) + r[2] * gi->at(1, 1);
        return std::array<Elem, 3>{r[0], ly, lz};
    };

    auto t00 = combine(g.at(0, 0) * g.at(0, 0), two * g.at(0, 0) * g.at(1, 0),
                       g.at(1, 0) * g.at(1, 0));
    auto t01 = combine(g.at(0, 0) * g.at(0, 1), g.at(0, 0) * g.at(1, 1) + g.at(1, 0) * g.at(0, 1),
                       g.at(1, 0) * g.at(1, 1));
    auto t11 = combine(g.at(0, 1) * g.at(0, 1), two * g.at(0, 1) * g.at(1, 1),
                       g.at(1, 1) * g.at(1, 1));

    std::array<Elem, 4> out = {t00[2], t00[1], -t01[1], t11[1]};
    if (-t01[2] != t00[1] || t11[2] != -t01[1])
        throw verify_error("transformed table is not of the displayed shape");
    auto expect = detail::point_table(field, out);
    if (t00[0] != expect[0][0] || t01[0] != expect[1][0] || t11[0] != expect[2][0])
        throw verify_error("transformed table breaks the closed-form constants");
    return out;
}

// Change of fiber variables (y, z) -> (y, z) g taking the chain configuration
// to the standard one; the transported parameter pair has beta' = (0,1,1,0).
template <class F>
ChainNormalization<F> normalize_beta(const SurfaceParams<F>& sp) {
    using Elem = typename F::Elem;
    const auto& field = sp.field;
    if (distinctness(field, sp.beta).is_zero())
        throw input_error("chain parameters give coincident points");

    auto src = three_points(field, sp.beta);
    std::array<Elem, 4> std_beta = {field.zero(), field.one(), field.one(), field.zero()};
    auto dst = three_points(field, std_beta);

    std::array<int, 3> perm = {0, 1, 2};
    std::optional<Matrix<F>> h;  // point map p -> h p
    do {
        Matrix<F> sys(field, 4, 4);
        std::vector<Elem> rhs(4, field.zero());
        for (int i = 0; i < 2; ++i) {
            const auto& p = src[static_cast<std::size_t>(i)];
            const auto& q = dst[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
            sys.at(2 * static_cast<std::size_t>(i), 0) = p[0];
            sys.at(2 * static_cast<std::size_t>(i), 1) = p[1];
            sys.at(2 * static_cast<std::size_t>(i) + 1, 2) = p[0];
            sys.at(2 * static_cast<std::size_t>(i) + 1, 3) = p[1];
            rhs[2 * static_cast<std::size_t>(i)] = q[0];
            rhs[2 * static_cast<std::size_t>(i) + 1] = q[1];
        }
        auto sol = sys.solve(rhs);
        if (!sol) continue;
        Matrix<F> cand(field, 2, 2);
        cand.at(0, 0) = (*sol)[0];
        cand.at(0, 1) = (*sol)[1];
        cand.at(1, 0) = (*sol)[2];
        cand.at(1, 1) = (*sol)[3];
        if (cand.det().is_zero()) continue;
        const auto& p2 = src[2];
        const auto& q2 = dst[static_cast<std::size_t>(perm[2])];
        if (cand.at(0, 0) * p2[0] + cand.at(0, 1) * p2[1] == q2[0] &&
            cand.at(1, 0) * p2[0] + cand.at(1, 1) * p2[1] == q2[1]) {
            h = cand;
            break;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (!h) throw verify_error("no invertible map onto the standard configuration");

    // the function substitution matrix is the transpose of the point map
    Matrix<F> g = h->transpose();
    auto beta2 = table_transform(field, sp.beta, g);
    if (beta2 != std_beta) throw verify_error("normalisation did not reach the standard chain");
    auto alpha2 = table_transform(field, sp.alpha, g);
    return {std::move(g), SurfaceParams<F>{field, alpha2, beta2}};
}

// The printed action table on (a0, a1, a3); words act letter by letter from
// the left, matching the row convention (x given to r s means r first).
template <class F>
std::array<typename F::Elem, 3> s3_act(const F&, const std::string& word,
                                       std::array<typename F::Elem, 3> a) {
    for (char ch : word) {
        if (ch == 's')
            a = {-a[0] + a[2], -a[0] + a[1], -a[0]};
        else if (ch == 'r')
            a = {a[2], a[1], a[0]};
        else
            throw input_error(std::string("unknown group letter '") + ch + "'");
    }
    return a;
}

inline const std::array<std::string, 6>& s3_words() {
    static const std::array<std::string, 6> words = {"", "s", "ss", "r", "rs", "rss"};
    return words;
}

// The fiber substitution realizing a word of the residual group:
// table_transform(a, s3_matrix(w)) agrees with s3_act(w, .) on the symmetric
// slice.  Letters map to the inverse-transposes of the printed point maps so
// that words compose in the same left-to-right order as s3_act.
template <class F>
Matrix<F> s3_matrix(const F& field, const std::string& word) {
    auto letter = [&](char ch) {
        Matrix<F> m(field, 2, 2);
        if (ch == 's') {
            m.at(0, 0) = -field.one();
            m.at(0, 1) = field.one();
            m.at(1, 0) = -field.one();
        } else if (ch == 'r') {
            m.at(0, 1) = field.one();
            m.at(1, 0) = field.one();
        } else {
            throw input_error(std::string("unknown group letter '") + ch + "'");
        }
        return m;
    };
    Matrix<F> g = Matrix<F>::identity(field, 2);
    for (char ch : word) g = g * letter(ch);
    return g;
}

template <class F>
struct DeltaReport {
    std::array<typename F::Elem, 3> delta;
    bool standard_action = false;
};

// delta0 = a0+a1+a3, delta1 = -3a0+a1+a3, delta2 = a0+a1-3a3; the certificate
// recomputes s(delta_i) = delta_{i+1} and r(delta_i) = delta_{-i} on a symbolic
// triple.
template <class F>
DeltaReport<F> delta_coords(const F& field, const std::array<typename F::Elem, 3>& a) {
    using Elem = typename F::Elem;
    auto deltas = [&field](const std::array<Elem, 3>& t) {
        Elem three = field.from_int(3);
        return std::array<Elem, 3>{t[0] + t[1] + t[2], -three * t[0] + t[1] + t[2],
                                   t[0] + t[1] - three * t[2]};
    };

    using P = Poly<QField>;
    QField q;
    auto ctx = Context<QField>::make(q, {{"a0", 0}, {"a1", 0}, {"a3", 0}});
    std::array<P, 3> sym = {P::variable(ctx, "a0"), P::variable(ctx, "a1"),
                            P::variable(ctx, "a3")};
    auto pdeltas = [&](const std::array<P, 3>& t) {
        P three = P::from_int(ctx, 3);
        return std::array<P, 3>{t[0] + t[1] + t[2], -(three * t[0]) + t[1] + t[2],
                                t[0] + t[1] - three * t[2]};
    };
    std::array<P, 3> s_img = {-sym[0] + sym[2], -sym[0] + sym[1], -sym[0]};
    std::array<P, 3> r_img = {sym[2], sym[1], sym[0]};
    auto d0 = pdeltas(sym), ds = pdeltas(s_img), dr = pdeltas(r_img);
    bool ok = ds[0] == d0[1] && ds[1] == d0[2] && ds[2] == d0[0];
    ok = ok && dr[0] == d0[0] && dr[1] == d0[2] && dr[2] == d0[1];
    if (!ok) throw verify_error("delta coordinates fail the standard-action identities");
    return {deltas(a), ok};
}

template <class F>
std::array<typename F::Elem, 3> moduli_invariants(const F& field,
                                                  const std::array<typename F::Elem, 3>& a) {
    auto d = delta_coords(field, a).delta;
    return {d[0] + d[1] + d[2], d[0] * d[1] + d[0] * d[2] + d[1] * d[2], d[0] * d[1] * d[2]};
}

template <class F>
ModuliPoint<F> moduli_point(const F& field, const std::array<typename F::Elem, 3>& a) {
    return {a, moduli_invariants(field, a)};
}

// Brute force over the six elements is authoritative; the invariant triple is
// a pre-filter, and a disagreement flags a stabilizer.
template <class F>
OrbitReport orbit_equivalent(const F& field, const std::array<typename F::Elem, 3>& a,
                             const std::array<typename F::Elem, 3>& b) {
    OrbitReport rep;
    rep.invariants_equal = moduli_invariants(field, a) == moduli_invariants(field, b);
    for (const auto& w : s3_words())
        if (s3_act(field, w, a) == b) { rep.equivalent = true; break; }
    if (rep.equivalent != rep.invariants_equal)
        rep.warning = "invariant and orbit answers disagree; a stabilizer is present";
    return rep;
}

template <class F>
bool is_bielliptic_locus(const F& field, const std::array<typename F::Elem, 3>& a) {
    for (const auto& w : s3_words())
        if (s3_act(field, w, a)[1].is_zero()) return true;
    return false;
}

}  // namespace ab13
