// Sparse multivariate polynomials over an exact field, with a weighted
// grading and (optionally) a single designated variable allowed to carry
// negative exponents.
//
// A Context fixes the variable list (name + weight), the inverted variable
// and the coefficient field; every Poly holds a shared pointer to its
// context. Terms are kept sorted in the canonical order -- weighted degree
// descending, ties broken lexicographically in the fixed variable order --
// with no zero coefficients, so equal polynomials have identical
// representations and printing is canonical.
//
// Exactly one inverted variable is supported per context. Cross-chart work
// that would need two denominators is done on cleared polynomials by the
// callers instead; see the chart-comparison routines.
#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ab13/errors.hpp"
#include "ab13/field.hpp"

namespace ab13 {

// Exponent vector; the interpretation (names, weights, which slot may go
// negative) lives in the Context.
class Mono {
  public:
    Mono() = default;
    explicit Mono(std::size_t nvars) : e_(nvars, 0) {}
    explicit Mono(std::vector<std::int32_t> e) : e_(std::move(e)) {}

    std::size_t size() const { return e_.size(); }
    std::int32_t operator[](std::size_t i) const { return e_[i]; }
    std::int32_t& operator[](std::size_t i) { return e_[i]; }
    const std::vector<std::int32_t>& exps() const { return e_; }

    bool operator==(const Mono& o) const { return e_ == o.e_; }
    bool operator!=(const Mono& o) const { return e_ != o.e_; }

    bool is_constant() const {
        for (auto x : e_)
            if (x != 0) return false;
        return true;
    }

    Mono mul(const Mono& o) const {
        Mono r = *this;
        for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] += o.e_[i];
        return r;
    }
    Mono div(const Mono& o) const {
        Mono r = *this;
        for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] -= o.e_[i];
        return r;
    }

  private:
    std::vector<std::int32_t> e_;
};

struct VarInfo {
    std::string name;
    long weight = 1;
};

template <class F>
struct Context {
    F field;
    std::vector<VarInfo> vars;
    std::optional<std::size_t> inverted;  // index of the Laurent variable

    static std::shared_ptr<const Context> make(F field, std::vector<VarInfo> vars,
                                               std::optional<std::string> inverted_name = std::nullopt) {
        auto ctx = std::shared_ptr<Context>(new Context{std::move(field), std::move(vars), std::nullopt});
        for (std::size_t i = 0; i < ctx->vars.size(); ++i) {
            for (std::size_t j = i + 1; j < ctx->vars.size(); ++j)
                if (ctx->vars[i].name == ctx->vars[j].name)
                    throw input_error("duplicate variable name: " + ctx->vars[i].name);
        }
        if (inverted_name) ctx->inverted = ctx->index_of(*inverted_name);
        return ctx;
    }

    std::size_t index_of(std::string_view name) const {
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (vars[i].name == name) return i;
        throw input_error("unknown variable: " + std::string(name));
    }
    std::optional<std::size_t> find(std::string_view name) const {
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (vars[i].name == name) return i;
        return std::nullopt;
    }

    long weighted_degree(const Mono& m) const {
        long d = 0;
        for (std::size_t i = 0; i < vars.size(); ++i) d += static_cast<long>(m[i]) * vars[i].weight;
        return d;
    }

    // Canonical term order: weighted degree descending, then lexicographic in
    // the fixed variable order (larger exponent on the earliest differing
    // variable sorts first). Returns +1 if a sorts before b, -1 after, 0 equal.
    int mono_cmp(const Mono& a, const Mono& b) const {
        long da = weighted_degree(a), db = weighted_degree(b);
        if (da != db) return da > db ? 1 : -1;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (a[i] != b[i]) return a[i] > b[i] ? 1 : -1;
        }
        return 0;
    }

    void check_mono(const Mono& m) const {
        if (m.size() != vars.size()) throw error("monomial/context arity mismatch");
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (m[i] < 0 && (!inverted || *inverted != i))
                throw error("negative exponent on non-inverted variable " + vars[i].name);
        }
    }
};

template <class F>
class Poly {
  public:
    using Elem = typename F::Elem;
    using Ctx = Context<F>;
    using CtxPtr = std::shared_ptr<const Ctx>;
    using Term = std::pair<Mono, Elem>;

    Poly() = default;  // context-less placeholder for containers

    static Poly zero(CtxPtr ctx) { return Poly(std::move(ctx), {}); }
    static Poly constant(CtxPtr ctx, Elem c) {
        std::vector<Term> t;
        if (!c.is_zero()) t.push_back({Mono(ctx->vars.size()), std::move(c)});
        return Poly(std::move(ctx), std::move(t));
    }
    static Poly from_int(CtxPtr ctx, long n) {
        auto c = ctx->field.from_int(n);
        return constant(std::move(ctx), c);
    }
    static Poly variable(CtxPtr ctx, std::size_t v) {
        Mono m(ctx->vars.size());
        m[v] = 1;
        auto c = ctx->field.one();
        return term(std::move(ctx), std::move(m), c);
    }
    static Poly variable(CtxPtr ctx, std::string_view name) {
        auto v = ctx->index_of(name);
        return variable(std::move(ctx), v);
    }
    static Poly term(CtxPtr ctx, Mono m, Elem c) {
        ctx->check_mono(m);
        std::vector<Term> t;
        if (!c.is_zero()) t.push_back({std::move(m), std::move(c)});
        return Poly(std::move(ctx), std::move(t));
    }

    const CtxPtr& ctx() const { return ctx_; }
    bool valid() const { return ctx_ != nullptr; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const std::vector<Term>& terms() const { return terms_; }
    const Term& leading() const {
        if (terms_.empty()) throw error("leading term of zero polynomial");
        return terms_.front();
    }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_constant());
    }
    Elem constant_value() const {
        if (!is_constant()) throw error("polynomial is not constant: " + str());
        return terms_.empty() ? ctx_->field.zero() : terms_[0].second;
    }

    Elem coeff(const Mono& m) const {
        for (const auto& t : terms_)
            if (t.first == m) return t.second;
        return ctx_->field.zero();
    }

    Poly operator-() const {
        std::vector<Term> t = terms_;
        for (auto& tt : t) tt.second = -tt.second;
        return Poly(ctx_, std::move(t));
    }

    Poly operator+(const Poly& o) const {
        check_same(o);
        std::vector<Term> out;
        out.reserve(terms_.size() + o.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < terms_.size() && j < o.terms_.size()) {
            int c = ctx_->mono_cmp(terms_[i].first, o.terms_[j].first);
            if (c > 0) out.push_back(terms_[i++]);
            else if (c < 0) out.push_back(o.terms_[j++]);
            else {
                Elem s = terms_[i].second + o.terms_[j].second;
                if (!s.is_zero()) out.push_back({terms_[i].first, std::move(s)});
                ++i, ++j;
            }
        }
        while (i < terms_.size()) out.push_back(terms_[i++]);
        while (j < o.terms_.size()) out.push_back(o.terms_[j++]);
        return Poly(ctx_, std::move(out));
    }
    Poly operator-(const Poly& o) const { return *this + (-o); }

    Poly operator*(const Poly& o) const {
        check_same(o);
        if (is_zero() || o.is_zero()) return zero(ctx_);
        // Accumulate into an order-keyed map, then emit sorted.
        auto cmp = [this](const Mono& a, const Mono& b) { return ctx_->mono_cmp(a, b) > 0; };
        std::map<Mono, Elem, decltype(cmp)> acc(cmp);
        for (const auto& a : terms_) {
            for (const auto& b : o.terms_) {
                Mono m = a.first.mul(b.first);
                Elem c = a.second * b.second;
                auto it = acc.find(m);
                if (it == acc.end()) acc.emplace(std::move(m), std::move(c));
                else {
                    it->second += c;
                    if (it->second.is_zero()) acc.erase(it);
                }
            }
        }
        std::vector<Term> out(acc.begin(), acc.end());
        return Poly(ctx_, std::move(out));
    }

    Poly scaled(const Elem& c) const {
        if (c.is_zero()) return zero(ctx_);
        std::vector<Term> t = terms_;
        for (auto& tt : t) tt.second = tt.second * c;
        return Poly(ctx_, std::move(t));
    }

    Poly pow(long e) const {
        if (e < 0) {
            auto u = unit_inverse();
            if (!u) throw error("negative power of non-unit polynomial: " + str());
            return u->pow(-e);
        }
        Poly r = from_int(ctx_, 1);
        Poly b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    // Inverse when the polynomial is a unit in the context ring: a nonzero
    // constant, or coeff * (inverted variable)^k.
    std::optional<Poly> unit_inverse() const {
        if (terms_.size() != 1) return std::nullopt;
        const auto& [m, c] = terms_[0];
        Mono inv(m.size());
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (!ctx_->inverted || *ctx_->inverted != i) return std::nullopt;
            inv[i] = -m[i];
        }
        return Poly(ctx_, {{inv, c.inv()}});
    }

    bool operator==(const Poly& o) const {
        check_same(o);
        return terms_ == o.terms_;
    }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    // Weighted degree of the polynomial if homogeneous, nullopt otherwise
    // (zero counts as homogeneous of every degree; reported as nullopt-free 0).
    std::optional<long> homogeneous_degree() const {
        if (terms_.empty()) return 0;
        long d = ctx_->weighted_degree(terms_[0].first);
        for (const auto& t : terms_)
            if (ctx_->weighted_degree(t.first) != d) return std::nullopt;
        return d;
    }

    long degree_in(std::size_t v) const {
        long d = 0;
        for (const auto& t : terms_) d = std::max(d, static_cast<long>(t.first[v]));
        return d;
    }
    long min_degree_in(std::size_t v) const {
        if (terms_.empty()) return 0;
        long d = terms_[0].first[v];
        for (const auto& t : terms_) d = std::min(d, static_cast<long>(t.first[v]));
        return d;
    }

    // Multiply by (inverted variable)^k; with k chosen as -min_degree_in this
    // clears the denominator.
    Poly shifted(std::size_t v, long k) const {
        std::vector<Term> t = terms_;
        for (auto& tt : t) tt.first[v] += static_cast<std::int32_t>(k);
        std::sort(t.begin(), t.end(), [this](const Term& a, const Term& b) {
            return ctx_->mono_cmp(a.first, b.first) > 0;
        });
        for (const auto& tt : t) ctx_->check_mono(tt.first);
        return Poly(ctx_, std::move(t));
    }

    // Substitute every variable i by images[i] (which live in `target`).
    // Negative exponents require the corresponding image to be a unit.
    Poly subst(const CtxPtr& target, const std::vector<Poly>& images) const {
        if (images.size() != ctx_->vars.size()) throw error("substitution arity mismatch");
        Poly out = zero(target);
        for (const auto& [m, c] : terms_) {
            Poly prod = constant(target, c);
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (m[i] == 0) continue;
                prod = prod * images[i].pow(m[i]);
            }
            out = out + prod;
        }
        return out;
    }

    // Transport into a context holding a superset (or reordering) of this
    // context's variables, matched by name. Weights may differ between the
    // contexts; callers re-check homogeneity where it matters.
    Poly rename_into(const CtxPtr& target) const {
        std::vector<std::optional<std::size_t>> where(ctx_->vars.size());
        for (std::size_t i = 0; i < ctx_->vars.size(); ++i) where[i] = target->find(ctx_->vars[i].name);
        Poly out = zero(target);
        for (const auto& [m, c] : terms_) {
            Mono mm(target->vars.size());
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (m[i] == 0) continue;
                if (!where[i])
                    throw input_error("variable " + ctx_->vars[i].name + " missing from target context");
                mm[*where[i]] += m[i];
            }
            target->check_mono(mm);
            out = out + Poly::term(target, mm, c);
        }
        return out;
    }

    // Group terms by their exponents on a variable subset: returns pairs
    // (key monomial supported on the subset, cofactor polynomial supported on
    // the complement), keys in canonical order.
    std::vector<std::pair<Mono, Poly>> split(const std::vector<char>& in_subset) const {
        auto cmp = [this](const Mono& a, const Mono& b) { return ctx_->mono_cmp(a, b) > 0; };
        std::map<Mono, std::vector<Term>, decltype(cmp)> groups(cmp);
        for (const auto& [m, c] : terms_) {
            Mono key(m.size()), rest(m.size());
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (in_subset[i]) key[i] = m[i];
                else rest[i] = m[i];
            }
            groups[key].push_back({rest, c});
        }
        std::vector<std::pair<Mono, Poly>> out;
        out.reserve(groups.size());
        for (auto& [k, ts] : groups) {
            std::sort(ts.begin(), ts.end(), [this](const Term& a, const Term& b) {
                return ctx_->mono_cmp(a.first, b.first) > 0;
            });
            out.push_back({k, Poly(ctx_, std::move(ts))});
        }
        return out;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            Elem cc = c;
            if (first) {
                if (cc.is_negative()) {
                    os << "-";
                    cc = -cc;
                }
            } else {
                if (cc.is_negative()) {
                    os << " - ";
                    cc = -cc;
                } else {
                    os << " + ";
                }
            }
            first = false;
            std::string mono = mono_str(m);
            bool unit_coeff = cc.is_one();
            if (mono.empty()) {
                std::string cs = ctx_->field.str(cc);
                os << (ctx_->field.composite(cc) ? "(" + cs + ")" : cs);
            } else if (unit_coeff) {
                os << mono;
            } else {
                std::string cs = ctx_->field.str(cc);
                os << (ctx_->field.composite(cc) ? "(" + cs + ")" : cs) << "*" << mono;
            }
        }
        return os.str();
    }

    static Poly parse(const CtxPtr& ctx, std::string_view src);

  private:
    Poly(CtxPtr ctx, std::vector<Term> terms) : ctx_(std::move(ctx)), terms_(std::move(terms)) {}

    void check_same(const Poly& o) const {
        if (ctx_.get() != o.ctx_.get()) throw error("polynomial arithmetic across contexts");
    }

    std::string mono_str(const Mono& m) const {
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (!first) os << "*";
            first = false;
            os << ctx_->vars[i].name;
            if (m[i] != 1) os << "^" << m[i];
        }
        return os.str();
    }

    CtxPtr ctx_;
    std::vector<Term> terms_;
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

enum class Tok { Num, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Lexer {
    std::string_view s;
    std::size_t pos = 0;
    Tok tok = Tok::End;
    std::string text;

    explicit Lexer(std::string_view src) : s(src) { next(); }

    void next() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        text.clear();
        if (pos >= s.size()) { tok = Tok::End; return; }
        char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            // fraction literal like 2/3 -- only when followed directly by digits
            if (pos + 1 < s.size() && s[pos] == '/' && std::isdigit(static_cast<unsigned char>(s[pos + 1]))) {
                ++pos;
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            }
            text = std::string(s.substr(start, pos - start));
            tok = Tok::Num;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos;
            while (pos < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                ++pos;
            text = std::string(s.substr(start, pos - start));
            tok = Tok::Ident;
            return;
        }
        ++pos;
        switch (c) {
            case '+': tok = Tok::Plus; return;
            case '-': tok = Tok::Minus; return;
            case '*': tok = Tok::Star; return;
            case '/': tok = Tok::Slash; return;
            case '^': tok = Tok::Caret; return;
            case '(': tok = Tok::LParen; return;
            case ')': tok = Tok::RParen; return;
            default: throw input_error(std::string("unexpected character '") + c + "' in polynomial");
        }
    }
};

}  // namespace detail

template <class F>
Poly<F> Poly<F>::parse(const CtxPtr& ctx, std::string_view src) {
    detail::Lexer lx(src);

    auto parse_expr = [&](auto&& self_expr) -> Poly {
        auto parse_atom = [&](auto&& self_expr2) -> Poly {
            switch (lx.tok) {
                case detail::Tok::Num: {
                    auto c = ctx->field.parse(lx.text);
                    lx.next();
                    return Poly::constant(ctx, c);
                }
                case detail::Tok::Ident: {
                    std::string name = lx.text;
                    lx.next();
                    if (auto v = ctx->find(name)) return Poly::variable(ctx, *v);
                    if (auto c = ctx->field.symbol(name)) return Poly::constant(ctx, *c);
                    throw input_error("unknown symbol '" + name + "' in polynomial");
                }
                case detail::Tok::LParen: {
                    lx.next();
                    Poly p = self_expr2(self_expr2);
                    if (lx.tok != detail::Tok::RParen) throw input_error("expected ')' in polynomial");
                    lx.next();
                    return p;
                }
                default:
                    throw input_error("unexpected token in polynomial: '" + std::string(src) + "'");
            }
        };

        auto parse_factor = [&](auto&& self_expr2) -> Poly {
            Poly base = parse_atom(self_expr2);
            if (lx.tok == detail::Tok::Caret) {
                lx.next();
                bool neg = false;
                if (lx.tok == detail::Tok::Minus) { neg = true; lx.next(); }
                if (lx.tok != detail::Tok::Num) throw input_error("expected integer exponent");
                long e = std::stol(lx.text);
                lx.next();
                base = base.pow(neg ? -e : e);
            }
            return base;
        };

        auto parse_term = [&](auto&& self_expr2) -> Poly {
            Poly acc = parse_factor(self_expr2);
            for (;;) {
                if (lx.tok == detail::Tok::Star) {
                    lx.next();
                    acc = acc * parse_factor(self_expr2);
                } else if (lx.tok == detail::Tok::Slash) {
                    lx.next();
                    Poly d = parse_factor(self_expr2);
                    auto inv = d.unit_inverse();
                    if (!inv) throw input_error("division by non-unit in polynomial: " + d.str());
                    acc = acc * *inv;
                } else {
                    return acc;
                }
            }
        };

        bool neg = false;
        if (lx.tok == detail::Tok::Plus) lx.next();
        else if (lx.tok == detail::Tok::Minus) { neg = true; lx.next(); }
        Poly acc = parse_term(self_expr);
        if (neg) acc = -acc;
        for (;;) {
            if (lx.tok == detail::Tok::Plus) {
                lx.next();
                acc = acc + parse_term(self_expr);
            } else if (lx.tok == detail::Tok::Minus) {
                lx.next();
                acc = acc - parse_term(self_expr);
            } else {
                return acc;
            }
        }
    };

    Poly p = parse_expr(parse_expr);
    if (lx.tok != detail::Tok::End) throw input_error("trailing input in polynomial: '" + std::string(src) + "'");
    return p;
}

// Exact division: returns q with f = q*g, throwing verify_error if no such q
// exists in the context ring.
template <class F>
Poly<F> exact_divide(const Poly<F>& f, const Poly<F>& g) {
    if (g.is_zero()) throw error("exact division by zero");
    auto ctx = f.ctx();
    Poly<F> rem = f;
    Poly<F> quot = Poly<F>::zero(ctx);
    long guard = 0;
    while (!rem.is_zero()) {
        if (++guard > 200000) throw error("exact division did not terminate");
        const auto& [mf, cf] = rem.leading();
        const auto& [mg, cg] = g.leading();
        Mono m = mf.div(mg);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] < 0 && (!ctx->inverted || *ctx->inverted != i))
                throw verify_error("not exactly divisible", rem.str() + "  by  " + g.str());
        }
        Poly<F> t = Poly<F>::term(ctx, m, cf / cg);
        quot = quot + t;
        rem = rem - t * g;
    }
    return quot;
}

}  // namespace ab13
