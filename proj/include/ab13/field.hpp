// Exact coefficient fields: Q, Q(om) with om^2+om+1 = 0, and prime fields F_p.
//
// Each field is a small *context* struct (QField / QOmegaField / FpField)
// exposing a value type `Elem` plus construction, parsing and printing.
// Elements carry everything needed for arithmetic themselves (F_p elements
// store their modulus), so the usual operator overloads work and algorithm
// code stays readable.
//
// Rationals delegate storage and reduction to GMP's mpq, which keeps values
// canonical (lowest terms, positive denominator) after every operation.
#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "ab13/errors.hpp"
#include "ab13/rng.hpp"

namespace ab13 {

// ---------------------------------------------------------------------------
// Rational numbers
// ---------------------------------------------------------------------------

class Rat {
  public:
    Rat() : v_(0) {}
    explicit Rat(long n) : v_(n) {}
    Rat(long num, long den) : v_(num, den) {
        if (den == 0) throw input_error("rational with zero denominator");
        v_.canonicalize();
    }
    explicit Rat(const mpq_class& q) : v_(q) {}

    static Rat parse(std::string_view s);

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }
    // True when the value is a negative number (used by printers to decide
    // between '+' and '-' separators).
    bool is_negative() const { return v_ < 0; }

    Rat operator-() const { return Rat(mpq_class(-v_)); }
    Rat operator+(const Rat& o) const { return Rat(mpq_class(v_ + o.v_)); }
    Rat operator-(const Rat& o) const { return Rat(mpq_class(v_ - o.v_)); }
    Rat operator*(const Rat& o) const { return Rat(mpq_class(v_ * o.v_)); }
    Rat operator/(const Rat& o) const {
        if (o.is_zero()) throw error("division by zero in Q");
        return Rat(mpq_class(v_ / o.v_));
    }
    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }

    bool operator==(const Rat& o) const { return v_ == o.v_; }
    bool operator!=(const Rat& o) const { return v_ != o.v_; }

    Rat inv() const {
        if (is_zero()) throw error("inverse of zero in Q");
        return Rat(mpq_class(1 / v_));
    }

    const mpq_class& raw() const { return v_; }
    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }

    std::string str() const { return v_.get_str(); }

  private:
    mpq_class v_;
};

inline Rat Rat::parse(std::string_view s) {
    if (s.empty()) throw input_error("empty rational literal");
    for (char c : s)
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '+'))
            throw input_error("bad rational literal: " + std::string(s));
    mpq_class q;
    if (q.set_str(std::string(s), 10) != 0)
        throw input_error("bad rational literal: " + std::string(s));
    if (q.get_den() == 0) throw input_error("rational with zero denominator: " + std::string(s));
    q.canonicalize();
    return Rat(q);
}

// ---------------------------------------------------------------------------
// Q(om), om^2 + om + 1 = 0
// ---------------------------------------------------------------------------

// Represented as a + b*om with rational a, b. The second primitive cube root
// of unity is om^2 = -1 - om; the norm (a+b*om)(a+b*om^2) = a^2 - a*b + b^2
// drives inversion.
class QOmega {
  public:
    QOmega() = default;
    QOmega(Rat a, Rat b) : a_(std::move(a)), b_(std::move(b)) {}
    explicit QOmega(Rat a) : a_(std::move(a)) {}
    explicit QOmega(long n) : a_(Rat(n)) {}

    const Rat& re() const { return a_; }   // coefficient of 1
    const Rat& wc() const { return b_; }   // coefficient of om

    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
    bool is_one() const { return a_.is_one() && b_.is_zero(); }
    bool is_negative() const {
        // Printing aid only; order "negative iff leading printed sign is -".
        return b_.is_zero() ? a_.is_negative() : (a_.is_zero() ? b_.is_negative() : false);
    }

    QOmega operator-() const { return {-a_, -b_}; }
    QOmega operator+(const QOmega& o) const { return {a_ + o.a_, b_ + o.b_}; }
    QOmega operator-(const QOmega& o) const { return {a_ - o.a_, b_ - o.b_}; }
    QOmega operator*(const QOmega& o) const {
        // (a+b om)(c+d om) = (ac - bd) + (ad + bc - bd) om
        Rat bd = b_ * o.b_;
        return {a_ * o.a_ - bd, a_ * o.b_ + b_ * o.a_ - bd};
    }
    QOmega inv() const {
        Rat n = a_ * a_ - a_ * b_ + b_ * b_;
        if (n.is_zero()) throw error("inverse of zero in Q(om)");
        Rat ninv = n.inv();
        // (a + b om)^-1 = (a - b - b om) / norm
        return {(a_ - b_) * ninv, (-b_) * ninv};
    }
    QOmega operator/(const QOmega& o) const { return *this * o.inv(); }
    QOmega& operator+=(const QOmega& o) { a_ += o.a_; b_ += o.b_; return *this; }
    QOmega& operator-=(const QOmega& o) { a_ -= o.a_; b_ -= o.b_; return *this; }
    QOmega& operator*=(const QOmega& o) { *this = *this * o; return *this; }

    bool operator==(const QOmega& o) const { return a_ == o.a_ && b_ == o.b_; }
    bool operator!=(const QOmega& o) const { return !(*this == o); }

    std::string str() const {
        if (b_.is_zero()) return a_.str();
        std::string bs;
        if (b_.is_one()) bs = "om";
        else if ((-b_).is_one()) bs = "-om";
        else bs = b_.str() + "*om";
        if (a_.is_zero()) return bs;
        if (b_.is_negative()) {
            std::string neg = (-b_).is_one() ? "om" : (-b_).str() + "*om";
            return a_.str() + "-" + neg;
        }
        return a_.str() + "+" + bs;
    }

  private:
    Rat a_, b_;
};

// ---------------------------------------------------------------------------
// Prime fields
// ---------------------------------------------------------------------------

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin, valid for all 64-bit inputs with this base set.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

}  // namespace detail

class FpElem {
  public:
    FpElem() : v_(0), p_(0) {}
    FpElem(std::uint64_t v, std::uint64_t p) : v_(v % p), p_(p) {}

    std::uint64_t value() const { return v_; }
    std::uint64_t modulus() const { return p_; }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_negative() const { return false; }  // residues print unsigned

    FpElem operator-() const { return {v_ == 0 ? 0 : p_ - v_, p_}; }
    FpElem operator+(const FpElem& o) const { check(o); std::uint64_t s = v_ + o.v_; if (s >= p_) s -= p_; return {s, p_}; }
    FpElem operator-(const FpElem& o) const { check(o); return {v_ >= o.v_ ? v_ - o.v_ : v_ + p_ - o.v_, p_}; }
    FpElem operator*(const FpElem& o) const { check(o); return {detail::mulmod(v_, o.v_, p_), p_}; }
    FpElem inv() const {
        if (v_ == 0) throw error("inverse of zero in F_p");
        return {detail::powmod(v_, p_ - 2, p_), p_};
    }
    FpElem operator/(const FpElem& o) const { check(o); return *this * o.inv(); }
    FpElem& operator+=(const FpElem& o) { *this = *this + o; return *this; }
    FpElem& operator-=(const FpElem& o) { *this = *this - o; return *this; }
    FpElem& operator*=(const FpElem& o) { *this = *this * o; return *this; }

    bool operator==(const FpElem& o) const { check(o); return v_ == o.v_; }
    bool operator!=(const FpElem& o) const { return !(*this == o); }

    std::string str() const { return std::to_string(v_); }

  private:
    void check(const FpElem& o) const {
        if (p_ != o.p_) throw error("F_p arithmetic across different moduli");
    }
    std::uint64_t v_;
    std::uint64_t p_;
};

// ---------------------------------------------------------------------------
// Field contexts
// ---------------------------------------------------------------------------

struct QField {
    using Elem = Rat;

    std::string name() const { return "q"; }
    unsigned long characteristic() const { return 0; }

    Elem zero() const { return Rat(); }
    Elem one() const { return Rat(1); }
    Elem from_int(long n) const { return Rat(n); }
    Elem from_fraction(long n, long d) const { return Rat(n, d); }

    Elem parse(std::string_view s) const { return Rat::parse(s); }
    // Identifier hook used by the expression parser ("om" etc.); Q has none.
    std::optional<Elem> symbol(std::string_view) const { return std::nullopt; }
    std::string str(const Elem& e) const { return e.str(); }
    // Whether the printed form has an internal '+'/'-' and needs wrapping
    // when used as a coefficient.
    bool composite(const Elem&) const { return false; }

    bool has_cube_root_of_unity() const { return false; }
    Elem cube_root_of_unity() const {
        throw unsupported_error("Q contains no primitive cube root of unity");
    }

    // Small exact values for property tests and scans: n/d with n in
    // [-12, 12], d in {1, 1, 1, 2, 3}.
    Elem random(Rng& rng) const {
        long n = rng.in_range(-12, 12);
        static const long dens[5] = {1, 1, 1, 2, 3};
        long d = dens[rng.in_range(0, 4)];
        return Rat(n, d);
    }
};

struct QOmegaField {
    using Elem = QOmega;

    std::string name() const { return "qw"; }
    unsigned long characteristic() const { return 0; }

    Elem zero() const { return QOmega(); }
    Elem one() const { return QOmega(1); }
    Elem from_int(long n) const { return QOmega(n); }
    Elem from_fraction(long n, long d) const { return QOmega(Rat(n, d), Rat()); }

    Elem parse(std::string_view s) const { return QOmega(Rat::parse(s), Rat()); }
    std::optional<Elem> symbol(std::string_view s) const {
        if (s == "om") return QOmega(Rat(0), Rat(1));
        return std::nullopt;
    }
    std::string str(const Elem& e) const { return e.str(); }
    bool composite(const Elem& e) const { return !e.re().is_zero() && !e.wc().is_zero(); }

    bool has_cube_root_of_unity() const { return true; }
    Elem cube_root_of_unity() const { return QOmega(Rat(0), Rat(1)); }

    Elem random(Rng& rng) const {
        QField q;
        return QOmega(q.random(rng), q.random(rng));
    }
};

struct FpField {
    using Elem = FpElem;

    std::uint64_t p;

    explicit FpField(std::uint64_t p_) : p(p_) {
        if (p < 5) throw input_error("prime field needs p >= 5");
        if (p >= (1ULL << 31)) throw input_error("prime field modulus too large (p < 2^31)");
        if (!detail::is_prime_u64(p)) throw input_error("modulus " + std::to_string(p) + " is not prime");
    }

    std::string name() const { return "fp:" + std::to_string(p); }
    unsigned long characteristic() const { return p; }

    Elem zero() const { return {0, p}; }
    Elem one() const { return {1, p}; }
    Elem from_int(long n) const {
        long r = n % static_cast<long>(p);
        if (r < 0) r += static_cast<long>(p);
        return {static_cast<std::uint64_t>(r), p};
    }
    Elem from_fraction(long n, long d) const { return from_int(n) / from_int(d); }

    Elem parse(std::string_view s) const {
        if (s.empty()) throw input_error("empty F_p literal");
        // Accept integers and n/d fractions (reduced mod p).
        auto slash = s.find('/');
        if (slash != std::string_view::npos) {
            Elem num = parse(s.substr(0, slash));
            Elem den = parse(s.substr(slash + 1));
            if (den.is_zero()) throw input_error("F_p literal with zero denominator");
            return num / den;
        }
        bool neg = false;
        std::size_t i = 0;
        if (s[0] == '-' || s[0] == '+') { neg = s[0] == '-'; i = 1; }
        if (i == s.size()) throw input_error("bad F_p literal: " + std::string(s));
        Elem acc = zero();
        Elem ten = from_int(10);
        for (; i < s.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(s[i])))
                throw input_error("bad F_p literal: " + std::string(s));
            acc = acc * ten + from_int(s[i] - '0');
        }
        return neg ? -acc : acc;
    }
    std::optional<Elem> symbol(std::string_view) const { return std::nullopt; }
    std::string str(const Elem& e) const { return e.str(); }
    bool composite(const Elem&) const { return false; }

    bool has_cube_root_of_unity() const { return p % 3 == 1; }

    // Canonical primitive cube root of unity: the smallest positive residue
    // of multiplicative order exactly 3 (for p = 31 this is 5).
    Elem cube_root_of_unity() const {
        if (p % 3 != 1)
            throw unsupported_error("F_" + std::to_string(p) + " has no primitive cube root of unity (p % 3 != 1)");
        for (std::uint64_t a = 2;; ++a) {
            std::uint64_t g = detail::powmod(a, (p - 1) / 3, p);
            if (g != 1) {
                std::uint64_t g2 = detail::mulmod(g, g, p);
                return {std::min(g, g2), p};
            }
        }
    }

    Elem random(Rng& rng) const { return {rng.u64() % p, p}; }
};

// xi^k for any integer k, where xi is the field's primitive cube root of
// unity; exponents are reduced mod 3.
template <class F>
typename F::Elem xi_pow(const F& field, long k) {
    long r = k % 3;
    if (r < 0) r += 3;
    if (r == 0) return field.one();
    typename F::Elem x = field.cube_root_of_unity();
    for (long i = 1; i < r; ++i) x = x * field.cube_root_of_unity();
    return x;
}

}  // namespace ab13
