#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "qsphere/laurent.hpp"

namespace qsphere {

/// Element of the scalar field Q(q^(1/2)): a quotient num/den of Laurent polynomials
/// kept in canonical reduced form:
///   * den is an ordinary polynomial with lowest exponent 0 and lowest coefficient 1,
///   * gcd(num cleared of its s^k shift, den) = 1 over Q[s].
/// Equality of canonical forms therefore decides equality in the field.
class RatFunc {
public:
    RatFunc() : num_(), den_(LaurentPoly(mpq_class(1))) {}
    RatFunc(long v) : RatFunc(mpq_class(v)) {}
    RatFunc(const mpq_class& c) : num_(LaurentPoly(c)), den_(LaurentPoly(mpq_class(1))) {}
    RatFunc(const LaurentPoly& num, const LaurentPoly& den) : num_(num), den_(den) {
        if (den_.isZero()) throw DivisionByZero("rational function with zero denominator");
        canonicalize();
    }
    explicit RatFunc(const LaurentPoly& num) : num_(num), den_(LaurentPoly(mpq_class(1))) {}

    static RatFunc q(int j, const mpq_class& c = mpq_class(1)) {
        return RatFunc(LaurentPoly::qPower(j, c));
    }
    /// c * q^(e/2)
    static RatFunc sqrtQ(int e, const mpq_class& c = mpq_class(1)) {
        return RatFunc(LaurentPoly::sPower(e, c));
    }

    /// q-integer [n] = (q^n - q^-n)/(q - q^-1) = q^(n-1) + q^(n-3) + ... + q^(1-n).
    static RatFunc qint(int n) {
        LaurentPoly p;
        int a = std::abs(n);
        for (int e = 1 - a; e <= a - 1; e += 2) p.addTerm(2 * e, mpq_class(n >= 0 ? 1 : -1));
        return RatFunc(p);
    }

    bool isZero() const { return num_.isZero(); }
    bool isOne() const { return num_.isOne() && den_.isOne(); }
    const LaurentPoly& num() const { return num_; }
    const LaurentPoly& den() const { return den_; }
    bool isQIntegral() const { return num_.isQIntegral() && den_.isQIntegral(); }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        if (a.den_.isOne() && b.den_.isOne()) return RatFunc(a.num_ + b.num_);
        return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
        if (a.den_.isOne() && b.den_.isOne()) return RatFunc(a.num_ - b.num_);
        return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator-(const RatFunc& a) {
        RatFunc r = a;
        r.num_ = -r.num_;
        return r;
    }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        if (a.den_.isOne() && b.den_.isOne()) return RatFunc(a.num_ * b.num_);
        return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.isZero()) throw DivisionByZero();
        return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
    }
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }

    RatFunc pow(int e) const {
        if (e == 0) return RatFunc(1L);
        RatFunc base = e > 0 ? *this : RatFunc(1L) / *this;
        int k = std::abs(e);
        RatFunc r(1L);
        while (k > 0) {
            if (k & 1) r *= base;
            base *= base;
            k >>= 1;
        }
        return r;
    }

    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

    /// Exact rational evaluation at q = q0 when the value lies in Q(q); throws on half-powers.
    mpq_class evalQ(const mpq_class& q0) const {
        checkRange(q0, false);
        mpq_class dv = den_.evalQ(q0);
        if (dv == 0) throw PoleError("denominator vanishes at q0 = " + q0.get_str());
        return num_.evalQ(q0) / dv;
    }

    /// Exact evaluation at rational 0 < q0 < 1 as value = first + sqrt(q0) * second:
    /// numerator and denominator are split into even and odd parts of q^(1/2) and the
    /// quotient is rationalized, all in rational arithmetic.
    std::pair<mpq_class, mpq_class> evalSplitQ(const mpq_class& q0) const {
        checkRange(q0, true);
        mpq_class ne, no, de, dd;
        num_.evalSplit(q0, ne, no);
        den_.evalSplit(q0, de, dd);
        // 1/(de + r*dd) with r = sqrt(q0): rationalize by (de - r*dd).
        mpq_class denom = de * de - q0 * dd * dd;
        if (denom == 0) throw PoleError("denominator vanishes at q0 = " + q0.get_str());
        return {(ne * de - q0 * no * dd) / denom, (no * de - ne * dd) / denom};
    }

    /// Evaluation at a rational 0 < q0 < 1: exact rational arithmetic first, with
    /// rounding only in the final conversion of the even/odd parts.
    double evalF(const mpq_class& q0) const {
        auto [even, odd] = evalSplitQ(q0);
        if (odd == 0) return detail::mpqToDouble(even);
        return detail::mpqToDouble(even) +
               std::sqrt(detail::mpqToDouble(q0)) * detail::mpqToDouble(odd);
    }

    /// Square root within the field, when one exists (num and den perfect squares).
    std::optional<RatFunc> trySqrt() const {
        if (isZero()) return RatFunc(0L);
        auto rn = detail::polySqrt(num_);
        if (!rn) return std::nullopt;
        auto rd = detail::polySqrt(den_);
        if (!rd) return std::nullopt;
        RatFunc r(*rn, *rd);
        if (r * r != *this) {
            r = -r;
            if (r * r != *this) return std::nullopt;
        }
        // prefer the root with positive lowest numerator coefficient
        if (!r.isZero() && r.num_.coeff(r.num_.minExp()) < 0) r = -r;
        return r;
    }

    /// Canonical rendering, e.g. `1/(1 + q^2)`, `q^-1 + q`, `(1 - q^2)/(1 + q^4)`.
    std::string str() const {
        if (den_.isOne()) return num_.str();
        std::string ns = (num_.isSingleTerm()) ? num_.str() : "(" + num_.str() + ")";
        return ns + "/(" + den_.str() + ")";
    }

    /// Sign used by the element printer: sign of the lowest-exponent numerator coefficient.
    bool printsNegative() const { return !num_.isZero() && num_.coeff(num_.minExp()) < 0; }

private:
    static void checkRange(const mpq_class& q0, bool strict) {
        if (strict && !(q0 > 0 && q0 < 1))
            throw DomainError("q0 must lie in (0,1), got " + q0.get_str());
    }

    void canonicalize() {
        if (num_.isZero()) {
            den_ = LaurentPoly(mpq_class(1));
            return;
        }
        int a = num_.minExp(), b = den_.minExp();
        LaurentPoly np = num_.shifted(-a), dp = den_.shifted(-b);
        LaurentPoly g = detail::polyGcd(np, dp);
        if (!g.isOne()) {
            std::vector<mpq_class> quo, rem;
            detail::divMod(detail::toDense(np), detail::toDense(g), quo, rem);
            np = detail::fromDense(quo);
            detail::divMod(detail::toDense(dp), detail::toDense(g), quo, rem);
            dp = detail::fromDense(quo);
        }
        mpq_class lead = dp.coeff(dp.minExp());
        if (lead != 1) {
            np *= mpq_class(1) / lead;
            dp *= mpq_class(1) / lead;
        }
        num_ = np.shifted(a - b);
        den_ = dp;
    }

    LaurentPoly num_, den_;
};

} // namespace qsphere
