#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsphere/errors.hpp"

namespace qsphere {

/// Exact Laurent polynomials over the rationals in the formal variable s = q^(1/2).
///
/// Exponents count powers of s, so an even exponent 2j is the honest power q^j.
/// Half-powers of q are unavoidable: the enveloping-algebra generator k acts on
/// odd-weight elements with eigenvalue q^(1/2). No coefficient is ever a float
/// and no stored coefficient is zero.
class LaurentPoly {
public:
    using Coeffs = std::map<int, mpq_class>;

    LaurentPoly() = default;
    explicit LaurentPoly(const mpq_class& c) {
        if (c != 0) c_[0] = c;
    }
    explicit LaurentPoly(long v) : LaurentPoly(mpq_class(v)) {}

    /// c * s^e  (e in half-powers of q)
    static LaurentPoly sPower(int e, const mpq_class& c = mpq_class(1)) {
        LaurentPoly p;
        if (c != 0) p.c_[e] = c;
        return p;
    }
    /// c * q^j
    static LaurentPoly qPower(int j, const mpq_class& c = mpq_class(1)) { return sPower(2 * j, c); }

    bool isZero() const { return c_.empty(); }
    bool isOne() const { return c_.size() == 1 && c_.begin()->first == 0 && c_.begin()->second == 1; }
    const Coeffs& coeffs() const { return c_; }

    int minExp() const { return c_.begin()->first; }   // pre: nonzero
    int maxExp() const { return c_.rbegin()->first; }  // pre: nonzero

    mpq_class coeff(int e) const {
        auto it = c_.find(e);
        return it == c_.end() ? mpq_class(0) : it->second;
    }

    /// True when every exponent is an even power of s, i.e. the value lies in Q[q, q^-1].
    bool isQIntegral() const {
        for (const auto& [e, c] : c_)
            if (e % 2 != 0) return false;
        return true;
    }

    void addTerm(int e, const mpq_class& c) {
        if (c == 0) return;
        auto it = c_.find(e);
        if (it == c_.end()) {
            c_.emplace(e, c);
        } else {
            it->second += c;
            if (it->second == 0) c_.erase(it);
        }
    }

    LaurentPoly shifted(int d) const {
        LaurentPoly r;
        for (const auto& [e, c] : c_) r.c_.emplace(e + d, c);
        return r;
    }

    friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r = a;
        for (const auto& [e, c] : b.c_) r.addTerm(e, c);
        return r;
    }
    friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r = a;
        for (const auto& [e, c] : b.c_) r.addTerm(e, -c);
        return r;
    }
    friend LaurentPoly operator-(const LaurentPoly& a) {
        LaurentPoly r;
        for (const auto& [e, c] : a.c_) r.c_.emplace(e, -c);
        return r;
    }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r;
        for (const auto& [ea, ca] : a.c_)
            for (const auto& [eb, cb] : b.c_) r.addTerm(ea + eb, ca * cb);
        return r;
    }
    LaurentPoly& operator+=(const LaurentPoly& o) { return *this = *this + o; }
    LaurentPoly& operator-=(const LaurentPoly& o) { return *this = *this - o; }
    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }
    LaurentPoly& operator*=(const mpq_class& c) {
        if (c == 0) {
            c_.clear();
        } else {
            for (auto& [e, v] : c_) v *= c;
        }
        return *this;
    }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

    /// Exact evaluation at a rational q0 > 0, split as value = even + sqrt(q0) * odd.
    void evalSplit(const mpq_class& q0, mpq_class& even, mpq_class& odd) const {
        even = 0;
        odd = 0;
        for (const auto& [e, c] : c_) {
            int j = (e >= 0 ? e / 2 : -((-e + 1) / 2));  // floor(e/2)
            mpq_class p = qpow(q0, j);
            if (e % 2 == 0)
                even += c * p;
            else
                odd += c * p;  // e = 2j+1
        }
    }

    /// Exact evaluation for values lying in Q[q,q^-1]; throws DomainError on half-powers.
    mpq_class evalQ(const mpq_class& q0) const {
        mpq_class even, odd;
        evalSplit(q0, even, odd);
        if (odd != 0) throw DomainError("evalQ: value has half-integer powers of q");
        return even;
    }

    static mpq_class qpow(const mpq_class& x, int j) {
        if (j == 0) return mpq_class(1);
        mpq_class base = j > 0 ? x : mpq_class(1) / x;
        int e = j > 0 ? j : -j;
        mpq_class r(1);
        while (e > 0) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }

    /// Rendering in the shared expression grammar, terms by ascending exponent,
    /// e.g. `1 - q^2`, `q^-1 + q`. Odd s-exponents render as q^(e/2); those never
    /// occur in canonical CLI output.
    std::string str() const {
        if (c_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [e, c] : c_) {
            mpq_class a = c;
            bool neg = a < 0;
            if (neg) a = -a;
            if (first) {
                if (neg) out += "-";
                first = false;
            } else {
                out += neg ? " - " : " + ";
            }
            out += termStr(e, a);
        }
        return out;
    }

    bool isSingleTerm() const { return c_.size() == 1; }

private:
    static std::string termStr(int e, const mpq_class& absCoeff) {
        if (e == 0) return absCoeff.get_str();
        std::string qs;
        if (e == 2) {
            qs = "q";
        } else if (e % 2 == 0) {
            qs = "q^" + std::to_string(e / 2);
        } else {
            qs = "q^(" + std::to_string(e) + "/2)";  // diagnostic only
        }
        if (absCoeff == 1) return qs;
        return absCoeff.get_str() + " * " + qs;
    }

    Coeffs c_;
};

namespace detail {

/// Correctly rounded conversion; mpq_get_d truncates, which costs a full ulp.
inline double mpqToDouble(const mpq_class& x) {
    if (x == 0) return 0.0;
    mpfr_t t;
    mpfr_init2(t, 53);
    mpfr_set_q(t, x.get_mpq_t(), MPFR_RNDN);
    double d = mpfr_get_d(t, MPFR_RNDN);
    mpfr_clear(t);
    return d;
}

/// Dense coefficient vector of a Laurent polynomial with minExp >= 0.
inline std::vector<mpq_class> toDense(const LaurentPoly& p) {
    std::vector<mpq_class> d;
    if (p.isZero()) return d;
    if (p.minExp() < 0) throw DomainError("toDense: negative exponent");
    d.assign(static_cast<std::size_t>(p.maxExp()) + 1, mpq_class(0));
    for (const auto& [e, c] : p.coeffs()) d[static_cast<std::size_t>(e)] = c;
    return d;
}

inline LaurentPoly fromDense(const std::vector<mpq_class>& d) {
    LaurentPoly p;
    for (std::size_t i = 0; i < d.size(); ++i) p.addTerm(static_cast<int>(i), d[i]);
    return p;
}

inline void trim(std::vector<mpq_class>& d) {
    while (!d.empty() && d.back() == 0) d.pop_back();
}

/// Euclidean division a = q*b + r over Q[s]; b nonzero.
inline void divMod(std::vector<mpq_class> a, const std::vector<mpq_class>& b,
                   std::vector<mpq_class>& quot, std::vector<mpq_class>& rem) {
    trim(a);
    quot.assign(a.size() > b.size() - 1 ? a.size() - b.size() + 1 : 0, mpq_class(0));
    while (a.size() >= b.size() && !a.empty()) {
        mpq_class c = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        quot[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
        trim(a);
    }
    rem = std::move(a);
}

/// Monic gcd over Q[s] (normalized so the lowest-exponent coefficient is 1).
inline LaurentPoly polyGcd(const LaurentPoly& pa, const LaurentPoly& pb) {
    std::vector<mpq_class> a = toDense(pa), b = toDense(pb);
    trim(a);
    trim(b);
    while (!b.empty()) {
        std::vector<mpq_class> q, r;
        divMod(a, b, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    LaurentPoly g = fromDense(a);
    if (!g.isZero()) {
        mpq_class lead = g.coeff(g.minExp());
        g *= mpq_class(1) / lead;
    }
    return g;
}

inline bool mpzSqrt(const mpz_class& n, mpz_class& root) {
    if (n < 0) return false;
    root = sqrt(n);
    return root * root == n;
}

inline std::optional<mpq_class> mpqSqrt(const mpq_class& x) {
    mpz_class rn, rd;
    if (!mpzSqrt(x.get_num(), rn) || !mpzSqrt(x.get_den(), rd)) return std::nullopt;
    return mpq_class(rn, rd);
}

/// Exact square root of a Laurent polynomial, if one exists with coefficients in Q.
inline std::optional<LaurentPoly> polySqrt(const LaurentPoly& p) {
    if (p.isZero()) return LaurentPoly();
    int lo = p.minExp(), hi = p.maxExp();
    if ((hi - lo) % 2 != 0 || lo % 2 != 0) return std::nullopt;
    LaurentPoly shiftedP = p.shifted(-lo);
    std::vector<mpq_class> d = toDense(shiftedP);
    std::size_t deg = d.size() - 1;
    std::vector<mpq_class> r(deg / 2 + 1, mpq_class(0));
    auto lead = mpqSqrt(d[0]);
    if (!lead) return std::nullopt;
    r[0] = *lead;  // build from the low end
    for (std::size_t i = 1; i < r.size(); ++i) {
        mpq_class acc = d[i];
        for (std::size_t j = 1; j < i; ++j)
            if (j < r.size() && i - j < r.size()) acc -= r[j] * r[i - j];
        r[i] = acc / (2 * r[0]);
    }
    LaurentPoly root = fromDense(r).shifted(lo / 2);
    if (root * root != p) {
        LaurentPoly negRoot = -root;
        if (negRoot * negRoot != p) return std::nullopt;
        root = negRoot;
    }
    return root;
}

} // namespace detail
} // namespace qsphere
