#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "qsphere/ratfunc.hpp"

namespace qsphere {

/// Basis monomial a^k g^m g*^n of the coordinate algebra of SU_q(2), with the
/// convention a^k = (a*)^(-k) for k < 0. The triple (k,m,n) identifies the
/// element uniquely; left and right weights are derived.
struct NCMonomial {
    int k = 0;  ///< power of alpha (negative means alpha*)
    int m = 0;  ///< power of gamma
    int n = 0;  ///< power of gamma*

    auto operator<=>(const NCMonomial&) const = default;

    int leftWeight() const { return k + m - n; }   // eigenvalue of d_k is q^(lw/2)
    int rightWeight() const { return k - m + n; }  // eigenvalue of <|k is q^(rw/2)
    int degree() const { return (k >= 0 ? k : -k) + m + n; }
    bool isUnit() const { return k == 0 && m == 0 && n == 0; }

    std::string str() const {
        if (isUnit()) return "1";
        std::string out;
        auto app = [&out](const char* g, int e) {
            if (e == 0) return;
            if (!out.empty()) out += " * ";
            out += g;
            if (e != 1) out += "^" + std::to_string(e);
        };
        if (k > 0)
            app("a", k);
        else if (k < 0)
            app("a*", -k);
        app("g", m);
        app("g*", n);
        return out;
    }
};

/// Finitely supported Q(q)-linear combination of normal-form monomials.
/// All products are rewritten back to the basis via the defining relations
///   a*a + g*g = 1,  aa* + q^2 g*g = 1,  g*g = gg*,  ag = q ga,  ag* = q g*a.
class NCElement {
public:
    using Terms = std::map<NCMonomial, RatFunc>;

    NCElement() = default;
    explicit NCElement(const RatFunc& c) {
        if (!c.isZero()) t_[NCMonomial{}] = c;
    }

    static NCElement monomial(const NCMonomial& mo, const RatFunc& c = RatFunc(1L)) {
        NCElement e;
        if (!c.isZero()) e.t_[mo] = c;
        return e;
    }
    static NCElement one() { return NCElement(RatFunc(1L)); }
    static NCElement alpha() { return monomial({1, 0, 0}); }
    static NCElement alphaStar() { return monomial({-1, 0, 0}); }
    static NCElement gamma() { return monomial({0, 1, 0}); }
    static NCElement gammaStar() { return monomial({0, 0, 1}); }

    bool isZero() const { return t_.empty(); }
    const Terms& terms() const { return t_; }
    std::size_t termCount() const { return t_.size(); }

    RatFunc coeff(const NCMonomial& mo) const {
        auto it = t_.find(mo);
        return it == t_.end() ? RatFunc(0L) : it->second;
    }

    void addTerm(const NCMonomial& mo, const RatFunc& c) {
        if (c.isZero()) return;
        auto it = t_.find(mo);
        if (it == t_.end()) {
            t_.emplace(mo, c);
        } else {
            it->second += c;
            if (it->second.isZero()) t_.erase(it);
        }
    }

    friend NCElement operator+(const NCElement& a, const NCElement& b) {
        NCElement r = a;
        for (const auto& [mo, c] : b.t_) r.addTerm(mo, c);
        return r;
    }
    friend NCElement operator-(const NCElement& a, const NCElement& b) {
        NCElement r = a;
        for (const auto& [mo, c] : b.t_) r.addTerm(mo, -c);
        return r;
    }
    friend NCElement operator-(const NCElement& a) {
        NCElement r;
        for (const auto& [mo, c] : a.t_) r.t_.emplace(mo, -c);
        return r;
    }
    NCElement& operator+=(const NCElement& o) {
        for (const auto& [mo, c] : o.t_) addTerm(mo, c);
        return *this;
    }
    NCElement& operator-=(const NCElement& o) {
        for (const auto& [mo, c] : o.t_) addTerm(mo, -c);
        return *this;
    }

    friend NCElement operator*(const RatFunc& c, const NCElement& a) {
        NCElement r;
        if (c.isZero()) return r;
        for (const auto& [mo, v] : a.t_) r.t_.emplace(mo, c * v);
        return r;
    }
    friend NCElement operator*(const NCElement& a, const RatFunc& c) { return c * a; }

    friend NCElement operator*(const NCElement& a, const NCElement& b) {
        NCElement r;
        for (const auto& [ma, ca] : a.t_)
            for (const auto& [mb, cb] : b.t_) {
                NCElement prod = monomialProduct(ma, mb);
                RatFunc c = ca * cb;
                for (const auto& [mo, v] : prod.t_) r.addTerm(mo, c * v);
            }
        return r;
    }
    NCElement& operator*=(const NCElement& o) { return *this = *this * o; }

    friend bool operator==(const NCElement& a, const NCElement& b) { return a.t_ == b.t_; }
    friend bool operator!=(const NCElement& a, const NCElement& b) { return !(a == b); }

    /// Anti-multiplicative conjugate-linear involution with a -> a*, g -> g*.
    /// Coefficients are fixed (q is real). On the basis:
    ///   (a^k g^m g*^n)* = q^(k(m+n)) a^(-k) g^n g*^m.
    NCElement star() const {
        NCElement r;
        for (const auto& [mo, c] : t_) {
            NCMonomial ms{-mo.k, mo.n, mo.m};
            r.addTerm(ms, c * RatFunc::q(mo.k * (mo.m + mo.n)));
        }
        return r;
    }

    int maxDegree() const {
        int d = 0;
        for (const auto& [mo, c] : t_) d = std::max(d, mo.degree());
        return d;
    }

    /// True if every monomial has the given left weight (vacuously true for 0).
    bool isHomogeneous(int lw) const {
        for (const auto& [mo, c] : t_)
            if (mo.leftWeight() != lw) return false;
        return true;
    }
    bool isGradeZero() const { return isHomogeneous(0); }
    /// True if supported on the unit monomial only.
    bool isScalar() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first.isUnit()); }
    RatFunc scalarValue() const { return coeff(NCMonomial{}); }

    /// Canonical rendering: terms by ascending (k,m,n), coefficients in the scalar
    /// grammar, multiplication spelled ` * ` so output re-parses. Example:
    /// `1 - q^2 * g * g*`.
    std::string str() const {
        if (t_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [mo, c] : t_) {
            bool neg = c.printsNegative();
            RatFunc cc = neg ? -c : c;
            if (first) {
                if (neg) out += "-";
                first = false;
            } else {
                out += neg ? " - " : " + ";
            }
            if (mo.isUnit()) {
                out += cc.str();
                continue;
            }
            if (!cc.isOne()) {
                bool parens = cc.den().isOne() && !cc.num().isSingleTerm();
                out += parens ? "(" + cc.str() + ")" : cc.str();
                out += " * ";
            }
            out += mo.str();
        }
        return out;
    }

    /// Product of two basis monomials, expanded in the basis. This is the whole
    /// rewriting system: commute the alpha-block of the right factor through the
    /// gamma-block of the left one (factor q^(-k2(m1+n1))), merge the alpha-blocks
    /// eliminating mixed pairs via aa* = 1 - q^2 x and a*a = 1 - x with x = g*g,
    /// and absorb the resulting powers of x into the gamma-blocks.
    static NCElement monomialProduct(const NCMonomial& a, const NCMonomial& b) {
        RatFunc factor = RatFunc::q(-b.k * (a.m + a.n));
        NCElement mid = combineAlpha(a.k, b.k);
        NCElement r;
        int M = a.m + b.m, N = a.n + b.n;
        for (const auto& [mo, c] : mid.t_) {
            // mo = (K, j, j): alpha^K x^j
            r.addTerm(NCMonomial{mo.k, mo.m + M, mo.n + N}, factor * c);
        }
        return r;
    }

private:
    // alpha^a * alpha^b expanded as sums of alpha^(a+b) x^j (monomials (a+b, j, j)).
    static NCElement combineAlpha(int a, int b) {
        if (a == 0 || b == 0 || (a > 0) == (b > 0)) return monomial({a + b, 0, 0});
        if (a > 0) {
            // a^a a*^(-b) = [a^(a-1) a*^(-b-1)] (1 - q^(-2b) x)
            NCElement inner = combineAlpha(a - 1, b + 1);
            return inner * xPoly(RatFunc::q(-2 * b, mpq_class(-1)));
        }
        // a*^(-a) a^b = [a*^(-a-1) a^(b-1)] (1 - q^(-2(b-1)) x)
        NCElement inner = combineAlpha(a + 1, b - 1);
        return inner * xPoly(RatFunc::q(-2 * (b - 1), mpq_class(-1)));
    }

    // 1 + c*x as an NCElement (x = g*g is the monomial (0,1,1))
    static NCElement xPoly(const RatFunc& c) {
        NCElement e = one();
        e.addTerm(NCMonomial{0, 1, 1}, c);
        return e;
    }

    Terms t_;
};

inline NCElement star(const NCElement& a) { return a.star(); }

} // namespace qsphere
