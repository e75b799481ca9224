#pragma once

#include "qsphere/actions.hpp"

namespace qsphere {

/// Haar state. Linear; on the basis h(a^k g^m g*^n) vanishes unless k = 0 and
/// m = n, and h((g*g)^n) = (1-q^2)/(1-q^(2(n+1))). The vanishing rule is forced
/// by invariance h(d_omega a) = eps(omega) h(a); tests sweep that oracle.
inline RatFunc haar(const NCElement& a) {
    RatFunc out(0L);
    for (const auto& [mo, c] : a.terms()) {
        if (mo.k != 0 || mo.m != mo.n) continue;
        RatFunc v = (RatFunc(1L) - RatFunc::q(1).pow(2)) /
                    (RatFunc(1L) - RatFunc::q(1).pow(2 * (mo.m + 1)));
        out += c * v;
    }
    return out;
}

/// GNS inner product <a,b> = h(a* b).
inline RatFunc inner(const NCElement& a, const NCElement& b) { return haar(a.star() * b); }

/// Graded de Rham element over the sphere: degree 0 and 2 components live in the
/// degree-zero subalgebra, the (0,1) part in A_{-2} and the (1,0) part in A_{+2}.
/// The constructor enforces the grading.
class Form {
public:
    Form() = default;
    Form(NCElement c00, NCElement c01, NCElement c10, NCElement c11)
        : c00_(std::move(c00)), c01_(std::move(c01)), c10_(std::move(c10)), c11_(std::move(c11)) {
        if (!c00_.isHomogeneous(0)) throw GradeError("form component (0,0) must have weight 0");
        if (!c01_.isHomogeneous(-2)) throw GradeError("form component (0,1) must have weight -2");
        if (!c10_.isHomogeneous(2)) throw GradeError("form component (1,0) must have weight 2");
        if (!c11_.isHomogeneous(0)) throw GradeError("form component (1,1) must have weight 0");
    }

    static Form fun(const NCElement& b) { return Form(b, {}, {}, {}); }
    static Form top(const NCElement& b) { return Form({}, {}, {}, b); }

    const NCElement& c00() const { return c00_; }
    const NCElement& c01() const { return c01_; }
    const NCElement& c10() const { return c10_; }
    const NCElement& c11() const { return c11_; }

    bool isZero() const {
        return c00_.isZero() && c01_.isZero() && c10_.isZero() && c11_.isZero();
    }
    /// -1 for 0, else the form degree if homogeneous, -2 if mixed.
    int homogeneousDegree() const {
        bool d0 = !c00_.isZero(), d1 = !c01_.isZero() || !c10_.isZero(), d2 = !c11_.isZero();
        int cnt = (d0 ? 1 : 0) + (d1 ? 1 : 0) + (d2 ? 1 : 0);
        if (cnt == 0) return -1;
        if (cnt > 1) return -2;
        return d0 ? 0 : (d1 ? 1 : 2);
    }

    friend Form operator+(const Form& a, const Form& b) {
        return Form(a.c00_ + b.c00_, a.c01_ + b.c01_, a.c10_ + b.c10_, a.c11_ + b.c11_);
    }
    friend Form operator-(const Form& a, const Form& b) {
        return Form(a.c00_ - b.c00_, a.c01_ - b.c01_, a.c10_ - b.c10_, a.c11_ - b.c11_);
    }
    friend Form operator*(const RatFunc& c, const Form& a) {
        return Form(c * a.c00_, c * a.c01_, c * a.c10_, c * a.c11_);
    }
    friend bool operator==(const Form& a, const Form& b) {
        return a.c00_ == b.c00_ && a.c01_ == b.c01_ && a.c10_ == b.c10_ && a.c11_ == b.c11_;
    }

private:
    NCElement c00_, c01_, c10_, c11_;
};

/// Product of the graded differential algebra:
/// (a00,a01,a10,a11) ^ (b00,b01,b10,b11) =
///   (a00 b00, a00 b01 + a01 b00, a10 b00 + a00 b10,
///    a00 b11 - a01 b10 + q^2 a10 b01 + a11 b00).
inline Form wedge(const Form& a, const Form& b) {
    const RatFunc q2 = RatFunc::q(2);
    return Form(a.c00() * b.c00(), a.c00() * b.c01() + a.c01() * b.c00(),
                a.c10() * b.c00() + a.c00() * b.c10(),
                a.c00() * b.c11() - a.c01() * b.c10() + q2 * (a.c10() * b.c01()) +
                    a.c11() * b.c00());
}

/// Holomorphic piece: (0, 0, d_e(a00), q d_e(a01)).
inline Form delHol(const Form& a) {
    return Form({}, {}, dE(a.c00()), RatFunc::q(1) * dE(a.c01()));
}

/// Anti-holomorphic piece: (0, d_f(a00), 0, -q d_f(a10)).
inline Form delBar(const Form& a) {
    return Form({}, dF(a.c00()), {}, RatFunc::q(1, mpq_class(-1)) * dF(a.c10()));
}

/// Exterior differential d = del + delbar.
inline Form dee(const Form& a) {
    return Form({}, dF(a.c00()), dE(a.c00()),
                RatFunc::q(1) * (dE(a.c01()) - dF(a.c10())));
}

/// The closed twisted integral: only the top component contributes.
inline RatFunc integrate(const Form& a) { return haar(a.c11()); }

/// Component-wise extension of the twist to forms.
inline Form sigma(const Form& a) {
    return Form(sigma(a.c00()), sigma(a.c01()), sigma(a.c10()), sigma(a.c11()));
}

} // namespace qsphere
