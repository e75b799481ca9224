#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "qsphere/calculus.hpp"

using namespace qsphere;

namespace {

const NCElement A = NCElement::alpha();
const NCElement As = NCElement::alphaStar();
const NCElement G = NCElement::gamma();
const NCElement Gs = NCElement::gammaStar();
const NCElement One = NCElement::one();
const NCElement X = Gs * G;

/// Monomial basis of the whole coordinate algebra up to a degree bound.
std::vector<NCMonomial> algebraBasis(int maxDeg) {
    std::vector<NCMonomial> out;
    for (int m = 0; m <= maxDeg; ++m)
        for (int n = 0; m + n <= maxDeg; ++n)
            for (int k = -(maxDeg - m - n); k <= maxDeg - m - n; ++k) out.push_back({k, m, n});
    return out;
}

/// Monomial basis of a weight space A_w up to a degree bound.
std::vector<NCMonomial> weightBasis(int w, int maxDeg) {
    std::vector<NCMonomial> out;
    for (const auto& mo : algebraBasis(maxDeg))
        if (mo.leftWeight() == w) out.push_back(mo);
    return out;
}

NCElement randomWeightElement(std::mt19937_64& rng, int w, int maxDeg, int terms) {
    auto basis = weightBasis(w, maxDeg);
    std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
    std::uniform_int_distribution<int> coef(-3, 3), qe(-1, 1);
    NCElement e;
    for (int i = 0; i < terms; ++i)
        e.addTerm(basis[pick(rng)], RatFunc::q(qe(rng), mpq_class(coef(rng))));
    return e;
}

Form randomForm(std::mt19937_64& rng, int maxDeg) {
    return Form(randomWeightElement(rng, 0, maxDeg, 2), randomWeightElement(rng, -2, maxDeg, 2),
                randomWeightElement(rng, 2, maxDeg, 2), randomWeightElement(rng, 0, maxDeg, 2));
}

Form randomHomogeneous(std::mt19937_64& rng, int deg, int maxDeg) {
    switch (deg) {
        case 0: return Form(randomWeightElement(rng, 0, maxDeg, 2), {}, {}, {});
        case 1:
            return Form({}, randomWeightElement(rng, -2, maxDeg, 2),
                        randomWeightElement(rng, 2, maxDeg, 2), {});
        default: return Form({}, {}, {}, randomWeightElement(rng, 0, maxDeg, 2));
    }
}

} // namespace

TEST_CASE("haar state values") {
    CHECK(haar(One) == RatFunc(1L));
    CHECK(haar(X) == RatFunc(1L) / (RatFunc(1L) + RatFunc::q(2)));
    CHECK(haar(A * X).isZero());
    for (int n = 1; n <= 5; ++n) {
        NCElement xn = NCElement::monomial({0, n, n});
        RatFunc expect = (RatFunc(1L) - RatFunc::q(2)) / (RatFunc(1L) - RatFunc::q(2 * (n + 1)));
        CHECK(haar(xn) == expect);
    }
}

TEST_CASE("haar invariance oracle forces the vanishing rule") {
    // h(d_omega a) = eps(omega) h(a) and h(a <| omega) = eps(omega) h(a),
    // swept over the monomial basis of degree <= 5.
    for (const auto& mo : algebraBasis(5)) {
        NCElement a = NCElement::monomial(mo);
        CHECK(haar(dE(a)).isZero());
        CHECK(haar(dF(a)).isZero());
        CHECK(haar(dK(a)) == haar(a));
        CHECK(haar(actRight(Gen::E, a)).isZero());
        CHECK(haar(actRight(Gen::F, a)).isZero());
        CHECK(haar(actRight(Gen::K, a)) == haar(a));
    }
}

TEST_CASE("inner product") {
    CHECK(inner(One, One) == RatFunc(1L));
    CHECK(inner(A, A) == RatFunc::q(2) / (RatFunc(1L) + RatFunc::q(2)));
    CHECK(inner(A, G).isZero());
    // positivity on the monomial basis at q0 = 1/2
    mpq_class half(1, 2);
    for (const auto& mo : algebraBasis(4)) {
        NCElement a = NCElement::monomial(mo);
        CHECK(inner(a, a).evalF(half) > 0.0);
    }
}

TEST_CASE("modular property of the Haar state") {
    // h(a1 a2) = h(a2 d_{k^-2}(a1 <| k^-2)), exhaustive over monomial pairs deg <= 4
    auto basis = algebraBasis(4);
    auto kinv2 = [](const NCElement& x) {
        return actLeft(Gen::KInv, actLeft(Gen::KInv, actRight(Gen::KInv, actRight(Gen::KInv, x))));
    };
    for (const auto& m1 : basis)
        for (const auto& m2 : basis) {
            NCElement a1 = NCElement::monomial(m1), a2 = NCElement::monomial(m2);
            CHECK(haar(a1 * a2) == haar(a2 * kinv2(a1)));
        }
}

TEST_CASE("Stokes identity") {
    // q^2 h(d_e(b1) d_f(b2)) = h(d_f(b1) d_e(b2)) over the sphere basis, deg <= 6
    auto basis = weightBasis(0, 6);
    const RatFunc q2 = RatFunc::q(2);
    for (const auto& m1 : basis)
        for (const auto& m2 : basis) {
            NCElement b1 = NCElement::monomial(m1), b2 = NCElement::monomial(m2);
            CHECK(q2 * haar(dE(b1) * dF(b2)) == haar(dF(b1) * dE(b2)));
        }
}

TEST_CASE("twisted trace property of h on weight spaces") {
    // q^2 h(a a') = h(sigma(a') a) for a in A_2, a' in A_-2, exhaustive deg <= 5
    auto plus = weightBasis(2, 5);
    auto minus = weightBasis(-2, 5);
    const RatFunc q2 = RatFunc::q(2);
    for (const auto& mp : plus)
        for (const auto& mm : minus) {
            NCElement a = NCElement::monomial(mp), ap = NCElement::monomial(mm);
            CHECK(q2 * haar(a * ap) == haar(sigma(ap) * a));
        }
}

TEST_CASE("wedge product") {
    std::mt19937_64 rng(31);
    Form unit = Form::fun(One);
    for (int i = 0; i < 10; ++i) {
        Form y = randomForm(rng, 4);
        CHECK(wedge(unit, y) == y);
        CHECK(wedge(y, unit) == y);
    }
    // degree-1 times degree-1 lands in the displayed top component
    Form x({}, Gs * Gs, A * A, {});
    Form y({}, As * Gs, G * A, {});
    Form w = wedge(x, y);
    CHECK(w.c00().isZero());
    CHECK(w.c01().isZero());
    CHECK(w.c10().isZero());
    CHECK(w.c11() == RatFunc(-1L) * (Gs * Gs * (G * A)) + RatFunc::q(2) * (A * A * (As * Gs)));
    for (int i = 0; i < 10; ++i) {
        Form a = randomForm(rng, 3), b = randomForm(rng, 3), c = randomForm(rng, 3);
        CHECK(wedge(a, wedge(b, c)) == wedge(wedge(a, b), c));
    }
}

TEST_CASE("differential") {
    CHECK(dee(Form::fun(One)).isZero());
    std::mt19937_64 rng(33);
    for (int i = 0; i < 10; ++i) {
        NCElement b = randomWeightElement(rng, 0, 4, 3);
        Form db = dee(Form::fun(b));
        CHECK(db.c01() == dF(b));
        CHECK(db.c10() == dE(b));
        CHECK(db.c11().isZero());
        Form x = randomForm(rng, 4);
        CHECK(dee(dee(x)).isZero());
    }
}

TEST_CASE("graded Leibniz rule") {
    std::mt19937_64 rng(34);
    for (int dx = 0; dx <= 2; ++dx)
        for (int dy = 0; dy <= 2; ++dy)
            for (int i = 0; i < 6; ++i) {
                Form x = randomHomogeneous(rng, dx, 4), y = randomHomogeneous(rng, dy, 4);
                Form lhs = dee(wedge(x, y));
                Form rhs = wedge(dee(x), y) + (dx % 2 == 0 ? wedge(x, dee(y))
                                                           : RatFunc(-1L) * wedge(x, dee(y)));
                CHECK(lhs == rhs);
            }
}

TEST_CASE("the integral is closed and twisted-graded") {
    std::mt19937_64 rng(35);
    CHECK(integrate(Form::top(One)) == RatFunc(1L));
    for (int i = 0; i < 20; ++i) {
        Form y = randomHomogeneous(rng, 1, 4);
        CHECK(integrate(dee(y)).isZero());
    }
    // int w ^ w' = (-1)^(deg deg') int sigma(w') ^ w for complementary degrees
    for (int i = 0; i < 15; ++i) {
        for (auto [dx, dy] : std::vector<std::pair<int, int>>{{0, 2}, {1, 1}, {2, 0}}) {
            Form x = randomHomogeneous(rng, dx, 4), y = randomHomogeneous(rng, dy, 4);
            RatFunc lhs = integrate(wedge(x, y));
            RatFunc rhs = integrate(wedge(sigma(y), x));
            if (dx * dy % 2 == 1) rhs = -rhs;
            CHECK(lhs == rhs);
        }
    }
}
