#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qsphere/ratfunc.hpp"

using namespace qsphere;

namespace {

RatFunc randomRatFunc(std::mt19937_64& rng, bool allowDen = true) {
    std::uniform_int_distribution<int> nTerms(1, 3), expo(-3, 3), coef(-4, 4);
    auto randPoly = [&]() {
        LaurentPoly p;
        int n = nTerms(rng);
        for (int i = 0; i < n; ++i) p.addTerm(2 * expo(rng), mpq_class(coef(rng)));
        return p;
    };
    LaurentPoly num = randPoly();
    LaurentPoly den(mpq_class(1));
    if (allowDen) {
        do {
            den = randPoly();
        } while (den.isZero());
    }
    return RatFunc(num, den);
}

} // namespace

TEST_CASE("q-integers") {
    CHECK(RatFunc::qint(1) == RatFunc(1L));
    CHECK(RatFunc::qint(0) == RatFunc(0L));
    CHECK(RatFunc::qint(2) == RatFunc::q(1) + RatFunc::q(-1));
    CHECK(RatFunc::qint(-3) == -RatFunc::qint(3));
    // [n] = (q^n - q^-n)/(q - q^-1), checked against the defining quotient
    for (int n = -6; n <= 6; ++n) {
        RatFunc lhs = RatFunc::qint(n) * (RatFunc::q(1) - RatFunc::q(-1));
        CHECK(lhs == RatFunc::q(n) - RatFunc::q(-n));
    }
}

TEST_CASE("canonical reduction") {
    RatFunc a(LaurentPoly(mpq_class(1)) - LaurentPoly::qPower(2),
              LaurentPoly(mpq_class(1)) - LaurentPoly::qPower(4));
    RatFunc b(LaurentPoly(mpq_class(1)), LaurentPoly(mpq_class(1)) + LaurentPoly::qPower(2));
    CHECK(a == b);
    CHECK(a.str() == "1/(1 + q^2)");

    RatFunc x = RatFunc::q(2) + RatFunc(mpq_class(3, 2));
    CHECK(x + RatFunc(0L) == x);
    CHECK((RatFunc::q(1) + RatFunc::q(-1)) * (RatFunc::q(1) - RatFunc::q(-1)) ==
          RatFunc::q(2) - RatFunc::q(-2));
}

TEST_CASE("field axioms on random triples") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        RatFunc a = randomRatFunc(rng), b = randomRatFunc(rng), c = randomRatFunc(rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        if (!a.isZero()) {
            RatFunc inv = RatFunc(1L) / a;
            CHECK(a * inv == RatFunc(1L));
        }
        // canonical uniqueness: a - b == 0 iff identical canonical forms
        CHECK(((a - b).isZero()) == (a == b));
    }
}

TEST_CASE("division by zero is a distinct error") {
    CHECK_THROWS_AS(RatFunc(1L) / RatFunc(0L), DivisionByZero);
}

TEST_CASE("evaluation") {
    mpq_class half(1, 2);
    CHECK(RatFunc::qint(2).evalF(half) == 2.5);
    RatFunc r(LaurentPoly(mpq_class(1)), LaurentPoly(mpq_class(1)) + LaurentPoly::qPower(2));
    CHECK(r.evalF(half) == 0.8);
    RatFunc pole(LaurentPoly(mpq_class(1)), LaurentPoly(mpq_class(1)) - LaurentPoly::qPower(1));
    CHECK_THROWS_AS(pole.evalF(mpq_class(1)), DomainError);  // q0 must be in (0,1)
    CHECK_THROWS_AS(pole.evalQ(mpq_class(1)), PoleError);
}

TEST_CASE("evaluation is compatible with arithmetic to a few ulps") {
    std::mt19937_64 rng(11);
    mpq_class q0(2, 5);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        RatFunc a = randomRatFunc(rng), b = randomRatFunc(rng);
        double fa, fb;
        try {
            fa = a.evalF(q0);
            fb = b.evalF(q0);
        } catch (const PoleError&) {
            continue;
        }
        struct Op {
            RatFunc exact;
            double approx;
        };
        std::vector<Op> ops = {{a + b, fa + fb}, {a - b, fa - fb}, {a * b, fa * fb}};
        if (!b.isZero()) {
            try {
                ops.push_back({a / b, fa / fb});
            } catch (const DivisionByZero&) {
            }
        }
        for (const auto& op : ops) {
            double ex;
            try {
                ex = op.exact.evalF(q0);
            } catch (const PoleError&) {
                continue;
            }
            // 4 ulps at the working scale of the operands and the result
            double scale = std::abs(fa) + std::abs(fb) + std::abs(ex);
            CHECK(std::abs(ex - op.approx) <=
                  4 * std::numeric_limits<double>::epsilon() * scale + 1e-300);
            ++checked;
        }
    }
    CHECK(checked > 300);
}

TEST_CASE("printing round-trips basic forms") {
    CHECK(RatFunc(0L).str() == "0");
    CHECK(RatFunc::qint(2).str() == "q^-1 + q");
    CHECK((RatFunc(1L) - RatFunc::q(1)).str() == "1 - q");
    CHECK(RatFunc::q(-2).str() == "q^-2");
    CHECK(RatFunc(mpq_class(3, 2)).str() == "3/2");
}

TEST_CASE("square roots in the field") {
    RatFunc s = RatFunc::q(2);
    auto r = s.trySqrt();
    REQUIRE(r.has_value());
    CHECK(*r == RatFunc::q(1));
    RatFunc notSquare = RatFunc(1L) + RatFunc::q(1);
    CHECK_FALSE(notSquare.trySqrt().has_value());
    RatFunc sq = notSquare * notSquare;
    auto r2 = sq.trySqrt();
    REQUIRE(r2.has_value());
    CHECK(*r2 == notSquare);
}
