#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qsphere/spectral.hpp"

using namespace qsphere;

namespace {

const mpq_class kHalf(1, 2);

/// Brute-force reference: fixed-length sum with exact rational weights.
double bruteTrace(const mpq_class& q0, double eps, int nMax) {
    long double acc = 0.0L;
    mpq_class mu = mpq_class(1) / q0 - q0;
    for (int n = 1; n <= nMax; ++n) {
        mpq_class p = LaurentPoly::qpow(q0, n);
        mpq_class w = (mpq_class(1) / (p * p) - p * p) / mu;
        mpq_class l = (mpq_class(1) / p - p) / mu;
        acc += static_cast<long double>(detail::mpqToDouble(w)) *
               std::exp(-static_cast<long double>(eps) *
                        static_cast<long double>(detail::mpqToDouble(l * l)));
    }
    return static_cast<double>(acc);
}

double adaptiveSimpson(const std::function<double(double)>& f, double a, double b, double fa,
                       double fb, double fm, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
    double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptiveSimpson(f, a, m, fa, fm, flm, tol / 2, depth - 1) +
           adaptiveSimpson(f, m, b, fm, fb, frm, tol / 2, depth - 1);
}

} // namespace

TEST_CASE("heat trace basics") {
    HeatTrace ht(kHalf);
    CHECK(ht.trace(1e3) < 1e-12);
    CHECK(ht.trace(0.25) > ht.trace(0.5));
    CHECK(ht.trace(0.5) > ht.trace(1.0));
    CHECK_THROWS_AS(ht.trace(0.0), DomainError);
    CHECK_THROWS_AS(ht.trace(-1.0), DomainError);
    CHECK_THROWS_AS(HeatTrace(mpq_class(2)), DomainError);
}

TEST_CASE("heat trace against the brute-force oracle") {
    HeatTrace ht(kHalf);
    for (double eps : {1.0, 0.1, 1e-3, 1e-6}) {
        double ref = bruteTrace(kHalf, eps, 200);
        double got = ht.trace(eps);
        CHECK(std::abs(got - ref) <= 1e-14 * std::abs(ref));
    }
    // tail-bound stability: a longer fixed truncation changes nothing above 1e-15 relative
    for (double eps : {1.0, 1e-4}) {
        double a = bruteTrace(kHalf, eps, 200), b = bruteTrace(kHalf, eps, 400);
        CHECK(std::abs(a - b) <= 1e-15 * std::abs(a));
    }
}

TEST_CASE("term-wise integral matches adaptive quadrature") {
    HeatTrace ht(kHalf);
    for (double eps : {0.5, 1e-2, 1e-4}) {
        auto f = [&](double t) { return ht.trace(eps * t); };
        double a = 0.25, b = 1.0;
        double quad =
            eps * adaptiveSimpson(f, a, b, f(a), f(b), f(0.5 * (a + b)), 1e-13 / eps, 48);
        double exact = ht.scaledIntegral(eps);
        CHECK(std::abs(quad - exact) <= 1e-10 * std::abs(exact) + 1e-12);
    }
}

TEST_CASE("lemma 3.4 columns at q0 = 1/2") {
    HeatTrace ht(kHalf);
    auto rows = lemma34Scan(ht, 4, 16);
    // (iii): eps int_{q^2}^1 Tr dt -> mu = q^-1 - q = 1.5, residual shrinking
    double prev = 1e9;
    for (const auto& r : rows) {
        if (r.m < 8 || r.m > 14) continue;
        double resid = std::abs(r.integralIII - 1.5);
        CHECK(resid < prev);
        prev = resid;
    }
    CHECK(prev < 1e-2);
    // (ii): the scaled difference tends to zero
    CHECK(std::abs(rows.back().diffII) < 1e-6);
    // (i): bounded eps-trace
    for (const auto& r : rows) {
        CHECK(std::isfinite(r.epsTrace));
        CHECK(r.epsTrace > 0.0);
        CHECK(r.epsTrace < 10.0);
    }
}

TEST_CASE("oscillation: scaling-grid reindexing identity") {
    HeatTrace ht(kHalf);
    // value at (c, m+1) equals value at (c*q0^2, m) exactly by grid construction
    double v1 = 0.5 * std::pow(0.5, 2.0 * 7) * ht.trace(0.5 * std::pow(0.5, 2.0 * 7));
    double v2 = (0.5 * 0.25) * std::pow(0.5, 2.0 * 6) *
                ht.trace((0.5 * 0.25) * std::pow(0.5, 2.0 * 6));
    CHECK(v1 == v2);
}

TEST_CASE("oscillation: distinct log-periodic limits") {
    HeatTrace ht(kHalf);
    auto rows = oscillationScan(ht, {1.0, 0.5}, 4, 21);
    // per-c Cauchy residuals decrease and the c-limits differ by much more
    double limit1 = 0, limitHalf = 0, resid = 0;
    std::map<double, std::vector<double>> byC;
    for (const auto& r : rows) byC[r.c].push_back(r.epsTrace);
    for (auto& [c, vs] : byC) {
        for (std::size_t i = vs.size() - 4; i + 1 < vs.size(); ++i)
            CHECK(std::abs(vs[i + 1] - vs[i]) <= std::abs(vs[i] - vs[i - 1]));
        resid = std::max(resid, std::abs(vs[vs.size() - 1] - vs[vs.size() - 2]));
        (c == 1.0 ? limit1 : limitHalf) = vs.back();
    }
    INFO("limit(c=1) = " << fmt17(limit1) << ", limit(c=1/2) = " << fmt17(limitHalf)
                         << ", cauchy residual = " << fmt17(resid));
    CHECK(resid < 1e-10);
    CHECK(std::abs(limit1 - limitHalf) > 1e3 * resid);
    CHECK_THROWS_AS(oscillationScan(ht, {0.2}, 4, 6), DomainError);  // c <= q0^2
}

TEST_CASE("csv emission") {
    HeatTrace ht(kHalf);
    auto rows = lemma34Scan(ht, 4, 6);
    std::string csv = heatCsv(kHalf, rows);
    CHECK(csv.rfind("q0,c,m,epsilon,eps_trace,diff_ii,integral_iii\n", 0) == 0);
    CHECK(csv.find("1/2,1,4,") != std::string::npos);
    // deterministic
    CHECK(csv == heatCsv(kHalf, lemma34Scan(ht, 4, 6)));
}
