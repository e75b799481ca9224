#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qsphere/jlo.hpp"

using namespace qsphere;

namespace {

const mpq_class kHalf(1, 2);
const NCElement One = NCElement::one();
const NCElement X = NCElement::gammaStar() * NCElement::gamma();

int weightSpaceCount(int lw, int d) {
    int count = 0;
    for (int m = 0; m <= d; ++m)
        for (int n = 0; m + n <= d; ++n) {
            NCMonomial mo{lw - m + n, m, n};
            if (mo.degree() <= d) ++count;
        }
    return count;
}

double simplex2Quadrature(double x, double y, double z) {
    // phi2(x,y,z) = int_0^1 e^(-t x) (1-t) K1((1-t) y, (1-t) z) dt, Simpson
    auto f = [&](double t) {
        double L = 1.0 - t;
        return std::exp(-t * x) * L * simplex1Kernel(L * y, L * z);
    };
    int n = 4000;
    double h = 1.0 / n, acc = f(0.0) + f(1.0);
    for (int i = 1; i < n; ++i) acc += f(i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

} // namespace

TEST_CASE("simplex kernels") {
    CHECK(simplex1Kernel(0.7, 0.7) == Catch::Approx(std::exp(-0.7)).epsilon(1e-14));
    CHECK(simplex2Kernel(1.3, 1.3, 1.3) == Catch::Approx(std::exp(-1.3) / 2).epsilon(1e-13));
    // permutation symmetry
    double v = simplex2Kernel(0.3, 2.0, 5.5);
    CHECK(simplex2Kernel(5.5, 0.3, 2.0) == v);
    CHECK(simplex2Kernel(2.0, 5.5, 0.3) == v);
    // against quadrature, including near-degenerate triples
    for (auto [x, y, z] : std::vector<std::array<double, 3>>{{0.1, 0.2, 0.3},
                                                             {1.0, 1.0 + 1e-7, 1.0 - 1e-7},
                                                             {4.0, 0.01, 2.0},
                                                             {10.0, 10.0, 0.5},
                                                             {25.0, 24.99999, 25.00001}}) {
        double exact = simplex2Kernel(x, y, z);
        double quad = simplex2Quadrature(x, y, z);
        CHECK(exact == Catch::Approx(quad).epsilon(1e-9).margin(1e-12));
    }
}

TEST_CASE("model construction invariants") {
    SpectralModel model(kHalf, 8);
    CHECK(model.casimirDefect() < 1e-10);
    CHECK(model.plusSide().dim() == model.minusSide().dim());
    CHECK(model.plusSide().dim() == weightSpaceCount(1, 8));

    // spectrum: lowest eigenvalue is [1]^2 = 1; all eigenvalues are q-integers squared
    auto checkSpectrum = [&](const SpectralModel::Side& s) {
        CHECK(s.eigval.minCoeff() == Catch::Approx(1.0).margin(1e-8));
        for (int i = 0; i < s.dim(); ++i) {
            bool matched = false;
            for (int n = 1; n <= 16 && !matched; ++n) {
                double qn = RatFunc::qint(n).evalF(kHalf);
                if (std::abs(s.eigval(i) - qn * qn) < 1e-8) matched = true;
            }
            CHECK(matched);
        }
    };
    checkSpectrum(model.plusSide());
    checkSpectrum(model.minusSide());
    CHECK_THROWS_AS(SpectralModel(kHalf, 1), DomainError);
}

TEST_CASE("trace is basis independent (monomial vs orthonormalized route)") {
    SpectralModel model(kHalf, 8);
    const auto& s = model.plusSide();
    // trace of (compressed mult by x) composed with the Casimir, two ways:
    // matrices in the raw monomial coordinates vs the eigenbasis
    Eigen::MatrixXd bMono = model.multiplicationMono(X, s, s);
    int d = s.dim();
    Eigen::MatrixXd casMono = Eigen::MatrixXd::Identity(d, d);
    for (int j = 0; j < d; ++j) {
        NCElement img = dF(dE(NCElement::monomial(s.basis[static_cast<std::size_t>(j)])));
        for (const auto& [mo, c] : img.terms())
            for (int i = 0; i < d; ++i)
                if (s.basis[static_cast<std::size_t>(i)] == mo) casMono(i, j) += c.evalF(kHalf);
    }
    double trMono = (bMono * casMono).trace();
    Eigen::MatrixXd bEig = model.multiplicationEig(X, s, s);
    double trEig = (bEig * s.eigval.asDiagonal()).trace();
    CHECK(trEig == Catch::Approx(trMono).epsilon(1e-12));
}

TEST_CASE("psi0 vanishes by chirality cancellation") {
    SpectralModel model(kHalf, 8);
    double scale = model.chiralityFreeTrace(1.0);
    CHECK(scale > 0.1);
    CHECK(std::abs(model.psi0(1.0, One)) <= 1e-9 * scale);
    CHECK(std::abs(model.psi0(0.3, X)) <= 1e-9 * model.chiralityFreeTrace(0.3));
    for (int m = 0; m <= 2; ++m)
        for (int n = 0; n <= 2; ++n) {
            NCElement b = NCElement::monomial({n - m, m, n});
            CHECK(std::abs(model.psi0(0.5, b)) <= 1e-9 * model.chiralityFreeTrace(0.5));
        }
    CHECK_THROWS_AS(model.psi0(1.0, NCElement::alpha()), GradeError);
}

TEST_CASE("psi2 basics") {
    SpectralModel model(kHalf, 8);
    CHECK(model.psi2(0.25, X, One, X) == 0.0);  // [D,1] = 0
    CHECK(model.psi2(0.25, One, X, One) == 0.0);
    CHECK(model.psi2(0.25, One, X, X) != 0.0);
    CHECK_THROWS_AS(model.psi2(0.25, NCElement::gamma(), X, X), GradeError);
}

TEST_CASE("psi2 stabilizes under refinement") {
    double eps = 1.0 / 64;
    SpectralModel m6(kHalf, 6), m8(kHalf, 8), m10(kHalf, 10);
    double p6 = m6.psi2(eps, One, X, X);
    double p8 = m8.psi2(eps, One, X, X);
    double p10 = m10.psi2(eps, One, X, X);
    CHECK(std::abs(p10 - p8) < std::abs(p8 - p6));
}

TEST_CASE("heat-coefficient expansion matches at moderate epsilon") {
    SpectralModel model(kHalf, 10);
    double r2 = std::abs(theorem41Residual(model, std::pow(2.0, -2), One, X, X));
    double r6 = std::abs(theorem41Residual(model, std::pow(2.0, -6), One, X, X));
    CHECK(r6 < r2);
    // dropping the integral term breaks the fit: the prediction without it is
    // further from psi2 than the full prediction at small epsilon
    double eps = std::pow(2.0, -8);
    double psi = model.psi2(eps, One, X, X);
    double full = theorem41Prediction(model, eps, One, X, X);
    RatFunc t1 = tau1Cochain().eval({One, X, X}), t2 = tau2Cochain().eval({One, X, X});
    double constOnly = model.q0d() / (1 - model.q0d() * model.q0d()) * (t1 + t2).evalF(kHalf);
    CHECK(std::abs(psi - full) < std::abs(psi - constOnly));
}

TEST_CASE("jlo csv schema and determinism") {
    SpectralModel model(kHalf, 6);
    auto rows = residualScan(model, {0.25, 0.0625}, One, X, X);
    std::string csv = jloCsv(kHalf, 6, rows);
    CHECK(csv.rfind("q0,d,epsilon,psi2,prediction,residual\n", 0) == 0);
    CHECK(csv == jloCsv(kHalf, 6, residualScan(model, {0.25, 0.0625}, One, X, X)));
}
