#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "qsphere/cohomology.hpp"
#include "qsphere/spectral.hpp"

namespace qsphere {

/// int_{Delta_1} e^(-(t x + (1-t) y)) dt, the first divided difference of e^(-u),
/// evaluated stably via sinh.
inline double simplex1Kernel(double x, double y) {
    double m = 0.5 * (x + y), d = 0.5 * (x - y);
    double s;
    if (std::abs(d) < 1e-5) {
        double d2 = d * d;
        s = 1.0 + d2 / 6.0 + d2 * d2 / 120.0;  // sinh(d)/d
    } else {
        s = std::sinh(d) / d;
    }
    return std::exp(-m) * s;
}

/// int_{Delta_2} e^(-(t0 x + t1 y + t2 z)) dt, the second divided difference of
/// e^(-u). Symmetric; the outer division runs over the extreme pair, with a
/// series around the mean when all three arguments cluster.
inline double simplex2Kernel(double x, double y, double z) {
    double lo = std::min({x, y, z}), hi = std::max({x, y, z});
    double mid = x + y + z - lo - hi;
    double spread = hi - lo;
    if (spread < 1e-5 * (1.0 + std::abs(lo))) {
        double m = (x + y + z) / 3.0;
        double a = x - m, b = y - m, c = z - m;
        // e^(-m) sum_k (-1)^k h_k(a,b,c) / (k+2)!  with h_k complete homogeneous; h1 = 0
        double h2 = a * a + b * b + c * c + a * b + a * c + b * c;
        double h3 = a * a * a + b * b * b + c * c * c + a * a * b + a * a * c + b * b * a +
                    b * b * c + c * c * a + c * c * b + a * b * c;
        return std::exp(-m) * (0.5 + h2 / 24.0 - h3 / 120.0);
    }
    return (simplex1Kernel(mid, hi) - simplex1Kernel(lo, mid)) / (lo - hi);
}

namespace jlodetail {

using QMat = std::vector<std::vector<mpq_class>>;

inline QMat zeros(int r, int c) {
    return QMat(static_cast<std::size_t>(r), std::vector<mpq_class>(static_cast<std::size_t>(c)));
}

} // namespace jlodetail

/// Degree-truncated model of the spinor space: the monomial filtration F_d of
/// L^2(A_1) + L^2(A_-1) with its exact Gram geometry, the (exactly compressed)
/// Dirac operator, the modular weight rho = q^(-rw), and the chirality signs.
///
/// Only multiplication operators are truncated: the filtration is invariant
/// under the enveloping-algebra action, so D, rho and the grading are exact on
/// F_d and all truncation error sits in the b-factors.
///
/// The monomial Gram matrices are moment matrices and turn numerically singular
/// well before d = 12, so the orthonormalization is done exactly: a rational
/// LDL^T factorization per right-weight block (entries of the Gram at rational
/// q0 are rational), with operator coefficients split exactly into even and odd
/// parts of q^(1/2). Floating point enters only in the final scaling by the
/// pivot square roots, where the matrices are already well conditioned.
class SpectralModel {
public:
    struct Side {
        int lw = 1;
        std::vector<NCMonomial> basis;
        std::vector<int> rw;                       // right weight per basis vector
        std::vector<std::pair<int, int>> blocks;   // [lo,hi) ranges of constant rw
        jlodetail::QMat unitL;                     // exact unit lower-triangular factor
        std::vector<mpq_class> pivot;              // exact positive LDL pivots
        std::vector<double> sqrtPivot;
        Eigen::VectorXd rho;                       // q0^(-rw) per basis vector
        Eigen::VectorXd eigval;                    // eigenvalues of the compressed D^2
        Eigen::MatrixXd eigvec;                    // orthonormal -> eigen transform
        Eigen::VectorXd rhoEig;                    // rho in the eigenbasis (constant per block)
        int dim() const { return static_cast<int>(basis.size()); }
    };

    SpectralModel(const mpq_class& q0, int cutoff) : q0_(q0), cutoff_(cutoff), heat_(q0) {
        if (cutoff < 2) throw DomainError("cutoff must be at least 2");
        if (!(q0 > 0 && q0 < 1)) throw DomainError("q0 must lie in (0,1)");
        qd_ = detail::mpqToDouble(q0);
        sqrtQ_ = std::sqrt(qd_);
        buildSide(plus_, +1);
        buildSide(minus_, -1);
        if (plus_.dim() != minus_.dim())
            throw DomainError("chirality sides have mismatched dimensions");
        assemble();
    }

    const mpq_class& q0() const { return q0_; }
    double q0d() const { return qd_; }
    int cutoff() const { return cutoff_; }
    const Side& plusSide() const { return plus_; }
    const Side& minusSide() const { return minus_; }
    const HeatTrace& heat() const { return heat_; }
    double casimirDefect() const { return casimirDefect_; }

    /// psi^eps_0(b) = Tr(gamma b e^(-eps D^2) rho); zero up to roundoff by the
    /// exact cancellation of the two chirality blocks.
    double psi0(double eps, const NCElement& b) const {
        requireSphere(b, "psi0");
        Eigen::MatrixXd bp = multiplicationEig(b, plus_, plus_);
        Eigen::MatrixXd bm = multiplicationEig(b, minus_, minus_);
        double acc = 0.0;
        for (int i = 0; i < plus_.dim(); ++i)
            acc += bp(i, i) * std::exp(-eps * plus_.eigval(i)) * plus_.rhoEig(i);
        for (int i = 0; i < minus_.dim(); ++i)
            acc -= bm(i, i) * std::exp(-eps * minus_.eigval(i)) * minus_.rhoEig(i);
        return acc;
    }

    /// The chirality-free scale Tr(e^(-eps D^2) rho) of the truncated model.
    double chiralityFreeTrace(double eps) const {
        double acc = 0.0;
        for (int i = 0; i < plus_.dim(); ++i)
            acc += std::exp(-eps * plus_.eigval(i)) * plus_.rhoEig(i);
        for (int i = 0; i < minus_.dim(); ++i)
            acc += std::exp(-eps * minus_.eigval(i)) * minus_.rhoEig(i);
        return acc;
    }

    /// psi^eps_2(b0,b1,b2): the JLO 2-cochain of eps^(1/2) D at the modular
    /// element, by eigendecomposition and the closed-form simplex kernel over
    /// eigenvalue triples.
    double psi2(double eps, const NCElement& b0, const NCElement& b1,
                const NCElement& b2) const {
        requireSphere(b0, "psi2");
        requireSphere(b1, "psi2");
        requireSphere(b2, "psi2");
        // plus path: b0+, q^(1/2) M_{de b1} (- -> +), q^(-1/2) M_{df b2} (+ -> -)
        Eigen::MatrixXd b0p = multiplicationEig(b0, plus_, plus_);
        Eigen::MatrixXd a1 = sqrtQ_ * multiplicationEig(dE(b1), plus_, minus_);
        Eigen::MatrixXd a2 = (1.0 / sqrtQ_) * multiplicationEig(dF(b2), minus_, plus_);
        double sPlus = pathSum(b0p, a1, a2, plus_, minus_, eps);
        // minus path
        Eigen::MatrixXd b0m = multiplicationEig(b0, minus_, minus_);
        Eigen::MatrixXd c1 = (1.0 / sqrtQ_) * multiplicationEig(dF(b1), minus_, plus_);
        Eigen::MatrixXd c2 = sqrtQ_ * multiplicationEig(dE(b2), plus_, minus_);
        double sMinus = pathSum(b0m, c1, c2, minus_, plus_, eps);
        return eps * (sPlus - sMinus);
    }

    /// Compressed multiplication by a, in the eigenbasis of D^2.
    Eigen::MatrixXd multiplicationEig(const NCElement& a, const Side& out, const Side& in) const {
        Eigen::MatrixXd M = orthoTransform(elementMatrix(a, out, in, true), out, in);
        return out.eigvec.transpose() * M * in.eigvec;
    }

    /// Raw coefficient matrix of compressed left multiplication in monomial
    /// coordinates (for consistency tests; the model itself transforms exactly).
    Eigen::MatrixXd multiplicationMono(const NCElement& a, const Side& out, const Side& in) const {
        auto [A0, A1] = elementMatrix(a, out, in, true);
        Eigen::MatrixXd M(out.dim(), in.dim());
        for (int i = 0; i < out.dim(); ++i)
            for (int j = 0; j < in.dim(); ++j)
                M(i, j) = detail::mpqToDouble(A0[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) +
                          sqrtQ_ * detail::mpqToDouble(A1[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        return M;
    }

private:
    static bool basisLess(const NCMonomial& a, const NCMonomial& b) {
        return std::tuple(a.rightWeight(), a.k, a.m, a.n) <
               std::tuple(b.rightWeight(), b.k, b.m, b.n);
    }

    void requireSphere(const NCElement& b, const char* who) const {
        if (!b.isGradeZero())
            throw GradeError(std::string(who) + ": argument not in the degree-zero subalgebra");
    }

    void buildSide(Side& s, int lw) {
        s.lw = lw;
        for (int m = 0; m <= cutoff_; ++m)
            for (int n = 0; m + n <= cutoff_; ++n) {
                NCMonomial mo{lw - m + n, m, n};
                if (mo.degree() <= cutoff_) s.basis.push_back(mo);
            }
        std::sort(s.basis.begin(), s.basis.end(), basisLess);
        int d = s.dim();
        s.rw.resize(static_cast<std::size_t>(d));
        s.rho.resize(d);
        for (int i = 0; i < d; ++i) {
            s.rw[static_cast<std::size_t>(i)] = s.basis[static_cast<std::size_t>(i)].rightWeight();
            s.rho(i) = RatFunc::q(-s.rw[static_cast<std::size_t>(i)]).evalF(q0_);
        }
        int lo = 0;
        while (lo < d) {
            int hi = lo;
            while (hi < d && s.rw[static_cast<std::size_t>(hi)] == s.rw[static_cast<std::size_t>(lo)])
                ++hi;
            s.blocks.emplace_back(lo, hi);
            lo = hi;
        }
        // exact Gram per block, then exact LDL^T
        s.unitL = jlodetail::zeros(d, d);
        s.pivot.assign(static_cast<std::size_t>(d), mpq_class(0));
        for (auto [blo, bhi] : s.blocks) {
            jlodetail::QMat G = jlodetail::zeros(bhi - blo, bhi - blo);
            for (int i = blo; i < bhi; ++i)
                for (int j = blo; j <= i; ++j) {
                    RatFunc v = inner(NCElement::monomial(s.basis[static_cast<std::size_t>(i)]),
                                      NCElement::monomial(s.basis[static_cast<std::size_t>(j)]));
                    auto [even, odd] = v.evalSplitQ(q0_);
                    if (odd != 0) throw DomainError("Gram entry has a half-power part");
                    G[static_cast<std::size_t>(i - blo)][static_cast<std::size_t>(j - blo)] = even;
                    G[static_cast<std::size_t>(j - blo)][static_cast<std::size_t>(i - blo)] = even;
                }
            for (int i = 0; i < bhi - blo; ++i) {
                mpq_class diag = G[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
                for (int k = 0; k < i; ++k) {
                    const mpq_class& lik =
                        s.unitL[static_cast<std::size_t>(blo + i)][static_cast<std::size_t>(blo + k)];
                    diag -= lik * lik * s.pivot[static_cast<std::size_t>(blo + k)];
                }
                if (diag <= 0)
                    throw DomainError("Gram matrix is not positive definite (exact pivot)");
                s.pivot[static_cast<std::size_t>(blo + i)] = diag;
                s.unitL[static_cast<std::size_t>(blo + i)][static_cast<std::size_t>(blo + i)] = 1;
                for (int j = i + 1; j < bhi - blo; ++j) {
                    mpq_class acc = G[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
                    for (int k = 0; k < i; ++k)
                        acc -= s.unitL[static_cast<std::size_t>(blo + j)][static_cast<std::size_t>(blo + k)] *
                               s.unitL[static_cast<std::size_t>(blo + i)][static_cast<std::size_t>(blo + k)] *
                               s.pivot[static_cast<std::size_t>(blo + k)];
                    s.unitL[static_cast<std::size_t>(blo + j)][static_cast<std::size_t>(blo + i)] =
                        acc / diag;
                }
            }
        }
        s.sqrtPivot.resize(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i)
            s.sqrtPivot[static_cast<std::size_t>(i)] =
                std::sqrt(detail::mpqToDouble(s.pivot[static_cast<std::size_t>(i)]));
    }

    /// Exact even/odd coefficient matrices of (left multiplication by a) or of a
    /// generic image map, restricted to the bases.
    std::pair<jlodetail::QMat, jlodetail::QMat> elementMatrix(const NCElement& a, const Side& out,
                                                              const Side& in,
                                                              bool allowTruncation) const {
        auto imageOf = [&](const NCMonomial& mo) { return a * NCElement::monomial(mo); };
        return imageMatrix(imageOf, out, in, allowTruncation);
    }

    template <class ImageFn>
    std::pair<jlodetail::QMat, jlodetail::QMat> imageMatrix(ImageFn imageOf, const Side& out,
                                                            const Side& in,
                                                            bool allowTruncation) const {
        jlodetail::QMat A0 = jlodetail::zeros(out.dim(), in.dim());
        jlodetail::QMat A1 = jlodetail::zeros(out.dim(), in.dim());
        for (int j = 0; j < in.dim(); ++j) {
            NCElement img = imageOf(in.basis[static_cast<std::size_t>(j)]);
            for (const auto& [mo, c] : img.terms()) {
                auto it = std::lower_bound(out.basis.begin(), out.basis.end(), mo, basisLess);
                if (it != out.basis.end() && *it == mo) {
                    auto [even, odd] = c.evalSplitQ(q0_);
                    auto i = static_cast<std::size_t>(it - out.basis.begin());
                    A0[i][static_cast<std::size_t>(j)] = even;
                    A1[i][static_cast<std::size_t>(j)] = odd;
                } else if (!allowTruncation || mo.degree() <= cutoff_) {
                    throw DomainError("image misses an in-cutoff basis monomial");
                }
            }
        }
        return {A0, A1};
    }

    /// D_out^(1/2) L_out^T (A0 + sqrt(q0) A1) L_in^(-T) D_in^(-1/2), with the two
    /// triangular stages exact and only the final scaling in floating point.
    Eigen::MatrixXd orthoTransform(std::pair<jlodetail::QMat, jlodetail::QMat> A,
                                   const Side& out, const Side& in) const {
        for (jlodetail::QMat* part : {&A.first, &A.second}) {
            leftMulUnitLt(*part, out);
            rightSolveUnitUt(*part, in);
        }
        Eigen::MatrixXd R(out.dim(), in.dim());
        for (int i = 0; i < out.dim(); ++i)
            for (int j = 0; j < in.dim(); ++j) {
                double v =
                    detail::mpqToDouble(A.first[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) +
                    sqrtQ_ *
                        detail::mpqToDouble(A.second[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
                R(i, j) = v * out.sqrtPivot[static_cast<std::size_t>(i)] /
                          in.sqrtPivot[static_cast<std::size_t>(j)];
            }
        return R;
    }

    /// T <- L^T T with the side's exact unit lower factor (block lower triangular).
    void leftMulUnitLt(jlodetail::QMat& T, const Side& side) const {
        int cols = T.empty() ? 0 : static_cast<int>(T[0].size());
        for (auto [blo, bhi] : side.blocks)
            for (int i = blo; i < bhi; ++i)
                for (int k = i + 1; k < bhi; ++k) {
                    const mpq_class& lki =
                        side.unitL[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
                    if (lki == 0) continue;
                    for (int j = 0; j < cols; ++j)
                        T[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
                            lki * T[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
                }
    }

    /// T <- T (L^T)^(-1) with the side's exact unit factor: back-substitution in
    /// the unit upper-triangular L^T, column by column within each block.
    void rightSolveUnitUt(jlodetail::QMat& T, const Side& side) const {
        int rows = static_cast<int>(T.size());
        for (auto [blo, bhi] : side.blocks)
            for (int j = blo; j < bhi; ++j)
                for (int k = blo; k < j; ++k) {
                    const mpq_class& ljk =
                        side.unitL[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
                    if (ljk == 0) continue;
                    for (int i = 0; i < rows; ++i)
                        T[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
                            T[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] * ljk;
                }
    }

    void assemble() {
        auto de = [](const NCMonomial& mo) { return dE(NCElement::monomial(mo)); };
        auto df = [](const NCMonomial& mo) { return dF(NCElement::monomial(mo)); };
        Eigen::MatrixXd Ae = orthoTransform(imageMatrix(de, plus_, minus_, false), plus_, minus_);
        Eigen::MatrixXd Af = orthoTransform(imageMatrix(df, minus_, plus_, false), minus_, plus_);
        double adjErr = (Af - Ae.transpose()).cwiseAbs().maxCoeff();
        if (adjErr > 1e-9) throw DomainError("Dirac blocks are not mutually adjoint");
        Eigen::MatrixXd Cp = 0.5 * ((Ae * Af) + (Ae * Af).transpose());
        Eigen::MatrixXd Cm = 0.5 * ((Af * Ae) + (Af * Ae).transpose());
        // Prop 3.1(i): D^2 equals the Casimir. Independent route: the compressed
        // matrix of d_f d_e (through the weight +-3 spaces, exact elementwise)
        // plus the scalar part of the k-term: 1 on A_1, 0 on A_-1.
        auto fe = [](const NCMonomial& mo) { return dF(dE(NCElement::monomial(mo))); };
        Eigen::MatrixXd casP = orthoTransform(imageMatrix(fe, plus_, plus_, false), plus_, plus_) +
                               Eigen::MatrixXd::Identity(plus_.dim(), plus_.dim());
        Eigen::MatrixXd casM = orthoTransform(imageMatrix(fe, minus_, minus_, false), minus_, minus_);
        casimirDefect_ = std::max((Cp - casP).cwiseAbs().maxCoeff(),
                                  (Cm - casM).cwiseAbs().maxCoeff());
        if (casimirDefect_ > 1e-10)
            throw DomainError("compressed D^2 deviates from the Casimir");
        eigensolve(plus_, Cp);
        eigensolve(minus_, Cm);
    }

    /// Per-weight-block symmetric eigensolve; rho is scalar on each block, so it
    /// stays diagonal in the eigenbasis.
    void eigensolve(Side& s, const Eigen::MatrixXd& C) {
        int d = s.dim();
        s.eigval.resize(d);
        s.rhoEig.resize(d);
        s.eigvec = Eigen::MatrixXd::Zero(d, d);
        for (auto [lo, hi] : s.blocks) {
            int n = hi - lo;
            double offBlock = 0.0;
            if (lo > 0) offBlock = std::max(offBlock, C.block(lo, 0, n, lo).cwiseAbs().maxCoeff());
            if (hi < d)
                offBlock = std::max(offBlock, C.block(lo, hi, n, d - hi).cwiseAbs().maxCoeff());
            if (offBlock > 1e-9)
                throw DomainError("Casimir does not respect the right-weight blocks");
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C.block(lo, lo, n, n));
            if (es.info() != Eigen::Success) throw DomainError("eigendecomposition failed");
            s.eigval.segment(lo, n) = es.eigenvalues();
            s.eigvec.block(lo, lo, n, n) = es.eigenvectors();
            for (int i = lo; i < hi; ++i) s.rhoEig(i) = s.rho(lo);
        }
    }

    double pathSum(const Eigen::MatrixXd& b0, const Eigen::MatrixXd& a1,
                   const Eigen::MatrixXd& a2, const Side& home, const Side& other,
                   double eps) const {
        // sum_{i,p in home, m in other} rho_i b0_{ip} a1_{pm} a2_{mi} K(eps l_p, eps l_m, eps l_i)
        double acc = 0.0;
        for (int i = 0; i < home.dim(); ++i) {
            double w = home.rhoEig(i);
            for (int p = 0; p < home.dim(); ++p) {
                double bip = b0(i, p);
                if (bip == 0.0) continue;
                for (int m = 0; m < other.dim(); ++m) {
                    double prod = a1(p, m) * a2(m, i);
                    if (prod == 0.0) continue;
                    acc += w * bip * prod *
                           simplex2Kernel(eps * home.eigval(p), eps * other.eigval(m),
                                          eps * home.eigval(i));
                }
            }
        }
        return acc;
    }

    mpq_class q0_;
    int cutoff_;
    double qd_ = 0.0, sqrtQ_ = 0.0;
    HeatTrace heat_;
    Side plus_, minus_;
    double casimirDefect_ = 0.0;
};

/// Right-hand side of the heat-coefficient expansion:
///   (q/(1-q^2)) (tau1+tau2)(b) - (q^2 tau1 + tau2)(b) eps/(1-q^2)^2 J(eps),
/// J(eps) = int_{q^2}^1 Tr(e^(-eps t C) rho) t dt.
inline double theorem41Prediction(const SpectralModel& model, double eps, const NCElement& b0,
                                  const NCElement& b1, const NCElement& b2) {
    std::vector<NCElement> args{b0, b1, b2};
    RatFunc t1 = tau1Cochain().eval(args), t2 = tau2Cochain().eval(args);
    double sumT = (t1 + t2).evalF(model.q0());
    double twistT = (RatFunc::q(2) * t1 + t2).evalF(model.q0());
    double q = model.q0d();
    double denom = 1.0 - q * q;
    double J = model.heat().weightedIntegral(eps);
    return q / denom * sumT - twistT * eps / (denom * denom) * J;
}

inline double theorem41Residual(const SpectralModel& model, double eps, const NCElement& b0,
                                const NCElement& b1, const NCElement& b2) {
    return model.psi2(eps, b0, b1, b2) - theorem41Prediction(model, eps, b0, b1, b2);
}

struct JloRow {
    double epsilon = 0.0, psi2 = 0.0, prediction = 0.0, residual = 0.0;
};

inline std::vector<JloRow> residualScan(const SpectralModel& model,
                                        const std::vector<double>& epsList, const NCElement& b0,
                                        const NCElement& b1, const NCElement& b2) {
    std::vector<JloRow> rows;
    for (double eps : epsList) {
        JloRow r;
        r.epsilon = eps;
        r.psi2 = model.psi2(eps, b0, b1, b2);
        r.prediction = theorem41Prediction(model, eps, b0, b1, b2);
        r.residual = r.psi2 - r.prediction;
        rows.push_back(r);
    }
    return rows;
}

inline std::string jloCsv(const mpq_class& q0, int cutoff, const std::vector<JloRow>& rows) {
    std::string out = "q0,d,epsilon,psi2,prediction,residual\n";
    for (const auto& r : rows)
        out += q0.get_str() + "," + std::to_string(cutoff) + "," + fmt17(r.epsilon) + "," +
               fmt17(r.psi2) + "," + fmt17(r.prediction) + "," + fmt17(r.residual) + "\n";
    return out;
}

} // namespace qsphere
