#pragma once

#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <vector>

#include "qsphere/calculus.hpp"
#include "qsphere/exprparse.hpp"

namespace qsphere {

/// Multilinear functional on (degree+1)-tuples of sphere elements. `twisted`
/// marks membership in the sigma-twisted complex; the coboundary, cyclic
/// permutation and pairing weights all read it. Evaluation closures must be
/// pure; cochains are freely copied and shared.
struct Cochain {
    int degree = 0;
    bool twisted = true;
    std::function<RatFunc(const std::vector<NCElement>&)> eval;

    RatFunc operator()(const std::vector<NCElement>& args) const {
        if (static_cast<int>(args.size()) != degree + 1)
            throw DomainError("cochain of degree " + std::to_string(degree) + " applied to " +
                              std::to_string(args.size()) + " arguments");
        return eval(args);
    }
};

namespace cochaindetail {
inline NCElement twistArg(const Cochain& f, const NCElement& b) {
    return f.twisted ? sigma(b) : b;
}
inline void requireGradeZero(const NCElement& b, const char* who) {
    if (!b.isGradeZero()) throw GradeError(std::string(who) + ": argument not in the degree-zero subalgebra");
}
} // namespace cochaindetail

/// Twisted Hochschild coboundary; raises degree by one. The last face multiplies
/// sigma(b_last) onto the front in the twisted complex.
inline Cochain coboundary(const Cochain& f) {
    Cochain out;
    out.degree = f.degree + 1;
    out.twisted = f.twisted;
    out.eval = [f](const std::vector<NCElement>& b) {
        int n = static_cast<int>(b.size()) - 1;  // = f.degree + 1
        RatFunc acc(0L);
        std::vector<NCElement> inner(b.size() - 1);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < i; ++j) inner[static_cast<std::size_t>(j)] = b[static_cast<std::size_t>(j)];
            inner[static_cast<std::size_t>(i)] =
                b[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i) + 1];
            for (std::size_t j = static_cast<std::size_t>(i) + 2; j < b.size(); ++j) inner[j - 1] = b[j];
            RatFunc v = f.eval(inner);
            acc += (i % 2 == 0) ? v : -v;
        }
        inner[0] = cochaindetail::twistArg(f, b.back()) * b[0];
        for (std::size_t j = 1; j + 1 < b.size(); ++j) inner[j] = b[j];
        RatFunc last = f.eval(inner);
        acc += (n % 2 == 0) ? last : -last;
        return acc;
    };
    return out;
}

/// Twisted cyclic permutation (lambda f)(b0,...,bn) = (-1)^n f(sigma(bn), b0, ..., b_{n-1}).
inline Cochain cyclicPermute(const Cochain& f) {
    Cochain out = f;
    out.eval = [f](const std::vector<NCElement>& b) {
        std::vector<NCElement> rot(b.size());
        rot[0] = cochaindetail::twistArg(f, b.back());
        for (std::size_t j = 0; j + 1 < b.size(); ++j) rot[j + 1] = b[j];
        RatFunc v = f.eval(rot);
        return (f.degree % 2 == 0) ? v : -v;
    };
    return out;
}

/// (B0 f)(b0,...,bn) = f(1, b0,...,bn) - (-1)^(n+1) f(b0,...,bn, 1); degree drops by one.
inline Cochain connesB0(const Cochain& f) {
    if (f.degree < 1) throw DomainError("B requires degree >= 1");
    Cochain out;
    out.degree = f.degree - 1;
    out.twisted = f.twisted;
    out.eval = [f](const std::vector<NCElement>& b) {
        std::vector<NCElement> ext(b.size() + 1);
        ext[0] = NCElement::one();
        for (std::size_t j = 0; j < b.size(); ++j) ext[j + 1] = b[j];
        RatFunc front = f.eval(ext);
        for (std::size_t j = 0; j < b.size(); ++j) ext[j] = b[j];
        ext[b.size()] = NCElement::one();
        RatFunc back = f.eval(ext);
        int n = static_cast<int>(b.size()) - 1;
        return (n % 2 == 0) ? front + back : front - back;  // front - (-1)^(n+1) back
    };
    return out;
}

/// Cyclic symmetrizer N = sum of lambda^i, i = 0..degree.
inline Cochain cyclicSymmetrize(const Cochain& f) {
    std::vector<Cochain> powers;
    powers.push_back(f);
    for (int i = 1; i <= f.degree; ++i) powers.push_back(cyclicPermute(powers.back()));
    Cochain out;
    out.degree = f.degree;
    out.twisted = f.twisted;
    out.eval = [powers](const std::vector<NCElement>& b) {
        RatFunc acc(0L);
        for (const auto& p : powers) acc += p.eval(b);
        return acc;
    };
    return out;
}

/// Connes boundary B = N B0; degree drops by one.
inline Cochain connesB(const Cochain& f) { return cyclicSymmetrize(connesB0(f)); }

inline Cochain zeroCochain(int degree, bool twisted) {
    return Cochain{degree, twisted, [](const std::vector<NCElement>&) { return RatFunc(0L); }};
}

inline Cochain addCochain(const Cochain& a, const Cochain& b) {
    if (a.degree != b.degree || a.twisted != b.twisted)
        throw DomainError("cochain sum: mismatched degree or twist");
    Cochain out = a;
    out.eval = [a, b](const std::vector<NCElement>& x) { return a.eval(x) + b.eval(x); };
    return out;
}

inline Cochain scaleCochain(const RatFunc& c, const Cochain& a) {
    Cochain out = a;
    out.eval = [c, a](const std::vector<NCElement>& x) { return c * a.eval(x); };
    return out;
}

// ---------------------------------------------------------------------------
// The concrete cocycles of the sphere.
// ---------------------------------------------------------------------------

/// Volume form tau(b0,b1,b2) = int b0 db1 ^ db2
///   = h(b0 (q^2 d_e(b1) d_f(b2) - d_f(b1) d_e(b2))).
/// The twisted cyclic 2-cocycle; its -1/q multiple computes the quantum index.
inline Cochain tauCochain() {
    return Cochain{2, true, [](const std::vector<NCElement>& b) {
                       for (const auto& x : b) cochaindetail::requireGradeZero(x, "tau");
                       const RatFunc q2 = RatFunc::q(2);
                       return haar(b[0] * (q2 * (dE(b[1]) * dF(b[2])) - dF(b[1]) * dE(b[2])));
                   }};
}

/// tau1(b0,b1,b2) = h(b0 d_e(b1) d_f(b2)).
inline Cochain tau1Cochain() {
    return Cochain{2, true, [](const std::vector<NCElement>& b) {
                       for (const auto& x : b) cochaindetail::requireGradeZero(x, "tau1");
                       return haar(b[0] * dE(b[1]) * dF(b[2]));
                   }};
}

/// tau2(b0,b1,b2) = h(b0 d_f(b1) d_e(b2)).
inline Cochain tau2Cochain() {
    return Cochain{2, true, [](const std::vector<NCElement>& b) {
                       for (const auto& x : b) cochaindetail::requireGradeZero(x, "tau2");
                       return haar(b[0] * dF(b[1]) * dE(b[2]));
                   }};
}

/// tauTilde(b0,b1) = h(d_f(b0) d_e(b1)); its coboundary is q^2 tau1 + tau2.
inline Cochain tauTildeCochain() {
    return Cochain{1, true, [](const std::vector<NCElement>& b) {
                       for (const auto& x : b) cochaindetail::requireGradeZero(x, "tauTilde");
                       return haar(dF(b[0]) * dE(b[1]));
                   }};
}

/// The trace tau' generating the untwisted HP^0 together with h:
/// tau'(a^(n-m) g^m g*^n) = 1/(1-q^(2n)) for n = m > 0, 0 otherwise.
/// It lives in the untwisted complex; its pairing at the counit gives the
/// classical index -n on the line bundles.
inline Cochain tauPrimeCochain() {
    return Cochain{0, false, [](const std::vector<NCElement>& b) {
                       cochaindetail::requireGradeZero(b[0], "tauPrime");
                       RatFunc acc(0L);
                       for (const auto& [mo, c] : b[0].terms()) {
                           if (mo.k != 0 || mo.m != mo.n || mo.m == 0) continue;
                           acc += c / (RatFunc(1L) - RatFunc::q(2 * mo.m));
                       }
                       return acc;
                   }};
}

// ---------------------------------------------------------------------------
// Equivariant idempotents and the index pairings.
// ---------------------------------------------------------------------------

/// Projection matrix over the sphere algebra representing a line-bundle module.
///
/// Rows of the defining coisometry may need coefficients sqrt(s_i) with s_i a
/// non-square rational function (q-binomial sums), so the matrix is stored in a
/// gauged form: the true projection is p_ij = sqrt(s_i s_j) G_ij with G and the
/// gauge weights s_i > 0 rational. Conjugating by diag(sqrt(s_i)) gives the
/// rational matrix M_ij = G_ij s_j, which is what products, traces and pairings
/// consume; every gauge factor telescopes around closed index cycles, so all
/// reported values are exact elements of Q(q). When every s_i is a perfect
/// square the gauge is folded into the entries and s_i = 1.
struct ProjMatrix {
    int dim = 0;
    std::vector<int> twiceWeights;                 ///< 2 * spin weight per row, ascending
    std::vector<RatFunc> gauge;                    ///< s_i > 0
    std::vector<NCElement> rows;                   ///< gauged isometry rows u_i
    std::vector<std::vector<NCElement>> entries;   ///< G_ij = star(u_i) u_j

    /// sum_i s_i u_i u_i* - 1; zero certifies the coisometry condition T T* = 1.
    NCElement isometryDefect() const {
        NCElement acc;
        for (int i = 0; i < dim; ++i) {
            NCElement t = rows[static_cast<std::size_t>(i)] *
                          rows[static_cast<std::size_t>(i)].star();
            acc += gauge[static_cast<std::size_t>(i)] * t;
        }
        return acc - NCElement::one();
    }

    /// Rational conjugate M_ij = G_ij s_j of the projection.
    std::vector<std::vector<NCElement>> conjugateEntries() const {
        std::vector<std::vector<NCElement>> M(static_cast<std::size_t>(dim));
        for (int i = 0; i < dim; ++i) {
            M[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(dim));
            for (int j = 0; j < dim; ++j)
                M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                    gauge[static_cast<std::size_t>(j)];
        }
        return M;
    }

    bool isIdempotent() const {
        auto M = conjugateEntries();
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                NCElement acc;
                for (int l = 0; l < dim; ++l)
                    acc += M[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] *
                           M[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)];
                if (acc != M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) return false;
            }
        return true;
    }

    /// p* = p in gauged coordinates: star(G_ij) = G_ji.
    bool isSelfAdjoint() const {
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                if (entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].star() !=
                    entries[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)])
                    return false;
        return true;
    }

    std::string weightStr(int i) const {
        int tw = twiceWeights[static_cast<std::size_t>(i)];
        if (tw % 2 == 0) return std::to_string(tw / 2);
        return std::to_string(tw) + "/2";
    }

    std::string toJson() const;
};

/// Options for the cocycle assertions performed by the pairings.
struct PairOptions {
    int checkDegree = 2;  ///< sweep monomial arguments of the sphere up to this degree
    bool assertCocycle = true;
};

namespace cochaindetail {

inline std::vector<NCMonomial> sphereBasis(int maxDeg) {
    std::vector<NCMonomial> out;
    for (int m = 0; 2 * m <= maxDeg; ++m)
        for (int n = 0; 2 * std::max(m, n) <= maxDeg; ++n) out.push_back({n - m, m, n});
    return out;
}

inline std::string tupleStr(const std::vector<NCElement>& b) {
    std::string s = "(";
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (i) s += "; ";
        s += b[i].str();
    }
    return s + ")";
}

/// Checks that g vanishes on all monomial tuples up to checkDegree; returns a witness.
inline std::optional<std::vector<NCElement>> findNonzero(const Cochain& g, int checkDegree) {
    auto basis = sphereBasis(checkDegree);
    std::vector<std::size_t> idx(static_cast<std::size_t>(g.degree) + 1, 0);
    std::vector<NCElement> args(idx.size());
    for (;;) {
        for (std::size_t i = 0; i < idx.size(); ++i) args[i] = NCElement::monomial(basis[idx[i]]);
        if (!g.eval(args).isZero()) return args;
        std::size_t pos = 0;
        while (pos < idx.size()) {
            if (++idx[pos] < basis.size()) break;
            idx[pos] = 0;
            ++pos;
        }
        if (pos == idx.size()) return std::nullopt;
    }
}

inline void assertCyclicCocycle(const Cochain& f, const PairOptions& opt) {
    if (!opt.assertCocycle) return;
    Cochain bf = coboundary(f);
    if (auto w = findNonzero(bf, opt.checkDegree))
        throw CocycleError("pairing requires a cocycle: b f != 0 at " + tupleStr(*w));
    Cochain diff = addCochain(cyclicPermute(f), scaleCochain(RatFunc(-1L), f));
    if (auto w = findNonzero(diff, opt.checkDegree))
        throw CocycleError("pairing requires a cyclic functional: lambda f != f at " + tupleStr(*w));
}

} // namespace cochaindetail

/// Pairing of a twisted cyclic cocycle of degree 0 or 2 with a projection:
///   degree 2: sum_{i0,i1,i2} q^(-2 w_{i0}) f(p_{i0 i1}, p_{i1 i2}, p_{i2 i0}),
///   degree 0: sum_i q^(-2 w_i) f(p_ii).
/// For untwisted cocycles the trace weights are 1 (evaluation at the counit).
inline RatFunc pairCyclic(const Cochain& f, const ProjMatrix& p, const PairOptions& opt = {}) {
    if (f.degree != 0 && f.degree != 2)
        throw DomainError("pairCyclic: only degrees 0 and 2 are implemented");
    cochaindetail::assertCyclicCocycle(f, opt);
    auto M = p.conjugateEntries();
    auto wt = [&](int i) {
        return f.twisted ? RatFunc::q(-p.twiceWeights[static_cast<std::size_t>(i)]) : RatFunc(1L);
    };
    RatFunc acc(0L);
    if (f.degree == 0) {
        for (int i = 0; i < p.dim; ++i)
            acc += wt(i) * f.eval({M[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)]});
        return acc;
    }
    for (int i0 = 0; i0 < p.dim; ++i0)
        for (int i1 = 0; i1 < p.dim; ++i1)
            for (int i2 = 0; i2 < p.dim; ++i2)
                acc += wt(i0) * f.eval({M[static_cast<std::size_t>(i0)][static_cast<std::size_t>(i1)],
                                        M[static_cast<std::size_t>(i1)][static_cast<std::size_t>(i2)],
                                        M[static_cast<std::size_t>(i2)][static_cast<std::size_t>(i0)]});
    return acc;
}

/// Pairing of an even (b,B)-cocycle family (f_{2n})_n with a projection:
///   sum_n (-1)^n (2n)!/n! sum q^(-2 w_{i0}) f_{2n}((p-1/2)_{i0 i1}, p_{i1 i2}, ..., p_{i_{2n} i0}),
/// the first argument carrying the p - 1/2 shift. Untwisted families are paired
/// with unit weights (evaluation at the counit, the classical index).
inline RatFunc pairBB(const std::vector<Cochain>& family, const ProjMatrix& p,
                      const PairOptions& opt = {}) {
    if (family.empty()) return RatFunc(0L);
    std::map<int, const Cochain*> byDeg;
    bool twisted = family.front().twisted;
    for (const auto& f : family) {
        if (f.degree % 2 != 0) throw DomainError("pairBB: family must have even degrees");
        if (f.twisted != twisted) throw DomainError("pairBB: mixed twists in one family");
        if (!byDeg.emplace(f.degree, &f).second)
            throw DomainError("pairBB: duplicate degree in family");
    }
    if (opt.assertCocycle) {
        // (b+B)(family) = 0 componentwise: b f_{2n} + B f_{2n+2} = 0 for every odd slot.
        int maxDeg = byDeg.rbegin()->first;
        for (int n = 0; n <= maxDeg + 2; n += 2) {
            Cochain piece = zeroCochain(n + 1, twisted);
            bool nonempty = false;
            if (auto it = byDeg.find(n); it != byDeg.end()) {
                piece = addCochain(piece, coboundary(*it->second));
                nonempty = true;
            }
            if (auto it = byDeg.find(n + 2); it != byDeg.end()) {
                piece = addCochain(piece, connesB(*it->second));
                nonempty = true;
            }
            if (!nonempty) continue;
            if (auto w = cochaindetail::findNonzero(piece, opt.checkDegree))
                throw CocycleError("pairBB requires a (b+B)-cocycle: component of degree " +
                                   std::to_string(n + 1) + " nonzero at " +
                                   cochaindetail::tupleStr(*w));
        }
    }
    auto M = p.conjugateEntries();
    const RatFunc half(mpq_class(1, 2));
    auto wt = [&](int i) {
        return twisted ? RatFunc::q(-p.twiceWeights[static_cast<std::size_t>(i)]) : RatFunc(1L);
    };
    RatFunc total(0L);
    for (const auto& [deg, f] : byDeg) {
        int n = deg / 2;
        mpq_class comb(1);  // (2n)!/n!
        for (int i = n + 1; i <= 2 * n; ++i) comb *= i;
        RatFunc prefactor(n % 2 == 0 ? comb : -comb);
        // odometer over (deg+1) indices
        std::vector<int> idx(static_cast<std::size_t>(deg) + 1, 0);
        std::vector<NCElement> args(idx.size());
        RatFunc sum(0L);
        for (;;) {
            for (std::size_t s = 0; s < idx.size(); ++s) {
                int a = idx[s], b = idx[(s + 1) % idx.size()];
                args[s] = M[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
                if (s == 0 && a == b) args[s] -= NCElement(half);
            }
            sum += wt(idx[0]) * f->eval(args);
            std::size_t pos = 0;
            while (pos < idx.size()) {
                if (++idx[pos] < p.dim) break;
                idx[pos] = 0;
                ++pos;
            }
            if (pos == idx.size()) break;
        }
        total += prefactor * sum;
    }
    return total;
}

inline std::string ProjMatrix::toJson() const {
    std::ostringstream os;
    os << "{\n  \"dim\": " << dim << ",\n  \"weights\": [";
    for (int i = 0; i < dim; ++i) os << (i ? ", " : "") << "\"" << weightStr(i) << "\"";
    os << "],\n  \"gauge\": [";
    for (int i = 0; i < dim; ++i)
        os << (i ? ", " : "") << "\"" << gauge[static_cast<std::size_t>(i)].str() << "\"";
    os << "],\n  \"entries\": [\n";
    for (int i = 0; i < dim; ++i) {
        os << "    [";
        for (int j = 0; j < dim; ++j) {
            if (j) os << ", ";
            os << "\"" << entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].str()
               << "\"";
        }
        os << "]" << (i + 1 < dim ? "," : "") << "\n";
    }
    os << "  ]\n}";
    return os.str();
}

} // namespace qsphere
