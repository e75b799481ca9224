#pragma once

#include <array>

#include "qsphere/cohomology.hpp"

namespace qsphere {

namespace bottdetail {

inline NCElement power(const NCElement& g, int e) {
    NCElement r = NCElement::one();
    for (int i = 0; i < e; ++i) r = r * g;
    return r;
}

/// Coefficient vector over powers of x = g*g of an element supported on (0,i,i).
inline std::vector<RatFunc> xCoeffs(const NCElement& e, int maxPow) {
    std::vector<RatFunc> c(static_cast<std::size_t>(maxPow) + 1, RatFunc(0L));
    for (const auto& [mo, v] : e.terms()) {
        if (mo.k != 0 || mo.m != mo.n || mo.m > maxPow)
            throw SolveError("row product is not a polynomial in g*g");
        c[static_cast<std::size_t>(mo.m)] = v;
    }
    return c;
}

} // namespace bottdetail

/// Equivariant projection representing the line bundle of winding number n.
///
/// Rows are u_j = (-1)^j m_j with m_j = g^(N-j) a^j for n = N > 0 (conjugate
/// generators for n < 0), carrying ascending spin weights j - N/2. The positive
/// gauge weights s_j solve the exact coisometry condition
///   sum_j s_j u_j u_j* = 1,
/// a triangular linear system over Q(q) in powers of g*g; the solution is the
/// squared row normalization (a q-binomial sum, usually not a square in Q(q)).
/// Perfect-square gauges are folded into the rows, so bott(1) reproduces the
/// textbook 2x2 matrix (q^2 g*g, -a g*; -g a*, a*a) literally.
inline ProjMatrix bott(int n, int maxWinding = 4) {
    if (n == 0) throw DomainError("bott: winding number must be nonzero");
    int N = n > 0 ? n : -n;
    if (N > maxWinding)
        throw DomainError("bott: |n| exceeds the configured bound " + std::to_string(maxWinding));

    std::vector<NCElement> m(static_cast<std::size_t>(N) + 1);
    for (int j = 0; j <= N; ++j) {
        using bottdetail::power;
        m[static_cast<std::size_t>(j)] =
            n > 0 ? power(NCElement::gamma(), N - j) * power(NCElement::alpha(), j)
                  : power(NCElement::gammaStar(), j) * power(NCElement::alphaStar(), N - j);
    }

    // triangular solve for the gauge weights
    std::vector<std::vector<RatFunc>> prod(static_cast<std::size_t>(N) + 1);
    for (int j = 0; j <= N; ++j)
        prod[static_cast<std::size_t>(j)] = bottdetail::xCoeffs(
            m[static_cast<std::size_t>(j)] * m[static_cast<std::size_t>(j)].star(), N);
    std::vector<RatFunc> s(static_cast<std::size_t>(N) + 1, RatFunc(0L));
    // the row whose product has lowest x-power N-i is solved at step i
    std::vector<int> rowAt(static_cast<std::size_t>(N) + 1, -1);
    for (int j = 0; j <= N; ++j) {
        int lo = 0;
        while (lo <= N && prod[static_cast<std::size_t>(j)][static_cast<std::size_t>(lo)].isZero())
            ++lo;
        if (lo > N || rowAt[static_cast<std::size_t>(lo)] != -1)
            throw SolveError("coefficient system is not triangular");
        rowAt[static_cast<std::size_t>(lo)] = j;
    }
    for (int i = 0; i <= N; ++i) {
        int j = rowAt[static_cast<std::size_t>(i)];
        RatFunc rhs = (i == 0) ? RatFunc(1L) : RatFunc(0L);
        for (int l = 0; l < i; ++l) {
            int jl = rowAt[static_cast<std::size_t>(l)];
            rhs -= s[static_cast<std::size_t>(jl)] *
                   prod[static_cast<std::size_t>(jl)][static_cast<std::size_t>(i)];
        }
        s[static_cast<std::size_t>(j)] = rhs / prod[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    }

    ProjMatrix p;
    p.dim = N + 1;
    mpq_class half(1, 2);
    for (int j = 0; j <= N; ++j) {
        p.twiceWeights.push_back(2 * j - N);
        NCElement row = (j % 2 == 0) ? m[static_cast<std::size_t>(j)]
                                     : RatFunc(-1L) * m[static_cast<std::size_t>(j)];
        p.rows.push_back(row);
        p.gauge.push_back(s[static_cast<std::size_t>(j)]);
        if (s[static_cast<std::size_t>(j)].evalF(half) <= 0)
            throw SolveError("gauge weight not positive at q = 1/2");
    }
    // fold perfect-square gauges into the rows
    std::vector<RatFunc> roots;
    bool allSquare = true;
    for (int j = 0; j <= N; ++j) {
        auto r = p.gauge[static_cast<std::size_t>(j)].trySqrt();
        if (!r) {
            allSquare = false;
            break;
        }
        roots.push_back(*r);
    }
    if (allSquare) {
        for (int j = 0; j <= N; ++j) {
            p.rows[static_cast<std::size_t>(j)] =
                roots[static_cast<std::size_t>(j)] * p.rows[static_cast<std::size_t>(j)];
            p.gauge[static_cast<std::size_t>(j)] = RatFunc(1L);
        }
    }
    p.entries.assign(static_cast<std::size_t>(p.dim), {});
    for (int i = 0; i <= N; ++i) {
        p.entries[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(p.dim));
        for (int j = 0; j <= N; ++j)
            p.entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                p.rows[static_cast<std::size_t>(i)].star() * p.rows[static_cast<std::size_t>(j)];
    }
    if (!p.isometryDefect().isZero())
        throw SolveError("coefficient solve failed the exact coisometry check");
    return p;
}

namespace bottdetail {

/// Matrix of the right action of a generator in the row module:
/// u_i <| w = sum_j pi(w)_{ji} u_j. Rows are scalar multiples of single
/// monomials, so the expansion is exact coefficient division.
inline std::vector<std::vector<RatFunc>> rightMatrix(const ProjMatrix& p, Gen w) {
    int d = p.dim;
    std::vector<std::vector<RatFunc>> pi(static_cast<std::size_t>(d),
                                         std::vector<RatFunc>(static_cast<std::size_t>(d), RatFunc(0L)));
    for (int i = 0; i < d; ++i) {
        NCElement img = actRight(w, p.rows[static_cast<std::size_t>(i)]);
        for (const auto& [mo, c] : img.terms()) {
            bool placed = false;
            for (int j = 0; j < d; ++j) {
                const auto& row = p.rows[static_cast<std::size_t>(j)];
                auto it = row.terms().find(mo);
                if (it != row.terms().end()) {
                    pi[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = c / it->second;
                    placed = true;
                    break;
                }
            }
            if (!placed) throw SolveError("row module is not invariant under the right action");
        }
    }
    return pi;
}

} // namespace bottdetail

/// Invariance defect p <|| w - eps(w) p of the idempotent under the module action
///   (T ⊗ b) <|| w = pi(w_(0)) T pi(S^-1(w_(2))) ⊗ b <| w_(1),
/// computed in gauged coordinates (zero iff the true defect is zero). The zero
/// matrix certifies equivariance; w ranges over {e, f, k}.
inline std::vector<std::vector<NCElement>> equivarianceDefect(const ProjMatrix& p, Gen w) {
    if (w == Gen::KInv) throw DomainError("equivarianceDefect: use e, f or k");
    struct Term {
        Gen w0, w1, w2inv;  // w2inv = S^-1(w2) up to the stored scalar
        RatFunc scale;
    };
    std::vector<Term> terms;
    const RatFunc one(1L);
    if (w == Gen::K) {
        terms.push_back({Gen::K, Gen::K, Gen::KInv, one});
    } else if (w == Gen::E) {
        terms.push_back({Gen::E, Gen::KInv, Gen::K, one});
        terms.push_back({Gen::K, Gen::E, Gen::K, one});
        terms.push_back({Gen::K, Gen::K, Gen::E, RatFunc::q(1, mpq_class(-1))});  // S^-1(e) = -q e
    } else {
        terms.push_back({Gen::F, Gen::KInv, Gen::K, one});
        terms.push_back({Gen::K, Gen::F, Gen::K, one});
        terms.push_back({Gen::K, Gen::K, Gen::F, RatFunc::q(-1, mpq_class(-1))});  // S^-1(f) = -q^-1 f
    }

    int d = p.dim;
    std::vector<std::vector<NCElement>> defect(static_cast<std::size_t>(d),
                                               std::vector<NCElement>(static_cast<std::size_t>(d)));
    for (const auto& t : terms) {
        auto pi0 = bottdetail::rightMatrix(p, t.w0);
        auto pi2 = bottdetail::rightMatrix(p, t.w2inv);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                NCElement acc;
                for (int a = 0; a < d; ++a) {
                    if (pi0[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)].isZero())
                        continue;
                    for (int b = 0; b < d; ++b) {
                        RatFunc c = p.gauge[static_cast<std::size_t>(a)] *
                                    pi0[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] *
                                    pi2[static_cast<std::size_t>(b)][static_cast<std::size_t>(j)] *
                                    t.scale;
                        if (c.isZero()) continue;
                        acc += c * actRight(t.w1,
                                            p.entries[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]);
                    }
                }
                defect[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += acc;
            }
    }
    RatFunc eps = counit(w);
    if (!eps.isZero())
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                defect[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
                    (eps * p.gauge[static_cast<std::size_t>(i)]) *
                    p.entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return defect;
}

inline bool defectIsZero(const std::vector<std::vector<NCElement>>& defect) {
    for (const auto& row : defect)
        for (const auto& e : row)
            if (!e.isZero()) return false;
    return true;
}

} // namespace qsphere
