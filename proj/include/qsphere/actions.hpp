#pragma once

#include <array>
#include <map>

#include "qsphere/ncalg.hpp"

namespace qsphere {

/// Generators of the quantized enveloping algebra U_q(su_2) acting on the
/// coordinate algebra from both sides.
enum class Gen { E, F, K, KInv };

inline RatFunc counit(Gen w) {
    return (w == Gen::E || w == Gen::F) ? RatFunc(0L) : RatFunc(1L);
}

namespace detail {

enum class Letter { A, As, G, Gs };

/// Values of the eight generator actions on the four algebra generators, derived
/// once from the fundamental corepresentation
///   U = (alpha, -q g*; g, a*)
/// and its representation k -> diag(q^(1/2), q^(-1/2)), e -> E_01, f -> E_10.
/// The derivation (rather than a hard-coded table) is itself exercised by tests.
struct GenTables {
    // [gen][letter] -> value of the action on that letter
    std::array<std::array<NCElement, 4>, 4> left, right;

    static const GenTables& instance() {
        static const GenTables t = build();
        return t;
    }

private:
    static GenTables build() {
        const RatFunc qq = RatFunc::q(1);
        std::array<std::array<NCElement, 2>, 2> U;
        U[0][0] = NCElement::alpha();
        U[0][1] = RatFunc(-1L) * qq * NCElement::gammaStar();
        U[1][0] = NCElement::gamma();
        U[1][1] = NCElement::alphaStar();

        auto pi = [](Gen w) {
            std::array<std::array<RatFunc, 2>, 2> m{};
            switch (w) {
                case Gen::K:
                    m[0][0] = RatFunc::sqrtQ(1);
                    m[1][1] = RatFunc::sqrtQ(-1);
                    break;
                case Gen::KInv:
                    m[0][0] = RatFunc::sqrtQ(-1);
                    m[1][1] = RatFunc::sqrtQ(1);
                    break;
                case Gen::E:
                    m[0][1] = RatFunc(1L);
                    break;
                case Gen::F:
                    m[1][0] = RatFunc(1L);
                    break;
            }
            return m;
        };

        GenTables t;
        for (Gen w : {Gen::E, Gen::F, Gen::K, Gen::KInv}) {
            auto P = pi(w);
            std::array<std::array<NCElement, 2>, 2> L{}, R{};
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (int l = 0; l < 2; ++l) {
                        L[i][j] += U[i][l] * P[l][j];  // d_w(u_ij) = sum_l u_il <w, u_lj>
                        R[i][j] += P[i][l] * U[l][j];  // u_ij <| w = sum_l <w, u_il> u_lj
                    }
            auto wi = static_cast<std::size_t>(w);
            const RatFunc mqinv = RatFunc::q(-1, mpq_class(-1));
            t.left[wi][static_cast<std::size_t>(Letter::A)] = L[0][0];
            t.left[wi][static_cast<std::size_t>(Letter::G)] = L[1][0];
            t.left[wi][static_cast<std::size_t>(Letter::As)] = L[1][1];
            t.left[wi][static_cast<std::size_t>(Letter::Gs)] = mqinv * L[0][1];
            t.right[wi][static_cast<std::size_t>(Letter::A)] = R[0][0];
            t.right[wi][static_cast<std::size_t>(Letter::G)] = R[1][0];
            t.right[wi][static_cast<std::size_t>(Letter::As)] = R[1][1];
            t.right[wi][static_cast<std::size_t>(Letter::Gs)] = mqinv * R[0][1];
        }
        return t;
    }
};

inline const NCElement& genValue(Gen w, Letter l, bool leftSide) {
    const GenTables& t = GenTables::instance();
    auto wi = static_cast<std::size_t>(w);
    auto li = static_cast<std::size_t>(l);
    return leftSide ? t.left[wi][li] : t.right[wi][li];
}

/// Apply the twisted-derivation rule for e or f across the normal word of a monomial:
///   d_e(l_1 ... l_L) = sum_i d_k(prefix) d_e(l_i) d_kinv(suffix),
/// with d_k acting by q^(weight/2). `leftSide` selects d_omega vs <| omega and
/// correspondingly the left vs right weight.
inline NCElement actEFMono(Gen w, const NCMonomial& mo, bool leftSide) {
    NCElement out;
    const int absK = mo.k >= 0 ? mo.k : -mo.k;
    const int sgn = mo.k >= 0 ? 1 : -1;
    const int L = absK + mo.m + mo.n;
    auto weightOf = [&](const NCMonomial& x) { return leftSide ? x.leftWeight() : x.rightWeight(); };
    for (int pos = 0; pos < L; ++pos) {
        NCMonomial pre, suf;
        Letter letter;
        if (pos < absK) {
            pre = {sgn * pos, 0, 0};
            suf = {mo.k - sgn * (pos + 1), mo.m, mo.n};
            letter = sgn > 0 ? Letter::A : Letter::As;
        } else if (pos < absK + mo.m) {
            int j = pos - absK;
            pre = {mo.k, j, 0};
            suf = {0, mo.m - j - 1, mo.n};
            letter = Letter::G;
        } else {
            int j = pos - absK - mo.m;
            pre = {mo.k, mo.m, j};
            suf = {0, 0, mo.n - j - 1};
            letter = Letter::Gs;
        }
        const NCElement& val = genValue(w, letter, leftSide);
        if (val.isZero()) continue;
        RatFunc scale = RatFunc::sqrtQ(weightOf(pre) - weightOf(suf));
        NCElement term = NCElement::monomial(pre) * val * NCElement::monomial(suf);
        for (const auto& [tm, tc] : term.terms()) out.addTerm(tm, scale * tc);
    }
    return out;
}

inline NCElement actImpl(Gen w, const NCElement& a, bool leftSide) {
    NCElement out;
    for (const auto& [mo, c] : a.terms()) {
        if (w == Gen::K || w == Gen::KInv) {
            int wt = leftSide ? mo.leftWeight() : mo.rightWeight();
            out.addTerm(mo, c * RatFunc::sqrtQ(w == Gen::K ? wt : -wt));
        } else {
            NCElement part = actEFMono(w, mo, leftSide);
            for (const auto& [tm, tc] : part.terms()) out.addTerm(tm, c * tc);
        }
    }
    return out;
}

} // namespace detail

/// Left action d_omega(a) = (id ⊗ omega) Delta(a).
inline NCElement actLeft(Gen w, const NCElement& a) { return detail::actImpl(w, a, true); }

/// Right action a <| omega = (omega ⊗ id) Delta(a).
inline NCElement actRight(Gen w, const NCElement& a) { return detail::actImpl(w, a, false); }

inline NCElement dE(const NCElement& a) { return actLeft(Gen::E, a); }
inline NCElement dF(const NCElement& a) { return actLeft(Gen::F, a); }
inline NCElement dK(const NCElement& a) { return actLeft(Gen::K, a); }

/// Splits into d_k-eigencomponents A_n; the keys are the integer left weights.
inline std::map<int, NCElement> grade(const NCElement& a) {
    std::map<int, NCElement> out;
    for (const auto& [mo, c] : a.terms()) out[mo.leftWeight()].addTerm(mo, c);
    return out;
}

/// The twist sigma^t(b) = b <| k^(2t), t given in half-integer steps as twiceT = 2t.
/// Acts diagonally: a monomial of right weight r is scaled by q^(r t).
inline NCElement twist(const NCElement& a, int twiceT = 2) {
    NCElement out;
    for (const auto& [mo, c] : a.terms())
        out.addTerm(mo, c * RatFunc::sqrtQ(mo.rightWeight() * twiceT));
    return out;
}

inline NCElement sigma(const NCElement& a) { return twist(a, 2); }
inline NCElement sigmaInv(const NCElement& a) { return twist(a, -2); }

} // namespace qsphere
