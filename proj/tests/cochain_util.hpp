#pragma once

#include <random>
#include <vector>

#include "qsphere/cohomology.hpp"

namespace qsphere::testutil {

/// Monomial basis of the sphere algebra up to a total degree bound.
inline std::vector<NCMonomial> sphereBasis(int maxDeg) {
    return cochaindetail::sphereBasis(maxDeg);
}

/// Random sparse multilinear functional given by a table over monomial tuples,
/// extended by multilinearity. For twisted cochains the support is restricted to
/// tuples of total right weight zero, which is exactly sigma-invariance.
inline Cochain randomTableCochain(std::mt19937_64& rng, int degree, bool twisted,
                                  int maxDeg = 4, int tableSize = 8) {
    auto basis = sphereBasis(maxDeg);
    std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
    std::uniform_int_distribution<int> coef(-3, 3), qe(-1, 1);
    using Key = std::vector<NCMonomial>;
    auto table = std::make_shared<std::map<Key, RatFunc>>();
    int tries = 0;
    while (static_cast<int>(table->size()) < tableSize && ++tries < 200) {
        Key key;
        int totalRw = 0;
        for (int i = 0; i <= degree; ++i) {
            key.push_back(basis[pick(rng)]);
            totalRw += key.back().rightWeight();
        }
        if (twisted && totalRw != 0) continue;
        int c = coef(rng);
        if (c == 0) c = 1;
        (*table)[key] = RatFunc::q(qe(rng), mpq_class(c));
    }
    Cochain f;
    f.degree = degree;
    f.twisted = twisted;
    f.eval = [table](const std::vector<NCElement>& args) {
        RatFunc acc(0L);
        for (const auto& [key, v] : *table) {
            RatFunc prod = v;
            bool dead = false;
            for (std::size_t i = 0; i < key.size(); ++i) {
                RatFunc c = args[i].coeff(key[i]);
                if (c.isZero()) {
                    dead = true;
                    break;
                }
                prod *= c;
            }
            if (!dead) acc += prod;
        }
        return acc;
    };
    return f;
}

} // namespace qsphere::testutil
