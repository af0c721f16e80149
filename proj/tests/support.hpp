#pragma once

// shared helpers for unit and acceptance tests

#include <random>
#include <string>

#include "eqsm/coeff.hpp"
#include "eqsm/group.hpp"

namespace eqsm::testsupport {

inline Subgroup sub_by_label(const FiniteGroup& g, const std::string& label) {
    const SubgroupLattice& lat = g.lattice(g.full_subgroup().mask);
    int idx = lat.find_subgroup_label(label);
    if (idx < 0) throw Error("no subgroup labelled " + label);
    return Subgroup{g, lat.subgroups[idx]};
}

inline int sub_idx(const FiniteGroup& g, const std::string& label) {
    const SubgroupLattice& lat = g.lattice(g.full_subgroup().mask);
    int idx = lat.find_subgroup_label(label);
    if (idx < 0) throw Error("no subgroup labelled " + label);
    return idx;
}

/// Random unimodular matrix built from elementary operations, with its
/// inverse tracked alongside.
inline std::pair<IntMatrix, IntMatrix> random_unimodular(int n, std::mt19937_64& rng) {
    IntMatrix q = IntMatrix::identity(n), qinv = IntMatrix::identity(n);
    if (n == 0) return {q, qinv};
    std::uniform_int_distribution<int> idx(0, n - 1), lam(-2, 2), ops(1, 4);
    for (int t = ops(rng); t > 0; --t) {
        int i = idx(rng), j = idx(rng);
        if (i == j) {
            // sign flip of row i; self-inverse
            for (int c = 0; c < n; ++c) q.at(i, c) = -q.at(i, c);
            for (int r = 0; r < n; ++r) qinv.at(r, i) = -qinv.at(r, i);
            continue;
        }
        long long l = lam(rng);
        // row_i += l * row_j on q; column_j -= l * column_i on qinv
        for (int c = 0; c < n; ++c) q.at(i, c) += l * q.at(j, c);
        for (int r = 0; r < n; ++r) qinv.at(r, j) -= l * qinv.at(r, i);
    }
    return {q, qinv};
}

/// A random valid Mackey functor with level ranks at most 3: direct sums of
/// constant and fixed-point atoms, twisted by a random unimodular change of
/// basis per subgroup class.
inline MackeyFunctor random_valid_mackey(const FiniteGroup& g, std::mt19937_64& rng) {
    Subgroup top = g.full_subgroup();
    const SubgroupLattice& lat = g.lattice(top.mask);

    // orbits of index at most 3 keep every level rank at most 3
    std::vector<std::uint64_t> small_index;
    for (std::uint64_t m : lat.subgroups)
        if (g.order() / Subgroup{g, m}.order() <= 3) small_index.push_back(m);

    std::uniform_int_distribution<int> kind(0, 2);
    auto atom = [&](bool allow_wide) -> MackeyFunctor {
        int k = kind(rng);
        if (k == 0 || !allow_wide) return constant_green(top).mackey;
        std::uniform_int_distribution<size_t> pick(0, small_index.size() - 1);
        return fixed_point_mackey(top, orbit(top, g.subgroup(small_index[pick(rng)])));
    };

    MackeyFunctor m = atom(true);
    int max_rank = *std::max_element(m.cs.rank.begin(), m.cs.rank.end());
    std::uniform_int_distribution<int> more(0, 1);
    if (max_rank <= 2 && more(rng)) {
        MackeyFunctor extra = constant_green(top).mackey;
        m = direct_sum(m, extra);
    }

    std::vector<IntMatrix> q, qinv;
    for (size_t c = 0; c < lat.classes.size(); ++c) {
        auto [a, b] = random_unimodular(m.cs.rank[lat.class_rep[c]], rng);
        q.push_back(a);
        qinv.push_back(b);
    }
    return base_change(m, q, qinv);
}

}  // namespace eqsm::testsupport
