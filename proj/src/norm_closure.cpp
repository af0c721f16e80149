#include "eqsm/norm_closure.hpp"

#include <algorithm>

#include "eqsm/gset.hpp"

namespace eqsm {

SubgroupFamily make_family(const FiniteGroup& g, const std::vector<std::uint64_t>& members,
                           int* added) {
    const SubgroupLattice& lat = g.lattice(g.full_subgroup().mask);
    SubgroupFamily f{g, {}};
    for (std::uint64_t m : members) {
        lat.index_of(m);  // validates membership in the lattice
        f.members.insert(m);
    }
    size_t before = f.members.size();
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<std::uint64_t> cur(f.members.begin(), f.members.end());
        for (std::uint64_t m : cur) {
            for (int e = 0; e < g.order(); ++e)
                if (f.members.insert(g.conjugate_set(e, m)).second) changed = true;
            for (std::uint64_t s : lat.subgroups)
                if ((s & ~m) == 0 && f.members.insert(s).second) changed = true;
        }
    }
    if (added) *added = static_cast<int>(f.members.size() - before);
    return f;
}

SubgroupFamily builtin_family(const FiniteGroup& g, const std::string& name) {
    const SubgroupLattice& lat = g.lattice(g.full_subgroup().mask);
    SubgroupFamily f{g, {}};
    if (name == "trivial") {
        f.members.insert(g.trivial_subgroup().mask);
        return f;
    }
    if (name == "proper") {
        for (std::uint64_t m : lat.subgroups)
            if (m != g.full_subgroup().mask) f.members.insert(m);
        return f;
    }
    if (name == "all") {
        f.members.insert(lat.subgroups.begin(), lat.subgroups.end());
        return f;
    }
    throw Error("unknown builtin family '" + name + "'");
}

SubgroupFamily level_family(const SubgroupFamily& f, const Subgroup& h) {
    SubgroupFamily out{f.group, {}};
    for (std::uint64_t m : f.members)
        if ((m & ~h.mask) == 0) out.members.insert(m);
    return out;
}

NormVerdict norm_preserves(const Subgroup& k, const Subgroup& h, const SubgroupFamily& f) {
    if ((k.mask & ~h.mask) != 0) throw Error("norm_preserves: K must be contained in H");
    const FiniteGroup& g = k.group;
    const SubgroupLattice& lat = g.lattice(g.full_subgroup().mask);
    SubgroupFamily fk = level_family(f, k);
    SubgroupFamily fh = level_family(f, h);

    NormVerdict v;
    // generators of the acyclic class at level K, in canonical order
    for (std::uint64_t lm : lat.subgroups) {
        if ((lm & ~k.mask) != 0 || !fk.contains(lm)) continue;
        GSet normed = coinduce(h, orbit(k, Subgroup{g, lm}));
        for (int x = 0; x < normed.size(); ++x) {
            std::uint64_t stab = normed.stabilizer(x);
            if (!fh.contains(stab)) {
                v.ok = false;
                v.witness = NormWitness{lat.index_of(lm), lat.index_of(stab)};
                return v;
            }
        }
    }
    return v;
}

ClosureReport max_preserved(const SubgroupFamily& f) {
    const FiniteGroup& g = f.group;
    const SubgroupLattice& lat = g.lattice(g.full_subgroup().mask);
    const int n = static_cast<int>(lat.subgroups.size());

    ClosureReport r{g, f, {}, false, std::nullopt, {}};
    for (int k = 0; k < n; ++k)
        for (int h = 0; h < n; ++h) {
            if (!lat.contains_pair(k, h)) continue;
            if (k == h) {
                r.pass_pairs.insert({k, h});  // coinduction along K = H is an isomorphism
                continue;
            }
            NormVerdict v = norm_preserves(Subgroup{g, lat.subgroups[k]},
                                           Subgroup{g, lat.subgroups[h]}, f);
            if (v.ok)
                r.pass_pairs.insert({k, h});
            else
                r.witnesses.push_back({{k, h}, *v.witness});
        }

    IndexingSystem candidate{g, r.pass_pairs};
    r.is_indexing_system = check_axioms(candidate).ok;
    if (r.is_indexing_system) r.maximal_system = candidate;
    return r;
}

std::vector<IndexingSystem> maximal_subsystems(const ClosureReport& report) {
    IndexingPoset poset = enumerate_systems(report.group);
    std::vector<IndexingSystem> inside;
    for (const auto& sys : poset.systems) {
        bool contained = std::includes(report.pass_pairs.begin(), report.pass_pairs.end(),
                                       sys.pairs.begin(), sys.pairs.end());
        if (contained) inside.push_back(sys);
    }
    std::vector<IndexingSystem> maximal;
    for (const auto& a : inside) {
        bool is_max = true;
        for (const auto& b : inside)
            if (!(a == b) && std::includes(b.pairs.begin(), b.pairs.end(), a.pairs.begin(),
                                           a.pairs.end())) {
                is_max = false;
                break;
            }
        if (is_max) maximal.push_back(a);
    }
    return maximal;
}

}  // namespace eqsm
