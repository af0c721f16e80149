#include "eqsm/indexing.hpp"

#include <algorithm>
#include <map>

#include "eqsm/gset.hpp"

namespace eqsm {

namespace {

const SubgroupLattice& full_lattice(const FiniteGroup& g) {
    return g.lattice(g.full_subgroup().mask);
}

std::string pair_text(const SubgroupLattice& lat, int k, int h) {
    return lat.subgroup_label(k) + " < " + lat.subgroup_label(h);
}

}  // namespace

int IndexingSystem::size() const {
    int n = 0;
    for (const auto& [k, h] : pairs)
        if (k != h) ++n;
    return n;
}

int PairOrbits::orbit_index(int k, int h) const {
    const int n = static_cast<int>(full_lattice(group).subgroups.size());
    return orbit_of_pair[k * n + h];
}

PairOrbits pair_orbits(const FiniteGroup& g) {
    const SubgroupLattice& lat = full_lattice(g);
    const int n = static_cast<int>(lat.subgroups.size());
    PairOrbits po{g, {}, std::vector<int>(static_cast<size_t>(n) * n, -1)};

    for (int k = 0; k < n; ++k)
        for (int h = 0; h < n; ++h) {
            if (k == h || !lat.contains_pair(k, h)) continue;
            if (po.orbit_of_pair[k * n + h] >= 0) continue;
            std::vector<std::pair<int, int>> orbit;
            int id = static_cast<int>(po.orbits.size());
            for (int e = 0; e < g.order(); ++e) {
                int kc = lat.index_of(g.conjugate_set(e, lat.subgroups[k]));
                int hc = lat.index_of(g.conjugate_set(e, lat.subgroups[h]));
                if (po.orbit_of_pair[kc * n + hc] < 0) {
                    po.orbit_of_pair[kc * n + hc] = id;
                    orbit.emplace_back(kc, hc);
                }
            }
            std::sort(orbit.begin(), orbit.end());
            po.orbits.push_back(std::move(orbit));
        }
    return po;
}

AxiomVerdict check_axioms(const IndexingSystem& o) {
    const FiniteGroup& g = o.group;
    const SubgroupLattice& lat = full_lattice(g);
    const int n = static_cast<int>(lat.subgroups.size());
    AxiomVerdict v;

    for (const auto& [k, h] : o.pairs) {
        if (k < 0 || h < 0 || k >= n || h >= n || !lat.contains_pair(k, h))
            throw Error("check_axioms: malformed pair set");
    }

    // (a) reflexivity
    for (int h = 0; h < n; ++h)
        if (!o.contains(h, h)) {
            v.ok = false;
            v.clause = 'a';
            v.detail = "missing reflexive pair " + pair_text(lat, h, h);
            v.witness = {h};
            return v;
        }

    // (b) conjugation closure
    for (const auto& [k, h] : o.pairs)
        for (int e = 0; e < g.order(); ++e) {
            int kc = lat.index_of(g.conjugate_set(e, lat.subgroups[k]));
            int hc = lat.index_of(g.conjugate_set(e, lat.subgroups[h]));
            if (!o.contains(kc, hc)) {
                v.ok = false;
                v.clause = 'b';
                v.detail = "pair " + pair_text(lat, k, h) + " conjugated by element " +
                           std::to_string(e) + " leaves the set";
                v.witness = {k, h, kc, hc};
                return v;
            }
        }

    // (c) restriction closure: stabilizers of restrict(orbit(H,K), L)
    for (const auto& [k, h] : o.pairs) {
        std::uint64_t km = lat.subgroups[k], hm = lat.subgroups[h];
        for (int l = 0; l < n; ++l) {
            if (!lat.contains_pair(l, h)) continue;
            std::uint64_t lm = lat.subgroups[l];
            for (int x = 0; x < g.order(); ++x) {
                if (!((hm >> x) & 1)) continue;
                int stab = lat.index_of(lm & g.conjugate_set(x, km));
                if (!o.contains(stab, l)) {
                    v.ok = false;
                    v.clause = 'c';
                    v.detail = "restricting " + pair_text(lat, k, h) + " to " +
                               lat.subgroup_label(l) + " needs " + pair_text(lat, stab, l);
                    v.witness = {k, h, l, stab};
                    return v;
                }
            }
        }
    }

    // (d) composition closure
    for (const auto& [l, k] : o.pairs)
        for (const auto& [k2, h] : o.pairs) {
            if (k2 != k) continue;
            if (!o.contains(l, h)) {
                v.ok = false;
                v.clause = 'd';
                v.detail = "pairs " + pair_text(lat, l, k) + " and " + pair_text(lat, k, h) +
                           " force " + pair_text(lat, l, h);
                v.witness = {l, k, h};
                return v;
            }
        }
    return v;
}

IndexingSystem generate(const FiniteGroup& g, const std::set<std::pair<int, int>>& seed) {
    const SubgroupLattice& lat = full_lattice(g);
    const int n = static_cast<int>(lat.subgroups.size());

    IndexingSystem o{g, seed};
    for (const auto& [k, h] : seed)
        if (k < 0 || h < 0 || k >= n || h >= n || !lat.contains_pair(k, h))
            throw Error("generate: malformed seed pair");
    for (int h = 0; h < n; ++h) o.pairs.insert({h, h});

    bool changed = true;
    while (changed) {
        changed = false;
        std::set<std::pair<int, int>> add;
        for (const auto& [k, h] : o.pairs) {
            // (b)
            for (int e = 0; e < g.order(); ++e) {
                int kc = lat.index_of(g.conjugate_set(e, lat.subgroups[k]));
                int hc = lat.index_of(g.conjugate_set(e, lat.subgroups[h]));
                if (!o.contains(kc, hc)) add.insert({kc, hc});
            }
            // (c)
            std::uint64_t km = lat.subgroups[k], hm = lat.subgroups[h];
            for (int l = 0; l < n; ++l) {
                if (!lat.contains_pair(l, h)) continue;
                std::uint64_t lm = lat.subgroups[l];
                for (int x = 0; x < g.order(); ++x) {
                    if (!((hm >> x) & 1)) continue;
                    int stab = lat.index_of(lm & g.conjugate_set(x, km));
                    if (!o.contains(stab, l)) add.insert({stab, l});
                }
            }
        }
        // (d)
        for (const auto& [l, k] : o.pairs)
            for (const auto& [k2, h] : o.pairs)
                if (k2 == k && !o.contains(l, h)) add.insert({l, h});

        if (!add.empty()) {
            o.pairs.insert(add.begin(), add.end());
            changed = true;
        }
    }
    return o;
}

namespace {

std::uint64_t orbits_mask_of(const PairOrbits& po, const IndexingSystem& o) {
    std::uint64_t m = 0;
    for (const auto& [k, h] : o.pairs) {
        if (k == h) continue;
        m |= std::uint64_t{1} << po.orbit_index(k, h);
    }
    return m;
}

IndexingSystem system_from_orbits(const FiniteGroup& g, const PairOrbits& po, std::uint64_t mask) {
    std::set<std::pair<int, int>> seed;
    for (size_t i = 0; i < po.orbits.size(); ++i)
        if ((mask >> i) & 1) seed.insert(po.orbits[i].begin(), po.orbits[i].end());
    return generate(g, seed);
}

}  // namespace

bool IndexingPoset::leq(int a, int b) const {
    return std::includes(systems[b].pairs.begin(), systems[b].pairs.end(),
                         systems[a].pairs.begin(), systems[a].pairs.end());
}

IndexingPoset enumerate_systems(const FiniteGroup& g) {
    PairOrbits po = pair_orbits(g);
    const int m = static_cast<int>(po.orbits.size());
    if (m > 30) throw Error("enumerate: more than 30 conjugation orbits of subgroup pairs");

    // every closed set is reachable from the bottom by adding one generator
    // orbit at a time and reclosing
    std::map<std::uint64_t, IndexingSystem> found;
    IndexingSystem bottom = generate(g, {});
    std::vector<std::uint64_t> queue{orbits_mask_of(po, bottom)};
    found.emplace(queue[0], std::move(bottom));
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        std::uint64_t cur = queue[qi];
        for (int i = 0; i < m; ++i) {
            if ((cur >> i) & 1) continue;
            IndexingSystem next = system_from_orbits(g, po, cur | (std::uint64_t{1} << i));
            std::uint64_t key = orbits_mask_of(po, next);
            if (found.emplace(key, std::move(next)).second) queue.push_back(key);
        }
    }

    IndexingPoset poset{g, {}, {}};
    for (auto& [key, sys] : found) poset.systems.push_back(std::move(sys));
    std::sort(poset.systems.begin(), poset.systems.end(),
              [](const IndexingSystem& a, const IndexingSystem& b) {
                  if (a.size() != b.size()) return a.size() < b.size();
                  return a.pairs < b.pairs;
              });

    const int ns = static_cast<int>(poset.systems.size());
    for (int a = 0; a < ns; ++a)
        for (int b = 0; b < ns; ++b) {
            if (a == b || !poset.leq(a, b)) continue;
            bool cover = true;
            for (int c = 0; c < ns && cover; ++c)
                if (c != a && c != b && poset.leq(a, c) && poset.leq(c, b)) cover = false;
            if (cover) poset.hasse_edges.emplace_back(a, b);
        }
    return poset;
}

IndexingSystem builtin_system(const FiniteGroup& g, const std::string& name) {
    const SubgroupLattice& lat = full_lattice(g);
    const int n = static_cast<int>(lat.subgroups.size());
    const int top = n - 1;

    IndexingSystem o{g, {}};
    for (int h = 0; h < n; ++h) o.pairs.insert({h, h});
    if (name == "trivial") return o;
    if (name == "complete") {
        for (int k = 0; k < n; ++k)
            for (int h = 0; h < n; ++h)
                if (lat.contains_pair(k, h)) o.pairs.insert({k, h});
        return o;
    }
    if (name == "proper") {
        for (int k = 0; k < n; ++k)
            for (int h = 0; h < n; ++h)
                if (h != top && lat.contains_pair(k, h)) o.pairs.insert({k, h});
        return o;
    }
    throw Error("unknown builtin indexing system '" + name + "'");
}

namespace {

// Admissible H-level data for the oracle: exact subgroup indices K with
// (K, H) in the pair set.
std::vector<int> admissible_at(const IndexingSystem& o, const SubgroupLattice& lat, int h) {
    std::vector<int> ks;
    for (int k = 0; k < static_cast<int>(lat.subgroups.size()); ++k)
        if (lat.contains_pair(k, h) && o.contains(k, h)) ks.push_back(k);
    return ks;
}

bool stabilizers_admissible(const IndexingSystem& o, const SubgroupLattice& lat,
                            const GSet& t, int level_idx, std::string& offender) {
    for (int x = 0; x < t.size(); ++x) {
        int stab = lat.index_of(t.stabilizer(x));
        if (!o.contains(stab, level_idx)) {
            offender = "stabilizer " + lat.subgroup_label(stab) + " at level " +
                       lat.subgroup_label(level_idx);
            return false;
        }
    }
    return true;
}

// All equivariant maps orbit(H,A) -> orbit(H,C), as point maps. A map is
// determined by the image of the base coset; images are cosets xC with
// x^{-1} A x ⊆ C.
std::vector<std::vector<int>> equivariant_maps(const Subgroup& h, const Subgroup& a,
                                               const Subgroup& c) {
    const FiniteGroup& g = h.group;
    GSet src = orbit(h, a), dst = orbit(h, c);
    std::vector<int> areps = coset_reps(h, a);
    std::vector<int> creps = coset_reps(h, c);
    std::vector<int> coset_of(g.order(), -1);
    for (size_t i = 0; i < creps.size(); ++i)
        for (int b : c.members()) coset_of[g.mul(creps[i], b)] = static_cast<int>(i);

    std::vector<std::vector<int>> maps;
    std::vector<bool> taken(dst.size(), false);
    for (int x : h.members()) {
        std::uint64_t conj = g.conjugate_set(g.inv(x), a.mask);
        if ((conj & ~c.mask) != 0) continue;
        int img = coset_of[x];
        if (taken[img]) continue;  // same map
        taken[img] = true;
        std::vector<int> f(src.size());
        for (size_t i = 0; i < areps.size(); ++i) f[i] = coset_of[g.mul(areps[i], x)];
        maps.push_back(std::move(f));
    }
    return maps;
}

}  // namespace

OracleVerdict set_level_oracle(const IndexingSystem& o, int bound) {
    if (bound > 12) throw Error("set_level_oracle: bound must be at most 12");
    const FiniteGroup& g = o.group;
    const SubgroupLattice& lat = full_lattice(g);
    const int n = static_cast<int>(lat.subgroups.size());
    OracleVerdict v;
    std::string off;

    // trivial sets must be admissible everywhere
    for (int h = 0; h < n; ++h)
        if (!o.contains(h, h)) {
            v.ok = false;
            v.detail = "trivial set not admissible at level " + lat.subgroup_label(h);
            return v;
        }

    for (int h = 0; h < n; ++h) {
        Subgroup hs{g, lat.subgroups[h]};
        std::vector<int> adm = admissible_at(o, lat, h);

        for (int k : adm) {
            Subgroup ks{g, lat.subgroups[k]};
            int osize = hs.order() / ks.order();
            if (osize > bound) continue;
            GSet hk = orbit(hs, ks);

            // conjugation: the translated set is admissible at the
            // conjugate level
            for (int e = 0; e < g.order(); ++e) {
                int hc = lat.index_of(g.conjugate_set(e, hs.mask));
                int kc = lat.index_of(g.conjugate_set(e, ks.mask));
                if (!o.contains(kc, hc)) {
                    v.ok = false;
                    v.detail = "conjugate of admissible " + pair_text(lat, k, h) +
                               " not admissible: " + pair_text(lat, kc, hc);
                    return v;
                }
            }

            // restriction to every subgroup of H
            for (int l = 0; l < n; ++l) {
                if (!lat.contains_pair(l, h)) continue;
                GSet r = restrict_gset(hk, Subgroup{g, lat.subgroups[l]});
                if (!stabilizers_admissible(o, lat, r, l, off)) {
                    v.ok = false;
                    v.detail = "restriction of " + pair_text(lat, k, h) + " fails: " + off;
                    return v;
                }
            }

            // products with admissible orbits
            for (int k2 : adm) {
                Subgroup k2s{g, lat.subgroups[k2]};
                if (hs.order() / k2s.order() > bound) continue;
                GSet p = product(hk, orbit(hs, k2s));
                if (!stabilizers_admissible(o, lat, p, h, off)) {
                    v.ok = false;
                    v.detail = "product of " + pair_text(lat, k, h) + " and " +
                               pair_text(lat, k2, h) + " fails: " + off;
                    return v;
                }
            }

            // self-induction: induce admissible K-sets of size ≤ bound
            Subgroup ksub{g, lat.subgroups[k]};
            const SubgroupLattice& klat = g.lattice(ksub.mask);
            for (std::uint64_t lm : klat.subgroups) {
                int l = lat.index_of(lm);
                if (!o.contains(l, k)) continue;
                if (ksub.order() / Subgroup{g, lm}.order() > bound) continue;
                GSet ind = induce(hs, orbit(ksub, Subgroup{g, lm}));
                if (!stabilizers_admissible(o, lat, ind, h, off)) {
                    v.ok = false;
                    v.detail = "self-induction of " + pair_text(lat, l, k) + " along " +
                               pair_text(lat, k, h) + " fails: " + off;
                    return v;
                }
            }
        }

        // pullbacks of admissible orbits over admissible orbits
        for (int a : adm) {
            Subgroup as{g, lat.subgroups[a]};
            if (hs.order() / as.order() > bound) continue;
            for (int b : adm) {
                Subgroup bs{g, lat.subgroups[b]};
                if (hs.order() / bs.order() > bound) continue;
                GSet pa = orbit(hs, as), pb = orbit(hs, bs);
                GSet full = product(pa, pb);
                for (int c : adm) {
                    Subgroup cs{g, lat.subgroups[c]};
                    if (hs.order() / cs.order() > bound) continue;
                    auto fs = equivariant_maps(hs, as, cs);
                    auto gs = equivariant_maps(hs, bs, cs);
                    for (const auto& f : fs)
                        for (const auto& gg : gs) {
                            // pullback = pairs with equal images, an invariant
                            // subset of the product
                            for (int i = 0; i < pa.size(); ++i)
                                for (int j = 0; j < pb.size(); ++j) {
                                    if (f[i] != gg[j]) continue;
                                    int stab = lat.index_of(full.stabilizer(i * pb.size() + j));
                                    if (!o.contains(stab, h)) {
                                        v.ok = false;
                                        v.detail = "pullback of " + pair_text(lat, a, h) + " and " +
                                                   pair_text(lat, b, h) + " over " +
                                                   pair_text(lat, c, h) +
                                                   " has inadmissible stabilizer " +
                                                   lat.subgroup_label(stab);
                                        return v;
                                    }
                                }
                        }
                }
            }
        }
    }
    return v;
}

}  // namespace eqsm
