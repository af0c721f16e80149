#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "eqsm/group.hpp"

namespace eqsm {

/// An indexing system, stored as its set of admissible orbit pairs (K, H)
/// with K ≤ H, both exact subgroups (indices into the full-group lattice).
/// Reflexive pairs are always present in a valid system.
struct IndexingSystem {
    FiniteGroup group;
    std::set<std::pair<int, int>> pairs;  // (sub index, super index)

    bool contains(int k, int h) const { return pairs.count({k, h}) != 0; }
    /// Number of non-reflexive pairs.
    int size() const;
    bool operator==(const IndexingSystem& o) const { return pairs == o.pairs; }
    bool operator<(const IndexingSystem& o) const { return pairs < o.pairs; }
};

struct AxiomVerdict {
    bool ok = true;
    char clause = ' ';        // 'a'..'d' when failed
    std::string detail;       // human-readable witness
    std::vector<int> witness; // offending subgroup indices
};

struct OracleVerdict {
    bool ok = true;
    std::string detail;
};

/// Simultaneous-conjugation orbits of all subgroup pairs (K ≤ H) of G,
/// non-reflexive ones only, in canonical order. The unit of the enumeration
/// search and of pair-level reporting.
struct PairOrbits {
    FiniteGroup group;
    std::vector<std::vector<std::pair<int, int>>> orbits;  // each sorted
    std::vector<int> orbit_of_pair;  // indexed by k * nsub + h, -1 if reflexive/absent
    int orbit_index(int k, int h) const;
};

PairOrbits pair_orbits(const FiniteGroup& g);

/// Checks the indexing-system axioms:
///   (a) reflexivity, (b) conjugation closure, (c) restriction closure,
///   (d) composition (self-induction) closure.
AxiomVerdict check_axioms(const IndexingSystem& o);

/// Least indexing system containing the seed pairs (a closure operator:
/// extensive, monotone, idempotent).
IndexingSystem generate(const FiniteGroup& g, const std::set<std::pair<int, int>>& seed);

struct IndexingPoset {
    FiniteGroup group;
    std::vector<IndexingSystem> systems;             // canonical order
    std::vector<std::pair<int, int>> hasse_edges;    // (smaller, larger) cover pairs
    bool leq(int a, int b) const;                    // inclusion
};

/// All indexing systems of G, via closure-generated search over conjugation
/// orbits of pairs. Throws if there are more than 30 orbits.
IndexingPoset enumerate_systems(const FiniteGroup& g);

/// "trivial" (no norms), "complete" (all norms), or "proper" (every norm
/// strictly below the top group).
IndexingSystem builtin_system(const FiniteGroup& g, const std::string& name);

/// Brute-force verification on actual H-sets of size ≤ bound: restriction
/// and conjugation of admissibles, products, pullbacks, and self-induction
/// all land in the admissible class. Independent of check_axioms.
OracleVerdict set_level_oracle(const IndexingSystem& o, int bound);

}  // namespace eqsm
