#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "eqsm/group.hpp"
#include "eqsm/indexing.hpp"

namespace eqsm {

/// A family of subgroups closed under passage to subgroups and under
/// conjugation. Models the isotropy of a nullification: the acyclic class
/// at level H is "H-sets with all stabilizers in the family".
struct SubgroupFamily {
    FiniteGroup group;
    std::set<std::uint64_t> members;

    bool contains(std::uint64_t mask) const { return members.count(mask) != 0; }
};

/// Builds a family from explicit members, closing under subgroups and
/// conjugation. `added` reports how many subgroups closure contributed.
SubgroupFamily make_family(const FiniteGroup& g, const std::vector<std::uint64_t>& members,
                           int* added = nullptr);

/// "proper" (all proper subgroups), "trivial" ({e}), "all".
SubgroupFamily builtin_family(const FiniteGroup& g, const std::string& name);

/// F ∩ Sub(H).
SubgroupFamily level_family(const SubgroupFamily& f, const Subgroup& h);

struct NormWitness {
    int generator;   // subgroup index L of the offending generator orbit K/L
    int stabilizer;  // subgroup index of the offending stabilizer of the norm
};

struct NormVerdict {
    bool ok = true;
    std::optional<NormWitness> witness;
};

/// Does the norm from K to H carry the acyclic class into itself?
/// True iff for every L in F ∩ Sub(K), every stabilizer of
/// coinduce(H, orbit(K, L)) lies in F ∩ Sub(H).
NormVerdict norm_preserves(const Subgroup& k, const Subgroup& h, const SubgroupFamily& f);

struct ClosureReport {
    FiniteGroup group;
    SubgroupFamily family;
    std::set<std::pair<int, int>> pass_pairs;  // subgroup-index pairs, incl. reflexive
    bool is_indexing_system = false;
    std::optional<IndexingSystem> maximal_system;
    // (pair, witness) for each failing pair
    std::vector<std::pair<std::pair<int, int>, NormWitness>> witnesses;
};

/// Tests every subgroup pair, reports which norms preserve the acyclic
/// class, and whether the passing set is itself an indexing system (then it
/// is the unique maximal preserved one).
ClosureReport max_preserved(const SubgroupFamily& f);

/// Optional exhaustive refinement when pass_pairs is not an indexing system:
/// the maximal enumerated systems contained in pass_pairs. Requires the
/// group to be within the enumeration bound.
std::vector<IndexingSystem> maximal_subsystems(const ClosureReport& report);

}  // namespace eqsm
