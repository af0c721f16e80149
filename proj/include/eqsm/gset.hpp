#pragma once

#include <cstdint>
#include <vector>

#include "eqsm/group.hpp"

namespace eqsm {

/// A finite left H-set for a subgroup H of some ambient group. Points are
/// 0..size-1; the action table has one row per member of H (ascending
/// element order). Immutable once built.
class GSet {
public:
    /// Builds from explicit rows: rows[i][x] = (i-th member of level) . x.
    /// Checks the identity row exactly and the mixed associativity
    /// act(g, act(h, x)) == act(gh, x) on a generating set of the level,
    /// which implies it for the whole level.
    GSet(Subgroup level, int size, std::vector<std::vector<int>> rows);

    const Subgroup& level() const { return level_; }
    int size() const { return size_; }

    int act(int g, int x) const;  // g must be a member of level

    /// Stabilizer of point x as a mask.
    std::uint64_t stabilizer(int x) const;

    bool same_level(const GSet& o) const {
        return level_.group.same_group(o.level_.group) && level_.mask == o.level_.mask;
    }

private:
    Subgroup level_;
    int size_;
    std::vector<int> row_of_;              // group element -> row index (-1 outside level)
    std::vector<std::vector<int>> rows_;
};

/// Orbit decomposition: multiset of conjugacy classes of stabilizers, the
/// normal form of a finite H-set. Entries are (canonical class-representative
/// mask, multiplicity), sorted with larger stabilizers (smaller orbits) first.
struct OrbitDecomposition {
    Subgroup level;
    std::vector<std::pair<std::uint64_t, int>> entries;

    bool operator==(const OrbitDecomposition& o) const {
        return level.mask == o.level.mask && entries == o.entries;
    }
    int total_size() const;
    std::string to_string() const;
};

/// The coset space level/K with left translation action.
GSet orbit(const Subgroup& level, const Subgroup& k);

GSet empty_gset(const Subgroup& level);

/// One-point H-set.
GSet point_gset(const Subgroup& level);

OrbitDecomposition decompose(const GSet& t);

/// Canonical H-conjugate representative of a subgroup mask of the level.
std::uint64_t canonical_stabilizer(const Subgroup& level, std::uint64_t stab);

GSet restrict_gset(const GSet& t, const Subgroup& k);

/// H ×_K T for T a K-set, K ≤ H.
GSet induce(const Subgroup& h, const GSet& t);

/// Map_K(H, T) with (g.f)(h) = f(hg), for T a K-set, K ≤ H.
/// Enforces |T|^[H:K] ≤ 10^6.
GSet coinduce(const Subgroup& h, const GSet& t);

GSet product(const GSet& s, const GSet& t);

GSet disjoint_union(const GSet& s, const GSet& t);

/// Points fixed by every member of K ≤ level.
std::vector<int> fixed_points(const GSet& t, const Subgroup& k);

/// Orbit decomposition is a complete isomorphism invariant for finite H-sets.
bool is_isomorphic(const GSet& s, const GSet& t);

/// Builds the H-set with the given multiset of orbits (stabilizer masks may
/// be any subgroups of the level; each contributes orbit(level, stab)).
GSet from_orbits(const Subgroup& level, const std::vector<std::pair<std::uint64_t, int>>& orbits);

}  // namespace eqsm
