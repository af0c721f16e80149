#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "eqsm/matrix.hpp"

namespace eqsm {

struct Subgroup;
struct SubgroupLattice;

/// Immutable finite group; copies share the underlying data. Construct via
/// make_group or the named factories. All searches in this project are
/// exhaustive, hence the order cap of 64.
class FiniteGroup {
public:
    static constexpr int kMaxOrder = 64;

    FiniteGroup() = default;

    int order() const;
    int identity() const;
    int mul(int a, int b) const;  // composition: b first, then a
    int inv(int a) const;
    const std::string& name() const;

    int conjugate(int g, int a) const { return mul(mul(g, a), inv(g)); }
    std::uint64_t conjugate_set(int g, std::uint64_t mask) const;

    Subgroup full_subgroup() const;
    Subgroup trivial_subgroup() const;
    Subgroup subgroup(std::uint64_t mask) const;  // validates

    bool is_subgroup_mask(std::uint64_t mask) const;
    std::uint64_t closure(std::uint64_t seed) const;

    /// Minimal generators of `mask`, chosen greedily by element index; used
    /// for canonical generator lists in file formats and action checks.
    std::vector<int> generators(std::uint64_t mask) const;

    /// Lattice of subgroups of `level_mask`, classes taken under conjugation
    /// by level elements. Cached per (group, level).
    const SubgroupLattice& lattice(std::uint64_t level_mask) const;

    bool same_group(const FiniteGroup& o) const { return data_ == o.data_; }

    /// Element display (permutation cycles for permutation-backed groups,
    /// bare indices otherwise).
    std::string element_name(int e) const;

private:
    struct Data;
    std::shared_ptr<Data> data_;
    explicit FiniteGroup(std::shared_ptr<Data> d) : data_(std::move(d)) {}

    friend FiniteGroup make_group_from_table(std::vector<std::vector<int>> table,
                                             std::string name,
                                             std::vector<std::vector<int>> perms);
    friend struct FiniteGroupDataAccess;
};

/// A subgroup, stored as a bit set of element indices of its parent group.
/// Holds shared ownership of the parent, so subgroups never dangle.
struct Subgroup {
    FiniteGroup group;
    std::uint64_t mask = 0;

    int order() const;
    bool contains(int e) const { return (mask >> e) & 1; }
    std::vector<int> members() const;  // ascending element indices
    bool operator==(const Subgroup& o) const;
    bool operator!=(const Subgroup& o) const { return !(*this == o); }
};

/// Compares element-index sets as sorted lists (the order used for all
/// "canonical member set" tie-breaks).
bool set_lex_less(std::uint64_t a, std::uint64_t b);

struct SubgroupClass {
    Subgroup representative;               // set-lex least member of the class
    std::vector<Subgroup> all_conjugates;  // set-lex ascending
};

/// Subgroups of `level` together with their conjugacy classes under `level`,
/// in the canonical order used everywhere: subgroups ascending by
/// (order, set-lex), classes ascending by (order, set-lex of representative).
struct SubgroupLattice {
    Subgroup level;
    std::vector<std::uint64_t> subgroups;   // all subgroups of level
    std::vector<int> class_of;              // subgroup index -> class index
    std::vector<std::vector<int>> classes;  // class -> member subgroup indices
    std::vector<int> class_rep;             // class -> subgroup index of rep

    int index_of(std::uint64_t mask) const;  // throws if absent
    int order_of(int idx) const;
    bool contains_pair(int sub, int super) const {
        return (subgroups[sub] & ~subgroups[super]) == 0;
    }
    /// "order.index" label of a class, e.g. "2.1" for the first class of
    /// order-2 subgroups.
    std::string class_label(int class_idx) const;
    /// "order.index.k" label of a specific subgroup (k = position in class).
    std::string subgroup_label(int subgroup_idx) const;
    int find_class_label(const std::string& label) const;     // -1 if absent
    int find_subgroup_label(const std::string& label) const;  // -1 if absent
};

struct DoubleCosetDecomposition {
    Subgroup k, h;
    std::vector<int> reps;              // minimal element index per double coset
    std::vector<Subgroup> stabilizers;  // K ∩ x H x^-1 per rep
};

/// Quotient N_G(H)/H with the projection from normalizer elements to
/// quotient element indices (-1 outside the normalizer).
struct QuotientGroup {
    FiniteGroup group;
    std::vector<int> projection;
};

/// Builds and validates a group from an explicit multiplication table
/// (table[a][b] = a*b). `perms` optionally records a permutation realization
/// of each element, used only for display.
FiniteGroup make_group_from_table(std::vector<std::vector<int>> table, std::string name,
                                  std::vector<std::vector<int>> perms = {});

/// Parses the group description format:
///   catalog:<name>   with name in Cn (n ≤ 64), Dm (dihedral, m even ≤ 64),
///                    Sn (n ≤ 4), Q8
///   perm:<cycles>    semicolon-separated generators in cycle notation,
///                    points 1-based, cycles composed right to left
///   table:<rows>     |G| whitespace-separated rows of 0-based indices
FiniteGroup make_group(const std::string& spec);

std::vector<SubgroupClass> subgroup_classes(const FiniteGroup& g);

DoubleCosetDecomposition double_cosets(const Subgroup& k, const Subgroup& h);

QuotientGroup weyl_group(const Subgroup& h);

std::uint64_t normalizer_mask(const Subgroup& h);

/// Left cosets xK of `k` inside `ambient`, each represented by its minimal
/// element, ascending. Requires k ⊆ ambient.
std::vector<int> coset_reps(const Subgroup& ambient, const Subgroup& k);

}  // namespace eqsm
