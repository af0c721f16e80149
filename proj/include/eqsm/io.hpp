#pragma once

#include <optional>
#include <string>

#include "eqsm/coeff.hpp"
#include "eqsm/group.hpp"
#include "eqsm/gset.hpp"
#include "eqsm/indexing.hpp"
#include "eqsm/norm_closure.hpp"

namespace eqsm {

/// GSet text format. Canonical (emitted) form lists the orbit multiset:
///   level=2.1.1
///   orbits: 1*[2.1/2.1] + 2*[2.1/1.1]
/// Orbit labels are [top/stab] in the level's own lattice. An explicit
/// action table is accepted instead of `orbits:`:
///   points: 3
///   action:
///   0: 0 1 2
///   1: 0 2 1
/// with one row per level member, ascending element index.
GSet parse_gset(const FiniteGroup& g, const std::string& text);
std::string emit_gset(const GSet& t);

/// Mackey / Green functor JSON at the full-group level. Keys:
///   group   group spec string
///   levels  subgroup-class label -> rank
///   res,tr  "K<K'" (subgroup labels, K proper in K') -> row-major matrix
///   conj    "g:K" (generator element index, subgroup label) -> matrix
///   mult    subgroup label -> flat rank^3 structure constants (optional)
///   unit    subgroup label -> vector (optional, required with mult)
/// conj is stored for the canonical generator list only; the remaining
/// conjugation matrices are rebuilt through the cocycle rule.
struct MackeyFile {
    std::string group_spec;
    FiniteGroup group;
    MackeyFunctor mackey;
    std::optional<GreenFunctor> green;
};

MackeyFile parse_mackey_json(const std::string& text);
std::string emit_mackey_json(const std::string& group_spec, const MackeyFunctor& m,
                             const GreenFunctor* green);

/// Indexing pairs text format: one admissible orbit per line, `K < H` with
/// subgroup-class labels; reflexive pairs are implied and not listed.
/// Lines starting with '#' are comments.
std::set<std::pair<int, int>> parse_pairs(const FiniteGroup& g, const std::string& text);
std::string emit_pairs(const IndexingSystem& o);

/// Family spec: `proper` | `trivial` | `all` | comma-separated class labels
/// (closed under subgroups and conjugation; `closure_added` reports how many
/// subgroups that closure contributed).
SubgroupFamily parse_family(const FiniteGroup& g, const std::string& spec,
                            int* closure_added = nullptr);

}  // namespace eqsm
