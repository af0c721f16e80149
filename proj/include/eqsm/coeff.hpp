#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eqsm/group.hpp"
#include "eqsm/gset.hpp"
#include "eqsm/matrix.hpp"

namespace eqsm {

/// An abelian-group-valued coefficient system on a level group L: a free
/// Z-module V(S) for every subgroup S of L, restriction matrices along the
/// canonical projections L/S -> L/T for every containment S ⊆ T, and
/// conjugation matrices for every (g, S). A matrix for an arbitrary map of
/// orbits is composed from these on demand (cs_map).
///
/// Index conventions: subgroups are indices into level.group.lattice(level),
/// group elements are ambient element indices.
struct CoefficientSystem {
    Subgroup level;
    std::vector<int> rank;                          // per subgroup index
    std::map<std::pair<int, int>, IntMatrix> res;   // (sub, super), sub != super
    std::map<std::pair<int, int>, IntMatrix> conj;  // (g, S): V(gSg^-1) -> V(S)

    const SubgroupLattice& lat() const { return level.group.lattice(level.mask); }

    IntMatrix res_mat(int sub, int super) const;  // identity when sub == super
    const IntMatrix& conj_mat(int g, int s) const;
    /// Inverse of conj_mat(g, s), via the cocycle identity (no inversion).
    const IntMatrix& conj_mat_inv(int g, int s) const;

    bool operator==(const CoefficientSystem& o) const {
        return level.mask == o.level.mask && rank == o.rank && res == o.res && conj == o.conj;
    }
};

/// M applied to the orbit map L/S -> L/T determined by the coset x·T
/// (requires x^-1 S x ⊆ T): a matrix V(T) -> V(S).
IntMatrix cs_map(const CoefficientSystem& m, int s, int t, int x);

struct MackeyFunctor {
    CoefficientSystem cs;
    std::map<std::pair<int, int>, IntMatrix> tr;  // (sub, super), sub != super

    IntMatrix tr_mat(int sub, int super) const;

    bool operator==(const MackeyFunctor& o) const { return cs == o.cs && tr == o.tr; }
};

/// Transfer along the orbit map L/S -> L/T determined by the coset x·T:
/// a matrix V(S) -> V(T).
IntMatrix tr_map(const MackeyFunctor& m, int s, int t, int x);

/// M evaluated on a finite L-set: one block per orbit, in orbit-scan order
/// (ascending base points). Block coordinates are V(exact stabilizer of the
/// base point).
struct OrbitBlock {
    int base_point;
    int stab;  // subgroup index
    int offset;
    int rank;
};
struct Evaluation {
    std::vector<OrbitBlock> blocks;
    int total = 0;
    std::vector<int> block_of_point;  // point -> block index
};

Evaluation evaluate(const CoefficientSystem& m, const GSet& t);

/// M applied to an equivariant point map u: A -> B (contravariantly):
/// a matrix Eval(B) -> Eval(A).
IntMatrix eval_map(const CoefficientSystem& m, const GSet& a, const GSet& b,
                   const std::vector<int>& u);

struct CsVerdict {
    bool ok = true;
    std::string detail;
};

/// Functoriality of res, the conjugation cocycle, inner triviality, and the
/// res/conj compatibility squares, checked exhaustively.
CsVerdict check_cs(const CoefficientSystem& m);

struct MackeyWitness {
    int ambient = -1;  // subgroup index U with K, H ≤ U
    int k = -1, h = -1;
    int x = -1;  // double coset representative
    IntMatrix lhs, rhs;
};

struct MackeyVerdict {
    bool ok = true;
    std::string stage;  // which check failed
    std::string detail;
    std::optional<MackeyWitness> witness;
};

/// check_cs plus transfer functoriality, transfer/conjugation naturality,
/// and the double coset formula
///   Res^U_K Tr^U_H = sum over x in K\U/H of Tr ∘ conj ∘ Res
/// for every triple K, H ≤ U of subgroups of the level.
MackeyVerdict check_mackey(const MackeyFunctor& m);

/// Bilinear multiplication on V(S): coefficient of basis k in e_i * e_j is
/// c[(i * rank + j) * rank + k].
struct Bilinear {
    int rank = 0;
    std::vector<long long> c;
    long long coeff(int i, int j, int k) const {
        return c[(static_cast<size_t>(i) * rank + j) * rank + k];
    }
};

struct GreenFunctor {
    MackeyFunctor mackey;
    std::map<int, Bilinear> mult;                 // per subgroup index
    std::map<int, std::vector<long long>> unit;   // per subgroup index

    bool operator==(const GreenFunctor& o) const;
};

struct GreenVerdict {
    bool ok = true;
    std::string stage;
    std::string detail;
};

/// Per-level commutative unital ring axioms, res and conj as unital ring
/// maps, and Frobenius reciprocity tr(x · res(y)) = tr(x) · y.
GreenVerdict green_check(const GreenFunctor& r);

/// Norm data on the full group: for each pair of subgroups (H, K), the map
/// nu[(H,K)]: M(G/H × G/K) -> M(G/K) in evaluation coordinates. Norms on
/// general sets follow by additivity; norms at intermediate levels are the
/// extracted transfers.
struct NormData {
    CoefficientSystem cs;  // level must be the full group
    std::map<std::pair<int, int>, IntMatrix> nu;

    bool operator==(const NormData& o) const { return cs == o.cs && nu == o.nu; }
};

/// Validates naturality of nu in the orbit variable and the unit condition,
/// then reads the transfers off the identity-coset components. The result
/// always passes check_mackey; a non-natural nu is rejected with an Error.
MackeyFunctor transfers_from_norms(const NormData& n);

/// Assembles nu from the transfers along the projections G/H × T -> T via
/// the double coset decomposition of each product orbit. Requires
/// check_mackey to pass. Inverse to transfers_from_norms on the nose.
NormData norms_from_transfers(const MackeyFunctor& m);

/// The Burnside Green functor of the level group: V(S) = free abelian group
/// on conjugacy classes of subgroups of S (canonical class order),
/// restriction = orbit restriction counts, transfer = induction,
/// multiplication = product decomposition.
GreenFunctor burnside_green(const Subgroup& level);
GreenFunctor burnside(const FiniteGroup& g);

/// Constant Green functor Z: rank one everywhere, transfer = index.
GreenFunctor constant_green(const Subgroup& level);

/// Fixed-point Mackey functor of a permutation module: V(S) = Z[X]^S with
/// basis the S-orbit indicator vectors.
MackeyFunctor fixed_point_mackey(const Subgroup& level, const GSet& x);

MackeyFunctor direct_sum(const MackeyFunctor& a, const MackeyFunctor& b);

/// Conjugates all structure matrices by a unimodular change of basis per
/// subgroup class: q and q_inv are indexed by class, q[c] * q_inv[c] = I.
/// Preserves validity of the Mackey structure.
MackeyFunctor base_change(const MackeyFunctor& m, const std::vector<IntMatrix>& q,
                          const std::vector<IntMatrix>& q_inv);

/// Restriction of a coefficient system to a lower level: values inherited
/// along M(G ×_H -).
CoefficientSystem restrict_cs(const CoefficientSystem& m, const Subgroup& h);
MackeyFunctor restrict_mackey(const MackeyFunctor& m, const Subgroup& h);

/// Coinduction: CoInd(M)(T) = M(T restricted to the lower level).
CoefficientSystem coinduce_cs(const CoefficientSystem& m, const Subgroup& up);

/// Induction: the pointwise left Kan extension along induction of orbits,
/// computed by explicit finite colimits over the comma category. Throws if
/// a colimit has torsion (outside the free-values model).
CoefficientSystem induce_cs(const CoefficientSystem& m, const Subgroup& up);

/// The box operation: (T □ M)(S) = M(T × L/S).
CoefficientSystem box(const GSet& t, const CoefficientSystem& m);

}  // namespace eqsm
