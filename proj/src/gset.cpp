#include "eqsm/gset.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace eqsm {

namespace {

constexpr long long kCoinduceCap = 1000000;

void require_contained(const Subgroup& small, const Subgroup& big, const char* what) {
    if (!small.group.same_group(big.group)) throw Error(std::string(what) + ": mismatched groups");
    if ((small.mask & ~big.mask) != 0) throw Error(std::string(what) + ": not a contained subgroup");
}

}  // namespace

GSet::GSet(Subgroup level, int size, std::vector<std::vector<int>> rows)
    : level_(std::move(level)), size_(size), rows_(std::move(rows)) {
    const FiniteGroup& g = level_.group;
    std::vector<int> members = level_.members();
    if (rows_.size() != members.size()) throw Error("GSet: one action row per level member required");
    row_of_.assign(g.order(), -1);
    for (size_t i = 0; i < members.size(); ++i) row_of_[members[i]] = static_cast<int>(i);

    for (const auto& row : rows_) {
        if (static_cast<int>(row.size()) != size_) throw Error("GSet: bad action row length");
        std::vector<bool> seen(size_, false);
        for (int v : row) {
            if (v < 0 || v >= size_ || seen[v]) throw Error("GSet: action row is not a permutation");
            seen[v] = true;
        }
    }
    // identity row
    int id_row = row_of_[g.identity()];
    for (int x = 0; x < size_; ++x)
        if (rows_[id_row][x] != x) throw Error("GSet: identity does not act as identity");
    // act(g, act(h, x)) == act(gh, x) for generators g and all h: by
    // induction on words this gives the full action identity.
    for (int gen : g.generators(level_.mask))
        for (int h : members)
            for (int x = 0; x < size_; ++x)
                if (act(gen, act(h, x)) != act(g.mul(gen, h), x))
                    throw Error("GSet: action table is not compatible with multiplication");
}

int GSet::act(int g, int x) const {
    int r = row_of_[g];
    if (r < 0) throw Error("GSet::act: element outside the level subgroup");
    return rows_[r][x];
}

std::uint64_t GSet::stabilizer(int x) const {
    std::uint64_t s = 0;
    for (int m : level_.members())
        if (act(m, x) == x) s |= std::uint64_t{1} << m;
    return s;
}

int OrbitDecomposition::total_size() const {
    int n = 0;
    int level_order = level.order();
    for (const auto& [stab, mult] : entries) {
        int so = 0;
        for (int i = 0; i < 64; ++i) so += static_cast<int>((stab >> i) & 1);
        n += mult * (level_order / so);
    }
    return n;
}

std::string OrbitDecomposition::to_string() const {
    const SubgroupLattice& lat = level.group.lattice(level.mask);
    std::ostringstream os;
    bool first = true;
    for (const auto& [stab, mult] : entries) {
        if (!first) os << " + ";
        first = false;
        os << mult << "*[" << lat.class_label(lat.class_of[lat.index_of(stab)]) << "]";
    }
    if (first) os << "(empty)";
    return os.str();
}

GSet orbit(const Subgroup& level, const Subgroup& k) {
    require_contained(k, level, "orbit");
    const FiniteGroup& g = level.group;
    std::vector<int> reps = coset_reps(level, k);
    const int n = static_cast<int>(reps.size());

    std::vector<int> coset_of(g.order(), -1);
    for (int i = 0; i < n; ++i)
        for (int b : k.members()) coset_of[g.mul(reps[i], b)] = i;

    std::vector<std::vector<int>> rows;
    for (int m : level.members()) {
        std::vector<int> row(n);
        for (int i = 0; i < n; ++i) row[i] = coset_of[g.mul(m, reps[i])];
        rows.push_back(std::move(row));
    }
    return GSet(level, n, std::move(rows));
}

GSet empty_gset(const Subgroup& level) {
    std::vector<std::vector<int>> rows(level.members().size());
    return GSet(level, 0, std::move(rows));
}

GSet point_gset(const Subgroup& level) {
    std::vector<std::vector<int>> rows(level.members().size(), std::vector<int>{0});
    return GSet(level, 1, std::move(rows));
}

std::uint64_t canonical_stabilizer(const Subgroup& level, std::uint64_t stab) {
    const FiniteGroup& g = level.group;
    std::uint64_t best = stab;
    for (int m : level.members()) {
        std::uint64_t c = g.conjugate_set(m, stab);
        if (set_lex_less(c, best)) best = c;
    }
    return best;
}

OrbitDecomposition decompose(const GSet& t) {
    const Subgroup& level = t.level();
    std::map<std::uint64_t, int> counts;  // canonical stabilizer -> multiplicity
    std::vector<bool> seen(t.size(), false);
    for (int x = 0; x < t.size(); ++x) {
        if (seen[x]) continue;
        for (int m : level.members()) seen[t.act(m, x)] = true;
        counts[canonical_stabilizer(level, t.stabilizer(x))]++;
    }
    OrbitDecomposition d{level, {}};
    for (const auto& [stab, mult] : counts) d.entries.emplace_back(stab, mult);
    // larger stabilizers (smaller orbits) first; set-lex breaks ties
    std::sort(d.entries.begin(), d.entries.end(), [](const auto& a, const auto& b) {
        int oa = 0, ob = 0;
        for (int i = 0; i < 64; ++i) {
            oa += static_cast<int>((a.first >> i) & 1);
            ob += static_cast<int>((b.first >> i) & 1);
        }
        if (oa != ob) return oa > ob;
        return set_lex_less(a.first, b.first);
    });
    return d;
}

GSet restrict_gset(const GSet& t, const Subgroup& k) {
    require_contained(k, t.level(), "restrict");
    std::vector<std::vector<int>> rows;
    for (int m : k.members()) {
        std::vector<int> row(t.size());
        for (int x = 0; x < t.size(); ++x) row[x] = t.act(m, x);
        rows.push_back(std::move(row));
    }
    return GSet(k, t.size(), std::move(rows));
}

GSet induce(const Subgroup& h, const GSet& t) {
    require_contained(t.level(), h, "induce");
    const Subgroup& k = t.level();
    const FiniteGroup& g = h.group;
    std::vector<int> reps = coset_reps(h, k);
    const int nr = static_cast<int>(reps.size());
    const int n = nr * t.size();

    std::vector<int> coset_of(g.order(), -1);
    for (int i = 0; i < nr; ++i)
        for (int b : k.members()) coset_of[g.mul(reps[i], b)] = i;

    // point (i, x) = class of (reps[i], x); m . (i, x) = (j, k.x) where
    // m*reps[i] = reps[j]*k
    auto enc = [&](int i, int x) { return i * t.size() + x; };
    std::vector<std::vector<int>> rows;
    for (int m : h.members()) {
        std::vector<int> row(n);
        for (int i = 0; i < nr; ++i) {
            int mi = g.mul(m, reps[i]);
            int j = coset_of[mi];
            int kk = g.mul(g.inv(reps[j]), mi);
            for (int x = 0; x < t.size(); ++x) row[enc(i, x)] = enc(j, t.act(kk, x));
        }
        rows.push_back(std::move(row));
    }
    return GSet(h, n, std::move(rows));
}

GSet coinduce(const Subgroup& h, const GSet& t) {
    require_contained(t.level(), h, "coinduce");
    const Subgroup& k = t.level();
    const FiniteGroup& g = h.group;

    // f: H -> T with f(kh) = k.f(h) is determined by its values on right
    // coset representatives; pick the inverses of the left coset reps so
    // that K r_i^{-1} runs over K\H.
    std::vector<int> reps = coset_reps(h, k);
    const int nr = static_cast<int>(reps.size());

    long long total = 1;
    for (int i = 0; i < nr; ++i) {
        total *= t.size();
        if (total > kCoinduceCap) throw Error("coinduce: function space exceeds the 10^6 cap");
        if (total == 0) break;
    }
    const int n = static_cast<int>(total);

    // right reps: w_i = reps[i]^{-1}, so H = union K w_i
    std::vector<int> w(nr);
    for (int i = 0; i < nr; ++i) w[i] = g.inv(reps[i]);
    // right coset lookup: for any element a, a = k w_j
    std::vector<int> rc_of(g.order(), -1), rc_k(g.order(), -1);
    for (int j = 0; j < nr; ++j)
        for (int b : k.members()) {
            int a = g.mul(b, w[j]);
            rc_of[a] = j;
            rc_k[a] = b;
        }

    // tuple codes: point = sum t_i * size^i with t_i = f(w_i)
    auto digit = [&](int code, int i) {
        for (int s = 0; s < i; ++s) code /= t.size();
        return code % t.size();
    };

    std::vector<std::vector<int>> rows;
    for (int m : h.members()) {
        std::vector<int> row(n);
        for (int code = 0; code < n; ++code) {
            // (m.f)(w_i) = f(w_i m) = k_{ij} . f(w_j) where w_i m = k_{ij} w_j
            int out = 0, pow = 1;
            for (int i = 0; i < nr; ++i) {
                int a = g.mul(w[i], m);
                int j = rc_of[a];
                int kk = rc_k[a];
                out += t.act(kk, digit(code, j)) * pow;
                pow *= t.size();
            }
            row[code] = out;
        }
        rows.push_back(std::move(row));
    }
    return GSet(h, n, std::move(rows));
}

GSet product(const GSet& s, const GSet& t) {
    if (!s.same_level(t)) throw Error("product: level mismatch");
    const int n = s.size() * t.size();
    auto enc = [&](int x, int y) { return x * t.size() + y; };
    std::vector<std::vector<int>> rows;
    for (int m : s.level().members()) {
        std::vector<int> row(n);
        for (int x = 0; x < s.size(); ++x)
            for (int y = 0; y < t.size(); ++y) row[enc(x, y)] = enc(s.act(m, x), t.act(m, y));
        rows.push_back(std::move(row));
    }
    return GSet(s.level(), n, std::move(rows));
}

GSet disjoint_union(const GSet& s, const GSet& t) {
    if (!s.same_level(t)) throw Error("disjoint_union: level mismatch");
    const int n = s.size() + t.size();
    std::vector<std::vector<int>> rows;
    for (int m : s.level().members()) {
        std::vector<int> row(n);
        for (int x = 0; x < s.size(); ++x) row[x] = s.act(m, x);
        for (int y = 0; y < t.size(); ++y) row[s.size() + y] = s.size() + t.act(m, y);
        rows.push_back(std::move(row));
    }
    return GSet(s.level(), n, std::move(rows));
}

std::vector<int> fixed_points(const GSet& t, const Subgroup& k) {
    require_contained(k, t.level(), "fixed_points");
    std::vector<int> out;
    for (int x = 0; x < t.size(); ++x) {
        bool fixed = true;
        for (int m : k.members())
            if (t.act(m, x) != x) {
                fixed = false;
                break;
            }
        if (fixed) out.push_back(x);
    }
    return out;
}

bool is_isomorphic(const GSet& s, const GSet& t) {
    if (!s.same_level(t)) throw Error("is_isomorphic: level mismatch");
    return decompose(s) == decompose(t);
}

GSet from_orbits(const Subgroup& level,
                 const std::vector<std::pair<std::uint64_t, int>>& orbits) {
    GSet acc = empty_gset(level);
    for (const auto& [stab, mult] : orbits) {
        GSet o = orbit(level, level.group.subgroup(stab));
        for (int i = 0; i < mult; ++i) acc = disjoint_union(acc, o);
    }
    return acc;
}

}  // namespace eqsm
