#include "eqsm/group.hpp"

#include <algorithm>
#include <bit>
#include <mutex>
#include <sstream>

namespace eqsm {

namespace {

int popcount64(std::uint64_t x) { return std::popcount(x); }

std::uint64_t bit(int i) { return std::uint64_t{1} << i; }

}  // namespace

bool set_lex_less(std::uint64_t a, std::uint64_t b) {
    if (a == b) return false;
    std::uint64_t diff = a ^ b;
    int d = std::countr_zero(diff);
    // sorted-list lexicographic order: the sets agree below d, so the one
    // holding d has the smaller next element -- unless the other set has
    // nothing from d on, making it a proper prefix and therefore smaller.
    if ((a >> d) & 1) return (b >> d) != 0;
    return (a >> d) == 0;
}

struct FiniteGroup::Data {
    int order = 0;
    int identity = 0;
    std::vector<int> mul;  // order x order, row-major
    std::vector<int> inv;
    std::string name;
    std::vector<std::vector<int>> perms;  // optional display info

    mutable std::mutex cache_mutex;
    mutable std::map<std::uint64_t, std::unique_ptr<SubgroupLattice>> lattice_cache;
};

int FiniteGroup::order() const { return data_ ? data_->order : 0; }
int FiniteGroup::identity() const { return data_->identity; }
int FiniteGroup::mul(int a, int b) const { return data_->mul[static_cast<size_t>(a) * data_->order + b]; }
int FiniteGroup::inv(int a) const { return data_->inv[a]; }
const std::string& FiniteGroup::name() const { return data_->name; }

std::uint64_t FiniteGroup::conjugate_set(int g, std::uint64_t mask) const {
    std::uint64_t out = 0;
    for (int e = 0; e < order(); ++e)
        if ((mask >> e) & 1) out |= bit(conjugate(g, e));
    return out;
}

Subgroup FiniteGroup::full_subgroup() const {
    std::uint64_t m = (order() == 64) ? ~std::uint64_t{0} : (bit(order()) - 1);
    return Subgroup{*this, m};
}

Subgroup FiniteGroup::trivial_subgroup() const { return Subgroup{*this, bit(identity())}; }

Subgroup FiniteGroup::subgroup(std::uint64_t mask) const {
    if (!is_subgroup_mask(mask)) throw Error("element set is not a subgroup");
    return Subgroup{*this, mask};
}

bool FiniteGroup::is_subgroup_mask(std::uint64_t mask) const {
    if (!((mask >> identity()) & 1)) return false;
    for (int a = 0; a < order(); ++a) {
        if (!((mask >> a) & 1)) continue;
        if (!((mask >> inv(a)) & 1)) return false;
        for (int b = 0; b < order(); ++b)
            if ((mask >> b) & 1)
                if (!((mask >> mul(a, b)) & 1)) return false;
    }
    return true;
}

std::uint64_t FiniteGroup::closure(std::uint64_t seed) const {
    std::uint64_t cur = seed | bit(identity());
    for (;;) {
        std::uint64_t next = cur;
        for (int a = 0; a < order(); ++a) {
            if (!((cur >> a) & 1)) continue;
            next |= bit(inv(a));
            for (int b = 0; b < order(); ++b)
                if ((cur >> b) & 1) next |= bit(mul(a, b));
        }
        if (next == cur) return cur;
        cur = next;
    }
}

std::vector<int> FiniteGroup::generators(std::uint64_t mask) const {
    std::vector<int> gens;
    std::uint64_t have = bit(identity());
    for (int e = 0; e < order(); ++e) {
        if (!((mask >> e) & 1) || ((have >> e) & 1)) continue;
        gens.push_back(e);
        have = closure(have | bit(e));
        if (have == mask) break;
    }
    return gens;
}

int Subgroup::order() const { return popcount64(mask); }

std::vector<int> Subgroup::members() const {
    std::vector<int> v;
    for (int e = 0; e < group.order(); ++e)
        if ((mask >> e) & 1) v.push_back(e);
    return v;
}

bool Subgroup::operator==(const Subgroup& o) const {
    return group.same_group(o.group) && mask == o.mask;
}

namespace {

// All subgroups of `level`: cyclic subgroups first, then closure under joins.
std::vector<std::uint64_t> enumerate_subgroups(const FiniteGroup& g, std::uint64_t level) {
    std::vector<std::uint64_t> cyclic;
    for (int e = 0; e < g.order(); ++e) {
        if (!((level >> e) & 1)) continue;
        std::uint64_t c = g.closure(bit(e));
        if (std::find(cyclic.begin(), cyclic.end(), c) == cyclic.end()) cyclic.push_back(c);
    }
    std::vector<std::uint64_t> all = cyclic;
    for (size_t i = 0; i < all.size(); ++i) {
        for (std::uint64_t c : cyclic) {
            std::uint64_t j = g.closure(all[i] | c);
            if ((j & ~level) == 0 && std::find(all.begin(), all.end(), j) == all.end())
                all.push_back(j);
        }
    }
    std::sort(all.begin(), all.end(), [](std::uint64_t a, std::uint64_t b) {
        int pa = popcount64(a), pb = popcount64(b);
        if (pa != pb) return pa < pb;
        return set_lex_less(a, b);
    });
    return all;
}

}  // namespace

const SubgroupLattice& FiniteGroup::lattice(std::uint64_t level_mask) const {
    std::lock_guard<std::mutex> lock(data_->cache_mutex);
    auto it = data_->lattice_cache.find(level_mask);
    if (it != data_->lattice_cache.end()) return *it->second;

    if (!is_subgroup_mask(level_mask)) throw Error("lattice level is not a subgroup");
    auto lat = std::make_unique<SubgroupLattice>();
    lat->level = Subgroup{*this, level_mask};
    lat->subgroups = enumerate_subgroups(*this, level_mask);

    const int n = static_cast<int>(lat->subgroups.size());
    lat->class_of.assign(n, -1);
    std::map<std::uint64_t, int> index;
    for (int i = 0; i < n; ++i) index[lat->subgroups[i]] = i;

    for (int i = 0; i < n; ++i) {
        if (lat->class_of[i] >= 0) continue;
        int cls = static_cast<int>(lat->classes.size());
        std::vector<int> members;
        for (int e = 0; e < order(); ++e) {
            if (!((level_mask >> e) & 1)) continue;
            std::uint64_t c = conjugate_set(e, lat->subgroups[i]);
            int idx = index.at(c);
            if (lat->class_of[idx] < 0) {
                lat->class_of[idx] = cls;
                members.push_back(idx);
            }
        }
        std::sort(members.begin(), members.end());
        lat->classes.push_back(members);
        lat->class_rep.push_back(members.front());
    }
    const SubgroupLattice& ref = *lat;
    data_->lattice_cache[level_mask] = std::move(lat);
    return ref;
}

int SubgroupLattice::index_of(std::uint64_t mask) const {
    auto it = std::lower_bound(subgroups.begin(), subgroups.end(), mask,
                               [&](std::uint64_t a, std::uint64_t b) {
                                   int pa = popcount64(a), pb = popcount64(b);
                                   if (pa != pb) return pa < pb;
                                   return set_lex_less(a, b);
                               });
    if (it == subgroups.end() || *it != mask) throw Error("subgroup not in lattice");
    return static_cast<int>(it - subgroups.begin());
}

int SubgroupLattice::order_of(int idx) const { return popcount64(subgroups[idx]); }

std::string SubgroupLattice::class_label(int class_idx) const {
    int ord = order_of(class_rep[class_idx]);
    int nth = 0;
    for (int c = 0; c <= class_idx; ++c)
        if (order_of(class_rep[c]) == ord) ++nth;
    return std::to_string(ord) + "." + std::to_string(nth);
}

std::string SubgroupLattice::subgroup_label(int subgroup_idx) const {
    int cls = class_of[subgroup_idx];
    const auto& mem = classes[cls];
    int k = static_cast<int>(std::find(mem.begin(), mem.end(), subgroup_idx) - mem.begin()) + 1;
    return class_label(cls) + "." + std::to_string(k);
}

int SubgroupLattice::find_class_label(const std::string& label) const {
    for (int c = 0; c < static_cast<int>(classes.size()); ++c)
        if (class_label(c) == label) return c;
    return -1;
}

int SubgroupLattice::find_subgroup_label(const std::string& label) const {
    // accept "o.i" as shorthand for the class representative "o.i.1"
    for (int i = 0; i < static_cast<int>(subgroups.size()); ++i)
        if (subgroup_label(i) == label) return i;
    int cls = find_class_label(label);
    if (cls >= 0) return class_rep[cls];
    return -1;
}

FiniteGroup make_group_from_table(std::vector<std::vector<int>> table, std::string name,
                                  std::vector<std::vector<int>> perms) {
    const int n = static_cast<int>(table.size());
    if (n == 0) throw Error("group table is empty");
    if (n > FiniteGroup::kMaxOrder)
        throw Error("group order " + std::to_string(n) + " exceeds the cap of 64");
    for (const auto& row : table) {
        if (static_cast<int>(row.size()) != n) throw Error("group table is not square");
        for (int v : row)
            if (v < 0 || v >= n) throw Error("group table entry out of range");
    }

    int identity = -1;
    for (int e = 0; e < n; ++e) {
        bool ok = true;
        for (int a = 0; a < n && ok; ++a) ok = table[e][a] == a && table[a][e] == a;
        if (ok) {
            identity = e;
            break;
        }
    }
    if (identity < 0) throw Error("group table has no two-sided identity");

    std::vector<int> inv(n, -1);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b)
            if (table[a][b] == identity && table[b][a] == identity) {
                inv[a] = b;
                break;
            }
        if (inv[a] < 0) throw Error("group table element " + std::to_string(a) + " has no inverse");
    }

    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (table[table[a][b]][c] != table[a][table[b][c]])
                    throw Error("group table is not associative at (" + std::to_string(a) + "," +
                                std::to_string(b) + "," + std::to_string(c) + ")");

    auto data = std::make_shared<FiniteGroup::Data>();
    data->order = n;
    data->identity = identity;
    data->mul.resize(static_cast<size_t>(n) * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) data->mul[static_cast<size_t>(a) * n + b] = table[a][b];
    data->inv = std::move(inv);
    data->name = std::move(name);
    data->perms = std::move(perms);
    return FiniteGroup(std::move(data));
}

namespace {

std::vector<int> compose_perm(const std::vector<int>& a, const std::vector<int>& b) {
    // (a ∘ b)(x) = a(b(x))
    std::vector<int> r(a.size());
    for (size_t x = 0; x < a.size(); ++x) r[x] = a[b[x]];
    return r;
}

FiniteGroup group_from_perm_generators(const std::vector<std::vector<int>>& gens,
                                       int points, std::string name) {
    std::vector<int> id(points);
    for (int i = 0; i < points; ++i) id[i] = i;

    std::vector<std::vector<int>> elems{id};
    std::map<std::vector<int>, int> index{{id, 0}};
    for (size_t i = 0; i < elems.size(); ++i) {
        for (const auto& g : gens) {
            std::vector<int> p = compose_perm(g, elems[i]);
            if (index.emplace(p, elems.size()).second) {
                elems.push_back(p);
                if (static_cast<int>(elems.size()) > FiniteGroup::kMaxOrder)
                    throw Error("generators produce more than 64 elements");
            }
        }
    }
    const int n = static_cast<int>(elems.size());
    std::vector<std::vector<int>> table(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) table[a][b] = index.at(compose_perm(elems[a], elems[b]));
    return make_group_from_table(std::move(table), std::move(name), std::move(elems));
}

std::vector<std::vector<int>> parse_cycles(const std::string& text, int& max_point) {
    // one generator: a product of cycles like (1 2)(3 4), composed right to left
    std::vector<std::vector<int>> cycles;
    size_t i = 0;
    while (i < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        if (text[i] != '(') throw Error("bad cycle notation near '" + text.substr(i) + "'");
        size_t close = text.find(')', i);
        if (close == std::string::npos) throw Error("unclosed cycle in '" + text + "'");
        std::istringstream is(text.substr(i + 1, close - i - 1));
        std::vector<int> cyc;
        std::string tok;
        while (is >> tok) {
            for (char& c : tok)
                if (c == ',') c = ' ';
            std::istringstream is2(tok);
            int p;
            while (is2 >> p) {
                if (p < 1) throw Error("cycle points are 1-based");
                cyc.push_back(p - 1);
                max_point = std::max(max_point, p);
            }
        }
        if (!cyc.empty()) cycles.push_back(cyc);
        i = close + 1;
    }
    return cycles;
}

FiniteGroup parse_perm_group(const std::string& body) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : body) {
        if (c == ';') {
            parts.push_back(cur);
            cur.clear();
        } else
            cur += c;
    }
    parts.push_back(cur);

    int max_point = 1;
    std::vector<std::vector<std::vector<int>>> gen_cycles;
    for (const auto& p : parts) {
        auto cycles = parse_cycles(p, max_point);
        if (!cycles.empty()) gen_cycles.push_back(cycles);
    }
    if (gen_cycles.empty()) throw Error("perm spec has no generators");
    if (max_point > FiniteGroup::kMaxOrder) throw Error("permutation degree exceeds 64");

    std::vector<std::vector<int>> gens;
    for (const auto& cycles : gen_cycles) {
        std::vector<int> perm(max_point);
        for (int i = 0; i < max_point; ++i) perm[i] = i;
        for (auto it = cycles.rbegin(); it != cycles.rend(); ++it) {
            std::vector<int> c(max_point);
            for (int i = 0; i < max_point; ++i) c[i] = i;
            for (size_t j = 0; j < it->size(); ++j) {
                int from = (*it)[j], to = (*it)[(j + 1) % it->size()];
                if (from >= max_point) throw Error("cycle point out of range");
                c[from] = to;
            }
            perm = compose_perm(c, perm);
        }
        gens.push_back(perm);
    }
    return group_from_perm_generators(gens, max_point, "perm group");
}

FiniteGroup make_cyclic(int n) {
    if (n < 1 || n > FiniteGroup::kMaxOrder) throw Error("cyclic group order out of range");
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    return make_group_from_table(std::move(t), "C" + std::to_string(n));
}

// D{2m}: elements r^i (indices 0..m-1) then r^i s (indices m..2m-1), with
// s r s^-1 = r^-1 under the function-composition convention.
FiniteGroup make_dihedral(int two_m) {
    if (two_m % 2 != 0 || two_m < 4 || two_m > FiniteGroup::kMaxOrder)
        throw Error("dihedral group order must be even, between 4 and 64");
    int m = two_m / 2;
    auto enc = [m](int i, int j) { return j * m + i; };
    std::vector<std::vector<int>> t(two_m, std::vector<int>(two_m));
    for (int i1 = 0; i1 < m; ++i1)
        for (int j1 = 0; j1 < 2; ++j1)
            for (int i2 = 0; i2 < m; ++i2)
                for (int j2 = 0; j2 < 2; ++j2) {
                    // (r^{i1} s^{j1})(r^{i2} s^{j2}) = r^{i1 + (-1)^{j1} i2} s^{j1+j2}
                    int i = ((i1 + (j1 ? m - i2 : i2)) % m + m) % m;
                    int j = j1 ^ j2;
                    t[enc(i1, j1)][enc(i2, j2)] = enc(i, j);
                }
    return make_group_from_table(std::move(t), "D" + std::to_string(two_m));
}

FiniteGroup make_symmetric(int n) {
    if (n < 1 || n > 4) throw Error("catalog symmetric groups go up to S4");
    std::vector<std::vector<int>> elems;
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    do {
        elems.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    // lexicographic one-line order; identity is index 0
    std::map<std::vector<int>, int> index;
    for (size_t i = 0; i < elems.size(); ++i) index[elems[i]] = static_cast<int>(i);
    const int ord = static_cast<int>(elems.size());
    std::vector<std::vector<int>> t(ord, std::vector<int>(ord));
    for (int a = 0; a < ord; ++a)
        for (int b = 0; b < ord; ++b) t[a][b] = index.at(compose_perm(elems[a], elems[b]));
    return make_group_from_table(std::move(t), "S" + std::to_string(n), std::move(elems));
}

FiniteGroup make_quaternion() {
    // order: 1, -1, i, -i, j, -j, k, -k
    auto mulq = [](int a, int b) {
        // decode: sign = a%2, unit = a/2 (0:1, 1:i, 2:j, 3:k)
        int sa = a & 1, ua = a >> 1, sb = b & 1, ub = b >> 1;
        static const int unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
        static const int sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
        int u = unit[ua][ub];
        int s = sa ^ sb ^ sign[ua][ub];
        return (u << 1) | s;
    };
    std::vector<std::vector<int>> t(8, std::vector<int>(8));
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) t[a][b] = mulq(a, b);
    return make_group_from_table(std::move(t), "Q8");
}

FiniteGroup parse_catalog(const std::string& name) {
    if (name == "Q8") return make_quaternion();
    if (name.size() >= 2 && (name[0] == 'C' || name[0] == 'D' || name[0] == 'S')) {
        int n = 0;
        for (size_t i = 1; i < name.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(name[i])))
                throw Error("unknown catalog group '" + name + "'");
            n = n * 10 + (name[i] - '0');
        }
        if (name[0] == 'C') return make_cyclic(n);
        if (name[0] == 'D') return make_dihedral(n);
        return make_symmetric(n);
    }
    throw Error("unknown catalog group '" + name + "'");
}

FiniteGroup parse_table_group(const std::string& body) {
    std::istringstream is(body);
    std::vector<int> nums;
    long long v;
    while (is >> v) {
        if (v < 0 || v >= FiniteGroup::kMaxOrder) throw Error("table entry out of range");
        nums.push_back(static_cast<int>(v));
    }
    // |G| rows of |G| entries: the count must be a perfect square
    int n = 0;
    while (static_cast<size_t>(n) * n < nums.size()) ++n;
    if (static_cast<size_t>(n) * n != nums.size() || n == 0)
        throw Error("table must contain |G| rows of |G| entries");
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a][b] = nums[static_cast<size_t>(a) * n + b];
    return make_group_from_table(std::move(t), "table group");
}

}  // namespace

FiniteGroup make_group(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw Error("group spec must be catalog:<name>, perm:<generators>, or table:<rows>");
    std::string kind = spec.substr(0, colon);
    std::string body = spec.substr(colon + 1);
    // trim
    while (!kind.empty() && std::isspace(static_cast<unsigned char>(kind.back()))) kind.pop_back();
    size_t b0 = 0;
    while (b0 < body.size() && std::isspace(static_cast<unsigned char>(body[b0]))) ++b0;
    body = body.substr(b0);
    while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.pop_back();

    if (kind == "catalog") return parse_catalog(body);
    if (kind == "perm") return parse_perm_group(body);
    if (kind == "table") return parse_table_group(body);
    throw Error("unknown group spec kind '" + kind + "'");
}

std::string FiniteGroup::element_name(int e) const {
    if (!data_->perms.empty()) {
        const auto& p = data_->perms[e];
        std::string s;
        std::vector<bool> seen(p.size(), false);
        for (size_t i = 0; i < p.size(); ++i) {
            if (seen[i] || p[i] == static_cast<int>(i)) continue;
            s += "(";
            size_t j = i;
            bool first = true;
            while (!seen[j]) {
                seen[j] = true;
                if (!first) s += " ";
                s += std::to_string(j + 1);
                first = false;
                j = static_cast<size_t>(p[j]);
            }
            s += ")";
        }
        if (s.empty()) s = "()";
        return s;
    }
    return "g" + std::to_string(e);
}

std::vector<SubgroupClass> subgroup_classes(const FiniteGroup& g) {
    const SubgroupLattice& lat = g.lattice(g.full_subgroup().mask);
    std::vector<SubgroupClass> out;
    for (size_t c = 0; c < lat.classes.size(); ++c) {
        SubgroupClass sc;
        sc.representative = Subgroup{g, lat.subgroups[lat.class_rep[c]]};
        for (int idx : lat.classes[c]) sc.all_conjugates.push_back(Subgroup{g, lat.subgroups[idx]});
        out.push_back(std::move(sc));
    }
    return out;
}

DoubleCosetDecomposition double_cosets(const Subgroup& k, const Subgroup& h) {
    if (!k.group.same_group(h.group)) throw Error("double_cosets: mismatched parent groups");
    const FiniteGroup& g = k.group;
    DoubleCosetDecomposition out{k, h, {}, {}};
    std::uint64_t seen = 0;
    for (int x = 0; x < g.order(); ++x) {
        if ((seen >> x) & 1) continue;
        out.reps.push_back(x);
        for (int a = 0; a < g.order(); ++a) {
            if (!k.contains(a)) continue;
            int ax = g.mul(a, x);
            for (int b = 0; b < g.order(); ++b)
                if (h.contains(b)) seen |= std::uint64_t{1} << g.mul(ax, b);
        }
        std::uint64_t stab = k.mask & g.conjugate_set(x, h.mask);
        out.stabilizers.push_back(Subgroup{g, stab});
    }
    return out;
}

std::uint64_t normalizer_mask(const Subgroup& h) {
    const FiniteGroup& g = h.group;
    std::uint64_t n = 0;
    for (int e = 0; e < g.order(); ++e)
        if (g.conjugate_set(e, h.mask) == h.mask) n |= std::uint64_t{1} << e;
    return n;
}

std::vector<int> coset_reps(const Subgroup& ambient, const Subgroup& k) {
    if (!ambient.group.same_group(k.group)) throw Error("coset_reps: mismatched groups");
    if ((k.mask & ~ambient.mask) != 0) throw Error("coset_reps: K is not contained in the ambient subgroup");
    const FiniteGroup& g = ambient.group;
    std::vector<int> reps;
    std::uint64_t seen = 0;
    for (int x = 0; x < g.order(); ++x) {
        if (!ambient.contains(x) || ((seen >> x) & 1)) continue;
        reps.push_back(x);
        for (int b = 0; b < g.order(); ++b)
            if (k.contains(b)) seen |= std::uint64_t{1} << g.mul(x, b);
    }
    return reps;
}

QuotientGroup weyl_group(const Subgroup& h) {
    const FiniteGroup& g = h.group;
    Subgroup n{g, normalizer_mask(h)};
    std::vector<int> reps = coset_reps(n, h);
    const int q = static_cast<int>(reps.size());

    // coset index lookup: element -> its coset's position in reps
    std::vector<int> coset_of(g.order(), -1);
    for (int i = 0; i < q; ++i)
        for (int b = 0; b < g.order(); ++b)
            if (h.contains(b)) coset_of[g.mul(reps[i], b)] = i;

    std::vector<std::vector<int>> t(q, std::vector<int>(q));
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) t[i][j] = coset_of[g.mul(reps[i], reps[j])];

    QuotientGroup out{make_group_from_table(std::move(t), "W(" + g.name() + ")"), {}};
    out.projection.assign(g.order(), -1);
    for (int e = 0; e < g.order(); ++e)
        if (n.contains(e)) out.projection[e] = coset_of[e];
    return out;
}

}  // namespace eqsm
