#include "eqsm/coeff.hpp"

#include <algorithm>
#include <sstream>

namespace eqsm {

namespace {

std::vector<long long> apply_mat(const IntMatrix& m, const std::vector<long long>& v) {
    if (m.cols() != static_cast<int>(v.size())) throw Error("apply_mat: dimension mismatch");
    std::vector<long long> r(m.rows(), 0);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r[i] += m.at(i, j) * v[j];
    return r;
}

std::vector<long long> bilinear_apply(const Bilinear& b, const std::vector<long long>& x,
                                      const std::vector<long long>& y) {
    std::vector<long long> r(b.rank, 0);
    for (int i = 0; i < b.rank; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < b.rank; ++j) {
            if (y[j] == 0) continue;
            for (int k = 0; k < b.rank; ++k) r[k] += x[i] * y[j] * b.coeff(i, j, k);
        }
    }
    return r;
}

std::vector<long long> basis_vec(int n, int i) {
    std::vector<long long> v(n, 0);
    v[i] = 1;
    return v;
}

// point of orbit(level, S) whose coset contains the identity
int identity_point(const Subgroup& level, const Subgroup& s) {
    const FiniteGroup& g = level.group;
    std::vector<int> reps = coset_reps(level, s);
    for (size_t i = 0; i < reps.size(); ++i)
        for (int b : s.members())
            if (g.mul(reps[i], b) == g.identity()) return static_cast<int>(i);
    throw Error("identity coset not found");
}

// minimal level element c with c . from == to (same orbit)
int transporter(const GSet& t, int from, int to) {
    for (int m : t.level().members())
        if (t.act(m, from) == to) return m;
    throw Error("points are not in the same orbit");
}

// point map of the canonical projection orbit(level,S) -> orbit(level,T)
std::vector<int> projection_point_map(const Subgroup& level, const Subgroup& s,
                                      const Subgroup& t) {
    const FiniteGroup& g = level.group;
    std::vector<int> sreps = coset_reps(level, s);
    std::vector<int> treps = coset_reps(level, t);
    std::vector<int> coset_of(g.order(), -1);
    for (size_t i = 0; i < treps.size(); ++i)
        for (int b : t.members()) coset_of[g.mul(treps[i], b)] = static_cast<int>(i);
    std::vector<int> u(sreps.size());
    for (size_t i = 0; i < sreps.size(); ++i) u[i] = coset_of[sreps[i]];
    return u;
}

// point map of γ_g : orbit(level,S) -> orbit(level, gSg^-1), aS -> a g^-1 (gSg^-1)
std::vector<int> conj_point_map(const Subgroup& level, const Subgroup& s, int g_elt) {
    const FiniteGroup& g = level.group;
    Subgroup target{g, g.conjugate_set(g_elt, s.mask)};
    std::vector<int> sreps = coset_reps(level, s);
    std::vector<int> treps = coset_reps(level, target);
    std::vector<int> coset_of(g.order(), -1);
    for (size_t i = 0; i < treps.size(); ++i)
        for (int b : target.members()) coset_of[g.mul(treps[i], b)] = static_cast<int>(i);
    std::vector<int> u(sreps.size());
    for (size_t i = 0; i < sreps.size(); ++i)
        u[i] = coset_of[g.mul(sreps[i], g.inv(g_elt))];
    return u;
}

}  // namespace

IntMatrix CoefficientSystem::res_mat(int sub, int super) const {
    if (sub == super) return IntMatrix::identity(rank[sub]);
    auto it = res.find({sub, super});
    if (it == res.end()) throw Error("missing restriction matrix");
    return it->second;
}

const IntMatrix& CoefficientSystem::conj_mat(int g, int s) const {
    auto it = conj.find({g, s});
    if (it == conj.end()) throw Error("missing conjugation matrix");
    return it->second;
}

const IntMatrix& CoefficientSystem::conj_mat_inv(int g, int s) const {
    const SubgroupLattice& l = lat();
    int gs = l.index_of(level.group.conjugate_set(g, l.subgroups[s]));
    return conj_mat(level.group.inv(g), gs);
}

IntMatrix cs_map(const CoefficientSystem& m, int s, int t, int x) {
    const SubgroupLattice& l = m.lat();
    const FiniteGroup& g = m.level.group;
    std::uint64_t u_mask = g.conjugate_set(g.inv(x), l.subgroups[s]);
    if ((u_mask & ~l.subgroups[t]) != 0) throw Error("cs_map: not a valid orbit map");
    int u = l.index_of(u_mask);
    return m.conj_mat(g.inv(x), s) * m.res_mat(u, t);
}

IntMatrix MackeyFunctor::tr_mat(int sub, int super) const {
    if (sub == super) return IntMatrix::identity(cs.rank[sub]);
    auto it = tr.find({sub, super});
    if (it == tr.end()) throw Error("missing transfer matrix");
    return it->second;
}

IntMatrix tr_map(const MackeyFunctor& m, int s, int t, int x) {
    const SubgroupLattice& l = m.cs.lat();
    const FiniteGroup& g = m.cs.level.group;
    std::uint64_t u_mask = g.conjugate_set(g.inv(x), l.subgroups[s]);
    if ((u_mask & ~l.subgroups[t]) != 0) throw Error("tr_map: not a valid orbit map");
    int u = l.index_of(u_mask);
    return m.tr_mat(u, t) * m.cs.conj_mat(x, u);
}

Evaluation evaluate(const CoefficientSystem& m, const GSet& t) {
    if (!t.level().group.same_group(m.level.group) || t.level().mask != m.level.mask)
        throw Error("evaluate: level mismatch");
    const SubgroupLattice& l = m.lat();
    Evaluation e;
    e.block_of_point.assign(t.size(), -1);
    for (int x = 0; x < t.size(); ++x) {
        if (e.block_of_point[x] >= 0) continue;
        int b = static_cast<int>(e.blocks.size());
        for (int g : m.level.members()) e.block_of_point[t.act(g, x)] = b;
        int stab = l.index_of(t.stabilizer(x));
        e.blocks.push_back({x, stab, e.total, m.rank[stab]});
        e.total += m.rank[stab];
    }
    return e;
}

IntMatrix eval_map(const CoefficientSystem& m, const GSet& a, const GSet& b,
                   const std::vector<int>& u) {
    if (static_cast<int>(u.size()) != a.size()) throw Error("eval_map: bad point map size");
    for (int v : u)
        if (v < 0 || v >= b.size()) throw Error("eval_map: point map out of range");
    for (int g : m.level.members())
        for (int x = 0; x < a.size(); ++x)
            if (u[a.act(g, x)] != b.act(g, u[x])) throw Error("eval_map: point map not equivariant");

    Evaluation ea = evaluate(m, a), eb = evaluate(m, b);
    IntMatrix out(ea.total, eb.total);
    for (const OrbitBlock& blk : ea.blocks) {
        int q = u[blk.base_point];
        const OrbitBlock& tgt = eb.blocks[eb.block_of_point[q]];
        int c = transporter(b, tgt.base_point, q);
        // the restriction of u to this orbit is the orbit map
        // L/stab -> L/tgt.stab given by the coset c
        IntMatrix sub = cs_map(m, blk.stab, tgt.stab, c);
        out.set_block(blk.offset, tgt.offset, sub);
    }
    return out;
}

CsVerdict check_cs(const CoefficientSystem& m) {
    const SubgroupLattice& l = m.lat();
    const FiniteGroup& g = m.level.group;
    const int n = static_cast<int>(l.subgroups.size());
    CsVerdict v;
    auto fail = [&](const std::string& d) {
        v.ok = false;
        v.detail = d;
        return v;
    };

    if (static_cast<int>(m.rank.size()) != n) return fail("rank vector has wrong length");
    for (int r : m.rank)
        if (r < 0) return fail("negative rank");

    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
            if (s == t || !l.contains_pair(s, t)) continue;
            auto it = m.res.find({s, t});
            if (it == m.res.end())
                return fail("missing res " + l.subgroup_label(s) + " <= " + l.subgroup_label(t));
            if (it->second.rows() != m.rank[s] || it->second.cols() != m.rank[t])
                return fail("res " + l.subgroup_label(s) + " <= " + l.subgroup_label(t) +
                            " has wrong shape");
        }
    for (const auto& kv : m.res)
        if (kv.first.first == kv.first.second || !l.contains_pair(kv.first.first, kv.first.second))
            return fail("res key is not a proper containment");

    for (int e : m.level.members())
        for (int s = 0; s < n; ++s) {
            auto it = m.conj.find({e, s});
            if (it == m.conj.end())
                return fail("missing conj for element " + std::to_string(e) + " at " +
                            l.subgroup_label(s));
            int gs = l.index_of(g.conjugate_set(e, l.subgroups[s]));
            if (it->second.rows() != m.rank[s] || it->second.cols() != m.rank[gs])
                return fail("conj matrix has wrong shape");
        }

    // res functoriality over all chains
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
            if (!l.contains_pair(s, t)) continue;
            for (int w = 0; w < n; ++w) {
                if (!l.contains_pair(t, w)) continue;
                if (m.res_mat(s, t) * m.res_mat(t, w) != m.res_mat(s, w))
                    return fail("res is not functorial on " + l.subgroup_label(s) + " <= " +
                                l.subgroup_label(t) + " <= " + l.subgroup_label(w));
            }
        }

    // conj: identity elements, cocycle, compatibility with res
    for (int s = 0; s < n; ++s) {
        if (!m.conj_mat(g.identity(), s).is_identity())
            return fail("conj at the identity is not the identity matrix");
        for (int e : m.level.members())
            if (l.subgroups[s] & (std::uint64_t{1} << e)) {
                if (!m.conj_mat(e, s).is_identity())
                    return fail("conj by an inner element of " + l.subgroup_label(s) +
                                " is not the identity");
            }
    }
    for (int a : m.level.members())
        for (int b : m.level.members())
            for (int s = 0; s < n; ++s) {
                int bs = l.index_of(g.conjugate_set(b, l.subgroups[s]));
                if (m.conj_mat(g.mul(a, b), s) != m.conj_mat(b, s) * m.conj_mat(a, bs))
                    return fail("conjugation cocycle fails at elements " + std::to_string(a) +
                                "," + std::to_string(b) + " and " + l.subgroup_label(s));
            }
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
            if (!l.contains_pair(s, t)) continue;
            for (int e : m.level.members()) {
                int es = l.index_of(g.conjugate_set(e, l.subgroups[s]));
                int et = l.index_of(g.conjugate_set(e, l.subgroups[t]));
                if (m.res_mat(s, t) * m.conj_mat(e, t) != m.conj_mat(e, s) * m.res_mat(es, et))
                    return fail("res/conj compatibility fails at " + l.subgroup_label(s) +
                                " <= " + l.subgroup_label(t) + ", element " + std::to_string(e));
            }
        }
    return v;
}

MackeyVerdict check_mackey(const MackeyFunctor& m) {
    MackeyVerdict v;
    CsVerdict cv = check_cs(m.cs);
    if (!cv.ok) {
        v.ok = false;
        v.stage = "coefficient system";
        v.detail = cv.detail;
        return v;
    }
    const SubgroupLattice& l = m.cs.lat();
    const FiniteGroup& g = m.cs.level.group;
    const int n = static_cast<int>(l.subgroups.size());
    auto fail = [&](const std::string& stage, const std::string& d) {
        v.ok = false;
        v.stage = stage;
        v.detail = d;
        return v;
    };

    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
            if (s == t || !l.contains_pair(s, t)) continue;
            auto it = m.tr.find({s, t});
            if (it == m.tr.end())
                return fail("transfer data",
                            "missing tr " + l.subgroup_label(s) + " <= " + l.subgroup_label(t));
            if (it->second.rows() != m.cs.rank[t] || it->second.cols() != m.cs.rank[s])
                return fail("transfer data", "tr " + l.subgroup_label(s) + " <= " +
                                                 l.subgroup_label(t) + " has wrong shape");
        }

    // double coset formula inside every ambient subgroup; checked first so
    // corrupted transfers surface as (K, H, x) witnesses
    for (int u = 0; u < n; ++u) {
        Subgroup us{g, l.subgroups[u]};
        for (int k = 0; k < n; ++k) {
            if (!l.contains_pair(k, u)) continue;
            std::uint64_t km = l.subgroups[k];
            for (int h = 0; h < n; ++h) {
                if (!l.contains_pair(h, u)) continue;
                std::uint64_t hm = l.subgroups[h];

                IntMatrix lhs = m.cs.res_mat(k, u) * m.tr_mat(h, u);
                IntMatrix rhs(m.cs.rank[k], m.cs.rank[h]);
                std::uint64_t seen = 0;
                int first_rep = -1;
                for (int x : us.members()) {
                    if ((seen >> x) & 1) continue;
                    if (first_rep < 0) first_rep = x;
                    for (int a : us.members()) {
                        if (!((km >> a) & 1)) continue;
                        int ax = g.mul(a, x);
                        for (int b : us.members())
                            if ((hm >> b) & 1) seen |= std::uint64_t{1} << g.mul(ax, b);
                    }
                    int kx = l.index_of(km & g.conjugate_set(x, hm));
                    int hx = l.index_of(g.conjugate_set(g.inv(x), l.subgroups[kx]));
                    rhs = rhs + m.tr_mat(kx, k) * m.cs.conj_mat(g.inv(x), kx) * m.cs.res_mat(hx, h);
                }
                if (lhs != rhs) {
                    v.ok = false;
                    v.stage = "double coset formula";
                    v.witness = MackeyWitness{u, k, h, first_rep, lhs, rhs};
                    std::ostringstream os;
                    os << "Res(" << l.subgroup_label(k) << ") Tr(" << l.subgroup_label(h)
                       << ") inside " << l.subgroup_label(u) << ": " << lhs.to_string()
                       << " != " << rhs.to_string();
                    v.detail = os.str();
                    return v;
                }
            }
        }
    }

    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
            if (!l.contains_pair(s, t)) continue;
            for (int w = 0; w < n; ++w) {
                if (!l.contains_pair(t, w)) continue;
                if (m.tr_mat(t, w) * m.tr_mat(s, t) != m.tr_mat(s, w))
                    return fail("transfer functoriality",
                                "tr is not functorial on " + l.subgroup_label(s) + " <= " +
                                    l.subgroup_label(t) + " <= " + l.subgroup_label(w));
            }
        }

    // transfer/conjugation naturality
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
            if (!l.contains_pair(s, t)) continue;
            for (int e : m.cs.level.members()) {
                int es = l.index_of(g.conjugate_set(e, l.subgroups[s]));
                int et = l.index_of(g.conjugate_set(e, l.subgroups[t]));
                int einv = g.inv(e);
                if (m.cs.conj_mat(einv, et) * m.tr_mat(s, t) !=
                    m.tr_mat(es, et) * m.cs.conj_mat(einv, es))
                    return fail("transfer naturality",
                                "tr/conj naturality fails at " + l.subgroup_label(s) + " <= " +
                                    l.subgroup_label(t) + ", element " + std::to_string(e));
            }
        }
    return v;
}

bool GreenFunctor::operator==(const GreenFunctor& o) const {
    if (!(mackey == o.mackey) || unit != o.unit) return false;
    if (mult.size() != o.mult.size()) return false;
    for (const auto& [k, b] : mult) {
        auto it = o.mult.find(k);
        if (it == o.mult.end() || b.rank != it->second.rank || b.c != it->second.c) return false;
    }
    return true;
}

GreenVerdict green_check(const GreenFunctor& r) {
    GreenVerdict v;
    auto fail = [&](const std::string& stage, const std::string& d) {
        v.ok = false;
        v.stage = stage;
        v.detail = d;
        return v;
    };
    MackeyVerdict mv = check_mackey(r.mackey);
    if (!mv.ok) return fail("mackey", mv.detail);

    const CoefficientSystem& cs = r.mackey.cs;
    const SubgroupLattice& l = cs.lat();
    const FiniteGroup& g = cs.level.group;
    const int n = static_cast<int>(l.subgroups.size());

    for (int s = 0; s < n; ++s) {
        auto mit = r.mult.find(s);
        auto uit = r.unit.find(s);
        if (mit == r.mult.end() || uit == r.unit.end())
            return fail("ring data", "missing mult/unit at " + l.subgroup_label(s));
        const Bilinear& b = mit->second;
        const std::vector<long long>& one = uit->second;
        const int rk = cs.rank[s];
        if (b.rank != rk || static_cast<int>(one.size()) != rk)
            return fail("ring data", "mult/unit shape mismatch at " + l.subgroup_label(s));

        for (int i = 0; i < rk; ++i)
            for (int j = 0; j < rk; ++j)
                for (int k = 0; k < rk; ++k)
                    if (b.coeff(i, j, k) != b.coeff(j, i, k))
                        return fail("commutativity", "level " + l.subgroup_label(s));
        for (int i = 0; i < rk; ++i) {
            auto ei = basis_vec(rk, i);
            if (bilinear_apply(b, one, ei) != ei)
                return fail("unit law", "level " + l.subgroup_label(s));
        }
        for (int i = 0; i < rk; ++i)
            for (int j = 0; j < rk; ++j)
                for (int k = 0; k < rk; ++k) {
                    auto ei = basis_vec(rk, i), ej = basis_vec(rk, j), ek = basis_vec(rk, k);
                    auto ab_c = bilinear_apply(b, bilinear_apply(b, ei, ej), ek);
                    auto a_bc = bilinear_apply(b, ei, bilinear_apply(b, ej, ek));
                    if (ab_c != a_bc) return fail("associativity", "level " + l.subgroup_label(s));
                }
    }

    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
            if (s == t || !l.contains_pair(s, t)) continue;
            const IntMatrix res = cs.res_mat(s, t);
            const Bilinear& bs = r.mult.at(s);
            const Bilinear& bt = r.mult.at(t);
            if (apply_mat(res, r.unit.at(t)) != r.unit.at(s))
                return fail("res unital", l.subgroup_label(s) + " <= " + l.subgroup_label(t));
            for (int i = 0; i < cs.rank[t]; ++i)
                for (int j = 0; j < cs.rank[t]; ++j) {
                    auto lhs = apply_mat(res, bilinear_apply(bt, basis_vec(cs.rank[t], i),
                                                             basis_vec(cs.rank[t], j)));
                    auto rhs = bilinear_apply(bs, apply_mat(res, basis_vec(cs.rank[t], i)),
                                              apply_mat(res, basis_vec(cs.rank[t], j)));
                    if (lhs != rhs)
                        return fail("res multiplicative",
                                    l.subgroup_label(s) + " <= " + l.subgroup_label(t));
                }
        }

    for (int e : cs.level.members())
        for (int s = 0; s < n; ++s) {
            int gs = l.index_of(g.conjugate_set(e, l.subgroups[s]));
            const IntMatrix& c = cs.conj_mat(e, s);
            if (apply_mat(c, r.unit.at(gs)) != r.unit.at(s))
                return fail("conj unital", "element " + std::to_string(e) + " at " +
                                               l.subgroup_label(s));
            for (int i = 0; i < cs.rank[gs]; ++i)
                for (int j = 0; j < cs.rank[gs]; ++j) {
                    auto lhs = apply_mat(c, bilinear_apply(r.mult.at(gs), basis_vec(cs.rank[gs], i),
                                                           basis_vec(cs.rank[gs], j)));
                    auto rhs = bilinear_apply(r.mult.at(s), apply_mat(c, basis_vec(cs.rank[gs], i)),
                                              apply_mat(c, basis_vec(cs.rank[gs], j)));
                    if (lhs != rhs)
                        return fail("conj multiplicative", "element " + std::to_string(e) +
                                                               " at " + l.subgroup_label(s));
                }
        }

    // Frobenius reciprocity: tr(x * res(y)) = tr(x) * y
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
            if (s == t || !l.contains_pair(s, t)) continue;
            const IntMatrix res = cs.res_mat(s, t);
            const IntMatrix tr = r.mackey.tr_mat(s, t);
            for (int i = 0; i < cs.rank[s]; ++i)
                for (int j = 0; j < cs.rank[t]; ++j) {
                    auto x = basis_vec(cs.rank[s], i);
                    auto y = basis_vec(cs.rank[t], j);
                    auto lhs = apply_mat(tr, bilinear_apply(r.mult.at(s), x, apply_mat(res, y)));
                    auto rhs = bilinear_apply(r.mult.at(t), apply_mat(tr, x), y);
                    if (lhs != rhs)
                        return fail("frobenius reciprocity",
                                    l.subgroup_label(s) + " <= " + l.subgroup_label(t) +
                                        " at basis (" + std::to_string(i) + "," +
                                        std::to_string(j) + ")");
                }
        }
    return v;
}

GreenFunctor burnside_green(const Subgroup& level) {
    const FiniteGroup& g = level.group;
    const SubgroupLattice& l = g.lattice(level.mask);
    const int n = static_cast<int>(l.subgroups.size());

    GreenFunctor r;
    r.mackey.cs.level = level;
    CoefficientSystem& cs = r.mackey.cs;
    cs.rank.resize(n);

    // per-subgroup basis: conjugacy classes of the subgroup's own lattice
    std::vector<const SubgroupLattice*> sub_lat(n);
    for (int s = 0; s < n; ++s) {
        sub_lat[s] = &g.lattice(l.subgroups[s]);
        cs.rank[s] = static_cast<int>(sub_lat[s]->classes.size());
    }
    auto class_index = [&](int s, std::uint64_t mask) {
        return sub_lat[s]->class_of[sub_lat[s]->index_of(mask)];
    };
    auto decomposition_column = [&](int s, const GSet& t) {
        std::vector<long long> col(cs.rank[s], 0);
        for (const auto& [stab, mult] : decompose(t).entries) col[class_index(s, stab)] += mult;
        return col;
    };

    for (int s = 0; s < n; ++s) {
        Subgroup ssub{g, l.subgroups[s]};
        for (int t = 0; t < n; ++t) {
            if (s == t || !l.contains_pair(s, t)) continue;
            Subgroup tsub{g, l.subgroups[t]};
            // res: restrict each basis orbit of T and decompose over S
            IntMatrix res(cs.rank[s], cs.rank[t]);
            for (int c = 0; c < cs.rank[t]; ++c) {
                GSet x = orbit(tsub, Subgroup{g, sub_lat[t]->subgroups[sub_lat[t]->class_rep[c]]});
                auto col = decomposition_column(s, restrict_gset(x, ssub));
                for (int row = 0; row < cs.rank[s]; ++row) res.at(row, c) = col[row];
            }
            cs.res[{s, t}] = std::move(res);
            // tr: induce each basis orbit of S up to T
            IntMatrix tr(cs.rank[t], cs.rank[s]);
            for (int c = 0; c < cs.rank[s]; ++c) {
                GSet x = orbit(ssub, Subgroup{g, sub_lat[s]->subgroups[sub_lat[s]->class_rep[c]]});
                auto col = decomposition_column(t, induce(tsub, x));
                for (int row = 0; row < cs.rank[t]; ++row) tr.at(row, c) = col[row];
            }
            r.mackey.tr[{s, t}] = std::move(tr);
        }

        for (int e : level.members()) {
            int gs = l.index_of(g.conjugate_set(e, l.subgroups[s]));
            // [gSg^-1 / W] pulls back to [S / g^-1 W g]
            IntMatrix c(cs.rank[s], cs.rank[gs]);
            for (int col = 0; col < cs.rank[gs]; ++col) {
                std::uint64_t w = sub_lat[gs]->subgroups[sub_lat[gs]->class_rep[col]];
                c.at(class_index(s, g.conjugate_set(g.inv(e), w)), col) = 1;
            }
            cs.conj[{e, s}] = std::move(c);
        }

        Bilinear b;
        b.rank = cs.rank[s];
        b.c.assign(static_cast<size_t>(b.rank) * b.rank * b.rank, 0);
        std::vector<GSet> basis_orbits;
        for (int c = 0; c < cs.rank[s]; ++c)
            basis_orbits.push_back(
                orbit(ssub, Subgroup{g, sub_lat[s]->subgroups[sub_lat[s]->class_rep[c]]}));
        for (int i = 0; i < b.rank; ++i)
            for (int j = 0; j <= i; ++j) {
                auto col = decomposition_column(s, product(basis_orbits[i], basis_orbits[j]));
                for (int k = 0; k < b.rank; ++k) {
                    b.c[(static_cast<size_t>(i) * b.rank + j) * b.rank + k] = col[k];
                    b.c[(static_cast<size_t>(j) * b.rank + i) * b.rank + k] = col[k];
                }
            }
        r.mult[s] = std::move(b);

        std::vector<long long> one(cs.rank[s], 0);
        one[class_index(s, l.subgroups[s])] = 1;
        r.unit[s] = std::move(one);
    }
    return r;
}

GreenFunctor burnside(const FiniteGroup& g) { return burnside_green(g.full_subgroup()); }

GreenFunctor constant_green(const Subgroup& level) {
    const FiniteGroup& g = level.group;
    const SubgroupLattice& l = g.lattice(level.mask);
    const int n = static_cast<int>(l.subgroups.size());

    GreenFunctor r;
    r.mackey.cs.level = level;
    r.mackey.cs.rank.assign(n, 1);
    for (int s = 0; s < n; ++s) {
        for (int t = 0; t < n; ++t) {
            if (s == t || !l.contains_pair(s, t)) continue;
            r.mackey.cs.res[{s, t}] = IntMatrix(1, 1, {1});
            r.mackey.tr[{s, t}] = IntMatrix(1, 1, {l.order_of(t) / l.order_of(s)});
        }
        for (int e : level.members()) r.mackey.cs.conj[{e, s}] = IntMatrix(1, 1, {1});
        r.mult[s] = Bilinear{1, {1}};
        r.unit[s] = {1};
    }
    return r;
}

MackeyFunctor fixed_point_mackey(const Subgroup& level, const GSet& x) {
    const FiniteGroup& g = level.group;
    const SubgroupLattice& l = g.lattice(level.mask);
    const int n = static_cast<int>(l.subgroups.size());
    if (x.level().mask != level.mask) throw Error("fixed_point_mackey: set must live at the level");

    // basis of V(S): indicator vectors of the S-orbits of X, in scan order
    std::vector<std::vector<int>> orb_of(n, std::vector<int>(x.size(), -1));
    std::vector<int> orb_count(n, 0);
    for (int s = 0; s < n; ++s) {
        Subgroup ssub{g, l.subgroups[s]};
        for (int p = 0; p < x.size(); ++p) {
            if (orb_of[s][p] >= 0) continue;
            for (int e : ssub.members()) orb_of[s][x.act(e, p)] = orb_count[s];
            ++orb_count[s];
        }
    }

    MackeyFunctor m;
    m.cs.level = level;
    m.cs.rank = orb_count;
    for (int s = 0; s < n; ++s) {
        for (int t = 0; t < n; ++t) {
            if (s == t || !l.contains_pair(s, t)) continue;
            // entry 1 exactly when the S-orbit sits inside the T-orbit
            IntMatrix res(orb_count[s], orb_count[t]);
            for (int p = 0; p < x.size(); ++p) res.at(orb_of[s][p], orb_of[t][p]) = 1;
            m.cs.res[{s, t}] = std::move(res);

            IntMatrix tr(orb_count[t], orb_count[s]);
            Subgroup ssub{g, l.subgroups[s]}, tsub{g, l.subgroups[t]};
            for (int i = 0; i < orb_count[s]; ++i) {
                std::vector<long long> v(x.size(), 0);
                for (int rep : coset_reps(tsub, ssub))
                    for (int p = 0; p < x.size(); ++p)
                        if (orb_of[s][p] == i) v[x.act(rep, p)] += 1;
                for (int p = 0; p < x.size(); ++p)
                    if (v[p] != 0) tr.at(orb_of[t][p], i) = v[p];  // constant on T-orbits
            }
            m.tr[{s, t}] = std::move(tr);
        }
        for (int e : level.members()) {
            // e^-1 carries each gSg^-1-orbit onto one S-orbit
            int gs = l.index_of(g.conjugate_set(e, l.subgroups[s]));
            IntMatrix c(orb_count[s], orb_count[gs]);
            for (int p = 0; p < x.size(); ++p)
                c.at(orb_of[s][x.act(g.inv(e), p)], orb_of[gs][p]) = 1;
            m.cs.conj[{e, s}] = std::move(c);
        }
    }
    return m;
}

MackeyFunctor direct_sum(const MackeyFunctor& a, const MackeyFunctor& b) {
    if (!a.cs.level.group.same_group(b.cs.level.group) || a.cs.level.mask != b.cs.level.mask)
        throw Error("direct_sum: level mismatch");
    MackeyFunctor m;
    m.cs.level = a.cs.level;
    const int n = static_cast<int>(a.cs.rank.size());
    m.cs.rank.resize(n);
    for (int s = 0; s < n; ++s) m.cs.rank[s] = a.cs.rank[s] + b.cs.rank[s];

    auto block_sum = [](const IntMatrix& x, const IntMatrix& y) {
        IntMatrix out(x.rows() + y.rows(), x.cols() + y.cols());
        out.set_block(0, 0, x);
        out.set_block(x.rows(), x.cols(), y);
        return out;
    };
    for (const auto& [key, mat] : a.cs.res) m.cs.res[key] = block_sum(mat, b.cs.res.at(key));
    for (const auto& [key, mat] : a.cs.conj) m.cs.conj[key] = block_sum(mat, b.cs.conj.at(key));
    for (const auto& [key, mat] : a.tr) m.tr[key] = block_sum(mat, b.tr.at(key));
    return m;
}

MackeyFunctor base_change(const MackeyFunctor& m, const std::vector<IntMatrix>& q,
                          const std::vector<IntMatrix>& q_inv) {
    const SubgroupLattice& l = m.cs.lat();
    auto cls = [&](int s) { return l.class_of[s]; };
    MackeyFunctor out;
    out.cs.level = m.cs.level;
    out.cs.rank = m.cs.rank;
    for (const auto& [key, mat] : m.cs.res)
        out.cs.res[key] = q[cls(key.first)] * mat * q_inv[cls(key.second)];
    for (const auto& [key, mat] : m.cs.conj)
        out.cs.conj[key] = q[cls(key.second)] * mat * q_inv[cls(key.second)];
    for (const auto& [key, mat] : m.tr)
        out.tr[key] = q[cls(key.second)] * mat * q_inv[cls(key.first)];
    return out;
}

CoefficientSystem restrict_cs(const CoefficientSystem& m, const Subgroup& h) {
    if ((h.mask & ~m.level.mask) != 0) throw Error("restrict_cs: not a subgroup of the level");
    const FiniteGroup& g = m.level.group;
    const SubgroupLattice& big = m.lat();
    const SubgroupLattice& small = g.lattice(h.mask);
    const int n = static_cast<int>(small.subgroups.size());

    CoefficientSystem out;
    out.level = h;
    out.rank.resize(n);
    for (int s = 0; s < n; ++s) out.rank[s] = m.rank[big.index_of(small.subgroups[s])];
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
            if (s == t || !small.contains_pair(s, t)) continue;
            out.res[{s, t}] =
                m.res_mat(big.index_of(small.subgroups[s]), big.index_of(small.subgroups[t]));
        }
    for (int e : h.members())
        for (int s = 0; s < n; ++s)
            out.conj[{e, s}] = m.conj_mat(e, big.index_of(small.subgroups[s]));
    return out;
}

MackeyFunctor restrict_mackey(const MackeyFunctor& m, const Subgroup& h) {
    MackeyFunctor out;
    out.cs = restrict_cs(m.cs, h);
    const FiniteGroup& g = m.cs.level.group;
    const SubgroupLattice& big = m.cs.lat();
    const SubgroupLattice& small = g.lattice(h.mask);
    const int n = static_cast<int>(small.subgroups.size());
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
            if (s == t || !small.contains_pair(s, t)) continue;
            out.tr[{s, t}] =
                m.tr_mat(big.index_of(small.subgroups[s]), big.index_of(small.subgroups[t]));
        }
    return out;
}

CoefficientSystem coinduce_cs(const CoefficientSystem& m, const Subgroup& up) {
    if ((m.level.mask & ~up.mask) != 0) throw Error("coinduce_cs: level must sit inside the target");
    if (m.level.mask == up.mask) return m;
    const FiniteGroup& g = m.level.group;
    const SubgroupLattice& ul = g.lattice(up.mask);
    const int n = static_cast<int>(ul.subgroups.size());

    auto value_set = [&](int s) {
        return restrict_gset(orbit(up, Subgroup{g, ul.subgroups[s]}), m.level);
    };

    CoefficientSystem out;
    out.level = up;
    out.rank.resize(n);
    for (int s = 0; s < n; ++s) out.rank[s] = evaluate(m, value_set(s)).total;

    for (int s = 0; s < n; ++s) {
        Subgroup ssub{g, ul.subgroups[s]};
        for (int t = 0; t < n; ++t) {
            if (s == t || !ul.contains_pair(s, t)) continue;
            auto u = projection_point_map(up, ssub, Subgroup{g, ul.subgroups[t]});
            out.res[{s, t}] = eval_map(m, value_set(s), value_set(t), u);
        }
        for (int e : up.members()) {
            auto u = conj_point_map(up, ssub, e);
            int gs = ul.index_of(g.conjugate_set(e, ul.subgroups[s]));
            out.conj[{e, s}] = eval_map(m, value_set(s), value_set(gs), u);
        }
    }
    return out;
}

namespace {

// Comma category for the pointwise left Kan extension along induction of
// orbits: objects are pairs (U ≤ H, coset gU in UP with g^-1 S g ⊆ U);
// there is at most one morphism (U,gU) -> (U',g'U'), present when some
// h in H satisfies g'h ∈ gU and h^-1 U' h ⊆ U.
struct CommaCat {
    struct Obj {
        int u_small;   // subgroup index in the lower-level lattice
        int coset_rep; // minimal element of the coset
        int offset;
    };
    std::vector<Obj> objs;
    int total = 0;
    FreeQuotient fq;
};

CommaCat build_comma(const CoefficientSystem& m, const Subgroup& up, std::uint64_t s_mask) {
    const FiniteGroup& g = m.level.group;
    const SubgroupLattice& hl = m.lat();
    CommaCat cat;

    for (int u = 0; u < static_cast<int>(hl.subgroups.size()); ++u) {
        Subgroup usub{g, hl.subgroups[u]};
        for (int rep : coset_reps(up, usub)) {
            if ((g.conjugate_set(g.inv(rep), s_mask) & ~usub.mask) != 0) continue;
            cat.objs.push_back({u, rep, cat.total});
            cat.total += m.rank[u];
        }
    }

    // coset membership helper
    auto same_coset = [&](int a, int rep, std::uint64_t umask) {
        int d = g.mul(g.inv(rep), a);
        return ((umask >> d) & 1) != 0;
    };

    int rel_count = 0;
    std::vector<std::pair<std::pair<int, int>, IntMatrix>> morphisms;
    for (size_t a = 0; a < cat.objs.size(); ++a)
        for (size_t b = 0; b < cat.objs.size(); ++b) {
            const auto& oa = cat.objs[a];
            const auto& ob = cat.objs[b];
            std::uint64_t ua = hl.subgroups[oa.u_small], ub = hl.subgroups[ob.u_small];
            int hfound = -1;
            for (int h : m.level.members()) {
                if (!same_coset(g.mul(ob.coset_rep, h), oa.coset_rep, ua)) continue;
                if ((g.conjugate_set(g.inv(h), ub) & ~ua) != 0) continue;
                hfound = h;
                break;
            }
            if (hfound < 0) continue;
            // M applied to the H-orbit map H/U_b -> H/U_a given by coset h
            IntMatrix mat = cs_map(m, ob.u_small, oa.u_small, hfound);
            morphisms.push_back({{static_cast<int>(a), static_cast<int>(b)}, std::move(mat)});
            rel_count += m.rank[oa.u_small];
        }

    IntMatrix relations(cat.total, rel_count);
    int col = 0;
    for (const auto& [ab, mat] : morphisms) {
        const auto& oa = cat.objs[ab.first];
        const auto& ob = cat.objs[ab.second];
        for (int i = 0; i < m.rank[oa.u_small]; ++i, ++col) {
            relations.at(oa.offset + i, col) -= 1;
            for (int rrow = 0; rrow < m.rank[ob.u_small]; ++rrow)
                relations.at(ob.offset + rrow, col) += mat.at(rrow, i);
        }
    }
    cat.fq = free_quotient(relations);
    if (!cat.fq.free)
        throw Error("induce_cs: induced value has torsion, outside the free-values model");
    return cat;
}

// generator-space map induced by precomposition with f: send block (U, gU)
// of the source comma category to block (U, x*gU) of the target one.
IntMatrix comma_transport(const CoefficientSystem& m, const CommaCat& from,
                          const CommaCat& to, int x) {
    const FiniteGroup& g = m.level.group;
    const SubgroupLattice& hl = m.lat();
    IntMatrix f(to.total, from.total);
    for (const auto& oa : from.objs) {
        std::uint64_t umask = hl.subgroups[oa.u_small];
        int target_elt = g.mul(x, oa.coset_rep);
        int found = -1;
        for (const auto& oz : to.objs) {
            if (oz.u_small != oa.u_small) continue;
            int d = g.mul(g.inv(oz.coset_rep), target_elt);
            if ((umask >> d) & 1) {
                found = oz.offset;
                break;
            }
        }
        if (found < 0) throw Error("induce_cs: comma transport failed");
        for (int i = 0; i < m.rank[oa.u_small]; ++i) f.at(found + i, oa.offset + i) = 1;
    }
    return f;
}

}  // namespace

CoefficientSystem induce_cs(const CoefficientSystem& m, const Subgroup& up) {
    if ((m.level.mask & ~up.mask) != 0) throw Error("induce_cs: level must sit inside the target");
    if (m.level.mask == up.mask) return m;
    const FiniteGroup& g = m.level.group;
    const SubgroupLattice& ul = g.lattice(up.mask);
    const int n = static_cast<int>(ul.subgroups.size());

    std::vector<CommaCat> cats(n);
    for (int s = 0; s < n; ++s) cats[s] = build_comma(m, up, ul.subgroups[s]);

    CoefficientSystem out;
    out.level = up;
    out.rank.resize(n);
    for (int s = 0; s < n; ++s) out.rank[s] = cats[s].fq.rank;

    // structure map along f: UP/S' -> UP/S with coset x: objects (U, gU) of
    // the S-comma category map to (U, x g U) in the S'-one
    auto induced = [&](int s_from, int s_to, int x) {
        IntMatrix f = comma_transport(m, cats[s_from], cats[s_to], x);
        return cats[s_to].fq.proj * f * cats[s_from].fq.sect;
    };

    for (int s = 0; s < n; ++s) {
        for (int t = 0; t < n; ++t) {
            if (s == t || !ul.contains_pair(s, t)) continue;
            // projection UP/S -> UP/T: precomposition keeps the same coset
            out.res[{s, t}] = induced(t, s, g.identity());
        }
        for (int e : up.members()) {
            int gs = ul.index_of(g.conjugate_set(e, ul.subgroups[s]));
            // γ_e: UP/S -> UP/gSg^-1 is the coset e^-1 (gSg^-1)
            out.conj[{e, s}] = induced(gs, s, g.inv(e));
        }
    }
    return out;
}

CoefficientSystem box(const GSet& t, const CoefficientSystem& m) {
    if (t.level().mask != m.level.mask || !t.level().group.same_group(m.level.group))
        throw Error("box: level mismatch");
    const FiniteGroup& g = m.level.group;
    const Subgroup& level = m.level;
    const SubgroupLattice& l = m.lat();
    const int n = static_cast<int>(l.subgroups.size());

    auto value_set = [&](int s) { return product(t, orbit(level, Subgroup{g, l.subgroups[s]})); };

    CoefficientSystem out;
    out.level = level;
    out.rank.resize(n);
    for (int s = 0; s < n; ++s) out.rank[s] = evaluate(m, value_set(s)).total;

    for (int s = 0; s < n; ++s) {
        Subgroup ssub{g, l.subgroups[s]};
        int s_size = orbit(level, ssub).size();
        for (int tt = 0; tt < n; ++tt) {
            if (s == tt || !l.contains_pair(s, tt)) continue;
            auto u = projection_point_map(level, ssub, Subgroup{g, l.subgroups[tt]});
            int t_size = orbit(level, Subgroup{g, l.subgroups[tt]}).size();
            std::vector<int> w(static_cast<size_t>(t.size()) * s_size);
            for (int i = 0; i < t.size(); ++i)
                for (int j = 0; j < s_size; ++j)
                    w[static_cast<size_t>(i) * s_size + j] = i * t_size + u[j];
            out.res[{s, tt}] = eval_map(m, value_set(s), value_set(tt), w);
        }
        for (int e : level.members()) {
            int gs = l.index_of(g.conjugate_set(e, l.subgroups[s]));
            auto u = conj_point_map(level, ssub, e);
            int gs_size = orbit(level, Subgroup{g, l.subgroups[gs]}).size();
            std::vector<int> w(static_cast<size_t>(t.size()) * s_size);
            for (int i = 0; i < t.size(); ++i)
                for (int j = 0; j < s_size; ++j)
                    w[static_cast<size_t>(i) * s_size + j] = i * gs_size + u[j];
            out.conj[{e, s}] = eval_map(m, value_set(s), value_set(gs), w);
        }
    }
    return out;
}

namespace {

// orbit maps UP/K' -> UP/K: one per coset xK with x^-1 K' x ⊆ K
std::vector<int> hom_cosets(const FiniteGroup& g, const Subgroup& level, std::uint64_t km_from,
                            std::uint64_t km_to) {
    std::vector<int> reps;
    std::uint64_t seen = 0;
    for (int x : level.members()) {
        if ((seen >> x) & 1) continue;
        if ((g.conjugate_set(g.inv(x), km_from) & ~km_to) != 0) continue;
        reps.push_back(x);
        for (int b = 0; b < g.order(); ++b)
            if ((km_to >> b) & 1) seen |= std::uint64_t{1} << g.mul(x, b);
    }
    return reps;
}

std::vector<int> orbit_map_points(const FiniteGroup& g, const Subgroup& level,
                                  const Subgroup& from, const Subgroup& to, int x) {
    std::vector<int> freps = coset_reps(level, from);
    std::vector<int> treps = coset_reps(level, to);
    std::vector<int> coset_of(g.order(), -1);
    for (size_t i = 0; i < treps.size(); ++i)
        for (int b : to.members()) coset_of[g.mul(treps[i], b)] = static_cast<int>(i);
    std::vector<int> u(freps.size());
    for (size_t i = 0; i < freps.size(); ++i) u[i] = coset_of[g.mul(freps[i], x)];
    return u;
}

}  // namespace

NormData norms_from_transfers(const MackeyFunctor& m) {
    MackeyVerdict mv = check_mackey(m);
    if (!mv.ok) throw Error("norms_from_transfers: not a Mackey functor: " + mv.detail);

    const FiniteGroup& g = m.cs.level.group;
    const Subgroup& level = m.cs.level;
    const SubgroupLattice& l = m.cs.lat();
    const int n = static_cast<int>(l.subgroups.size());

    NormData nd{m.cs, {}};
    for (int h = 0; h < n; ++h) {
        GSet orb_h = orbit(level, Subgroup{g, l.subgroups[h]});
        for (int k = 0; k < n; ++k) {
            Subgroup ksub{g, l.subgroups[k]};
            GSet orb_k = orbit(level, ksub);
            GSet p = product(orb_h, orb_k);
            Evaluation ep = evaluate(m.cs, p);
            Evaluation ek = evaluate(m.cs, orb_k);
            const OrbitBlock& tgt = ek.blocks[0];

            IntMatrix nu(ek.total, ep.total);
            for (const OrbitBlock& blk : ep.blocks) {
                int j = blk.base_point % orb_k.size();  // second component
                int u = transporter(orb_k, tgt.base_point, j);
                // transfer along the projection orbit -> UP/K, the orbit map
                // G/S0 -> G/T0 with coset u
                std::uint64_t s0u = g.conjugate_set(g.inv(u), l.subgroups[blk.stab]);
                int s0u_idx = l.index_of(s0u);
                IntMatrix t = m.tr_mat(s0u_idx, tgt.stab) * m.cs.conj_mat(u, s0u_idx);
                nu.set_block(0, blk.offset, t);
            }
            nd.nu[{h, k}] = std::move(nu);
        }
    }
    return nd;
}

MackeyFunctor transfers_from_norms(const NormData& nd) {
    const CoefficientSystem& cs = nd.cs;
    CsVerdict cv = check_cs(cs);
    if (!cv.ok) throw Error("transfers_from_norms: invalid coefficient system: " + cv.detail);

    const FiniteGroup& g = cs.level.group;
    const Subgroup& level = cs.level;
    const SubgroupLattice& l = cs.lat();
    const int n = static_cast<int>(l.subgroups.size());
    const int top = n - 1;

    std::vector<GSet> orbs;
    std::vector<Evaluation> evals;
    for (int s = 0; s < n; ++s) {
        orbs.push_back(orbit(level, Subgroup{g, l.subgroups[s]}));
        evals.push_back(evaluate(cs, orbs[s]));
    }

    // presence and shape
    for (int h = 0; h < n; ++h)
        for (int k = 0; k < n; ++k) {
            auto it = nd.nu.find({h, k});
            if (it == nd.nu.end())
                throw Error("transfers_from_norms: missing norm component (" +
                            l.subgroup_label(h) + ", " + l.subgroup_label(k) + ")");
            Evaluation ep = evaluate(cs, product(orbs[h], orbs[k]));
            if (it->second.rows() != evals[k].total || it->second.cols() != ep.total)
                throw Error("transfers_from_norms: norm component has wrong shape");
        }

    // naturality in the orbit variable
    for (int h = 0; h < n; ++h) {
        for (int kf = 0; kf < n; ++kf)
            for (int kt = 0; kt < n; ++kt) {
                for (int x : hom_cosets(g, level, l.subgroups[kf], l.subgroups[kt])) {
                    Subgroup from{g, l.subgroups[kf]}, to{g, l.subgroups[kt]};
                    auto u = orbit_map_points(g, level, from, to, x);
                    IntMatrix mf = eval_map(cs, orbs[kf], orbs[kt], u);  // Eval(kt) -> Eval(kf)
                    std::vector<int> w(static_cast<size_t>(orbs[h].size()) * orbs[kf].size());
                    for (int i = 0; i < orbs[h].size(); ++i)
                        for (int j = 0; j < orbs[kf].size(); ++j)
                            w[static_cast<size_t>(i) * orbs[kf].size() + j] =
                                i * orbs[kt].size() + u[j];
                    IntMatrix mpf = eval_map(cs, product(orbs[h], orbs[kf]),
                                             product(orbs[h], orbs[kt]), w);
                    if (nd.nu.at({h, kf}) * mpf != mf * nd.nu.at({h, kt}))
                        throw Error("transfers_from_norms: norm data is not natural at (" +
                                    l.subgroup_label(h) + "; " + l.subgroup_label(kf) + " -> " +
                                    l.subgroup_label(kt) + ")");
                }
            }
    }

    // unit: the norm along the one-point set is the canonical identification
    for (int k = 0; k < n; ++k) {
        std::vector<int> u2(static_cast<size_t>(orbs[top].size()) * orbs[k].size());
        for (int j = 0; j < orbs[k].size(); ++j) u2[j] = j;
        IntMatrix mpi = eval_map(cs, product(orbs[top], orbs[k]), orbs[k], u2);
        if (!(nd.nu.at({top, k}) * mpi).is_identity())
            throw Error("transfers_from_norms: unit norm is not the identity at " +
                        l.subgroup_label(k));
    }

    MackeyFunctor m;
    m.cs = cs;
    for (int k = 0; k < n; ++k)
        for (int h = 0; h < n; ++h) {
            if (k == h || !l.contains_pair(k, h)) continue;
            // component of nu[(k, h)] at the orbit of (eK, eH), transported
            // to V(K) -> V(H)
            GSet p = product(orbs[k], orbs[h]);
            Evaluation ep = evaluate(cs, p);
            int i0 = identity_point(level, Subgroup{g, l.subgroups[k]});
            int j0 = identity_point(level, Subgroup{g, l.subgroups[h]});
            int pt = i0 * orbs[h].size() + j0;
            const OrbitBlock& blk = ep.blocks[ep.block_of_point[pt]];
            int c = transporter(p, blk.base_point, pt);

            const IntMatrix& nu = nd.nu.at({k, h});
            IntMatrix cols = nu.block(0, blk.offset, nu.rows(), blk.rank);
            IntMatrix with_src = cols * cs.conj_mat(c, blk.stab);  // V(K) -> Eval(orb_h)

            const OrbitBlock& hb = evals[h].blocks[0];
            int d = transporter(orbs[h], hb.base_point, j0);
            // identify Eval(orb_h) = V(hb.stab) with V(H) along the point eH
            IntMatrix ident = cs.conj_mat(g.inv(d), h);  // V(d^-1 H d = hb.stab) -> V(H)
            m.tr[{k, h}] = ident * with_src;
        }

    MackeyVerdict out = check_mackey(m);
    if (!out.ok)
        throw Error("transfers_from_norms: extracted transfers fail the double coset formula: " +
                    out.detail);
    return m;
}

}  // namespace eqsm
