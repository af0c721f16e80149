#include "eqsm/io.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace eqsm {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) out.push_back(line);
    return out;
}

}  // namespace

GSet parse_gset(const FiniteGroup& g, const std::string& text) {
    const SubgroupLattice& full = g.lattice(g.full_subgroup().mask);
    std::vector<std::string> lines;
    for (const auto& raw : lines_of(text)) {
        std::string l = trim(raw);
        if (!l.empty() && l[0] != '#') lines.push_back(l);
    }
    if (lines.empty() || lines[0].rfind("level=", 0) != 0)
        throw Error("gset: first line must be level=<subgroup-label>");
    std::string lvl_label = trim(lines[0].substr(6));
    int lvl = full.find_subgroup_label(lvl_label);
    if (lvl < 0) throw Error("gset: unknown level subgroup '" + lvl_label + "'");
    Subgroup level{g, full.subgroups[lvl]};
    const SubgroupLattice& lat = g.lattice(level.mask);
    std::string top_label = lat.class_label(static_cast<int>(lat.classes.size()) - 1);

    if (lines.size() >= 2 && lines[1].rfind("orbits:", 0) == 0) {
        std::string body = trim(lines[1].substr(7));
        std::vector<std::pair<std::uint64_t, int>> orbits;
        if (!body.empty() && body != "(empty)") {
            std::string term;
            std::istringstream is(body);
            std::vector<std::string> terms;
            while (std::getline(is, term, '+')) terms.push_back(trim(term));
            for (const auto& t : terms) {
                auto star = t.find('*');
                auto lb = t.find('['), rb = t.find(']'), slash = t.find('/');
                if (star == std::string::npos || lb == std::string::npos ||
                    rb == std::string::npos || slash == std::string::npos)
                    throw Error("gset: bad orbit term '" + t + "'");
                int mult = std::stoi(trim(t.substr(0, star)));
                std::string top = trim(t.substr(lb + 1, slash - lb - 1));
                std::string stab = trim(t.substr(slash + 1, rb - slash - 1));
                if (top != top_label)
                    throw Error("gset: orbit term '" + t + "' must use level label " + top_label);
                int cls = lat.find_class_label(stab);
                if (cls < 0) throw Error("gset: unknown stabilizer class '" + stab + "'");
                if (mult < 0) throw Error("gset: negative multiplicity");
                orbits.push_back({lat.subgroups[lat.class_rep[cls]], mult});
            }
        }
        return from_orbits(level, orbits);
    }

    if (lines.size() >= 3 && lines[1].rfind("points:", 0) == 0 && lines[2] == "action:") {
        int npts = std::stoi(trim(lines[1].substr(7)));
        if (npts < 0) throw Error("gset: negative point count");
        std::vector<int> members = level.members();
        if (lines.size() != 3 + members.size())
            throw Error("gset: need one action row per level member");
        std::vector<std::vector<int>> rows(members.size());
        for (size_t i = 0; i < members.size(); ++i) {
            const std::string& l = lines[3 + i];
            auto colon = l.find(':');
            if (colon == std::string::npos) throw Error("gset: bad action row '" + l + "'");
            int elt = std::stoi(trim(l.substr(0, colon)));
            if (elt != members[i])
                throw Error("gset: action rows must list level members in ascending order");
            std::istringstream is(l.substr(colon + 1));
            int v;
            while (is >> v) rows[i].push_back(v);
            if (static_cast<int>(rows[i].size()) != npts)
                throw Error("gset: action row for element " + std::to_string(elt) +
                            " has wrong length");
        }
        return GSet(level, npts, std::move(rows));
    }
    throw Error("gset: expected an orbits: line or a points:/action: table");
}

std::string emit_gset(const GSet& t) {
    const FiniteGroup& g = t.level().group;
    const SubgroupLattice& full = g.lattice(g.full_subgroup().mask);
    const SubgroupLattice& lat = g.lattice(t.level().mask);
    std::string top_label = lat.class_label(static_cast<int>(lat.classes.size()) - 1);

    std::ostringstream os;
    os << "level=" << full.subgroup_label(full.index_of(t.level().mask)) << "\n";
    os << "orbits:";
    auto d = decompose(t);
    bool first = true;
    for (const auto& [stab, mult] : d.entries) {
        os << (first ? " " : " + ") << mult << "*[" << top_label << "/"
           << lat.class_label(lat.class_of[lat.index_of(stab)]) << "]";
        first = false;
    }
    if (first) os << " (empty)";
    os << "\n";
    return os.str();
}

namespace {

json matrix_to_json(const IntMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

IntMatrix matrix_from_json(const json& j, int rows, int cols, const std::string& path) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
        throw Error(path + ": expected " + std::to_string(rows) + "x" + std::to_string(cols) +
                    " matrix");
    IntMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const json& row = j[i];
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw Error(path + ": row " + std::to_string(i) + " must have " +
                        std::to_string(cols) + " entries");
        for (int c = 0; c < cols; ++c) {
            if (!row[c].is_number_integer())
                throw Error(path + ": entry (" + std::to_string(i) + "," + std::to_string(c) +
                            ") is not an integer");
            m.at(i, c) = row[c].get<long long>();
        }
    }
    return m;
}

// conj matrices for all elements from generator data, by walking the Cayley
// graph: conj[(gen*w, S)] = conj[(w, S)] * conj[(gen, wSw^-1)]
void complete_conjugation(CoefficientSystem& cs, const std::vector<int>& gens) {
    const FiniteGroup& g = cs.level.group;
    const SubgroupLattice& lat = cs.lat();
    const int n = static_cast<int>(lat.subgroups.size());

    std::map<std::pair<int, int>, IntMatrix> given = cs.conj;
    for (int s = 0; s < n; ++s) cs.conj[{g.identity(), s}] = IntMatrix::identity(cs.rank[s]);
    std::vector<int> queue{g.identity()};
    std::vector<bool> have(g.order(), false);
    have[g.identity()] = true;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int w = queue[qi];
        for (int gen : gens) {
            int gw = g.mul(gen, w);
            if (have[gw]) continue;
            have[gw] = true;
            queue.push_back(gw);
            for (int s = 0; s < n; ++s) {
                int ws = lat.index_of(g.conjugate_set(w, lat.subgroups[s]));
                cs.conj[{gw, s}] = cs.conj.at({w, s}) * given.at({gen, ws});
            }
        }
    }
}

}  // namespace

MackeyFile parse_mackey_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(std::string("json: ") + e.what());
    }
    if (!j.is_object()) throw Error("json: top level must be an object");
    for (const auto& [key, val] : j.items()) {
        (void)val;
        if (key != "group" && key != "levels" && key != "res" && key != "tr" && key != "conj" &&
            key != "mult" && key != "unit")
            throw Error("json: unknown key '" + key + "'");
    }
    if (!j.contains("group") || !j["group"].is_string())
        throw Error("group: missing or not a string");

    MackeyFile f;
    f.group_spec = j["group"].get<std::string>();
    f.group = make_group(f.group_spec);
    const FiniteGroup& g = f.group;
    Subgroup top = g.full_subgroup();
    const SubgroupLattice& lat = g.lattice(top.mask);
    const int n = static_cast<int>(lat.subgroups.size());

    if (!j.contains("levels") || !j["levels"].is_object()) throw Error("levels: missing object");
    CoefficientSystem& cs = f.mackey.cs;
    cs.level = top;
    cs.rank.assign(n, -1);
    for (const auto& [label, v] : j["levels"].items()) {
        int cls = lat.find_class_label(label);
        if (cls < 0) throw Error("levels." + label + ": unknown subgroup class");
        if (!v.is_number_integer() || v.get<long long>() < 0)
            throw Error("levels." + label + ": rank must be a nonnegative integer");
        for (int idx : lat.classes[cls]) cs.rank[idx] = v.get<int>();
    }
    for (int s = 0; s < n; ++s)
        if (cs.rank[s] < 0)
            throw Error("levels: missing class " + lat.class_label(lat.class_of[s]));

    auto load_pair_map = [&](const char* key, bool transpose_shape,
                             std::map<std::pair<int, int>, IntMatrix>& out) {
        if (!j.contains(key) || !j[key].is_object())
            throw Error(std::string(key) + ": missing object");
        std::set<std::pair<int, int>> wanted;
        for (int s = 0; s < n; ++s)
            for (int t = 0; t < n; ++t)
                if (s != t && lat.contains_pair(s, t)) wanted.insert({s, t});
        for (const auto& [label, v] : j[key].items()) {
            auto lt = label.find('<');
            if (lt == std::string::npos)
                throw Error(std::string(key) + "." + label + ": key must be K<K'");
            int s = lat.find_subgroup_label(label.substr(0, lt));
            int t = lat.find_subgroup_label(label.substr(lt + 1));
            if (s < 0 || t < 0 || s == t || !lat.contains_pair(s, t))
                throw Error(std::string(key) + "." + label + ": not a proper containment");
            int rows = transpose_shape ? cs.rank[t] : cs.rank[s];
            int cols = transpose_shape ? cs.rank[s] : cs.rank[t];
            out[{s, t}] = matrix_from_json(v, rows, cols, std::string(key) + "." + label);
            wanted.erase({s, t});
        }
        if (!wanted.empty()) {
            auto [s, t] = *wanted.begin();
            throw Error(std::string(key) + ": missing pair " + lat.subgroup_label(s) + "<" +
                        lat.subgroup_label(t));
        }
    };
    load_pair_map("res", false, cs.res);
    load_pair_map("tr", true, f.mackey.tr);

    if (!j.contains("conj") || !j["conj"].is_object()) throw Error("conj: missing object");
    std::vector<int> gens = g.generators(top.mask);
    std::set<std::pair<int, int>> wanted;
    for (int gen : gens)
        for (int s = 0; s < n; ++s) wanted.insert({gen, s});
    for (const auto& [label, v] : j["conj"].items()) {
        auto colon = label.find(':');
        if (colon == std::string::npos) throw Error("conj." + label + ": key must be g:K");
        int e = -1;
        try {
            e = std::stoi(label.substr(0, colon));
        } catch (...) {
            throw Error("conj." + label + ": bad element index");
        }
        int s = lat.find_subgroup_label(label.substr(colon + 1));
        if (s < 0) throw Error("conj." + label + ": unknown subgroup");
        if (std::find(gens.begin(), gens.end(), e) == gens.end())
            throw Error("conj." + label + ": element is not in the canonical generator list");
        int gs = lat.index_of(g.conjugate_set(e, lat.subgroups[s]));
        cs.conj[{e, s}] = matrix_from_json(v, cs.rank[s], cs.rank[gs], "conj." + label);
        wanted.erase({e, s});
    }
    if (!wanted.empty()) {
        auto [e, s] = *wanted.begin();
        throw Error("conj: missing key " + std::to_string(e) + ":" + lat.subgroup_label(s));
    }
    complete_conjugation(cs, gens);

    if (j.contains("mult") != j.contains("unit"))
        throw Error("mult/unit: both or neither must be present");
    if (j.contains("mult")) {
        GreenFunctor green;
        green.mackey = f.mackey;
        if (!j["mult"].is_object() || !j["unit"].is_object())
            throw Error("mult/unit: must be objects");
        for (int s = 0; s < n; ++s) {
            std::string label = lat.subgroup_label(s);
            if (!j["mult"].contains(label)) throw Error("mult: missing subgroup " + label);
            if (!j["unit"].contains(label)) throw Error("unit: missing subgroup " + label);
            const json& mv = j["mult"][label];
            size_t want = static_cast<size_t>(cs.rank[s]) * cs.rank[s] * cs.rank[s];
            if (!mv.is_array() || mv.size() != want)
                throw Error("mult." + label + ": expected " + std::to_string(want) + " entries");
            Bilinear b;
            b.rank = cs.rank[s];
            for (const auto& x : mv) {
                if (!x.is_number_integer()) throw Error("mult." + label + ": non-integer entry");
                b.c.push_back(x.get<long long>());
            }
            const json& uv = j["unit"][label];
            if (!uv.is_array() || static_cast<int>(uv.size()) != cs.rank[s])
                throw Error("unit." + label + ": expected " + std::to_string(cs.rank[s]) +
                            " entries");
            std::vector<long long> unit;
            for (const auto& x : uv) {
                if (!x.is_number_integer()) throw Error("unit." + label + ": non-integer entry");
                unit.push_back(x.get<long long>());
            }
            green.mult[s] = std::move(b);
            green.unit[s] = std::move(unit);
        }
        f.green = std::move(green);
    }
    return f;
}

std::string emit_mackey_json(const std::string& group_spec, const MackeyFunctor& m,
                             const GreenFunctor* green) {
    const FiniteGroup& g = m.cs.level.group;
    const SubgroupLattice& lat = m.cs.lat();
    const int n = static_cast<int>(lat.subgroups.size());

    json j;
    j["group"] = group_spec;
    json levels;
    for (size_t c = 0; c < lat.classes.size(); ++c)
        levels[lat.class_label(static_cast<int>(c))] = m.cs.rank[lat.class_rep[c]];
    j["levels"] = std::move(levels);

    json res, tr;
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
            if (s == t || !lat.contains_pair(s, t)) continue;
            std::string key = lat.subgroup_label(s) + "<" + lat.subgroup_label(t);
            res[key] = matrix_to_json(m.cs.res_mat(s, t));
            tr[key] = matrix_to_json(m.tr_mat(s, t));
        }
    j["res"] = std::move(res);
    j["tr"] = std::move(tr);

    json conj;
    for (int gen : g.generators(g.full_subgroup().mask))
        for (int s = 0; s < n; ++s)
            conj[std::to_string(gen) + ":" + lat.subgroup_label(s)] =
                matrix_to_json(m.cs.conj_mat(gen, s));
    j["conj"] = std::move(conj);

    if (green) {
        json mult, unit;
        for (int s = 0; s < n; ++s) {
            mult[lat.subgroup_label(s)] = green->mult.at(s).c;
            unit[lat.subgroup_label(s)] = green->unit.at(s);
        }
        j["mult"] = std::move(mult);
        j["unit"] = std::move(unit);
    }
    return j.dump(2) + "\n";
}

std::set<std::pair<int, int>> parse_pairs(const FiniteGroup& g, const std::string& text) {
    const SubgroupLattice& lat = g.lattice(g.full_subgroup().mask);
    std::set<std::pair<int, int>> pairs;
    for (const auto& raw : lines_of(text)) {
        std::string l = trim(raw);
        if (l.empty() || l[0] == '#') continue;
        auto lt = l.find('<');
        if (lt == std::string::npos) throw Error("pairs: line '" + l + "' must be K < H");
        std::string kl = trim(l.substr(0, lt)), hl = trim(l.substr(lt + 1));
        int kc = lat.find_class_label(kl), hc = lat.find_class_label(hl);
        if (kc < 0) throw Error("pairs: unknown subgroup class '" + kl + "'");
        if (hc < 0) throw Error("pairs: unknown subgroup class '" + hl + "'");
        // class-level line: every exact pair with these classes
        bool any = false;
        for (int k : lat.classes[kc])
            for (int h : lat.classes[hc])
                if (lat.contains_pair(k, h)) {
                    pairs.insert({k, h});
                    any = true;
                }
        if (!any) throw Error("pairs: no containment realizes '" + l + "'");
    }
    return pairs;
}

std::string emit_pairs(const IndexingSystem& o) {
    const SubgroupLattice& lat = o.group.lattice(o.group.full_subgroup().mask);
    // group non-reflexive pairs at class granularity, verifying saturation
    std::set<std::pair<int, int>> class_pairs;
    for (const auto& [k, h] : o.pairs) {
        if (k == h) continue;
        class_pairs.insert({lat.class_of[k], lat.class_of[h]});
    }
    for (const auto& [kc, hc] : class_pairs)
        for (int k : lat.classes[kc])
            for (int h : lat.classes[hc])
                if (lat.contains_pair(k, h) && !o.contains(k, h))
                    throw Error("emit_pairs: pair set is not expressible at class granularity");

    std::vector<std::pair<int, int>> sorted(class_pairs.begin(), class_pairs.end());
    std::sort(sorted.begin(), sorted.end(), [&](const auto& a, const auto& b) {
        int ha = lat.order_of(lat.class_rep[a.second]), hb = lat.order_of(lat.class_rep[b.second]);
        if (ha != hb) return ha < hb;
        if (a.second != b.second) return a.second < b.second;
        int ka = lat.order_of(lat.class_rep[a.first]), kb = lat.order_of(lat.class_rep[b.first]);
        if (ka != kb) return ka < kb;
        return a.first < b.first;
    });
    std::ostringstream os;
    for (const auto& [kc, hc] : sorted)
        os << lat.class_label(kc) << " < " << lat.class_label(hc) << "\n";
    return os.str();
}

SubgroupFamily parse_family(const FiniteGroup& g, const std::string& spec, int* closure_added) {
    std::string s = trim(spec);
    if (s == "proper" || s == "trivial" || s == "all") {
        if (closure_added) *closure_added = 0;
        return builtin_family(g, s);
    }
    const SubgroupLattice& lat = g.lattice(g.full_subgroup().mask);
    std::vector<std::uint64_t> members;
    std::istringstream is(s);
    std::string label;
    while (std::getline(is, label, ',')) {
        label = trim(label);
        if (label.empty()) continue;
        int cls = lat.find_class_label(label);
        if (cls < 0) throw Error("family: unknown subgroup class '" + label + "'");
        for (int idx : lat.classes[cls]) members.push_back(lat.subgroups[idx]);
    }
    if (members.empty()) throw Error("family: empty spec");
    return make_family(g, members, closure_added);
}

}  // namespace eqsm
