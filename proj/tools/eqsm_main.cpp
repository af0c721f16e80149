// eqsm: finite-group equivariant combinatorics workbench.
//
// Exit codes: 0 = success / property holds, 1 = property violated (witness
// on stdout), 2 = input error (message on stderr).

#include <fstream>
#include <iostream>
#include <sstream>

#include "eqsm/coeff.hpp"
#include "eqsm/group.hpp"
#include "eqsm/gset.hpp"
#include "eqsm/indexing.hpp"
#include "eqsm/io.hpp"
#include "eqsm/norm_closure.hpp"
#include "json.hpp"

using namespace eqsm;
using nlohmann::json;

namespace {

const char* kUsage =
    "usage: eqsm <verb> <action> [args] [flags]\n"
    "\n"
    "verbs and actions:\n"
    "  group    show | double-cosets <K> <H> | weyl <H>\n"
    "  gset     decompose | canon\n"
    "  mackey   burnside | check | canon | roundtrip\n"
    "  indexing enumerate | check | generate | oracle | builtin <name> | canon\n"
    "  norms    max-preserved | check <K> <H>\n"
    "\n"
    "flags:\n"
    "  --group SPEC    group description (catalog:S3, perm:(1 2);(1 2 3), table:...)\n"
    "  --data FILE     data file (gset text or mackey json)\n"
    "  --family SPEC   proper | trivial | all | comma-separated class labels\n"
    "  --pairs FILE    indexing pairs file (lines: K < H)\n"
    "  --format FMT    human | json | dot\n"
    "  --bound N       oracle size bound (default 8)\n";

struct Args {
    std::string verb, action;
    std::vector<std::string> positional;
    std::string group, data, family, pairs;
    std::string format = "human";
    int bound = 8;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Args parse_args(int argc, char** argv) {
    Args a;
    std::vector<std::string> words(argv + 1, argv + argc);
    size_t i = 0;
    auto need_value = [&](const std::string& flag) -> std::string {
        if (i + 1 >= words.size()) throw UsageError("flag " + flag + " needs a value");
        return words[++i];
    };
    for (; i < words.size(); ++i) {
        const std::string& w = words[i];
        if (w == "--group")
            a.group = need_value(w);
        else if (w == "--data")
            a.data = need_value(w);
        else if (w == "--family")
            a.family = need_value(w);
        else if (w == "--pairs")
            a.pairs = need_value(w);
        else if (w == "--format") {
            a.format = need_value(w);
            if (a.format != "human" && a.format != "json" && a.format != "dot")
                throw UsageError("unknown format '" + a.format + "'");
        } else if (w == "--bound") {
            try {
                a.bound = std::stoi(need_value(w));
            } catch (...) {
                throw UsageError("--bound needs an integer");
            }
        } else if (w.rfind("--", 0) == 0)
            throw UsageError("unknown flag '" + w + "'");
        else if (a.verb.empty())
            a.verb = w;
        else if (a.action.empty())
            a.action = w;
        else
            a.positional.push_back(w);
    }
    if (a.verb.empty() || a.action.empty()) throw UsageError("missing verb or action");
    return a;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

FiniteGroup require_group(const Args& a) {
    if (a.group.empty()) throw Error("this action needs --group");
    return make_group(a.group);
}

Subgroup subgroup_arg(const FiniteGroup& g, const std::string& label) {
    const SubgroupLattice& lat = g.lattice(g.full_subgroup().mask);
    int idx = lat.find_subgroup_label(label);
    if (idx < 0) throw Error("unknown subgroup label '" + label + "'");
    return Subgroup{g, lat.subgroups[idx]};
}

std::string members_text(const Subgroup& s) {
    std::string out = "{";
    bool first = true;
    for (int m : s.members()) {
        if (!first) out += " ";
        out += s.group.element_name(m);
        first = false;
    }
    return out + "}";
}

// ---- group verb -------------------------------------------------------

int cmd_group_show(const Args& a) {
    FiniteGroup g = require_group(a);
    const SubgroupLattice& lat = g.lattice(g.full_subgroup().mask);
    if (a.format == "json") {
        json j;
        j["name"] = g.name();
        j["order"] = g.order();
        json classes = json::array();
        for (size_t c = 0; c < lat.classes.size(); ++c) {
            json jc;
            jc["label"] = lat.class_label(static_cast<int>(c));
            jc["order"] = lat.order_of(lat.class_rep[c]);
            jc["count"] = lat.classes[c].size();
            json mem = json::array();
            for (int m : Subgroup{g, lat.subgroups[lat.class_rep[c]]}.members()) mem.push_back(m);
            jc["representative"] = std::move(mem);
            classes.push_back(std::move(jc));
        }
        j["subgroup_classes"] = std::move(classes);
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "group: " << g.name() << " (order " << g.order() << ")\n";
    std::cout << "subgroup classes: " << lat.classes.size() << " (" << lat.subgroups.size()
              << " subgroups)\n";
    for (size_t c = 0; c < lat.classes.size(); ++c) {
        Subgroup rep{g, lat.subgroups[lat.class_rep[c]]};
        std::cout << "  " << lat.class_label(static_cast<int>(c)) << "  order "
                  << lat.order_of(lat.class_rep[c]) << "  conjugates " << lat.classes[c].size()
                  << "  rep " << members_text(rep) << "\n";
    }
    return 0;
}

int cmd_group_double_cosets(const Args& a) {
    FiniteGroup g = require_group(a);
    if (a.positional.size() != 2) throw Error("double-cosets needs two subgroup labels");
    Subgroup k = subgroup_arg(g, a.positional[0]);
    Subgroup h = subgroup_arg(g, a.positional[1]);
    DoubleCosetDecomposition dc = double_cosets(k, h);
    const SubgroupLattice& lat = g.lattice(g.full_subgroup().mask);
    if (a.format == "json") {
        json j;
        j["group"] = g.name();
        j["k"] = a.positional[0];
        j["h"] = a.positional[1];
        json cosets = json::array();
        for (size_t i = 0; i < dc.reps.size(); ++i) {
            json c;
            c["rep"] = dc.reps[i];
            c["size"] = k.order() * h.order() / dc.stabilizers[i].order();
            c["stabilizer"] = lat.subgroup_label(lat.index_of(dc.stabilizers[i].mask));
            cosets.push_back(std::move(c));
        }
        j["double_cosets"] = std::move(cosets);
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "group: " << g.name() << ", K=" << a.positional[0] << ", H=" << a.positional[1]
              << "\n";
    std::cout << "double cosets: " << dc.reps.size() << "\n";
    for (size_t i = 0; i < dc.reps.size(); ++i)
        std::cout << "  x=" << dc.reps[i] << " (" << g.element_name(dc.reps[i]) << ")  |KxH|="
                  << k.order() * h.order() / dc.stabilizers[i].order() << "  stabilizer="
                  << lat.subgroup_label(lat.index_of(dc.stabilizers[i].mask)) << "\n";
    return 0;
}

int cmd_group_weyl(const Args& a) {
    FiniteGroup g = require_group(a);
    if (a.positional.size() != 1) throw Error("weyl needs one subgroup label");
    Subgroup h = subgroup_arg(g, a.positional[0]);
    QuotientGroup w = weyl_group(h);
    if (a.format == "json") {
        json j;
        j["group"] = g.name();
        j["h"] = a.positional[0];
        j["weyl_order"] = w.group.order();
        j["normalizer_order"] = Subgroup{g, normalizer_mask(h)}.order();
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "group: " << g.name() << ", H=" << a.positional[0] << "\n";
    std::cout << "normalizer order: " << Subgroup{g, normalizer_mask(h)}.order() << "\n";
    std::cout << "weyl group order: " << w.group.order() << "\n";
    return 0;
}

// ---- gset verb --------------------------------------------------------

int cmd_gset(const Args& a) {
    FiniteGroup g = require_group(a);
    if (a.data.empty()) throw Error("this action needs --data");
    GSet t = parse_gset(g, read_file(a.data));
    if (a.action == "canon") {
        std::cout << emit_gset(t);
        return 0;
    }
    auto d = decompose(t);
    if (a.format == "json") {
        const SubgroupLattice& lat = g.lattice(t.level().mask);
        json j;
        j["size"] = t.size();
        json orbits = json::array();
        for (const auto& [stab, mult] : d.entries) {
            json o;
            o["stabilizer"] = lat.class_label(lat.class_of[lat.index_of(stab)]);
            o["multiplicity"] = mult;
            orbits.push_back(std::move(o));
        }
        j["orbits"] = std::move(orbits);
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << emit_gset(t);
    std::cout << "size: " << t.size() << "\n";
    return 0;
}

// ---- mackey verb ------------------------------------------------------

int cmd_mackey_burnside(const Args& a) {
    FiniteGroup g = require_group(a);
    GreenFunctor green = burnside(g);
    std::cout << emit_mackey_json(a.group, green.mackey, &green);
    return 0;
}

int cmd_mackey_check(const Args& a) {
    if (a.data.empty()) throw Error("check needs --data");
    MackeyFile f = parse_mackey_json(read_file(a.data));
    if (!a.group.empty() && a.group != f.group_spec)
        throw Error("--group '" + a.group + "' does not match the file's group '" + f.group_spec +
                    "'");
    MackeyVerdict v = check_mackey(f.mackey);
    if (!v.ok) {
        std::cout << "FAIL (" << v.stage << "): " << v.detail << "\n";
        if (v.witness) {
            const SubgroupLattice& lat = f.mackey.cs.lat();
            std::cout << "witness: U=" << lat.subgroup_label(v.witness->ambient)
                      << " K=" << lat.subgroup_label(v.witness->k)
                      << " H=" << lat.subgroup_label(v.witness->h) << " x=" << v.witness->x
                      << "\n";
            std::cout << "lhs: " << v.witness->lhs.to_string() << "\n";
            std::cout << "rhs: " << v.witness->rhs.to_string() << "\n";
        }
        return 1;
    }
    if (f.green) {
        GreenVerdict gv = green_check(*f.green);
        if (!gv.ok) {
            std::cout << "FAIL (green " << gv.stage << "): " << gv.detail << "\n";
            return 1;
        }
        std::cout << "OK: mackey and green axioms hold\n";
        return 0;
    }
    std::cout << "OK: mackey axioms hold\n";
    return 0;
}

int cmd_mackey_canon(const Args& a) {
    if (a.data.empty()) throw Error("canon needs --data");
    MackeyFile f = parse_mackey_json(read_file(a.data));
    std::cout << emit_mackey_json(f.group_spec, f.mackey, f.green ? &*f.green : nullptr);
    return 0;
}

int cmd_mackey_roundtrip(const Args& a) {
    if (a.data.empty()) throw Error("roundtrip needs --data");
    MackeyFile f = parse_mackey_json(read_file(a.data));
    MackeyVerdict v = check_mackey(f.mackey);
    if (!v.ok) {
        std::cout << "FAIL (" << v.stage << "): " << v.detail << "\n";
        return 1;
    }
    NormData n = norms_from_transfers(f.mackey);
    MackeyFunctor back = transfers_from_norms(n);
    if (!(back == f.mackey)) {
        std::cout << "FAIL: norms/transfers round trip is not the identity\n";
        return 1;
    }
    NormData n2 = norms_from_transfers(back);
    if (!(n2 == n)) {
        std::cout << "FAIL: transfers/norms round trip is not the identity\n";
        return 1;
    }
    std::cout << "OK: norms<->transfers round trips are the identity (" << n.nu.size()
              << " norm components)\n";
    return 0;
}

// ---- indexing verb ----------------------------------------------------

std::string system_line(const IndexingSystem& o) {
    std::string pairs = emit_pairs(o);
    std::string out;
    for (char c : pairs) {
        if (c == '\n')
            out += "; ";
        else if (c != ' ')
            out += c;
    }
    if (out.size() >= 2) out.resize(out.size() - 2);
    if (out.empty()) out = "(trivial)";
    return out;
}

int cmd_indexing_enumerate(const Args& a) {
    FiniteGroup g = require_group(a);
    IndexingPoset p = enumerate_systems(g);
    if (a.format == "json") {
        json j;
        j["group"] = g.name();
        j["count"] = p.systems.size();
        json systems = json::array();
        for (size_t i = 0; i < p.systems.size(); ++i) {
            json s;
            s["index"] = i;
            s["pairs"] = json::array();
            std::istringstream is(emit_pairs(p.systems[i]));
            std::string line;
            while (std::getline(is, line)) s["pairs"].push_back(line);
            systems.push_back(std::move(s));
        }
        j["systems"] = std::move(systems);
        json hasse = json::array();
        for (auto [x, y] : p.hasse_edges) hasse.push_back(json::array({x, y}));
        j["hasse"] = std::move(hasse);
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    if (a.format == "dot") {
        std::cout << "digraph indexing_systems {\n  rankdir=BT;\n";
        for (size_t i = 0; i < p.systems.size(); ++i)
            std::cout << "  s" << i << " [label=\"" << i << ": " << system_line(p.systems[i])
                      << "\"];\n";
        for (auto [x, y] : p.hasse_edges) std::cout << "  s" << x << " -> s" << y << ";\n";
        std::cout << "}\n";
        return 0;
    }
    std::cout << "group: " << g.name() << "\n";
    std::cout << "indexing systems: " << p.systems.size() << "\n";
    for (size_t i = 0; i < p.systems.size(); ++i)
        std::cout << "  #" << i << ": " << system_line(p.systems[i]) << "\n";
    std::cout << "hasse edges: " << p.hasse_edges.size() << "\n";
    return 0;
}

int cmd_indexing_check(const Args& a) {
    FiniteGroup g = require_group(a);
    if (a.pairs.empty()) throw Error("check needs --pairs");
    IndexingSystem o{g, parse_pairs(g, read_file(a.pairs))};
    const SubgroupLattice& lat = g.lattice(g.full_subgroup().mask);
    for (int h = 0; h < static_cast<int>(lat.subgroups.size()); ++h) o.pairs.insert({h, h});
    AxiomVerdict v = check_axioms(o);
    if (!v.ok) {
        std::cout << "FAIL (clause " << v.clause << "): " << v.detail << "\n";
        return 1;
    }
    std::cout << "OK: indexing system axioms hold (" << o.size() << " non-reflexive pairs)\n";
    return 0;
}

int cmd_indexing_generate(const Args& a) {
    FiniteGroup g = require_group(a);
    if (a.pairs.empty()) throw Error("generate needs --pairs");
    IndexingSystem o = generate(g, parse_pairs(g, read_file(a.pairs)));
    std::cout << emit_pairs(o);
    return 0;
}

int cmd_indexing_oracle(const Args& a) {
    FiniteGroup g = require_group(a);
    if (a.pairs.empty()) throw Error("oracle needs --pairs");
    IndexingSystem o{g, parse_pairs(g, read_file(a.pairs))};
    const SubgroupLattice& lat = g.lattice(g.full_subgroup().mask);
    for (int h = 0; h < static_cast<int>(lat.subgroups.size()); ++h) o.pairs.insert({h, h});
    OracleVerdict v = set_level_oracle(o, a.bound);
    if (!v.ok) {
        std::cout << "FAIL: " << v.detail << "\n";
        return 1;
    }
    std::cout << "OK: set-level closure verified at bound " << a.bound << "\n";
    return 0;
}

int cmd_indexing_builtin(const Args& a) {
    FiniteGroup g = require_group(a);
    if (a.positional.size() != 1) throw Error("builtin needs a name: trivial | complete | proper");
    std::cout << emit_pairs(builtin_system(g, a.positional[0]));
    return 0;
}

int cmd_indexing_canon(const Args& a) {
    FiniteGroup g = require_group(a);
    if (a.pairs.empty()) throw Error("canon needs --pairs");
    IndexingSystem o{g, parse_pairs(g, read_file(a.pairs))};
    std::cout << emit_pairs(o);
    return 0;
}

// ---- norms verb -------------------------------------------------------

int cmd_norms_max_preserved(const Args& a) {
    FiniteGroup g = require_group(a);
    if (a.family.empty()) throw Error("max-preserved needs --family");
    int added = 0;
    SubgroupFamily f = parse_family(g, a.family, &added);
    ClosureReport r = max_preserved(f);
    const SubgroupLattice& lat = g.lattice(g.full_subgroup().mask);

    // report failing pair orbits at class granularity
    std::set<std::pair<int, int>> fail_classes;
    std::map<std::pair<int, int>, NormWitness> fail_witness;
    for (const auto& [pr, w] : r.witnesses) {
        std::pair<int, int> key{lat.class_of[pr.first], lat.class_of[pr.second]};
        if (fail_classes.insert(key).second) fail_witness[key] = w;
    }

    if (a.format == "json") {
        json j;
        j["group"] = g.name();
        j["family"] = a.family;
        j["family_closure_added"] = added;
        j["is_indexing_system"] = r.is_indexing_system;
        json fails = json::array();
        for (const auto& [key, w] : fail_witness) {
            json x;
            x["pair"] = lat.class_label(key.first) + " < " + lat.class_label(key.second);
            x["generator"] = lat.subgroup_label(w.generator);
            x["stabilizer"] = lat.subgroup_label(w.stabilizer);
            fails.push_back(std::move(x));
        }
        j["failures"] = std::move(fails);
        if (r.maximal_system) {
            j["maximal_system"] = json::array();
            std::istringstream is(emit_pairs(*r.maximal_system));
            std::string line;
            while (std::getline(is, line)) j["maximal_system"].push_back(line);
        }
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    if (a.format == "dot") {
        IndexingPoset p = enumerate_systems(g);
        std::cout << "digraph preserved_norms {\n  rankdir=BT;\n";
        for (size_t i = 0; i < p.systems.size(); ++i) {
            bool inside = std::includes(r.pass_pairs.begin(), r.pass_pairs.end(),
                                        p.systems[i].pairs.begin(), p.systems[i].pairs.end());
            bool is_max = r.maximal_system && p.systems[i] == *r.maximal_system;
            std::cout << "  s" << i << " [label=\"" << i << ": " << system_line(p.systems[i])
                      << "\"";
            if (is_max)
                std::cout << " peripheries=2 style=filled";
            else if (inside)
                std::cout << " style=filled";
            std::cout << "];\n";
        }
        for (auto [x, y] : p.hasse_edges) std::cout << "  s" << x << " -> s" << y << ";\n";
        std::cout << "}\n";
        return 0;
    }

    std::cout << "group: " << g.name() << "\n";
    std::cout << "family: " << a.family << " (" << f.members.size() << " subgroups";
    if (added) std::cout << ", closure added " << added;
    std::cout << ")\n";
    int total = 0;
    for (int k = 0; k < static_cast<int>(lat.subgroups.size()); ++k)
        for (int h = 0; h < static_cast<int>(lat.subgroups.size()); ++h)
            if (lat.contains_pair(k, h)) ++total;
    std::cout << "pairs: " << total << " tested, " << r.pass_pairs.size()
              << " preserve the acyclics\n";
    for (const auto& [key, w] : fail_witness)
        std::cout << "  FAIL " << lat.class_label(key.first) << " < "
                  << lat.class_label(key.second) << "  witness: generator "
                  << lat.subgroup_label(w.generator) << ", stabilizer "
                  << lat.subgroup_label(w.stabilizer) << "\n";
    std::cout << "pass set is an indexing system: " << (r.is_indexing_system ? "yes" : "no")
              << "\n";
    if (r.maximal_system) {
        std::cout << "maximal preserved system:\n";
        std::string pairs = emit_pairs(*r.maximal_system);
        if (pairs.empty())
            std::cout << "  (trivial)\n";
        else {
            std::istringstream is(pairs);
            std::string line;
            while (std::getline(is, line)) std::cout << "  " << line << "\n";
        }
    }
    return 0;
}

int cmd_norms_check(const Args& a) {
    FiniteGroup g = require_group(a);
    if (a.family.empty()) throw Error("check needs --family");
    if (a.positional.size() != 2) throw Error("check needs two subgroup labels K H");
    SubgroupFamily f = parse_family(g, a.family);
    Subgroup k = subgroup_arg(g, a.positional[0]);
    Subgroup h = subgroup_arg(g, a.positional[1]);
    NormVerdict v = norm_preserves(k, h, f);
    const SubgroupLattice& lat = g.lattice(g.full_subgroup().mask);
    if (!v.ok) {
        std::cout << "FAIL: norm " << a.positional[0] << " -> " << a.positional[1]
                  << " does not preserve the acyclics\n";
        std::cout << "witness: generator " << lat.subgroup_label(v.witness->generator)
                  << ", stabilizer " << lat.subgroup_label(v.witness->stabilizer) << "\n";
        return 1;
    }
    std::cout << "OK: norm " << a.positional[0] << " -> " << a.positional[1]
              << " preserves the acyclics\n";
    return 0;
}

int dispatch(const Args& a) {
    if (a.verb == "group") {
        if (a.action == "show") return cmd_group_show(a);
        if (a.action == "double-cosets") return cmd_group_double_cosets(a);
        if (a.action == "weyl") return cmd_group_weyl(a);
    } else if (a.verb == "gset") {
        if (a.action == "decompose" || a.action == "canon") return cmd_gset(a);
    } else if (a.verb == "mackey") {
        if (a.action == "burnside") return cmd_mackey_burnside(a);
        if (a.action == "check") return cmd_mackey_check(a);
        if (a.action == "canon") return cmd_mackey_canon(a);
        if (a.action == "roundtrip") return cmd_mackey_roundtrip(a);
    } else if (a.verb == "indexing") {
        if (a.action == "enumerate") return cmd_indexing_enumerate(a);
        if (a.action == "check") return cmd_indexing_check(a);
        if (a.action == "generate") return cmd_indexing_generate(a);
        if (a.action == "oracle") return cmd_indexing_oracle(a);
        if (a.action == "builtin") return cmd_indexing_builtin(a);
        if (a.action == "canon") return cmd_indexing_canon(a);
    } else if (a.verb == "norms") {
        if (a.action == "max-preserved") return cmd_norms_max_preserved(a);
        if (a.action == "check") return cmd_norms_check(a);
    }
    throw UsageError("unknown command '" + a.verb + " " + a.action + "'");
}

}  // namespace

int main(int argc, char** argv) {
    try {
        Args a = parse_args(argc, argv);
        return dispatch(a);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n" << kUsage;
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
