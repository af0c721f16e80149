// Acceptance suite: one line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <sys/wait.h>

#include "eqsm/coeff.hpp"
#include "eqsm/group.hpp"
#include "eqsm/gset.hpp"
#include "eqsm/indexing.hpp"
#include "eqsm/io.hpp"
#include "eqsm/norm_closure.hpp"
#include "support.hpp"

using namespace eqsm;
using Clock = std::chrono::steady_clock;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& msg) {
    if (!cond) throw Failure(msg);
}

const char* kCatalog[] = {"catalog:C2", "catalog:C4", "catalog:C8",
                          "catalog:S3", "catalog:D8", "catalog:Q8"};

// ---------------------------------------------------------------- 1 ----

void criterion1() {
    auto t0 = Clock::now();
    const std::pair<const char*, size_t> expected[] = {
        {"catalog:C2", 2}, {"catalog:C4", 5}, {"catalog:C8", 14}};
    for (const auto& [spec, count] : expected) {
        FiniteGroup g = make_group(spec);
        IndexingPoset p = enumerate_systems(g);
        require(p.systems.size() == count,
                std::string(spec) + ": expected " + std::to_string(count) + " systems, got " +
                    std::to_string(p.systems.size()));
        for (const auto& s : p.systems) {
            require(check_axioms(s).ok, std::string(spec) + ": enumerated system fails axioms");
            require(set_level_oracle(s, 8).ok,
                    std::string(spec) + ": enumerated system fails the set-level oracle");
        }
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    require(secs < 10.0, "census runtime " + std::to_string(secs) + "s exceeds 10s");
}

// ---------------------------------------------------------------- 2 ----

void criterion2() {
    auto t0 = Clock::now();
    for (const char* spec : kCatalog) {
        FiniteGroup g = make_group(spec);
        ClosureReport r = max_preserved(builtin_family(g, "proper"));
        IndexingSystem proper = builtin_system(g, "proper");
        require(r.is_indexing_system, std::string(spec) + ": pass set is not an indexing system");
        require(r.maximal_system.has_value() && *r.maximal_system == proper,
                std::string(spec) + ": maximal preserved system is not the proper system");
        require(r.pass_pairs == proper.pairs,
                std::string(spec) + ": pass pairs differ from the proper system");
        // every pair outside fails, with a fixed-point witness (stabilizer = H)
        const SubgroupLattice& lat = g.lattice(g.full_subgroup().mask);
        int outside = 0;
        for (int k = 0; k < static_cast<int>(lat.subgroups.size()); ++k)
            for (int h = 0; h < static_cast<int>(lat.subgroups.size()); ++h)
                if (lat.contains_pair(k, h) && !proper.contains(k, h)) ++outside;
        require(static_cast<int>(r.witnesses.size()) == outside,
                std::string(spec) + ": not every outside pair has a witness");
        for (const auto& [pair, w] : r.witnesses)
            require(lat.subgroups[w.stabilizer] == lat.subgroups[pair.second],
                    std::string(spec) + ": witness is not a fixed point");
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    require(secs < 30.0, "runtime " + std::to_string(secs) + "s exceeds 30s");
}

// ---------------------------------------------------------------- 3 ----

void roundtrip_exact(const MackeyFunctor& m, const std::string& what) {
    NormData n = norms_from_transfers(m);
    MackeyFunctor back = transfers_from_norms(n);
    require(back == m, what + ": transfers -> norms -> transfers is not the identity");
    NormData n2 = norms_from_transfers(back);
    require(n2 == n, what + ": norms -> transfers -> norms is not the identity");
}

void criterion3() {
    for (const char* spec : {"catalog:C2", "catalog:C4", "catalog:S3"})
        roundtrip_exact(burnside(make_group(spec)).mackey, spec);
    std::mt19937_64 rng(0x5eed2026);
    const char* groups[] = {"catalog:C2", "catalog:C4", "catalog:S3"};
    for (int i = 0; i < 100; ++i) {
        FiniteGroup g = make_group(groups[i % 3]);
        MackeyFunctor m = testsupport::random_valid_mackey(g, rng);
        for (int rk : m.cs.rank)
            require(rk <= 3, "random functor rank exceeds 3");
        roundtrip_exact(m, std::string(groups[i % 3]) + " random #" + std::to_string(i));
    }
}

// ---------------------------------------------------------------- 4 ----

// independent recomputation of one double coset instance
std::pair<IntMatrix, IntMatrix> double_coset_instance(const MackeyFunctor& m, int u, int k, int h) {
    const SubgroupLattice& l = m.cs.lat();
    const FiniteGroup& g = m.cs.level.group;
    Subgroup us{g, l.subgroups[u]};
    std::uint64_t km = l.subgroups[k], hm = l.subgroups[h];
    IntMatrix lhs = m.cs.res_mat(k, u) * m.tr_mat(h, u);
    IntMatrix rhs(m.cs.rank[k], m.cs.rank[h]);
    std::uint64_t seen = 0;
    for (int x : us.members()) {
        if ((seen >> x) & 1) continue;
        for (int a : us.members()) {
            if (!((km >> a) & 1)) continue;
            for (int b : us.members())
                if ((hm >> b) & 1) seen |= std::uint64_t{1} << g.mul(g.mul(a, x), b);
        }
        int kx = l.index_of(km & g.conjugate_set(x, hm));
        int hx = l.index_of(g.conjugate_set(g.inv(x), l.subgroups[kx]));
        rhs = rhs + m.tr_mat(kx, k) * m.cs.conj_mat(g.inv(x), kx) * m.cs.res_mat(hx, h);
    }
    return {lhs, rhs};
}

void criterion4() {
    for (const char* spec : kCatalog) {
        MackeyVerdict v = check_mackey(burnside(make_group(spec)).mackey);
        require(v.ok, std::string(spec) + ": burnside fails check_mackey: " + v.detail);
    }

    FiniteGroup s3 = make_group("catalog:S3");
    MackeyFunctor base = burnside(s3).mackey;
    std::vector<std::pair<int, int>> keys;
    for (const auto& kv : base.tr) keys.push_back(kv.first);
    std::mt19937_64 rng(0xacce5504);
    std::uniform_int_distribution<int> dkey(0, static_cast<int>(keys.size()) - 1);
    std::uniform_int_distribution<long long> delta(1, 3);
    for (int i = 0; i < 20; ++i) {
        MackeyFunctor bad = base;
        auto key = keys[dkey(rng)];
        IntMatrix& t = bad.tr.at(key);
        std::uniform_int_distribution<int> dr(0, t.rows() - 1), dc(0, t.cols() - 1);
        int r = dr(rng), c = dc(rng);
        long long d = delta(rng) * (i % 2 == 0 ? 1 : -1);
        t.at(r, c) += d;

        MackeyVerdict v = check_mackey(bad);
        require(!v.ok, "mutation #" + std::to_string(i) + " was not detected");
        require(v.stage == "double coset formula",
                "mutation #" + std::to_string(i) + " failed at stage " + v.stage);
        require(v.witness.has_value(), "mutation #" + std::to_string(i) + " carries no witness");
        auto [lhs, rhs] = double_coset_instance(bad, v.witness->ambient, v.witness->k, v.witness->h);
        require(lhs == v.witness->lhs && rhs == v.witness->rhs && lhs != rhs,
                "mutation #" + std::to_string(i) + ": witness does not reproduce the violation");
    }
}

// ---------------------------------------------------------------- 5 ----

void criterion5() {
    for (const char* spec : {"catalog:C4", "catalog:C8", "catalog:S3"}) {
        FiniteGroup g = make_group(spec);
        Subgroup top = g.full_subgroup();
        const SubgroupLattice& lat = g.lattice(top.mask);
        int topidx = lat.index_of(top.mask);
        for (size_t c = 0; c + 1 < lat.classes.size(); ++c) {  // proper classes only
            Subgroup h{g, lat.subgroups[lat.class_rep[c]]};
            const SubgroupLattice& hl = g.lattice(h.mask);
            int hh = hl.index_of(h.mask);

            std::vector<CoefficientSystem> family;
            family.push_back(burnside_green(h).mackey.cs);
            family.push_back(constant_green(h).mackey.cs);
            // free-orbit-supported system: rank 2 at the trivial subgroup
            {
                CoefficientSystem m;
                m.level = h;
                m.rank.assign(hl.subgroups.size(), 0);
                int lo = hl.index_of(g.trivial_subgroup().mask);
                m.rank[lo] = 2;
                for (int s = 0; s < static_cast<int>(hl.subgroups.size()); ++s)
                    for (int t = 0; t < static_cast<int>(hl.subgroups.size()); ++t)
                        if (s != t && hl.contains_pair(s, t))
                            m.res[{s, t}] = IntMatrix(m.rank[s], m.rank[t]);
                for (int e : h.members())
                    for (int s = 0; s < static_cast<int>(hl.subgroups.size()); ++s) {
                        int gs = hl.index_of(g.conjugate_set(e, hl.subgroups[s]));
                        m.conj[{e, s}] = s == lo && gs == lo ? IntMatrix::identity(2)
                                                             : IntMatrix(m.rank[s], m.rank[gs]);
                    }
                require(check_cs(m).ok, "free-orbit test system is not a coefficient system");
                family.push_back(std::move(m));
            }

            for (const CoefficientSystem& m : family) {
                CoefficientSystem coi = coinduce_cs(m, top);
                CoefficientSystem ind = induce_cs(m, top);
                require(coi.rank[topidx] == m.rank[hh],
                        std::string(spec) + ": coinduced top rank is not M(H/H)");
                require(ind.rank[topidx] == 0, std::string(spec) + ": induced top rank is not 0");
            }
        }
    }
}

// ---------------------------------------------------------------- 6 ----

// all H-sets of size <= bound up to isomorphism: multisets of orbit types
std::vector<GSet> bounded_gsets(const Subgroup& level, int bound) {
    const FiniteGroup& g = level.group;
    const SubgroupLattice& lat = g.lattice(level.mask);
    std::vector<std::pair<std::uint64_t, int>> types;  // (stab rep, orbit size)
    for (int c = 0; c < static_cast<int>(lat.classes.size()); ++c) {
        std::uint64_t m = lat.subgroups[lat.class_rep[c]];
        types.push_back({m, level.order() / Subgroup{g, m}.order()});
    }
    std::vector<GSet> out;
    std::vector<std::pair<std::uint64_t, int>> current;
    std::function<void(size_t, int)> rec = [&](size_t i, int left) {
        if (i == types.size()) {
            out.push_back(from_orbits(level, current));
            return;
        }
        rec(i + 1, left);
        for (int mult = 1; mult * types[i].second <= left; ++mult) {
            current.push_back({types[i].first, mult});
            rec(i + 1, left - mult * types[i].second);
            current.pop_back();
        }
    };
    rec(0, bound);
    return out;
}

void criterion6() {
    auto t0 = Clock::now();
    for (const char* spec : {"catalog:C4", "catalog:S3"}) {
        FiniteGroup g = make_group(spec);
        Subgroup top = g.full_subgroup();
        std::vector<GSet> tsets = bounded_gsets(top, 4);
        const SubgroupLattice& lat = g.lattice(top.mask);
        for (std::uint64_t hm : lat.subgroups) {
            Subgroup h{g, hm};
            for (const GSet& s : bounded_gsets(h, 4))
                for (const GSet& t : tsets) {
                    GSet lhs = product(induce(top, s), t);
                    GSet rhs = induce(top, product(s, restrict_gset(t, h)));
                    require(is_isomorphic(lhs, rhs),
                            std::string(spec) + ": frobenius reciprocity fails at |S|=" +
                                std::to_string(s.size()) + " |T|=" + std::to_string(t.size()));
                }
        }
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    require(secs < 60.0, "runtime " + std::to_string(secs) + "s exceeds 60s");
}

// ---------------------------------------------------------------- 7 ----

void criterion7() {
    for (const char* spec : {"catalog:C2", "catalog:C4", "catalog:S3"}) {
        FiniteGroup g = make_group(spec);
        Subgroup top = g.full_subgroup();
        GreenFunctor a = burnside(g);
        const SubgroupLattice& lat = g.lattice(top.mask);
        int topidx = lat.index_of(top.mask);
        for (std::uint64_t hm : lat.subgroups) {
            CoefficientSystem b = box(orbit(top, g.subgroup(hm)), a.mackey.cs);
            require(b.rank[topidx] == a.mackey.cs.rank[lat.index_of(hm)],
                    std::string(spec) + ": box rank mismatch at subgroup of order " +
                        std::to_string(Subgroup{g, hm}.order()));
        }
    }
}

// ---------------------------------------------------------------- 8 ----

void criterion8() {
    std::mt19937_64 rng(0xc105u);
    for (const char* spec : kCatalog) {
        FiniteGroup g = make_group(spec);
        const SubgroupLattice& lat = g.lattice(g.full_subgroup().mask);
        const int n = static_cast<int>(lat.subgroups.size());
        std::uniform_int_distribution<int> pick(0, n - 1), coin(0, 3);
        for (int trial = 0; trial < 200; ++trial) {
            std::set<std::pair<int, int>> seed;
            for (int tries = 0; tries < 5; ++tries) {
                int k = pick(rng), h = pick(rng);
                if (lat.contains_pair(k, h) && coin(rng) == 0) seed.insert({k, h});
            }
            IndexingSystem closed = generate(g, seed);
            require(std::includes(closed.pairs.begin(), closed.pairs.end(), seed.begin(),
                                  seed.end()),
                    std::string(spec) + ": closure is not extensive");
            require(generate(g, closed.pairs) == closed,
                    std::string(spec) + ": closure is not idempotent");
            std::set<std::pair<int, int>> bigger = seed;
            int k = pick(rng), h = pick(rng);
            if (lat.contains_pair(k, h)) bigger.insert({k, h});
            IndexingSystem closed2 = generate(g, bigger);
            require(std::includes(closed2.pairs.begin(), closed2.pairs.end(),
                                  closed.pairs.begin(), closed.pairs.end()),
                    std::string(spec) + ": closure is not monotone");
        }
    }
    for (const char* spec : {"catalog:C4", "catalog:C8"}) {
        IndexingPoset p = enumerate_systems(make_group(spec));
        for (const auto& a : p.systems)
            for (const auto& b : p.systems) {
                std::set<std::pair<int, int>> meet;
                for (const auto& pr : a.pairs)
                    if (b.pairs.count(pr)) meet.insert(pr);
                require(check_axioms(IndexingSystem{a.group, meet}).ok,
                        std::string(spec) + ": intersection of systems fails the axioms");
            }
    }
}

// ---------------------------------------------------------------- 9 ----

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(EQSM_BIN) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) throw Failure("popen failed");
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f.good()) throw Failure("cannot write " + path);
    f << content;
}

void criterion9() {
    // canonicalization round trips
    for (const char* spec : {"catalog:C2", "catalog:C4", "catalog:S3"}) {
        RunResult emitted = run_cli(std::string("mackey burnside --group ") + spec);
        require(emitted.exit_code == 0, "burnside emit failed");
        write_file("/tmp/eqsm_acc_mackey.json", emitted.output);
        RunResult canon = run_cli("mackey canon --data /tmp/eqsm_acc_mackey.json");
        require(canon.exit_code == 0 && canon.output == emitted.output,
                std::string(spec) + ": mackey canonicalization is not a fixed point");
        require(run_cli("mackey check --data /tmp/eqsm_acc_mackey.json").exit_code == 0,
                std::string(spec) + ": emitted burnside does not pass check");
    }
    RunResult pairs = run_cli("indexing builtin complete --group catalog:D8");
    require(pairs.exit_code == 0, "builtin emit failed");
    write_file("/tmp/eqsm_acc_pairs.txt", pairs.output);
    RunResult pcanon = run_cli("indexing canon --group catalog:D8 --pairs /tmp/eqsm_acc_pairs.txt");
    require(pcanon.exit_code == 0 && pcanon.output == pairs.output,
            "pairs canonicalization is not a fixed point");
    write_file("/tmp/eqsm_acc_gset.txt", "level=2.1.1\norbits: 1*[2.1/2.1] + 2*[2.1/1.1]\n");
    RunResult gcanon = run_cli("gset canon --group catalog:S3 --data /tmp/eqsm_acc_gset.txt");
    require(gcanon.exit_code == 0, "gset canon failed");
    write_file("/tmp/eqsm_acc_gset2.txt", gcanon.output);
    RunResult gcanon2 = run_cli("gset canon --group catalog:S3 --data /tmp/eqsm_acc_gset2.txt");
    require(gcanon2.output == gcanon.output, "gset canonicalization is not a fixed point");

    // exit code contract
    require(run_cli("indexing enumerate --group catalog:C4").exit_code == 0, "expected exit 0");
    require(run_cli("norms max-preserved --group catalog:C4 --family proper").exit_code == 0,
            "expected exit 0");
    RunResult emitted = run_cli("mackey burnside --group catalog:S3");
    std::string corrupt = emitted.output;
    auto pos = corrupt.find("\"tr\"");
    pos = corrupt.find("1,", pos);
    require(pos != std::string::npos, "corruption target not found");
    corrupt.replace(pos, 2, "2,");
    write_file("/tmp/eqsm_acc_bad.json", corrupt);
    RunResult badcheck = run_cli("mackey check --data /tmp/eqsm_acc_bad.json");
    require(badcheck.exit_code == 1, "corrupted transfer should exit 1");
    require(badcheck.output.find("witness") != std::string::npos ||
                badcheck.output.find("FAIL") != std::string::npos,
            "corrupted transfer should print a witness");
    require(run_cli("norms check 1.1 2.1 --group catalog:C2 --family proper").exit_code == 1,
            "failing norm should exit 1");
    write_file("/tmp/eqsm_acc_badpairs.txt", "1.1 < 4.1\n");
    require(run_cli("indexing check --group catalog:C4 --pairs /tmp/eqsm_acc_badpairs.txt")
                    .exit_code == 1,
            "axiom violation should exit 1");
    require(run_cli("group show").exit_code == 2, "missing flag should exit 2");
    require(run_cli("group show --group catalog:E8").exit_code == 2, "bad group should exit 2");
    require(run_cli("nonsense").exit_code == 2, "unknown verb should exit 2");
    require(run_cli("group show --group catalog:S3 --wat 1").exit_code == 2,
            "unknown flag should exit 2");
    write_file("/tmp/eqsm_acc_notjson.json", "]");
    require(run_cli("mackey check --data /tmp/eqsm_acc_notjson.json").exit_code == 2,
            "malformed json should exit 2");
    write_file("/tmp/eqsm_acc_rank.json",
               R"({"group":"catalog:C2","levels":{"1.1":2,"2.1":2},)"
               R"("res":{"1.1.1<2.1.1":[[2,1]]},"tr":{"1.1.1<2.1.1":[[1],[0]]},)"
               R"("conj":{"1:1.1.1":[[1]],"1:2.1.1":[[1,0],[0,1]]}})");
    require(run_cli("mackey check --data /tmp/eqsm_acc_rank.json").exit_code == 2,
            "rank mismatch should exit 2");

    // byte-identical repeated runs across the suite
    const char* suite[] = {
        "group show --group catalog:D8",
        "group show --group catalog:Q8 --format json",
        "group double-cosets 2.1 2.1 --group catalog:S3",
        "group weyl 2.1 --group catalog:D8",
        "gset decompose --group catalog:S3 --data /tmp/eqsm_acc_gset.txt",
        "mackey burnside --group catalog:S3",
        "mackey check --data /tmp/eqsm_acc_bad.json",
        "mackey roundtrip --data /tmp/eqsm_acc_mackey.json",
        "indexing enumerate --group catalog:C8",
        "indexing enumerate --group catalog:D8 --format dot",
        "indexing enumerate --group catalog:Q8 --format json",
        "indexing oracle --group catalog:C4 --pairs /tmp/eqsm_acc_badpairs.txt --bound 6",
        "norms max-preserved --group catalog:S3 --family proper",
        "norms max-preserved --group catalog:C8 --family proper --format dot",
        "norms check 2.1 4.1 --group catalog:C4 --family proper",
    };
    for (const char* c : suite) {
        RunResult a = run_cli(c), b = run_cli(c);
        require(a.exit_code == b.exit_code && a.output == b.output,
                std::string("non-deterministic output: ") + c);
    }
}

struct Criterion {
    int id;
    const char* name;
    std::function<void()> fn;
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {1, "indexing-system censuses: C2=2, C4=5, C8=14, axioms + set-level oracle, <10s",
         criterion1},
        {2, "proper-family norm closure equals the proper system on the catalog, fixed-point "
            "witnesses, <30s",
         criterion2},
        {3, "norms<->transfers round trips are identities on burnside and 100 random functors",
         criterion3},
        {4, "double coset formula holds on burnside and catches 20 transfer mutations",
         criterion4},
        {5, "coinduction keeps the top value, induction kills it", criterion5},
        {6, "frobenius reciprocity, exhaustive to size 4 on C4 and S3, <60s", criterion6},
        {7, "box of an orbit against burnside has the subgroup-level rank at the top",
         criterion7},
        {8, "generation is a closure operator; enumerated systems are intersection-closed",
         criterion8},
        {9, "cli contract: canonical round trips, exit codes, byte-identical runs", criterion9},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        auto t0 = Clock::now();
        try {
            c.fn();
            double secs = std::chrono::duration<double>(Clock::now() - t0).count();
            std::printf("PASS criterion %d: %s [%.2fs]\n", c.id, c.name, secs);
        } catch (const std::exception& e) {
            ++failed;
            std::printf("FAIL criterion %d: %s: %s\n", c.id, c.name, e.what());
        }
    }
    if (failed) {
        std::printf("%d criterion(s) failed\n", failed);
        return 1;
    }
    std::printf("all 9 criteria passed\n");
    return 0;
}
