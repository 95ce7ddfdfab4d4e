// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "act/harness.hpp"

using namespace act;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

const PredicateReport* part(const PredicateReport& r, const std::string& name) {
    for (const auto& p : r.parts)
        if (p.name == name) return &p;
    return nullptr;
}

const PredicateReport* report(const RunArtifact& a, const std::string& name, Level l) {
    for (const auto& r : a.reports)
        if (r.name == name && r.level == l) return &r;
    return nullptr;
}

bool holds(const PredicateReport* r) { return r && r->verdict == Verdict::Holds; }

Scenario random_run(ProtocolId p, RdtId rdt, std::uint64_t seed, int ops, RunMode mode, int replicas = 3,
                    int probes = 3) {
    std::mt19937_64 rng(seed * 7919 + 17);
    Scenario s;
    s.name = "random";
    s.protocol = {p, replicas, rdt, 0, AnncFault::None};
    s.schedule.seed = seed;
    s.schedule.mode = mode;
    s.schedule.delay_min = 1;
    s.schedule.delay_max = 1 + static_cast<std::int64_t>(rng() % 4);
    s.schedule.tob_min = 2;
    s.schedule.tob_max = 2 + static_cast<std::int64_t>(rng() % 8);
    for (int r = 0; r < replicas; ++r) s.schedule.clock_skew.push_back(static_cast<std::int64_t>(rng() % 12));
    WorkloadParams w;
    w.rdt = rdt;
    w.replicas = replicas;
    w.ops = ops;
    w.start = 1;
    w.gap_max = 2;
    w.strong_ratio = 0.25;
    s.script = random_workload(w, seed);
    if (mode == RunMode::Async) s.schedule.tob_cutoff = 1 + static_cast<std::int64_t>(rng() % (2 * ops + 1));
    s.tail_probes = probes;
    s.probe_op = default_probe(rdt);
    return s;
}

Outcome c1() {
    Scenario s = make_scenario("annc-stable");
    RunArtifact a = run_scenario(s);
    std::set<std::string> kinds;
    for (const auto& o : s.script) kinds.insert(o.op.name);
    bool shape = s.protocol.replicas == 3 && s.script.size() == 20 && kinds.size() == 3;
    bool ok = shape && holds(report(a, "BEC", Level::Weak)) && holds(report(a, "Lin", Level::Strong));
    return {ok, "BEC(weak) " + std::string(to_string(report(a, "BEC", Level::Weak)->verdict)) + ", Lin(strong) " +
                    to_string(report(a, "Lin", Level::Strong)->verdict)};
}

Outcome c2() {
    RunArtifact a = run_scenario(make_scenario("annc-async"));
    const auto* bec = report(a, "BEC", Level::Weak);
    const auto* lin = report(a, "Lin", Level::Strong);
    bool pending_sub = false;
    std::string which;
    if (lin && lin->verdict == Verdict::Violated)
        if (const auto* rv = part(*lin, "RVal"))
            for (const auto& c : rv->counterexamples)
                for (EventId e : c.events)
                    if (a.history.at(e).pending() && a.history.at(e).op.name == "subtract") {
                        pending_sub = true;
                        which = std::to_string(e);
                    }
    bool ok = holds(bec) && lin && lin->verdict == Verdict::Violated && pending_sub;
    return {ok, "BEC(weak) " + std::string(to_string(bec->verdict)) + ", Lin(strong) " + to_string(lin->verdict) +
                    (pending_sub ? ", counterexample: pending subtract event " + which : ", no pending subtract")};
}

Outcome c3() {
    Scenario s = make_scenario("acutebayou-stable");
    RunArtifact a = run_scenario(s);
    int differs = 0;
    for (EventId e = 0; e < a.history.size(); ++e) differs += a.witness && a.witness->par_differs(e) ? 1 : 0;
    bool brute_unsat = a.brute && !a.brute->satisfiable && a.brute->certificate.exhausted && a.brute->excerpt.size() <= 5;
    bool ok = s.script.size() == 30 && holds(report(a, "FEC", Level::Weak)) && holds(report(a, "Lin", Level::Strong)) &&
              differs > 0 && brute_unsat;
    std::ostringstream os;
    os << "FEC(weak) " << to_string(report(a, "FEC", Level::Weak)->verdict) << ", Lin(strong) "
       << to_string(report(a, "Lin", Level::Strong)->verdict) << ", " << differs << " events with par != ar, brute on "
       << (a.brute ? a.brute->excerpt.size() : 0) << "-event excerpt: "
       << (a.brute && !a.brute->satisfiable ? "no BEC(weak) witness" : "witness found");
    return {ok, os.str()};
}

Outcome c4() {
    Scenario s = make_scenario("bayou-classic-tor");
    RunArtifact a = run_scenario(s);
    auto ids = script_event_ids(*a.trace, s.script);
    const RetVal& q1 = a.history.at(ids[2]).rval;
    const RetVal& q2 = a.history.at(ids[3]).rval;
    bool cycle = false;
    if (a.dependency_ncc && a.dependency_ncc->verdict == Verdict::Violated) {
        const auto& ev = a.dependency_ncc->counterexamples.front().events;
        cycle = std::count(ev.begin(), ev.end(), ids[0]) && std::count(ev.begin(), ev.end(), ids[1]);
    }
    bool ok = q1 == RetVal::integer(1) && q2 == RetVal::integer(2) && cycle;
    return {ok, "rval(q1)=" + q1.str() + ", rval(q2)=" + q2.str() +
                    (cycle ? ", dependency cycle u1 <-> u2 found" : ", no u1/u2 dependency cycle")};
}

Outcome c5() {
    int violations = 0, runs = 0;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        RunMode mode = seed % 2 ? RunMode::Stable : RunMode::Async;
        Scenario s = random_run(ProtocolId::AcuteBayou, RdtId::Seq, seed, 24, mode);
        s.checks = {{"NCC", Level::Weak, {}}, {"NCC", Level::Strong, {}}};
        RunArtifact a = run_scenario(s);
        ++runs;
        for (const auto& r : a.reports) violations += r.verdict == Verdict::Violated ? 1 : 0;
        if (!a.witness) ++violations;
    }
    return {violations == 0, std::to_string(runs) + " runs, " + std::to_string(violations) + " NCC violations"};
}

Outcome c6() {
    Scenario s = make_scenario("redblue-anomaly");
    RunArtifact a = run_scenario(s);
    auto ids = script_event_ids(*a.trace, s.script);
    bool red_done_first = a.trace->events[ids[1]].return_tick && *a.trace->events[ids[1]].return_tick <
                                                                     a.trace->events[ids[2]].invoke_tick;
    const RetVal& blue = a.history.at(ids[2]).rval;
    int finals = 0, good = 0;
    for (EventId e = a.hz.stabilization_index; e < a.history.size(); ++e) {
        ++finals;
        good += a.history.at(e).rval == RetVal::str("ab") ? 1 : 0;
    }
    bool ok = red_done_first && blue == RetVal::str("b") && finals > 0 && good == finals;
    return {ok, "blue read at R1 after red append completed: " + blue.str() + "; final reads " + std::to_string(good) +
                    "/" + std::to_string(finals) + " \"ab\""};
}

Outcome c7() {
    Scenario s = make_scenario("impossibility");
    auto target = parse_target(s.brute_target);
    RdtSpec seq{RdtId::Seq};
    const History& h = *s.fixed_history;
    BruteResult r = brute_force_witness(h, target, seq, HorizonConfig::nothing(h));
    std::vector<Event> evs = h.events();
    evs[3].rval = RetVal::str("ab");
    History flipped(evs);
    BruteResult f = brute_force_witness(flipped, target, seq, HorizonConfig::nothing(flipped));
    bool ok = !r.satisfiable() && r.certificate.exhausted && r.certificate.orders_total == 24 && f.satisfiable();
    std::ostringstream os;
    os << "original: " << (r.satisfiable() ? "satisfiable" : "Unsatisfiable") << " (" << r.certificate.orders_total
       << " orders enumerated, " << r.certificate.orders_admitted << " admitted, " << r.certificate.vis_assignments
       << " vis assignments); flipped e_x -> \"ab\": " << (f.satisfiable() ? "satisfiable" : "Unsatisfiable");
    return {ok, os.str()};
}

Outcome c8() {
    int traces = 0, failing = 0;
    std::string first_fail;
    auto lint = [&](const RunArtifact& a) {
        ++traces;
        if (a.lints && a.lints->verdict == Verdict::Violated) {
            ++failing;
            if (first_fail.empty()) first_fail = a.scenario + ": " + a.lints->summary();
        }
    };
    for (const auto& n : scenario_names()) {
        Scenario s = make_scenario(n);
        if (s.fixed_history || s.protocol.protocol == ProtocolId::ClassicBayou) continue;
        lint(run_scenario(s));
    }
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        RunMode mode = seed % 2 ? RunMode::Stable : RunMode::Async;
        lint(run_scenario(random_run(ProtocolId::ANNC, RdtId::NNC, seed, 20, mode)));
        lint(run_scenario(random_run(ProtocolId::AcuteBayou, RdtId::Seq, seed, 20, mode)));
        lint(run_scenario(random_run(ProtocolId::AcuteBayou, RdtId::KVS, seed, 20, mode)));
        Scenario rb = random_run(ProtocolId::RedBlue, RdtId::Seq, seed, 20, mode);
        for (auto& o : rb.script)
            if (o.op.name == "read") o.level = Level::Weak;
        lint(run_scenario(rb));
    }
    const std::vector<std::pair<AnncFault, std::string>> mutants = {
        {AnncFault::VisibleReads, "InvisibleReads"},
        {AnncFault::Heartbeat, "InputDriven"},
        {AnncFault::EchoOnDeliver, "OpDrivenMessages"},
        {AnncFault::WeakAwaitsDelivery, "AvailableWeak"},
        {AnncFault::DeferredStrongResponse, "NonBlockingStrong"},
    };
    int exact = 0;
    std::ostringstream mut;
    for (const auto& [fault, rule] : mutants) {
        Scenario s = make_scenario("annc-stable");
        s.protocol.fault = fault;
        RunArtifact a = run_scenario(s);
        std::vector<std::string> failed;
        for (const auto& p : a.lints->parts)
            if (p.verdict == Verdict::Violated) failed.push_back(p.name);
        bool hit = failed.size() == 1 && failed.front() == rule;
        exact += hit ? 1 : 0;
        mut << " " << to_string(fault) << "->";
        for (std::size_t i = 0; i < failed.size(); ++i) mut << (i ? "+" : "") << failed[i];
        if (failed.empty()) mut << "none";
    }
    bool ok = failing == 0 && exact == 5;
    std::string d = std::to_string(traces - failing) + "/" + std::to_string(traces) + " shipped traces clean; " +
                    std::to_string(exact) + "/5 mutants fail exactly their rule;" + mut.str();
    if (!first_fail.empty()) d += "; first failure: " + first_fail;
    return {ok, d};
}

// Finite histories without tail probes have no "eventually": the verdict that must agree
// treats EV as vacuous. The strict horizon (EV from event 0) is reported too; there the
// delivery-based witness may fail where another witness exists, but never the reverse.
Outcome c9() {
    struct Tally {
        int agree = 0, builder_holds = 0, brute_sat = 0, unsound = 0;
    } frag, strict;
    int total = 0;
    std::string first_disagreement;
    auto tally = [](Tally& t, bool b, bool f) {
        t.builder_holds += b;
        t.brute_sat += f;
        t.agree += b == f;
        t.unsound += b && !f;
    };
    auto one = [&](ProtocolId p, RdtId rdt, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        int ops = 2 + static_cast<int>(rng() % 3);
        RunMode mode = rng() % 4 == 0 ? RunMode::Async : RunMode::Stable;
        Scenario s = random_run(p, rdt, seed, ops, mode, 2, 0);
        s.schedule.delay_max = 1 + static_cast<std::int64_t>(rng() % 6);
        RunArtifact a = run_scenario(s);
        if (!a.witness) return;
        RdtSpec spec{rdt};
        ++total;
        for (auto [hz, t] : {std::pair{HorizonConfig::nothing(a.history), &frag},
                             std::pair{HorizonConfig::everything(), &strict}}) {
            bool b = check_composite(*a.witness, Composite::BEC, Level::Weak, spec, hz).ok();
            bool f = brute_force_witness(a.history, {{"BEC", Level::Weak}}, spec, hz).satisfiable();
            tally(*t, b, f);
            if (t == &frag && b != f && first_disagreement.empty())
                first_disagreement = std::string(to_string(p)) + " seed " + std::to_string(seed) + ": builder " +
                                     (b ? "holds" : "violated") + ", brute " + (f ? "satisfiable" : "unsatisfiable");
        }
    };
    for (std::uint64_t seed = 1; seed <= 250; ++seed) one(ProtocolId::ANNC, RdtId::NNC, seed);
    for (std::uint64_t seed = 1; seed <= 250; ++seed) one(ProtocolId::AcuteBayou, RdtId::Seq, seed);
    std::ostringstream os;
    os << frag.agree << "/" << total << " agree with EV vacuous (builder holds " << frag.builder_holds
       << ", brute satisfiable " << frag.brute_sat << "); strict EV: " << strict.agree << "/" << total
       << " agree, builder holds " << strict.builder_holds << ", brute satisfiable " << strict.brute_sat
       << ", builder-holds-but-unsatisfiable " << strict.unsound;
    if (!first_disagreement.empty()) os << "; first disagreement " << first_disagreement;
    return {total == 500 && frag.agree == total && frag.unsound == 0 && strict.unsound == 0, os.str()};
}

Outcome c10() {
    int stable = 0, stable_ok = 0;
    std::string detail;
    bool partition_ok = false;
    for (const auto& n : scenario_names()) {
        Scenario s = make_scenario(n);
        if (s.fixed_history) continue;
        RunArtifact a = run_scenario(s);
        if (n == "annc-partition-convergence") {
            std::set<int> blocks(a.blocks.begin(), a.blocks.end());
            partition_ok = a.converged && blocks.size() == 2;
            continue;
        }
        if (a.mode != RunMode::Stable) continue;
        ++stable;
        bool empty = std::all_of(a.tentative.begin(), a.tentative.end(), [](std::size_t t) { return t == 0; });
        if (a.converged && empty) ++stable_ok;
        else detail += " " + n;
    }
    return {stable_ok == stable && partition_ok,
            std::to_string(stable_ok) + "/" + std::to_string(stable) + " stable scenarios identical across replicas; "
                "partition scenario " + (partition_ok ? "converged per block" : "diverged") + detail};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"ANNC stable: BEC(weak) and Lin(strong)", c1},
        {"ANNC async: BEC(weak) holds, Lin(strong) violated by a pending subtract", c2},
        {"AcuteBayou stable: FEC(weak), Lin(strong), par != ar, no BEC(weak) witness on excerpt", c3},
        {"Classic Bayou: conditional updates read through a later commit order", c4},
        {"AcuteBayou: no circular causality over 200 random runs", c5},
        {"RedBlue anomaly", c6},
        {"Impossibility history unsatisfiable, flipped history satisfiable", c7},
        {"Restriction lints on shipped protocols and fault mutants", c8},
        {"Builder vs brute force on 500 small histories", c9},
        {"Convergence of stable and partitioned runs", c10},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": " << criteria[i].first << " -- "
                  << o.detail << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
