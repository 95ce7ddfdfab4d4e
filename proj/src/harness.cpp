#include "act/harness.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace act {

const char* to_string(ExcerptRule r) {
    switch (r) {
    case ExcerptRule::None: return "none";
    case ExcerptRule::Script: return "script";
    case ExcerptRule::OppositeReads: return "opposite-reads";
    }
    return "?";
}

namespace {

ExcerptRule parse_excerpt(const std::string& s) {
    for (auto r : {ExcerptRule::None, ExcerptRule::Script, ExcerptRule::OppositeReads})
        if (s == to_string(r)) return r;
    throw ConfigError("unknown excerpt rule: " + s);
}

Verdict parse_verdict(const std::string& s) {
    if (s == "holds") return Verdict::Holds;
    if (s == "violated") return Verdict::Violated;
    if (s == "vacuous") return Verdict::Vacuous;
    throw ConfigError("unknown verdict: " + s);
}

ScriptOp sop(std::int64_t at, int client, int replica, OpLabel o, Level l = Level::Weak) {
    return ScriptOp{at, client, replica, std::move(o), l};
}

std::string letter(int k) {
    static const std::string alphabet = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
    std::string s(1, alphabet[k % alphabet.size()]);
    if (k >= static_cast<int>(alphabet.size())) s += std::to_string(k / alphabet.size());
    return s;
}

constexpr std::uint64_t kDefaultSeed = 7;

}  // namespace

OpLabel default_probe(RdtId rdt) {
    switch (rdt) {
    case RdtId::NNC: return op("get");
    case RdtId::KVS: return op("get", {std::string("z")});
    default: return op("read");
    }
}

LvlMap lvlmap_for(const ProtocolConfig& c) {
    switch (c.protocol) {
    case ProtocolId::ANNC: return nnc_lvlmap();
    case ProtocolId::RedBlue: return redblue_seq_lvlmap();
    default: return all_levels_lvlmap(c.rdt);
    }
}

std::vector<ScriptOp> random_workload(const WorkloadParams& p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uni = [&](std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };
    auto chance = [&](double q) { return static_cast<double>(rng() % 10000) < q * 10000.0; };
    std::vector<ScriptOp> out;
    std::int64_t t = p.start;
    int letters = 2;   // "a" and "b" are left to scripted prefixes
    for (int k = 0; k < p.ops; ++k) {
        t += uni(0, p.gap_max);
        int r = static_cast<int>(uni(0, p.replicas - 1));
        int c = p.first_client + r * p.clients_per_replica + static_cast<int>(uni(0, p.clients_per_replica - 1));
        bool strong = chance(p.strong_ratio);
        OpLabel o;
        Level l = strong ? Level::Strong : Level::Weak;
        switch (p.rdt) {
        case RdtId::NNC: {
            if (strong) o = op("subtract", {uni(1, 6)});
            else if (chance(0.55)) o = op("add", {uni(1, 5)});
            else o = op("get");
            break;
        }
        case RdtId::Seq:
            o = chance(0.5) ? op("append", {letter(letters++)}) : op("read");
            break;
        case RdtId::KVS: {
            std::string key = chance(0.5) ? "x" : "y";
            int pick = static_cast<int>(uni(0, 2));
            if (pick == 0) o = op("put", {key, uni(0, 3)});
            else if (pick == 1) o = op("app", {key, letter(letters++)});
            else o = op("get", {key});
            break;
        }
        case RdtId::MVR: o = chance(0.5) ? op("write", {uni(0, 9)}) : op("read"); break;
        }
        out.push_back(sop(t, c, r, o, l));
    }
    return out;
}

// ------------------------------------------------------------- scenarios

std::vector<std::string> scenario_names() {
    return {"annc-stable",          "annc-async",           "annc-partition-convergence",
            "bayou-classic-tor",    "bayou-classic-circular", "acutebayou-stable",
            "acutebayou-async",     "redblue-anomaly",      "impossibility"};
}

namespace {

Scenario annc_base(const std::string& name, std::uint64_t seed) {
    Scenario s;
    s.name = name;
    s.protocol = {ProtocolId::ANNC, 3, RdtId::NNC, 0, AnncFault::None};
    s.schedule.seed = seed;
    s.schedule.delay_min = 1;
    s.schedule.delay_max = 3;
    s.schedule.tob_min = 2;
    s.schedule.tob_max = 5;
    WorkloadParams w;
    w.rdt = RdtId::NNC;
    w.ops = 20;
    w.start = 1;
    w.gap_max = 2;
    s.script = random_workload(w, seed);
    s.probe_op = op("get");
    return s;
}

Scenario acute_base(const std::string& name, std::uint64_t seed) {
    Scenario s;
    s.name = name;
    s.protocol = {ProtocolId::AcuteBayou, 3, RdtId::Seq, 0, AnncFault::None};
    s.schedule.seed = seed;
    s.schedule.delay_min = 1;
    s.schedule.delay_max = 2;
    s.schedule.tob_min = 8;
    s.schedule.tob_max = 8;
    s.schedule.clock_skew = {100, 0, 0};
    s.probe_op = op("read");
    return s;
}

}  // namespace

Scenario make_scenario(const std::string& name, std::optional<std::uint64_t> seed_opt) {
    std::uint64_t seed = seed_opt.value_or(kDefaultSeed);
    if (name == "annc-stable") {
        Scenario s = annc_base(name, seed);
        s.description = "ANNC, 3 replicas, 20 mixed operations, every TOB message delivered";
        s.checks = {{"BEC", Level::Weak, Verdict::Holds}, {"Lin", Level::Strong, Verdict::Holds}};
        return s;
    }
    if (name == "annc-async") {
        Scenario s = annc_base(name, seed);
        s.description = "ANNC with consensus stopping mid-run: later TOB messages are never delivered";
        s.schedule.mode = RunMode::Async;
        s.schedule.tob_cutoff = 12;
        s.checks = {{"BEC", Level::Weak, Verdict::Holds}, {"Lin", Level::Strong, Verdict::Violated}};
        return s;
    }
    if (name == "annc-partition-convergence") {
        Scenario s = annc_base(name, seed);
        s.description = "ANNC under a permanent partition {R0,R1}|{R2} without consensus";
        s.schedule.mode = RunMode::Async;
        s.schedule.tob_cutoff = 0;
        s.schedule.partitions = {{0, {{0, 1}, {2}}}};
        s.checks = {{"RVal", Level::Weak, Verdict::Holds}, {"NCC", Level::Weak, Verdict::Holds}};
        return s;
    }
    if (name == "bayou-classic-tor") {
        Scenario s;
        s.name = name;
        s.description = "classic Bayou: two conditional updates observed in opposite orders by two queries";
        s.protocol = {ProtocolId::ClassicBayou, 3, RdtId::KVS, 2, AnncFault::None};
        s.schedule.seed = seed;
        s.schedule.delay_min = s.schedule.delay_max = 1;
        s.schedule.links = {{0, 2, 10, 10}, {0, 1, 10, 10}};
        s.schedule.stalls = {{2, 5, 13}};
        s.script = {
            sop(1, 0, 0, op("setif", {std::string("y"), std::string("x"), std::string("z"), std::int64_t{2}})),
            sop(2, 4, 2, op("setif", {std::string("x"), std::string("y"), std::string("z"), std::int64_t{1}})),
            sop(8, 1, 0, op("get", {std::string("z")})),
            sop(40, 2, 1, op("get", {std::string("z")})),
        };
        s.probe_op = op("get", {std::string("z")});
        s.expected_values = {{2, RetVal::integer(1)}, {3, RetVal::integer(2)}};
        s.brute_target = "BEC(weak)";
        s.excerpt = ExcerptRule::Script;
        s.expect_satisfiable = false;
        s.dependency_ncc = true;
        s.expected_dependency_ncc = Verdict::Violated;
        return s;
    }
    if (name == "bayou-classic-circular") {
        Scenario s;
        s.name = name;
        s.description = "classic Bayou: two concurrent weak appends whose responses each include the other";
        s.protocol = {ProtocolId::ClassicBayou, 3, RdtId::KVS, 2, AnncFault::None};
        s.schedule.seed = seed;
        s.schedule.delay_min = s.schedule.delay_max = 1;
        s.schedule.links = {{2, 0, 20, 20}, {1, 2, 20, 20}};
        s.schedule.stalls = {{0, 30, 45}, {1, 30, 45}};
        s.script = {
            sop(1, 4, 2, op("app", {std::string("L"), std::string("a")})),
            sop(30, 2, 1, op("app", {std::string("L"), std::string("y")})),
            sop(31, 0, 0, op("app", {std::string("L"), std::string("x")})),
        };
        s.probe_op = op("get", {std::string("L")});
        s.expected_values = {{1, RetVal::str("axy")}, {2, RetVal::str("ayx")}};
        s.expected_probe_value = RetVal::str("axy");
        s.brute_target = "BEC(weak)";
        s.excerpt = ExcerptRule::Script;
        s.expect_satisfiable = false;
        s.dependency_ncc = true;
        s.expected_dependency_ncc = Verdict::Violated;
        return s;
    }
    if (name == "acutebayou-stable") {
        Scenario s = acute_base(name, seed);
        s.description = "AcuteBayou on a sequence, skewed clocks: a read sees two appends in tentative order "
                        "before commits reorder them";
        s.script = {
            sop(1, 0, 0, op("append", {std::string("a")})),
            sop(2, 2, 1, op("append", {std::string("b")})),
            sop(6, 4, 2, op("read")),
            sop(20, 5, 2, op("read")),
        };
        WorkloadParams w;
        w.rdt = RdtId::Seq;
        w.ops = 26;
        w.start = 25;
        w.gap_max = 2;
        w.strong_ratio = 0.25;
        for (auto& o : random_workload(w, seed)) s.script.push_back(o);
        s.expected_values = {{2, RetVal::str("ba")}, {3, RetVal::str("ab")}};
        s.checks = {{"FEC", Level::Weak, Verdict::Holds}, {"Lin", Level::Strong, Verdict::Holds}};
        s.brute_target = "BEC(weak)";
        s.excerpt = ExcerptRule::OppositeReads;
        s.expect_satisfiable = false;
        return s;
    }
    if (name == "acutebayou-async") {
        Scenario s = acute_base(name, seed);
        s.description = "AcuteBayou on a sequence with consensus stopping mid-run";
        s.schedule.mode = RunMode::Async;
        s.schedule.tob_cutoff = 20;
        WorkloadParams w;
        w.rdt = RdtId::Seq;
        w.ops = 30;
        w.start = 1;
        w.gap_max = 2;
        w.strong_ratio = 0.3;
        s.script = random_workload(w, seed);
        s.checks = {{"FEC", Level::Weak, Verdict::Holds}, {"Lin", Level::Strong, Verdict::Violated}};
        return s;
    }
    if (name == "redblue-anomaly") {
        Scenario s;
        s.name = name;
        s.description = "RedBlue sequence: a slow blue append with a lower clock is ordered before a red append "
                        "that already completed";
        s.protocol = {ProtocolId::RedBlue, 2, RdtId::Seq, 0, AnncFault::None};
        s.schedule.seed = seed;
        s.schedule.delay_min = 1;
        s.schedule.delay_max = 2;
        s.schedule.links = {{0, 1, 40, 40}};
        s.script = {
            sop(1, 0, 0, op("append", {std::string("a")})),
            sop(2, 2, 1, op("append", {std::string("b")}), Level::Strong),
            sop(12, 2, 1, op("read")),
        };
        s.probe_op = op("read");
        s.expected_values = {{2, RetVal::str("b")}};
        s.expected_probe_value = RetVal::str("ab");
        return s;
    }
    if (name == "impossibility") {
        Scenario s;
        s.name = name;
        s.description = "two partitioned weak appends, a weak read returning ab and a strong read returning b";
        s.protocol = {ProtocolId::AcuteBayou, 2, RdtId::Seq, 0, AnncFault::None};
        s.schedule.seed = seed;
        std::vector<Event> evs = {
            {0, op("append", {std::string("a")}), RetVal::ok(), Level::Weak, 0, 0, 1},
            {1, op("append", {std::string("b")}), RetVal::ok(), Level::Weak, 1, 0, 1},
            {2, op("read"), RetVal::str("ab"), Level::Weak, 0, 2, 3},
            {3, op("read"), RetVal::str("b"), Level::Strong, 1, 4, 5},
        };
        s.fixed_history = History(evs);
        s.fixed_horizon = HorizonConfig::nothing(*s.fixed_history);
        s.brute_target = "BEC(weak)&SinOrd(strong)&BEC(strong)";
        s.expect_satisfiable = false;
        s.tail_probes = 0;
        return s;
    }
    throw ConfigError("unknown scenario: " + name);
}

std::vector<Scenario> built_in_scenarios() {
    std::vector<Scenario> out;
    for (const auto& n : scenario_names()) out.push_back(make_scenario(n));
    return out;
}

// --------------------------------------------------------------- running

std::vector<EventId> script_event_ids(const ProtocolTrace& t, const std::vector<ScriptOp>& script) {
    std::map<int, std::vector<EventId>> by_client;
    for (EventId e = 0; e < static_cast<EventId>(t.events.size()); ++e) by_client[t.events[e].client].push_back(e);
    std::map<int, std::size_t> used;
    std::vector<EventId> out;
    for (const auto& s : script) {
        auto& v = by_client[s.client];
        std::size_t k = used[s.client]++;
        out.push_back(k < v.size() ? v[k] : -1);
    }
    return out;
}

std::optional<std::vector<EventId>> find_opposite_reads(const History& h) {
    std::map<std::string, EventId> appends;
    for (const auto& e : h.events())
        if (e.lvl == Level::Weak && e.op.name == "append" && !e.pending()) appends.emplace(e.op.str_arg(0), e.id);
    std::vector<EventId> reads;
    for (const auto& e : h.events())
        if (e.lvl == Level::Weak && e.op.name == "read" && e.rval.kind == RetVal::Kind::Str && e.rval.s.size() == 2 &&
            e.rval.s[0] != e.rval.s[1])
            reads.push_back(e.id);
    for (EventId r1 : reads)
        for (EventId r2 : reads) {
            const std::string& s1 = h.at(r1).rval.s;
            const std::string& s2 = h.at(r2).rval.s;
            if (r1 >= r2 || s1[0] != s2[1] || s1[1] != s2[0]) continue;
            auto a = appends.find(s1.substr(0, 1));
            auto b = appends.find(s1.substr(1, 1));
            if (a == appends.end() || b == appends.end()) continue;
            std::vector<EventId> keep{a->second, b->second, r1, r2};
            std::sort(keep.begin(), keep.end());
            return keep;
        }
    return std::nullopt;
}

namespace {

void run_brute(RunArtifact& art, const Scenario& s, const RdtSpec& spec) {
    if (s.brute_target.empty()) return;
    BruteSummary b;
    b.target = s.brute_target;
    History h;
    HorizonConfig hz;
    if (s.fixed_history) {
        h = *s.fixed_history;
        for (EventId e = 0; e < h.size(); ++e) b.excerpt.push_back(e);
        hz = s.fixed_horizon.value_or(HorizonConfig::nothing(h));
    } else {
        if (s.excerpt == ExcerptRule::OppositeReads) {
            auto k = find_opposite_reads(art.history);
            if (!k) {
                art.failures.push_back("no pair of reads observing two appends in opposite orders");
                return;
            }
            b.excerpt = *k;
        } else {
            for (EventId e : script_event_ids(*art.trace, s.script))
                if (e >= 0) b.excerpt.push_back(e);
            std::sort(b.excerpt.begin(), b.excerpt.end());
        }
        h = art.history.excerpt(b.excerpt);
        // A finite fragment has no "eventually": EV is left out of the search.
        hz = HorizonConfig::nothing(h);
    }
    BruteResult r = brute_force_witness(h, parse_target(s.brute_target), spec, hz);
    b.satisfiable = r.satisfiable();
    b.certificate = r.certificate;
    b.witness = r.witness;
    if (s.expect_satisfiable && *s.expect_satisfiable != b.satisfiable)
        art.failures.push_back(std::string("brute force: expected ") +
                               (*s.expect_satisfiable ? "satisfiable" : "unsatisfiable"));
    art.brute = std::move(b);
}

}  // namespace

RunArtifact run_scenario(const Scenario& s) {
    RunArtifact art;
    art.scenario = s.name;
    art.protocol = to_string(s.protocol.protocol);
    art.rdt = s.protocol.protocol == ProtocolId::ANNC ? RdtId::NNC : s.protocol.rdt;
    art.mode = s.schedule.mode;
    art.seed = s.schedule.seed;
    art.checks = s.checks;
    RdtSpec spec{art.rdt};

    if (s.fixed_history) {
        art.protocol = "none";
        art.history = *s.fixed_history;
        art.hz = s.fixed_horizon.value_or(HorizonConfig::nothing(art.history));
        run_brute(art, s, spec);
        art.converged = true;
        return art;
    }

    SimWorld world = make_world(s.protocol, s.schedule);
    for (const auto& o : s.script) world.submit(o);
    world.run_to_quiescence(s.max_steps);

    int first_probe = world.events_issued();
    int clients_base = 1000000;
    for (int r = 0; r < world.replica_count(); ++r)
        for (int k = 0; k < s.tail_probes; ++k)
            world.submit(sop(world.now() + 1, clients_base + r * s.tail_probes + k, r, s.probe_op));
    world.run_to_quiescence(s.max_steps);

    art.history = world.history();
    art.trace = world.trace();
    art.steps = world.steps_taken();
    art.trace_hash = art.trace->hash();
    art.hz = HorizonConfig{s.tail_probes, s.tail_probes > 0 ? first_probe : art.history.size()};

    try {
        art.witness = build_witness(art.history, *art.trace, art.mode);
        art.witness_kind = to_string(witness_kind(*art.trace, art.mode));
        art.witness_matches_trace = check_witness_against_trace(*art.witness, *art.trace);
        if (!art.witness_matches_trace) art.failures.push_back("witness disagrees with the trace");
    } catch (const TraceMismatch&) {
        art.witness_kind = "none";
    }

    for (const auto& c : s.checks) {
        if (!art.witness) {
            art.failures.push_back("no witness to check " + c.predicate);
            continue;
        }
        PredicateReport r = check_by_name(*art.witness, c.predicate, c.level, spec, art.hz);
        if (c.expected && r.verdict != *c.expected)
            art.failures.push_back(c.predicate + "(" + to_string(c.level) + ") is " + to_string(r.verdict) +
                                   ", expected " + to_string(*c.expected));
        art.reports.push_back(std::move(r));
    }
    art.lints = check_act_restrictions(*art.trace);

    if (s.dependency_ncc) {
        AbstractExecution dep{art.history, dependency_edges(art.history, *art.trace),
                              art.witness ? art.witness->ar : TotalOrder([&] {
                                  std::vector<EventId> v(art.history.size());
                                  for (int i = 0; i < art.history.size(); ++i) v[i] = i;
                                  return v;
                              }()),
                              {}};
        art.dependency_ncc = check_NCC(dep, Level::Weak);
        if (s.expected_dependency_ncc && art.dependency_ncc->verdict != *s.expected_dependency_ncc)
            art.failures.push_back(std::string("dependency NCC is ") + to_string(art.dependency_ncc->verdict));
    }

    auto ids = script_event_ids(*art.trace, s.script);
    for (const auto& ev : s.expected_values) {
        EventId e = ev.script_index < ids.size() ? ids[ev.script_index] : -1;
        if (e < 0) {
            art.failures.push_back("script operation " + std::to_string(ev.script_index) + " never issued");
            continue;
        }
        if (art.history.at(e).rval != ev.value)
            art.failures.push_back("script operation " + std::to_string(ev.script_index) + " returned " +
                                   art.history.at(e).rval.str() + ", expected " + ev.value.str());
    }
    if (s.expected_probe_value)
        for (EventId e = first_probe; e < art.history.size(); ++e)
            if (art.history.at(e).rval != *s.expected_probe_value)
                art.failures.push_back("probe " + std::to_string(e) + " returned " + art.history.at(e).rval.str());

    art.conformance = ActSpec{spec, lvlmap_for(s.protocol)}.conformance(art.history);
    if (!art.conformance.empty()) art.failures.push_back("level map: " + art.conformance);

    std::map<int, std::string> block_digest;
    art.converged = true;
    for (int r = 0; r < world.replica_count(); ++r) {
        const ReplicaMachine& m = world.replica(r);
        art.digests.push_back(m.convergence_digest());
        art.blocks.push_back(world.block_of(r));
        auto* b = dynamic_cast<const BayouReplica*>(&m);
        art.tentative.push_back(b ? b->tentative().size() : 0);
        auto [it, fresh] = block_digest.emplace(art.blocks.back(), art.digests.back());
        if (!fresh && it->second != art.digests.back()) art.converged = false;
        if (art.mode == RunMode::Stable && art.tentative.back() != 0) art.converged = false;
    }
    if (!art.converged) art.failures.push_back("replicas did not converge");

    run_brute(art, s, spec);
    return art;
}

// ------------------------------------------------------------------ JSON

namespace {

json schedule_to_json(const Schedule& s) {
    json links = json::array(), parts = json::array(), stalls = json::array(), crashes = json::array();
    for (const auto& l : s.links) links.push_back({{"from", l.from}, {"to", l.to}, {"min", l.min}, {"max", l.max}});
    for (const auto& p : s.partitions) parts.push_back({{"at", p.at}, {"blocks", p.blocks}});
    for (const auto& x : s.stalls) stalls.push_back({{"replica", x.replica}, {"from", x.from}, {"to", x.to}});
    for (const auto& [r, t] : s.crashes) crashes.push_back({{"replica", r}, {"at", t}});
    json j{{"seed", s.seed},         {"mode", to_string(s.mode)}, {"delay", {s.delay_min, s.delay_max}},
           {"tob", {s.tob_min, s.tob_max}}, {"links", links},      {"partitions", parts},
           {"clock_skew", s.clock_skew}, {"stalls", stalls},     {"crashes", crashes}};
    j["tob_cutoff"] = s.tob_cutoff ? json(*s.tob_cutoff) : json(nullptr);
    return j;
}

Schedule schedule_from_json(const json& j) {
    Schedule s;
    s.seed = j.value("seed", std::uint64_t{1});
    s.mode = parse_mode(j.value("mode", std::string("stable")));
    if (j.contains("delay")) {
        s.delay_min = j.at("delay").at(0).get<std::int64_t>();
        s.delay_max = j.at("delay").at(1).get<std::int64_t>();
    }
    if (j.contains("tob")) {
        s.tob_min = j.at("tob").at(0).get<std::int64_t>();
        s.tob_max = j.at("tob").at(1).get<std::int64_t>();
    }
    for (const auto& l : j.value("links", json::array()))
        s.links.push_back({l.at("from").get<int>(), l.at("to").get<int>(), l.at("min").get<std::int64_t>(),
                           l.at("max").get<std::int64_t>()});
    for (const auto& p : j.value("partitions", json::array()))
        s.partitions.push_back({p.at("at").get<std::int64_t>(), p.at("blocks").get<std::vector<std::vector<int>>>()});
    s.clock_skew = j.value("clock_skew", std::vector<std::int64_t>{});
    for (const auto& x : j.value("stalls", json::array()))
        s.stalls.push_back({x.at("replica").get<int>(), x.at("from").get<std::int64_t>(), x.at("to").get<std::int64_t>()});
    for (const auto& x : j.value("crashes", json::array()))
        s.crashes.emplace_back(x.at("replica").get<int>(), x.at("at").get<std::int64_t>());
    if (j.contains("tob_cutoff") && !j.at("tob_cutoff").is_null()) s.tob_cutoff = j.at("tob_cutoff").get<std::int64_t>();
    if (s.delay_min < 1 || s.delay_max < s.delay_min || s.tob_min < 1 || s.tob_max < s.tob_min)
        throw ConfigError("delays must satisfy 1 <= min <= max");
    return s;
}

}  // namespace

json scenario_to_json(const Scenario& s) {
    json script = json::array();
    for (const auto& o : s.script)
        script.push_back({{"at", o.at}, {"client", o.client}, {"replica", o.replica}, {"op", to_json(o.op)},
                          {"level", to_string(o.level)}});
    json checks = json::array();
    for (const auto& c : s.checks) {
        json x{{"predicate", c.predicate}, {"level", to_string(c.level)}};
        if (c.expected) x["expect"] = to_string(*c.expected);
        checks.push_back(x);
    }
    json values = json::array();
    for (const auto& v : s.expected_values) values.push_back({{"index", v.script_index}, {"rval", to_json(v.value)}});
    json j{{"name", s.name},
           {"description", s.description},
           {"protocol",
            {{"name", to_string(s.protocol.protocol)},
             {"replicas", s.protocol.replicas},
             {"rdt", to_string(s.protocol.rdt)},
             {"primary", s.protocol.primary},
             {"fault", to_string(s.protocol.fault)}}},
           {"schedule", schedule_to_json(s.schedule)},
           {"script", script},
           {"tail_probes", s.tail_probes},
           {"probe_op", to_json(s.probe_op)},
           {"checks", checks},
           {"expected_values", values},
           {"max_steps", s.max_steps},
           {"brute_target", s.brute_target},
           {"excerpt", to_string(s.excerpt)},
           {"dependency_ncc", s.dependency_ncc}};
    if (s.expected_probe_value) j["expected_probe_value"] = to_json(*s.expected_probe_value);
    if (s.expect_satisfiable) j["expect_satisfiable"] = *s.expect_satisfiable;
    if (s.expected_dependency_ncc) j["expected_dependency_ncc"] = to_string(*s.expected_dependency_ncc);
    if (s.fixed_history) {
        json evs = json::array();
        for (const auto& e : s.fixed_history->events()) evs.push_back(to_json(e));
        j["history"] = evs;
    }
    return j;
}

Scenario scenario_from_json(const json& j) {
    try {
        Scenario s;
        s.name = j.at("name").get<std::string>();
        s.description = j.value("description", std::string());
        const json& p = j.at("protocol");
        s.protocol.protocol = parse_protocol(p.at("name").get<std::string>());
        s.protocol.replicas = p.value("replicas", 3);
        s.protocol.rdt = parse_rdt(p.value("rdt", std::string("seq")));
        s.protocol.primary = p.value("primary", 0);
        s.protocol.fault = parse_fault(p.value("fault", std::string("none")));
        if (s.protocol.replicas < 1 || s.protocol.replicas > 10) throw ConfigError("replicas must be in 1..10");
        s.schedule = schedule_from_json(j.value("schedule", json::object()));
        for (const auto& o : j.value("script", json::array())) {
            ScriptOp x{o.at("at").get<std::int64_t>(), o.at("client").get<int>(), o.at("replica").get<int>(),
                       op_from_json(o.at("op")), parse_level(o.value("level", std::string("weak")))};
            if (x.replica < 0 || x.replica >= s.protocol.replicas) throw ConfigError("script op on unknown replica");
            s.script.push_back(std::move(x));
        }
        RdtId rdt = s.protocol.protocol == ProtocolId::ANNC ? RdtId::NNC : s.protocol.rdt;
        s.tail_probes = j.value("tail_probes", 3);
        s.probe_op = j.contains("probe_op") ? op_from_json(j.at("probe_op")) : default_probe(rdt);
        for (const auto& c : j.value("checks", json::array())) {
            Check x{c.at("predicate").get<std::string>(), parse_level(c.value("level", std::string("weak"))), {}};
            if (c.contains("expect")) x.expected = parse_verdict(c.at("expect").get<std::string>());
            s.checks.push_back(std::move(x));
        }
        for (const auto& v : j.value("expected_values", json::array()))
            s.expected_values.push_back({v.at("index").get<std::size_t>(), retval_from_json(v.at("rval"))});
        if (j.contains("expected_probe_value")) s.expected_probe_value = retval_from_json(j.at("expected_probe_value"));
        s.max_steps = j.value("max_steps", std::int64_t{200000});
        s.brute_target = j.value("brute_target", std::string());
        s.excerpt = parse_excerpt(j.value("excerpt", std::string("none")));
        if (j.contains("expect_satisfiable")) s.expect_satisfiable = j.at("expect_satisfiable").get<bool>();
        s.dependency_ncc = j.value("dependency_ncc", false);
        if (j.contains("expected_dependency_ncc"))
            s.expected_dependency_ncc = parse_verdict(j.at("expected_dependency_ncc").get<std::string>());
        if (j.contains("history")) {
            std::vector<Event> evs;
            for (const auto& e : j.at("history")) evs.push_back(event_from_json(e));
            s.fixed_history = History(std::move(evs));
            s.fixed_horizon = HorizonConfig::nothing(*s.fixed_history);
        }
        return s;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("scenario config: ") + e.what());
    }
}

json artifact_report(const RunArtifact& a) {
    json reports = json::array();
    for (const auto& r : a.reports) reports.push_back(to_json(r));
    json checks = json::array();
    for (const auto& c : a.checks) {
        json x{{"predicate", c.predicate}, {"level", to_string(c.level)}};
        if (c.expected) x["expect"] = to_string(*c.expected);
        checks.push_back(x);
    }
    json j{{"scenario", a.scenario},
           {"checks", checks},
           {"reports", reports},
           {"witness_kind", a.witness_kind},
           {"witness_matches_trace", a.witness_matches_trace},
           {"conformance", a.conformance},
           {"convergence",
            {{"converged", a.converged}, {"digests", a.digests}, {"blocks", a.blocks}, {"tentative", a.tentative}}},
           {"failures", a.failures},
           {"ok", a.ok()}};
    j["lints"] = a.lints ? to_json(*a.lints) : json(nullptr);
    j["dependency_ncc"] = a.dependency_ncc ? to_json(*a.dependency_ncc) : json(nullptr);
    if (a.brute) {
        json b{{"target", a.brute->target},
               {"excerpt", a.brute->excerpt},
               {"result", a.brute->satisfiable ? "satisfiable" : "unsatisfiable"},
               {"certificate", to_json(a.brute->certificate)}};
        if (a.brute->witness) b["witness"] = witness_to_json(*a.brute->witness);
        j["brute"] = b;
    }
    return j;
}

void write_artifact(const std::string& dir, const RunArtifact& a) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::ostringstream hist;
    write_history_jsonl(hist, a.history);
    write_text_file(dir + "/history.jsonl", hist.str());
    if (a.trace) write_text_file(dir + "/trace.json", to_json(*a.trace).dump(1) + "\n");
    if (a.witness) write_text_file(dir + "/witness.json", witness_to_json(*a.witness).dump(1) + "\n");
    json meta{{"scenario", a.scenario},
              {"protocol", a.protocol},
              {"rdt", to_string(a.rdt)},
              {"mode", to_string(a.mode)},
              {"seed", a.seed},
              {"steps", a.steps},
              {"trace_hash", a.trace_hash},
              {"tail_probes", a.hz.tail_probes},
              {"stabilization_index", a.hz.stabilization_index}};
    write_text_file(dir + "/meta.json", meta.dump(1) + "\n");
    write_text_file(dir + "/report.json", artifact_report(a).dump(1) + "\n");
}

RunArtifact read_artifact(const std::string& dir) {
    namespace fs = std::filesystem;
    RunArtifact a;
    json meta = read_json_file(dir + "/meta.json");
    a.scenario = meta.at("scenario").get<std::string>();
    a.protocol = meta.at("protocol").get<std::string>();
    a.rdt = parse_rdt(meta.at("rdt").get<std::string>());
    a.mode = parse_mode(meta.at("mode").get<std::string>());
    a.seed = meta.at("seed").get<std::uint64_t>();
    a.steps = meta.at("steps").get<std::int64_t>();
    a.trace_hash = meta.at("trace_hash").get<std::uint64_t>();
    a.hz = HorizonConfig{meta.at("tail_probes").get<int>(), meta.at("stabilization_index").get<int>()};
    a.history = load_history(dir + "/history.jsonl");
    if (fs::exists(dir + "/trace.json")) a.trace = trace_from_json(read_json_file(dir + "/trace.json"));
    if (fs::exists(dir + "/witness.json")) a.witness = witness_from_json(a.history, read_json_file(dir + "/witness.json"));
    json rep = read_json_file(dir + "/report.json");
    for (const auto& c : rep.at("checks")) {
        Check x{c.at("predicate").get<std::string>(), parse_level(c.at("level").get<std::string>()), {}};
        if (c.contains("expect")) x.expected = parse_verdict(c.at("expect").get<std::string>());
        a.checks.push_back(std::move(x));
    }
    a.reports = recheck(a);
    if (a.trace) a.lints = check_act_restrictions(*a.trace);
    return a;
}

std::vector<PredicateReport> recheck(const RunArtifact& a) {
    std::vector<PredicateReport> out;
    if (!a.witness) return out;
    RdtSpec spec{a.rdt};
    for (const auto& c : a.checks) out.push_back(check_by_name(*a.witness, c.predicate, c.level, spec, a.hz));
    return out;
}

}  // namespace act
