#include <doctest.h>

#include <algorithm>
#include <random>

#include "act/protocols.hpp"
#include "act/witness.hpp"

using namespace act;

namespace {

Value S(std::string v) { return Value{std::move(v)}; }

// Every ar permutation times every vis relation; no pruning at all.
bool naive_satisfiable(const History& h, const std::vector<TargetClause>& target, const RdtSpec& spec,
                       const HorizonConfig& hz) {
    int n = h.size();
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b) pairs.emplace_back(a, b);
    std::vector<EventId> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    do {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
            AbstractExecution a{h, Relation(n), TotalOrder(perm), {}};
            for (std::size_t k = 0; k < pairs.size(); ++k)
                if (mask >> k & 1) a.vis.add(pairs[k].first, pairs[k].second);
            if (check_target(a, target, spec, hz).ok()) return true;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

History random_seq_history(std::mt19937_64& rng, int n) {
    static const std::vector<std::string> reads{"", "a", "b", "ab", "ba"};
    std::vector<Event> evs;
    std::int64_t t = 0;
    std::vector<std::int64_t> free_at(n, 0);
    for (int i = 0; i < n; ++i) {
        Event e;
        e.id = i;
        e.client = static_cast<int>(rng() % 2);
        t += static_cast<std::int64_t>(rng() % 3);
        e.invoke_ts = std::max(t, free_at[e.client]);
        e.lvl = rng() % 2 ? Level::Strong : Level::Weak;
        bool append = rng() % 2;
        e.op = append ? op("append", {S(std::string(1, static_cast<char>('a' + rng() % 2)))}) : op("read");
        if (rng() % 7 == 0 && i == n - 1) {
            e.rval = RetVal::pending();
        } else {
            e.return_ts = e.invoke_ts + static_cast<std::int64_t>(rng() % 3);
            free_at[e.client] = *e.return_ts + 1;
            e.rval = append ? RetVal::ok() : RetVal::str(reads[rng() % reads.size()]);
        }
        evs.push_back(e);
    }
    return History(evs);
}

Event mk(EventId id, OpLabel o, RetVal r, Level l, int client, std::int64_t inv, std::int64_t ret) {
    Event e;
    e.id = id;
    e.op = std::move(o);
    e.rval = std::move(r);
    e.lvl = l;
    e.client = client;
    e.invoke_ts = inv;
    e.return_ts = ret;
    return e;
}

History impossibility(const std::string& x_reads) {
    return History({mk(0, op("append", {S("a")}), RetVal::ok(), Level::Weak, 0, 0, 1),
                    mk(1, op("append", {S("b")}), RetVal::ok(), Level::Weak, 1, 0, 1),
                    mk(2, op("read"), RetVal::str("ab"), Level::Weak, 0, 2, 3),
                    mk(3, op("read"), RetVal::str(x_reads), Level::Strong, 1, 4, 5)});
}

Schedule quick(std::uint64_t seed) {
    Schedule s;
    s.seed = seed;
    s.delay_min = 1;
    s.delay_max = 4;
    s.tob_min = 2;
    s.tob_max = 6;
    return s;
}

SimWorld random_run(ProtocolId p, RdtId rdt, std::uint64_t seed, int ops) {
    SimWorld w = make_world({p, 3, rdt, 0, AnncFault::None}, quick(seed));
    std::mt19937_64 rng(seed);
    for (int i = 0; i < ops; ++i) {
        OpLabel o;
        Level l = Level::Weak;
        if (rdt == RdtId::NNC) {
            int k = static_cast<int>(rng() % 3);
            o = k == 0 ? op("add", {Value{std::int64_t(1 + rng() % 4)}})
                : k == 1 ? op("get") : op("subtract", {Value{std::int64_t(1 + rng() % 4)}});
            if (k == 2) l = Level::Strong;
        } else {
            o = rng() % 3 ? op("append", {S(std::string(1, static_cast<char>('a' + i)))}) : op("read");
            if (rng() % 4 == 0) l = Level::Strong;
        }
        w.submit({static_cast<std::int64_t>(rng() % 20), i, static_cast<int>(rng() % 3), o, l});
    }
    w.run_to_quiescence(20000);
    return w;
}

}  // namespace

TEST_CASE("brute force agrees with exhaustive ar x vis enumeration") {
    std::mt19937_64 rng(31);
    RdtSpec seq{RdtId::Seq};
    const std::vector<std::string> targets{"BEC(weak)", "Lin(strong)", "Seq(weak)", "BEC(weak)&Lin(strong)",
                                           "NCC(weak)&RVal(strong)", "SinOrd(strong)&SessArb(weak)"};
    int sat = 0, unsat = 0;
    for (int t = 0; t < 120; ++t) {
        int n = 2 + static_cast<int>(rng() % 2) + (t % 10 == 0 ? 1 : 0);
        History h = random_seq_history(rng, n);
        auto target = parse_target(targets[rng() % targets.size()]);
        HorizonConfig hz = rng() % 2 ? HorizonConfig::everything() : HorizonConfig::nothing(h);
        BruteResult r = brute_force_witness(h, target, seq, hz);
        CAPTURE(t);
        CAPTURE(target_str(target));
        CHECK(r.certificate.exhausted != r.satisfiable());   // search stops at the first witness
        CHECK(r.satisfiable() == naive_satisfiable(h, target, seq, hz));
        if (r.witness) CHECK(check_target(*r.witness, target, seq, hz).ok());
        (r.satisfiable() ? sat : unsat)++;
    }
    CHECK(sat > 10);
    CHECK(unsat > 10);
}

TEST_CASE("impossibility history and its flipped variant") {
    auto target = parse_target("BEC(weak)&SinOrd(strong)&BEC(strong)");
    RdtSpec seq{RdtId::Seq};
    History h = impossibility("b");
    BruteResult r = brute_force_witness(h, target, seq, HorizonConfig::nothing(h));
    CHECK_FALSE(r.satisfiable());
    CHECK(r.certificate.orders_total == 24);
    CHECK(r.certificate.exhausted);
    CHECK(naive_satisfiable(h, target, seq, HorizonConfig::nothing(h)) == false);
    History f = impossibility("ab");
    BruteResult rf = brute_force_witness(f, target, seq, HorizonConfig::nothing(f));
    REQUIRE(rf.satisfiable());
    CHECK(check_target(*rf.witness, target, seq, HorizonConfig::nothing(f)).ok());
}

TEST_CASE("brute force refuses oversized histories") {
    std::vector<Event> evs;
    for (int i = 0; i < kBruteMaxPinned + 1; ++i)
        evs.push_back(mk(i, op("append", {S("a")}), RetVal::ok(), Level::Weak, i, 0, 1));
    History h(evs);
    CHECK_THROWS_AS(brute_force_witness(h, parse_target("BEC(weak)"), RdtSpec{RdtId::Seq}, HorizonConfig::everything()),
                    TooLarge);
}

TEST_CASE("target parsing") {
    auto t = parse_target("BEC(weak)&SinOrd(strong)");
    REQUIRE(t.size() == 2);
    CHECK(t[1].predicate == "SinOrd");
    CHECK(t[1].level == Level::Strong);
    CHECK(target_str(t) == "BEC(weak)&SinOrd(strong)");
    CHECK_THROWS(parse_target("BEC"));
    CHECK_THROWS(parse_target("BEC(medium)"));
    CHECK_THROWS(parse_target("FEC(weak)"));
}

TEST_CASE("built ANNC witnesses match their traces and pass the checks") {
    RdtSpec nnc{RdtId::NNC};
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        SimWorld w = random_run(ProtocolId::ANNC, RdtId::NNC, seed, 12);
        History h = w.history();
        AbstractExecution a = build_witness(h, w.trace(), RunMode::Stable);
        CHECK(check_witness_against_trace(a, w.trace()));
        HorizonConfig hz = HorizonConfig::nothing(h);
        CHECK(check_composite(a, Composite::BEC, Level::Weak, nnc, hz).ok());
        CHECK(check_composite(a, Composite::Lin, Level::Strong, nnc, hz).ok());
        CHECK(witness_kind(w.trace(), RunMode::Stable) == WitnessKind::ANNC_Stable);
    }
}

TEST_CASE("built AcuteBayou witnesses satisfy FEC(weak) and Lin(strong)") {
    RdtSpec seq{RdtId::Seq};
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        SimWorld w = random_run(ProtocolId::AcuteBayou, RdtId::Seq, seed, 12);
        History h = w.history();
        AbstractExecution a = build_witness(h, w.trace(), RunMode::Stable);
        CHECK(check_witness_against_trace(a, w.trace()));
        HorizonConfig hz = HorizonConfig::nothing(h);
        CHECK(check_composite(a, Composite::FEC, Level::Weak, seq, hz).ok());
        CHECK(check_composite(a, Composite::Lin, Level::Strong, seq, hz).ok());
        // Strong events see the execution through ar itself.
        for (const auto& e : h.events())
            if (e.lvl == Level::Strong) CHECK_FALSE(a.par_differs(e.id));
    }
}

TEST_CASE("witness-vs-trace rejects a flipped TOB pair") {
    SimWorld w = random_run(ProtocolId::ANNC, RdtId::NNC, 3, 14);
    History h = w.history();
    AbstractExecution a = build_witness(h, w.trace(), RunMode::Stable);
    REQUIRE(check_witness_against_trace(a, w.trace()));
    std::vector<EventId> tob;
    for (EventId e : a.ar.seq())
        if (w.trace().events[e].tob_no) tob.push_back(e);
    REQUIRE(tob.size() >= 2);
    std::vector<EventId> seq = a.ar.seq();
    auto i = std::find(seq.begin(), seq.end(), tob[0]);
    auto j = std::find(seq.begin(), seq.end(), tob[1]);
    std::iter_swap(i, j);
    a.ar = TotalOrder(seq);
    CHECK_FALSE(check_witness_against_trace(a, w.trace()));
}

TEST_CASE("witness-vs-trace on an empty run") {
    ProtocolTrace t;
    t.protocol = "annc";
    AbstractExecution a;
    CHECK(check_witness_against_trace(a, t));
}

TEST_CASE("builder input validation") {
    SimWorld w = random_run(ProtocolId::RedBlue, RdtId::Seq, 1, 4);
    CHECK_THROWS_AS(build_witness(w.history(), w.trace(), RunMode::Stable), TraceMismatch);
    SimWorld a = random_run(ProtocolId::ANNC, RdtId::NNC, 1, 6);
    History shorter = a.history().excerpt({0, 1});
    CHECK_THROWS_AS(build_witness(shorter, a.trace(), RunMode::Stable), TraceMismatch);
}

TEST_CASE("dependency edges follow recorded state traces") {
    SimWorld w = random_run(ProtocolId::AcuteBayou, RdtId::Seq, 5, 12);
    History h = w.history();
    Relation d = dependency_edges(h, w.trace());
    for (EventId e = 0; e < h.size(); ++e) {
        const auto& tr = w.trace().events[e].trace_at_return;
        if (!tr) continue;
        for (EventId x : *tr)
            if (x != e) CHECK(d.has(x, e));
    }
    // Stable AcuteBayou traces never disagree on the order of two requests.
    CHECK(is_acyclic(d));
}
