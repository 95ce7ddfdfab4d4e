#include <doctest.h>

#include <random>

#include "act/protocols.hpp"

using namespace act;

namespace {

Value I(std::int64_t v) { return Value{v}; }
Value S(std::string v) { return Value{std::move(v)}; }

OpLabel random_op(std::mt19937_64& rng, RdtId rdt) {
    auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
    std::string key(1, static_cast<char>('x' + pick(3)));
    switch (rdt) {
    case RdtId::Seq: return pick(4) ? op("append", {S(std::string(1, static_cast<char>('a' + pick(5))))}) : op("read");
    case RdtId::NNC:
        if (pick(3) == 0) return op("get");
        return pick(2) ? op("add", {I(pick(5))}) : op("subtract", {I(pick(6))});
    default:
        switch (pick(4)) {
        case 0: return op("put", {S(key), I(pick(3))});
        case 1: return op("get", {S(key)});
        case 2: return op("setif", {S(key), S(std::string(1, static_cast<char>('x' + pick(3)))), S("z"), I(pick(4))});
        default: return op("app", {S(key), S("q")});
        }
    }
}

OperationContext serial(const std::vector<OpLabel>& ops) {
    OperationContext c;
    for (std::size_t i = 0; i < ops.size(); ++i) c.ids.push_back(static_cast<EventId>(i));
    c.ops = ops;
    c.vis = Relation(static_cast<int>(ops.size()));
    return c;
}

ScriptOp at(std::int64_t t, int client, int replica, OpLabel o, Level l = Level::Weak) {
    return {t, client, replica, std::move(o), l};
}

Schedule quick(std::uint64_t seed = 1) {
    Schedule s;
    s.seed = seed;
    s.delay_min = 1;
    s.delay_max = 3;
    s.tob_min = 2;
    s.tob_max = 4;
    return s;
}

}  // namespace

TEST_CASE("state object: random execute/rollback matches replay of the live requests") {
    for (RdtId rdt : {RdtId::Seq, RdtId::NNC, RdtId::KVS}) {
        std::mt19937_64 rng(21 + static_cast<int>(rdt));
        for (int t = 0; t < 60; ++t) {
            StateObject so(rdt);
            std::vector<std::pair<Dot, OpLabel>> live;
            std::int64_t n = 0;
            for (int step = 0; step < 25; ++step) {
                if (!live.empty() && rng() % 3 == 0) {
                    so.rollback(live.back().first);
                    live.pop_back();
                } else {
                    OpLabel o = random_op(rng, rdt);
                    std::vector<OpLabel> prefix;
                    for (const auto& [d, x] : live) prefix.push_back(x);
                    RdtSpec spec{rdt};
                    RetVal want = spec.eval(o, serial(prefix));
                    Dot d{0, ++n};
                    CHECK(so.execute(d, o) == want);
                    live.emplace_back(d, o);
                }
                StateObject fresh(rdt);
                std::vector<Dot> dots;
                for (const auto& [d, x] : live) {
                    fresh.execute(d, x);
                    dots.push_back(d);
                }
                CHECK(so.db() == fresh.db());
                CHECK(so.trace() == dots);
            }
        }
    }
}

TEST_CASE("state object errors") {
    StateObject so(RdtId::Seq);
    so.execute({0, 1}, op("append", {S("a")}));
    so.execute({0, 2}, op("append", {S("b")}));
    CHECK_THROWS_AS(so.rollback({0, 1}), NotOnTop);
    CHECK_THROWS_AS(so.execute({0, 2}, op("append", {S("c")})), DuplicateExecution);
    CHECK(so.execute_readonly(op("read")) == RetVal::str("ab"));
    CHECK(so.contains({0, 1}));
    CHECK_THROWS_AS(StateObject(RdtId::MVR), BadOperation);
}

TEST_CASE("ANNC small examples") {
    SimWorld w = make_world({ProtocolId::ANNC, 2, RdtId::NNC, 0, AnncFault::None}, quick());
    w.submit(at(0, 0, 0, op("add", {I(5)})));
    w.submit(at(2, 0, 0, op("get")));
    w.submit(at(20, 1, 1, op("subtract", {I(3)}), Level::Strong));
    w.submit(at(40, 1, 1, op("subtract", {I(7)}), Level::Strong));
    w.submit(at(60, 2, 0, op("get")));
    w.run_to_quiescence(10000);
    History h = w.history();
    CHECK(h.at(1).rval == RetVal::integer(5));
    CHECK(h.at(2).rval == RetVal::boolean(true));
    CHECK(h.at(3).rval == RetVal::boolean(false));
    CHECK(h.at(4).rval == RetVal::integer(2));
    for (int r = 0; r < 2; ++r) {
        auto& a = dynamic_cast<const AnncReplica&>(w.replica(r));
        CHECK(a.value() == 2);
        CHECK(a.strong_sub() == 3);
    }
}

TEST_CASE("ANNC rejects bad operations") {
    SimWorld w = make_world({ProtocolId::ANNC, 1, RdtId::NNC, 0, AnncFault::None}, quick());
    w.submit(at(0, 0, 0, op("add", {I(-2)})));
    CHECK_THROWS_AS(w.run_to_quiescence(100), BadOperation);
}

TEST_CASE("RedBlue: replicas agree on the (lc, s) order") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        SimWorld w = make_world({ProtocolId::RedBlue, 3, RdtId::Seq, 0, AnncFault::None}, quick(seed));
        std::mt19937_64 rng(seed);
        for (int i = 0; i < 8; ++i)
            w.submit(at(static_cast<std::int64_t>(rng() % 20), i, static_cast<int>(rng() % 3),
                        op("append", {S(std::string(1, static_cast<char>('a' + i)))}),
                        rng() % 3 == 0 ? Level::Strong : Level::Weak));
        w.run_to_quiescence(10000);
        std::string r0 = dynamic_cast<const RedBlueReplica&>(w.replica(0)).read();
        CHECK(r0.size() == 8);
        for (int r = 1; r < 3; ++r) CHECK(dynamic_cast<const RedBlueReplica&>(w.replica(r)).read() == r0);
    }
}

TEST_CASE("AcuteBayou: commit order overrides timestamps, with rollback") {
    Schedule s = quick();
    s.clock_skew = {100, 0};
    SimWorld w = make_world({ProtocolId::AcuteBayou, 2, RdtId::Seq, 0, AnncFault::None}, s);
    w.submit(at(1, 0, 0, op("append", {S("x")})));
    w.submit(at(2, 1, 1, op("append", {S("y")})));
    w.run_to_quiescence(10000);
    auto& r0 = dynamic_cast<const BayouReplica&>(w.replica(0));
    auto& r1 = dynamic_cast<const BayouReplica&>(w.replica(1));
    // y carries the smaller timestamp, so it runs ahead of x until x's commit lands first.
    REQUIRE(r0.committed().size() == 2);
    CHECK(r0.committed()[0].op.str_arg(0) == "x");
    CHECK(r1.stats().rollbacks >= 1);
    for (const auto* r : {&r0, &r1}) {
        CHECK(r->tentative().empty());
        CHECK(r->state().execute_readonly(op("read")) == RetVal::str("xy"));
    }
    CHECK(r0.convergence_digest() == r1.convergence_digest());
}

TEST_CASE("Bayou responses replay on a fresh state object") {
    int checked = 0;
    for (auto [flavor, rdt] : {std::pair{ProtocolId::AcuteBayou, RdtId::Seq}, std::pair{ProtocolId::AcuteBayou, RdtId::KVS},
                               std::pair{ProtocolId::ClassicBayou, RdtId::NNC}}) {
        for (std::uint64_t seed = 1; seed <= 15; ++seed) {
            Schedule s = quick(seed);
            s.clock_skew = {static_cast<std::int64_t>(seed % 7), 0, 3};
            SimWorld w = make_world({flavor, 3, rdt, 1, AnncFault::None}, s);
            std::mt19937_64 rng(seed * 31);
            for (int i = 0; i < 12; ++i) {
                OpLabel o = random_op(rng, rdt);
                Level l = rng() % 4 == 0 ? Level::Strong : Level::Weak;
                w.submit(at(static_cast<std::int64_t>(rng() % 25), i, static_cast<int>(rng() % 3), o, l));
            }
            w.run_to_quiescence(20000);
            const auto& t = w.trace();
            RdtSpec spec{rdt};
            for (EventId e = 0; e < static_cast<EventId>(t.events.size()); ++e) {
                const auto& m = t.events[e];
                if (!m.return_tick || !m.trace_at_return) continue;
                std::vector<EventId> tr = *m.trace_at_return;
                if (!tr.empty() && tr.back() == e) tr.pop_back();
                StateObject fresh(rdt);
                std::vector<OpLabel> ops;
                for (std::size_t k = 0; k < tr.size(); ++k) {
                    fresh.execute({9, static_cast<std::int64_t>(k)}, t.events[tr[k]].op);
                    ops.push_back(t.events[tr[k]].op);
                }
                RetVal replay = m.readonly ? fresh.execute_readonly(m.op) : fresh.execute({9, -1}, m.op);
                CAPTURE(e);
                CHECK(replay == m.rval);
                CHECK(spec.eval(m.op, serial(ops)) == m.rval);
                ++checked;
            }
        }
    }
    CHECK(checked > 300);
}

TEST_CASE("names round-trip") {
    for (auto f : {AnncFault::None, AnncFault::VisibleReads, AnncFault::Heartbeat, AnncFault::EchoOnDeliver,
                   AnncFault::WeakAwaitsDelivery, AnncFault::DeferredStrongResponse})
        CHECK(parse_fault(to_string(f)) == f);
    CHECK_THROWS(parse_fault("typo"));
    CHECK(parse_protocol("classic-bayou") == ProtocolId::ClassicBayou);
    CHECK(parse_protocol(to_string(ProtocolId::AcuteBayou)) == ProtocolId::AcuteBayou);
    CHECK_THROWS(parse_protocol("paxos"));
}
