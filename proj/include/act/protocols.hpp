#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "act/rdt.hpp"
#include "act/simnet.hpp"

namespace act {

struct DuplicateExecution : std::logic_error {
    using std::logic_error::logic_error;
};
struct NotOnTop : std::logic_error {
    using std::logic_error::logic_error;
};

// Register store with an undo log. Operations are evaluated as register
// read/write scripts: seq keeps one string register, nnc one integer
// register, kvs one register per key.
class StateObject {
public:
    using Db = std::map<std::string, Value>;

    explicit StateObject(RdtId rdt);

    RetVal execute(const Dot& d, const OpLabel& o);
    void rollback(const Dot& d);
    RetVal execute_readonly(const OpLabel& o) const;

    // Dots of executed, not rolled back requests, oldest first.
    std::vector<Dot> trace() const;
    bool contains(const Dot& d) const;
    const Db& db() const { return db_; }
    RdtId rdt() const { return rdt_; }
    std::string repr() const;

private:
    struct Undo {
        Dot dot;
        std::map<std::string, std::optional<Value>> prior;
    };
    RdtId rdt_;
    Db db_;
    std::vector<Undo> log_;
};

std::string db_repr(const StateObject::Db& db);

// ------------------------------------------------------------------- ANNC

// Deliberate rule breakers, one per restriction.
enum class AnncFault { None, VisibleReads, Heartbeat, EchoOnDeliver, WeakAwaitsDelivery, DeferredStrongResponse };
const char* to_string(AnncFault f);
AnncFault parse_fault(const std::string& s);

class AnncReplica : public ReplicaMachine {
public:
    explicit AnncReplica(int id, AnncFault fault = AnncFault::None);

    void on_invoke(Env& env, const Invocation& inv) override;
    void on_deliver(Env& env, const Message& m) override;
    bool internal_enabled() const override { return heartbeat_pending_; }
    void on_internal(Env& env) override;
    std::string state_repr() const override;
    std::string convergence_digest() const override;

    std::int64_t weak_add() const { return weak_add_; }
    std::int64_t strong_add() const { return strong_add_; }
    std::int64_t strong_sub() const { return strong_sub_; }
    std::int64_t value() const { return weak_add_ - strong_sub_; }

private:
    void rb_deliver_add(Env& env, const Request& r);
    void flush_deferred(Env& env);

    int id_;
    AnncFault fault_;
    std::int64_t weak_add_ = 0, strong_add_ = 0, strong_sub_ = 0, curr_event_no_ = 0;
    std::map<Dot, EventId> awaiting_;
    std::set<Dot> rb_delivered_adds_;
    std::int64_t reads_seen_ = 0;
    bool heartbeat_pending_ = false;
    std::map<Dot, EventId> weak_awaiting_;
    std::vector<std::pair<EventId, RetVal>> deferred_;
};

// ------------------------------------------------------------------ Bayou

enum class BayouFlavor { Classic, Acute };

struct BayouStats {
    int rollbacks = 0;
    int executions = 0;
    int commits = 0;
};

class BayouReplica : public ReplicaMachine {
public:
    BayouReplica(int id, BayouFlavor flavor, RdtId rdt, int primary);

    void on_invoke(Env& env, const Invocation& inv) override;
    void on_deliver(Env& env, const Message& m) override;
    bool internal_enabled() const override;
    void on_internal(Env& env) override;
    std::string state_repr() const override;
    std::string convergence_digest() const override;

    const std::vector<Request>& committed() const { return committed_; }
    const std::vector<Request>& tentative() const { return tentative_; }
    const std::vector<Request>& executed() const { return executed_; }
    const StateObject& state() const { return state_; }
    const BayouStats& stats() const { return stats_; }

private:
    void insert_into_tentative(const Request& r);
    void adjust_execution();
    void commit(Env& env, const Request& r);
    std::vector<EventId> state_trace_events() const;
    bool is_committed(const Dot& d) const;

    int id_;
    BayouFlavor flavor_;
    int primary_;
    StateObject state_;
    std::int64_t curr_event_no_ = 0;
    std::vector<Request> committed_, tentative_, executed_, to_be_executed_, to_be_rolled_back_;
    struct Awaiting {
        EventId event;
        std::optional<RetVal> response;
    };
    std::map<Dot, Awaiting> awaiting_;
    std::map<Dot, EventId> events_;
    BayouStats stats_;
};

// ---------------------------------------------------------------- RedBlue

// Blue (weak) appends travel by causal broadcast, red (strong) ones by TOB.
// Reads order records by (lc, s).
class RedBlueReplica : public ReplicaMachine {
public:
    explicit RedBlueReplica(int id);

    void on_invoke(Env& env, const Invocation& inv) override;
    void on_deliver(Env& env, const Message& m) override;
    std::string state_repr() const override;
    std::string convergence_digest() const override;

    std::string read() const;
    std::int64_t lc() const { return lc_; }

private:
    struct Rec {
        std::string s;
        std::int64_t lc;
        Dot dot;
        auto operator<=>(const Rec&) const = default;
    };
    void apply(const Rec& r);

    int id_;
    std::int64_t lc_ = 0, curr_event_no_ = 0;
    std::set<Rec> delivered_;
    std::map<Dot, EventId> awaiting_;
};

// ---------------------------------------------------------------- factory

enum class ProtocolId { ANNC, ClassicBayou, AcuteBayou, RedBlue };
const char* to_string(ProtocolId p);
ProtocolId parse_protocol(const std::string& s);

struct ProtocolConfig {
    ProtocolId protocol = ProtocolId::ANNC;
    int replicas = 3;
    RdtId rdt = RdtId::NNC;
    int primary = 0;
    AnncFault fault = AnncFault::None;
};

std::vector<std::unique_ptr<ReplicaMachine>> make_replicas(const ProtocolConfig& c);
SimWorld make_world(const ProtocolConfig& c, const Schedule& s);

}  // namespace act
