#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "act/core_model.hpp"
#include "act/predicates.hpp"

namespace act {

using Dot = std::pair<int, std::int64_t>;   // (replica, event number)

enum class ReqTag { ADD, SUBTRACT, ISSUE, COMMIT, SHADOW, NOTE };
const char* to_string(ReqTag t);

struct Request {
    ReqTag tag = ReqTag::ISSUE;
    std::int64_t timestamp = 0;
    Dot dot{-1, 0};
    Level level = Level::Weak;
    OpLabel op;
    std::set<Dot> ctx;
    std::int64_t value = 0;
    std::int64_t lc = 0;
    EventId event = -1;   // history event that issued it

    bool strong() const { return level == Level::Strong; }
    bool same(const Request& o) const { return dot == o.dot; }
};

// Bayou's arbitration operator: (timestamp, dot) lexicographic.
bool operator<(const Request& a, const Request& b);

enum class MsgKind { RB, FIFO_RB, CAUSAL_RB, TOB };
const char* to_string(MsgKind k);

struct Message {
    int id = 0;
    MsgKind kind = MsgKind::RB;
    int origin = 0;
    Request payload;
    std::int64_t cast_tick = 0;
    std::vector<int> deps;   // must be delivered at the destination first
};

struct Invocation {
    EventId event = -1;
    OpLabel op;
    Level level = Level::Weak;
    bool readonly = false;
};

// What a replica handler may do during one atomic step.
class Env {
public:
    virtual ~Env() = default;
    virtual int self() const = 0;
    virtual std::int64_t clock() const = 0;
    virtual int rb_cast(const Request& r) = 0;
    virtual int fifo_rb_cast(const Request& r) = 0;
    virtual int causal_rb_cast(const Request& r) = 0;
    virtual int tob_cast(const Request& r) = 0;
    // trace: ids of the events whose requests formed the state the response
    // was computed on, in execution order.
    virtual void respond(EventId e, const RetVal& v, std::optional<std::vector<EventId>> trace = std::nullopt) = 0;
    virtual void note_request(EventId e, const Request& r) = 0;
    // Final position of a request fixed outside TOB (classic primary commit).
    virtual void note_commit_order(EventId e) = 0;
};

class ReplicaMachine {
public:
    virtual ~ReplicaMachine() = default;
    virtual void on_invoke(Env& env, const Invocation& inv) = 0;
    virtual void on_deliver(Env& env, const Message& m) = 0;
    virtual bool internal_enabled() const { return false; }
    virtual void on_internal(Env&) {}
    // Full local state, for the invisible-reads lint and determinism hashes.
    virtual std::string state_repr() const = 0;
    // The part of the state that must agree across replicas at quiescence.
    virtual std::string convergence_digest() const = 0;
};

std::uint64_t fnv1a(const std::string& s);

// ----------------------------------------------------------------- traces

struct EventMeta {
    int replica = 0;
    int client = 0;
    OpLabel op;
    Level level = Level::Weak;
    bool readonly = false;
    std::int64_t invoke_tick = 0;
    std::optional<std::int64_t> return_tick;
    RetVal rval;
    std::optional<Dot> dot;
    std::int64_t timestamp = 0;
    std::vector<int> rb_msgs;
    std::vector<int> tob_msgs;
    std::optional<std::int64_t> tob_no;   // final order number
    std::optional<std::vector<EventId>> trace_at_return;
    int extra_responses = 0;
};

struct MessageMeta {
    int id = 0;
    MsgKind kind = MsgKind::RB;
    int origin = 0;
    ReqTag tag = ReqTag::ISSUE;
    EventId event = -1;
    std::int64_t cast_tick = 0;
    std::optional<std::int64_t> tob_no;
    bool withheld = false;
    std::vector<std::optional<std::int64_t>> delivered_at;   // per replica
};

enum class StepKind { Invoke, Deliver, Internal };
const char* to_string(StepKind k);

struct StepRecord {
    std::int64_t tick = 0;
    int replica = 0;
    StepKind kind = StepKind::Invoke;
    EventId event = -1;
    int msg = -1;
    std::uint64_t hash_before = 0;
    std::uint64_t hash_after = 0;
    std::vector<int> casts;
    std::vector<EventId> responses;
    bool passive_after = true;
};

struct ProtocolTrace {
    std::string protocol;
    int replicas = 0;
    std::vector<EventMeta> events;
    std::vector<MessageMeta> messages;
    std::vector<StepRecord> steps;
    std::vector<int> tob_log;   // message ids by tobNo (tobNo = index + 1)

    bool delivered_before(int msg, int replica, std::int64_t tick) const;
    std::uint64_t hash() const;
};

// ---------------------------------------------------------------- schedule

enum class RunMode { Stable, Async };
const char* to_string(RunMode m);
RunMode parse_mode(const std::string& s);

struct ScriptOp {
    std::int64_t at = 0;
    int client = 0;
    int replica = 0;
    OpLabel op;
    Level level = Level::Weak;
};

struct LinkDelay {
    int from = 0, to = 0;
    std::int64_t min = 1, max = 1;
};

struct Stall {
    int replica = 0;
    std::int64_t from = 0, to = 0;   // internal events suppressed in [from, to)
};

struct PartitionPhase {
    std::int64_t at = 0;
    std::vector<std::vector<int>> blocks;   // empty: fully connected
};

struct Schedule {
    std::uint64_t seed = 1;
    RunMode mode = RunMode::Stable;
    std::int64_t delay_min = 1, delay_max = 3;
    std::int64_t tob_min = 2, tob_max = 5;   // cast -> sequenced
    std::vector<LinkDelay> links;
    std::vector<PartitionPhase> partitions;
    std::optional<std::int64_t> tob_cutoff;   // async: unsequenced by then -> withheld
    std::vector<std::int64_t> clock_skew;
    std::vector<Stall> stalls;
    std::vector<std::pair<int, std::int64_t>> crashes;   // (replica, tick)
};

struct Quiescent : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StepBudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownReplica : std::out_of_range {
    using std::out_of_range::out_of_range;
};

class SimWorld {
public:
    using ReadonlyFn = std::function<bool(const OpLabel&)>;

    SimWorld(std::vector<std::unique_ptr<ReplicaMachine>> replicas, Schedule schedule, ReadonlyFn readonly,
             std::string protocol = {});

    int replica_count() const { return static_cast<int>(replicas_.size()); }
    ReplicaMachine& replica(int r);
    const ReplicaMachine& replica(int r) const;

    void submit(const ScriptOp& op);
    // Executes one enabled event; false when nothing is or will be enabled.
    bool step();
    void run_to_quiescence(std::int64_t max_steps);

    std::int64_t now() const { return tick_; }
    std::int64_t steps_taken() const { return static_cast<std::int64_t>(trace_.steps.size()); }
    int events_issued() const { return static_cast<int>(trace_.events.size()); }
    std::size_t unissued_ops() const;

    History history() const;
    const ProtocolTrace& trace() const { return trace_; }
    const Schedule& schedule() const { return sched_; }

    // Partition block id of a replica at the current tick.
    int block_of(int r) const;
    bool crashed(int r) const;
    bool stalled(int r) const;
    std::vector<int> withheld_messages() const;
    std::size_t pending_deliveries() const;
    // Every replica's TOB deliveries form a prefix of tob_log.
    bool tob_prefix_ok() const;

private:
    class StepEnv;
    struct Delivery {
        int msg;
        int dest;
        std::int64_t due;
    };
    struct Client {
        std::vector<ScriptOp> queue;
        std::size_t next = 0;
        EventId busy = -1;
        std::int64_t free_at = 0;
    };

    std::int64_t draw(std::int64_t lo, std::int64_t hi);
    std::int64_t link_delay(int from, int to);
    int cast(int origin, MsgKind kind, const Request& r);
    void sequence_tob();
    bool deliverable(const Delivery& d) const;
    std::optional<std::int64_t> next_wakeup() const;
    void execute_invoke(int client_id);
    void execute_delivery(std::size_t idx);
    void execute_tob(int r);
    void execute_internal(int r);
    void begin_step(StepRecord& rec);
    void end_step(StepRecord& rec);

    std::vector<std::unique_ptr<ReplicaMachine>> replicas_;
    Schedule sched_;
    ReadonlyFn readonly_;
    std::mt19937_64 rng_;
    std::int64_t tick_ = 0;

    std::vector<Message> msgs_;
    std::vector<Delivery> rb_pending_;
    struct Unsequenced {
        int msg;
        std::int64_t due;
    };
    std::vector<Unsequenced> tob_unsequenced_;
    std::vector<std::int64_t> tob_seq_tick_;
    std::vector<std::vector<std::int64_t>> tob_due_;   // [replica][tobNo-1]
    std::vector<std::size_t> tob_next_;                // per replica
    std::vector<std::set<int>> delivered_;             // per replica
    std::vector<int> last_fifo_;                       // per origin
    std::map<int, Client> clients_;
    ProtocolTrace trace_;
    StepRecord* cur_ = nullptr;
};

// The five implementation restrictions, checked over a recorded trace.
PredicateReport check_act_restrictions(const ProtocolTrace& t);

}  // namespace act
