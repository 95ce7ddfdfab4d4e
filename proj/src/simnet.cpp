#include "act/simnet.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace act {

const char* to_string(ReqTag t) {
    switch (t) {
    case ReqTag::ADD: return "ADD";
    case ReqTag::SUBTRACT: return "SUBTRACT";
    case ReqTag::ISSUE: return "ISSUE";
    case ReqTag::COMMIT: return "COMMIT";
    case ReqTag::SHADOW: return "SHADOW";
    case ReqTag::NOTE: return "NOTE";
    }
    return "?";
}

bool operator<(const Request& a, const Request& b) {
    return std::tie(a.timestamp, a.dot) < std::tie(b.timestamp, b.dot);
}

const char* to_string(MsgKind k) {
    switch (k) {
    case MsgKind::RB: return "RB";
    case MsgKind::FIFO_RB: return "FIFO_RB";
    case MsgKind::CAUSAL_RB: return "CAUSAL_RB";
    case MsgKind::TOB: return "TOB";
    }
    return "?";
}

const char* to_string(StepKind k) {
    switch (k) {
    case StepKind::Invoke: return "invoke";
    case StepKind::Deliver: return "deliver";
    case StepKind::Internal: return "internal";
    }
    return "?";
}

const char* to_string(RunMode m) { return m == RunMode::Stable ? "stable" : "async"; }

RunMode parse_mode(const std::string& s) {
    if (s == "stable") return RunMode::Stable;
    if (s == "async") return RunMode::Async;
    throw std::invalid_argument("unknown mode: " + s);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

bool ProtocolTrace::delivered_before(int msg, int replica, std::int64_t tick) const {
    const auto& d = messages.at(msg).delivered_at.at(replica);
    return d && *d < tick;
}

std::uint64_t ProtocolTrace::hash() const {
    std::ostringstream os;
    os << protocol << '|' << replicas << '\n';
    for (const auto& e : events) {
        os << e.replica << ' ' << e.client << ' ' << e.op.str() << ' ' << to_string(e.level) << ' ' << e.invoke_tick
           << ' ' << (e.return_tick ? *e.return_tick : -1) << ' ' << e.rval.str() << ' '
           << (e.tob_no ? *e.tob_no : -1) << '\n';
    }
    for (const auto& s : steps) {
        os << s.tick << ' ' << s.replica << ' ' << to_string(s.kind) << ' ' << s.event << ' ' << s.msg << ' '
           << s.hash_before << ' ' << s.hash_after << ' ' << s.casts.size() << ' ' << s.responses.size() << ' '
           << s.passive_after << '\n';
    }
    for (int m : tob_log) os << m << ',';
    return fnv1a(os.str());
}

// ------------------------------------------------------------------ world

class SimWorld::StepEnv : public Env {
public:
    StepEnv(SimWorld& w, int r) : w_(w), r_(r) {}

    int self() const override { return r_; }
    std::int64_t clock() const override {
        const auto& sk = w_.sched_.clock_skew;
        return w_.tick_ + (r_ < static_cast<int>(sk.size()) ? sk[r_] : 0);
    }
    int rb_cast(const Request& r) override { return w_.cast(r_, MsgKind::RB, r); }
    int fifo_rb_cast(const Request& r) override { return w_.cast(r_, MsgKind::FIFO_RB, r); }
    int causal_rb_cast(const Request& r) override { return w_.cast(r_, MsgKind::CAUSAL_RB, r); }
    int tob_cast(const Request& r) override { return w_.cast(r_, MsgKind::TOB, r); }

    void respond(EventId e, const RetVal& v, std::optional<std::vector<EventId>> trace) override {
        EventMeta& m = w_.trace_.events.at(e);
        if (m.replica != r_) throw std::logic_error("response for event " + std::to_string(e) + " from wrong replica");
        if (m.return_tick) {
            // Re-executions may compute a second response; it is not delivered.
            ++m.extra_responses;
            return;
        }
        m.return_tick = w_.tick_;
        m.rval = v;
        m.trace_at_return = std::move(trace);
        w_.cur_->responses.push_back(e);
        auto& c = w_.clients_.at(m.client);
        c.busy = -1;
        c.free_at = w_.tick_ + 1;
    }

    void note_request(EventId e, const Request& r) override {
        EventMeta& m = w_.trace_.events.at(e);
        m.dot = r.dot;
        m.timestamp = r.timestamp;
    }

    void note_commit_order(EventId e) override {
        EventMeta& m = w_.trace_.events.at(e);
        if (m.tob_no) return;
        std::int64_t n = 0;
        for (const auto& x : w_.trace_.events) n += x.tob_no ? 1 : 0;
        m.tob_no = n + 1;
    }

private:
    SimWorld& w_;
    int r_;
};

SimWorld::SimWorld(std::vector<std::unique_ptr<ReplicaMachine>> replicas, Schedule schedule, ReadonlyFn readonly,
                   std::string protocol)
    : replicas_(std::move(replicas)), sched_(std::move(schedule)), readonly_(std::move(readonly)), rng_(sched_.seed) {
    int n = replica_count();
    if (n == 0) throw std::invalid_argument("world needs at least one replica");
    tob_due_.assign(n, {});
    tob_next_.assign(n, 0);
    delivered_.assign(n, {});
    last_fifo_.assign(n, -1);
    trace_.protocol = std::move(protocol);
    trace_.replicas = n;
    std::sort(sched_.partitions.begin(), sched_.partitions.end(),
              [](const PartitionPhase& a, const PartitionPhase& b) { return a.at < b.at; });
}

ReplicaMachine& SimWorld::replica(int r) {
    if (r < 0 || r >= replica_count()) throw UnknownReplica("unknown replica " + std::to_string(r));
    return *replicas_[r];
}

const ReplicaMachine& SimWorld::replica(int r) const {
    if (r < 0 || r >= replica_count()) throw UnknownReplica("unknown replica " + std::to_string(r));
    return *replicas_[r];
}

void SimWorld::submit(const ScriptOp& op) {
    if (op.replica < 0 || op.replica >= replica_count())
        throw UnknownReplica("script op on unknown replica " + std::to_string(op.replica));
    Client& c = clients_[op.client];
    if (!c.queue.empty() && c.queue.front().replica != op.replica)
        throw std::invalid_argument("client " + std::to_string(op.client) + " bound to another replica");
    c.queue.push_back(op);
}

std::size_t SimWorld::unissued_ops() const {
    std::size_t n = 0;
    for (const auto& [id, c] : clients_) n += c.queue.size() - c.next;
    return n;
}

std::int64_t SimWorld::draw(std::int64_t lo, std::int64_t hi) {
    if (hi <= lo) return lo;
    return lo + static_cast<std::int64_t>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
}

std::int64_t SimWorld::link_delay(int from, int to) {
    if (from == to) return 1;
    for (const auto& l : sched_.links)
        if (l.from == from && l.to == to) return draw(l.min, l.max);
    return draw(sched_.delay_min, sched_.delay_max);
}

int SimWorld::block_of(int r) const {
    const PartitionPhase* cur = nullptr;
    for (const auto& p : sched_.partitions)
        if (p.at <= tick_) cur = &p;
    if (!cur || cur->blocks.empty()) return 0;
    for (std::size_t b = 0; b < cur->blocks.size(); ++b)
        for (int x : cur->blocks[b])
            if (x == r) return static_cast<int>(b);
    return -1 - r;   // unlisted replicas are isolated
}

bool SimWorld::crashed(int r) const {
    for (auto [x, t] : sched_.crashes)
        if (x == r && t <= tick_) return true;
    return false;
}

bool SimWorld::stalled(int r) const {
    for (const auto& s : sched_.stalls)
        if (s.replica == r && s.from <= tick_ && tick_ < s.to) return true;
    return false;
}

int SimWorld::cast(int origin, MsgKind kind, const Request& r) {
    int n = replica_count();
    Message m;
    m.id = static_cast<int>(msgs_.size());
    m.kind = kind;
    m.origin = origin;
    m.payload = r;
    m.cast_tick = tick_;
    if (kind == MsgKind::FIFO_RB) {
        if (last_fifo_[origin] >= 0) m.deps.push_back(last_fifo_[origin]);
        last_fifo_[origin] = m.id;
    } else if (kind == MsgKind::CAUSAL_RB) {
        m.deps.assign(delivered_[origin].begin(), delivered_[origin].end());
        for (const auto& x : msgs_)
            if (x.origin == origin && x.kind == MsgKind::CAUSAL_RB) m.deps.push_back(x.id);
    }
    MessageMeta meta;
    meta.id = m.id;
    meta.kind = kind;
    meta.origin = origin;
    meta.tag = r.tag;
    meta.event = r.event;
    meta.cast_tick = tick_;
    meta.delivered_at.assign(n, std::nullopt);

    if (kind == MsgKind::TOB) {
        std::int64_t due = tick_ + draw(sched_.tob_min, sched_.tob_max);
        if (sched_.mode == RunMode::Async && sched_.tob_cutoff && due > *sched_.tob_cutoff) meta.withheld = true;
        else tob_unsequenced_.push_back({m.id, due});
    } else {
        for (int d = 0; d < n; ++d) rb_pending_.push_back({m.id, d, tick_ + link_delay(origin, d)});
    }
    if (cur_) {
        cur_->casts.push_back(m.id);
        if (cur_->kind == StepKind::Invoke && cur_->event == r.event && r.event >= 0) {
            auto& em = trace_.events[r.event];
            (kind == MsgKind::TOB ? em.tob_msgs : em.rb_msgs).push_back(m.id);
        }
    }
    msgs_.push_back(std::move(m));
    trace_.messages.push_back(std::move(meta));
    return msgs_.back().id;
}

void SimWorld::sequence_tob() {
    std::vector<Unsequenced> ready;
    std::vector<Unsequenced> rest;
    for (const auto& u : tob_unsequenced_) (u.due <= tick_ ? ready : rest).push_back(u);
    if (ready.empty()) return;
    std::sort(ready.begin(), ready.end(),
              [](const Unsequenced& a, const Unsequenced& b) { return std::tie(a.due, a.msg) < std::tie(b.due, b.msg); });
    tob_unsequenced_ = std::move(rest);
    for (const auto& u : ready) {
        trace_.tob_log.push_back(u.msg);
        std::int64_t no = static_cast<std::int64_t>(trace_.tob_log.size());
        auto& meta = trace_.messages[u.msg];
        meta.tob_no = no;
        if (meta.event >= 0) {
            auto& em = trace_.events[meta.event];
            if (std::find(em.tob_msgs.begin(), em.tob_msgs.end(), u.msg) != em.tob_msgs.end() && !em.tob_no)
                em.tob_no = no;
        }
        tob_seq_tick_.push_back(tick_);
        for (int r = 0; r < replica_count(); ++r) tob_due_[r].push_back(tick_ + link_delay(msgs_[u.msg].origin, r));
    }
}

bool SimWorld::deliverable(const Delivery& d) const {
    const Message& m = msgs_[d.msg];
    if (crashed(d.dest) || crashed(m.origin)) return false;
    if (block_of(d.dest) != block_of(m.origin)) return false;
    for (int dep : m.deps)
        if (!delivered_[d.dest].count(dep)) return false;
    return true;
}

std::optional<std::int64_t> SimWorld::next_wakeup() const {
    std::optional<std::int64_t> best;
    auto consider = [&](std::int64_t t) {
        if (t > tick_ && (!best || t < *best)) best = t;
    };
    for (const auto& d : rb_pending_) consider(d.due);
    for (const auto& u : tob_unsequenced_) consider(u.due);
    for (int r = 0; r < replica_count(); ++r) {
        if (tob_next_[r] < trace_.tob_log.size()) consider(tob_due_[r][tob_next_[r]]);
        if (replicas_[r]->internal_enabled())
            for (const auto& s : sched_.stalls)
                if (s.replica == r) consider(s.to);
    }
    for (const auto& p : sched_.partitions) consider(p.at);
    for (const auto& [id, c] : clients_)
        if (c.busy < 0 && c.next < c.queue.size()) consider(std::max(c.queue[c.next].at, c.free_at));
    return best;
}

void SimWorld::begin_step(StepRecord& rec) {
    rec.tick = tick_;
    rec.hash_before = fnv1a(replicas_[rec.replica]->state_repr());
    cur_ = &rec;
}

void SimWorld::end_step(StepRecord& rec) {
    rec.hash_after = fnv1a(replicas_[rec.replica]->state_repr());
    rec.passive_after = !replicas_[rec.replica]->internal_enabled();
    cur_ = nullptr;
    trace_.steps.push_back(std::move(rec));
}

void SimWorld::execute_invoke(int client_id) {
    Client& c = clients_.at(client_id);
    const ScriptOp& op = c.queue[c.next++];
    EventId e = static_cast<EventId>(trace_.events.size());
    EventMeta m;
    m.replica = op.replica;
    m.client = op.client;
    m.op = op.op;
    m.level = op.level;
    m.readonly = readonly_(op.op);
    m.invoke_tick = tick_;
    trace_.events.push_back(m);
    c.busy = e;

    StepRecord rec;
    rec.replica = op.replica;
    rec.kind = StepKind::Invoke;
    rec.event = e;
    begin_step(rec);
    StepEnv env(*this, op.replica);
    replicas_[op.replica]->on_invoke(env, Invocation{e, op.op, op.level, m.readonly});
    end_step(rec);
}

void SimWorld::execute_delivery(std::size_t idx) {
    Delivery d = rb_pending_[idx];
    rb_pending_.erase(rb_pending_.begin() + static_cast<std::ptrdiff_t>(idx));
    delivered_[d.dest].insert(d.msg);
    trace_.messages[d.msg].delivered_at[d.dest] = tick_;
    StepRecord rec;
    rec.replica = d.dest;
    rec.kind = StepKind::Deliver;
    rec.msg = d.msg;
    begin_step(rec);
    StepEnv env(*this, d.dest);
    replicas_[d.dest]->on_deliver(env, msgs_[d.msg]);
    end_step(rec);
}

void SimWorld::execute_tob(int r) {
    int msg = trace_.tob_log[tob_next_[r]++];
    delivered_[r].insert(msg);
    trace_.messages[msg].delivered_at[r] = tick_;
    StepRecord rec;
    rec.replica = r;
    rec.kind = StepKind::Deliver;
    rec.msg = msg;
    begin_step(rec);
    StepEnv env(*this, r);
    replicas_[r]->on_deliver(env, msgs_[msg]);
    end_step(rec);
}

void SimWorld::execute_internal(int r) {
    StepRecord rec;
    rec.replica = r;
    rec.kind = StepKind::Internal;
    begin_step(rec);
    StepEnv env(*this, r);
    replicas_[r]->on_internal(env);
    end_step(rec);
}

bool SimWorld::step() {
    for (;;) {
        sequence_tob();
        // A replica finishes its own work before anything new reaches it.
        for (int r = 0; r < replica_count(); ++r) {
            if (!crashed(r) && !stalled(r) && replicas_[r]->internal_enabled()) {
                execute_internal(r);
                ++tick_;
                return true;
            }
        }
        // (due, class, a, b): invokes before deliveries at equal due time.
        using Key = std::tuple<std::int64_t, int, long long, long long>;
        std::optional<Key> best;
        int best_kind = -1;
        std::size_t best_idx = 0;
        auto offer = [&](Key k, int kind, std::size_t idx) {
            if (!best || k < *best) {
                best = k;
                best_kind = kind;
                best_idx = idx;
            }
        };
        for (const auto& [id, c] : clients_) {
            if (c.busy >= 0 || c.next >= c.queue.size()) continue;
            const ScriptOp& op = c.queue[c.next];
            std::int64_t due = std::max(op.at, c.free_at);
            if (due <= tick_ && !crashed(op.replica)) offer({due, 0, op.at, id}, 0, static_cast<std::size_t>(id));
        }
        for (std::size_t i = 0; i < rb_pending_.size(); ++i) {
            const Delivery& d = rb_pending_[i];
            if (d.due <= tick_ && deliverable(d)) offer({d.due, 1, d.msg, d.dest}, 1, i);
        }
        for (int r = 0; r < replica_count(); ++r) {
            std::size_t k = tob_next_[r];
            if (k < trace_.tob_log.size() && tob_due_[r][k] <= tick_ && !crashed(r))
                offer({tob_due_[r][k], 1, trace_.tob_log[k], r}, 2, static_cast<std::size_t>(r));
        }
        if (best) {
            if (best_kind == 0) execute_invoke(static_cast<int>(best_idx));
            else if (best_kind == 1) execute_delivery(best_idx);
            else execute_tob(static_cast<int>(best_idx));
            ++tick_;
            return true;
        }
        auto w = next_wakeup();
        if (!w) return false;
        tick_ = *w;
    }
}

void SimWorld::run_to_quiescence(std::int64_t max_steps) {
    std::int64_t taken = 0;
    while (step()) {
        if (!tob_prefix_ok()) throw std::logic_error("TOB prefix property broken");
        if (++taken >= max_steps)
            throw StepBudgetExceeded("no quiescence within " + std::to_string(max_steps) + " steps");
    }
}

History SimWorld::history() const {
    std::vector<Event> evs;
    for (std::size_t i = 0; i < trace_.events.size(); ++i) {
        const EventMeta& m = trace_.events[i];
        Event e;
        e.id = static_cast<EventId>(i);
        e.op = m.op;
        e.rval = m.return_tick ? m.rval : RetVal::pending();
        e.lvl = m.level;
        e.client = m.client;
        e.invoke_ts = m.invoke_tick;
        e.return_ts = m.return_tick;
        evs.push_back(std::move(e));
    }
    return History(std::move(evs));
}

std::vector<int> SimWorld::withheld_messages() const {
    std::vector<int> out;
    for (const auto& m : trace_.messages)
        if (m.withheld) out.push_back(m.id);
    return out;
}

std::size_t SimWorld::pending_deliveries() const {
    std::size_t n = rb_pending_.size() + tob_unsequenced_.size();
    for (int r = 0; r < replica_count(); ++r) n += trace_.tob_log.size() - tob_next_[r];
    return n;
}

bool SimWorld::tob_prefix_ok() const {
    for (int r = 0; r < replica_count(); ++r) {
        std::vector<std::pair<std::int64_t, int>> seen;
        for (int m : trace_.tob_log) {
            const auto& d = trace_.messages[m].delivered_at[r];
            if (d) seen.emplace_back(*d, m);
        }
        std::sort(seen.begin(), seen.end());
        if (seen.size() > trace_.tob_log.size()) return false;
        for (std::size_t k = 0; k < seen.size(); ++k)
            if (seen[k].second != trace_.tob_log[k]) return false;
    }
    return true;
}

// ------------------------------------------------------------------ lints

namespace {

struct Lint {
    std::string name;
    std::vector<Counterexample> cex;
    void fail(std::vector<EventId> evs, std::string note) { cex.push_back({std::move(evs), {}, std::move(note)}); }
};

PredicateReport lint_report(Lint&& l, bool any) {
    PredicateReport r;
    r.name = l.name;
    r.verdict = !l.cex.empty() ? Verdict::Violated : any ? Verdict::Holds : Verdict::Vacuous;
    r.counterexamples = std::move(l.cex);
    return r;
}

std::string at_tick(const StepRecord& s) {
    return "replica " + std::to_string(s.replica) + " tick " + std::to_string(s.tick);
}

}  // namespace

PredicateReport check_act_restrictions(const ProtocolTrace& t) {
    std::vector<std::vector<std::size_t>> per(t.replicas);
    for (std::size_t i = 0; i < t.steps.size(); ++i) per.at(t.steps[i].replica).push_back(i);

    Lint invisible{"InvisibleReads", {}}, input{"InputDriven", {}}, opdriven{"OpDrivenMessages", {}},
        weak{"AvailableWeak", {}}, strong{"NonBlockingStrong", {}};
    bool any_weak_ro = false, any_weak = false, any_strong = false;

    auto is_tob_delivery = [&](const StepRecord& s, int msg) {
        return s.kind == StepKind::Deliver && s.msg == msg;
    };

    for (int r = 0; r < t.replicas; ++r) {
        const auto& idx = per[r];
        bool active = false, window = false;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            const StepRecord& s = t.steps[idx[k]];
            if (s.kind == StepKind::Internal && !active)
                input.fail({}, "internal event without a stimulus at " + at_tick(s));
            if (s.kind == StepKind::Invoke) {
                const EventMeta& em = t.events.at(s.event);
                if (!em.readonly || em.level == Level::Strong) window = true;
                if (em.readonly && em.level == Level::Weak) {
                    any_weak_ro = true;
                    bool answered = std::find(s.responses.begin(), s.responses.end(), s.event) != s.responses.end();
                    if (s.hash_before != s.hash_after)
                        invisible.fail({s.event}, "weak read-only invoke changed state at " + at_tick(s));
                    if (!answered) invisible.fail({s.event}, "weak read-only invoke did not return at " + at_tick(s));
                }
            }
            if (!s.casts.empty() && !window)
                opdriven.fail({}, std::to_string(s.casts.size()) + " message(s) cast outside an operation at " +
                                      at_tick(s));
            active = !s.passive_after;
            if (s.passive_after) window = false;
        }
    }

    // Position of each step inside its replica's sequence.
    std::vector<std::size_t> local_pos(t.steps.size());
    for (int r = 0; r < t.replicas; ++r)
        for (std::size_t k = 0; k < per[r].size(); ++k) local_pos[per[r][k]] = k;
    std::vector<std::optional<std::size_t>> invoke_step(t.events.size()), response_step(t.events.size());
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
        const StepRecord& s = t.steps[i];
        if (s.kind == StepKind::Invoke) invoke_step[s.event] = i;
        for (EventId e : s.responses) response_step[e] = i;
    }

    for (std::size_t e = 0; e < t.events.size(); ++e) {
        const EventMeta& em = t.events[e];
        if (!invoke_step[e]) continue;
        const auto& idx = per[em.replica];
        std::size_t from = local_pos[*invoke_step[e]];
        bool passive_at_end = idx.empty() || t.steps[idx.back()].passive_after;
        EventId ev = static_cast<EventId>(e);

        if (em.level == Level::Weak) {
            any_weak = true;
            if (!response_step[e]) {
                if (passive_at_end) weak.fail({ev}, "weak event " + std::to_string(e) + " never returned");
                continue;
            }
            std::size_t to = local_pos[*response_step[e]];
            for (std::size_t k = from + 1; k <= to; ++k)
                if (t.steps[idx[k]].kind != StepKind::Internal) {
                    weak.fail({ev}, "weak event " + std::to_string(e) + " waited for a delivery before returning");
                    break;
                }
            continue;
        }

        any_strong = true;
        // TOB casts made from the invoke until the replica is next passive.
        std::vector<int> msgs;
        for (std::size_t k = from; k < idx.size(); ++k) {
            const StepRecord& s = t.steps[idx[k]];
            for (int m : s.casts)
                if (t.messages[m].kind == MsgKind::TOB) msgs.push_back(m);
            if (s.passive_after) break;
        }
        std::optional<std::size_t> last_delivery;
        bool all_delivered = true;
        for (int m : msgs) {
            std::optional<std::size_t> found;
            for (std::size_t k = from + 1; k < idx.size(); ++k)
                if (is_tob_delivery(t.steps[idx[k]], m)) {
                    found = k;
                    break;
                }
            if (!found) all_delivered = false;
            else if (!last_delivery || *found > *last_delivery) last_delivery = found;
        }
        if (!response_step[e]) {
            if (!msgs.empty() && !all_delivered) continue;
            if (!passive_at_end) continue;
            strong.fail({ev}, "strong event " + std::to_string(e) + " never returned although agreement was reached");
            continue;
        }
        if (!last_delivery) continue;
        std::size_t resp = local_pos[*response_step[e]];
        if (resp < *last_delivery) continue;
        // The response must come before the replica settles after that delivery.
        bool ok = false;
        for (std::size_t k = *last_delivery; k < idx.size(); ++k) {
            if (k == resp) {
                ok = true;
                break;
            }
            if (t.steps[idx[k]].passive_after) break;
        }
        if (!ok)
            strong.fail({ev}, "strong event " + std::to_string(e) + " answered only after its replica went passive");
    }

    bool any_internal = std::any_of(t.steps.begin(), t.steps.end(),
                                    [](const StepRecord& s) { return s.kind == StepKind::Internal; });
    bool any_cast = std::any_of(t.steps.begin(), t.steps.end(), [](const StepRecord& s) { return !s.casts.empty(); });

    std::vector<PredicateReport> parts;
    parts.push_back(lint_report(std::move(invisible), any_weak_ro));
    parts.push_back(lint_report(std::move(input), any_internal || !t.steps.empty()));
    parts.push_back(lint_report(std::move(opdriven), any_cast));
    parts.push_back(lint_report(std::move(weak), any_weak));
    parts.push_back(lint_report(std::move(strong), any_strong));
    return conjunction("Restrictions", Level::Weak, std::move(parts));
}

}  // namespace act
