#include "act/protocols.hpp"

#include <algorithm>
#include <sstream>

namespace act {

namespace {

std::string dot_str(const Dot& d) { return "(" + std::to_string(d.first) + "," + std::to_string(d.second) + ")"; }

std::int64_t as_int(const Value& v) {
    if (auto p = std::get_if<std::int64_t>(&v)) return *p;
    return 0;
}

std::string as_str(const Value& v) {
    if (auto p = std::get_if<std::string>(&v)) return *p;
    return {};
}

// Register access that remembers the first prior value of every write.
class Regs {
public:
    Regs(StateObject::Db& db, std::map<std::string, std::optional<Value>>* undo) : db_(db), undo_(undo) {}

    Value get(const std::string& k) const {
        auto it = db_.find(k);
        return it == db_.end() ? Value{std::int64_t{0}} : it->second;
    }
    void set(const std::string& k, Value v) {
        if (!undo_) throw BadOperation("write during a read-only execution");
        if (!undo_->count(k)) {
            auto it = db_.find(k);
            (*undo_)[k] = it == db_.end() ? std::nullopt : std::optional<Value>(it->second);
        }
        db_[k] = std::move(v);
    }

private:
    StateObject::Db& db_;
    std::map<std::string, std::optional<Value>>* undo_;
};

RetVal run_script(RdtId rdt, Regs& g, const OpLabel& o) {
    switch (rdt) {
    case RdtId::Seq:
        if (o.name == "append") {
            g.set("seq", as_str(g.get("seq")) + o.str_arg(0));
            return RetVal::ok();
        }
        if (o.name == "read") return RetVal::str(as_str(g.get("seq")));
        throw BadOperation("seq: unknown operation " + o.name);
    case RdtId::NNC: {
        std::int64_t n = as_int(g.get("n"));
        if (o.name == "add") {
            g.set("n", n + o.int_arg(0));
            return RetVal::ok();
        }
        if (o.name == "subtract") {
            bool ok = n >= o.int_arg(0);
            if (ok) g.set("n", n - o.int_arg(0));
            return RetVal::boolean(ok);
        }
        if (o.name == "get") return RetVal::integer(n);
        throw BadOperation("nnc: unknown operation " + o.name);
    }
    case RdtId::KVS:
        if (o.name == "put") {
            g.set(o.str_arg(0), o.args.at(1));
            return RetVal::ok();
        }
        if (o.name == "get") {
            Value v = g.get(o.str_arg(0));
            if (auto p = std::get_if<std::int64_t>(&v)) return RetVal::integer(*p);
            return RetVal::str(std::get<std::string>(v));
        }
        if (o.name == "setif") {
            g.set(o.str_arg(0), std::int64_t{1});
            if (g.get(o.str_arg(1)) == Value{std::int64_t{1}}) g.set(o.str_arg(2), o.args.at(3));
            return RetVal::ok();
        }
        if (o.name == "app") {
            std::string s = as_str(g.get(o.str_arg(0))) + o.str_arg(1);
            g.set(o.str_arg(0), s);
            return RetVal::str(s);
        }
        throw BadOperation("kvs: unknown operation " + o.name);
    case RdtId::MVR: break;
    }
    throw BadOperation("no register encoding for " + std::string(to_string(rdt)));
}

}  // namespace

std::string db_repr(const StateObject::Db& db) {
    std::ostringstream os;
    for (const auto& [k, v] : db) os << k << '=' << value_str(v) << ';';
    return os.str();
}

StateObject::StateObject(RdtId rdt) : rdt_(rdt) {
    if (rdt == RdtId::MVR) throw BadOperation("mvr has no register encoding");
}

RetVal StateObject::execute(const Dot& d, const OpLabel& o) {
    if (contains(d)) throw DuplicateExecution("request " + dot_str(d) + " already executed");
    Undo u{d, {}};
    Regs g(db_, &u.prior);
    RetVal r = run_script(rdt_, g, o);
    log_.push_back(std::move(u));
    return r;
}

void StateObject::rollback(const Dot& d) {
    if (log_.empty() || log_.back().dot != d) throw NotOnTop("request " + dot_str(d) + " is not the last executed");
    for (auto& [k, v] : log_.back().prior) {
        if (v) db_[k] = *v;
        else db_.erase(k);
    }
    log_.pop_back();
}

RetVal StateObject::execute_readonly(const OpLabel& o) const {
    Db scratch = db_;
    Regs g(scratch, nullptr);
    return run_script(rdt_, g, o);
}

std::vector<Dot> StateObject::trace() const {
    std::vector<Dot> out;
    for (const auto& u : log_) out.push_back(u.dot);
    return out;
}

bool StateObject::contains(const Dot& d) const {
    return std::any_of(log_.begin(), log_.end(), [&](const Undo& u) { return u.dot == d; });
}

std::string StateObject::repr() const {
    std::ostringstream os;
    os << db_repr(db_) << '|';
    for (const auto& u : log_) os << dot_str(u.dot);
    return os.str();
}

// ------------------------------------------------------------------- ANNC

const char* to_string(AnncFault f) {
    switch (f) {
    case AnncFault::None: return "none";
    case AnncFault::VisibleReads: return "visible-reads";
    case AnncFault::Heartbeat: return "heartbeat";
    case AnncFault::EchoOnDeliver: return "echo-on-deliver";
    case AnncFault::WeakAwaitsDelivery: return "weak-awaits-delivery";
    case AnncFault::DeferredStrongResponse: return "deferred-strong-response";
    }
    return "?";
}

AnncFault parse_fault(const std::string& s) {
    for (auto f : {AnncFault::None, AnncFault::VisibleReads, AnncFault::Heartbeat, AnncFault::EchoOnDeliver,
                   AnncFault::WeakAwaitsDelivery, AnncFault::DeferredStrongResponse})
        if (s == to_string(f)) return f;
    throw std::invalid_argument("unknown fault: " + s);
}

AnncReplica::AnncReplica(int id, AnncFault fault) : id_(id), fault_(fault) {
    heartbeat_pending_ = fault == AnncFault::Heartbeat;
}

void AnncReplica::flush_deferred(Env& env) {
    for (auto& [e, v] : deferred_) env.respond(e, v);
    deferred_.clear();
}

void AnncReplica::on_invoke(Env& env, const Invocation& inv) {
    const OpLabel& o = inv.op;
    if (o.name == "get") {
        if (fault_ == AnncFault::VisibleReads) ++reads_seen_;
        env.respond(inv.event, RetVal::integer(weak_add_ - strong_sub_));
        return;
    }
    // reads stay state-free even in this mutant; only updates and deliveries release held results
    flush_deferred(env);
    if (o.name != "add" && o.name != "subtract") throw BadOperation("annc: unknown operation " + o.name);
    std::int64_t v = o.int_arg(0);
    if (v < 0) throw BadOperation("annc: negative argument");
    ++curr_event_no_;
    Request r;
    r.dot = {id_, curr_event_no_};
    r.timestamp = env.clock();
    r.level = inv.level;
    r.op = o;
    r.value = v;
    r.event = inv.event;
    env.note_request(inv.event, r);
    if (o.name == "add") {
        r.tag = ReqTag::ADD;
        weak_add_ += v;
        env.rb_cast(r);
        env.tob_cast(r);
        if (fault_ == AnncFault::WeakAwaitsDelivery) weak_awaiting_[r.dot] = inv.event;
        else env.respond(inv.event, RetVal::ok());
    } else {
        r.tag = ReqTag::SUBTRACT;
        env.tob_cast(r);
        awaiting_[r.dot] = inv.event;
    }
}

void AnncReplica::rb_deliver_add(Env& env, const Request& r) {
    if (r.dot.first == id_) {
        auto it = weak_awaiting_.find(r.dot);
        if (it != weak_awaiting_.end()) {
            env.respond(it->second, RetVal::ok());
            weak_awaiting_.erase(it);
        }
        return;
    }
    if (rb_delivered_adds_.count(r.dot)) return;
    rb_delivered_adds_.insert(r.dot);
    weak_add_ += r.value;
    if (fault_ == AnncFault::EchoOnDeliver) {
        Request note;
        note.tag = ReqTag::NOTE;
        note.dot = r.dot;
        env.rb_cast(note);
    }
}

void AnncReplica::on_deliver(Env& env, const Message& m) {
    flush_deferred(env);
    const Request& r = m.payload;
    if (m.kind != MsgKind::TOB) {
        if (r.tag == ReqTag::ADD) rb_deliver_add(env, r);
        return;
    }
    if (r.tag == ReqTag::ADD) {
        if (r.dot.first != id_ && !rb_delivered_adds_.count(r.dot)) rb_deliver_add(env, r);
        strong_add_ += r.value;
        return;
    }
    if (r.tag != ReqTag::SUBTRACT) return;
    bool res = strong_add_ >= strong_sub_ + r.value;
    if (res) strong_sub_ += r.value;
    auto it = awaiting_.find(r.dot);
    if (it == awaiting_.end()) return;
    if (fault_ == AnncFault::DeferredStrongResponse) deferred_.emplace_back(it->second, RetVal::boolean(res));
    else env.respond(it->second, RetVal::boolean(res));
    awaiting_.erase(it);
}

void AnncReplica::on_internal(Env&) { heartbeat_pending_ = false; }

std::string AnncReplica::state_repr() const {
    std::ostringstream os;
    os << weak_add_ << ' ' << strong_add_ << ' ' << strong_sub_ << ' ' << curr_event_no_ << ' ' << reads_seen_ << ' '
       << heartbeat_pending_ << " a";
    for (const auto& [d, e] : awaiting_) os << dot_str(d);
    os << " r";
    for (const auto& d : rb_delivered_adds_) os << dot_str(d);
    os << " w" << weak_awaiting_.size() << " d" << deferred_.size();
    return os.str();
}

std::string AnncReplica::convergence_digest() const {
    return std::to_string(weak_add_) + "/" + std::to_string(strong_add_) + "/" + std::to_string(strong_sub_);
}

// ------------------------------------------------------------------ Bayou

BayouReplica::BayouReplica(int id, BayouFlavor flavor, RdtId rdt, int primary)
    : id_(id), flavor_(flavor), primary_(primary), state_(rdt) {}

bool BayouReplica::is_committed(const Dot& d) const {
    return std::any_of(committed_.begin(), committed_.end(), [&](const Request& x) { return x.dot == d; });
}

void BayouReplica::insert_into_tentative(const Request& r) {
    auto pos = std::upper_bound(tentative_.begin(), tentative_.end(), r);
    tentative_.insert(pos, r);
    adjust_execution();
}

void BayouReplica::adjust_execution() {
    std::vector<Request> order = committed_;
    order.insert(order.end(), tentative_.begin(), tentative_.end());
    std::size_t k = 0;
    while (k < executed_.size() && k < order.size() && executed_[k].dot == order[k].dot) ++k;
    for (std::size_t j = executed_.size(); j > k; --j) to_be_rolled_back_.push_back(executed_[j - 1]);
    executed_.resize(k);
    to_be_executed_.assign(order.begin() + static_cast<std::ptrdiff_t>(k), order.end());
}

std::vector<EventId> BayouReplica::state_trace_events() const {
    std::vector<EventId> out;
    for (const Dot& d : state_.trace()) out.push_back(events_.at(d));
    return out;
}

void BayouReplica::commit(Env& env, const Request& r) {
    if (is_committed(r.dot)) return;
    committed_.push_back(r);
    events_[r.dot] = r.event;
    tentative_.erase(std::remove_if(tentative_.begin(), tentative_.end(),
                                    [&](const Request& x) { return x.dot == r.dot; }),
                     tentative_.end());
    adjust_execution();
    ++stats_.commits;
    auto it = awaiting_.find(r.dot);
    if (it == awaiting_.end()) return;
    bool done = std::any_of(executed_.begin(), executed_.end(), [&](const Request& x) { return x.dot == r.dot; });
    if (done && it->second.response) {
        // The prefix up to r is already committed, so the stored response is final.
        std::vector<EventId> tr;
        for (const Request& x : executed_) {
            tr.push_back(x.event);
            if (x.dot == r.dot) break;
        }
        env.respond(it->second.event, *it->second.response, tr);
        awaiting_.erase(it);
    }
}

void BayouReplica::on_invoke(Env& env, const Invocation& inv) {
    if (flavor_ == BayouFlavor::Acute && inv.level == Level::Weak && inv.readonly) {
        env.respond(inv.event, state_.execute_readonly(inv.op), state_trace_events());
        return;
    }
    ++curr_event_no_;
    Request r;
    r.tag = ReqTag::ISSUE;
    r.timestamp = env.clock();
    r.dot = {id_, curr_event_no_};
    r.level = inv.level;
    r.op = inv.op;
    r.event = inv.event;
    events_[r.dot] = inv.event;
    env.note_request(inv.event, r);

    if (flavor_ == BayouFlavor::Classic) {
        env.rb_cast(r);
        insert_into_tentative(r);
        awaiting_[r.dot] = {inv.event, std::nullopt};
        return;
    }
    if (inv.level == Level::Strong) {
        awaiting_[r.dot] = {inv.event, std::nullopt};
        Request c = r;
        c.tag = ReqTag::COMMIT;
        env.tob_cast(c);
        return;
    }
    for (const Request& x : executed_) r.ctx.insert(x.dot);
    for (const Request& x : to_be_rolled_back_) r.ctx.insert(x.dot);
    RetVal resp = state_.execute(r.dot, r.op);
    std::vector<EventId> tr = state_trace_events();
    state_.rollback(r.dot);
    env.rb_cast(r);
    Request c = r;
    c.tag = ReqTag::COMMIT;
    env.tob_cast(c);
    insert_into_tentative(r);
    env.respond(inv.event, resp, tr);
}

void BayouReplica::on_deliver(Env& env, const Message& m) {
    const Request& r = m.payload;
    events_[r.dot] = r.event;
    if (r.tag == ReqTag::ISSUE) {
        if (r.dot.first == id_) return;
        if (is_committed(r.dot)) return;
        if (std::any_of(tentative_.begin(), tentative_.end(), [&](const Request& x) { return x.dot == r.dot; })) return;
        insert_into_tentative(r);
        return;
    }
    if (r.tag != ReqTag::COMMIT) return;
    if (flavor_ == BayouFlavor::Classic && id_ == primary_) return;
    Request c = r;
    c.tag = ReqTag::ISSUE;
    commit(env, c);
}

bool BayouReplica::internal_enabled() const {
    if (!to_be_rolled_back_.empty() || !to_be_executed_.empty()) return true;
    return flavor_ == BayouFlavor::Classic && id_ == primary_ && !tentative_.empty();
}

void BayouReplica::on_internal(Env& env) {
    if (!to_be_rolled_back_.empty()) {
        Request r = to_be_rolled_back_.front();
        to_be_rolled_back_.erase(to_be_rolled_back_.begin());
        state_.rollback(r.dot);
        ++stats_.rollbacks;
        return;
    }
    if (!to_be_executed_.empty()) {
        Request r = to_be_executed_.front();
        to_be_executed_.erase(to_be_executed_.begin());
        RetVal resp = state_.execute(r.dot, r.op);
        ++stats_.executions;
        executed_.push_back(r);
        auto it = awaiting_.find(r.dot);
        if (it != awaiting_.end()) {
            if (!r.strong() || is_committed(r.dot)) {
                env.respond(it->second.event, resp, state_trace_events());
                awaiting_.erase(it);
            } else {
                it->second.response = resp;
            }
        }
        return;
    }
    if (flavor_ == BayouFlavor::Classic && id_ == primary_ && !tentative_.empty()) {
        Request head = tentative_.front();
        commit(env, head);
        Request c = head;
        c.tag = ReqTag::COMMIT;
        env.fifo_rb_cast(c);
        env.note_commit_order(head.event);
    }
}

std::string BayouReplica::state_repr() const {
    std::ostringstream os;
    auto list = [&](const char* n, const std::vector<Request>& v) {
        os << n;
        for (const auto& r : v) os << dot_str(r.dot);
        os << ' ';
    };
    os << state_.repr() << ' ' << curr_event_no_ << ' ';
    list("c", committed_);
    list("t", tentative_);
    list("x", executed_);
    list("e", to_be_executed_);
    list("b", to_be_rolled_back_);
    os << "a";
    for (const auto& [d, a] : awaiting_) os << dot_str(d) << (a.response ? "*" : "");
    return os.str();
}

std::string BayouReplica::convergence_digest() const {
    std::ostringstream os;
    for (const auto& r : committed_) os << dot_str(r.dot);
    os << '|';
    for (const auto& r : tentative_) os << dot_str(r.dot);
    os << '|' << db_repr(state_.db());
    return os.str();
}

// ---------------------------------------------------------------- RedBlue

RedBlueReplica::RedBlueReplica(int id) : id_(id) {}

void RedBlueReplica::apply(const Rec& r) {
    lc_ = std::max(lc_, r.lc) + 1;
    delivered_.insert(r);
}

std::string RedBlueReplica::read() const {
    std::vector<Rec> v(delivered_.begin(), delivered_.end());
    std::sort(v.begin(), v.end(),
              [](const Rec& a, const Rec& b) { return std::tie(a.lc, a.s, a.dot) < std::tie(b.lc, b.s, b.dot); });
    std::string out;
    for (const auto& r : v) out += r.s;
    return out;
}

void RedBlueReplica::on_invoke(Env& env, const Invocation& inv) {
    if (inv.op.name == "read") {
        if (inv.level == Level::Weak) {
            env.respond(inv.event, RetVal::str(read()));
            return;
        }
    } else if (inv.op.name != "append") {
        throw BadOperation("redblue: unknown operation " + inv.op.name);
    }
    ++curr_event_no_;
    Request r;
    r.tag = inv.op.name == "append" ? ReqTag::SHADOW : ReqTag::NOTE;
    r.dot = {id_, curr_event_no_};
    r.timestamp = env.clock();
    r.level = inv.level;
    r.op = inv.op;
    r.lc = lc_;
    r.event = inv.event;
    env.note_request(inv.event, r);
    if (inv.level == Level::Weak) {
        apply({inv.op.str_arg(0), r.lc, r.dot});
        env.causal_rb_cast(r);
        env.respond(inv.event, RetVal::ok());
        return;
    }
    awaiting_[r.dot] = inv.event;
    env.tob_cast(r);
}

void RedBlueReplica::on_deliver(Env& env, const Message& m) {
    const Request& r = m.payload;
    if (r.tag == ReqTag::SHADOW && (m.kind == MsgKind::TOB || r.dot.first != id_))
        apply({r.op.str_arg(0), r.lc, r.dot});
    auto it = awaiting_.find(r.dot);
    if (it == awaiting_.end() || m.kind != MsgKind::TOB) return;
    env.respond(it->second, r.tag == ReqTag::SHADOW ? RetVal::ok() : RetVal::str(read()));
    awaiting_.erase(it);
}

std::string RedBlueReplica::state_repr() const {
    std::ostringstream os;
    os << lc_ << ' ' << curr_event_no_ << ' ';
    for (const auto& r : delivered_) os << r.s << '@' << r.lc << dot_str(r.dot);
    os << " a" << awaiting_.size();
    return os.str();
}

std::string RedBlueReplica::convergence_digest() const { return read(); }

// ---------------------------------------------------------------- factory

const char* to_string(ProtocolId p) {
    switch (p) {
    case ProtocolId::ANNC: return "annc";
    case ProtocolId::ClassicBayou: return "bayou";
    case ProtocolId::AcuteBayou: return "acutebayou";
    case ProtocolId::RedBlue: return "redblue";
    }
    return "?";
}

ProtocolId parse_protocol(const std::string& s) {
    for (auto p : {ProtocolId::ANNC, ProtocolId::ClassicBayou, ProtocolId::AcuteBayou, ProtocolId::RedBlue})
        if (s == to_string(p)) return p;
    if (s == "classic-bayou") return ProtocolId::ClassicBayou;
    throw std::invalid_argument("unknown protocol: " + s);
}

std::vector<std::unique_ptr<ReplicaMachine>> make_replicas(const ProtocolConfig& c) {
    if (c.replicas <= 0) throw std::invalid_argument("need at least one replica");
    std::vector<std::unique_ptr<ReplicaMachine>> out;
    for (int i = 0; i < c.replicas; ++i) {
        switch (c.protocol) {
        case ProtocolId::ANNC: out.push_back(std::make_unique<AnncReplica>(i, c.fault)); break;
        case ProtocolId::ClassicBayou:
            out.push_back(std::make_unique<BayouReplica>(i, BayouFlavor::Classic, c.rdt, c.primary));
            break;
        case ProtocolId::AcuteBayou:
            out.push_back(std::make_unique<BayouReplica>(i, BayouFlavor::Acute, c.rdt, c.primary));
            break;
        case ProtocolId::RedBlue: out.push_back(std::make_unique<RedBlueReplica>(i)); break;
        }
    }
    return out;
}

SimWorld make_world(const ProtocolConfig& c, const Schedule& s) {
    RdtSpec spec{c.protocol == ProtocolId::ANNC ? RdtId::NNC : c.rdt};
    return SimWorld(make_replicas(c), s, [spec](const OpLabel& o) { return spec.is_readonly(o); },
                    to_string(c.protocol));
}

}  // namespace act
