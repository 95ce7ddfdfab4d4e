#include "act/core_model.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace act {

const char* to_string(Level l) { return l == Level::Weak ? "weak" : "strong"; }

Level parse_level(const std::string& s) {
    if (s == "weak") return Level::Weak;
    if (s == "strong") return Level::Strong;
    throw std::invalid_argument("unknown level: " + s);
}

std::string value_str(const Value& v) {
    if (auto p = std::get_if<std::int64_t>(&v)) return std::to_string(*p);
    return std::get<std::string>(v);
}

std::int64_t OpLabel::int_arg(std::size_t i) const {
    if (i >= args.size() || !std::holds_alternative<std::int64_t>(args[i]))
        throw std::invalid_argument("operation " + name + ": missing integer argument");
    return std::get<std::int64_t>(args[i]);
}

const std::string& OpLabel::str_arg(std::size_t i) const {
    if (i >= args.size() || !std::holds_alternative<std::string>(args[i]))
        throw std::invalid_argument("operation " + name + ": missing string argument");
    return std::get<std::string>(args[i]);
}

std::string OpLabel::str() const {
    std::string out = name + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ",";
        out += value_str(args[i]);
    }
    return out + ")";
}

OpLabel op(std::string name, std::vector<Value> args) { return OpLabel{std::move(name), std::move(args)}; }

RetVal RetVal::ok() { RetVal r; r.kind = Kind::Ok; return r; }
RetVal RetVal::integer(std::int64_t v) { RetVal r; r.kind = Kind::Int; r.i = v; return r; }
RetVal RetVal::boolean(bool v) { RetVal r; r.kind = Kind::Bool; r.b = v; return r; }
RetVal RetVal::str(std::string v) { RetVal r; r.kind = Kind::Str; r.s = std::move(v); return r; }
RetVal RetVal::pending() { return RetVal{}; }

RetVal RetVal::values(std::vector<Value> v) {
    RetVal r;
    r.kind = Kind::Set;
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    r.set = std::move(v);
    return r;
}

std::string RetVal::str() const {
    switch (kind) {
    case Kind::Ok: return "ok";
    case Kind::Int: return std::to_string(i);
    case Kind::Bool: return b ? "true" : "false";
    case Kind::Str: return "\"" + s + "\"";
    case Kind::Set: {
        std::string out = "{";
        for (std::size_t k = 0; k < set.size(); ++k) {
            if (k) out += ",";
            out += value_str(set[k]);
        }
        return out + "}";
    }
    case Kind::Pending: return "pending";
    }
    return "?";
}

bool RetVal::operator==(const RetVal& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
    case Kind::Int: return i == o.i;
    case Kind::Bool: return b == o.b;
    case Kind::Str: return s == o.s;
    case Kind::Set: return set == o.set;
    default: return true;
    }
}

// ---------------------------------------------------------------- Relation

Relation::Relation(int n) : out_(n), in_(n) {}

void Relation::resize(int n) {
    out_.resize(n);
    in_.resize(n);
}

void Relation::check(EventId e) const {
    if (e < 0 || e >= size()) throw std::out_of_range("relation: event " + std::to_string(e) + " outside carrier");
}

void Relation::add(EventId a, EventId b) {
    check(a);
    check(b);
    out_[a].insert(b);
    in_[b].insert(a);
}

void Relation::remove(EventId a, EventId b) {
    check(a);
    check(b);
    out_[a].erase(b);
    in_[b].erase(a);
}

bool Relation::has(EventId a, EventId b) const {
    if (a < 0 || a >= size()) return false;
    return out_[a].count(b) != 0;
}

std::vector<std::pair<EventId, EventId>> Relation::edges() const {
    std::vector<std::pair<EventId, EventId>> r;
    for (int a = 0; a < size(); ++a)
        for (EventId b : out_[a]) r.emplace_back(a, b);
    return r;
}

std::size_t Relation::edge_count() const {
    std::size_t n = 0;
    for (const auto& s : out_) n += s.size();
    return n;
}

Relation Relation::restrict(const std::vector<bool>& keep) const {
    Relation r(size());
    for (int a = 0; a < size(); ++a) {
        if (!keep[a]) continue;
        for (EventId b : out_[a])
            if (keep[b]) r.add(a, b);
    }
    return r;
}

Relation Relation::unite(const Relation& o) const {
    Relation r = *this;
    r.resize(std::max(size(), o.size()));
    for (auto [a, b] : o.edges()) r.add(a, b);
    return r;
}

// -------------------------------------------------------------- TotalOrder

TotalOrder::TotalOrder(std::vector<EventId> seq) : seq_(std::move(seq)) {
    int mx = -1;
    for (EventId e : seq_) mx = std::max(mx, e);
    pos_.assign(mx + 1, -1);
    for (std::size_t i = 0; i < seq_.size(); ++i) {
        EventId e = seq_[i];
        if (e < 0) throw std::invalid_argument("total order: negative event id");
        if (pos_[e] != -1) throw std::invalid_argument("total order: duplicate event " + std::to_string(e));
        pos_[e] = static_cast<int>(i);
    }
}

int TotalOrder::pos(EventId e) const {
    if (!contains(e)) throw std::out_of_range("total order: event " + std::to_string(e) + " not ordered");
    return pos_[e];
}

bool TotalOrder::contains(EventId e) const {
    return e >= 0 && e < static_cast<int>(pos_.size()) && pos_[e] != -1;
}

Relation TotalOrder::as_relation(int n) const {
    Relation r(n);
    for (std::size_t i = 0; i < seq_.size(); ++i)
        for (std::size_t j = i + 1; j < seq_.size(); ++j) r.add(seq_[i], seq_[j]);
    return r;
}

// ----------------------------------------------------------------- History

History::History(std::vector<Event> events) : events_(std::move(events)) {
    validate();
    int n = size();
    rb_ = Relation(n);
    ss_ = Relation(n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            if (returns_before(a, b)) rb_.add(a, b);
            if (events_[a].client == events_[b].client) ss_.add(a, b);
        }
    }
}

bool History::returns_before(EventId a, EventId b) const {
    const Event& x = events_.at(a);
    const Event& y = events_.at(b);
    return x.return_ts && *x.return_ts < y.invoke_ts;
}

void History::validate() const {
    for (std::size_t i = 0; i < events_.size(); ++i) {
        const Event& e = events_[i];
        if (e.id != static_cast<EventId>(i))
            throw InvalidHistory("event ids must be dense and ordered; got " + std::to_string(e.id) + " at " +
                                 std::to_string(i));
        if (e.pending() != e.rval.is_pending())
            throw InvalidHistory("event " + std::to_string(e.id) + ": pending rval and missing return_ts must agree");
        if (e.return_ts && *e.return_ts < e.invoke_ts)
            throw InvalidHistory("event " + std::to_string(e.id) + ": returns before it is invoked");
    }
    // Clients issue operations one at a time.
    std::map<int, std::vector<EventId>> by_client;
    for (const Event& e : events_) by_client[e.client].push_back(e.id);
    for (auto& [c, ids] : by_client) {
        for (std::size_t i = 0; i < ids.size(); ++i)
            for (std::size_t j = i + 1; j < ids.size(); ++j)
                if (!returns_before(ids[i], ids[j]) && !returns_before(ids[j], ids[i]))
                    throw InvalidHistory("client " + std::to_string(c) + ": events " + std::to_string(ids[i]) +
                                         " and " + std::to_string(ids[j]) + " overlap");
    }
}

std::vector<bool> History::level_mask(Level l) const {
    std::vector<bool> m(events_.size());
    for (std::size_t i = 0; i < events_.size(); ++i) m[i] = events_[i].lvl == l;
    return m;
}

History History::excerpt(const std::vector<EventId>& keep) const {
    std::vector<EventId> ids = keep;
    std::sort(ids.begin(), ids.end());
    std::vector<Event> evs;
    for (EventId e : ids) {
        Event ev = events_.at(e);
        ev.id = static_cast<EventId>(evs.size());
        evs.push_back(std::move(ev));
    }
    return History(std::move(evs));
}

TotalOrder AbstractExecution::par_of(EventId e) const {
    if (e < static_cast<int>(par.size()) && !par[e].empty()) return TotalOrder(par[e]);
    return ar;
}

bool AbstractExecution::par_differs(EventId e) const {
    return e < static_cast<int>(par.size()) && !par[e].empty() && par[e] != ar.seq();
}

// ------------------------------------------------------------- combinators

int rank(const std::set<EventId>& carrier, const Relation& rel, EventId e) {
    if (e < 0 || e >= rel.size()) return 0;
    int n = 0;
    for (EventId x : rel.pred(e)) n += carrier.count(x) ? 1 : 0;
    return n;
}

int rank(const std::set<EventId>& carrier, const TotalOrder& order, EventId e) {
    int n = 0;
    int pe = order.pos(e);
    for (EventId x : carrier)
        if (order.pos(x) < pe) ++n;
    return n;
}

std::vector<EventId> sort(const std::set<EventId>& carrier, const Relation& total) {
    std::vector<EventId> out(carrier.begin(), carrier.end());
    for (EventId a : out)
        for (EventId b : out)
            if (a != b && !total.has(a, b) && !total.has(b, a))
                throw NotTotal("events " + std::to_string(a) + " and " + std::to_string(b) + " are unordered");
    // Position of x = number of carrier elements before it.
    std::vector<EventId> res(out.size());
    for (EventId x : out) res[rank(carrier, total, x)] = x;
    return res;
}

std::vector<EventId> sort(const std::set<EventId>& carrier, const TotalOrder& total) {
    std::vector<EventId> out(carrier.begin(), carrier.end());
    for (EventId x : out)
        if (!total.contains(x)) throw NotTotal("event " + std::to_string(x) + " is not ordered");
    std::sort(out.begin(), out.end(), [&](EventId a, EventId b) { return total.pos(a) < total.pos(b); });
    return out;
}

Relation session_order(const History& h) {
    Relation so(h.size());
    for (auto [a, b] : h.rb().edges())
        if (h.ss().has(a, b)) so.add(a, b);
    return so;
}

Relation transitive_closure(const Relation& r) {
    int n = r.size();
    Relation c(n);
    std::vector<char> seen(n);
    for (int s = 0; s < n; ++s) {
        std::fill(seen.begin(), seen.end(), 0);
        std::deque<EventId> q(r.succ(s).begin(), r.succ(s).end());
        while (!q.empty()) {
            EventId x = q.front();
            q.pop_front();
            if (seen[x]) continue;
            seen[x] = 1;
            c.add(s, x);
            for (EventId y : r.succ(x))
                if (!seen[y]) q.push_back(y);
        }
    }
    return c;
}

Relation happens_before(const AbstractExecution& a) {
    Relation base = session_order(a.history);
    base.resize(std::max(base.size(), a.vis.size()));
    return transitive_closure(base.unite(a.vis));
}

bool is_acyclic(const Relation& r) {
    // Kahn's algorithm.
    int n = r.size();
    std::vector<int> indeg(n);
    for (int v = 0; v < n; ++v) indeg[v] = static_cast<int>(r.pred(v).size());
    std::deque<EventId> q;
    for (int v = 0; v < n; ++v)
        if (indeg[v] == 0) q.push_back(v);
    int seen = 0;
    while (!q.empty()) {
        EventId v = q.front();
        q.pop_front();
        ++seen;
        for (EventId w : r.succ(v))
            if (--indeg[w] == 0) q.push_back(w);
    }
    return seen == n;
}

std::vector<EventId> find_cycle_through(const Relation& r, EventId s) {
    int n = r.size();
    if (r.has(s, s)) return {s};
    std::vector<int> parent(n, -2);
    std::deque<EventId> q;
    for (EventId y : r.succ(s)) {
        parent[y] = s;
        q.push_back(y);
    }
    while (!q.empty()) {
        EventId x = q.front();
        q.pop_front();
        for (EventId y : r.succ(x)) {
            if (y == s) {
                std::vector<EventId> cyc;
                for (EventId v = x; v != s; v = parent[v]) cyc.push_back(v);
                cyc.push_back(s);
                std::reverse(cyc.begin(), cyc.end());
                return cyc;
            }
            if (parent[y] == -2) {
                parent[y] = x;
                q.push_back(y);
            }
        }
    }
    return {};
}

std::vector<EventId> find_cycle(const Relation& r) {
    std::vector<EventId> best;
    for (int s = 0; s < r.size(); ++s) {
        auto c = find_cycle_through(r, s);
        if (!c.empty() && (best.empty() || c.size() < best.size())) best = std::move(c);
        if (best.size() == 1) break;
    }
    return best;
}

}  // namespace act
