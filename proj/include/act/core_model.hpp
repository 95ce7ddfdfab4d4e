#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace act {

using EventId = int;
using Value = std::variant<std::int64_t, std::string>;

enum class Level { Weak, Strong };

const char* to_string(Level l);
Level parse_level(const std::string& s);

std::string value_str(const Value& v);

struct OpLabel {
    std::string name;
    std::vector<Value> args;

    std::int64_t int_arg(std::size_t i) const;
    const std::string& str_arg(std::size_t i) const;
    std::string str() const;

    bool operator==(const OpLabel&) const = default;
};

OpLabel op(std::string name, std::vector<Value> args = {});

// Client-observable return value. Pending is the "never returned" marker.
struct RetVal {
    enum class Kind { Ok, Int, Bool, Str, Set, Pending };
    Kind kind = Kind::Pending;
    std::int64_t i = 0;
    bool b = false;
    std::string s;
    std::vector<Value> set;   // kept sorted and unique

    static RetVal ok();
    static RetVal integer(std::int64_t v);
    static RetVal boolean(bool v);
    static RetVal str(std::string v);
    static RetVal values(std::vector<Value> v);
    static RetVal pending();

    bool is_pending() const { return kind == Kind::Pending; }
    std::string str() const;

    bool operator==(const RetVal& o) const;
    bool operator!=(const RetVal& o) const { return !(*this == o); }
};

class Relation {
public:
    Relation() = default;
    explicit Relation(int n);

    int size() const { return static_cast<int>(out_.size()); }
    void resize(int n);

    void add(EventId a, EventId b);
    void remove(EventId a, EventId b);
    bool has(EventId a, EventId b) const;

    const std::set<EventId>& succ(EventId a) const { return out_.at(a); }
    const std::set<EventId>& pred(EventId b) const { return in_.at(b); }

    std::vector<std::pair<EventId, EventId>> edges() const;
    std::size_t edge_count() const;

    Relation restrict(const std::vector<bool>& keep) const;
    Relation unite(const Relation& o) const;

    bool operator==(const Relation& o) const { return out_ == o.out_; }

private:
    void check(EventId e) const;
    std::vector<std::set<EventId>> out_;
    std::vector<std::set<EventId>> in_;
};

// Strict total order given as a sequence; pos() answers "before" in O(1).
class TotalOrder {
public:
    TotalOrder() = default;
    explicit TotalOrder(std::vector<EventId> seq);

    const std::vector<EventId>& seq() const { return seq_; }
    int pos(EventId e) const;
    bool contains(EventId e) const;
    bool before(EventId a, EventId b) const { return pos(a) < pos(b); }
    Relation as_relation(int n) const;

    bool operator==(const TotalOrder& o) const { return seq_ == o.seq_; }

private:
    std::vector<EventId> seq_;
    std::vector<int> pos_;
};

struct Event {
    EventId id = 0;
    OpLabel op;
    RetVal rval;
    Level lvl = Level::Weak;
    int client = 0;
    std::int64_t invoke_ts = 0;
    std::optional<std::int64_t> return_ts;

    bool pending() const { return !return_ts.has_value(); }
};

struct InvalidHistory : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class History {
public:
    History() = default;
    // Events must carry ids 0..N-1 in order; rb and ss are derived.
    explicit History(std::vector<Event> events);

    int size() const { return static_cast<int>(events_.size()); }
    const Event& at(EventId e) const { return events_.at(e); }
    const std::vector<Event>& events() const { return events_; }

    const Relation& rb() const { return rb_; }
    const Relation& ss() const { return ss_; }

    bool returns_before(EventId a, EventId b) const;
    std::vector<bool> level_mask(Level l) const;

    // Sub-history over `keep` (renumbered densely, order preserved).
    History excerpt(const std::vector<EventId>& keep) const;

private:
    void validate() const;
    std::vector<Event> events_;
    Relation rb_;
    Relation ss_;
};

struct AbstractExecution {
    History history;
    Relation vis;
    TotalOrder ar;
    // par[e] empty means par(e) = ar.
    std::vector<std::vector<EventId>> par;

    int size() const { return history.size(); }
    TotalOrder par_of(EventId e) const;
    bool par_differs(EventId e) const;
};

struct NotTotal : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int rank(const std::set<EventId>& carrier, const Relation& rel, EventId e);
int rank(const std::set<EventId>& carrier, const TotalOrder& order, EventId e);

std::vector<EventId> sort(const std::set<EventId>& carrier, const Relation& total);
std::vector<EventId> sort(const std::set<EventId>& carrier, const TotalOrder& total);

template <class Acc, class F, class Seq>
Acc foldr(Acc a0, F f, const Seq& w) {
    // foldr(a0, f, w'b) = f(foldr(a0, f, w'), b)
    for (const auto& b : w) a0 = f(a0, b);
    return a0;
}

Relation session_order(const History& h);
Relation transitive_closure(const Relation& r);
Relation happens_before(const AbstractExecution& a);
bool is_acyclic(const Relation& r);
// Shortest cycle as a vertex list (first vertex not repeated), empty if none.
std::vector<EventId> find_cycle(const Relation& r);
std::vector<EventId> find_cycle_through(const Relation& r, EventId s);

}  // namespace act
