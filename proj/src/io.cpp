#include "act/io.hpp"

#include <fstream>
#include <sstream>

namespace act {

json to_json(const Value& v) {
    if (auto p = std::get_if<std::int64_t>(&v)) return *p;
    return std::get<std::string>(v);
}

Value value_from_json(const json& j) {
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_string()) return j.get<std::string>();
    throw FormatError("value must be an integer or a string: " + j.dump());
}

json to_json(const OpLabel& o) {
    json args = json::array();
    for (const auto& a : o.args) args.push_back(to_json(a));
    return {{"name", o.name}, {"args", args}};
}

OpLabel op_from_json(const json& j) {
    OpLabel o;
    o.name = j.at("name").get<std::string>();
    if (j.contains("args"))
        for (const auto& a : j.at("args")) o.args.push_back(value_from_json(a));
    return o;
}

json to_json(const RetVal& r) {
    switch (r.kind) {
    case RetVal::Kind::Ok: return {{"kind", "ok"}};
    case RetVal::Kind::Int: return {{"kind", "int"}, {"value", r.i}};
    case RetVal::Kind::Bool: return {{"kind", "bool"}, {"value", r.b}};
    case RetVal::Kind::Str: return {{"kind", "str"}, {"value", r.s}};
    case RetVal::Kind::Set: {
        json a = json::array();
        for (const auto& v : r.set) a.push_back(to_json(v));
        return {{"kind", "set"}, {"value", a}};
    }
    case RetVal::Kind::Pending: return {{"kind", "pending"}};
    }
    return {};
}

RetVal retval_from_json(const json& j) {
    std::string k = j.at("kind").get<std::string>();
    if (k == "ok") return RetVal::ok();
    if (k == "int") return RetVal::integer(j.at("value").get<std::int64_t>());
    if (k == "bool") return RetVal::boolean(j.at("value").get<bool>());
    if (k == "str") return RetVal::str(j.at("value").get<std::string>());
    if (k == "pending") return RetVal::pending();
    if (k == "set") {
        std::vector<Value> v;
        for (const auto& x : j.at("value")) v.push_back(value_from_json(x));
        return RetVal::values(std::move(v));
    }
    throw FormatError("unknown return value kind: " + k);
}

json to_json(const Event& e) {
    json j{{"id", e.id},       {"op", to_json(e.op)},  {"rval", to_json(e.rval)}, {"lvl", to_string(e.lvl)},
           {"client", e.client}, {"invoke", e.invoke_ts}};
    j["return"] = e.return_ts ? json(*e.return_ts) : json(nullptr);
    return j;
}

Event event_from_json(const json& j) {
    Event e;
    e.id = j.at("id").get<EventId>();
    e.op = op_from_json(j.at("op"));
    e.lvl = parse_level(j.at("lvl").get<std::string>());
    e.client = j.at("client").get<int>();
    e.invoke_ts = j.at("invoke").get<std::int64_t>();
    if (j.contains("return") && !j.at("return").is_null()) e.return_ts = j.at("return").get<std::int64_t>();
    e.rval = j.contains("rval") ? retval_from_json(j.at("rval")) : RetVal::pending();
    if (!e.return_ts) e.rval = RetVal::pending();
    return e;
}

void write_history_jsonl(std::ostream& os, const History& h) {
    for (const auto& e : h.events()) os << to_json(e).dump() << '\n';
}

History read_history_jsonl(std::istream& is) {
    std::vector<Event> evs;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            evs.push_back(event_from_json(json::parse(line)));
        } catch (const json::exception& ex) {
            throw FormatError("history line " + std::to_string(lineno) + ": " + ex.what());
        }
    }
    return History(std::move(evs));
}

History load_history(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    return read_history_jsonl(in);
}

json witness_to_json(const AbstractExecution& a) {
    json vis = json::array();
    for (auto [x, y] : a.vis.edges()) vis.push_back({x, y});
    json par = json::object();
    json same = json::array();
    for (EventId e = 0; e < a.size(); ++e) {
        if (a.par_differs(e)) par[std::to_string(e)] = a.par_of(e).seq();
        else same.push_back(e);
    }
    return {{"ar", a.ar.seq()}, {"vis", vis}, {"par", par}, {"par_equals_ar", same}};
}

AbstractExecution witness_from_json(const History& h, const json& j) {
    int n = h.size();
    auto seq = j.at("ar").get<std::vector<EventId>>();
    if (static_cast<int>(seq.size()) != n) throw FormatError("ar does not cover the history");
    AbstractExecution a{h, Relation(n), TotalOrder(seq), std::vector<std::vector<EventId>>(n)};
    for (const auto& e : j.at("vis")) {
        EventId x = e.at(0).get<EventId>(), y = e.at(1).get<EventId>();
        if (x < 0 || y < 0 || x >= n || y >= n) throw FormatError("vis edge outside the history");
        a.vis.add(x, y);
    }
    if (j.contains("par"))
        for (const auto& [k, v] : j.at("par").items()) {
            EventId e = std::stoi(k);
            if (e < 0 || e >= n) throw FormatError("par for unknown event " + k);
            a.par[e] = v.get<std::vector<EventId>>();
        }
    return a;
}

namespace {

json opt(const std::optional<std::int64_t>& v) { return v ? json(*v) : json(nullptr); }
std::optional<std::int64_t> opt_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<std::int64_t>();
}

}  // namespace

json to_json(const ProtocolTrace& t) {
    json evs = json::array();
    for (const auto& e : t.events) {
        json j{{"replica", e.replica},
               {"client", e.client},
               {"op", to_json(e.op)},
               {"level", to_string(e.level)},
               {"readonly", e.readonly},
               {"invoke", e.invoke_tick},
               {"return", opt(e.return_tick)},
               {"rval", to_json(e.rval)},
               {"timestamp", e.timestamp},
               {"rb_msgs", e.rb_msgs},
               {"tob_msgs", e.tob_msgs},
               {"tob_no", opt(e.tob_no)},
               {"extra_responses", e.extra_responses}};
        j["dot"] = e.dot ? json{e.dot->first, e.dot->second} : json(nullptr);
        j["trace"] = e.trace_at_return ? json(*e.trace_at_return) : json(nullptr);
        evs.push_back(std::move(j));
    }
    json msgs = json::array();
    for (const auto& m : t.messages) {
        json d = json::array();
        for (const auto& x : m.delivered_at) d.push_back(opt(x));
        msgs.push_back({{"id", m.id},
                        {"kind", to_string(m.kind)},
                        {"origin", m.origin},
                        {"tag", to_string(m.tag)},
                        {"event", m.event},
                        {"cast", m.cast_tick},
                        {"tob_no", opt(m.tob_no)},
                        {"withheld", m.withheld},
                        {"delivered_at", d}});
    }
    json steps = json::array();
    for (const auto& s : t.steps)
        steps.push_back({{"tick", s.tick},
                         {"replica", s.replica},
                         {"kind", to_string(s.kind)},
                         {"event", s.event},
                         {"msg", s.msg},
                         {"hash_before", s.hash_before},
                         {"hash_after", s.hash_after},
                         {"casts", s.casts},
                         {"responses", s.responses},
                         {"passive_after", s.passive_after}});
    return {{"protocol", t.protocol}, {"replicas", t.replicas}, {"events", evs},
            {"messages", msgs},       {"steps", steps},         {"tob_log", t.tob_log}};
}

ProtocolTrace trace_from_json(const json& j) {
    ProtocolTrace t;
    t.protocol = j.at("protocol").get<std::string>();
    t.replicas = j.at("replicas").get<int>();
    for (const auto& e : j.at("events")) {
        EventMeta m;
        m.replica = e.at("replica").get<int>();
        m.client = e.at("client").get<int>();
        m.op = op_from_json(e.at("op"));
        m.level = parse_level(e.at("level").get<std::string>());
        m.readonly = e.at("readonly").get<bool>();
        m.invoke_tick = e.at("invoke").get<std::int64_t>();
        m.return_tick = opt_from(e.at("return"));
        m.rval = retval_from_json(e.at("rval"));
        m.timestamp = e.at("timestamp").get<std::int64_t>();
        m.rb_msgs = e.at("rb_msgs").get<std::vector<int>>();
        m.tob_msgs = e.at("tob_msgs").get<std::vector<int>>();
        m.tob_no = opt_from(e.at("tob_no"));
        m.extra_responses = e.at("extra_responses").get<int>();
        if (!e.at("dot").is_null()) m.dot = Dot{e.at("dot").at(0).get<int>(), e.at("dot").at(1).get<std::int64_t>()};
        if (!e.at("trace").is_null()) m.trace_at_return = e.at("trace").get<std::vector<EventId>>();
        t.events.push_back(std::move(m));
    }
    static const std::map<std::string, MsgKind> kinds{
        {"RB", MsgKind::RB}, {"FIFO_RB", MsgKind::FIFO_RB}, {"CAUSAL_RB", MsgKind::CAUSAL_RB}, {"TOB", MsgKind::TOB}};
    static const std::map<std::string, ReqTag> tags{{"ADD", ReqTag::ADD},       {"SUBTRACT", ReqTag::SUBTRACT},
                                                    {"ISSUE", ReqTag::ISSUE},   {"COMMIT", ReqTag::COMMIT},
                                                    {"SHADOW", ReqTag::SHADOW}, {"NOTE", ReqTag::NOTE}};
    static const std::map<std::string, StepKind> skinds{
        {"invoke", StepKind::Invoke}, {"deliver", StepKind::Deliver}, {"internal", StepKind::Internal}};
    try {
        for (const auto& m : j.at("messages")) {
            MessageMeta x;
            x.id = m.at("id").get<int>();
            x.kind = kinds.at(m.at("kind").get<std::string>());
            x.origin = m.at("origin").get<int>();
            x.tag = tags.at(m.at("tag").get<std::string>());
            x.event = m.at("event").get<EventId>();
            x.cast_tick = m.at("cast").get<std::int64_t>();
            x.tob_no = opt_from(m.at("tob_no"));
            x.withheld = m.at("withheld").get<bool>();
            for (const auto& d : m.at("delivered_at")) x.delivered_at.push_back(opt_from(d));
            t.messages.push_back(std::move(x));
        }
        for (const auto& s : j.at("steps")) {
            StepRecord r;
            r.tick = s.at("tick").get<std::int64_t>();
            r.replica = s.at("replica").get<int>();
            r.kind = skinds.at(s.at("kind").get<std::string>());
            r.event = s.at("event").get<EventId>();
            r.msg = s.at("msg").get<int>();
            r.hash_before = s.at("hash_before").get<std::uint64_t>();
            r.hash_after = s.at("hash_after").get<std::uint64_t>();
            r.casts = s.at("casts").get<std::vector<int>>();
            r.responses = s.at("responses").get<std::vector<EventId>>();
            r.passive_after = s.at("passive_after").get<bool>();
            t.steps.push_back(std::move(r));
        }
    } catch (const std::out_of_range& e) {
        throw FormatError(std::string("trace: unknown enumerator: ") + e.what());
    }
    t.tob_log = j.at("tob_log").get<std::vector<int>>();
    return t;
}

json to_json(const PredicateReport& r) {
    json cex = json::array();
    for (const auto& c : r.counterexamples) {
        json edges = json::array();
        for (auto [a, b] : c.edges) edges.push_back({a, b});
        cex.push_back({{"events", c.events}, {"edges", edges}, {"note", c.note}});
    }
    json parts = json::array();
    for (const auto& p : r.parts) parts.push_back(to_json(p));
    json j{{"name", r.name}, {"level", to_string(r.level)}, {"verdict", to_string(r.verdict)}, {"counterexamples", cex}};
    if (!parts.empty()) j["parts"] = parts;
    return j;
}

json to_json(const BruteCertificate& c) {
    return {{"orders_total", c.orders_total},
            {"orders_admitted", c.orders_admitted},
            {"vis_assignments", c.vis_assignments},
            {"exhausted", c.exhausted}};
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write " + path);
    out << text;
}

}  // namespace act
