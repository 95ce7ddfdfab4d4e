#include "act/rdt.hpp"

#include <algorithm>

namespace act {

OperationContext make_context(const History& h, const Relation& vis, const std::set<EventId>& carrier,
                              const TotalOrder& order) {
    OperationContext c;
    c.ids = sort(carrier, order);
    std::map<EventId, int> idx;
    for (std::size_t i = 0; i < c.ids.size(); ++i) {
        idx[c.ids[i]] = static_cast<int>(i);
        c.ops.push_back(h.at(c.ids[i]).op);
    }
    c.vis = Relation(static_cast<int>(c.ids.size()));
    for (EventId a : c.ids)
        for (EventId b : vis.succ(a)) {
            auto it = idx.find(b);
            if (it != idx.end()) c.vis.add(idx[a], it->second);
        }
    return c;
}

OperationContext context_of(const AbstractExecution& a, EventId e) {
    if (e < 0 || e >= a.size()) throw UnknownEvent("context: unknown event " + std::to_string(e));
    const auto& p = a.vis.pred(e);
    return make_context(a.history, a.vis, std::set<EventId>(p.begin(), p.end()), a.ar);
}

OperationContext fcontext_of(const AbstractExecution& a, EventId e) {
    if (e < 0 || e >= a.size()) throw UnknownEvent("fcontext: unknown event " + std::to_string(e));
    if (!a.par.empty() && static_cast<int>(a.par.size()) != a.size())
        throw MissingPar("fcontext: par defined for " + std::to_string(a.par.size()) + " of " +
                         std::to_string(a.size()) + " events");
    const auto& p = a.vis.pred(e);
    return make_context(a.history, a.vis, std::set<EventId>(p.begin(), p.end()), a.par_of(e));
}

const char* to_string(RdtId id) {
    switch (id) {
    case RdtId::Seq: return "seq";
    case RdtId::MVR: return "mvr";
    case RdtId::NNC: return "nnc";
    case RdtId::KVS: return "kvs";
    }
    return "?";
}

RdtId parse_rdt(const std::string& s) {
    std::string k = s;
    if (k.rfind("F_", 0) == 0 || k.rfind("f_", 0) == 0) k = k.substr(2);
    std::transform(k.begin(), k.end(), k.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (k == "seq") return RdtId::Seq;
    if (k == "mvr") return RdtId::MVR;
    if (k == "nnc") return RdtId::NNC;
    if (k == "kvs") return RdtId::KVS;
    throw std::invalid_argument("unknown rdt: " + s);
}

RetVal eval_fseq(const OpLabel& o, const OperationContext& c) {
    if (o.name == "append") {
        o.str_arg(0);
        return RetVal::ok();
    }
    if (o.name != "read") throw BadOperation("seq: unknown operation " + o.name);
    std::string out;
    for (const OpLabel& x : c.ops) {
        if (x.name == "append") out += x.str_arg(0);
        else if (x.name != "read") throw BadOperation("seq: unknown operation in context " + x.name);
    }
    return RetVal::str(out);
}

RetVal eval_fmvr(const OpLabel& o, const OperationContext& c) {
    if (o.name == "write") {
        if (o.args.empty()) throw BadOperation("mvr: write needs a value");
        return RetVal::ok();
    }
    if (o.name != "read") throw BadOperation("mvr: unknown operation " + o.name);
    std::vector<Value> vals;
    for (std::size_t i = 0; i < c.ops.size(); ++i) {
        if (c.ops[i].name != "write") continue;
        bool dominated = false;
        for (EventId j : c.vis.succ(static_cast<EventId>(i)))
            if (c.ops[j].name == "write") dominated = true;
        if (!dominated) vals.push_back(c.ops[i].args.at(0));
    }
    return RetVal::values(std::move(vals));
}

std::int64_t f_nnc(std::int64_t x, const OpLabel& o) {
    if (o.name == "add") return x + o.int_arg(0);
    if (o.name == "subtract") {
        std::int64_t v = o.int_arg(0);
        return x >= v ? x - v : x;
    }
    if (o.name == "get") return x;
    throw BadOperation("nnc: unknown operation " + o.name);
}

RetVal eval_fnnc(const OpLabel& o, const OperationContext& c) {
    if (o.name == "add") {
        if (o.int_arg(0) < 0) throw BadOperation("nnc: negative add");
        return RetVal::ok();
    }
    std::int64_t acc = foldr<std::int64_t>(0, f_nnc, c.ops);
    if (o.name == "get") return RetVal::integer(acc);
    if (o.name == "subtract") return RetVal::boolean(acc >= o.int_arg(0));
    throw BadOperation("nnc: unknown operation " + o.name);
}

namespace {

using Db = std::map<std::string, Value>;

Value db_get(const Db& db, const std::string& k) {
    auto it = db.find(k);
    return it == db.end() ? Value{std::int64_t{0}} : it->second;
}

RetVal kvs_apply(Db& db, const OpLabel& o) {
    if (o.name == "put") {
        db[o.str_arg(0)] = o.args.at(1);
        return RetVal::ok();
    }
    if (o.name == "get") {
        Value v = db_get(db, o.str_arg(0));
        if (auto p = std::get_if<std::int64_t>(&v)) return RetVal::integer(*p);
        return RetVal::str(std::get<std::string>(v));
    }
    if (o.name == "setif") {
        db[o.str_arg(0)] = std::int64_t{1};
        if (db_get(db, o.str_arg(1)) == Value{std::int64_t{1}}) db[o.str_arg(2)] = o.args.at(3);
        return RetVal::ok();
    }
    if (o.name == "app") {
        Value cur = db_get(db, o.str_arg(0));
        std::string s = std::holds_alternative<std::string>(cur) ? std::get<std::string>(cur) : std::string();
        s += o.str_arg(1);
        db[o.str_arg(0)] = s;
        return RetVal::str(s);
    }
    throw BadOperation("kvs: unknown operation " + o.name);
}

}  // namespace

RetVal eval_fkvs(const OpLabel& o, const OperationContext& c) {
    Db db;
    for (const OpLabel& x : c.ops) kvs_apply(db, x);
    return kvs_apply(db, o);
}

RetVal RdtSpec::eval(const OpLabel& o, const OperationContext& c) const {
    switch (id) {
    case RdtId::Seq: return eval_fseq(o, c);
    case RdtId::MVR: return eval_fmvr(o, c);
    case RdtId::NNC: return eval_fnnc(o, c);
    case RdtId::KVS: return eval_fkvs(o, c);
    }
    throw BadOperation("unknown rdt");
}

bool RdtSpec::knows(const std::string& n) const {
    switch (id) {
    case RdtId::Seq: return n == "append" || n == "read";
    case RdtId::MVR: return n == "write" || n == "read";
    case RdtId::NNC: return n == "add" || n == "subtract" || n == "get";
    case RdtId::KVS: return n == "put" || n == "get" || n == "setif" || n == "app";
    }
    return false;
}

bool RdtSpec::is_readonly(const OpLabel& o) const {
    if (!knows(o.name)) throw BadOperation(name() + ": unknown operation " + o.name);
    return o.name == "read" || o.name == "get";
}

std::string ActSpec::conformance(const History& h) const {
    for (const Event& e : h.events()) {
        if (!rdt.knows(e.op.name)) return "event " + std::to_string(e.id) + ": operation " + e.op.name + " not in " + rdt.name();
        auto it = lvlmap.find(e.op.name);
        if (it == lvlmap.end() || !it->second.count(e.lvl))
            return "event " + std::to_string(e.id) + ": level " + to_string(e.lvl) + " not allowed for " + e.op.name;
    }
    return {};
}

LvlMap nnc_lvlmap() {
    return {{"add", {Level::Weak}}, {"get", {Level::Weak}}, {"subtract", {Level::Strong}}};
}

LvlMap seq_impossibility_lvlmap() {
    return {{"append", {Level::Weak, Level::Strong}}, {"read", {Level::Weak, Level::Strong}}};
}

LvlMap redblue_seq_lvlmap() {
    return {{"append", {Level::Weak, Level::Strong}}, {"read", {Level::Weak}}};
}

LvlMap all_levels_lvlmap(RdtId id) {
    std::set<Level> both{Level::Weak, Level::Strong};
    switch (id) {
    case RdtId::Seq: return {{"append", both}, {"read", both}};
    case RdtId::MVR: return {{"write", both}, {"read", both}};
    case RdtId::NNC: return {{"add", both}, {"subtract", both}, {"get", both}};
    case RdtId::KVS: return {{"put", both}, {"get", both}, {"setif", both}, {"app", both}};
    }
    return {};
}

}  // namespace act
