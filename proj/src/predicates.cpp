#include "act/predicates.hpp"

#include <algorithm>
#include <sstream>

namespace act {

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Violated: return "violated";
    case Verdict::Vacuous: return "vacuous";
    }
    return "?";
}

std::string PredicateReport::summary() const {
    std::ostringstream os;
    os << name << "(" << to_string(level) << "): " << to_string(verdict);
    if (!counterexamples.empty()) {
        const auto& c = counterexamples.front();
        os << " [" << c.note;
        if (!c.events.empty()) {
            os << "; events";
            for (EventId e : c.events) os << " " << e;
        }
        os << "]";
        if (counterexamples.size() > 1) os << " +" << counterexamples.size() - 1 << " more";
    }
    return os.str();
}

namespace {

PredicateReport make(const std::string& name, Level l, bool any_in_scope, std::vector<Counterexample> cex) {
    PredicateReport r;
    r.name = name;
    r.level = l;
    if (!cex.empty()) r.verdict = Verdict::Violated;
    else r.verdict = any_in_scope ? Verdict::Holds : Verdict::Vacuous;
    r.counterexamples = std::move(cex);
    return r;
}

std::vector<EventId> level_events(const History& h, Level l) {
    std::vector<EventId> out;
    for (const Event& e : h.events())
        if (e.lvl == l) out.push_back(e.id);
    return out;
}

std::string edge_str(EventId a, EventId b) { return std::to_string(a) + "->" + std::to_string(b); }

PredicateReport rval_common(const AbstractExecution& a, Level l, const RdtSpec& spec, bool fluctuating) {
    std::vector<Counterexample> cex;
    auto L = level_events(a.history, l);
    for (EventId e : L) {
        const Event& ev = a.history.at(e);
        if (ev.pending()) {
            cex.push_back({{e}, {}, "event " + std::to_string(e) + " " + ev.op.str() + " is pending"});
            continue;
        }
        OperationContext c = fluctuating ? fcontext_of(a, e) : context_of(a, e);
        RetVal want = spec.eval(ev.op, c);
        if (want != ev.rval) {
            Counterexample x;
            x.events = {e};
            for (EventId p : c.ids) x.edges.emplace_back(p, e);
            x.note = "event " + std::to_string(e) + " " + ev.op.str() + " returned " + ev.rval.str() + ", expected " +
                     want.str();
            cex.push_back(std::move(x));
        }
    }
    return make(fluctuating ? "FRVal" : "RVal", l, !L.empty(), std::move(cex));
}

}  // namespace

PredicateReport check_EV(const AbstractExecution& a, Level l, const HorizonConfig& hz) {
    std::vector<Counterexample> cex;
    auto L = level_events(a.history, l);
    for (EventId e2 : L) {
        if (e2 < hz.stabilization_index) continue;
        for (EventId e : a.history.rb().pred(e2))
            if (!a.vis.has(e, e2))
                cex.push_back({{e, e2}, {{e, e2}}, "rb " + edge_str(e, e2) + " not in vis at stabilized event"});
    }
    return make("EV", l, !L.empty(), std::move(cex));
}

PredicateReport check_NCC(const AbstractExecution& a, Level l) {
    auto L = level_events(a.history, l);
    Relation base = session_order(a.history);
    base.resize(std::max(base.size(), a.vis.size()));
    base = base.unite(a.vis);
    Relation hb = transitive_closure(base).restrict(a.history.level_mask(l));
    std::vector<Counterexample> cex;
    for (EventId e : L) {
        if (!hb.has(e, e)) continue;
        // Report the underlying so/vis edges, which may pass outside L.
        auto cyc = find_cycle_through(base, e);
        Counterexample x;
        x.events = cyc;
        for (std::size_t i = 0; i < cyc.size(); ++i) x.edges.emplace_back(cyc[i], cyc[(i + 1) % cyc.size()]);
        x.note = "hb cycle through " + std::to_string(e) + " of length " + std::to_string(cyc.size());
        cex.push_back(std::move(x));
        break;
    }
    return make("NCC", l, !L.empty(), std::move(cex));
}

PredicateReport check_RVal(const AbstractExecution& a, Level l, const RdtSpec& spec) {
    return rval_common(a, l, spec, false);
}

PredicateReport check_FRVal(const AbstractExecution& a, Level l, const RdtSpec& spec) {
    return rval_common(a, l, spec, true);
}

PredicateReport check_CPar(const AbstractExecution& a, Level l, const HorizonConfig& hz) {
    std::vector<Counterexample> cex;
    auto L = level_events(a.history, l);
    for (EventId e2 : L) {
        if (e2 < hz.stabilization_index) continue;
        const auto& pv = a.vis.pred(e2);
        std::set<EventId> carrier(pv.begin(), pv.end());
        TotalOrder par = a.par_of(e2);
        for (EventId e : carrier) {
            int rp = rank(carrier, par, e);
            int ra = rank(carrier, a.ar, e);
            if (rp != ra)
                cex.push_back({{e, e2},
                               {{e, e2}},
                               "event " + std::to_string(e) + " ranked " + std::to_string(rp) + " in par(" +
                                   std::to_string(e2) + ") but " + std::to_string(ra) + " in ar"});
        }
    }
    return make("CPar", l, !L.empty(), std::move(cex));
}

PredicateReport check_SinOrd(const AbstractExecution& a, Level l) {
    const History& h = a.history;
    auto L = level_events(h, l);
    std::vector<Counterexample> cex;
    std::set<EventId> dropped;   // E'
    for (EventId y : L) {
        for (EventId x = 0; x < h.size(); ++x) {
            if (x == y) continue;
            bool v = a.vis.has(x, y);
            bool r = a.ar.before(x, y);
            if (v && !r)
                cex.push_back({{x, y}, {{x, y}}, "vis " + edge_str(x, y) + " against ar"});
            else if (!v && r) {
                if (h.at(x).pending()) dropped.insert(x);
                else cex.push_back({{x, y}, {{x, y}}, "completed event ar-before but invisible: " + edge_str(x, y)});
            }
        }
    }
    // A dropped source must be invisible to every level-l event.
    for (EventId x : dropped)
        for (EventId y : L)
            if (a.vis.has(x, y))
                cex.push_back({{x, y}, {{x, y}}, "pending event " + std::to_string(x) + " visible to " +
                                                     std::to_string(y) + " yet hidden from another"});
    return make("SinOrd", l, !L.empty(), std::move(cex));
}

PredicateReport check_SessArb(const AbstractExecution& a, Level l) {
    auto L = level_events(a.history, l);
    std::vector<Counterexample> cex;
    Relation so = session_order(a.history);
    for (EventId y : L)
        for (EventId x : so.pred(y))
            if (!a.ar.before(x, y)) cex.push_back({{x, y}, {{x, y}}, "so " + edge_str(x, y) + " not in ar"});
    return make("SessArb", l, !L.empty(), std::move(cex));
}

PredicateReport check_RT(const AbstractExecution& a, Level l) {
    auto L = level_events(a.history, l);
    std::vector<Counterexample> cex;
    for (EventId y : L)
        for (EventId x : a.history.rb().pred(y))
            if (a.history.at(x).lvl == l && !a.ar.before(x, y))
                cex.push_back({{x, y}, {{x, y}}, "rb " + edge_str(x, y) + " not in ar"});
    return make("RT", l, !L.empty(), std::move(cex));
}

const char* to_string(Composite c) {
    switch (c) {
    case Composite::BEC: return "BEC";
    case Composite::FEC: return "FEC";
    case Composite::Seq: return "Seq";
    case Composite::Lin: return "Lin";
    }
    return "?";
}

Composite parse_composite(const std::string& s) {
    if (s == "BEC") return Composite::BEC;
    if (s == "FEC") return Composite::FEC;
    if (s == "Seq") return Composite::Seq;
    if (s == "Lin") return Composite::Lin;
    throw std::invalid_argument("unknown composite: " + s);
}

PredicateReport conjunction(std::string name, Level l, std::vector<PredicateReport> parts) {
    PredicateReport r;
    r.name = std::move(name);
    r.level = l;
    bool any_holds = false, any_violated = false;
    for (const auto& p : parts) {
        any_holds |= p.verdict == Verdict::Holds;
        any_violated |= p.verdict == Verdict::Violated;
        for (const auto& c : p.counterexamples) {
            Counterexample x = c;
            x.note = p.name + ": " + x.note;
            r.counterexamples.push_back(std::move(x));
        }
    }
    r.verdict = any_violated ? Verdict::Violated : any_holds ? Verdict::Holds : Verdict::Vacuous;
    r.parts = std::move(parts);
    return r;
}

PredicateReport check_composite(const AbstractExecution& a, Composite which, Level l, const RdtSpec& spec,
                                const HorizonConfig& hz) {
    auto bec = [&] {
        return std::vector<PredicateReport>{check_EV(a, l, hz), check_NCC(a, l), check_RVal(a, l, spec)};
    };
    std::vector<PredicateReport> parts;
    switch (which) {
    case Composite::BEC: parts = bec(); break;
    case Composite::FEC:
        parts = {check_EV(a, l, hz), check_NCC(a, l), check_FRVal(a, l, spec), check_CPar(a, l, hz)};
        break;
    case Composite::Seq:
        parts = {check_SinOrd(a, l), check_SessArb(a, l)};
        for (auto& p : bec()) parts.push_back(std::move(p));
        break;
    case Composite::Lin:
        parts = {check_SinOrd(a, l), check_RT(a, l)};
        for (auto& p : bec()) parts.push_back(std::move(p));
        break;
    }
    return conjunction(to_string(which), l, std::move(parts));
}

PredicateReport check_by_name(const AbstractExecution& a, const std::string& name, Level l, const RdtSpec& spec,
                              const HorizonConfig& hz) {
    if (name == "EV") return check_EV(a, l, hz);
    if (name == "NCC") return check_NCC(a, l);
    if (name == "RVal") return check_RVal(a, l, spec);
    if (name == "FRVal") return check_FRVal(a, l, spec);
    if (name == "CPar") return check_CPar(a, l, hz);
    if (name == "SinOrd") return check_SinOrd(a, l);
    if (name == "SessArb") return check_SessArb(a, l);
    if (name == "RT") return check_RT(a, l);
    return check_composite(a, parse_composite(name), l, spec, hz);
}

}  // namespace act
