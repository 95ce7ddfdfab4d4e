#include "act/witness.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

namespace act {

const char* to_string(WitnessKind k) {
    switch (k) {
    case WitnessKind::ANNC_Stable: return "ANNC_Stable";
    case WitnessKind::ANNC_Async: return "ANNC_Async";
    case WitnessKind::Bayou_Stable: return "Bayou_Stable";
    case WitnessKind::Bayou_Async: return "Bayou_Async";
    case WitnessKind::Par_Equals_Ar: return "Par_Equals_Ar";
    }
    return "?";
}

namespace {

void require_match(const History& h, const ProtocolTrace& t) {
    if (h.size() != static_cast<int>(t.events.size()))
        throw TraceMismatch("history has " + std::to_string(h.size()) + " events, trace " +
                            std::to_string(t.events.size()));
    for (int e = 0; e < h.size(); ++e)
        if (!(h.at(e).op == t.events[e].op) || h.at(e).pending() != !t.events[e].return_tick)
            throw TraceMismatch("event " + std::to_string(e) + " differs between history and trace");
}

bool delivered_before(const ProtocolTrace& t, const std::vector<int>& msgs, int replica, std::int64_t tick) {
    return !msgs.empty() && t.delivered_before(msgs.front(), replica, tick);
}

// Inserts every local event after the last anchor-eligible shared event it
// does not rb-precede; each block is ordered by (replica, invoke tick).
std::vector<EventId> interleave(const History& h, const ProtocolTrace& t, const std::vector<EventId>& shared,
                                const std::vector<EventId>& locals, const std::function<bool(EventId)>& anchor_ok) {
    std::map<int, std::vector<EventId>> blocks;   // anchor index (-1: front)
    for (EventId e : locals) {
        int anchor = -1;
        for (int i = static_cast<int>(shared.size()) - 1; i >= 0; --i) {
            EventId s = shared[i];
            if (anchor_ok(s) && !h.at(s).pending() && !h.rb().has(e, s)) {
                anchor = i;
                break;
            }
        }
        blocks[anchor].push_back(e);
    }
    for (auto& [k, v] : blocks)
        std::stable_sort(v.begin(), v.end(), [&](EventId a, EventId b) {
            return std::tie(t.events[a].replica, t.events[a].invoke_tick) <
                   std::tie(t.events[b].replica, t.events[b].invoke_tick);
        });
    std::vector<EventId> out = blocks[-1];
    for (int i = 0; i < static_cast<int>(shared.size()); ++i) {
        out.push_back(shared[i]);
        auto it = blocks.find(i);
        if (it != blocks.end()) out.insert(out.end(), it->second.begin(), it->second.end());
    }
    return out;
}

bool is_updater_annc(const OpLabel& o) { return o.name == "add" || o.name == "subtract"; }

}  // namespace

AbstractExecution build_annc_witness(const History& h, const ProtocolTrace& t, RunMode mode) {
    require_match(h, t);
    int n = h.size();
    std::vector<EventId> delivered, undelivered, gets;
    for (EventId e = 0; e < n; ++e) {
        const auto& m = t.events[e];
        if (is_updater_annc(m.op)) {
            if (!m.dot) throw TraceMismatch("updater " + std::to_string(e) + " has no request");
            (m.tob_no ? delivered : undelivered).push_back(e);
        } else if (m.op.name == "get") {
            gets.push_back(e);
        } else {
            throw TraceMismatch("not an ANNC operation: " + m.op.str());
        }
    }
    std::sort(delivered.begin(), delivered.end(),
              [&](EventId a, EventId b) { return *t.events[a].tob_no < *t.events[b].tob_no; });
    std::sort(undelivered.begin(), undelivered.end(),
              [&](EventId a, EventId b) { return *t.events[a].dot < *t.events[b].dot; });
    std::vector<EventId> upd = delivered;
    upd.insert(upd.end(), undelivered.begin(), undelivered.end());
    auto is_sub = [&](EventId e) { return t.events[e].op.name == "subtract"; };
    TotalOrder ar(interleave(h, t, upd, gets, is_sub));

    Relation vis(n);
    for (EventId x = 0; x < n; ++x) {
        const auto& mx = t.events[x];
        for (EventId y = 0; y < n; ++y) {
            if (x == y) continue;
            const auto& my = t.events[y];
            bool edge = false;
            if (my.op.name == "subtract") {
                if (is_updater_annc(mx.op)) edge = mx.tob_no && my.tob_no && *mx.tob_no < *my.tob_no;
                else edge = ar.before(x, y);
            } else if (my.op.name == "get") {
                if (mx.op.name == "get") edge = h.rb().has(x, y);
                else {
                    edge = delivered_before(t, mx.tob_msgs, my.replica, my.invoke_tick);
                    if (!edge && mx.op.name == "add")
                        edge = delivered_before(t, mx.rb_msgs, my.replica, my.invoke_tick) ||
                               (mx.replica == my.replica && mx.invoke_tick < my.invoke_tick);
                }
            } else {
                edge = h.rb().has(x, y);
            }
            if (edge) vis.add(x, y);
        }
    }
    if (mode == RunMode::Async) {
        for (EventId e = 0; e < n; ++e) {
            if (!is_sub(e) || !h.at(e).pending()) continue;
            for (EventId p : std::set<EventId>(vis.pred(e))) vis.remove(p, e);
            for (EventId s : std::set<EventId>(vis.succ(e))) vis.remove(e, s);
        }
    }
    AbstractExecution a{h, vis, ar, {}};
    a.par.assign(n, {});
    return a;
}

AbstractExecution build_bayou_witness(const History& h, const ProtocolTrace& t, RunMode mode) {
    require_match(h, t);
    int n = h.size();
    std::vector<EventId> delivered, weak_rest, strong_rest, locals;
    for (EventId e = 0; e < n; ++e) {
        const auto& m = t.events[e];
        if (!m.dot) locals.push_back(e);
        else if (m.tob_no) delivered.push_back(e);
        else if (m.level == Level::Strong) strong_rest.push_back(e);
        else weak_rest.push_back(e);
    }
    std::sort(delivered.begin(), delivered.end(),
              [&](EventId a, EventId b) { return *t.events[a].tob_no < *t.events[b].tob_no; });
    std::sort(weak_rest.begin(), weak_rest.end(), [&](EventId a, EventId b) {
        return std::tie(t.events[a].timestamp, *t.events[a].dot) < std::tie(t.events[b].timestamp, *t.events[b].dot);
    });
    std::sort(strong_rest.begin(), strong_rest.end(),
              [&](EventId a, EventId b) { return *t.events[a].dot < *t.events[b].dot; });
    std::vector<EventId> shared = delivered;
    shared.insert(shared.end(), weak_rest.begin(), weak_rest.end());
    shared.insert(shared.end(), strong_rest.begin(), strong_rest.end());
    auto any = [](EventId) { return true; };
    TotalOrder ar(interleave(h, t, shared, locals, any));

    auto is_local = [&](EventId e) { return !t.events[e].dot.has_value(); };
    Relation vis(n);
    for (EventId y = 0; y < n; ++y) {
        const auto& tr = t.events[y].trace_at_return;
        if (tr)
            for (EventId x : *tr)
                if (x != y) vis.add(x, y);
        for (EventId x = 0; x < n; ++x) {
            if (x == y || !is_local(x)) continue;
            if (is_local(y) ? h.rb().has(x, y) : ar.before(x, y)) vis.add(x, y);
        }
    }
    if (mode == RunMode::Async) {
        for (EventId e = 0; e < n; ++e) {
            if (t.events[e].level != Level::Strong || !h.at(e).pending()) continue;
            for (EventId p : std::set<EventId>(vis.pred(e))) vis.remove(p, e);
            for (EventId s : std::set<EventId>(vis.succ(e))) vis.remove(e, s);
        }
    }

    AbstractExecution a{h, vis, ar, {}};
    a.par.assign(n, {});
    for (EventId e = 0; e < n; ++e) {
        const auto& tr = t.events[e].trace_at_return;
        if (!tr || t.events[e].level == Level::Strong) continue;
        std::vector<EventId> ps;
        std::set<EventId> seen;
        for (EventId x : *tr)
            if (!is_local(x) && seen.insert(x).second) ps.push_back(x);
        for (EventId x : shared)
            if (seen.insert(x).second) ps.push_back(x);
        a.par[e] = interleave(h, t, ps, locals, any);
    }
    return a;
}

WitnessKind witness_kind(const ProtocolTrace& t, RunMode mode) {
    bool st = mode == RunMode::Stable;
    if (t.protocol == "annc") return st ? WitnessKind::ANNC_Stable : WitnessKind::ANNC_Async;
    if (t.protocol == "bayou" || t.protocol == "acutebayou") return st ? WitnessKind::Bayou_Stable : WitnessKind::Bayou_Async;
    return WitnessKind::Par_Equals_Ar;
}

AbstractExecution build_witness(const History& h, const ProtocolTrace& t, RunMode mode) {
    if (t.protocol == "annc") return build_annc_witness(h, t, mode);
    if (t.protocol == "bayou" || t.protocol == "acutebayou") return build_bayou_witness(h, t, mode);
    throw TraceMismatch("no witness construction for protocol '" + t.protocol + "'");
}

bool check_witness_against_trace(const AbstractExecution& a, const ProtocolTrace& t) {
    int n = static_cast<int>(t.events.size());
    if (a.size() != n || static_cast<int>(a.ar.seq().size()) != n) return false;
    for (EventId x = 0; x < n; ++x)
        for (EventId y = 0; y < n; ++y) {
            const auto& mx = t.events[x];
            const auto& my = t.events[y];
            if (x != y && mx.tob_no && my.tob_no && (*mx.tob_no < *my.tob_no) != a.ar.before(x, y)) return false;
        }
    for (auto [x, y] : a.vis.edges()) {
        const auto& mx = t.events[x];
        const auto& my = t.events[y];
        if (t.protocol == "annc") {
            if (my.op.name == "subtract" && is_updater_annc(mx.op)) {
                if (!(mx.tob_no && my.tob_no && *mx.tob_no < *my.tob_no)) return false;
            } else if (my.op.name == "get" && is_updater_annc(mx.op)) {
                bool ok = delivered_before(t, mx.tob_msgs, my.replica, my.invoke_tick);
                if (mx.op.name == "add")
                    ok = ok || delivered_before(t, mx.rb_msgs, my.replica, my.invoke_tick) ||
                         (mx.replica == my.replica && mx.invoke_tick < my.invoke_tick);
                if (!ok) return false;
            }
        } else if (mx.dot) {
            if (!my.trace_at_return) return false;
            const auto& tr = *my.trace_at_return;
            if (std::find(tr.begin(), tr.end(), x) == tr.end()) return false;
        }
    }
    return true;
}

Relation dependency_edges(const History& h, const ProtocolTrace& t) {
    require_match(h, t);
    Relation r(h.size());
    for (EventId e = 0; e < h.size(); ++e) {
        const auto& tr = t.events[e].trace_at_return;
        if (!tr) continue;
        for (std::size_t i = 0; i < tr->size(); ++i) {
            if ((*tr)[i] != e) r.add((*tr)[i], e);
            for (std::size_t j = i + 1; j < tr->size(); ++j)
                if ((*tr)[i] != (*tr)[j]) r.add((*tr)[i], (*tr)[j]);
        }
    }
    return r;
}

// ------------------------------------------------------------ brute force

std::vector<TargetClause> parse_target(const std::string& s) {
    std::vector<TargetClause> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, '&')) {
        part.erase(std::remove_if(part.begin(), part.end(), [](unsigned char c) { return std::isspace(c); }),
                   part.end());
        auto lp = part.find('(');
        if (lp == std::string::npos || part.back() != ')') throw std::invalid_argument("bad target clause: " + part);
        TargetClause c{part.substr(0, lp), parse_level(part.substr(lp + 1, part.size() - lp - 2))};
        static const std::set<std::string> known{"EV", "NCC", "RVal", "SinOrd", "SessArb", "RT", "BEC", "Seq", "Lin"};
        if (!known.count(c.predicate))
            throw std::invalid_argument("brute force does not support predicate " + c.predicate);
        out.push_back(c);
    }
    if (out.empty()) throw std::invalid_argument("empty target");
    return out;
}

std::string target_str(const std::vector<TargetClause>& t) {
    std::string s;
    for (const auto& c : t) {
        if (!s.empty()) s += "&";
        s += c.predicate + "(" + to_string(c.level) + ")";
    }
    return s;
}

PredicateReport check_target(const AbstractExecution& a, const std::vector<TargetClause>& target,
                             const RdtSpec& spec, const HorizonConfig& hz) {
    std::vector<PredicateReport> parts;
    for (const auto& c : target) parts.push_back(check_by_name(a, c.predicate, c.level, spec, hz));
    return conjunction(target_str(target), Level::Weak, std::move(parts));
}

namespace {

struct Atoms {
    bool ev = false, ncc = false, rval = false, sinord = false, sessarb = false, rt = false;
    bool any_vis() const { return ev || ncc || rval || sinord; }
};

std::pair<Atoms, Atoms> expand(const std::vector<TargetClause>& target) {
    Atoms w, s;
    for (const auto& c : target) {
        Atoms& a = c.level == Level::Weak ? w : s;
        const std::string& p = c.predicate;
        if (p == "BEC" || p == "Seq" || p == "Lin") a.ev = a.ncc = a.rval = true;
        if (p == "Seq") a.sinord = a.sessarb = true;
        if (p == "Lin") a.sinord = a.rt = true;
        if (p == "EV") a.ev = true;
        if (p == "NCC") a.ncc = true;
        if (p == "RVal") a.rval = true;
        if (p == "SinOrd") a.sinord = true;
        if (p == "SessArb") a.sessarb = true;
        if (p == "RT") a.rt = true;
    }
    return {w, s};
}

using Mask = std::uint32_t;

bool bit(Mask m, int i) { return (m >> i) & 1U; }

class Search {
public:
    Search(const History& h, const std::vector<TargetClause>& target, const RdtSpec& spec, const HorizonConfig& hz)
        : h_(h), target_(target), spec_(spec), hz_(hz), n_(h.size()) {
        auto [w, s] = expand(target);
        atoms_[0] = w;
        atoms_[1] = s;
        so_ = session_order(h);
        for (EventId e = 0; e < n_; ++e) {
            for (EventId p : h.rb().pred(e)) rb_pred_[e] |= Mask{1} << p;
            if (!spec.is_readonly(h.at(e).op)) updaters_ |= Mask{1} << e;
        }
    }

    const Atoms& atoms(EventId e) const { return atoms_[h_.at(e).lvl == Level::Weak ? 0 : 1]; }

    bool pinned(EventId e) const {
        const Atoms& a = atoms(e);
        return a.sinord || (!a.any_vis() && spec_.id != RdtId::MVR);
    }

    BruteResult run() {
        BruteResult res;
        std::vector<EventId> perm(n_);
        std::iota(perm.begin(), perm.end(), 0);
        res.certificate.orders_total = 1;
        for (int i = 2; i <= n_; ++i) res.certificate.orders_total *= static_cast<std::uint64_t>(i);
        do {
            TotalOrder ar(perm);
            if (!ar_ok(ar)) continue;
            ++res.certificate.orders_admitted;
            if (auto a = search_vis(ar, res.certificate)) {
                res.witness = std::move(a);
                return res;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        res.certificate.exhausted = true;
        return res;
    }

private:
    bool ar_ok(const TotalOrder& ar) const {
        for (EventId y = 0; y < n_; ++y) {
            const Atoms& a = atoms(y);
            if (a.sessarb)
                for (EventId x : so_.pred(y))
                    if (!ar.before(x, y)) return false;
            if (a.rt)
                for (EventId x : h_.rb().pred(y))
                    if (h_.at(x).lvl == h_.at(y).lvl && !ar.before(x, y)) return false;
        }
        return true;
    }

    bool rval_ok(EventId y, Mask s, const TotalOrder& ar) const {
        if (h_.at(y).pending()) return false;
        std::set<EventId> carrier;
        for (EventId x = 0; x < n_; ++x)
            if (bit(s, x)) carrier.insert(x);
        OperationContext c = make_context(h_, Relation(n_), carrier, ar);
        return spec_.eval(h_.at(y).op, c) == h_.at(y).rval;
    }

    std::vector<Mask> candidates(EventId y, const TotalOrder& ar) const {
        const Atoms& a = atoms(y);
        Mask all = ((n_ >= 32) ? ~Mask{0} : ((Mask{1} << n_) - 1)) & ~(Mask{1} << y);
        Mask required = a.ev && y >= hz_.stabilization_index ? rb_pred_[y] : 0;
        bool mvr = spec_.id == RdtId::MVR;
        std::vector<Mask> out;
        auto accept = [&](Mask s) {
            if ((s & required) != required) return;
            if (a.rval && !mvr && !rval_ok(y, s, ar)) return;
            out.push_back(s);
        };
        if (a.sinord) {
            Mask before = 0, pend = 0;
            for (EventId x = 0; x < n_; ++x)
                if (x != y && ar.before(x, y)) {
                    before |= Mask{1} << x;
                    if (h_.at(x).pending()) pend |= Mask{1} << x;
                }
            for (Mask d = pend;; d = (d - 1) & pend) {
                accept(before & ~d);
                if (d == 0) break;
            }
            return out;
        }
        if (!a.any_vis() && !mvr) return {0};
        Mask free = (mvr ? all : (all & updaters_)) & ~required;
        for (Mask t = free;; t = (t - 1) & free) {
            accept(required | t);
            if (t == 0) break;
        }
        if (mvr) return out;
        // Fewer incoming edges never hurt the other clauses, so keep minimal sets.
        std::vector<Mask> minimal;
        for (Mask s : out) {
            bool dominated = std::any_of(out.begin(), out.end(), [&](Mask o) { return o != s && (o & s) == o; });
            if (!dominated) minimal.push_back(s);
        }
        std::sort(minimal.begin(), minimal.end());
        return minimal;
    }

    // Cycle through an event whose level asks for NCC, over so plus chosen vis.
    bool ncc_broken(const std::vector<Mask>& in) const {
        std::vector<Mask> reach(n_, 0);
        for (EventId y = 0; y < n_; ++y)
            for (EventId x = 0; x < n_; ++x)
                if (bit(in[y], x) || so_.has(x, y)) reach[x] |= Mask{1} << y;
        for (int k = 0; k < n_; ++k)
            for (int i = 0; i < n_; ++i)
                if (bit(reach[i], k)) reach[i] |= reach[k];
        for (EventId e = 0; e < n_; ++e)
            if (atoms(e).ncc && bit(reach[e], e)) return true;
        return false;
    }

    std::optional<AbstractExecution> search_vis(const TotalOrder& ar, BruteCertificate& cert) {
        std::vector<std::vector<Mask>> cand(n_);
        for (EventId y = 0; y < n_; ++y) {
            cand[y] = candidates(y, ar);
            if (cand[y].empty()) return std::nullopt;
        }
        std::vector<Mask> in(n_, 0);
        bool any_ncc = atoms_[0].ncc || atoms_[1].ncc;
        std::optional<AbstractExecution> found;
        std::function<bool(int)> rec = [&](int y) -> bool {
            if (y == n_) {
                ++cert.vis_assignments;
                Relation vis(n_);
                for (EventId b = 0; b < n_; ++b)
                    for (EventId x = 0; x < n_; ++x)
                        if (bit(in[b], x)) vis.add(x, b);
                AbstractExecution a{h_, vis, ar, std::vector<std::vector<EventId>>(n_)};
                if (check_target(a, target_, spec_, hz_).ok()) {
                    found = std::move(a);
                    return true;
                }
                return false;
            }
            for (Mask s : cand[y]) {
                in[y] = s;
                if (any_ncc && ncc_broken(in)) continue;
                if (rec(y + 1)) return true;
            }
            in[y] = 0;
            return false;
        };
        rec(0);
        return found;
    }

    const History& h_;
    const std::vector<TargetClause>& target_;
    const RdtSpec& spec_;
    const HorizonConfig& hz_;
    int n_;
    Atoms atoms_[2];
    Relation so_;
    Mask rb_pred_[32] = {};
    Mask updaters_ = 0;
};

}  // namespace

BruteResult brute_force_witness(const History& h, const std::vector<TargetClause>& target, const RdtSpec& spec,
                                const HorizonConfig& hz) {
    int n = h.size();
    if (n > kBruteMaxPinned) throw TooLarge("brute force handles at most " + std::to_string(kBruteMaxPinned) + " events");
    Search s(h, target, spec, hz);
    if (n > kBruteMaxFree)
        for (EventId e = 0; e < n; ++e)
            if (!s.pinned(e))
                throw TooLarge("more than " + std::to_string(kBruteMaxFree) +
                               " events and visibility of event " + std::to_string(e) + " is not pinned");
    return s.run();
}

}  // namespace act
