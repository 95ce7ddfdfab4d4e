#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "act/core_model.hpp"

namespace act {

struct BadOperation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct UnknownEvent : std::out_of_range {
    using std::out_of_range::out_of_range;
};
struct MissingPar : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ops[i] is the i-th element of the carrier in the context's order; vis is
// indexed by position, so evaluation never sees the original event ids.
struct OperationContext {
    std::vector<EventId> ids;
    std::vector<OpLabel> ops;
    Relation vis;

    std::size_t size() const { return ids.size(); }
};

OperationContext make_context(const History& h, const Relation& vis, const std::set<EventId>& carrier,
                              const TotalOrder& order);
OperationContext context_of(const AbstractExecution& a, EventId e);
OperationContext fcontext_of(const AbstractExecution& a, EventId e);

enum class RdtId { Seq, MVR, NNC, KVS };

const char* to_string(RdtId id);
RdtId parse_rdt(const std::string& s);

RetVal eval_fseq(const OpLabel& o, const OperationContext& c);
RetVal eval_fmvr(const OpLabel& o, const OperationContext& c);
RetVal eval_fnnc(const OpLabel& o, const OperationContext& c);
// Register scripts evaluated serially in context order:
//   put(k,v) -> ok, get(k) -> value (0 if unset),
//   setif(w,c,t,v): w := 1; if c == 1 then t := v  -> ok
//   app(k,s): k := k . s -> new contents of k
RetVal eval_fkvs(const OpLabel& o, const OperationContext& c);

std::int64_t f_nnc(std::int64_t x, const OpLabel& o);

struct RdtSpec {
    RdtId id = RdtId::Seq;

    RetVal eval(const OpLabel& o, const OperationContext& c) const;
    bool is_readonly(const OpLabel& o) const;
    bool knows(const std::string& op_name) const;
    std::string name() const { return to_string(id); }
};

using LvlMap = std::map<std::string, std::set<Level>>;

struct ActSpec {
    RdtSpec rdt;
    LvlMap lvlmap;

    // Empty string when the history conforms, otherwise the first complaint.
    std::string conformance(const History& h) const;
};

LvlMap nnc_lvlmap();
LvlMap seq_impossibility_lvlmap();
LvlMap redblue_seq_lvlmap();
LvlMap all_levels_lvlmap(RdtId id);

}  // namespace act
