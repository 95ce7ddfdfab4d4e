#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "act/core_model.hpp"
#include "act/predicates.hpp"
#include "act/simnet.hpp"
#include "act/witness.hpp"

namespace act {

using json = nlohmann::json;

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json to_json(const Value& v);
Value value_from_json(const json& j);
json to_json(const OpLabel& o);
OpLabel op_from_json(const json& j);
json to_json(const RetVal& r);
RetVal retval_from_json(const json& j);

json to_json(const Event& e);
Event event_from_json(const json& j);

// One event per line.
void write_history_jsonl(std::ostream& os, const History& h);
History read_history_jsonl(std::istream& is);
History load_history(const std::string& path);

// ar as a permutation, vis as an edge list, par only where it differs.
json witness_to_json(const AbstractExecution& a);
AbstractExecution witness_from_json(const History& h, const json& j);

json to_json(const ProtocolTrace& t);
ProtocolTrace trace_from_json(const json& j);

json to_json(const PredicateReport& r);
json to_json(const BruteCertificate& c);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace act
