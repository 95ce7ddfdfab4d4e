#pragma once

#include <optional>
#include <string>
#include <vector>

#include "act/io.hpp"
#include "act/protocols.hpp"
#include "act/witness.hpp"

namespace act {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Check {
    std::string predicate;
    Level level = Level::Weak;
    std::optional<Verdict> expected;
};

// Expected response of the k-th scripted operation.
struct ExpectedValue {
    std::size_t script_index = 0;
    RetVal value;
};

enum class ExcerptRule { None, Script, OppositeReads };
const char* to_string(ExcerptRule r);

struct Scenario {
    std::string name;
    std::string description;
    ProtocolConfig protocol;
    Schedule schedule;
    std::vector<ScriptOp> script;
    int tail_probes = 3;
    OpLabel probe_op;
    std::vector<Check> checks;
    std::vector<ExpectedValue> expected_values;
    std::optional<RetVal> expected_probe_value;
    std::int64_t max_steps = 200000;

    // Brute force over a small part of the run (or the fixed history).
    std::string brute_target;
    ExcerptRule excerpt = ExcerptRule::None;
    std::optional<bool> expect_satisfiable;
    // Classic Bayou: NCC over the recorded execution dependencies.
    bool dependency_ncc = false;
    std::optional<Verdict> expected_dependency_ncc;

    // Set for scenarios that analyse a given history instead of simulating.
    std::optional<History> fixed_history;
    std::optional<HorizonConfig> fixed_horizon;
};

struct BruteSummary {
    std::string target;
    std::vector<EventId> excerpt;   // ids in the full history
    bool satisfiable = false;
    BruteCertificate certificate;
    std::optional<AbstractExecution> witness;
};

struct RunArtifact {
    std::string scenario;
    std::string protocol;
    RdtId rdt = RdtId::Seq;
    RunMode mode = RunMode::Stable;
    std::uint64_t seed = 0;
    std::int64_t steps = 0;
    std::uint64_t trace_hash = 0;

    History history;
    std::optional<ProtocolTrace> trace;
    std::optional<AbstractExecution> witness;
    std::string witness_kind;
    bool witness_matches_trace = false;
    HorizonConfig hz;

    std::vector<Check> checks;
    std::vector<PredicateReport> reports;
    std::optional<PredicateReport> lints;
    std::optional<PredicateReport> dependency_ncc;
    std::optional<BruteSummary> brute;
    std::string conformance;   // empty when the history fits the level map

    std::vector<std::string> digests;
    std::vector<int> blocks;
    std::vector<std::size_t> tentative;
    bool converged = false;

    std::vector<std::string> failures;   // unmet expectations
    bool ok() const { return failures.empty(); }
};

std::vector<std::string> scenario_names();
// Unknown name -> ConfigError.
Scenario make_scenario(const std::string& name, std::optional<std::uint64_t> seed = std::nullopt);
std::vector<Scenario> built_in_scenarios();

struct WorkloadParams {
    RdtId rdt = RdtId::NNC;
    int replicas = 3;
    int clients_per_replica = 2;
    int ops = 20;
    double strong_ratio = 0.3;
    std::int64_t start = 0;
    std::int64_t gap_max = 3;   // ticks between consecutive invocations
    int first_client = 0;
};

std::vector<ScriptOp> random_workload(const WorkloadParams& p, std::uint64_t seed);
// Weak read or get used for tail probes.
OpLabel default_probe(RdtId rdt);
LvlMap lvlmap_for(const ProtocolConfig& c);

RunArtifact run_scenario(const Scenario& s);

// Event ids of scripted operations, in script order (-1: never issued).
std::vector<EventId> script_event_ids(const ProtocolTrace& t, const std::vector<ScriptOp>& script);
// Two weak reads seeing two weak updates in opposite orders, plus those updates.
std::optional<std::vector<EventId>> find_opposite_reads(const History& h);

json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const json& j);

void write_artifact(const std::string& dir, const RunArtifact& a);
RunArtifact read_artifact(const std::string& dir);
json artifact_report(const RunArtifact& a);
// Checks recomputed from the stored history and witness only.
std::vector<PredicateReport> recheck(const RunArtifact& a);

}  // namespace act
