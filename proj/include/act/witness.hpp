#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "act/core_model.hpp"
#include "act/predicates.hpp"
#include "act/rdt.hpp"
#include "act/simnet.hpp"

namespace act {

struct TraceMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class WitnessKind { ANNC_Stable, ANNC_Async, Bayou_Stable, Bayou_Async, Par_Equals_Ar };
const char* to_string(WitnessKind k);

// h must be the history recorded alongside t (same event ids).
AbstractExecution build_annc_witness(const History& h, const ProtocolTrace& t, RunMode mode);
AbstractExecution build_bayou_witness(const History& h, const ProtocolTrace& t, RunMode mode);
// Dispatches on t.protocol; RedBlue gets the Bayou construction without par.
AbstractExecution build_witness(const History& h, const ProtocolTrace& t, RunMode mode);
WitnessKind witness_kind(const ProtocolTrace& t, RunMode mode);

bool check_witness_against_trace(const AbstractExecution& a, const ProtocolTrace& t);

// For every recorded state trace: earlier request -> later request, and
// every request in it -> the event that observed it.
Relation dependency_edges(const History& h, const ProtocolTrace& t);

// ------------------------------------------------------------ brute force

struct TargetClause {
    std::string predicate;   // EV NCC RVal SinOrd SessArb RT BEC Seq Lin
    Level level = Level::Weak;
};

// "BEC(weak)&SinOrd(strong)&BEC(strong)"
std::vector<TargetClause> parse_target(const std::string& s);
std::string target_str(const std::vector<TargetClause>& t);

struct BruteCertificate {
    std::uint64_t orders_total = 0;      // n!
    std::uint64_t orders_admitted = 0;   // passing SessArb/RT filters
    std::uint64_t vis_assignments = 0;   // leaves fully checked
    bool exhausted = false;
};

struct BruteResult {
    std::optional<AbstractExecution> witness;
    BruteCertificate certificate;
    bool satisfiable() const { return witness.has_value(); }
};

inline constexpr int kBruteMaxFree = 6;
inline constexpr int kBruteMaxPinned = 8;

BruteResult brute_force_witness(const History& h, const std::vector<TargetClause>& target, const RdtSpec& spec,
                                const HorizonConfig& hz);

// Verdict of every clause of target on a given execution.
PredicateReport check_target(const AbstractExecution& a, const std::vector<TargetClause>& target,
                             const RdtSpec& spec, const HorizonConfig& hz);

}  // namespace act
