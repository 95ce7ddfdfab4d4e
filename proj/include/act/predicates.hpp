#pragma once

#include <string>
#include <vector>

#include "act/core_model.hpp"
#include "act/rdt.hpp"

namespace act {

enum class Verdict { Holds, Violated, Vacuous };
const char* to_string(Verdict v);

struct Counterexample {
    std::vector<EventId> events;
    std::vector<std::pair<EventId, EventId>> edges;
    std::string note;
};

struct PredicateReport {
    std::string name;
    Level level = Level::Weak;
    Verdict verdict = Verdict::Vacuous;
    std::vector<Counterexample> counterexamples;   // non-empty iff violated
    std::vector<PredicateReport> parts;            // composites only

    bool ok() const { return verdict != Verdict::Violated; }
    std::string summary() const;
};

// Cofinite clauses are enforced exactly from event ordinal
// stabilization_index onwards; tail_probes only documents how the harness
// chose it.
struct HorizonConfig {
    int tail_probes = 3;
    int stabilization_index = 0;

    static HorizonConfig everything() { return HorizonConfig{0, 0}; }
    static HorizonConfig nothing(const History& h) { return HorizonConfig{0, h.size()}; }
};

PredicateReport check_EV(const AbstractExecution& a, Level l, const HorizonConfig& hz);
PredicateReport check_NCC(const AbstractExecution& a, Level l);
PredicateReport check_RVal(const AbstractExecution& a, Level l, const RdtSpec& spec);
PredicateReport check_FRVal(const AbstractExecution& a, Level l, const RdtSpec& spec);
PredicateReport check_CPar(const AbstractExecution& a, Level l, const HorizonConfig& hz);
PredicateReport check_SinOrd(const AbstractExecution& a, Level l);
PredicateReport check_SessArb(const AbstractExecution& a, Level l);
PredicateReport check_RT(const AbstractExecution& a, Level l);

enum class Composite { BEC, FEC, Seq, Lin };
const char* to_string(Composite c);
Composite parse_composite(const std::string& s);

PredicateReport check_composite(const AbstractExecution& a, Composite which, Level l, const RdtSpec& spec,
                                const HorizonConfig& hz);

// Any predicate by name: EV, NCC, RVal, FRVal, CPar, SinOrd, SessArb, RT,
// BEC, FEC, Seq, Lin.
PredicateReport check_by_name(const AbstractExecution& a, const std::string& name, Level l, const RdtSpec& spec,
                              const HorizonConfig& hz);

PredicateReport conjunction(std::string name, Level l, std::vector<PredicateReport> parts);

}  // namespace act
