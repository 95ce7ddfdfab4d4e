// Python module: JSON strings in and out; act_sim/__init__.py decodes them.
#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "act/harness.hpp"

namespace py = pybind11;
using namespace act;

namespace {

History history_from_text(const std::string& jsonl) {
    std::istringstream in(jsonl);
    return read_history_jsonl(in);
}

std::string run(const std::string& name, std::optional<std::uint64_t> seed, std::optional<std::string> mode,
                std::optional<std::string> out) {
    Scenario s = make_scenario(name, seed);
    if (mode) s.schedule.mode = parse_mode(*mode);
    RunArtifact a;
    {
        py::gil_scoped_release release;
        a = run_scenario(s);
    }
    if (out) write_artifact(*out, a);
    return artifact_report(a).dump();
}

std::string brute(const std::string& jsonl, const std::string& target, const std::string& rdt, bool no_ev,
                  int stabilization) {
    History h = history_from_text(jsonl);
    HorizonConfig hz = no_ev ? HorizonConfig::nothing(h) : HorizonConfig{0, stabilization};
    auto tgt = parse_target(target);
    BruteResult r;
    {
        py::gil_scoped_release release;
        r = brute_force_witness(h, tgt, RdtSpec{parse_rdt(rdt)}, hz);
    }
    json j{{"target", target_str(tgt)}, {"satisfiable", r.satisfiable()}, {"certificate", to_json(r.certificate)}};
    if (r.witness) j["witness"] = witness_to_json(*r.witness);
    return j.dump();
}

std::string check(const std::string& jsonl, const std::string& witness, const std::string& predicate,
                  const std::string& level, const std::string& rdt, int stabilization) {
    History h = history_from_text(jsonl);
    AbstractExecution a = witness_from_json(h, json::parse(witness));
    return to_json(check_by_name(a, predicate, parse_level(level), RdtSpec{parse_rdt(rdt)}, HorizonConfig{0, stabilization}))
        .dump();
}

std::string lint(const std::string& trace) { return to_json(check_act_restrictions(trace_from_json(json::parse(trace)))).dump(); }

}  // namespace

PYBIND11_MODULE(_act_sim, m) {
    m.doc() = "ACT simulator and checkers";
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
    py::register_exception<TooLarge>(m, "TooLarge", PyExc_ValueError);
    m.def("scenario_names", &scenario_names);
    m.def("run_scenario", &run, py::arg("name"), py::arg("seed") = py::none(), py::arg("mode") = py::none(),
          py::arg("out") = py::none());
    m.def("brute_force", &brute, py::arg("history_jsonl"), py::arg("target"), py::arg("rdt") = "seq",
          py::arg("no_ev") = false, py::arg("stabilization") = 0);
    m.def("check", &check, py::arg("history_jsonl"), py::arg("witness_json"), py::arg("predicate"),
          py::arg("level") = "weak", py::arg("rdt") = "seq", py::arg("stabilization") = 0);
    m.def("lint", &lint, py::arg("trace_json"));
}
