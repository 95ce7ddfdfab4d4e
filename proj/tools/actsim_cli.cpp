// actsim: run scenarios, check witnesses, brute-force small histories, lint traces.
// Exit codes: 0 holds / satisfiable / clean, 1 violated / unsatisfiable, 2 usage or input error.
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>

#include <CLI11.hpp>

#include "act/harness.hpp"

using namespace act;

namespace {

std::string default_out() {
    const char* env = std::getenv("ACTSIM_OUT");
    return env && *env ? env : "runs";
}

void print_artifact(const RunArtifact& a) {
    std::cout << a.scenario << ": " << (a.ok() ? "ok" : "FAILED") << " (" << a.history.size() << " events, "
              << a.steps << " steps)\n";
    for (const auto& r : a.reports) std::cout << "  " << r.summary() << "\n";
    if (a.lints) std::cout << "  restrictions: " << to_string(a.lints->verdict) << "\n";
    if (a.dependency_ncc) std::cout << "  dependency " << a.dependency_ncc->summary() << "\n";
    if (a.brute)
        std::cout << "  brute " << a.brute->target << ": " << (a.brute->satisfiable ? "satisfiable" : "Unsatisfiable")
                  << " (" << a.brute->certificate.orders_admitted << "/" << a.brute->certificate.orders_total
                  << " orders, " << a.brute->certificate.vis_assignments << " vis assignments)\n";
    if (!a.digests.empty()) std::cout << "  converged: " << (a.converged ? "yes" : "no") << "\n";
    for (const auto& f : a.failures) std::cout << "  failure: " << f << "\n";
}

int exit_for(const PredicateReport& r) { return r.verdict == Verdict::Violated ? 1 : 0; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"actsim: acute cloud type simulator and checker"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a built-in scenario (or 'all') and write its artifact");
    std::string scenario, mode, out = default_out(), config;
    std::optional<std::uint64_t> seed;
    int jobs = 1;
    run->add_option("scenario", scenario, "scenario name, or 'all'");
    run->add_option("--seed", seed, "workload and network seed");
    run->add_option("--mode", mode, "stable or async")->check(CLI::IsMember({"stable", "async"}));
    run->add_option("--out", out, "output directory (default $ACTSIM_OUT or ./runs)");
    run->add_option("--config", config, "scenario config file (JSON)");
    run->add_option("--jobs", jobs, "parallel runs for 'all'")->check(CLI::PositiveNumber);

    auto* check = app.add_subcommand("check", "check a predicate on a history and witness");
    std::string hist_path, wit_path, predicate, level = "weak", rdt = "seq";
    std::optional<int> stab;
    check->add_option("history", hist_path, "history (JSONL)")->required();
    check->add_option("witness", wit_path, "witness (JSON)")->required();
    check->add_option("--predicate", predicate, "EV NCC RVal FRVal CPar SinOrd SessArb RT BEC FEC Seq Lin")->required();
    check->add_option("--level", level, "weak or strong");
    check->add_option("--rdt", rdt, "seq nnc mvr kvs");
    check->add_option("--stabilization", stab, "first event ordinal subject to cofinite clauses (default 0)");

    auto* brute = app.add_subcommand("brute", "exhaustive witness search on a small history");
    std::string target;
    bool no_ev = false;
    brute->add_option("history", hist_path, "history (JSONL)")->required();
    brute->add_option("--target", target, "e.g. BEC(weak)&SinOrd(strong)&BEC(strong)")->required();
    brute->add_option("--rdt", rdt, "seq nnc mvr kvs");
    brute->add_option("--stabilization", stab, "first event ordinal subject to EV (default 0)");
    brute->add_flag("--no-ev", no_ev, "treat the history as a finite fragment: EV constrains nothing");

    auto* lint = app.add_subcommand("lint", "check the five implementation restrictions on a trace");
    std::string trace_path;
    lint->add_option("trace", trace_path, "trace (JSON)")->required();

    auto* list = app.add_subcommand("list-scenarios", "print the built-in scenario names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*list) {
            for (const auto& n : scenario_names()) {
                Scenario s = make_scenario(n);
                std::cout << n << "\t" << s.description << "\n";
            }
            return 0;
        }
        if (*run) {
            std::vector<Scenario> todo;
            if (!config.empty()) todo.push_back(scenario_from_json(read_json_file(config)));
            else if (scenario == "all")
                for (const auto& n : scenario_names()) todo.push_back(make_scenario(n, seed));
            else if (!scenario.empty()) todo.push_back(make_scenario(scenario, seed));
            else throw ConfigError("run needs a scenario name or --config");
            for (auto& s : todo) {
                if (!mode.empty()) s.schedule.mode = parse_mode(mode);
                if (seed) s.schedule.seed = *seed;
            }
            std::vector<RunArtifact> arts(todo.size());
            for (std::size_t i = 0; i < todo.size(); i += static_cast<std::size_t>(jobs)) {
                std::vector<std::future<RunArtifact>> fs;
                for (std::size_t k = i; k < std::min(todo.size(), i + static_cast<std::size_t>(jobs)); ++k)
                    fs.push_back(std::async(std::launch::async, [&todo, k] { return run_scenario(todo[k]); }));
                for (std::size_t k = 0; k < fs.size(); ++k) arts[i + k] = fs[k].get();
            }
            bool ok = true;
            for (const auto& a : arts) {
                write_artifact(out + "/" + a.scenario, a);
                print_artifact(a);
                ok = ok && a.ok();
            }
            return ok ? 0 : 1;
        }
        if (*check) {
            History h = load_history(hist_path);
            AbstractExecution a = witness_from_json(h, read_json_file(wit_path));
            HorizonConfig hz{0, stab.value_or(0)};
            PredicateReport r = check_by_name(a, predicate, parse_level(level), RdtSpec{parse_rdt(rdt)}, hz);
            std::cout << r.summary() << "\n";
            for (const auto& p : r.parts) std::cout << "  " << p.summary() << "\n";
            return exit_for(r);
        }
        if (*brute) {
            History h = load_history(hist_path);
            HorizonConfig hz = no_ev ? HorizonConfig::nothing(h) : HorizonConfig{0, stab.value_or(0)};
            auto tgt = parse_target(target);
            BruteResult r = brute_force_witness(h, tgt, RdtSpec{parse_rdt(rdt)}, hz);
            const auto& c = r.certificate;
            std::cout << (r.satisfiable() ? "Satisfiable" : "Unsatisfiable") << " " << target_str(tgt) << "\n";
            std::cout << "certificate: " << to_json(c).dump() << "\n";
            if (r.witness) std::cout << "witness: " << witness_to_json(*r.witness).dump() << "\n";
            return r.satisfiable() ? 0 : 1;
        }
        if (*lint) {
            ProtocolTrace t = trace_from_json(read_json_file(trace_path));
            PredicateReport r = check_act_restrictions(t);
            for (const auto& p : r.parts) std::cout << p.summary() << "\n";
            return exit_for(r);
        }
    } catch (const std::exception& e) {
        std::cerr << "actsim: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
