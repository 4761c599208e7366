#include "ctlmc/checker.hpp"
#include "ctlmc/errors.hpp"
#include "ctlmc/sim.hpp"
#include "ctlmc/traffic.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using nlohmann::ordered_json;
using namespace ctlmc;

// Exit codes are part of the CLI contract: CI keys off them.
constexpr int kExitAllPassed = 0;
constexpr int kExitSpecFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCapExceeded = 3;

struct CheckOptions {
    int t_thr = 18;
    int q_max = 20;
    std::string variant = "fixed";
    std::string specs_path;
    std::string trace_style = "delta";
    std::string format = "text";
    std::uint64_t max_states = BuildLimits{}.max_states;
};

struct SimulateOptions {
    std::string mode = "adaptive";
    std::string rate;
    std::uint64_t horizon = 100'000;
    std::uint64_t seed = 1;
    int t_thr = 18;
    int period = 0;
    std::string out = "-";
};

struct CompareOptions {
    std::string rates;
    std::uint64_t horizon = 100'000;
    std::uint64_t seed = 1;
    int t_thr = 18;
    std::string out = "-";
};

struct GraphOptions {
    int t_thr = 18;
    int q_max = 20;
    std::string variant = "fixed";
    std::string out = "-";
    bool force = false;
};

traffic::Variant parse_variant(const std::string& name) {
    if (name == "buggy") return traffic::Variant::Buggy;
    if (name == "fixed") return traffic::Variant::Fixed;
    throw InvalidConfigError("unknown variant '" + name + "' (expected buggy or fixed)");
}

std::vector<double> parse_rates(const std::string& text) {
    std::vector<double> rates;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        double value = std::stod(item, &used);
        if (used != item.size()) throw InvalidConfigError("bad rate '" + item + "'");
        if (!(value >= 0.0 && value <= 1.0))
            throw InvalidConfigError("rate " + item + " is not a probability in [0, 1]");
        rates.push_back(value);
    }
    if (rates.empty()) throw InvalidConfigError("no rates given");
    return rates;
}

std::array<double, 4> parse_lane_rates(const std::string& text) {
    auto rates = parse_rates(text);
    if (rates.size() == 1) return {rates[0], rates[0], rates[0], rates[0]};
    if (rates.size() == 4) return {rates[0], rates[1], rates[2], rates[3]};
    throw InvalidConfigError("--rate takes one probability or four comma-separated ones");
}

void write_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidConfigError("cannot open '" + path + "' for writing");
    out << content;
}

ordered_json trace_to_json(const Trace& trace) {
    ordered_json steps = ordered_json::array();
    for (const auto& step : trace.steps) {
        ordered_json values = ordered_json::object();
        for (const auto& [name, value] : step.snapshot) values[name] = value;
        steps.push_back({{"state", step.state}, {"values", values}});
    }
    ordered_json j{{"annotation", nullptr}, {"loop_back", nullptr}, {"steps", steps}};
    if (!trace.annotation.empty()) j["annotation"] = trace.annotation;
    if (trace.loop_back) j["loop_back"] = *trace.loop_back;
    return j;
}

int run_check(const CheckOptions& opt) {
    auto variant = parse_variant(opt.variant);
    traffic::TrafficParams params;
    params.t_thr_ticks = opt.t_thr;
    params.q_max = opt.q_max;
    params.validate();

    std::vector<SpecEntry> specs;
    if (opt.specs_path.empty()) {
        specs = traffic::paper_spec_suite(params);
    } else {
        std::ifstream in(opt.specs_path, std::ios::binary);
        if (!in) throw InvalidConfigError("cannot read spec file '" + opt.specs_path + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        specs = parse_spec_file(buffer.str());
    }

    BuildLimits limits;
    limits.max_states = opt.max_states;

    const auto started = std::chrono::steady_clock::now();
    KripkeStructure ks = traffic::build_traffic_structure(params, variant, specs, limits);

    struct Verdict {
        const SpecEntry* spec;
        bool holds;
        std::optional<Trace> trace;
    };
    std::vector<Verdict> verdicts;
    int passed = 0, failed = 0, probes = 0;
    for (const auto& spec : specs) {
        CheckResult result = check(ks, spec);
        std::optional<Trace> trace;
        if (!result.holds && !spec.probe && opt.trace_style != "none")
            trace = counterexample(ks, spec, result);
        if (spec.probe) ++probes;
        else if (result.holds) ++passed;
        else ++failed;
        verdicts.push_back({&spec, result.holds, std::move(trace)});
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();

    const int checked = passed + failed;
    if (opt.format == "json") {
        ordered_json j;
        j["schema_version"] = 1;
        j["command"] = "check";
        j["params"] = {{"t_thr", params.t_thr_ticks},
                       {"q_max", params.q_max},
                       {"variant", opt.variant},
                       {"wait_cap", params.effective_wait_cap()},
                       {"max_states", opt.max_states}};
        j["model"] = {{"states", ks.state_count()},
                      {"transitions", ks.transition_count()},
                      {"initial", ks.initial().count()}};
        j["specs"] = ordered_json::array();
        for (const auto& v : verdicts) {
            ordered_json entry{{"name", v.spec->name},
                               {"probe", v.spec->probe},
                               {"source", v.spec->source_text},
                               {"holds", v.holds},
                               {"counterexample", nullptr}};
            if (v.trace) entry["counterexample"] = trace_to_json(*v.trace);
            j["specs"].push_back(std::move(entry));
        }
        j["summary"] = {{"checked", checked}, {"passed", passed}, {"failed", failed},
                        {"probes", probes}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::ostringstream os;
        os << "model: traffic variant=" << opt.variant << " t_thr=" << params.t_thr_ticks
           << " q_max=" << params.q_max << " wait_cap=" << params.effective_wait_cap() << "\n";
        os << "states=" << ks.state_count() << " transitions=" << ks.transition_count()
           << " initial=" << ks.initial().count() << "\n\n";
        for (const auto& v : verdicts) {
            std::string label = v.spec->name.empty() ? v.spec->source_text : v.spec->name;
            if (v.spec->probe) {
                os << "[probe:" << (v.holds ? "holds" : "does not hold") << "] " << label << ": "
                   << v.spec->source_text << "\n";
                continue;
            }
            os << (v.holds ? "[PASS] " : "[FAIL] ") << label << ": " << v.spec->source_text
               << "\n";
            if (v.trace) {
                os << "counterexample (" << opt.trace_style << "):\n";
                std::istringstream rendered(format_trace(
                    *v.trace,
                    opt.trace_style == "full" ? TraceStyle::Full : TraceStyle::Delta));
                std::string line;
                while (std::getline(rendered, line)) os << "  " << line << "\n";
            }
        }
        os << "\nsummary: checked=" << checked << " passed=" << passed << " failed=" << failed
           << " probes=" << probes << "\n";
        std::cout << os.str();
    }
    std::cerr << "checked " << checked << " specs (+" << probes << " probes) against "
              << ks.state_count() << " states in " << elapsed << " ms\n";
    return failed > 0 ? kExitSpecFailed : kExitAllPassed;
}

int run_simulate(const SimulateOptions& opt) {
    sim::SimConfig config;
    if (opt.mode == "adaptive") config.mode = sim::Mode::Adaptive;
    else if (opt.mode == "fixed") config.mode = sim::Mode::FixedPeriod;
    else throw InvalidConfigError("unknown mode '" + opt.mode + "' (expected adaptive or fixed)");
    config.arrival_prob = parse_lane_rates(opt.rate);
    config.horizon_ticks = opt.horizon;
    config.seed = opt.seed;
    config.t_thr_ticks = opt.t_thr;
    config.fixed_period_ticks = opt.period;
    sim::SimStats stats = sim::run_simulation(config);
    write_output(opt.out, sim::stats_csv(stats));
    return kExitAllPassed;
}

int run_compare(const CompareOptions& opt) {
    sim::SimConfig base;
    base.horizon_ticks = opt.horizon;
    base.seed = opt.seed;
    base.t_thr_ticks = opt.t_thr;
    auto rows = sim::compare_modes(base, parse_rates(opt.rates));
    write_output(opt.out, sim::compare_csv(rows));
    return kExitAllPassed;
}

int run_graph(const GraphOptions& opt) {
    auto variant = parse_variant(opt.variant);
    traffic::TrafficParams params;
    params.t_thr_ticks = opt.t_thr;
    params.q_max = opt.q_max;
    params.validate();
    KripkeStructure ks = traffic::build_traffic_structure(params, variant);
    if (ks.state_count() > 5000 && !opt.force) {
        std::cerr << "refusing to render " << ks.state_count()
                  << " states (limit 5000); a diagram this size is unreadable. "
                     "Use --force to write it anyway, or shrink --t-thr/--q-max.\n";
        return kExitUsage;
    }
    write_output(opt.out, export_dot(ks));
    return kExitAllPassed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"explicit-state CTL model checking for a four-way adaptive traffic signal"};
    app.require_subcommand(1);

    CheckOptions check_opt;
    auto* check_cmd = app.add_subcommand("check", "build the traffic model and check CTL specs");
    check_cmd->add_option("--t-thr", check_opt.t_thr, "maximum green duration in ticks");
    check_cmd->add_option("--q-max", check_opt.q_max, "largest queue draw at a handover");
    check_cmd->add_option("--variant", check_opt.variant, "counter convention: buggy|fixed")
        ->check(CLI::IsMember({"buggy", "fixed"}));
    check_cmd->add_option("--specs", check_opt.specs_path,
                          "spec file (default: built-in suite)");
    check_cmd->add_option("--trace", check_opt.trace_style, "counterexample style")
        ->check(CLI::IsMember({"full", "delta", "none"}));
    check_cmd->add_option("--format", check_opt.format, "report format")
        ->check(CLI::IsMember({"text", "json"}));
    check_cmd->add_option("--max-states", check_opt.max_states, "state cap for the build");

    SimulateOptions sim_opt;
    auto* sim_cmd = app.add_subcommand("simulate", "run the discrete-time intersection simulator");
    sim_cmd->add_option("--mode", sim_opt.mode, "adaptive|fixed")
        ->check(CLI::IsMember({"adaptive", "fixed"}));
    sim_cmd->add_option("--rate", sim_opt.rate, "arrival probability (one value or four)")
        ->required();
    sim_cmd->add_option("--horizon", sim_opt.horizon, "simulation length in ticks");
    sim_cmd->add_option("--seed", sim_opt.seed, "64-bit RNG seed");
    sim_cmd->add_option("--t-thr", sim_opt.t_thr, "maximum adaptive green in ticks");
    sim_cmd->add_option("--period", sim_opt.period, "fixed-mode green period (default: t-thr)");
    sim_cmd->add_option("--out", sim_opt.out, "CSV path or - for stdout");

    CompareOptions cmp_opt;
    auto* cmp_cmd = app.add_subcommand("compare", "adaptive vs fixed-period sweep over rates");
    cmp_cmd->add_option("--rates", cmp_opt.rates, "comma-separated arrival probabilities")
        ->required();
    cmp_cmd->add_option("--horizon", cmp_opt.horizon, "simulation length in ticks");
    cmp_cmd->add_option("--seed", cmp_opt.seed, "64-bit RNG seed");
    cmp_cmd->add_option("--t-thr", cmp_opt.t_thr, "maximum adaptive green in ticks");
    cmp_cmd->add_option("--out", cmp_opt.out, "CSV path or - for stdout");

    GraphOptions graph_opt;
    auto* graph_cmd = app.add_subcommand("graph", "export the traffic model as a DOT digraph");
    graph_cmd->add_option("--t-thr", graph_opt.t_thr, "maximum green duration in ticks");
    graph_cmd->add_option("--q-max", graph_opt.q_max, "largest queue draw at a handover");
    graph_cmd->add_option("--variant", graph_opt.variant, "buggy|fixed")
        ->check(CLI::IsMember({"buggy", "fixed"}));
    graph_cmd->add_option("--out", graph_opt.out, "DOT path or - for stdout");
    graph_cmd->add_flag("--force", graph_opt.force, "render even above 5000 states");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (check_cmd->parsed()) return run_check(check_opt);
        if (sim_cmd->parsed()) return run_simulate(sim_opt);
        if (cmp_cmd->parsed()) return run_compare(cmp_opt);
        if (graph_cmd->parsed()) return run_graph(graph_opt);
    } catch (const CapExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCapExceeded;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
