#include "ctlmc/checker.hpp"
#include "ctlmc/errors.hpp"
#include "ctlmc/sim.hpp"
#include "ctlmc/traffic.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ctlmc;

namespace {

// FormulaPtr is shared_ptr-to-const; a thin value wrapper keeps the holder
// machinery out of the picture.
struct PyFormula {
    FormulaPtr ptr;
};

traffic::Variant variant_from(const std::string& name) {
    if (name == "buggy") return traffic::Variant::Buggy;
    if (name == "fixed") return traffic::Variant::Fixed;
    throw InvalidConfigError("variant must be 'buggy' or 'fixed'");
}

traffic::TrafficParams params_from(int t_thr, int q_max, int wait_cap) {
    traffic::TrafficParams params;
    params.t_thr_ticks = t_thr;
    params.q_max = q_max;
    params.wait_cap = wait_cap;
    params.validate();
    return params;
}

sim::SimConfig sim_config_from(const std::string& mode, const std::vector<double>& rates,
                               std::uint64_t horizon, std::uint64_t seed, int t_thr,
                               int period) {
    sim::SimConfig config;
    if (mode == "adaptive") config.mode = sim::Mode::Adaptive;
    else if (mode == "fixed") config.mode = sim::Mode::FixedPeriod;
    else throw InvalidConfigError("mode must be 'adaptive' or 'fixed'");
    if (rates.size() == 1) config.arrival_prob = {rates[0], rates[0], rates[0], rates[0]};
    else if (rates.size() == 4) config.arrival_prob = {rates[0], rates[1], rates[2], rates[3]};
    else throw InvalidConfigError("rates must hold one value or four");
    config.horizon_ticks = horizon;
    config.seed = seed;
    config.t_thr_ticks = t_thr;
    config.fixed_period_ticks = period;
    return config;
}

py::dict lane_stats_dict(const sim::LaneStats& ls) {
    py::dict d;
    d["arrived"] = ls.vehicles_arrived;
    d["served"] = ls.vehicles_served;
    d["still_queued"] = ls.still_queued;
    d["overflow"] = ls.upstream_overflow;
    d["avg_wait"] = ls.avg_wait_ticks;
    d["max_wait"] = ls.max_wait_ticks;
    d["green_ticks"] = ls.green_ticks;
    d["green_utilization"] = ls.green_utilization;
    return d;
}

}  // namespace

PYBIND11_MODULE(ctlmc, m) {
    m.doc() = "Explicit-state CTL model checking with a built-in adaptive "
              "traffic-signal model and intersection simulator";

    // Base first: translators run newest-first, so the derived ones win.
    auto& base_error = py::register_exception<Error>(m, "CtlmcError");
    py::register_exception<CapExceededError>(m, "CapExceededError", base_error.ptr());
    py::register_exception<SyntaxError>(m, "FormulaSyntaxError", base_error.ptr());
    py::register_exception<UnknownAtomError>(m, "UnknownAtomError", base_error.ptr());
    py::register_exception<InvalidConfigError>(m, "InvalidConfigError", base_error.ptr());

    py::class_<PyFormula>(m, "Formula")
        .def("__str__", [](const PyFormula& f) { return to_string(f.ptr); })
        .def("__repr__",
             [](const PyFormula& f) { return "Formula(\"" + to_string(f.ptr) + "\")"; })
        .def("__eq__",
             [](const PyFormula& a, const PyFormula& b) { return equal(a.ptr, b.ptr); })
        .def("atoms", [](const PyFormula& f) { return atom_names(f.ptr); });

    m.def("parse_formula",
          [](const std::string& text) { return PyFormula{parse_formula(text)}; },
          py::arg("text"));

    py::class_<SpecEntry>(m, "SpecEntry")
        .def(py::init([](const std::string& text, const std::string& name, bool probe) {
                 return SpecEntry{name, text, parse_formula(text), probe};
             }),
             py::arg("text"), py::arg("name") = "", py::arg("probe") = false)
        .def_readonly("name", &SpecEntry::name)
        .def_readonly("source", &SpecEntry::source_text)
        .def_readonly("probe", &SpecEntry::probe)
        .def_property_readonly("formula",
                               [](const SpecEntry& e) { return PyFormula{e.formula}; })
        .def("__repr__", [](const SpecEntry& e) {
            return "SpecEntry(" + (e.name.empty() ? "" : e.name + ": ") + e.source_text + ")";
        });

    m.def("parse_spec_file", &parse_spec_file, py::arg("text"));

    py::class_<Trace>(m, "Trace")
        .def_property_readonly("steps",
                               [](const Trace& t) {
                                   py::list steps;
                                   for (const auto& step : t.steps) {
                                       py::dict values;
                                       for (const auto& [k, v] : step.snapshot)
                                           values[py::str(k)] = v;
                                       py::dict d;
                                       d["state"] = step.state;
                                       d["values"] = values;
                                       steps.append(d);
                                   }
                                   return steps;
                               })
        .def_property_readonly("loop_back",
                               [](const Trace& t) -> py::object {
                                   if (t.loop_back) return py::int_(*t.loop_back);
                                   return py::none();
                               })
        .def_readonly("annotation", &Trace::annotation)
        .def("__len__", [](const Trace& t) { return t.steps.size(); })
        .def("__str__", [](const Trace& t) { return format_trace(t, TraceStyle::Delta); });

    m.def("format_trace",
          [](const Trace& t, const std::string& style) {
              return format_trace(t, style == "full" ? TraceStyle::Full : TraceStyle::Delta);
          },
          py::arg("trace"), py::arg("style") = "delta");

    py::class_<KripkeStructure>(m, "KripkeStructure")
        .def(py::init([](std::vector<std::vector<StateIndex>> successors,
                         std::vector<StateIndex> initial,
                         std::map<std::string, std::vector<StateIndex>> labels,
                         std::vector<std::string> snapshot_names,
                         std::vector<std::vector<std::string>> snapshot_values) {
                 std::vector<std::pair<std::string, std::vector<StateIndex>>> pairs(
                     labels.begin(), labels.end());
                 return KripkeStructure(std::move(successors), std::move(initial),
                                        std::move(pairs), std::move(snapshot_names),
                                        std::move(snapshot_values));
             }),
             py::arg("successors"), py::arg("initial"), py::arg("labels"),
             py::arg("snapshot_names") = std::vector<std::string>{},
             py::arg("snapshot_values") = std::vector<std::vector<std::string>>{})
        .def_property_readonly("state_count", &KripkeStructure::state_count)
        .def_property_readonly("transition_count", &KripkeStructure::transition_count)
        .def_property_readonly("initial",
                               [](const KripkeStructure& ks) { return ks.initial().to_vector(); })
        .def_property_readonly("atom_names", &KripkeStructure::atom_names)
        .def("successors",
             [](const KripkeStructure& ks, StateIndex s) {
                 if (s >= ks.state_count()) throw py::index_error();
                 auto [b, e] = ks.successors(s);
                 return std::vector<StateIndex>(b, e);
             })
        .def("label_states",
             [](const KripkeStructure& ks, const std::string& atom) {
                 return ks.label(atom).to_vector();
             })
        .def("snapshot",
             [](const KripkeStructure& ks, StateIndex s) {
                 if (s >= ks.state_count()) throw py::index_error();
                 py::dict d;
                 for (const auto& [k, v] : ks.snapshot(s)) d[py::str(k)] = v;
                 return d;
             })
        .def("__repr__", [](const KripkeStructure& ks) {
            return "KripkeStructure(states=" + std::to_string(ks.state_count()) +
                   ", transitions=" + std::to_string(ks.transition_count()) + ")";
        });

    m.def("build_traffic",
          [](int t_thr, int q_max, const std::string& variant,
             const std::vector<SpecEntry>& specs, std::uint64_t max_states, int wait_cap) {
              BuildLimits limits;
              limits.max_states = max_states;
              return traffic::build_traffic_structure(params_from(t_thr, q_max, wait_cap),
                                                      variant_from(variant), specs, limits);
          },
          py::arg("t_thr") = 18, py::arg("q_max") = 20, py::arg("variant") = "fixed",
          py::arg("specs") = std::vector<SpecEntry>{},
          py::arg("max_states") = BuildLimits{}.max_states, py::arg("wait_cap") = 0);

    m.def("paper_spec_suite",
          [](int t_thr, int q_max) {
              return traffic::paper_spec_suite(params_from(t_thr, q_max, 0));
          },
          py::arg("t_thr") = 18, py::arg("q_max") = 20);

    m.def("green_ticks",
          [](int n, int t_thr, const std::string& variant) {
              return traffic::green_ticks(n, params_from(t_thr, std::max(0, n), 0),
                                          variant_from(variant));
          },
          py::arg("n"), py::arg("t_thr") = 18, py::arg("variant") = "fixed");

    py::class_<CheckResult>(m, "CheckResult")
        .def_readonly("holds", &CheckResult::holds)
        .def("sat_states", [](const CheckResult& r) { return r.sat.to_vector(); })
        .def("__bool__", [](const CheckResult& r) { return r.holds; })
        .def("__repr__", [](const CheckResult& r) {
            return std::string("CheckResult(holds=") + (r.holds ? "True" : "False") + ")";
        });

    m.def("check",
          [](const KripkeStructure& ks, const SpecEntry& spec) { return check(ks, spec); },
          py::arg("ks"), py::arg("spec"));
    m.def("check",
          [](const KripkeStructure& ks, const std::string& formula_text) {
              return check(ks, SpecEntry{"", formula_text, parse_formula(formula_text), false});
          },
          py::arg("ks"), py::arg("formula"));

    m.def("sat_states",
          [](const KripkeStructure& ks, const std::string& formula_text) {
              return sat_set(ks, parse_formula(formula_text)).to_vector();
          },
          py::arg("ks"), py::arg("formula"));

    m.def("counterexample",
          [](const KripkeStructure& ks, const SpecEntry& spec, const CheckResult& result)
              -> std::optional<Trace> { return counterexample(ks, spec, result); },
          py::arg("ks"), py::arg("spec"), py::arg("result"));
    m.def("counterexample",
          [](const KripkeStructure& ks, const std::string& formula_text)
              -> std::optional<Trace> {
              SpecEntry spec{"", formula_text, parse_formula(formula_text), false};
              return counterexample(ks, spec, check(ks, spec));
          },
          py::arg("ks"), py::arg("formula"));

    m.def("export_dot", &export_dot, py::arg("ks"),
          py::arg("annotate") = std::vector<std::string>{});

    m.def("run_simulation",
          [](const std::string& mode, const std::vector<double>& rates, std::uint64_t horizon,
             std::uint64_t seed, int t_thr, int period) {
              return sim::run_simulation(
                  sim_config_from(mode, rates, horizon, seed, t_thr, period));
          },
          py::arg("mode") = "adaptive", py::arg("rates") = std::vector<double>{0.1},
          py::arg("horizon") = 100'000, py::arg("seed") = 1, py::arg("t_thr") = 18,
          py::arg("period") = 0);

    py::class_<sim::SimStats>(m, "SimStats")
        .def_property_readonly("total",
                               [](const sim::SimStats& s) { return lane_stats_dict(s.total); })
        .def_property_readonly("lanes",
                               [](const sim::SimStats& s) {
                                   py::list lanes;
                                   for (const auto& lane : s.lane)
                                       lanes.append(lane_stats_dict(lane));
                                   return lanes;
                               })
        .def_readonly("switch_log", &sim::SimStats::switch_log)
        .def("csv", [](const sim::SimStats& s) { return sim::stats_csv(s); })
        .def("__repr__", [](const sim::SimStats& s) {
            return "SimStats(served=" + std::to_string(s.total.vehicles_served) +
                   ", avg_wait=" + std::to_string(s.total.avg_wait_ticks) + ")";
        });

    m.def("compare_modes",
          [](const std::vector<double>& rates, std::uint64_t horizon, std::uint64_t seed,
             int t_thr) {
              sim::SimConfig base;
              base.horizon_ticks = horizon;
              base.seed = seed;
              base.t_thr_ticks = t_thr;
              py::list out;
              for (const auto& row : sim::compare_modes(base, rates)) {
                  py::dict d;
                  d["rate"] = row.rate;
                  d["adaptive_avg_wait"] = row.adaptive_avg_wait;
                  d["fixed_avg_wait"] = row.fixed_avg_wait;
                  d["adaptive_max_wait"] = row.adaptive_max_wait;
                  d["fixed_max_wait"] = row.fixed_max_wait;
                  out.append(d);
              }
              return out;
          },
          py::arg("rates"), py::arg("horizon") = 100'000, py::arg("seed") = 1,
          py::arg("t_thr") = 18);
}
