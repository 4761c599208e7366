#pragma once

#include "ctlmc/kripke.hpp"
#include "ctlmc/parser.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace ctlmc::traffic {

/// Counter convention of the green countdown. Buggy initializes the counter to
/// the full weight (one tick too many: a weight of w yields w+1 green ticks);
/// Fixed initializes it to weight-1.
enum class Variant { Buggy, Fixed };

struct TrafficParams {
    int t_thr_ticks = 18;  // maximum green duration granted to any signal
    int t_v = 1;           // ticks for one vehicle to cross; the model fixes this at 1
    int q_max = 20;        // largest nondeterministic queue draw at a handover
    int wait_cap = 0;      // wait-counter saturation bound; 0 = default below

    /// Default saturation bound: past the largest wait either variant can
    /// produce, so saturation never masks the overshoot.
    int effective_wait_cap() const {
        return wait_cap > 0 ? wait_cap : 3 * (t_thr_ticks + 1) + 3;
    }

    /// Throws InvalidConfigError when a field is out of contract.
    void validate() const;

    static TrafficParams paper_scale() { return {18, 1, 20, 0}; }
    static TrafficParams ci_scale() { return {5, 1, 7, 0}; }
};

/// One controller state: whose turn it is, the remaining green ticks after the
/// current one, and per-signal wait counters (ticks since that signal was last
/// green; the green signal's wait is 0).
struct ControllerState {
    std::uint8_t turn = 0;  // 0=NORTH 1=WEST 2=SOUTH 3=EAST
    std::uint16_t counter = 0;
    std::array<std::uint16_t, 4> wait{};

    bool operator==(const ControllerState&) const = default;
};

/// Green allocation for one scheduling decision.
struct GreenPlan {
    int n = 0;               // vehicles counted in the scheduled lane
    int t_cal = 0;           // n * t_v
    int duration_ticks = 0;  // granted green ticks, >= 1
};

/// Granted green duration for a lane with n waiting vehicles: the weight is
/// min(n * t_v, T_thr), with a 1-tick minimum so an empty lane cannot stall
/// the rotation. Buggy grants weight+1 ticks (its counter starts at the full
/// weight), Fixed grants exactly max(1, weight).
int green_ticks(int n, const TrafficParams& params, Variant variant);

/// Counter value a fresh green starts from; the green lasts counter+1 ticks.
int initial_counter(int n, const TrafficParams& params, Variant variant);

GreenPlan plan_green(int n, const TrafficParams& params, Variant variant);

/// One state per distinct initial counter: turn NORTH, all waits 0, counter
/// drawn from green_ticks over n = 0..q_max.
std::vector<ControllerState> initial_states(const TrafficParams& params, Variant variant);

/// counter > 0: the single countdown successor. counter = 0: one handover
/// successor per distinct queue draw n in 0..q_max, with the turn advanced.
/// Red waits increment by 1, saturating at the wait cap.
std::vector<ControllerState> successors(const ControllerState& s, const TrafficParams& params,
                                        Variant variant);

/// The atom vocabulary the built-in spec suite needs: per signal, colour
/// green/red, counter=0, wait<=3*T_thr, wait=3*T_thr and wait=3*(T_thr+1).
std::vector<AtomSpec<ControllerState>> atom_catalog(const TrafficParams& params);

/// Additional comparison atoms ("light2.wait<=10", "light0.colour!=green", ...)
/// mentioned by the given specs and resolvable against this model's variables.
/// Atoms already in `existing` or not of that shape are skipped.
std::vector<AtomSpec<ControllerState>> atoms_for_specs(
    const std::vector<SpecEntry>& specs, const TrafficParams& params,
    const std::vector<AtomSpec<ControllerState>>& existing);

/// The built-in 20-entry suite: 4 round-robin specs, 4 liveness specs and
/// 4 max-wait specs (bound 3*T_thr), plus 4 AG-variants of the round-robin
/// specs and 4 overshoot probes EF(wait = 3*(T_thr+1)). Probes are marked
/// informational: their verdict is reported but never fails a run.
std::vector<SpecEntry> paper_spec_suite(const TrafficParams& params);

/// Model program driving build_structure.
class TrafficModel {
public:
    using State = ControllerState;

    TrafficModel(TrafficParams params, Variant variant)
        : params_(params), variant_(variant) {
        params_.validate();
    }

    const TrafficParams& params() const { return params_; }
    Variant variant() const { return variant_; }

    std::vector<State> initial_states() const {
        return traffic::initial_states(params_, variant_);
    }
    std::vector<State> successors(const State& s) const {
        return traffic::successors(s, params_, variant_);
    }
    std::uint64_t encode(const State& s) const;
    std::vector<std::string> snapshot_names() const;
    std::vector<std::string> snapshot_values(const State& s) const;

private:
    TrafficParams params_;
    Variant variant_;
};

/// Builds the reachable structure with the catalog atoms plus whatever the
/// given specs mention.
KripkeStructure build_traffic_structure(const TrafficParams& params, Variant variant,
                                        const std::vector<SpecEntry>& specs = {},
                                        const BuildLimits& limits = {});

inline const char* variant_name(Variant v) { return v == Variant::Buggy ? "buggy" : "fixed"; }

}  // namespace ctlmc::traffic
