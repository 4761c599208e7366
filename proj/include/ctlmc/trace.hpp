#pragma once

#include "ctlmc/state_set.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ctlmc {

/// Ordered (variable, value) pairs describing one state, captured at build time.
using Snapshot = std::vector<std::pair<std::string, std::string>>;

/// A finite path of state snapshots. When loop_back is set the path is a lasso:
/// the last step has a transition back to steps[*loop_back].
struct Trace {
    struct Step {
        StateIndex state;
        Snapshot snapshot;
    };

    std::vector<Step> steps;
    std::optional<std::size_t> loop_back;
    /// Non-empty when the trace is only a stand-in (no path-style counterexample
    /// exists for the checked formula shape).
    std::string annotation;

    std::size_t size() const { return steps.size(); }
};

}  // namespace ctlmc
