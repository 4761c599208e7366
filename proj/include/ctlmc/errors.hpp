#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ctlmc {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Build hit max_states or max_transitions. Carries the partial counts.
struct CapExceededError : Error {
    CapExceededError(std::uint64_t states, std::uint64_t transitions)
        : Error("state-space cap exceeded: " + std::to_string(states) + " states, " +
                std::to_string(transitions) + " transitions discovered so far"),
          states_seen(states),
          transitions_seen(transitions) {}
    std::uint64_t states_seen;
    std::uint64_t transitions_seen;
};

/// A reachable state has no successors. The message names the offending state.
struct NonTotalError : Error {
    explicit NonTotalError(const std::string& snapshot)
        : Error("transition relation is not total: state {" + snapshot + "} has no successors") {}
};

struct DuplicateAtomError : Error {
    explicit DuplicateAtomError(const std::string& atom)
        : Error("duplicate atom name: " + atom), name(atom) {}
    std::string name;
};

struct UnknownAtomError : Error {
    explicit UnknownAtomError(const std::string& atom)
        : Error("unknown atom: " + atom), name(atom) {}
    std::string name;
};

/// Formula or spec-file parse error with 1-based position.
struct SyntaxError : Error {
    SyntaxError(std::string message, int line_, int column_)
        : Error("syntax error at " + std::to_string(line_) + ":" + std::to_string(column_) +
                ": " + message),
          line(line_),
          column(column_) {}
    int line;
    int column;
};

/// counterexample() was handed a CheckResult that does not match its inputs.
struct ResultMismatchError : Error {
    using Error::Error;
};

struct InvalidConfigError : Error {
    using Error::Error;
};

}  // namespace ctlmc
