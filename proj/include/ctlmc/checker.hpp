#pragma once

#include "ctlmc/formula.hpp"
#include "ctlmc/kripke.hpp"
#include "ctlmc/parser.hpp"
#include "ctlmc/trace.hpp"

#include <optional>
#include <string>

namespace ctlmc {

struct CheckResult {
    bool holds;  // every initial state satisfies the formula
    StateSet sat;
    FormulaPtr formula;
};

/// Exact satisfaction set of `f` under standard CTL semantics. EU is computed
/// as a least fixpoint, EG as a greatest fixpoint; both terminate within
/// state_count iterations. Throws UnknownAtomError for unlabeled atoms.
StateSet sat_set(const KripkeStructure& ks, const FormulaPtr& f);

/// Satisfaction set of an already-normalized formula.
StateSet sat_enf(const KripkeStructure& ks, const NormalFormula& f);

CheckResult check(const KripkeStructure& ks, const SpecEntry& spec);

/// Counterexample for a failed check, or nullopt when the spec holds.
///   AG f   -> shortest path from an initial state into sat(!f), landing on —
///             and then extended along — the longest-lived violating run, so
///             the trace shows the violation at its full extent;
///   AF f   -> lasso inside sat(!f), witnessing EG !f;
///   propositional -> the length-1 trace of a violating initial state;
///   anything else -> a length-1 trace annotated "no path-style counterexample".
/// Throws ResultMismatchError when `result` was not produced by check() on the
/// same structure and spec.
std::optional<Trace> counterexample(const KripkeStructure& ks, const SpecEntry& spec,
                                    const CheckResult& result);

enum class TraceStyle { Full, Delta };

/// NuSMV-like rendering: numbered steps; Full prints every variable, Delta
/// prints only the variables that changed since the previous step. A lasso is
/// announced with "-- loop starts at step k --" before the loop entry.
std::string format_trace(const Trace& trace, TraceStyle style);

/// Machine-checks a counterexample against the structure and the spec: steps
/// start in an initial state and follow the transition relation, the lasso (if
/// any) closes, and the final state actually violates what the trace claims to
/// refute. Returns an error description, or empty when the trace is valid.
std::string explain_invalid_counterexample(const KripkeStructure& ks, const SpecEntry& spec,
                                           const Trace& trace);

}  // namespace ctlmc
