#include "ctlmc/checker.hpp"

#include "ctlmc/errors.hpp"

#include <sstream>

namespace ctlmc {

namespace {

StateSet eval_enf(const KripkeStructure& ks, const FormulaPtr& f) {
    switch (f->op) {
        case Op::True: return ks.full_set();
        case Op::Atom: return ks.label(f->atom);
        case Op::Not: return eval_enf(ks, f->lhs).complement();
        case Op::And: return eval_enf(ks, f->lhs) & eval_enf(ks, f->rhs);
        case Op::EX: return pre_exists(ks, eval_enf(ks, f->lhs));
        case Op::EU: {
            // Least fixpoint: Z = g | (f & pre(Z)).
            StateSet hold = eval_enf(ks, f->lhs);
            StateSet sat = eval_enf(ks, f->rhs);
            for (;;) {
                StateSet grown = sat | (hold & pre_exists(ks, sat));
                if (grown == sat) return sat;
                sat = std::move(grown);
            }
        }
        case Op::EG: {
            // Greatest fixpoint: Z = f & pre(Z).
            StateSet sat = eval_enf(ks, f->lhs);
            for (;;) {
                StateSet shrunk = sat & pre_exists(ks, sat);
                if (shrunk == sat) return sat;
                sat = std::move(shrunk);
            }
        }
        default:
            throw Error("internal: non-ENF operator reached the fixpoint evaluator");
    }
}

}  // namespace

StateSet sat_enf(const KripkeStructure& ks, const NormalFormula& f) {
    return eval_enf(ks, f.root());
}

StateSet sat_set(const KripkeStructure& ks, const FormulaPtr& f) {
    return sat_enf(ks, to_enf(f));
}

CheckResult check(const KripkeStructure& ks, const SpecEntry& spec) {
    StateSet sat = sat_set(ks, spec.formula);
    bool holds = ks.initial().is_subset_of(sat);
    return CheckResult{holds, std::move(sat), spec.formula};
}

namespace {

constexpr std::uint64_t kInfiniteDepth = static_cast<std::uint64_t>(-1);

// Length of the longest run that stays inside `region` starting at each member
// (1 for a member with no region successor); kInfiniteDepth where a cycle is
// reachable. Non-members get 0. Linear: the finite part of the region is a DAG.
std::vector<std::uint64_t> region_depths(const KripkeStructure& ks, const StateSet& region) {
    const std::size_t n = ks.state_count();
    std::vector<std::uint64_t> depth(n, 0);

    StateSet cyclic = region;  // gfp: members with an infinite run inside the region
    for (;;) {
        StateSet refined = cyclic & pre_exists(ks, cyclic);
        if (refined == cyclic) break;
        cyclic = std::move(refined);
    }
    cyclic.for_each([&](StateIndex s) { depth[s] = kInfiniteDepth; });

    // Reverse-topological relaxation over the rest (Kahn on outgoing edges).
    std::vector<std::uint32_t> unresolved(n, 0);
    std::vector<StateIndex> ready;
    StateSet finite = region - cyclic;
    finite.for_each([&](StateIndex s) {
        auto [b, e] = ks.successors(s);
        std::uint32_t count = 0;
        for (; b != e; ++b)
            if (finite.contains(*b)) ++count;
        unresolved[s] = count;
        if (count == 0) ready.push_back(s);
    });
    for (std::size_t head = 0; head < ready.size(); ++head) {
        StateIndex s = ready[head];
        std::uint64_t best = 0;
        auto [b, e] = ks.successors(s);
        for (; b != e; ++b)
            if (finite.contains(*b)) best = std::max(best, depth[*b]);
        depth[s] = best + 1;
        auto [pb, pe] = ks.predecessors(s);
        for (; pb != pe; ++pb)
            if (finite.contains(*pb) && --unresolved[*pb] == 0) ready.push_back(*pb);
    }
    return depth;
}

// Shortest path from `from` into `targets`, preferring — among the targets at
// the minimal distance — the one whose violating run continues longest. This
// makes an AG counterexample end at the peak of the violation rather than on
// a branch where it immediately stops.
std::optional<Trace> path_to_deepest(const KripkeStructure& ks, const StateSet& from,
                                     const StateSet& targets,
                                     const std::vector<std::uint64_t>& depth) {
    const std::size_t n = ks.state_count();
    std::vector<char> seen(n, 0);
    std::vector<StateIndex> frontier = from.to_vector();
    for (StateIndex s : frontier) seen[s] = 1;

    while (!frontier.empty()) {
        StateIndex best = static_cast<StateIndex>(n);
        for (StateIndex s : frontier) {
            if (!targets.contains(s)) continue;
            if (best == n || depth[s] > depth[best]) best = s;  // ascending scan: ties stay low
        }
        if (best != n) {
            StateSet goal(n);
            goal.insert(best);
            return shortest_path(ks, from, goal);
        }
        std::vector<StateIndex> next;
        for (StateIndex s : frontier) {
            auto [b, e] = ks.successors(s);
            for (; b != e; ++b)
                if (!seen[*b]) {
                    seen[*b] = 1;
                    next.push_back(*b);
                }
        }
        std::sort(next.begin(), next.end());
        frontier = std::move(next);
    }
    return std::nullopt;
}

// Extends the trace while a violating successor exists, following the deepest
// remaining run. Never revisits a state, so it terminates.
void extend_through(const KripkeStructure& ks, const StateSet& violating,
                    const std::vector<std::uint64_t>& depth, Trace& trace) {
    StateSet on_trace(ks.state_count());
    for (const auto& step : trace.steps) on_trace.insert(step.state);
    for (;;) {
        StateIndex last = trace.steps.back().state;
        auto [b, e] = ks.successors(last);
        StateIndex next = ks.state_count();
        for (; b != e; ++b) {
            if (!violating.contains(*b) || on_trace.contains(*b)) continue;
            if (next == ks.state_count() || depth[*b] > depth[next]) next = *b;
        }
        if (next == ks.state_count()) return;
        on_trace.insert(next);
        trace.steps.push_back({next, ks.snapshot(next)});
    }
}

Trace single_state_trace(const KripkeStructure& ks, StateIndex s) {
    Trace trace;
    trace.steps.push_back({s, ks.snapshot(s)});
    return trace;
}

}  // namespace

std::optional<Trace> counterexample(const KripkeStructure& ks, const SpecEntry& spec,
                                    const CheckResult& result) {
    if (!equal(result.formula, spec.formula))
        throw ResultMismatchError("check result does not match the spec formula");
    if (result.sat.universe() != ks.state_count())
        throw ResultMismatchError("check result does not match the structure");
    if (result.holds != ks.initial().is_subset_of(result.sat))
        throw ResultMismatchError("check result verdict is inconsistent");

    if (result.holds) return std::nullopt;

    const FormulaPtr& formula = spec.formula;
    std::optional<Trace> trace;
    if (formula->op == Op::AG) {
        StateSet violating = sat_set(ks, f::negation(formula->lhs));
        std::vector<std::uint64_t> depth = region_depths(ks, violating);
        trace = path_to_deepest(ks, ks.initial(), violating, depth);
        if (trace) extend_through(ks, violating, depth, *trace);
    } else if (formula->op == Op::AF) {
        StateSet violating = sat_set(ks, f::negation(formula->lhs));
        trace = find_lasso(ks, ks.initial(), violating);
    } else {
        StateSet bad = ks.initial() - result.sat;
        trace = single_state_trace(ks, static_cast<StateIndex>(bad.first()));
        if (contains_temporal(formula))
            trace->annotation = "no path-style counterexample for this formula shape; "
                                "showing a violating initial state";
    }
    if (!trace) throw Error("internal: failed spec produced no counterexample");

    std::string problem = explain_invalid_counterexample(ks, spec, *trace);
    if (!problem.empty()) throw Error("internal: invalid counterexample: " + problem);
    return trace;
}

std::string format_trace(const Trace& trace, TraceStyle style) {
    std::ostringstream os;
    if (!trace.annotation.empty()) os << "-- " << trace.annotation << " --\n";
    Snapshot previous;
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        if (trace.loop_back && *trace.loop_back == i) os << "-- loop starts at step " << i
                                                         << " --\n";
        os << "Step " << i << ":\n";
        const Snapshot& snap = trace.steps[i].snapshot;
        for (std::size_t v = 0; v < snap.size(); ++v) {
            if (style == TraceStyle::Delta && i > 0 && v < previous.size() &&
                previous[v] == snap[v])
                continue;
            os << "  " << snap[v].first << " = " << snap[v].second << "\n";
        }
        previous = snap;
    }
    return os.str();
}

std::string explain_invalid_counterexample(const KripkeStructure& ks, const SpecEntry& spec,
                                           const Trace& trace) {
    if (trace.steps.empty()) return "trace is empty";
    if (!ks.initial().contains(trace.steps.front().state))
        return "trace does not start in an initial state";
    for (std::size_t i = 0; i + 1 < trace.steps.size(); ++i) {
        if (!ks.has_edge(trace.steps[i].state, trace.steps[i + 1].state))
            return "steps " + std::to_string(i) + " -> " + std::to_string(i + 1) +
                   " are not related by the transition relation";
    }
    if (trace.loop_back) {
        if (*trace.loop_back >= trace.steps.size()) return "loop_back is out of range";
        if (!ks.has_edge(trace.steps.back().state, trace.steps[*trace.loop_back].state))
            return "lasso does not close: no transition from the last step to the loop entry";
    }

    const FormulaPtr& formula = spec.formula;
    if (formula->op == Op::AG) {
        StateSet inner = sat_set(ks, formula->lhs);
        if (inner.contains(trace.steps.back().state))
            return "final state does not violate the AG operand";
    } else if (formula->op == Op::AF) {
        if (!trace.loop_back) return "AF counterexample must be a lasso";
        StateSet inner = sat_set(ks, formula->lhs);
        for (std::size_t i = 0; i < trace.steps.size(); ++i)
            if (inner.contains(trace.steps[i].state))
                return "step " + std::to_string(i) + " satisfies the AF operand, so the lasso "
                       "does not witness EG of its negation";
    } else {
        StateSet sat = sat_set(ks, formula);
        if (sat.contains(trace.steps.front().state))
            return "the shown initial state does not violate the formula";
    }
    return "";
}

}  // namespace ctlmc
