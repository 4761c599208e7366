#pragma once

// Test-only oracles, deliberately independent of the library's algorithms:
// CTL semantics via boolean transitive closure (Floyd-Warshall) instead of
// fixpoint iteration, paths and lassos via exhaustive search instead of BFS
// and greatest-fixpoint cores. Only usable on small structures.

#include "ctlmc/formula.hpp"
#include "ctlmc/kripke.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

struct SmallModel {
    std::vector<std::vector<int>> succ;           // total relation expected
    std::vector<int> initial;
    std::map<std::string, std::vector<bool>> labels;

    std::size_t size() const { return succ.size(); }
};

// path[i][j]: a path of >= 1 edges from i to j whose every hop leaves a state
// where `from_ok` holds (the endpoint j is unconstrained).
inline std::vector<std::vector<bool>> closure(const SmallModel& m,
                                              const std::vector<bool>& from_ok) {
    const std::size_t n = m.size();
    std::vector<std::vector<bool>> path(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        if (from_ok[i])
            for (int j : m.succ[i]) path[i][j] = true;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (path[i][k] && from_ok[k] && path[k][j]) path[i][j] = true;
    return path;
}

inline std::vector<bool> eval(const SmallModel& m, const ctlmc::FormulaPtr& f) {
    using ctlmc::Op;
    const std::size_t n = m.size();
    auto all = [n](bool v) { return std::vector<bool>(n, v); };
    auto negate = [&](std::vector<bool> v) {
        for (auto&& b : v) b = !b;
        return v;
    };

    switch (f->op) {
        case Op::True: return all(true);
        case Op::False: return all(false);
        case Op::Atom: {
            auto it = m.labels.find(f->atom);
            if (it == m.labels.end()) throw std::runtime_error("oracle: unknown atom " + f->atom);
            return it->second;
        }
        case Op::Not: return negate(eval(m, f->lhs));
        case Op::And: {
            auto a = eval(m, f->lhs), b = eval(m, f->rhs);
            for (std::size_t i = 0; i < n; ++i) a[i] = a[i] && b[i];
            return a;
        }
        case Op::Or: {
            auto a = eval(m, f->lhs), b = eval(m, f->rhs);
            for (std::size_t i = 0; i < n; ++i) a[i] = a[i] || b[i];
            return a;
        }
        case Op::Implies: {
            auto a = eval(m, f->lhs), b = eval(m, f->rhs);
            for (std::size_t i = 0; i < n; ++i) a[i] = !a[i] || b[i];
            return a;
        }
        case Op::EX: {
            auto a = eval(m, f->lhs);
            std::vector<bool> out(n, false);
            for (std::size_t i = 0; i < n; ++i)
                for (int j : m.succ[i])
                    if (a[j]) out[i] = true;
            return out;
        }
        case Op::AX: {
            auto a = eval(m, f->lhs);
            std::vector<bool> out(n, true);
            for (std::size_t i = 0; i < n; ++i)
                for (int j : m.succ[i])
                    if (!a[j]) out[i] = false;
            return out;
        }
        case Op::EU: {
            // s |= E[f U g] iff g(s), or f(s) and a path through f-states reaches a g-state.
            auto hold = eval(m, f->lhs), goal = eval(m, f->rhs);
            auto path = closure(m, hold);
            std::vector<bool> out(n, false);
            for (std::size_t i = 0; i < n; ++i) {
                if (goal[i]) { out[i] = true; continue; }
                if (!hold[i]) continue;
                for (std::size_t j = 0; j < n; ++j)
                    if (path[i][j] && goal[j]) out[i] = true;
            }
            return out;
        }
        case Op::EG: {
            // s |= EG f iff f(s) and an f-path from s reaches an f-cycle.
            auto hold = eval(m, f->lhs);
            std::vector<bool> inside = hold;
            auto path = closure(m, inside);
            std::vector<bool> on_cycle(n, false);
            for (std::size_t i = 0; i < n; ++i)
                if (inside[i] && path[i][i]) on_cycle[i] = true;
            std::vector<bool> out(n, false);
            for (std::size_t i = 0; i < n; ++i) {
                if (!hold[i]) continue;
                if (on_cycle[i]) { out[i] = true; continue; }
                for (std::size_t j = 0; j < n; ++j)
                    if (path[i][j] && inside[j] && on_cycle[j]) out[i] = true;
            }
            return out;
        }
        case Op::EF: return eval(m, ctlmc::f::eu(ctlmc::f::constant(true), f->lhs));
        case Op::AF: return negate(eval(m, ctlmc::f::eg(ctlmc::f::negation(f->lhs))));
        case Op::AG:
            return negate(eval(m, ctlmc::f::eu(ctlmc::f::constant(true),
                                               ctlmc::f::negation(f->lhs))));
        case Op::AU: {
            auto ng = ctlmc::f::negation(f->rhs);
            auto nf = ctlmc::f::negation(f->lhs);
            auto bad = eval(m, ctlmc::f::eu(ng, ctlmc::f::conjunction(nf, ng)));
            auto stuck = eval(m, ctlmc::f::eg(ng));
            std::vector<bool> out(n, false);
            for (std::size_t i = 0; i < n; ++i) out[i] = !(bad[i] || stuck[i]);
            return out;
        }
    }
    throw std::runtime_error("oracle: unhandled operator");
}

inline bool holds_in_all_initial(const SmallModel& m, const ctlmc::FormulaPtr& f) {
    auto sat = eval(m, f);
    for (int s : m.initial)
        if (!sat[s]) return false;
    return true;
}

// Naive BFS distance between index sets; -1 when unreachable.
inline int bfs_distance(const SmallModel& m, const std::vector<int>& from,
                        const std::vector<bool>& to) {
    std::vector<int> dist(m.size(), -1);
    std::vector<int> queue;
    for (int s : from)
        if (dist[s] == -1) {
            dist[s] = 0;
            queue.push_back(s);
        }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        int s = queue[head];
        if (to[s]) return dist[s];
        for (int t : m.succ[s])
            if (dist[t] == -1) {
                dist[t] = dist[s] + 1;
                queue.push_back(t);
            }
    }
    return -1;
}

// Exhaustive lasso existence: a path from `from` staying in `within` that
// revisits one of its own states. Tries every simple extension.
inline bool lasso_exists(const SmallModel& m, const std::vector<bool>& from,
                         const std::vector<bool>& within) {
    const std::size_t n = m.size();
    std::vector<bool> on_path(n, false);
    std::function<bool(int)> walk = [&](int s) -> bool {
        if (on_path[s]) return true;
        on_path[s] = true;
        for (int t : m.succ[s]) {
            if (!within[t]) continue;
            if (walk(t)) { on_path[s] = false; return true; }
        }
        on_path[s] = false;
        return false;
    };
    for (std::size_t s = 0; s < n; ++s)
        if (from[s] && within[s] && walk(static_cast<int>(s))) return true;
    return false;
}

// --- deterministic random generation -----------------------------------

inline SmallModel random_model(std::mt19937& rng, int max_states = 8) {
    std::uniform_int_distribution<int> size_dist(1, max_states);
    const int n = size_dist(rng);
    SmallModel m;
    m.succ.resize(n);
    std::uniform_int_distribution<int> degree_dist(1, std::min(3, n));
    std::uniform_int_distribution<int> state_dist(0, n - 1);
    for (int s = 0; s < n; ++s) {
        int degree = degree_dist(rng);
        std::vector<bool> used(n, false);
        for (int d = 0; d < degree; ++d) {
            int t = state_dist(rng);
            if (!used[t]) {
                used[t] = true;
                m.succ[s].push_back(t);
            }
        }
        std::sort(m.succ[s].begin(), m.succ[s].end());
    }
    std::bernoulli_distribution flip(0.5);
    for (const char* atom : {"a", "b", "c"}) {
        std::vector<bool> bits(n);
        for (int s = 0; s < n; ++s) bits[s] = flip(rng);
        m.labels[atom] = bits;
    }
    for (int s = 0; s < n; ++s)
        if (flip(rng)) m.initial.push_back(s);
    if (m.initial.empty()) m.initial.push_back(state_dist(rng));
    return m;
}

inline ctlmc::FormulaPtr random_formula(std::mt19937& rng, int depth) {
    using namespace ctlmc::f;
    std::uniform_int_distribution<int> leaf_dist(0, 4);
    if (depth <= 0) {
        switch (leaf_dist(rng)) {
            case 0: return atom("a");
            case 1: return atom("b");
            case 2: return atom("c");
            case 3: return constant(true);
            default: return constant(false);
        }
    }
    std::uniform_int_distribution<int> op_dist(0, 14);
    auto sub = [&] { return random_formula(rng, depth - 1); };
    switch (op_dist(rng)) {
        case 0: return negation(sub());
        case 1: return conjunction(sub(), sub());
        case 2: return disjunction(sub(), sub());
        case 3: return implication(sub(), sub());
        case 4: return ax(sub());
        case 5: return ex(sub());
        case 6: return af(sub());
        case 7: return ef(sub());
        case 8: return ag(sub());
        case 9: return eg(sub());
        case 10: return au(sub(), sub());
        case 11: return eu(sub(), sub());
        default: return random_formula(rng, 0);
    }
}

// Lifts a SmallModel into the library representation.
inline ctlmc::KripkeStructure lift(const SmallModel& m) {
    std::vector<std::vector<ctlmc::StateIndex>> succ(m.size());
    for (std::size_t s = 0; s < m.size(); ++s)
        for (int t : m.succ[s]) succ[s].push_back(static_cast<ctlmc::StateIndex>(t));
    std::vector<ctlmc::StateIndex> initial;
    for (int s : m.initial) initial.push_back(static_cast<ctlmc::StateIndex>(s));
    std::vector<std::pair<std::string, std::vector<ctlmc::StateIndex>>> labels;
    for (const auto& [name, bits] : m.labels) {
        std::vector<ctlmc::StateIndex> states;
        for (std::size_t s = 0; s < bits.size(); ++s)
            if (bits[s]) states.push_back(static_cast<ctlmc::StateIndex>(s));
        labels.emplace_back(name, states);
    }
    std::vector<std::vector<std::string>> snapshots;
    for (std::size_t s = 0; s < m.size(); ++s) snapshots.push_back({std::to_string(s)});
    return ctlmc::KripkeStructure(std::move(succ), std::move(initial), std::move(labels),
                                  {"id"}, std::move(snapshots));
}

}  // namespace oracle
