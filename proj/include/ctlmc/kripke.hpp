#pragma once

#include "ctlmc/errors.hpp"
#include "ctlmc/state_set.hpp"
#include "ctlmc/trace.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ctlmc {

/// A named boolean observation over the model's structured state.
/// Predicates must be deterministic; names must be unique within a build.
template <typename State>
struct AtomSpec {
    std::string name;
    std::function<bool(const State&)> predicate;
};

struct BuildLimits {
    std::uint64_t max_states = 10'000'000;
    std::uint64_t max_transitions = 100'000'000;
};

/// Finite Kripke structure: total transition relation, initial states,
/// per-atom labelings and per-state display snapshots. Immutable after
/// construction and safe to share across threads.
class KripkeStructure {
public:
    /// Explicit construction from adjacency lists. Validates totality, index
    /// bounds, nonempty initial set and atom-name uniqueness.
    KripkeStructure(std::vector<std::vector<StateIndex>> successors,
                    std::vector<StateIndex> initial,
                    std::vector<std::pair<std::string, std::vector<StateIndex>>> labels,
                    std::vector<std::string> snapshot_names = {},
                    std::vector<std::vector<std::string>> snapshot_values = {});

    std::size_t state_count() const { return state_count_; }
    std::uint64_t transition_count() const { return fwd_targets_.size(); }

    const StateSet& initial() const { return initial_; }

    /// Successor indices of s, ascending.
    std::pair<const StateIndex*, const StateIndex*> successors(StateIndex s) const {
        return {fwd_targets_.data() + fwd_offsets_[s], fwd_targets_.data() + fwd_offsets_[s + 1]};
    }
    /// Predecessor indices of s, ascending (exact transpose of successors).
    std::pair<const StateIndex*, const StateIndex*> predecessors(StateIndex s) const {
        return {bwd_targets_.data() + bwd_offsets_[s], bwd_targets_.data() + bwd_offsets_[s + 1]};
    }

    bool has_edge(StateIndex from, StateIndex to) const {
        auto [b, e] = successors(from);
        return std::binary_search(b, e, to);
    }

    const std::vector<std::string>& atom_names() const { return atom_names_; }
    bool has_atom(const std::string& name) const { return atom_index_.count(name) != 0; }
    /// Label set of an atom. Throws UnknownAtomError.
    const StateSet& label(const std::string& name) const;

    const std::vector<std::string>& snapshot_names() const { return snapshot_names_; }
    const std::string& snapshot_value(StateIndex s, std::size_t var) const {
        return pool_[snapshot_values_[static_cast<std::size_t>(s) * snapshot_names_.size() + var]];
    }
    Snapshot snapshot(StateIndex s) const;
    /// One-line "name=value, ..." rendering, used in error messages and DOT labels.
    std::string snapshot_text(StateIndex s) const;

    StateSet empty_set() const { return StateSet(state_count_); }
    StateSet full_set() const { return StateSet::full(state_count_); }

private:
    std::size_t state_count_ = 0;
    std::vector<std::size_t> fwd_offsets_;
    std::vector<StateIndex> fwd_targets_;
    std::vector<std::size_t> bwd_offsets_;
    std::vector<StateIndex> bwd_targets_;
    StateSet initial_;
    std::vector<std::string> atom_names_;
    std::unordered_map<std::string, std::size_t> atom_index_;
    std::vector<StateSet> labels_;
    std::vector<std::string> snapshot_names_;
    std::vector<std::string> pool_;  // interned snapshot values
    std::unordered_map<std::string, std::uint32_t> pool_index_;
    std::vector<std::uint32_t> snapshot_values_;  // state_count x snapshot_names
};

/// { s | some successor of s is in target }.
StateSet pre_exists(const KripkeStructure& ks, const StateSet& target);

/// BFS-shortest path from any `from` state to any `to` state. Ties are broken
/// by lowest state index at each BFS layer, so results are deterministic.
std::optional<Trace> shortest_path(const KripkeStructure& ks, const StateSet& from,
                                   const StateSet& to);

/// A path starting in `from`, staying inside `within`, ending in a cycle
/// entirely inside `within` (loop_back set). Deterministic tie-breaking.
std::optional<Trace> find_lasso(const KripkeStructure& ks, const StateSet& from,
                                const StateSet& within);

/// DOT digraph with snapshot variables (and the requested atoms) in node
/// labels; initial states drawn with a double border.
std::string export_dot(const KripkeStructure& ks, const std::vector<std::string>& annotate = {});

namespace detail {

// Assembles a KripkeStructure from build-time rows; implemented in kripke.cpp
// so the template above stays free of construction details.
KripkeStructure assemble(std::vector<std::vector<StateIndex>>&& adjacency,
                         std::vector<StateIndex>&& initial,
                         std::vector<std::string>&& atom_names,
                         std::vector<std::vector<bool>>&& label_bits,
                         std::vector<std::string> snapshot_names,
                         std::vector<std::vector<std::string>>&& snapshot_rows);

}  // namespace detail

/// Materializes the reachable fragment of a model program by breadth-first
/// search. Indices are assigned in discovery order with successors expanded in
/// sorted-encoding order, so builds are bit-reproducible.
///
/// Model requirements:
///   using State = ...;
///   std::vector<State> initial_states() const;
///   std::vector<State> successors(const State&) const;   // empty => NonTotalError
///   Key  encode(const State&) const;                     // injective; <, ==, std::hash
///   std::vector<std::string> snapshot_names() const;
///   std::vector<std::string> snapshot_values(const State&) const;
template <typename Model>
KripkeStructure build_structure(const Model& model,
                                const std::vector<AtomSpec<typename Model::State>>& atoms,
                                const BuildLimits& limits = {}) {
    using State = typename Model::State;
    using Key = decltype(model.encode(std::declval<const State&>()));

    std::vector<std::string> atom_names;
    for (const auto& a : atoms) {
        if (std::find(atom_names.begin(), atom_names.end(), a.name) != atom_names.end())
            throw DuplicateAtomError(a.name);
        atom_names.push_back(a.name);
    }

    std::vector<State> roots = model.initial_states();
    if (roots.empty()) throw InvalidConfigError("model has no initial states");

    std::unordered_map<Key, StateIndex> index_of;
    std::vector<State> discovered;  // BFS order, aligned with indices
    std::vector<std::vector<StateIndex>> adjacency;
    std::vector<std::vector<bool>> label_bits(atoms.size());
    std::vector<std::vector<std::string>> snapshot_rows;
    std::vector<StateIndex> initial;
    std::uint64_t transitions = 0;

    auto materialize = [&](const State& s, const Key& k) -> StateIndex {
        auto it = index_of.find(k);
        if (it != index_of.end()) return it->second;
        if (index_of.size() >= limits.max_states)
            throw CapExceededError(index_of.size(), transitions);
        auto idx = static_cast<StateIndex>(index_of.size());
        index_of.emplace(k, idx);
        discovered.push_back(s);
        adjacency.emplace_back();
        snapshot_rows.push_back(model.snapshot_values(s));
        for (std::size_t a = 0; a < atoms.size(); ++a)
            label_bits[a].push_back(atoms[a].predicate(s));
        return idx;
    };

    auto sort_by_key = [](std::vector<std::pair<Key, State>>& keyed) {
        std::sort(keyed.begin(), keyed.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        keyed.erase(std::unique(keyed.begin(), keyed.end(),
                                [](const auto& a, const auto& b) { return a.first == b.first; }),
                    keyed.end());
    };

    {
        std::vector<std::pair<Key, State>> keyed;
        keyed.reserve(roots.size());
        for (auto& s : roots) keyed.emplace_back(model.encode(s), std::move(s));
        sort_by_key(keyed);
        for (const auto& [k, s] : keyed) initial.push_back(materialize(s, k));
    }

    for (StateIndex cur = 0; cur < discovered.size(); ++cur) {
        // `discovered` grows while we scan it; copy the state out first.
        State state = discovered[cur];
        std::vector<State> succ = model.successors(state);
        if (succ.empty()) {
            std::string text;
            auto names = model.snapshot_names();
            auto values = model.snapshot_values(state);
            for (std::size_t i = 0; i < names.size(); ++i)
                text += (i ? ", " : "") + names[i] + "=" + values[i];
            throw NonTotalError(text);
        }
        std::vector<std::pair<Key, State>> keyed;
        keyed.reserve(succ.size());
        for (auto& s : succ) keyed.emplace_back(model.encode(s), std::move(s));
        sort_by_key(keyed);

        std::vector<StateIndex> row;  // adjacency may reallocate inside materialize
        row.reserve(keyed.size());
        for (const auto& [k, s] : keyed) {
            if (++transitions > limits.max_transitions)
                throw CapExceededError(index_of.size(), transitions);
            row.push_back(materialize(s, k));
        }
        std::sort(row.begin(), row.end());
        adjacency[cur] = std::move(row);
    }

    return detail::assemble(std::move(adjacency), std::move(initial), std::move(atom_names),
                            std::move(label_bits), model.snapshot_names(),
                            std::move(snapshot_rows));
}

}  // namespace ctlmc
