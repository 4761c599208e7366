#include "ctlmc/kripke.hpp"

#include <sstream>

namespace ctlmc {

namespace {

std::string snapshot_text_of(const std::vector<std::string>& names,
                             const std::vector<std::string>& values) {
    std::string text;
    for (std::size_t i = 0; i < names.size() && i < values.size(); ++i)
        text += (i ? ", " : "") + names[i] + "=" + values[i];
    return text;
}

void build_csr(const std::vector<std::vector<StateIndex>>& rows, std::size_t n,
               std::vector<std::size_t>& offsets, std::vector<StateIndex>& targets) {
    offsets.assign(n + 1, 0);
    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        offsets[i] = total;
        total += rows[i].size();
    }
    offsets[n] = total;
    targets.reserve(total);
    for (const auto& row : rows) targets.insert(targets.end(), row.begin(), row.end());
}

}  // namespace

KripkeStructure::KripkeStructure(std::vector<std::vector<StateIndex>> successors,
                                 std::vector<StateIndex> initial,
                                 std::vector<std::pair<std::string, std::vector<StateIndex>>> labels,
                                 std::vector<std::string> snapshot_names,
                                 std::vector<std::vector<std::string>> snapshot_values) {
    state_count_ = successors.size();
    if (state_count_ == 0) throw InvalidConfigError("a Kripke structure needs at least one state");

    std::vector<std::vector<StateIndex>> backward(state_count_);
    for (std::size_t s = 0; s < state_count_; ++s) {
        auto& row = successors[s];
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        if (row.empty()) {
            throw NonTotalError(snapshot_values.size() == state_count_
                                    ? snapshot_text_of(snapshot_names, snapshot_values[s])
                                    : "state " + std::to_string(s));
        }
        for (StateIndex t : row) {
            if (t >= state_count_)
                throw InvalidConfigError("transition target " + std::to_string(t) +
                                         " out of range");
            backward[t].push_back(static_cast<StateIndex>(s));
        }
    }

    build_csr(successors, state_count_, fwd_offsets_, fwd_targets_);
    build_csr(backward, state_count_, bwd_offsets_, bwd_targets_);

    if (initial.empty()) throw InvalidConfigError("initial state set is empty");
    initial_ = StateSet(state_count_);
    for (StateIndex s : initial) {
        if (s >= state_count_)
            throw InvalidConfigError("initial state " + std::to_string(s) + " out of range");
        initial_.insert(s);
    }

    for (auto& [name, states] : labels) {
        if (atom_index_.count(name)) throw DuplicateAtomError(name);
        atom_index_.emplace(name, atom_names_.size());
        atom_names_.push_back(name);
        StateSet set(state_count_);
        for (StateIndex s : states) {
            if (s >= state_count_)
                throw InvalidConfigError("labeled state " + std::to_string(s) + " out of range");
            set.insert(s);
        }
        labels_.push_back(std::move(set));
    }

    snapshot_names_ = std::move(snapshot_names);
    if (!snapshot_names_.empty()) {
        if (snapshot_values.size() != state_count_)
            throw InvalidConfigError("snapshot rows do not match state count");
        snapshot_values_.reserve(state_count_ * snapshot_names_.size());
        for (const auto& row : snapshot_values) {
            if (row.size() != snapshot_names_.size())
                throw InvalidConfigError("snapshot row width does not match variable names");
            for (const auto& value : row) {
                auto [it, fresh] = pool_index_.try_emplace(
                    value, static_cast<std::uint32_t>(pool_.size()));
                if (fresh) pool_.push_back(value);
                snapshot_values_.push_back(it->second);
            }
        }
    }
}

const StateSet& KripkeStructure::label(const std::string& name) const {
    auto it = atom_index_.find(name);
    if (it == atom_index_.end()) throw UnknownAtomError(name);
    return labels_[it->second];
}

Snapshot KripkeStructure::snapshot(StateIndex s) const {
    Snapshot snap;
    snap.reserve(snapshot_names_.size());
    for (std::size_t v = 0; v < snapshot_names_.size(); ++v)
        snap.emplace_back(snapshot_names_[v], snapshot_value(s, v));
    return snap;
}

std::string KripkeStructure::snapshot_text(StateIndex s) const {
    std::string text;
    for (std::size_t v = 0; v < snapshot_names_.size(); ++v)
        text += (v ? ", " : "") + snapshot_names_[v] + "=" + snapshot_value(s, v);
    if (text.empty()) text = "state " + std::to_string(s);
    return text;
}

StateSet pre_exists(const KripkeStructure& ks, const StateSet& target) {
    StateSet result(ks.state_count());
    target.for_each([&](StateIndex t) {
        auto [b, e] = ks.predecessors(t);
        for (; b != e; ++b) result.insert(*b);
    });
    return result;
}

namespace {

Trace trace_from_states(const KripkeStructure& ks, const std::vector<StateIndex>& states) {
    Trace trace;
    trace.steps.reserve(states.size());
    for (StateIndex s : states) trace.steps.push_back({s, ks.snapshot(s)});
    return trace;
}

constexpr StateIndex kNoParent = static_cast<StateIndex>(-1);

}  // namespace

std::optional<Trace> shortest_path(const KripkeStructure& ks, const StateSet& from,
                                   const StateSet& to) {
    const std::size_t n = ks.state_count();
    std::vector<StateIndex> parent(n, kNoParent);
    std::vector<char> seen(n, 0);
    std::vector<StateIndex> frontier = from.to_vector();  // ascending
    for (StateIndex s : frontier) seen[s] = 1;

    auto finish = [&](StateIndex hit) {
        std::vector<StateIndex> states{hit};
        while (parent[states.back()] != kNoParent) states.push_back(parent[states.back()]);
        std::reverse(states.begin(), states.end());
        return trace_from_states(ks, states);
    };

    // Scanning each layer in ascending index order makes both the hit state and
    // every parent assignment the lowest-index choice at that BFS depth.
    while (!frontier.empty()) {
        for (StateIndex s : frontier)
            if (to.contains(s)) return finish(s);
        std::vector<StateIndex> next;
        for (StateIndex s : frontier) {
            auto [b, e] = ks.successors(s);
            for (; b != e; ++b) {
                if (!seen[*b]) {
                    seen[*b] = 1;
                    parent[*b] = s;
                    next.push_back(*b);
                }
            }
        }
        std::sort(next.begin(), next.end());
        frontier = std::move(next);
    }
    return std::nullopt;
}

std::optional<Trace> find_lasso(const KripkeStructure& ks, const StateSet& from,
                                const StateSet& within) {
    // States from which an infinite path can stay inside `within`: the greatest
    // fixpoint of S -> within n pre_exists(S). Every member has a successor in
    // the set, so a greedy walk from any member must eventually close a cycle.
    StateSet core = within;
    for (;;) {
        StateSet refined = core & pre_exists(ks, core);
        if (refined == core) break;
        core = std::move(refined);
    }

    StateSet starts = from & core;
    if (starts.empty()) return std::nullopt;

    const std::size_t n = ks.state_count();
    std::vector<std::size_t> position(n, static_cast<std::size_t>(-1));
    std::vector<StateIndex> states;
    StateIndex cur = static_cast<StateIndex>(starts.first());
    for (;;) {
        if (position[cur] != static_cast<std::size_t>(-1)) break;  // cycle closed
        position[cur] = states.size();
        states.push_back(cur);
        auto [b, e] = ks.successors(cur);
        StateIndex next = kNoParent;
        for (; b != e; ++b) {
            if (core.contains(*b)) {
                next = *b;  // ascending order: first hit is the lowest index
                break;
            }
        }
        if (next == kNoParent) throw Error("internal: lasso walk left its core set");
        cur = next;
    }

    Trace trace = trace_from_states(ks, states);
    trace.loop_back = position[cur];
    return trace;
}

std::string export_dot(const KripkeStructure& ks, const std::vector<std::string>& annotate) {
    for (const auto& name : annotate) {
        if (!ks.has_atom(name)) throw UnknownAtomError(name);
    }

    auto escape = [](const std::string& raw) {
        std::string out;
        for (char c : raw) {
            if (c == '"' || c == '\\') out.push_back('\\');
            out.push_back(c);
        }
        return out;
    };

    std::ostringstream os;
    os << "digraph kripke {\n";
    os << "  node [shape=box, fontname=\"monospace\"];\n";
    for (StateIndex s = 0; s < ks.state_count(); ++s) {
        os << "  s" << s << " [label=\"s" << s;
        for (std::size_t v = 0; v < ks.snapshot_names().size(); ++v)
            os << "\\n" << escape(ks.snapshot_names()[v]) << "="
               << escape(ks.snapshot_value(s, v));
        for (const auto& name : annotate)
            if (ks.label(name).contains(s)) os << "\\n[" << escape(name) << "]";
        os << "\"";
        if (ks.initial().contains(s)) os << ", peripheries=2";
        os << "];\n";
    }
    for (StateIndex s = 0; s < ks.state_count(); ++s) {
        auto [b, e] = ks.successors(s);
        for (; b != e; ++b) os << "  s" << s << " -> s" << *b << ";\n";
    }
    os << "}\n";
    return os.str();
}

namespace detail {

KripkeStructure assemble(std::vector<std::vector<StateIndex>>&& adjacency,
                         std::vector<StateIndex>&& initial,
                         std::vector<std::string>&& atom_names,
                         std::vector<std::vector<bool>>&& label_bits,
                         std::vector<std::string> snapshot_names,
                         std::vector<std::vector<std::string>>&& snapshot_rows) {
    std::vector<std::pair<std::string, std::vector<StateIndex>>> labels;
    labels.reserve(atom_names.size());
    for (std::size_t a = 0; a < atom_names.size(); ++a) {
        std::vector<StateIndex> states;
        for (std::size_t s = 0; s < label_bits[a].size(); ++s)
            if (label_bits[a][s]) states.push_back(static_cast<StateIndex>(s));
        labels.emplace_back(std::move(atom_names[a]), std::move(states));
    }
    return KripkeStructure(std::move(adjacency), std::move(initial), std::move(labels),
                           std::move(snapshot_names), std::move(snapshot_rows));
}

}  // namespace detail

}  // namespace ctlmc
