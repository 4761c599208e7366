#include "ctlmc/traffic.hpp"

#include "ctlmc/errors.hpp"

#include <algorithm>
#include <set>

namespace ctlmc::traffic {

void TrafficParams::validate() const {
    if (t_v != 1)
        throw InvalidConfigError("t_v must be 1 (the model's tick is one vehicle crossing)");
    if (t_thr_ticks < 1) throw InvalidConfigError("t_thr_ticks must be >= 1");
    if (t_thr_ticks > 2000) throw InvalidConfigError("t_thr_ticks above 2000 is not supported");
    if (q_max < 0) throw InvalidConfigError("q_max must be >= 0");
    int cap = effective_wait_cap();
    if (cap < 3 * (t_thr_ticks + 1) + 1)
        throw InvalidConfigError(
            "wait_cap must be at least 3*(t_thr_ticks+1)+1, or the largest possible "
            "wait would saturate before it is observable");
    if (cap > 0xFFFF) throw InvalidConfigError("wait_cap does not fit the wait counters");
}

int initial_counter(int n, const TrafficParams& params, Variant variant) {
    int weight = std::min(n * params.t_v, params.t_thr_ticks);
    if (variant == Variant::Buggy) return std::max(0, weight);
    return std::max(1, weight) - 1;
}

int green_ticks(int n, const TrafficParams& params, Variant variant) {
    return initial_counter(n, params, variant) + 1;
}

GreenPlan plan_green(int n, const TrafficParams& params, Variant variant) {
    return GreenPlan{n, n * params.t_v, green_ticks(n, params, variant)};
}

std::vector<ControllerState> initial_states(const TrafficParams& params, Variant variant) {
    std::set<int> counters;
    for (int n = 0; n <= params.q_max; ++n) counters.insert(initial_counter(n, params, variant));
    std::vector<ControllerState> states;
    states.reserve(counters.size());
    for (int c : counters) {
        ControllerState s;
        s.turn = 0;
        s.counter = static_cast<std::uint16_t>(c);
        states.push_back(s);
    }
    return states;
}

std::vector<ControllerState> successors(const ControllerState& s, const TrafficParams& params,
                                        Variant variant) {
    const auto cap = static_cast<std::uint16_t>(params.effective_wait_cap());
    auto bump = [cap](std::uint16_t w) -> std::uint16_t {
        return w < cap ? static_cast<std::uint16_t>(w + 1) : cap;
    };

    if (s.counter > 0) {
        ControllerState next = s;
        next.counter = static_cast<std::uint16_t>(s.counter - 1);
        for (int i = 0; i < 4; ++i)
            if (i != s.turn) next.wait[i] = bump(s.wait[i]);
        return {next};
    }

    std::set<int> counters;
    for (int n = 0; n <= params.q_max; ++n) counters.insert(initial_counter(n, params, variant));
    std::vector<ControllerState> result;
    result.reserve(counters.size());
    const int incoming = (s.turn + 1) % 4;
    for (int c : counters) {
        ControllerState next;
        next.turn = static_cast<std::uint8_t>(incoming);
        next.counter = static_cast<std::uint16_t>(c);
        for (int i = 0; i < 4; ++i) {
            if (i == incoming) next.wait[i] = 0;
            else if (i == s.turn) next.wait[i] = 1;
            else next.wait[i] = bump(s.wait[i]);
        }
        result.push_back(next);
    }
    return result;
}

namespace {

std::string light(int i) { return "light" + std::to_string(i); }

}  // namespace

std::vector<AtomSpec<ControllerState>> atom_catalog(const TrafficParams& params) {
    std::vector<AtomSpec<ControllerState>> atoms;
    const int bound = 3 * params.t_thr_ticks;
    const int overshoot = 3 * (params.t_thr_ticks + 1);
    for (int i = 0; i < 4; ++i) {
        atoms.push_back({light(i) + ".colour=green",
                         [i](const ControllerState& s) { return s.turn == i; }});
        atoms.push_back({light(i) + ".colour=red",
                         [i](const ControllerState& s) { return s.turn != i; }});
        // The countdown belongs to the active green; a red signal has no live counter.
        atoms.push_back({light(i) + ".counter=0", [i](const ControllerState& s) {
                             return s.turn == i && s.counter == 0;
                         }});
        atoms.push_back({light(i) + ".wait<=" + std::to_string(bound),
                         [i, bound](const ControllerState& s) { return s.wait[i] <= bound; }});
        atoms.push_back({light(i) + ".wait=" + std::to_string(bound),
                         [i, bound](const ControllerState& s) { return s.wait[i] == bound; }});
        atoms.push_back({light(i) + ".wait=" + std::to_string(overshoot),
                         [i, overshoot](const ControllerState& s) {
                             return s.wait[i] == overshoot;
                         }});
    }
    return atoms;
}

namespace {

// Parses "light<i>.<field><cmp><value>" into a predicate, or returns an
// empty function when the name is not of that shape.
std::function<bool(const ControllerState&)> resolve_atom(const std::string& name) {
    if (name.rfind("light", 0) != 0 || name.size() < 7) return {};
    char digit = name[5];
    if (digit < '0' || digit > '3' || name[6] != '.') return {};
    const int i = digit - '0';

    std::size_t cmp_pos = name.find_first_of("=!<>", 7);
    if (cmp_pos == std::string::npos) return {};
    std::string field = name.substr(7, cmp_pos - 7);
    std::string cmp;
    std::size_t value_pos = cmp_pos;
    while (value_pos < name.size() &&
           (name[value_pos] == '=' || name[value_pos] == '!' || name[value_pos] == '<' ||
            name[value_pos] == '>'))
        cmp += name[value_pos++];
    std::string value = name.substr(value_pos);
    if (value.empty()) return {};

    if (field == "colour") {
        bool green;
        if (value == "green") green = true;
        else if (value == "red") green = false;
        else return {};
        if (cmp == "!=") green = !green;
        else if (cmp != "=") return {};
        return [i, green](const ControllerState& s) { return (s.turn == i) == green; };
    }

    if (field != "counter" && field != "wait") return {};
    if (value.find_first_not_of("0123456789") != std::string::npos) return {};
    const int rhs = std::stoi(value);

    auto compare = [cmp](int lhs, int rhs_) {
        if (cmp == "=") return lhs == rhs_;
        if (cmp == "!=") return lhs != rhs_;
        if (cmp == "<=") return lhs <= rhs_;
        if (cmp == "<") return lhs < rhs_;
        if (cmp == ">=") return lhs >= rhs_;
        return lhs > rhs_;
    };
    if (cmp != "=" && cmp != "!=" && cmp != "<=" && cmp != "<" && cmp != ">=" && cmp != ">")
        return {};

    if (field == "counter")
        return [i, rhs, compare](const ControllerState& s) {
            return s.turn == i && compare(s.counter, rhs);
        };
    return [i, rhs, compare](const ControllerState& s) { return compare(s.wait[i], rhs); };
}

}  // namespace

std::vector<AtomSpec<ControllerState>> atoms_for_specs(
    const std::vector<SpecEntry>& specs, const TrafficParams&,
    const std::vector<AtomSpec<ControllerState>>& existing) {
    std::set<std::string> known;
    for (const auto& a : existing) known.insert(a.name);
    std::vector<AtomSpec<ControllerState>> extra;
    for (const auto& spec : specs) {
        for (const auto& name : atom_names(spec.formula)) {
            if (!known.insert(name).second) continue;
            auto predicate = resolve_atom(name);
            if (predicate) extra.push_back({name, std::move(predicate)});
        }
    }
    return extra;
}

std::vector<SpecEntry> paper_spec_suite(const TrafficParams& params) {
    const std::string bound = std::to_string(3 * params.t_thr_ticks);
    const std::string overshoot = std::to_string(3 * (params.t_thr_ticks + 1));
    std::vector<SpecEntry> suite;

    auto add = [&suite](std::string name, std::string text, bool probe = false) {
        SpecEntry entry;
        entry.name = std::move(name);
        entry.source_text = std::move(text);
        entry.formula = parse_formula(entry.source_text);
        entry.probe = probe;
        suite.push_back(std::move(entry));
    };

    for (int i = 0; i < 4; ++i) {
        int next = (i + 1) % 4;
        add("round_robin_" + std::to_string(i),
            "AF (light" + std::to_string(i) + ".counter = 0 -> AX light" +
                std::to_string(next) + ".colour = green)");
    }
    for (int i = 0; i < 4; ++i) {
        add("liveness_" + std::to_string(i),
            "AG (light" + std::to_string(i) + ".colour = red -> AF light" + std::to_string(i) +
                ".colour = green)");
    }
    for (int i = 0; i < 4; ++i) {
        add("max_wait_" + std::to_string(i),
            "AG (light" + std::to_string(i) + ".wait <= " + bound + ")");
    }
    for (int i = 0; i < 4; ++i) {
        int next = (i + 1) % 4;
        add("round_robin_ag_" + std::to_string(i),
            "AG (light" + std::to_string(i) + ".counter = 0 -> AX light" +
                std::to_string(next) + ".colour = green)");
    }
    for (int i = 0; i < 4; ++i) {
        add("wait_probe_" + std::to_string(i),
            "EF (light" + std::to_string(i) + ".wait = " + overshoot + ")", /*probe=*/true);
    }
    return suite;
}

std::uint64_t TrafficModel::encode(const State& s) const {
    // turn:2 | counter:12 | wait0..3:12 each = 62 bits.
    std::uint64_t key = s.turn;
    key = key << 12 | s.counter;
    for (int i = 0; i < 4; ++i) key = key << 12 | s.wait[i];
    return key;
}

std::vector<std::string> TrafficModel::snapshot_names() const {
    std::vector<std::string> names{"turn", "counter"};
    for (int i = 0; i < 4; ++i) {
        names.push_back(light(i) + ".colour");
        names.push_back(light(i) + ".wait");
    }
    return names;
}

std::vector<std::string> TrafficModel::snapshot_values(const State& s) const {
    std::vector<std::string> values{std::to_string(s.turn), std::to_string(s.counter)};
    for (int i = 0; i < 4; ++i) {
        values.push_back(s.turn == i ? "green" : "red");
        values.push_back(std::to_string(s.wait[i]));
    }
    return values;
}

KripkeStructure build_traffic_structure(const TrafficParams& params, Variant variant,
                                        const std::vector<SpecEntry>& specs,
                                        const BuildLimits& limits) {
    TrafficModel model(params, variant);
    auto atoms = atom_catalog(params);
    auto extra = atoms_for_specs(specs, params, atoms);
    atoms.insert(atoms.end(), std::make_move_iterator(extra.begin()),
                 std::make_move_iterator(extra.end()));
    return build_structure(model, atoms, limits);
}

}  // namespace ctlmc::traffic
