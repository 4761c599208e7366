#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ctlmc/checker.hpp"
#include "ctlmc/traffic.hpp"

#include <map>
#include <random>
#include <set>

using namespace ctlmc;
using namespace ctlmc::traffic;

namespace {

TrafficParams params_with(int t_thr, int q_max) {
    TrafficParams p;
    p.t_thr_ticks = t_thr;
    p.q_max = q_max;
    return p;
}

int wait_of(const KripkeStructure& ks, StateIndex s, int lane) {
    const auto& names = ks.snapshot_names();
    std::string key = "light" + std::to_string(lane) + ".wait";
    for (std::size_t v = 0; v < names.size(); ++v)
        if (names[v] == key) return std::stoi(ks.snapshot_value(s, v));
    FAIL("missing snapshot variable " << key);
    return -1;
}

std::map<std::string, bool> suite_verdicts(const KripkeStructure& ks,
                                           const std::vector<SpecEntry>& suite) {
    std::map<std::string, bool> verdicts;
    for (const auto& spec : suite) verdicts[spec.name] = check(ks, spec).holds;
    return verdicts;
}

}  // namespace

TEST_CASE("green_ticks follows the weighted round-robin rule in both conventions") {
    TrafficParams params = params_with(18, 25);
    CHECK(green_ticks(10, params, Variant::Fixed) == 10);
    CHECK(green_ticks(25, params, Variant::Buggy) == 19);
    CHECK(green_ticks(25, params, Variant::Fixed) == 18);
    CHECK(green_ticks(0, params, Variant::Fixed) == 1);
    CHECK(green_ticks(0, params, Variant::Buggy) == 1);
    CHECK(green_ticks(18, params, Variant::Fixed) == 18);
    CHECK(green_ticks(18, params, Variant::Buggy) == 19);

    CHECK(initial_counter(0, params, Variant::Fixed) == 0);
    CHECK(initial_counter(0, params, Variant::Buggy) == 0);
    CHECK(initial_counter(25, params, Variant::Buggy) == 18);

    GreenPlan plan = plan_green(7, params, Variant::Fixed);
    CHECK(plan.n == 7);
    CHECK(plan.t_cal == 7);
    CHECK(plan.duration_ticks == 7);
}

TEST_CASE("initial_states enumerates the image of green_ticks at NORTH") {
    SUBCASE("q_max=3 fixed: n=0 and n=1 collide") {
        auto states = initial_states(params_with(18, 3), Variant::Fixed);
        CHECK(states.size() == 3);
        std::set<int> counters;
        for (const auto& s : states) {
            CHECK(s.turn == 0);
            CHECK(s.wait == std::array<std::uint16_t, 4>{0, 0, 0, 0});
            counters.insert(s.counter);
        }
        CHECK(counters == std::set<int>{0, 1, 2});
    }
    SUBCASE("q_max=0: single idle-green initial state") {
        auto states = initial_states(params_with(18, 0), Variant::Fixed);
        REQUIRE(states.size() == 1);
        CHECK(states[0].counter == 0);
    }
    SUBCASE("buggy at full range: counters 0..18") {
        auto states = initial_states(params_with(18, 20), Variant::Buggy);
        CHECK(states.size() == 19);
        std::set<int> counters;
        for (const auto& s : states) counters.insert(s.counter);
        CHECK(*counters.begin() == 0);
        CHECK(*counters.rbegin() == 18);
    }
}

TEST_CASE("successors: countdown, handover, saturation") {
    TrafficParams params = params_with(18, 2);
    SUBCASE("countdown tick is deterministic") {
        ControllerState s{0, 2, {0, 5, 3, 1}};
        auto next = successors(s, params, Variant::Fixed);
        REQUIRE(next.size() == 1);
        CHECK(next[0].turn == 0);
        CHECK(next[0].counter == 1);
        CHECK(next[0].wait == std::array<std::uint16_t, 4>{0, 6, 4, 2});
    }
    SUBCASE("handover fans out over queue draws") {
        ControllerState s{0, 0, {0, 5, 3, 1}};
        auto next = successors(s, params, Variant::Fixed);
        REQUIRE(next.size() == 2);  // green_ticks(0)=green_ticks(1)=1, green_ticks(2)=2
        std::set<int> counters;
        for (const auto& t : next) {
            CHECK(t.turn == 1);
            CHECK(t.wait == std::array<std::uint16_t, 4>{1, 0, 4, 2});
            counters.insert(t.counter);
        }
        CHECK(counters == std::set<int>{0, 1});
    }
    SUBCASE("waits saturate at the cap") {
        const auto cap = static_cast<std::uint16_t>(params.effective_wait_cap());
        ControllerState s{0, 3, {0, cap, 3, 1}};
        auto next = successors(s, params, Variant::Fixed);
        REQUIRE(next.size() == 1);
        CHECK(next[0].wait[1] == cap);
    }
    SUBCASE("handover from EAST wraps to NORTH") {
        ControllerState s{3, 0, {4, 9, 2, 0}};
        auto next = successors(s, params, Variant::Fixed);
        for (const auto& t : next) {
            CHECK(t.turn == 0);
            CHECK(t.wait[0] == 0);
            CHECK(t.wait[3] == 1);
        }
    }
}

TEST_CASE("params validation") {
    CHECK_THROWS_AS(params_with(0, 3).validate(), InvalidConfigError);
    TrafficParams bad_tv = params_with(5, 7);
    bad_tv.t_v = 2;
    CHECK_THROWS_AS(bad_tv.validate(), InvalidConfigError);
    TrafficParams low_cap = params_with(5, 7);
    low_cap.wait_cap = 3 * (5 + 1);  // one below the observability bound
    CHECK_THROWS_AS(low_cap.validate(), InvalidConfigError);
    CHECK(TrafficParams::paper_scale().effective_wait_cap() == 60);
    CHECK(TrafficParams::ci_scale().effective_wait_cap() == 21);
}

TEST_CASE("atom_catalog covers the suite vocabulary") {
    TrafficParams params = TrafficParams::ci_scale();
    auto atoms = atom_catalog(params);
    std::set<std::string> names;
    for (const auto& a : atoms) names.insert(a.name);
    CHECK(names.count("light2.colour=green"));
    CHECK(names.count("light0.colour=red"));
    CHECK(names.count("light3.counter=0"));
    CHECK(names.count("light1.wait<=15"));
    CHECK(names.count("light1.wait=15"));
    CHECK(names.count("light1.wait=18"));

    for (const auto& spec : paper_spec_suite(params))
        for (const auto& atom : atom_names(spec.formula)) CHECK(names.count(atom));

    SUBCASE("predicates evaluate against a concrete state") {
        ControllerState s{2, 4, {0, 15, 12, 7}};
        std::map<std::string, bool> truth;
        for (const auto& a : atoms) truth[a.name] = a.predicate(s);
        CHECK(truth["light2.colour=green"]);
        CHECK(truth["light0.colour=red"]);
        CHECK_FALSE(truth["light2.colour=red"]);
        CHECK(truth["light1.wait<=15"]);
        CHECK(truth["light1.wait=15"]);
        CHECK_FALSE(truth["light2.counter=0"]);
        CHECK_FALSE(truth["light0.counter=0"]);  // counter belongs to the green signal
    }
}

TEST_CASE("paper_spec_suite layout") {
    SUBCASE("t_thr=18 uses the 54 bound") {
        auto suite = paper_spec_suite(TrafficParams::paper_scale());
        CHECK(suite.size() == 20);
        bool found = false;
        for (const auto& spec : suite)
            if (spec.source_text == "AG (light0.wait <= 54)") found = true;
        CHECK(found);
    }
    SUBCASE("t_thr=5 scales the bound to 15") {
        auto suite = paper_spec_suite(TrafficParams::ci_scale());
        bool found = false;
        for (const auto& spec : suite)
            if (spec.source_text == "AG (light2.wait <= 15)") found = true;
        CHECK(found);
    }
    SUBCASE("probes are marked and sit at the end") {
        auto suite = paper_spec_suite(TrafficParams::ci_scale());
        int probes = 0;
        for (const auto& spec : suite) probes += spec.probe ? 1 : 0;
        CHECK(probes == 4);
        CHECK(suite[16].probe);
        CHECK(suite[0].probe == false);
        for (const auto& spec : suite) CHECK(equal(parse_formula(spec.source_text), spec.formula));
    }
}

TEST_CASE("atoms_for_specs resolves comparisons the catalog lacks") {
    TrafficParams params = TrafficParams::ci_scale();
    auto catalog = atom_catalog(params);
    auto specs = parse_spec_file(
        "SPEC AG (light1.wait <= 10)\n"
        "SPEC EF (light2.counter >= 3)\n"
        "SPEC AG (light0.colour != green -> true)\n"
        "SPEC AG (mystery.knob = 1 -> true)\n");
    auto extra = atoms_for_specs(specs, params, catalog);
    std::map<std::string, AtomSpec<ControllerState>> by_name;
    for (auto& a : extra) by_name.emplace(a.name, a);
    REQUIRE(by_name.count("light1.wait<=10"));
    REQUIRE(by_name.count("light2.counter>=3"));
    REQUIRE(by_name.count("light0.colour!=green"));
    CHECK_FALSE(by_name.count("mystery.knob=1"));  // stays unknown, fails at check time

    ControllerState s{2, 4, {0, 9, 12, 7}};
    CHECK(by_name["light1.wait<=10"].predicate(s));
    CHECK(by_name["light2.counter>=3"].predicate(s));
    CHECK(by_name["light0.colour!=green"].predicate(s));
}

TEST_CASE("reachable-state invariants at CI scale, both variants") {
    TrafficParams params = TrafficParams::ci_scale();
    for (auto variant : {Variant::Fixed, Variant::Buggy}) {
        CAPTURE(variant_name(variant));
        KripkeStructure ks = build_traffic_structure(params, variant);

        // One-green: exactly one colour=green atom per state; wait reset on green.
        std::array<const StateSet*, 4> green{};
        for (int i = 0; i < 4; ++i)
            green[i] = &ks.label("light" + std::to_string(i) + ".colour=green");
        int max_wait = 0;
        for (StateIndex s = 0; s < ks.state_count(); ++s) {
            int greens = 0, green_lane = -1;
            for (int i = 0; i < 4; ++i)
                if (green[i]->contains(s)) {
                    ++greens;
                    green_lane = i;
                }
            REQUIRE(greens == 1);
            REQUIRE(wait_of(ks, s, green_lane) == 0);
            for (int i = 0; i < 4; ++i) max_wait = std::max(max_wait, wait_of(ks, s, i));
        }

        // Max wait over all reachable states: 3*T_thr fixed, 3*(T_thr+1) buggy.
        int expected = variant == Variant::Fixed ? 3 * params.t_thr_ticks
                                                 : 3 * (params.t_thr_ticks + 1);
        CHECK(max_wait == expected);

        // Countdown states have exactly one successor with the same turn;
        // handover states advance the turn by 1 mod 4.
        for (StateIndex s = 0; s < ks.state_count(); ++s) {
            int turn = -1, counter = -1;
            for (std::size_t v = 0; v < ks.snapshot_names().size(); ++v) {
                if (ks.snapshot_names()[v] == "turn") turn = std::stoi(ks.snapshot_value(s, v));
                if (ks.snapshot_names()[v] == "counter")
                    counter = std::stoi(ks.snapshot_value(s, v));
            }
            auto [b, e] = ks.successors(s);
            if (counter > 0) {
                REQUIRE(e - b == 1);
                CHECK(green[turn]->contains(*b));
            } else {
                int next = (turn + 1) % 4;
                for (; b != e; ++b) CHECK(green[next]->contains(*b));
            }
        }
    }
}

TEST_CASE("suite verdicts at CI scale reproduce the reported pattern") {
    TrafficParams params = TrafficParams::ci_scale();

    KripkeStructure fixed = build_traffic_structure(params, Variant::Fixed);
    auto fixed_verdicts = suite_verdicts(fixed, paper_spec_suite(params));
    for (const auto& [name, holds] : fixed_verdicts) {
        CAPTURE(name);
        if (name.rfind("wait_probe_", 0) == 0) CHECK_FALSE(holds);
        else CHECK(holds);
    }

    KripkeStructure buggy = build_traffic_structure(params, Variant::Buggy);
    auto buggy_verdicts = suite_verdicts(buggy, paper_spec_suite(params));
    for (const auto& [name, holds] : buggy_verdicts) {
        CAPTURE(name);
        if (name.rfind("max_wait_", 0) == 0) CHECK_FALSE(holds);
        else CHECK(holds);  // round-robin + liveness + AG variants + probes
    }
}

TEST_CASE("buggy counterexample climbs to the overshoot exactly") {
    // t_thr=3: bound 9, overshoot 12. The checker's shortest prefix must match
    // an independent BFS distance, and the extension must end at wait = 12.
    TrafficParams params = params_with(3, 5);
    KripkeStructure ks = build_traffic_structure(params, Variant::Buggy);

    auto suite = paper_spec_suite(params);
    const SpecEntry* max_wait_0 = nullptr;
    for (const auto& spec : suite)
        if (spec.name == "max_wait_0") max_wait_0 = &spec;
    REQUIRE(max_wait_0);

    CheckResult result = check(ks, *max_wait_0);
    REQUIRE_FALSE(result.holds);
    auto trace = counterexample(ks, *max_wait_0, result);
    REQUIRE(trace);
    CHECK(explain_invalid_counterexample(ks, *max_wait_0, *trace).empty());

    // Independent BFS over the raw graph to the first wait0 > 9 state.
    std::vector<int> dist(ks.state_count(), -1);
    std::vector<StateIndex> queue = ks.initial().to_vector();
    for (StateIndex s : queue) dist[s] = 0;
    int first_violation = -1;
    for (std::size_t head = 0; head < queue.size() && first_violation < 0; ++head) {
        StateIndex s = queue[head];
        if (wait_of(ks, s, 0) > 9) {
            first_violation = dist[s];
            break;
        }
        auto [b, e] = ks.successors(s);
        for (; b != e; ++b)
            if (dist[*b] == -1) {
                dist[*b] = dist[s] + 1;
                queue.push_back(*b);
            }
    }
    REQUIRE(first_violation >= 0);

    // Prefix = BFS-shortest path to the first violating state.
    std::size_t violation_index = 0;
    while (violation_index < trace->steps.size() &&
           wait_of(ks, trace->steps[violation_index].state, 0) <= 9)
        ++violation_index;
    CHECK(violation_index == static_cast<std::size_t>(first_violation));
    CHECK(wait_of(ks, trace->steps[violation_index].state, 0) == 10);

    // Extension climbs 10, 11, 12 and stops at the peak.
    CHECK(trace->steps.size() == violation_index + 3);
    CHECK(wait_of(ks, trace->steps.back().state, 0) == 12);
}

TEST_CASE("green duration bounds hold along sampled paths") {
    TrafficParams params = TrafficParams::ci_scale();
    std::mt19937 rng(606);
    for (auto variant : {Variant::Fixed, Variant::Buggy}) {
        const int bound = params.t_thr_ticks + (variant == Variant::Buggy ? 1 : 0);
        KripkeStructure ks = build_traffic_structure(params, variant);
        std::size_t turn_var = 0;
        for (std::size_t v = 0; v < ks.snapshot_names().size(); ++v)
            if (ks.snapshot_names()[v] == "turn") turn_var = v;

        auto initial = ks.initial().to_vector();
        for (int walk = 0; walk < 200; ++walk) {
            StateIndex cur = initial[rng() % initial.size()];
            std::string turn = ks.snapshot_value(cur, turn_var);
            int run = 1;
            for (int step = 0; step < 400; ++step) {
                auto [b, e] = ks.successors(cur);
                cur = b[rng() % static_cast<std::size_t>(e - b)];
                std::string next_turn = ks.snapshot_value(cur, turn_var);
                if (next_turn == turn) {
                    ++run;
                    REQUIRE(run <= bound);
                } else {
                    turn = next_turn;
                    run = 1;
                }
            }
        }
    }
}

TEST_CASE("liveness holds in both variants at a second scale") {
    TrafficParams params = params_with(2, 4);
    for (auto variant : {Variant::Fixed, Variant::Buggy}) {
        KripkeStructure ks = build_traffic_structure(params, variant);
        for (const auto& spec : paper_spec_suite(params)) {
            if (spec.name.rfind("liveness_", 0) == 0 || spec.name.rfind("round_robin", 0) == 0) {
                CAPTURE(spec.name);
                CHECK(check(ks, spec).holds);
            }
        }
    }
}
