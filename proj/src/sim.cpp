#include "ctlmc/sim.hpp"

#include "ctlmc/errors.hpp"

#include <cstdio>
#include <iostream>

namespace ctlmc::sim {

void SimConfig::validate() const {
    for (double p : arrival_prob)
        if (!(p >= 0.0 && p <= 1.0))
            throw InvalidConfigError("arrival probabilities must lie in [0, 1]");
    if (horizon_ticks < 1) throw InvalidConfigError("horizon must be at least 1 tick");
    if (t_thr_ticks < 1) throw InvalidConfigError("t_thr_ticks must be >= 1");
    if (fixed_period_ticks < 0) throw InvalidConfigError("fixed period must be positive");
    if (effective_detection() < t_thr_ticks)
        throw InvalidConfigError(
            "the entry agent must sit at least T_thr * t_v from the intersection");
}

traffic::GreenPlan controller_decide(const std::array<LaneState, 4>& lanes, int next_turn,
                                     const SimConfig& config) {
    if (config.mode == Mode::FixedPeriod)
        return traffic::GreenPlan{0, 0, config.effective_period()};
    const auto n = static_cast<int>(lanes[next_turn].measured_queue());
    traffic::TrafficParams params;
    params.t_thr_ticks = config.t_thr_ticks;
    return traffic::plan_green(n, params, traffic::Variant::Fixed);
}

SimStats run_simulation(const SimConfig& config) {
    config.validate();

    SplitMix64 rng(config.seed);
    std::array<LaneState, 4> lanes;
    SimStats stats;
    std::array<double, 4> wait_sum{};
    double wait_sum_total = 0.0;

    const auto detection = static_cast<std::uint64_t>(config.effective_detection());

    int green = 0;
    // The opening green is not a controller decision (there has been no expiry
    // yet and no traffic to measure): each mode starts NORTH at its nominal
    // period, T_thr for adaptive.
    int remaining = config.mode == Mode::Adaptive ? config.t_thr_ticks
                                                  : config.effective_period();
    stats.switch_log.emplace_back(0, green);

    for (std::uint64_t now = 0; now < config.horizon_ticks; ++now) {
        for (int i = 0; i < 4; ++i) {
            auto& lane = lanes[i];
            // Overflow vehicles are detected (and counted) once the zone has room.
            while (!lane.upstream_overflow.empty() && lane.queue.size() < detection) {
                lane.queue.push_back(lane.upstream_overflow.front());
                lane.upstream_overflow.pop_front();
                ++lane.entry_count;
            }
            if (rng.bernoulli(config.arrival_prob[i])) {
                ++stats.lane[i].vehicles_arrived;
                if (lane.queue.size() < detection) {
                    lane.queue.push_back(now);
                    ++lane.entry_count;
                } else {
                    lane.upstream_overflow.push_back(now);
                }
            }
        }

        ++stats.lane[green].green_ticks;
        auto& serving = lanes[green];
        if (!serving.queue.empty()) {
            std::uint64_t arrived_at = serving.queue.front();
            serving.queue.pop_front();
            ++serving.exit_count;
            std::uint64_t waited = now - arrived_at;
            auto& ls = stats.lane[green];
            ++ls.vehicles_served;
            wait_sum[green] += static_cast<double>(waited);
            wait_sum_total += static_cast<double>(waited);
            ls.max_wait_ticks = std::max(ls.max_wait_ticks, waited);
        }

        for (int i = 0; i < 4; ++i)
            if (lanes[i].measured_queue() != lanes[i].queue.size())
                throw Error("internal: entry/exit counters drifted from the true queue");

        if (--remaining == 0) {
            green = (green + 1) % 4;
            remaining = controller_decide(lanes, green, config).duration_ticks;
            if (now + 1 < config.horizon_ticks) stats.switch_log.emplace_back(now + 1, green);
        }
    }

    for (int i = 0; i < 4; ++i) {
        auto& ls = stats.lane[i];
        ls.still_queued = lanes[i].queue.size();
        ls.upstream_overflow = lanes[i].upstream_overflow.size();
        if (ls.vehicles_served > 0)
            ls.avg_wait_ticks = wait_sum[i] / static_cast<double>(ls.vehicles_served);
        if (ls.green_ticks > 0)
            ls.green_utilization =
                static_cast<double>(ls.vehicles_served) / static_cast<double>(ls.green_ticks);

        stats.total.vehicles_arrived += ls.vehicles_arrived;
        stats.total.vehicles_served += ls.vehicles_served;
        stats.total.still_queued += ls.still_queued;
        stats.total.upstream_overflow += ls.upstream_overflow;
        stats.total.max_wait_ticks = std::max(stats.total.max_wait_ticks, ls.max_wait_ticks);
        stats.total.green_ticks += ls.green_ticks;
    }
    if (stats.total.vehicles_served > 0)
        stats.total.avg_wait_ticks =
            wait_sum_total / static_cast<double>(stats.total.vehicles_served);
    if (stats.total.green_ticks > 0)
        stats.total.green_utilization = static_cast<double>(stats.total.vehicles_served) /
                                        static_cast<double>(stats.total.green_ticks);
    return stats;
}

std::vector<CompareRow> compare_modes(const SimConfig& base, const std::vector<double>& rates) {
    if (rates.empty()) throw InvalidConfigError("rate list is empty");
    std::vector<CompareRow> rows;
    rows.reserve(rates.size());
    for (double rate : rates) {
        SimConfig config = base;
        config.arrival_prob = {rate, rate, rate, rate};
        config.mode = Mode::Adaptive;
        SimStats adaptive = run_simulation(config);
        config.mode = Mode::FixedPeriod;
        SimStats fixed = run_simulation(config);
        rows.push_back({rate, adaptive.total.avg_wait_ticks, fixed.total.avg_wait_ticks,
                        static_cast<double>(adaptive.total.max_wait_ticks),
                        static_cast<double>(fixed.total.max_wait_ticks)});
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].rate >= rows[i - 1].rate &&
            (rows[i].adaptive_avg_wait < rows[i - 1].adaptive_avg_wait ||
             rows[i].fixed_avg_wait < rows[i - 1].fixed_avg_wait))
            std::cerr << "warning: average wait is not monotone between rates "
                      << rows[i - 1].rate << " and " << rows[i].rate
                      << " (stochastic noise at this horizon)\n";
    }
    return rows;
}

namespace {

std::string fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace

std::string compare_csv(const std::vector<CompareRow>& rows) {
    std::string out = "rate,adaptive_avg_wait,fixed_avg_wait,adaptive_max_wait,fixed_max_wait\n";
    for (const auto& r : rows) {
        out += fixed4(r.rate) + "," + fixed4(r.adaptive_avg_wait) + "," +
               fixed4(r.fixed_avg_wait) + "," + fixed4(r.adaptive_max_wait) + "," +
               fixed4(r.fixed_max_wait) + "\n";
    }
    return out;
}

std::string stats_csv(const SimStats& stats) {
    std::string out =
        "lane,arrived,served,still_queued,overflow,avg_wait,max_wait,green_ticks,"
        "green_utilization\n";
    auto row = [&out](const std::string& label, const LaneStats& ls) {
        out += label + "," + std::to_string(ls.vehicles_arrived) + "," +
               std::to_string(ls.vehicles_served) + "," + std::to_string(ls.still_queued) + "," +
               std::to_string(ls.upstream_overflow) + "," + fixed4(ls.avg_wait_ticks) + "," +
               std::to_string(ls.max_wait_ticks) + "," + std::to_string(ls.green_ticks) + "," +
               fixed4(ls.green_utilization) + "\n";
    };
    for (int i = 0; i < 4; ++i) row(std::to_string(i), stats.lane[i]);
    row("total", stats.total);
    return out;
}

}  // namespace ctlmc::sim
