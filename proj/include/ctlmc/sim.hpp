#pragma once

#include "ctlmc/traffic.hpp"

#include <array>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

namespace ctlmc::sim {

/// SplitMix64: the fixed pseudo-random generator behind every simulation.
/// The algorithm is pinned (and its first outputs frozen in the test data) so
/// identical seeds give identical runs on any platform or implementation.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_unit() < p; }

private:
    std::uint64_t state_;
};

enum class Mode { Adaptive, FixedPeriod };

struct SimConfig {
    Mode mode = Mode::Adaptive;
    int t_thr_ticks = 18;
    int fixed_period_ticks = 0;  // 0 = t_thr_ticks
    std::array<double, 4> arrival_prob{};
    std::uint64_t horizon_ticks = 100'000;
    std::uint64_t seed = 1;
    int detection_distance_ticks = 0;  // 0 = t_thr_ticks * t_v (the minimum placement)

    int effective_period() const { return fixed_period_ticks > 0 ? fixed_period_ticks : t_thr_ticks; }
    int effective_detection() const {
        return detection_distance_ticks > 0 ? detection_distance_ticks : t_thr_ticks;
    }
    void validate() const;
};

/// One lane between its entry and exit agents. The master never sees the queue
/// directly: it reconstructs it as entry_count - exit_count.
struct LaneState {
    std::uint64_t entry_count = 0;
    std::uint64_t exit_count = 0;
    std::deque<std::uint64_t> queue;              // arrival tick-stamps, FIFO
    std::deque<std::uint64_t> upstream_overflow;  // arrived beyond the detection zone

    std::uint64_t measured_queue() const { return entry_count - exit_count; }
};

struct LaneStats {
    std::uint64_t vehicles_arrived = 0;
    std::uint64_t vehicles_served = 0;
    std::uint64_t still_queued = 0;
    std::uint64_t upstream_overflow = 0;
    double avg_wait_ticks = 0.0;  // 0 when nothing was served
    std::uint64_t max_wait_ticks = 0;
    std::uint64_t green_ticks = 0;
    double green_utilization = 0.0;  // served / green ticks
};

struct SimStats {
    std::array<LaneStats, 4> lane;
    LaneStats total;
    /// (tick, lane) pairs: the instant each green phase began.
    std::vector<std::pair<std::uint64_t, int>> switch_log;
};

/// Green weight for the next signal in rotation, decided at a green-expiry
/// instant. Adaptive reads entry_count - exit_count of the next lane and
/// grants min(n, T_thr) ticks (1 minimum); FixedPeriod grants the configured
/// period regardless of the queue.
traffic::GreenPlan controller_decide(const std::array<LaneState, 4>& lanes, int next_turn,
                                     const SimConfig& config);

/// Discrete-time run over config.horizon_ticks. Per tick: arrivals are drawn
/// lane 0..3 (one Bernoulli draw per lane, every tick, in both modes), the
/// green lane serves at most one vehicle, and on green expiry the controller
/// schedules the next lane. Identical configs produce identical stats.
SimStats run_simulation(const SimConfig& config);

struct CompareRow {
    double rate;
    double adaptive_avg_wait;
    double fixed_avg_wait;
    double adaptive_max_wait;
    double fixed_max_wait;
};

/// Runs both modes per rate with the same seed. Warns on stderr when avg
/// waits are not monotone in the rate (possible at short horizons).
std::vector<CompareRow> compare_modes(const SimConfig& base, const std::vector<double>& rates);

/// CSV with header rate,adaptive_avg_wait,fixed_avg_wait,adaptive_max_wait,
/// fixed_max_wait; floats with 4 decimals, LF line endings.
std::string compare_csv(const std::vector<CompareRow>& rows);

/// Per-lane + total stats CSV for one run.
std::string stats_csv(const SimStats& stats);

}  // namespace ctlmc::sim
