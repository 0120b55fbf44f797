#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tiersim/bpm.hpp"
#include "tiersim/directive.hpp"
#include "tiersim/system_model.hpp"
#include "tiersim/workload.hpp"

namespace tiersim {

// Per-access charge. Uniform tiers ignore page_hot (asymmetry was folded
// into write_latency_ns at parse time). Frequency-sensitive tiers serve the
// hot or cold read latency and scale writes by the penalty factor, rounded
// half-up to whole nanoseconds.
std::uint64_t access_latency(const MemoryTierSpec& tier, AccessOp op, bool page_hot);

// Latency a frontend should expect for a given access class: hot-class
// expectations use the hot latency on frequency-sensitive tiers, everything
// else the cold/uniform latency.
std::uint64_t expected_read_latency(const MemoryTierSpec& tier, AccessClass access_class);

struct EpochMetrics {
    std::uint64_t epoch = 0;
    std::uint64_t events = 0;
    std::uint64_t access_latency_ns = 0;
    std::uint64_t migrations = 0;
    std::uint64_t migration_cost_ns = 0;

    friend bool operator==(const EpochMetrics&, const EpochMetrics&) = default;
};

struct TaskMetrics {
    std::string task;
    std::string device;
    double estimated_time_sec = 0.0;

    friend bool operator==(const TaskMetrics&, const TaskMetrics&) = default;
};

struct Metrics {
    std::uint64_t event_count = 0;
    std::uint64_t total_access_latency_ns = 0;
    double mean_access_latency_ns = 0.0;
    std::uint64_t migration_count = 0;
    std::uint64_t migrated_bytes = 0;
    std::uint64_t migration_cost_ns = 0;  // separate ledger, not part of access latency
    std::vector<EpochMetrics> per_epoch;
    std::vector<TaskMetrics> tasks;
    double makespan_sec = 0.0;
    std::map<std::string, std::vector<PageId>> final_placement;  // tier -> sorted pages

    std::uint64_t total_cost_ns() const { return total_access_latency_ns + migration_cost_ns; }

    friend bool operator==(const Metrics&, const Metrics&) = default;
};

std::string metrics_to_json(const Metrics& metrics);
Metrics metrics_from_json(std::string_view json_text);
// One row per epoch.
std::string metrics_to_csv(const Metrics& metrics, std::string_view policy);

struct SimulationResult {
    Metrics metrics;
    std::vector<Decision> decisions;
    std::uint64_t truncated_proposals = 0;
};

// Trace replay: initial placement in manifest order, per-event latency with
// hotness taken from the previous epoch's counters (epoch 0 all cold),
// BPM migration decisions at every epoch boundary (each migration costs
// page_size / min(src,dst bandwidth) plus the fixed cost), then task mapping
// and an analytic makespan. seed is recorded for provenance; the replay
// itself is deterministic.
SimulationResult run_simulation(const SystemConfig& config, const PolicyDirective& directive,
                                const Workload& workload, std::uint64_t seed);

struct OracleResult {
    std::map<std::string, std::string> placement;  // symbol -> tier
    std::uint64_t total_latency_ns = 0;
};

inline constexpr std::uint64_t kOracleAssignmentBound = 1000000;

// Exhaustive minimum-latency static placement at symbol granularity,
// replayed with no migrations. Refuses instances with more than
// kOracleAssignmentBound assignments; ties break lexicographically in
// (manifest order, tier declaration order).
OracleResult static_oracle(const SystemConfig& config, const Workload& workload);

bool oracle_within_bound(const SystemConfig& config, const Workload& workload);

}  // namespace tiersim
