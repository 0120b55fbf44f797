#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tiersim {

enum class TierKind { kUniform, kFrequencySensitive };

// One memory device class. For uniform tiers the write-asymmetry penalty is
// folded into write_latency_ns at parse time and the stored factor is reset
// to 1; frequency-sensitive tiers keep the raw factor and apply it per
// access on top of the hot/cold read latency.
struct MemoryTierSpec {
    std::string name;
    TierKind kind = TierKind::kUniform;
    std::uint64_t read_latency_ns = 0;
    std::uint64_t write_latency_ns = 0;
    std::optional<std::uint64_t> hot_read_latency_ns;
    std::optional<std::uint64_t> cold_read_latency_ns;
    std::optional<std::uint64_t> hot_threshold_accesses_per_epoch;
    double write_penalty_factor = 1.0;
    std::uint64_t bandwidth_bytes_per_sec = 0;
    std::uint64_t capacity_pages = 0;

    bool frequency_sensitive() const { return kind == TierKind::kFrequencySensitive; }

    friend bool operator==(const MemoryTierSpec&, const MemoryTierSpec&) = default;
};

enum class DeviceKind { kCpu, kGpu, kAccelerator };

struct ComputeDeviceSpec {
    std::string name;
    DeviceKind kind = DeviceKind::kCpu;
    std::uint64_t core_count = 1;
    double per_core_throughput_ops_per_sec = 0.0;
    double parallel_efficiency = 1.0;  // in (0, 1]

    friend bool operator==(const ComputeDeviceSpec&, const ComputeDeviceSpec&) = default;
};

struct SystemConfig {
    std::vector<MemoryTierSpec> tiers;  // declaration order is meaningful
    std::vector<ComputeDeviceSpec> devices;
    std::uint64_t page_size_bytes = 0;
    std::uint64_t epoch_length_events = 0;
    std::uint64_t migration_fixed_cost_ns = 0;

    const MemoryTierSpec* find_tier(std::string_view name) const;
    const ComputeDeviceSpec* find_device(std::string_view name) const;

    friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

// Parses a system description document. Throws ParseError for syntax-level
// problems (line/column reported, unknown keys, missing mandatory fields,
// duplicate names) and ValidationError when the parsed config would violate
// a model invariant; any config returned validates cleanly.
SystemConfig parse_system_config(std::string_view text);

// Every invariant violation as one human-readable line; empty means valid.
std::vector<std::string> validate_config(const SystemConfig& config);

// Canonical form: sections in declaration order, keys sorted, derived fields
// omitted. parse(serialize(c)) == c.
std::string serialize_system_config(const SystemConfig& config);

std::string_view tier_kind_name(TierKind kind);
std::string_view device_kind_name(DeviceKind kind);

std::uint64_t round_half_up(double v);

}  // namespace tiersim
