#include "tiersim/system_model.hpp"

#include <cmath>
#include <set>

#include <fmt/core.h>

#include "tiersim/error.hpp"
#include "tiersim/text_format.hpp"

namespace tiersim {

std::uint64_t round_half_up(double v) {
    return static_cast<std::uint64_t>(std::floor(v + 0.5));
}

std::string_view tier_kind_name(TierKind kind) {
    return kind == TierKind::kUniform ? "uniform" : "frequency-sensitive";
}

std::string_view device_kind_name(DeviceKind kind) {
    switch (kind) {
        case DeviceKind::kCpu: return "cpu";
        case DeviceKind::kGpu: return "gpu";
        case DeviceKind::kAccelerator: return "accelerator";
    }
    return "cpu";
}

const MemoryTierSpec* SystemConfig::find_tier(std::string_view name) const {
    for (const auto& t : tiers) {
        if (t.name == name) return &t;
    }
    return nullptr;
}

const ComputeDeviceSpec* SystemConfig::find_device(std::string_view name) const {
    for (const auto& d : devices) {
        if (d.name == name) return &d;
    }
    return nullptr;
}

namespace {

TierKind parse_tier_kind(const std::string& token, std::size_t line) {
    if (token == "uniform") return TierKind::kUniform;
    if (token == "frequency-sensitive" || token == "frequency_sensitive")
        return TierKind::kFrequencySensitive;
    throw ParseError(fmt::format("unknown tier kind '{}'", token), line, 1);
}

DeviceKind parse_device_kind(const std::string& token, std::size_t line) {
    if (token == "cpu") return DeviceKind::kCpu;
    if (token == "gpu") return DeviceKind::kGpu;
    if (token == "accelerator") return DeviceKind::kAccelerator;
    throw ParseError(fmt::format("unknown device kind '{}'", token), line, 1);
}

MemoryTierSpec parse_tier(const Section& section) {
    if (section.name.empty()) {
        throw ParseError("tier section needs a name: [tier NAME]", section.line, 1);
    }
    SectionReader r(section);
    MemoryTierSpec tier;
    tier.name = section.name;
    tier.kind = parse_tier_kind(r.optional_token("kind", "uniform"), section.line);
    tier.bandwidth_bytes_per_sec = r.required_u64("bandwidth_bytes_per_sec");
    tier.capacity_pages = r.required_u64("capacity_pages");
    tier.write_penalty_factor = r.optional_double("write_penalty_factor", 1.0);

    if (tier.kind == TierKind::kUniform) {
        tier.read_latency_ns = r.required_u64("read_latency_ns");
        std::uint64_t base_write = r.optional_u64("write_latency_ns", tier.read_latency_ns);
        // NVM-style asymmetry is folded here once; access_latency then reads
        // write_latency_ns directly.
        tier.write_latency_ns =
            round_half_up(static_cast<double>(base_write) * tier.write_penalty_factor);
        tier.write_penalty_factor = 1.0;
    } else {
        tier.hot_read_latency_ns = r.required_u64("hot_read_latency_ns");
        tier.cold_read_latency_ns = r.required_u64("cold_read_latency_ns");
        tier.hot_threshold_accesses_per_epoch = r.required_u64("hot_threshold_accesses_per_epoch");
        // Derived conveniences so "all latencies > 0" holds for a valid tier;
        // the penalty stays raw and is applied per access.
        tier.read_latency_ns = *tier.cold_read_latency_ns;
        tier.write_latency_ns = round_half_up(static_cast<double>(*tier.cold_read_latency_ns) *
                                              tier.write_penalty_factor);
    }
    r.finish();
    return tier;
}

ComputeDeviceSpec parse_device(const Section& section) {
    if (section.name.empty()) {
        throw ParseError("device section needs a name: [device NAME]", section.line, 1);
    }
    SectionReader r(section);
    ComputeDeviceSpec dev;
    dev.name = section.name;
    dev.kind = parse_device_kind(r.required_token("kind"), section.line);
    dev.core_count = r.required_u64("core_count");
    dev.per_core_throughput_ops_per_sec = r.required_double("per_core_throughput_ops_per_sec");
    dev.parallel_efficiency = r.optional_double("parallel_efficiency", 1.0);
    r.finish();
    return dev;
}

}  // namespace

SystemConfig parse_system_config(std::string_view text) {
    Document doc = parse_document(text);
    SystemConfig config;
    bool saw_system = false;

    for (const Section& section : doc.sections) {
        if (section.kind == "tier") {
            for (const auto& t : config.tiers) {
                if (t.name == section.name) {
                    throw ParseError(fmt::format("duplicate tier name '{}'", section.name),
                                     section.line, 1);
                }
            }
            config.tiers.push_back(parse_tier(section));
        } else if (section.kind == "device") {
            for (const auto& d : config.devices) {
                if (d.name == section.name) {
                    throw ParseError(fmt::format("duplicate device name '{}'", section.name),
                                     section.line, 1);
                }
            }
            config.devices.push_back(parse_device(section));
        } else if (section.kind == "system") {
            if (saw_system) {
                throw ParseError("duplicate [system] section", section.line, 1);
            }
            saw_system = true;
            SectionReader r(section);
            config.page_size_bytes = r.required_u64("page_size_bytes");
            config.epoch_length_events = r.required_u64("epoch_length_events");
            config.migration_fixed_cost_ns = r.optional_u64("migration_fixed_cost_ns", 0);
            r.finish();
        } else {
            throw ParseError(fmt::format("unknown section kind '{}'", section.kind), section.line,
                             1);
        }
    }

    if (!saw_system) {
        throw ParseError("missing mandatory [system] section", 1, 1);
    }
    auto violations = validate_config(config);
    if (!violations.empty()) {
        throw ValidationError(std::move(violations));
    }
    return config;
}

std::vector<std::string> validate_config(const SystemConfig& config) {
    std::vector<std::string> v;
    if (config.tiers.empty()) v.push_back("config: at least one tier is required");
    if (config.devices.empty()) v.push_back("config: at least one device is required");
    if (config.page_size_bytes == 0) v.push_back("system: page_size_bytes must be positive");
    if (config.epoch_length_events == 0) v.push_back("system: epoch_length_events must be >= 1");

    std::set<std::string> names;
    for (const auto& t : config.tiers) {
        if (!names.insert(t.name).second) {
            v.push_back(fmt::format("tier {}: duplicate name", t.name));
        }
    }
    for (const auto& d : config.devices) {
        if (!names.insert(d.name).second) {
            v.push_back(fmt::format("device {}: duplicate name", d.name));
        }
    }

    for (const auto& t : config.tiers) {
        if (t.read_latency_ns == 0) v.push_back(fmt::format("tier {}: read latency must be > 0", t.name));
        if (t.write_latency_ns == 0) v.push_back(fmt::format("tier {}: write latency must be > 0", t.name));
        if (t.capacity_pages == 0) v.push_back(fmt::format("tier {}: capacity_pages must be > 0", t.name));
        if (t.bandwidth_bytes_per_sec == 0)
            v.push_back(fmt::format("tier {}: bandwidth must be > 0", t.name));
        if (t.write_penalty_factor < 1.0)
            v.push_back(fmt::format("tier {}: write_penalty_factor must be >= 1", t.name));
        if (t.frequency_sensitive()) {
            if (!t.hot_read_latency_ns || !t.cold_read_latency_ns ||
                !t.hot_threshold_accesses_per_epoch) {
                v.push_back(fmt::format(
                    "tier {}: frequency-sensitive tier needs hot/cold latencies and a hot threshold",
                    t.name));
            } else {
                if (*t.hot_read_latency_ns == 0 || *t.cold_read_latency_ns == 0) {
                    v.push_back(fmt::format("tier {}: hot/cold latencies must be > 0", t.name));
                }
                if (*t.hot_read_latency_ns >= *t.cold_read_latency_ns) {
                    v.push_back(fmt::format(
                        "tier {}: hot_read_latency_ns must be < cold_read_latency_ns", t.name));
                }
                if (*t.hot_threshold_accesses_per_epoch == 0) {
                    v.push_back(fmt::format(
                        "tier {}: hot_threshold_accesses_per_epoch must be >= 1", t.name));
                }
            }
        } else {
            if (t.hot_read_latency_ns || t.cold_read_latency_ns ||
                t.hot_threshold_accesses_per_epoch) {
                v.push_back(fmt::format("tier {}: uniform tier must not carry hot/cold fields",
                                        t.name));
            }
        }
    }

    for (const auto& d : config.devices) {
        if (d.core_count == 0) v.push_back(fmt::format("device {}: core_count must be >= 1", d.name));
        if (d.per_core_throughput_ops_per_sec <= 0.0)
            v.push_back(fmt::format("device {}: per-core throughput must be > 0", d.name));
        if (d.parallel_efficiency <= 0.0 || d.parallel_efficiency > 1.0)
            v.push_back(fmt::format("device {}: parallel_efficiency must be in (0, 1]", d.name));
    }
    return v;
}

std::string serialize_system_config(const SystemConfig& config) {
    Document doc;
    for (const auto& t : config.tiers) {
        Section s;
        s.kind = "tier";
        s.name = t.name;
        s.entries.push_back({"kind", std::string(tier_kind_name(t.kind)), 0});
        if (t.frequency_sensitive()) {
            s.entries.push_back({"hot_read_latency_ns", format_u64(*t.hot_read_latency_ns), 0});
            s.entries.push_back({"cold_read_latency_ns", format_u64(*t.cold_read_latency_ns), 0});
            s.entries.push_back({"hot_threshold_accesses_per_epoch",
                                 format_u64(*t.hot_threshold_accesses_per_epoch), 0});
            if (t.write_penalty_factor != 1.0) {
                s.entries.push_back(
                    {"write_penalty_factor", format_double(t.write_penalty_factor), 0});
            }
        } else {
            s.entries.push_back({"read_latency_ns", format_u64(t.read_latency_ns), 0});
            s.entries.push_back({"write_latency_ns", format_u64(t.write_latency_ns), 0});
        }
        s.entries.push_back({"bandwidth_bytes_per_sec", format_u64(t.bandwidth_bytes_per_sec), 0});
        s.entries.push_back({"capacity_pages", format_u64(t.capacity_pages), 0});
        doc.sections.push_back(std::move(s));
    }
    for (const auto& d : config.devices) {
        Section s;
        s.kind = "device";
        s.name = d.name;
        s.entries.push_back({"kind", std::string(device_kind_name(d.kind)), 0});
        s.entries.push_back({"core_count", format_u64(d.core_count), 0});
        s.entries.push_back({"per_core_throughput_ops_per_sec",
                             format_double(d.per_core_throughput_ops_per_sec), 0});
        s.entries.push_back({"parallel_efficiency", format_double(d.parallel_efficiency), 0});
        doc.sections.push_back(std::move(s));
    }
    Section sys;
    sys.kind = "system";
    sys.entries.push_back({"page_size_bytes", format_u64(config.page_size_bytes), 0});
    sys.entries.push_back({"epoch_length_events", format_u64(config.epoch_length_events), 0});
    sys.entries.push_back(
        {"migration_fixed_cost_ns", format_u64(config.migration_fixed_cost_ns), 0});
    doc.sections.push_back(std::move(sys));
    return write_document(doc);
}

}  // namespace tiersim
