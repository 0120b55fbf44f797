#include "tiersim/simulator.hpp"

#include <algorithm>

#include <fmt/core.h>
#include <json.hpp>

#include "tiersim/error.hpp"
#include "tiersim/text_format.hpp"

namespace tiersim {

using nlohmann::json;

std::uint64_t access_latency(const MemoryTierSpec& tier, AccessOp op, bool page_hot) {
    if (!tier.frequency_sensitive()) {
        return op == AccessOp::kRead ? tier.read_latency_ns : tier.write_latency_ns;
    }
    std::uint64_t base = page_hot ? *tier.hot_read_latency_ns : *tier.cold_read_latency_ns;
    if (op == AccessOp::kRead) return base;
    return round_half_up(static_cast<double>(base) * tier.write_penalty_factor);
}

std::uint64_t expected_read_latency(const MemoryTierSpec& tier, AccessClass access_class) {
    if (!tier.frequency_sensitive()) return tier.read_latency_ns;
    return access_class == AccessClass::kHot ? *tier.hot_read_latency_ns
                                             : *tier.cold_read_latency_ns;
}

namespace {

std::uint64_t migration_cost_ns(const SystemConfig& config, const MemoryTierSpec& from,
                                const MemoryTierSpec& to) {
    std::uint64_t bw = std::min(from.bandwidth_bytes_per_sec, to.bandwidth_bytes_per_sec);
    double transfer_sec = static_cast<double>(config.page_size_bytes) / static_cast<double>(bw);
    return round_half_up(transfer_sec * 1e9) + config.migration_fixed_cost_ns;
}

const MemoryTierSpec& tier_or_throw(const SystemConfig& config, const std::string& name) {
    const MemoryTierSpec* tier = config.find_tier(name);
    if (tier == nullptr) throw Error(fmt::format("unknown tier '{}'", name));
    return *tier;
}

void require_valid(const SystemConfig& config, const PolicyDirective& directive,
                   const Workload& workload) {
    auto cv = validate_config(config);
    if (!cv.empty()) throw ValidationError(std::move(cv));
    auto dv = validate_directive(directive, config);
    if (!dv.empty()) throw ValidationError(std::move(dv));
    auto wv = validate_workload(workload);
    if (!wv.empty()) throw ValidationError(std::move(wv));
}

}  // namespace

SimulationResult run_simulation(const SystemConfig& config, const PolicyDirective& directive,
                                const Workload& workload, std::uint64_t seed) {
    (void)seed;  // inputs are already deterministic; the harness records it
    require_valid(config, directive, workload);

    SimulationResult result;
    Metrics& m = result.metrics;
    PlacementMap placement(config);

    // Page -> owning symbol's tier spec is resolved per event below; build a
    // page -> symbol index once.
    std::map<PageId, const AllocationHint*> page_owner;
    for (const auto& hint : workload.manifest) {
        const SymbolRange& range = workload.symbol_to_pages.at(hint.symbol);
        for (std::uint64_t i = 0; i < range.page_count; ++i) {
            page_owner[range.first_page + i] = &hint;
        }
    }

    for (const auto& hint : workload.manifest) {
        auto pages = workload.pages_of(hint.symbol);
        auto decisions = place(directive, hint, pages, placement);
        result.decisions.insert(result.decisions.end(), decisions.begin(), decisions.end());
    }

    std::map<PageId, PageCounters> prev_counters;
    std::size_t cursor = 0;
    std::uint64_t epoch = 0;
    while (cursor < workload.trace.size()) {
        std::size_t end = std::min(cursor + config.epoch_length_events, workload.trace.size());
        EpochMetrics em;
        em.epoch = epoch;
        std::map<PageId, PageCounters> counters;

        for (std::size_t i = cursor; i < end; ++i) {
            const AccessEvent& event = workload.trace[i];
            const MemoryTierSpec& tier = tier_or_throw(config, placement.tier_of(event.page_id));
            bool hot = false;
            if (tier.frequency_sensitive()) {
                auto it = prev_counters.find(event.page_id);
                hot = it != prev_counters.end() &&
                      it->second.accesses() >= *tier.hot_threshold_accesses_per_epoch;
            }
            em.access_latency_ns += access_latency(tier, event.op, hot);
            ++em.events;
            PageCounters& pc = counters[event.page_id];
            if (event.op == AccessOp::kRead) {
                ++pc.reads;
            } else {
                ++pc.writes;
            }
        }

        CounterSnapshot snapshot;
        snapshot.epoch_index = epoch;
        snapshot.pages = counters;
        snapshot.occupancy = placement.occupancies();

        EpochDecisions decisions = epoch_decisions(directive, snapshot, placement);
        result.truncated_proposals += decisions.truncated;
        for (const Decision& d : decisions.decisions) {
            const MemoryTierSpec& from = tier_or_throw(config, d.from_tier);
            const MemoryTierSpec& to = tier_or_throw(config, d.to_tier);
            apply_decision(d, placement);
            std::uint64_t cost = migration_cost_ns(config, from, to);
            em.migration_cost_ns += cost;
            ++em.migrations;
            result.decisions.push_back(d);
        }

        auto pv = placement.validate();
        if (!pv.empty()) throw ValidationError(std::move(pv));

        m.per_epoch.push_back(em);
        m.event_count += em.events;
        m.total_access_latency_ns += em.access_latency_ns;
        m.migration_count += em.migrations;
        m.migration_cost_ns += em.migration_cost_ns;

        prev_counters = std::move(counters);
        cursor = end;
        ++epoch;
    }

    m.migrated_bytes = m.migration_count * config.page_size_bytes;
    m.mean_access_latency_ns =
        m.event_count == 0
            ? 0.0
            : static_cast<double>(m.total_access_latency_ns) / static_cast<double>(m.event_count);

    // Task mapping and analytic makespan.
    std::map<std::string, double> device_load;
    for (const auto& task : workload.tasks) {
        Decision d = map_task(directive, task, config.devices);
        const ComputeDeviceSpec* device = config.find_device(d.to_tier);
        double t = estimate_task_time(task, *device);
        m.tasks.push_back({task.name, device->name, t});
        device_load[device->name] += t;
        result.decisions.push_back(std::move(d));
    }
    for (const auto& [device, load] : device_load) {
        m.makespan_sec = std::max(m.makespan_sec, load);
    }

    for (const auto& [page, tier] : placement.pages()) {
        m.final_placement[tier].push_back(page);
    }
    return result;
}

std::string metrics_to_json(const Metrics& m) {
    json root;
    root["event_count"] = m.event_count;
    root["total_access_latency_ns"] = m.total_access_latency_ns;
    root["mean_access_latency_ns"] = m.mean_access_latency_ns;
    root["migration_count"] = m.migration_count;
    root["migrated_bytes"] = m.migrated_bytes;
    root["migration_cost_ns"] = m.migration_cost_ns;
    json epochs = json::array();
    for (const auto& e : m.per_epoch) {
        epochs.push_back({{"epoch", e.epoch},
                          {"events", e.events},
                          {"access_latency_ns", e.access_latency_ns},
                          {"migrations", e.migrations},
                          {"migration_cost_ns", e.migration_cost_ns}});
    }
    root["per_epoch"] = std::move(epochs);
    json tasks = json::array();
    for (const auto& t : m.tasks) {
        tasks.push_back({{"task", t.task},
                         {"device", t.device},
                         {"estimated_time_sec", t.estimated_time_sec}});
    }
    root["tasks"] = std::move(tasks);
    root["makespan_sec"] = m.makespan_sec;
    root["final_placement"] = m.final_placement;
    return root.dump(2) + "\n";
}

Metrics metrics_from_json(std::string_view json_text) {
    json root = json::parse(json_text);
    Metrics m;
    m.event_count = root.at("event_count").get<std::uint64_t>();
    m.total_access_latency_ns = root.at("total_access_latency_ns").get<std::uint64_t>();
    m.mean_access_latency_ns = root.at("mean_access_latency_ns").get<double>();
    m.migration_count = root.at("migration_count").get<std::uint64_t>();
    m.migrated_bytes = root.at("migrated_bytes").get<std::uint64_t>();
    m.migration_cost_ns = root.at("migration_cost_ns").get<std::uint64_t>();
    for (const auto& e : root.at("per_epoch")) {
        m.per_epoch.push_back({e.at("epoch").get<std::uint64_t>(),
                               e.at("events").get<std::uint64_t>(),
                               e.at("access_latency_ns").get<std::uint64_t>(),
                               e.at("migrations").get<std::uint64_t>(),
                               e.at("migration_cost_ns").get<std::uint64_t>()});
    }
    for (const auto& t : root.at("tasks")) {
        m.tasks.push_back({t.at("task").get<std::string>(), t.at("device").get<std::string>(),
                           t.at("estimated_time_sec").get<double>()});
    }
    m.makespan_sec = root.at("makespan_sec").get<double>();
    m.final_placement =
        root.at("final_placement").get<std::map<std::string, std::vector<PageId>>>();
    return m;
}

std::string metrics_to_csv(const Metrics& m, std::string_view policy) {
    std::string out;
    for (const auto& e : m.per_epoch) {
        out += fmt::format("{},{},{},{},{},{}\n", policy, e.epoch, e.events, e.access_latency_ns,
                           e.migrations, e.migration_cost_ns);
    }
    return out;
}

bool oracle_within_bound(const SystemConfig& config, const Workload& workload) {
    std::uint64_t assignments = 1;
    for (std::size_t i = 0; i < workload.manifest.size(); ++i) {
        assignments *= config.tiers.size();
        if (assignments > kOracleAssignmentBound) return false;
    }
    return true;
}

OracleResult static_oracle(const SystemConfig& config, const Workload& workload) {
    if (!oracle_within_bound(config, workload)) {
        throw Error(fmt::format("static_oracle: instance too large ({} tiers ^ {} symbols > {})",
                                config.tiers.size(), workload.manifest.size(),
                                kOracleAssignmentBound));
    }
    const std::size_t n_symbols = workload.manifest.size();
    const std::size_t n_tiers = config.tiers.size();

    std::vector<std::size_t> assignment(n_symbols, 0);
    std::vector<std::size_t> best;
    std::uint64_t best_latency = 0;
    bool found = false;

    auto feasible = [&]() {
        std::vector<std::uint64_t> used(n_tiers, 0);
        for (std::size_t s = 0; s < n_symbols; ++s) {
            used[assignment[s]] += workload.manifest[s].size_pages;
        }
        for (std::size_t t = 0; t < n_tiers; ++t) {
            if (used[t] > config.tiers[t].capacity_pages) return false;
        }
        return true;
    };

    // Page -> tier index under the current assignment.
    std::map<PageId, std::size_t> page_symbol;
    for (std::size_t s = 0; s < n_symbols; ++s) {
        const SymbolRange& range = workload.symbol_to_pages.at(workload.manifest[s].symbol);
        for (std::uint64_t i = 0; i < range.page_count; ++i) {
            page_symbol[range.first_page + i] = s;
        }
    }

    auto replay = [&]() {
        std::uint64_t total = 0;
        std::map<PageId, std::uint64_t> prev_accesses;
        std::size_t cursor = 0;
        while (cursor < workload.trace.size()) {
            std::size_t end = std::min(cursor + config.epoch_length_events, workload.trace.size());
            std::map<PageId, std::uint64_t> accesses;
            for (std::size_t i = cursor; i < end; ++i) {
                const AccessEvent& event = workload.trace[i];
                const MemoryTierSpec& tier =
                    config.tiers[assignment[page_symbol.at(event.page_id)]];
                bool hot = false;
                if (tier.frequency_sensitive()) {
                    auto it = prev_accesses.find(event.page_id);
                    hot = it != prev_accesses.end() &&
                          it->second >= *tier.hot_threshold_accesses_per_epoch;
                }
                total += access_latency(tier, event.op, hot);
                ++accesses[event.page_id];
            }
            prev_accesses = std::move(accesses);
            cursor = end;
        }
        return total;
    };

    // Odometer enumeration is lexicographic, so keeping strictly-better
    // candidates implements the tie-break.
    while (true) {
        if (feasible()) {
            std::uint64_t total = replay();
            if (!found || total < best_latency) {
                found = true;
                best_latency = total;
                best = assignment;
            }
        }
        std::size_t pos = n_symbols;
        bool done = false;
        while (true) {
            if (pos == 0) {
                done = true;
                break;
            }
            --pos;
            if (++assignment[pos] < n_tiers) break;
            assignment[pos] = 0;
        }
        if (done) break;
    }

    if (!found) throw Error("static_oracle: no capacity-feasible placement");
    OracleResult result;
    result.total_latency_ns = best_latency;
    for (std::size_t s = 0; s < n_symbols; ++s) {
        result.placement[workload.manifest[s].symbol] = config.tiers[best[s]].name;
    }
    return result;
}

}  // namespace tiersim
