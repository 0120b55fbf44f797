#include "tiersim/bpm.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include <fmt/core.h>

#include "tiersim/error.hpp"

namespace tiersim {

PlacementMap::PlacementMap(const SystemConfig& config) {
    for (const auto& tier : config.tiers) {
        capacity_[tier.name] = tier.capacity_pages;
        occupancy_[tier.name] = 0;
    }
}

void PlacementMap::assign(PageId page, const std::string& tier) {
    auto cap = capacity_.find(tier);
    if (cap == capacity_.end()) throw Error(fmt::format("placement: unknown tier '{}'", tier));
    if (page_tier_.find(page) != page_tier_.end()) {
        throw Error(fmt::format("placement: page {} already placed", page));
    }
    if (occupancy_[tier] >= cap->second) {
        throw Error(fmt::format("placement: tier '{}' is full", tier));
    }
    page_tier_[page] = tier;
    ++occupancy_[tier];
}

void PlacementMap::move(PageId page, const std::string& to_tier) {
    auto it = page_tier_.find(page);
    if (it == page_tier_.end()) throw Error(fmt::format("placement: unknown page {}", page));
    auto cap = capacity_.find(to_tier);
    if (cap == capacity_.end()) throw Error(fmt::format("placement: unknown tier '{}'", to_tier));
    if (it->second == to_tier) return;
    if (occupancy_[to_tier] >= cap->second) {
        throw Error(fmt::format("placement: tier '{}' is full", to_tier));
    }
    --occupancy_[it->second];
    ++occupancy_[to_tier];
    it->second = to_tier;
}

const std::string& PlacementMap::tier_of(PageId page) const {
    auto it = page_tier_.find(page);
    if (it == page_tier_.end()) throw Error(fmt::format("placement: unknown page {}", page));
    return it->second;
}

std::uint64_t PlacementMap::occupancy(const std::string& tier) const {
    auto it = occupancy_.find(tier);
    return it == occupancy_.end() ? 0 : it->second;
}

std::uint64_t PlacementMap::capacity(const std::string& tier) const {
    auto it = capacity_.find(tier);
    return it == capacity_.end() ? 0 : it->second;
}

std::uint64_t PlacementMap::free_pages(const std::string& tier) const {
    return capacity(tier) - occupancy(tier);
}

std::vector<std::string> PlacementMap::validate() const {
    std::vector<std::string> v;
    std::map<std::string, std::uint64_t> counted;
    for (const auto& [page, tier] : page_tier_) {
        if (capacity_.find(tier) == capacity_.end()) {
            v.push_back(fmt::format("page {} resides in unknown tier '{}'", page, tier));
        }
        ++counted[tier];
    }
    for (const auto& [tier, cap] : capacity_) {
        std::uint64_t expected = counted.count(tier) ? counted.at(tier) : 0;
        if (occupancy(tier) != expected) {
            v.push_back(fmt::format("tier '{}': occupancy {} != mapped page count {}", tier,
                                    occupancy(tier), expected));
        }
        if (occupancy(tier) > cap) {
            v.push_back(fmt::format("tier '{}': occupancy {} exceeds capacity {}", tier,
                                    occupancy(tier), cap));
        }
    }
    return v;
}

std::string decision_line(const Decision& d) {
    std::string epoch = d.epoch < 0 ? "-" : format_u64(static_cast<std::uint64_t>(d.epoch));
    switch (d.kind) {
        case Decision::Kind::kPlace:
            return fmt::format("{}\tplace\t{}\t-\t{}\t{}", epoch, d.page, d.to_tier, d.reason);
        case Decision::Kind::kMigrate:
            return fmt::format("{}\tmigrate\t{}\t{}\t{}\t{}", epoch, d.page, d.from_tier, d.to_tier,
                               d.reason);
        case Decision::Kind::kMapTask:
            return fmt::format("{}\tmap\t{}\t-\t{}\t{}", epoch, d.task, d.to_tier, d.reason);
    }
    return {};
}

std::string decision_log_to_lines(const std::vector<Decision>& decisions) {
    std::string out;
    for (const auto& d : decisions) {
        out += decision_line(d);
        out += '\n';
    }
    return out;
}

namespace {

const PlacementRule* first_matching_rule(const PolicyDirective& directive,
                                         const AllocationHint& hint) {
    for (const auto& rule : directive.placement_rules) {
        if (rule.match.matches(hint)) return &rule;
    }
    return nullptr;
}

std::uint64_t metric_value(MigrationMetric metric, const PageCounters& counters) {
    return metric == MigrationMetric::kAccessesPerEpoch ? counters.accesses() : counters.writes;
}

std::string placement_reason(const HintPredicate& match, std::size_t rule_index) {
    if (match.always_matches()) return fmt::format("placement[{}]:catch-all", rule_index);
    std::string parts;
    auto add = [&parts](std::string_view k, std::string_view v) {
        if (!parts.empty()) parts += ',';
        parts += k;
        parts += '=';
        parts += v;
    };
    if (match.symbol) add("symbol", *match.symbol);
    if (match.affinity) add("affinity", affinity_name(*match.affinity));
    if (match.access_class) add("class", access_class_name(*match.access_class));
    if (match.access_pattern) add("pattern", access_pattern_name(*match.access_pattern));
    return fmt::format("placement[{}]:{}", rule_index, parts);
}

}  // namespace

std::vector<Decision> place(const PolicyDirective& directive, const AllocationHint& hint,
                            std::span<const PageId> pages, PlacementMap& placement) {
    if (hint.size_pages == 0 || pages.size() != hint.size_pages) {
        throw Error(fmt::format("place: hint '{}' expects {} pages, got {}", hint.symbol,
                                hint.size_pages, pages.size()));
    }
    const PlacementRule* matched = first_matching_rule(directive, hint);
    if (matched == nullptr) {
        throw Error(fmt::format("place: no placement rule matches hint '{}'", hint.symbol));
    }
    std::size_t matched_index =
        static_cast<std::size_t>(matched - directive.placement_rules.data());

    // Candidate ranking: the matched rule's tiers, then the catch-all's.
    std::vector<std::pair<const std::string*, std::size_t>> candidates;
    std::set<std::string_view> seen;
    for (const auto& tier : matched->tiers) {
        if (seen.insert(tier).second) candidates.push_back({&tier, matched_index});
    }
    const PlacementRule& fallback = directive.catch_all();
    std::size_t fallback_index = directive.placement_rules.size() - 1;
    for (const auto& tier : fallback.tiers) {
        if (seen.insert(tier).second) candidates.push_back({&tier, fallback_index});
    }

    for (const auto& [tier, rule_index] : candidates) {
        if (placement.free_pages(*tier) < hint.size_pages) continue;
        std::vector<Decision> decisions;
        decisions.reserve(pages.size());
        std::string reason =
            placement_reason(directive.placement_rules[rule_index].match, rule_index);
        for (PageId page : pages) {
            placement.assign(page, *tier);
            Decision d;
            d.kind = Decision::Kind::kPlace;
            d.epoch = 0;
            d.page = page;
            d.to_tier = *tier;
            d.reason = reason;
            decisions.push_back(std::move(d));
        }
        return decisions;
    }
    throw InfeasibleAllocation(
        fmt::format("no tier can hold hint '{}' ({} pages)", hint.symbol, hint.size_pages));
}

EpochDecisions epoch_decisions(const PolicyDirective& directive, const CounterSnapshot& snapshot,
                               const PlacementMap& placement) {
    for (const auto& [page, counters] : snapshot.pages) {
        if (!placement.contains(page)) {
            throw Error(fmt::format("epoch_decisions: snapshot page {} not in placement", page));
        }
    }

    EpochDecisions out;
    // Working copies so admission sees the effect of decisions made earlier
    // in this same list.
    std::map<std::string, std::uint64_t> occupancy;
    for (const auto& [tier, occ] : placement.occupancies()) occupancy[tier] = occ;
    std::map<PageId, std::string> current;
    std::set<PageId> decided;

    auto tier_of = [&](PageId page) -> const std::string& {
        auto it = current.find(page);
        return it != current.end() ? it->second : placement.tier_of(page);
    };
    auto emit = [&](PageId page, const std::string& to, const std::string& reason) {
        const std::string from = tier_of(page);
        --occupancy[from];
        ++occupancy[to];
        current[page] = to;
        decided.insert(page);
        Decision d;
        d.kind = Decision::Kind::kMigrate;
        d.epoch = static_cast<std::int64_t>(snapshot.epoch_index);
        d.page = page;
        d.from_tier = from;
        d.to_tier = to;
        d.reason = reason;
        out.decisions.push_back(std::move(d));
    };

    const std::string& sink = directive.catch_all().tiers.front();

    struct Candidate {
        std::uint64_t metric;
        PageId page;
    };

    for (std::size_t i = 0; i < directive.migration_rules.size(); ++i) {
        const MigrationRule& rule = directive.migration_rules[i];

        std::vector<Candidate> demotions;
        std::vector<Candidate> promotions;
        for (const auto& [page, counters] : snapshot.pages) {
            if (decided.count(page)) continue;
            std::uint64_t m = metric_value(rule.metric, counters);
            const std::string& tier = tier_of(page);
            if (tier == rule.target_tier) {
                if (m <= rule.threshold_down && sink != rule.target_tier) {
                    demotions.push_back({m, page});
                }
            } else if (m >= rule.threshold_up) {
                promotions.push_back({m, page});
            }
        }

        std::sort(demotions.begin(), demotions.end(), [](const Candidate& a, const Candidate& b) {
            if (a.metric != b.metric) return a.metric < b.metric;  // coldest first
            return a.page < b.page;
        });
        std::sort(promotions.begin(), promotions.end(), [](const Candidate& a, const Candidate& b) {
            if (a.metric != b.metric) return a.metric > b.metric;  // hottest first
            return a.page < b.page;
        });

        std::uint64_t sink_capacity = placement.capacity(sink);
        for (const Candidate& c : demotions) {
            if (occupancy[sink] >= sink_capacity) {
                ++out.truncated;
                continue;
            }
            emit(c.page, sink, fmt::format("migration[{}]:demote:{}<={}", i,
                                           migration_metric_name(rule.metric),
                                           rule.threshold_down));
        }

        std::uint64_t target_capacity = placement.capacity(rule.target_tier);
        for (const Candidate& c : promotions) {
            if (occupancy[rule.target_tier] >= target_capacity) {
                ++out.truncated;
                continue;
            }
            emit(c.page, rule.target_tier,
                 fmt::format("migration[{}]:promote:{}>={}", i, migration_metric_name(rule.metric),
                             rule.threshold_up));
        }
    }
    return out;
}

Decision map_task(const PolicyDirective& directive, const TaskProfile& task,
                  std::span<const ComputeDeviceSpec> devices) {
    if (devices.empty()) throw Error("map_task: no devices");

    Decision d;
    d.kind = Decision::Kind::kMapTask;
    d.epoch = -1;
    d.task = task.name;

    for (std::size_t i = 0; i < directive.task_rules.size(); ++i) {
        const TaskRule& rule = directive.task_rules[i];
        if (!rule.match.matches(task)) continue;
        bool known = false;
        for (const auto& dev : devices) known = known || dev.name == rule.device;
        if (!known) {
            throw Error(fmt::format("task rule {} references unknown device '{}'", i, rule.device));
        }
        d.to_tier = rule.device;
        d.reason = fmt::format("task[{}]", i);
        return d;
    }

    double best_time = std::numeric_limits<double>::infinity();
    const ComputeDeviceSpec* best = nullptr;
    for (const auto& dev : devices) {
        double t = estimate_task_time(task, dev);
        if (t < best_time) {
            best_time = t;
            best = &dev;
        }
    }
    d.to_tier = best->name;
    d.reason = "task:min-estimated-time";
    return d;
}

void apply_decision(const Decision& d, PlacementMap& placement) {
    switch (d.kind) {
        case Decision::Kind::kPlace:
            placement.assign(d.page, d.to_tier);
            break;
        case Decision::Kind::kMigrate:
            placement.move(d.page, d.to_tier);
            break;
        case Decision::Kind::kMapTask:
            break;
    }
}

}  // namespace tiersim
