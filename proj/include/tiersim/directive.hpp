#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tiersim/system_model.hpp"
#include "tiersim/task_model.hpp"

namespace tiersim {

enum class Affinity { kHost, kDevice, kNone };
enum class AccessClass { kHot, kCold, kUnknown };
enum class AccessPattern { kSequential, kRandom, kUnknown };

// Machine-readable form of what a frontend inferred about one variable.
struct AllocationHint {
    std::string symbol;
    std::uint64_t size_pages = 1;
    Affinity affinity = Affinity::kNone;
    AccessClass access_class = AccessClass::kUnknown;
    AccessPattern access_pattern = AccessPattern::kUnknown;

    friend bool operator==(const AllocationHint&, const AllocationHint&) = default;
};

// Conjunction of optional equality constraints; empty predicate matches
// everything (the catch-all).
struct HintPredicate {
    std::optional<std::string> symbol;
    std::optional<Affinity> affinity;
    std::optional<AccessClass> access_class;
    std::optional<AccessPattern> access_pattern;

    bool matches(const AllocationHint& hint) const;
    bool always_matches() const;

    friend bool operator==(const HintPredicate&, const HintPredicate&) = default;
};

struct PlacementRule {
    HintPredicate match;
    std::vector<std::string> tiers;  // ranked, best first

    friend bool operator==(const PlacementRule&, const PlacementRule&) = default;
};

enum class MigrationMetric { kAccessesPerEpoch, kWritesPerEpoch };

struct MigrationRule {
    MigrationMetric metric = MigrationMetric::kAccessesPerEpoch;
    std::uint64_t threshold_up = 1;
    std::uint64_t threshold_down = 0;  // must stay < threshold_up
    std::string target_tier;

    friend bool operator==(const MigrationRule&, const MigrationRule&) = default;
};

struct TaskPredicate {
    std::optional<std::string> task;
    std::optional<bool> pointer_chasing;
    std::optional<bool> memory_bound;
    std::optional<double> min_parallel_fraction;

    bool matches(const TaskProfile& profile) const;

    friend bool operator==(const TaskPredicate&, const TaskPredicate&) = default;
};

struct TaskRule {
    TaskPredicate match;
    std::string device;

    friend bool operator==(const TaskRule&, const TaskRule&) = default;
};

struct Provenance {
    std::string frontend_id;
    std::string description_digest;

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

// Compiled policy: what the backend executes at runtime. Always ends with a
// catch-all placement rule; every name refers to the config it was compiled
// against.
struct PolicyDirective {
    std::uint32_t version = 1;
    std::vector<PlacementRule> placement_rules;
    std::vector<MigrationRule> migration_rules;
    std::vector<TaskRule> task_rules;
    Provenance provenance;

    const PlacementRule& catch_all() const { return placement_rules.back(); }

    friend bool operator==(const PolicyDirective&, const PolicyDirective&) = default;
};

// Empty report = valid against this config.
std::vector<std::string> validate_directive(const PolicyDirective& directive,
                                            const SystemConfig& config);

// Canonical JSON (sorted keys, two-space indent, trailing newline).
std::string directive_to_json(const PolicyDirective& directive);
// Strict: unknown fields and a missing version are rejected.
PolicyDirective directive_from_json(std::string_view json_text);

std::string_view affinity_name(Affinity a);
std::string_view access_class_name(AccessClass c);
std::string_view access_pattern_name(AccessPattern p);
Affinity affinity_from_name(std::string_view s);
AccessClass access_class_from_name(std::string_view s);
AccessPattern access_pattern_from_name(std::string_view s);
std::string_view migration_metric_name(MigrationMetric m);
MigrationMetric migration_metric_from_name(std::string_view s);

}  // namespace tiersim
