#include "tiersim/directive.hpp"

#include <set>

#include <fmt/core.h>
#include <json.hpp>

#include "tiersim/error.hpp"

namespace tiersim {

using nlohmann::json;

bool HintPredicate::matches(const AllocationHint& hint) const {
    if (symbol && *symbol != hint.symbol) return false;
    if (affinity && *affinity != hint.affinity) return false;
    if (access_class && *access_class != hint.access_class) return false;
    if (access_pattern && *access_pattern != hint.access_pattern) return false;
    return true;
}

bool HintPredicate::always_matches() const {
    return !symbol && !affinity && !access_class && !access_pattern;
}

bool TaskPredicate::matches(const TaskProfile& profile) const {
    if (task && *task != profile.name) return false;
    if (pointer_chasing && *pointer_chasing != profile.pointer_chasing) return false;
    if (memory_bound && *memory_bound != profile.memory_bound) return false;
    if (min_parallel_fraction && profile.parallel_fraction < *min_parallel_fraction) return false;
    return true;
}

std::string_view affinity_name(Affinity a) {
    switch (a) {
        case Affinity::kHost: return "host";
        case Affinity::kDevice: return "device";
        case Affinity::kNone: return "none";
    }
    return "none";
}

std::string_view access_class_name(AccessClass c) {
    switch (c) {
        case AccessClass::kHot: return "hot";
        case AccessClass::kCold: return "cold";
        case AccessClass::kUnknown: return "unknown";
    }
    return "unknown";
}

std::string_view access_pattern_name(AccessPattern p) {
    switch (p) {
        case AccessPattern::kSequential: return "sequential";
        case AccessPattern::kRandom: return "random";
        case AccessPattern::kUnknown: return "unknown";
    }
    return "unknown";
}

Affinity affinity_from_name(std::string_view s) {
    if (s == "host") return Affinity::kHost;
    if (s == "device") return Affinity::kDevice;
    if (s == "none") return Affinity::kNone;
    throw Error(fmt::format("unknown affinity '{}'", s));
}

AccessClass access_class_from_name(std::string_view s) {
    if (s == "hot") return AccessClass::kHot;
    if (s == "cold") return AccessClass::kCold;
    if (s == "unknown") return AccessClass::kUnknown;
    throw Error(fmt::format("unknown access class '{}'", s));
}

AccessPattern access_pattern_from_name(std::string_view s) {
    if (s == "sequential") return AccessPattern::kSequential;
    if (s == "random") return AccessPattern::kRandom;
    if (s == "unknown") return AccessPattern::kUnknown;
    throw Error(fmt::format("unknown access pattern '{}'", s));
}

std::string_view migration_metric_name(MigrationMetric m) {
    return m == MigrationMetric::kAccessesPerEpoch ? "accesses_per_epoch" : "writes_per_epoch";
}

MigrationMetric migration_metric_from_name(std::string_view s) {
    if (s == "accesses_per_epoch") return MigrationMetric::kAccessesPerEpoch;
    if (s == "writes_per_epoch") return MigrationMetric::kWritesPerEpoch;
    throw Error(fmt::format("unknown migration metric '{}'", s));
}

std::vector<std::string> validate_directive(const PolicyDirective& directive,
                                            const SystemConfig& config) {
    std::vector<std::string> v;
    if (directive.version == 0) v.push_back("directive: version must be >= 1");

    if (directive.placement_rules.empty()) {
        v.push_back("directive: placement_rules must end with a catch-all rule");
    } else if (!directive.placement_rules.back().match.always_matches()) {
        v.push_back("directive: last placement rule must be a catch-all (empty match)");
    }
    for (std::size_t i = 0; i < directive.placement_rules.size(); ++i) {
        const auto& rule = directive.placement_rules[i];
        if (rule.tiers.empty()) {
            v.push_back(fmt::format("placement rule {}: empty tier ranking", i));
        }
        for (const auto& tier : rule.tiers) {
            if (config.find_tier(tier) == nullptr) {
                v.push_back(fmt::format("placement rule {}: unknown tier '{}'", i, tier));
            }
        }
    }
    for (std::size_t i = 0; i < directive.migration_rules.size(); ++i) {
        const auto& rule = directive.migration_rules[i];
        if (rule.threshold_down >= rule.threshold_up) {
            v.push_back(fmt::format(
                "migration rule {}: threshold_down {} must be < threshold_up {}", i,
                rule.threshold_down, rule.threshold_up));
        }
        if (config.find_tier(rule.target_tier) == nullptr) {
            v.push_back(fmt::format("migration rule {}: unknown target tier '{}'", i,
                                    rule.target_tier));
        }
    }
    for (std::size_t i = 0; i < directive.task_rules.size(); ++i) {
        const auto& rule = directive.task_rules[i];
        if (config.find_device(rule.device) == nullptr) {
            v.push_back(fmt::format("task rule {}: unknown device '{}'", i, rule.device));
        }
        if (rule.match.min_parallel_fraction &&
            (*rule.match.min_parallel_fraction < 0.0 || *rule.match.min_parallel_fraction > 1.0)) {
            v.push_back(fmt::format("task rule {}: min_parallel_fraction out of [0, 1]", i));
        }
    }
    return v;
}

namespace {

json hint_predicate_to_json(const HintPredicate& p) {
    json m = json::object();
    if (p.symbol) m["symbol"] = *p.symbol;
    if (p.affinity) m["affinity"] = std::string(affinity_name(*p.affinity));
    if (p.access_class) m["access_class"] = std::string(access_class_name(*p.access_class));
    if (p.access_pattern) m["access_pattern"] = std::string(access_pattern_name(*p.access_pattern));
    return m;
}

json task_predicate_to_json(const TaskPredicate& p) {
    json m = json::object();
    if (p.task) m["task"] = *p.task;
    if (p.pointer_chasing) m["pointer_chasing"] = *p.pointer_chasing;
    if (p.memory_bound) m["memory_bound"] = *p.memory_bound;
    if (p.min_parallel_fraction) m["min_parallel_fraction"] = *p.min_parallel_fraction;
    return m;
}

void require_keys(const json& obj, const std::set<std::string>& allowed, const char* where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (allowed.find(it.key()) == allowed.end()) {
            throw Error(fmt::format("directive: unknown field '{}' in {}", it.key(), where));
        }
    }
}

HintPredicate hint_predicate_from_json(const json& m) {
    require_keys(m, {"symbol", "affinity", "access_class", "access_pattern"}, "placement match");
    HintPredicate p;
    if (m.contains("symbol")) p.symbol = m.at("symbol").get<std::string>();
    if (m.contains("affinity")) p.affinity = affinity_from_name(m.at("affinity").get<std::string>());
    if (m.contains("access_class"))
        p.access_class = access_class_from_name(m.at("access_class").get<std::string>());
    if (m.contains("access_pattern"))
        p.access_pattern = access_pattern_from_name(m.at("access_pattern").get<std::string>());
    return p;
}

TaskPredicate task_predicate_from_json(const json& m) {
    require_keys(m, {"task", "pointer_chasing", "memory_bound", "min_parallel_fraction"},
                 "task match");
    TaskPredicate p;
    if (m.contains("task")) p.task = m.at("task").get<std::string>();
    if (m.contains("pointer_chasing")) p.pointer_chasing = m.at("pointer_chasing").get<bool>();
    if (m.contains("memory_bound")) p.memory_bound = m.at("memory_bound").get<bool>();
    if (m.contains("min_parallel_fraction"))
        p.min_parallel_fraction = m.at("min_parallel_fraction").get<double>();
    return p;
}

}  // namespace

std::string directive_to_json(const PolicyDirective& d) {
    json root;
    root["version"] = d.version;
    json placement = json::array();
    for (const auto& rule : d.placement_rules) {
        json r;
        r["match"] = hint_predicate_to_json(rule.match);
        r["tiers"] = rule.tiers;
        placement.push_back(std::move(r));
    }
    root["placement_rules"] = std::move(placement);
    json migration = json::array();
    for (const auto& rule : d.migration_rules) {
        json r;
        r["metric"] = std::string(migration_metric_name(rule.metric));
        r["threshold_up"] = rule.threshold_up;
        r["threshold_down"] = rule.threshold_down;
        r["target_tier"] = rule.target_tier;
        migration.push_back(std::move(r));
    }
    root["migration_rules"] = std::move(migration);
    json tasks = json::array();
    for (const auto& rule : d.task_rules) {
        json r;
        r["match"] = task_predicate_to_json(rule.match);
        r["device"] = rule.device;
        tasks.push_back(std::move(r));
    }
    root["task_rules"] = std::move(tasks);
    root["provenance"] = {{"frontend_id", d.provenance.frontend_id},
                          {"description_digest", d.provenance.description_digest}};
    return root.dump(2) + "\n";
}

PolicyDirective directive_from_json(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(fmt::format("directive: invalid JSON: {}", e.what()));
    }
    if (!root.is_object()) throw Error("directive: top level must be an object");
    require_keys(root, {"version", "placement_rules", "migration_rules", "task_rules", "provenance"},
                 "directive");
    if (!root.contains("version")) throw Error("directive: missing mandatory field 'version'");

    PolicyDirective d;
    d.version = root.at("version").get<std::uint32_t>();
    if (root.contains("placement_rules")) {
        for (const auto& r : root.at("placement_rules")) {
            require_keys(r, {"match", "tiers"}, "placement rule");
            PlacementRule rule;
            rule.match = hint_predicate_from_json(r.at("match"));
            rule.tiers = r.at("tiers").get<std::vector<std::string>>();
            d.placement_rules.push_back(std::move(rule));
        }
    }
    if (root.contains("migration_rules")) {
        for (const auto& r : root.at("migration_rules")) {
            require_keys(r, {"metric", "threshold_up", "threshold_down", "target_tier"},
                         "migration rule");
            MigrationRule rule;
            rule.metric = migration_metric_from_name(r.at("metric").get<std::string>());
            rule.threshold_up = r.at("threshold_up").get<std::uint64_t>();
            rule.threshold_down = r.at("threshold_down").get<std::uint64_t>();
            rule.target_tier = r.at("target_tier").get<std::string>();
            d.migration_rules.push_back(std::move(rule));
        }
    }
    if (root.contains("task_rules")) {
        for (const auto& r : root.at("task_rules")) {
            require_keys(r, {"match", "device"}, "task rule");
            TaskRule rule;
            rule.match = task_predicate_from_json(r.at("match"));
            rule.device = r.at("device").get<std::string>();
            d.task_rules.push_back(std::move(rule));
        }
    }
    if (root.contains("provenance")) {
        const auto& p = root.at("provenance");
        require_keys(p, {"frontend_id", "description_digest"}, "provenance");
        d.provenance.frontend_id = p.value("frontend_id", "");
        d.provenance.description_digest = p.value("description_digest", "");
    }
    return d;
}

}  // namespace tiersim
