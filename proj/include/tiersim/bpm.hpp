#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tiersim/directive.hpp"
#include "tiersim/system_model.hpp"
#include "tiersim/task_model.hpp"

namespace tiersim {

using PageId = std::uint64_t;

// Page -> tier mapping plus per-tier occupancy, bounded by the capacities of
// the config it was built from. Each page lives in exactly one tier.
class PlacementMap {
public:
    PlacementMap() = default;
    explicit PlacementMap(const SystemConfig& config);

    void assign(PageId page, const std::string& tier);
    void move(PageId page, const std::string& to_tier);

    bool contains(PageId page) const { return page_tier_.find(page) != page_tier_.end(); }
    const std::string& tier_of(PageId page) const;
    std::uint64_t occupancy(const std::string& tier) const;
    std::uint64_t capacity(const std::string& tier) const;
    std::uint64_t free_pages(const std::string& tier) const;

    const std::map<PageId, std::string>& pages() const { return page_tier_; }
    const std::map<std::string, std::uint64_t>& occupancies() const { return occupancy_; }

    // Internal-consistency violations (occupancy mismatch, over-capacity).
    std::vector<std::string> validate() const;

    friend bool operator==(const PlacementMap&, const PlacementMap&) = default;

private:
    std::map<PageId, std::string> page_tier_;
    std::map<std::string, std::uint64_t> occupancy_;
    std::map<std::string, std::uint64_t> capacity_;
};

struct PageCounters {
    std::uint64_t reads = 0;
    std::uint64_t writes = 0;

    std::uint64_t accesses() const { return reads + writes; }

    friend bool operator==(const PageCounters&, const PageCounters&) = default;
};

// The simulated hardware counters for one epoch.
struct CounterSnapshot {
    std::uint64_t epoch_index = 0;
    std::map<PageId, PageCounters> pages;
    std::map<std::string, std::uint64_t> occupancy;

    friend bool operator==(const CounterSnapshot&, const CounterSnapshot&) = default;
};

struct Decision {
    enum class Kind { kPlace, kMigrate, kMapTask };

    Kind kind = Kind::kPlace;
    std::int64_t epoch = 0;  // -1 for decisions outside the epoch loop
    PageId page = 0;
    std::string task;
    std::string from_tier;  // migrate only
    std::string to_tier;    // target tier, or device for kMapTask
    std::string reason;

    friend bool operator==(const Decision&, const Decision&) = default;
};

// One decision per line: epoch, variant, page/task, source, target, reason.
std::string decision_line(const Decision& d);
std::string decision_log_to_lines(const std::vector<Decision>& decisions);

struct EpochDecisions {
    std::vector<Decision> decisions;
    std::uint64_t truncated = 0;  // proposals dropped for lack of capacity
};

// Initial placement of one hint's pages: first tier in the matched rule's
// ranking with room for the whole hint, then the catch-all's ranking.
// Throws InfeasibleAllocation when nothing fits. Emits one Place per page.
std::vector<Decision> place(const PolicyDirective& directive, const AllocationHint& hint,
                            std::span<const PageId> pages, PlacementMap& placement);

// Epoch-boundary migrations. Per rule in directive order: demotions out of
// the target tier first (metric <= threshold_down, coldest first), then
// promotions (metric >= threshold_up, hottest first) admitted until the
// target is full. A page gets at most one decision per epoch, so a page that
// just moved up cannot be demoted in the same list. Ties break on lower page
// id. The returned list applied in order never overflows a tier.
EpochDecisions epoch_decisions(const PolicyDirective& directive, const CounterSnapshot& snapshot,
                               const PlacementMap& placement);

// First matching task rule wins; with no match, the device with the minimum
// estimated time (ties: declaration order).
Decision map_task(const PolicyDirective& directive, const TaskProfile& task,
                  std::span<const ComputeDeviceSpec> devices);

// Applies one decision to the placement (no-op for kMapTask).
void apply_decision(const Decision& d, PlacementMap& placement);

}  // namespace tiersim
