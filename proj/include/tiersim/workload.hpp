#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tiersim/bpm.hpp"
#include "tiersim/directive.hpp"
#include "tiersim/task_model.hpp"

namespace tiersim {

enum class AccessOp { kRead, kWrite };

struct AccessEvent {
    std::uint64_t seq_no = 0;
    PageId page_id = 0;
    AccessOp op = AccessOp::kRead;

    friend bool operator==(const AccessEvent&, const AccessEvent&) = default;
};

struct SymbolRange {
    PageId first_page = 0;
    std::uint64_t page_count = 0;

    bool covers(PageId page) const { return page >= first_page && page < first_page + page_count; }

    friend bool operator==(const SymbolRange&, const SymbolRange&) = default;
};

// Synthetic trace shape: per epoch, each hot symbol receives hot_accesses
// events and every other symbol cold_accesses, spread round-robin over the
// symbol's pages and shuffled within the epoch.
struct GeneratorParams {
    std::uint64_t epochs = 0;
    std::uint64_t hot_accesses_per_epoch = 0;
    std::uint64_t cold_accesses_per_epoch = 0;
    std::vector<std::string> hot_symbols;
    std::uint64_t seed = 0;

    friend bool operator==(const GeneratorParams&, const GeneratorParams&) = default;
};

struct Workload {
    std::vector<AllocationHint> manifest;
    std::vector<AccessEvent> trace;
    std::vector<TaskProfile> tasks;
    std::map<std::string, SymbolRange> symbol_to_pages;
    std::optional<GeneratorParams> generator;  // set when the trace was generated

    std::vector<PageId> pages_of(const std::string& symbol) const;
    std::uint64_t total_pages() const;

    friend bool operator==(const Workload&, const Workload&) = default;
};

std::vector<std::string> validate_workload(const Workload& workload);

// Workload document: [symbol NAME] and [task NAME] sections plus either a
// [generator] section or a [trace] section pointing at a trace file. Page
// ids are assigned consecutively in manifest order starting at zero.
// seed_override, when set, replaces the generator section's seed.
Workload parse_workload(std::string_view text, std::optional<std::uint64_t> seed_override = {},
                        std::string_view base_dir = {});

std::vector<AccessEvent> generate_trace(const GeneratorParams& params,
                                        const std::vector<AllocationHint>& manifest,
                                        const std::map<std::string, SymbolRange>& symbol_to_pages);

// Trace file: one event per line, "seq_no page_id r|w".
std::vector<AccessEvent> parse_trace(std::string_view text);
std::string serialize_trace(const std::vector<AccessEvent>& trace);

}  // namespace tiersim
