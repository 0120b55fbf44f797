#include "tiersim/workload.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/core.h>

#include "tiersim/error.hpp"
#include "tiersim/rng.hpp"
#include "tiersim/text_format.hpp"

namespace tiersim {

std::vector<PageId> Workload::pages_of(const std::string& symbol) const {
    auto it = symbol_to_pages.find(symbol);
    if (it == symbol_to_pages.end()) {
        throw Error(fmt::format("workload: unknown symbol '{}'", symbol));
    }
    std::vector<PageId> pages;
    pages.reserve(it->second.page_count);
    for (std::uint64_t i = 0; i < it->second.page_count; ++i) {
        pages.push_back(it->second.first_page + i);
    }
    return pages;
}

std::uint64_t Workload::total_pages() const {
    std::uint64_t total = 0;
    for (const auto& hint : manifest) total += hint.size_pages;
    return total;
}

std::vector<std::string> validate_workload(const Workload& w) {
    std::vector<std::string> v;
    if (w.manifest.size() != w.symbol_to_pages.size()) {
        v.push_back("workload: manifest and symbol_to_pages disagree on symbol count");
    }
    for (const auto& hint : w.manifest) {
        if (hint.size_pages == 0) {
            v.push_back(fmt::format("symbol {}: size_pages must be >= 1", hint.symbol));
        }
        auto it = w.symbol_to_pages.find(hint.symbol);
        if (it == w.symbol_to_pages.end()) {
            v.push_back(fmt::format("symbol {}: missing page range", hint.symbol));
        } else if (it->second.page_count != hint.size_pages) {
            v.push_back(fmt::format("symbol {}: range holds {} pages, manifest says {}",
                                    hint.symbol, it->second.page_count, hint.size_pages));
        }
    }
    // Ranges must not overlap.
    std::vector<std::pair<PageId, PageId>> spans;
    for (const auto& [name, range] : w.symbol_to_pages) {
        spans.push_back({range.first_page, range.first_page + range.page_count});
    }
    std::sort(spans.begin(), spans.end());
    for (std::size_t i = 1; i < spans.size(); ++i) {
        if (spans[i].first < spans[i - 1].second) {
            v.push_back("workload: symbol page ranges overlap");
            break;
        }
    }
    std::uint64_t prev_seq = 0;
    bool first = true;
    for (const auto& event : w.trace) {
        if (!first && event.seq_no <= prev_seq) {
            v.push_back(fmt::format("trace: seq_no {} not strictly increasing", event.seq_no));
            break;
        }
        prev_seq = event.seq_no;
        first = false;
    }
    for (const auto& event : w.trace) {
        bool covered = false;
        for (const auto& [name, range] : w.symbol_to_pages) {
            if (range.covers(event.page_id)) {
                covered = true;
                break;
            }
        }
        if (!covered) {
            v.push_back(fmt::format("trace: page {} not covered by any symbol", event.page_id));
            break;
        }
    }
    for (const auto& task : w.tasks) {
        if (task.total_work_ops <= 0.0) {
            v.push_back(fmt::format("task {}: total_work_ops must be > 0", task.name));
        }
        if (task.parallel_fraction < 0.0 || task.parallel_fraction > 1.0) {
            v.push_back(fmt::format("task {}: parallel_fraction must be in [0, 1]", task.name));
        }
    }
    return v;
}

namespace {

AllocationHint parse_symbol_section(const Section& section) {
    if (section.name.empty()) {
        throw ParseError("symbol section needs a name: [symbol NAME]", section.line, 1);
    }
    SectionReader r(section);
    AllocationHint hint;
    hint.symbol = section.name;
    hint.size_pages = r.required_u64("size_pages");
    try {
        hint.affinity = affinity_from_name(r.optional_token("affinity", "none"));
        hint.access_class = access_class_from_name(r.optional_token("access_class", "unknown"));
        hint.access_pattern =
            access_pattern_from_name(r.optional_token("access_pattern", "unknown"));
    } catch (const Error& e) {
        throw ParseError(e.what(), section.line, 1);
    }
    r.finish();
    if (hint.size_pages == 0) {
        throw ParseError(fmt::format("symbol {}: size_pages must be >= 1", hint.symbol),
                         section.line, 1);
    }
    return hint;
}

TaskProfile parse_task_section(const Section& section) {
    if (section.name.empty()) {
        throw ParseError("task section needs a name: [task NAME]", section.line, 1);
    }
    SectionReader r(section);
    TaskProfile task;
    task.name = section.name;
    task.total_work_ops = r.required_double("total_work_ops");
    task.parallel_fraction = r.required_double("parallel_fraction");
    task.memory_bound = r.optional_bool("memory_bound", false);
    task.pointer_chasing = r.optional_bool("pointer_chasing", false);
    r.finish();
    return task;
}

std::string read_file_or_throw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(fmt::format("cannot open '{}'", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

Workload parse_workload(std::string_view text, std::optional<std::uint64_t> seed_override,
                        std::string_view base_dir) {
    Document doc = parse_document(text);
    Workload w;
    std::optional<GeneratorParams> generator;
    std::optional<std::string> trace_file;
    PageId next_page = 0;

    for (const Section& section : doc.sections) {
        if (section.kind == "symbol") {
            if (w.symbol_to_pages.count(section.name)) {
                throw ParseError(fmt::format("duplicate symbol '{}'", section.name), section.line,
                                 1);
            }
            AllocationHint hint = parse_symbol_section(section);
            w.symbol_to_pages[hint.symbol] = {next_page, hint.size_pages};
            next_page += hint.size_pages;
            w.manifest.push_back(std::move(hint));
        } else if (section.kind == "task") {
            for (const auto& t : w.tasks) {
                if (t.name == section.name) {
                    throw ParseError(fmt::format("duplicate task '{}'", section.name), section.line,
                                     1);
                }
            }
            w.tasks.push_back(parse_task_section(section));
        } else if (section.kind == "generator") {
            if (generator) throw ParseError("duplicate [generator] section", section.line, 1);
            SectionReader r(section);
            GeneratorParams p;
            p.epochs = r.required_u64("epochs");
            p.hot_accesses_per_epoch = r.optional_u64("hot_accesses_per_epoch", 0);
            p.cold_accesses_per_epoch = r.optional_u64("cold_accesses_per_epoch", 0);
            p.hot_symbols = r.optional_list("hot_symbols");
            p.seed = r.optional_u64("seed", 0);
            r.finish();
            generator = std::move(p);
        } else if (section.kind == "trace") {
            if (trace_file) throw ParseError("duplicate [trace] section", section.line, 1);
            SectionReader r(section);
            trace_file = r.required_token("file");
            r.finish();
        } else {
            throw ParseError(fmt::format("unknown section kind '{}'", section.kind), section.line,
                             1);
        }
    }

    if (generator && trace_file) {
        throw Error("workload: [generator] and [trace] sections are mutually exclusive");
    }
    if (generator) {
        if (seed_override) generator->seed = *seed_override;
        w.trace = generate_trace(*generator, w.manifest, w.symbol_to_pages);
        w.generator = generator;
    } else if (trace_file) {
        std::string path = *trace_file;
        if (!base_dir.empty() && !path.empty() && path.front() != '/') {
            path = std::string(base_dir) + "/" + path;
        }
        w.trace = parse_trace(read_file_or_throw(path));
    }

    auto violations = validate_workload(w);
    if (!violations.empty()) throw ValidationError(std::move(violations));
    return w;
}

std::vector<AccessEvent> generate_trace(const GeneratorParams& params,
                                        const std::vector<AllocationHint>& manifest,
                                        const std::map<std::string, SymbolRange>& symbol_to_pages) {
    for (const auto& hot : params.hot_symbols) {
        if (symbol_to_pages.find(hot) == symbol_to_pages.end()) {
            throw Error(fmt::format("generator: hot symbol '{}' not in manifest", hot));
        }
    }
    auto is_hot = [&params](const std::string& symbol) {
        return std::find(params.hot_symbols.begin(), params.hot_symbols.end(), symbol) !=
               params.hot_symbols.end();
    };

    Rng rng(params.seed);
    std::vector<AccessEvent> trace;
    std::uint64_t seq = 0;
    for (std::uint64_t epoch = 0; epoch < params.epochs; ++epoch) {
        std::vector<PageId> epoch_pages;
        for (const auto& hint : manifest) {
            const SymbolRange& range = symbol_to_pages.at(hint.symbol);
            std::uint64_t count = is_hot(hint.symbol) ? params.hot_accesses_per_epoch
                                                      : params.cold_accesses_per_epoch;
            for (std::uint64_t i = 0; i < count; ++i) {
                epoch_pages.push_back(range.first_page + (i % range.page_count));
            }
        }
        rng.shuffle(epoch_pages);
        for (PageId page : epoch_pages) {
            trace.push_back({seq++, page, AccessOp::kRead});
        }
    }
    return trace;
}

std::vector<AccessEvent> parse_trace(std::string_view text) {
    std::vector<AccessEvent> trace;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line =
            eol == std::string_view::npos ? text.substr(pos) : text.substr(pos, eol - pos);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        std::size_t i = 0;
        auto skip_ws = [&]() { while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i; };
        skip_ws();
        if (i < line.size() && line[i] != '#') {
            AccessEvent event;
            auto read_u64 = [&](std::uint64_t& out) {
                std::size_t start = i;
                while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
                auto [ptr, ec] = std::from_chars(line.data() + start, line.data() + i, out);
                if (ec != std::errc() || ptr != line.data() + i || start == i) {
                    throw ParseError("trace: expected unsigned integer", line_no, start + 1);
                }
            };
            read_u64(event.seq_no);
            skip_ws();
            read_u64(event.page_id);
            skip_ws();
            if (i >= line.size() || (line[i] != 'r' && line[i] != 'w')) {
                throw ParseError("trace: expected op 'r' or 'w'", line_no, i + 1);
            }
            event.op = line[i] == 'r' ? AccessOp::kRead : AccessOp::kWrite;
            ++i;
            skip_ws();
            if (i != line.size()) {
                throw ParseError("trace: trailing characters", line_no, i + 1);
            }
            trace.push_back(event);
        }
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    return trace;
}

std::string serialize_trace(const std::vector<AccessEvent>& trace) {
    std::string out;
    for (const auto& event : trace) {
        out += format_u64(event.seq_no);
        out += ' ';
        out += format_u64(event.page_id);
        out += ' ';
        out += event.op == AccessOp::kRead ? 'r' : 'w';
        out += '\n';
    }
    return out;
}

}  // namespace tiersim
