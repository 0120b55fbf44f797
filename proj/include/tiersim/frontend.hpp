#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tiersim/directive.hpp"
#include "tiersim/system_model.hpp"
#include "tiersim/task_model.hpp"
#include "tiersim/transport.hpp"

namespace tiersim {

// Deterministic frontend. Compiles class-level placement rankings (device
// affinity by bandwidth, host affinity and cold/unknown classes by cold
// latency, hot class by hot latency), one hysteresis migration rule per
// frequency-sensitive tier, and task rules steering irregular work to the
// cpu and highly parallel work to the best wide device. The catch-all
// targets the largest-capacity tier. Pure: identical inputs give
// byte-identical serialized directives.
PolicyDirective compile_rule_directive(const SystemConfig& config,
                                       const std::vector<AllocationHint>& manifest = {});

// Parallel fraction at and above which the rule frontend considers a task
// "highly parallel", and the threshold_down/threshold_up ratio used for the
// compiled hysteresis band.
inline constexpr double kHighParallelFraction = 0.9;

enum class PromptScenario { kPlacement, kTaskMapping };

std::string render_manifest(const std::vector<AllocationHint>& manifest);
std::string render_tasks(const std::vector<TaskProfile>& tasks);

// Prompt = the system description verbatim + the decision request + an
// output-format instruction asking for a fenced machine-readable block.
std::string build_prompt(std::string_view config_text, PromptScenario scenario,
                         std::string_view manifest_or_tasks);

struct PlacementAnswer {
    std::vector<std::pair<std::string, std::string>> assignments;  // symbol -> tier

    friend bool operator==(const PlacementAnswer&, const PlacementAnswer&) = default;
};

struct TaskAnswer {
    std::vector<std::pair<std::string, std::string>> assignments;  // task -> device

    friend bool operator==(const TaskAnswer&, const TaskAnswer&) = default;
};

using LlmReply = std::variant<PolicyDirective, PlacementAnswer, TaskAnswer>;

// Strictly parses a fenced machine-readable block when present; otherwise
// falls back to pattern extraction over free prose ("allocated in RAT:
// priceArr, avg", "Variable h_A ... allocate in host memory", "prefer to
// run it on the GPU"). Tier/device names are validated against the config;
// "host"/"device" memory aliases resolve to the lowest-cold-latency and the
// highest-bandwidth tier respectively.
LlmReply parse_llm_response(std::string_view response_text, const SystemConfig& config);

// Resolution helpers exposed for tests.
const MemoryTierSpec& resolve_tier_token(std::string_view token, const SystemConfig& config);
const ComputeDeviceSpec& resolve_device_token(std::string_view token, const SystemConfig& config);

PolicyDirective directive_from_placement_answer(const PlacementAnswer& answer,
                                                const SystemConfig& config);
PolicyDirective directive_from_task_answer(const TaskAnswer& answer, const SystemConfig& config);

// The LLM-backed frontend: builds the prompt, sends it through the
// transport (live, recording or replay), parses the reply and returns a
// validated directive with provenance {frontend_id = "llm",
// description_digest = sha256(description_text)}.
PolicyDirective compile_llm_directive(const SystemConfig& config, std::string_view description_text,
                                      PromptScenario scenario, std::string_view manifest_or_tasks,
                                      LlmTransport& transport);

}  // namespace tiersim
