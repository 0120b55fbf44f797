#pragma once

#include <string>

#include "tiersim/system_model.hpp"

namespace tiersim {

struct TaskProfile {
    std::string name;
    double total_work_ops = 0.0;
    double parallel_fraction = 0.0;  // in [0, 1]
    bool memory_bound = false;
    bool pointer_chasing = false;

    friend bool operator==(const TaskProfile&, const TaskProfile&) = default;
};

// Tasks whose access pattern defeats wide offload (pointer chasing) pay this
// factor on non-cpu devices.
inline constexpr double kDefaultIrregularityPenalty = 8.0;

// Amdahl-style split: serial part runs on one core, parallel part scales by
// core count discounted by parallel_efficiency.
double estimate_task_time(const TaskProfile& task, const ComputeDeviceSpec& device,
                          double irregularity_penalty = kDefaultIrregularityPenalty);

}  // namespace tiersim
