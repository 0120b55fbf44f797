#include "tiersim/task_model.hpp"

namespace tiersim {

double estimate_task_time(const TaskProfile& task, const ComputeDeviceSpec& device,
                          double irregularity_penalty) {
    const double throughput = device.per_core_throughput_ops_per_sec;
    const double serial = (1.0 - task.parallel_fraction) * task.total_work_ops / throughput;
    const double parallel =
        task.parallel_fraction * task.total_work_ops /
        (throughput * static_cast<double>(device.core_count) * device.parallel_efficiency);
    double total = serial + parallel;
    if (task.pointer_chasing && device.kind != DeviceKind::kCpu) {
        total *= irregularity_penalty;
    }
    return total;
}

}  // namespace tiersim
