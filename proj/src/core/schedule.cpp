// SPDX-License-Identifier: Apache-2.0
#include "core/schedule.hpp"

#include <algorithm>
#include <cmath>

namespace leo3 {

StepSchedule StepSchedule::build(const SimGrid& grid, const PulseProgram& pulse) {
    const double horizon = grid.horizon();
    if (pulse.horizon() < horizon - 1e-9 * std::max(1.0, horizon))
        throw ValidationError({"pulse program horizon is shorter than the grid horizon"});

    StepSchedule sched{grid, {}};
    const auto& segs = pulse.segments();
    const double eps = 1e-12 * std::max(1.0, horizon);
    sched.subs.reserve(grid.steps + segs.size());

    std::size_t si = 0;
    for (std::size_t i = 0; i < grid.steps; ++i) {
        const double ta = grid.time(i);
        const double tb = grid.time(i + 1);
        double cursor = ta;
        while (si + 1 < segs.size() && segs[si].t1 <= cursor + eps) ++si;
        while (cursor < tb - eps) {
            double end = std::min(tb, segs[si].t1);
            if (end > tb - eps) end = tb;
            sched.subs.push_back({cursor, end, pulse.amplitude_at(0.5 * (cursor + end)),
                                  pulse.integral_to(cursor), i, end == tb});
            cursor = end;
            while (si + 1 < segs.size() && segs[si].t1 <= cursor + eps) ++si;
        }
    }
    return sched;
}

}  // namespace leo3
