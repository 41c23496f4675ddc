// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "core/pulse.hpp"
#include "core/types.hpp"

namespace leo3 {

/// Integration plan shared by the coefficient integrator and the
/// propagators: the uniform output grid refined with every pulse-segment
/// boundary, so no integration substep ever straddles an amplitude jump.
/// Within a substep the pulse amplitude is a constant and the running
/// integral C(t) = c0 + amp * (t - t0) is exact.
struct StepSchedule {
    struct Substep {
        double t0 = 0.0;
        double t1 = 0.0;
        double amp = 0.0;       ///< pulse amplitude on (t0, t1)
        double c0 = 0.0;        ///< exact C(t0)
        std::size_t node = 0;   ///< index of the grid node this substep starts in
        bool closes_node = false;  ///< t1 is grid node `node + 1`
    };

    SimGrid grid;
    std::vector<Substep> subs;

    static StepSchedule build(const SimGrid& grid, const PulseProgram& pulse);
};

}  // namespace leo3
