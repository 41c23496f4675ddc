// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace leo3 {

inline constexpr const char* kArtifactVersion = "1.0.0";

}  // namespace leo3
