// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <spdlog/spdlog.h>

namespace orig::log {

// Single process-wide logger; defaults to stderr at info level.
void init(spdlog::level::level_enum level = spdlog::level::info);

}  // namespace orig::log
