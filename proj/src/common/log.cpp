// SPDX-License-Identifier: Apache-2.0
#include "orig/common/log.hpp"

#include <spdlog/sinks/stderr_color_sinks.h>

namespace orig::log {

void init(spdlog::level::level_enum level) {
    auto logger = spdlog::stderr_color_mt("orig");
    spdlog::set_default_logger(logger);
    spdlog::set_level(level);
    spdlog::set_pattern("[%H:%M:%S] [%^%l%$] %v");
}

}  // namespace orig::log
