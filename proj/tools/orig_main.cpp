// SPDX-License-Identifier: Apache-2.0
#include "orig/cli/commands.hpp"
#include "orig/common/log.hpp"

int main(int argc, char** argv) {
    orig::log::init();
    return orig::cli::run_main(argc, argv);
}
