// SPDX-License-Identifier: Apache-2.0
#include "orig/common/error.hpp"

namespace orig {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Precondition: return "precondition";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Validation: return "validation";
        case ErrorKind::Gateway: return "gateway";
        case ErrorKind::Determinism: return "determinism";
        case ErrorKind::Persistence: return "persistence";
        case ErrorKind::Coverage: return "coverage";
        case ErrorKind::Undefined: return "undefined";
    }
    return "unknown";
}

}  // namespace orig
