// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace orig {

// Broad failure classes surfaced by the engine. The pipeline maps these to
// run status and the CLI maps them to exit codes.
enum class ErrorKind {
    Precondition,   // caller violated a documented precondition
    Parse,          // unparseable structured content (model output, manifest)
    Validation,     // parsed but schema-invalid content
    Gateway,        // transport failure after retries
    Determinism,    // cassette replay mismatch
    Persistence,    // filesystem I/O failure
    Coverage,       // evaluation coverage below threshold
    Undefined,      // mathematically undefined result (e.g. zero variance)
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct PreconditionError : Error {
    explicit PreconditionError(std::string m) : Error(ErrorKind::Precondition, std::move(m)) {}
};
struct ParseError : Error {
    explicit ParseError(std::string m) : Error(ErrorKind::Parse, std::move(m)) {}
};
struct ValidationError : Error {
    explicit ValidationError(std::string m) : Error(ErrorKind::Validation, std::move(m)) {}
};
struct GatewayError : Error {
    explicit GatewayError(std::string m) : Error(ErrorKind::Gateway, std::move(m)) {}
};
struct DeterminismError : Error {
    explicit DeterminismError(std::string m) : Error(ErrorKind::Determinism, std::move(m)) {}
};
struct PersistenceError : Error {
    explicit PersistenceError(std::string m) : Error(ErrorKind::Persistence, std::move(m)) {}
};
struct UndefinedCorrelationError : Error {
    explicit UndefinedCorrelationError(std::string m) : Error(ErrorKind::Undefined, std::move(m)) {}
};

const char* to_string(ErrorKind kind);

}  // namespace orig
