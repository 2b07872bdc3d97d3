#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace revealnet {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ingest
struct MalformedRow : Error {
    std::size_t line;
    MalformedRow(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line(line) {}
};

struct LabelConflict : Error {
    using Error::Error;
};

struct TraceError : Error {
    using Error::Error;
};

// wan
struct NoSurvivors : Error {
    using Error::Error;
};

// sketching
struct DimensionMismatch : Error {
    using Error::Error;
};

struct IndexOutOfRange : Error {
    using Error::Error;
};

struct NegativeOffset : Error {
    using Error::Error;
};

struct BothZero : Error {
    using Error::Error;
};

// switch / orchestration
struct NotTracked : Error {
    using Error::Error;
};

struct RepresentationMismatch : Error {
    using Error::Error;
};

struct AttackFlowNotTracked : Error {
    using Error::Error;
};

// accounting / config
struct UnknownMethod : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

} // namespace revealnet
