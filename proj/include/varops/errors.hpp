#pragma once

#include <stdexcept>
#include <string>

namespace varops {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// invalid argument values (non-positive truncation radii, q < 1, ...)
struct ParamError : Error {
    using Error::Error;
};

// operands defined on different grids or ladders
struct MismatchError : Error {
    using Error::Error;
};

// exhaustive oracle asked for a sequence beyond its size cap
struct SizeError : Error {
    using Error::Error;
};

// malformed experiment configuration / JSON input
struct ConfigError : Error {
    using Error::Error;
};

// stopping-time decomposition requested below the admissible level
struct LevelError : Error {
    double min_lambda;
    LevelError(const std::string& msg, double min_lambda_)
        : Error(msg), min_lambda(min_lambda_) {}
};

} // namespace varops
