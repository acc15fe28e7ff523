#pragma once

#include <stdexcept>
#include <string>

namespace netstress {

// Base class for everything this engine throws. The CLI maps each subclass
// to a distinct exit code (see docs/formats.md).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GraphError : Error {
    using Error::Error;
};

struct MetricError : Error {
    using Error::Error;
};

struct ScenarioError : Error {
    using Error::Error;
};

// Binning retained nothing. Only reachable in sample mode: exhaustive
// enumeration always contains the seed itself, which is at distance 0.
struct EmptyBinError : Error {
    using Error::Error;
};

struct AttackError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace netstress
