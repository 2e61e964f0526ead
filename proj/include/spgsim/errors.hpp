#pragma once

#include <stdexcept>
#include <string>

namespace spgsim {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operand shapes are incompatible for the requested operation.
struct DimensionError : Error {
    using Error::Error;
};

// A numeric parameter is out of its documented domain.
struct ParameterError : Error {
    using Error::Error;
};

// Matrix Market input could not be parsed; carries the 1-based line number.
struct ParseError : Error {
    ParseError(const std::string& what, long line)
        : Error(what + " (line " + std::to_string(line) + ")"), line(line) {}
    long line;
};

// Recognized but unsupported Matrix Market variant (e.g. array format).
struct UnsupportedFormat : Error {
    using Error::Error;
};

// Process-grid constraints violated (divisibility, perfect squares, scheme mismatch).
struct GridError : Error {
    using Error::Error;
};

// Tile set handed to reassemble() does not match its TileMap.
struct IncompleteTileSet : Error {
    using Error::Error;
};

// A simulated message was addressed to a rank outside the grid.
struct RoutingError : Error {
    using Error::Error;
};

// Collective participants disagree on the round index; indicates an engine bug.
struct ScheduleError : Error {
    using Error::Error;
};

// No simulated event is eligible but work remains.
struct DeadlockError : Error {
    using Error::Error;
};

}  // namespace spgsim
