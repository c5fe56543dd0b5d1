#ifndef QTSIM_ERRORS_HPP
#define QTSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qtsim {

/// Invalid scenario/grid/potential parameters.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Operands live on incompatible grids.
class ShapeError : public std::runtime_error {
public:
    explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

/// Operation precondition violated at runtime (e.g. subtracting a state
/// where no charge exists, or a rate step that would overdraw a weight).
class PreconditionError : public std::runtime_error {
public:
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

/// Degenerate inputs (e.g. a superposition that cancels exactly).
class DegenerateInputError : public std::runtime_error {
public:
    explicit DegenerateInputError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qtsim

#endif
