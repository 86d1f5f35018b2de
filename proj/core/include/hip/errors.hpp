#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hip {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Violated precondition: bad argument, wrong grid, out-of-range exponent.
class DomainError : public Error {
public:
    using Error::Error;
};

class GridMismatch : public DomainError {
public:
    GridMismatch() : DomainError("fields live on different grids") {}
};

/// |grad u| dropped below the configured floor at some node.
class GradientFloorViolated : public Error {
public:
    GradientFloorViolated(int i, int j, double value, double floor)
        : Error("gradient floor violated at node (" + std::to_string(i) + "," +
                std::to_string(j) + "): |grad u| = " + std::to_string(value) +
                " < " + std::to_string(floor)),
          i_(i), j_(j), value_(value), floor_(floor) {}

    int i() const noexcept { return i_; }
    int j() const noexcept { return j_; }
    double value() const noexcept { return value_; }
    double floor() const noexcept { return floor_; }

private:
    int i_, j_;
    double value_, floor_;
};

/// An iterative solver or eigen-iteration did not reach its tolerance.
class SolverError : public Error {
public:
    using Error::Error;
};

/// A nonlinear reconstruction diverged or left its admissible neighborhood.
class DivergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace hip
