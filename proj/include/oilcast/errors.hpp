#pragma once

#include <stdexcept>
#include <string>

namespace oilcast {

// Error taxonomy shared by every module. The CLI maps a thrown Error to the
// machine-parsable line "stage=<name> error=<kind>".
enum class ErrorKind {
    input,           // precondition violated by caller-supplied values
    fit,             // least-squares fit impossible (rank deficiency, too few points)
    numeric,         // non-finite intermediate or result
    assembly,        // feature table has no usable rows or an interior gap
    split,           // empty train/test/new range or bad fractions
    scaling,         // degenerate feature range (min == max)
    state,           // operation called on an object in the wrong state
    training,        // divergence during gradient descent
    selection,       // expert scoring failed
    format,          // malformed expert file or CSV
    domain,          // value outside mathematical domain (log of non-positive)
    degenerate_test, // EP variance estimate is zero
    config,          // bad pipeline configuration
    io,              // filesystem failure
    bankruptcy,      // equity reached zero or below
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Thrown by ep_test when the variance estimate is zero; carries the partial
// statistics so callers can still report them.
class DegenerateTestError : public Error {
public:
    DegenerateTestError(double a_t, double b_t, const std::string& message)
        : Error(ErrorKind::degenerate_test, message), a_t_(a_t), b_t_(b_t) {}

    double a_t() const noexcept { return a_t_; }
    double b_t() const noexcept { return b_t_; }

private:
    double a_t_;
    double b_t_;
};

} // namespace oilcast
