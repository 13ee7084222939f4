#pragma once

#include <stdexcept>
#include <string>

namespace germflow {

/// Caller handed us something malformed (arity mismatch, bad parameter...).
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// A numeric identity that must hold up to roundoff was violated by more
/// than its documented threshold.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Field formulas were requested where their denominators are below the
/// usable floor. Carries the diagnostic payload of the offending point.
class SingularLocusError : public std::runtime_error {
public:
    SingularLocusError(const std::string& msg, double delta, double g_abs,
                       double grad_f_norm, double grad_g_norm)
        : std::runtime_error(msg),
          delta(delta),
          g_abs(g_abs),
          grad_f_norm(grad_f_norm),
          grad_g_norm(grad_g_norm) {}

    double delta;
    double g_abs;
    double grad_f_norm;
    double grad_g_norm;
};

/// lift_to_zero_set at a point where g vanishes (or nearly does).
class NotLiftableError : public std::runtime_error {
public:
    explicit NotLiftableError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Arc-suite generation exhausted its oversampling budget.
class GenerationError : public std::runtime_error {
public:
    explicit GenerationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Polynomial text that does not parse; positions are 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line, int column)
        : std::runtime_error(msg), line(line), column(column) {}

    int line;
    int column;
};

}  // namespace germflow
