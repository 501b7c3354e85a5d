#ifndef BNS_ERRORS_HPP
#define BNS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bns {

// Argument outside the mathematical domain of a transform/formula.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad parameter set, malformed config, unknown config key, inconsistent shapes.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Unreadable or malformed input file (CSV, JSON).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Price series shorter than a windowed operation requires.
class SeriesTooShort : public ValidationError {
public:
    explicit SeriesTooShort(const std::string& msg) : ValidationError(msg) {}
};

// Train/test index ranges overlap, or look-ahead leakage under the Error policy.
class OverlapError : public ValidationError {
public:
    explicit OverlapError(const std::string& msg) : ValidationError(msg) {}
};

// Feature matrix / target vector dimension mismatch.
class ShapeMismatch : public ValidationError {
public:
    explicit ShapeMismatch(const std::string& msg) : ValidationError(msg) {}
};

// Paired vectors of different lengths.
class LengthMismatch : public ValidationError {
public:
    explicit LengthMismatch(const std::string& msg) : ValidationError(msg) {}
};

// Monte Carlo request with too few paths to form the requested statistic.
class InsufficientPaths : public ValidationError {
public:
    explicit InsufficientPaths(const std::string& msg) : ValidationError(msg) {}
};

// Adaptive quadrature failed to reach the requested tolerance.
class QuadratureFailure : public std::runtime_error {
public:
    explicit QuadratureFailure(const std::string& msg) : std::runtime_error(msg) {}
};

// Experiment configured with an empty model list.
class EmptyModelSet : public ValidationError {
public:
    explicit EmptyModelSet(const std::string& msg) : ValidationError(msg) {}
};

} // namespace bns

#endif
