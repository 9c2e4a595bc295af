#pragma once

#include <stdexcept>
#include <string>

namespace cges {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class CycleError : public Error {
public:
    explicit CycleError(const std::string& msg) : Error(msg) {}
};

/// A PDAG admits no DAG with the same skeleton, the same directed edges
/// and no additional v-structures.
class NoConsistentExtension : public Error {
public:
    explicit NoConsistentExtension(const std::string& msg) : Error(msg) {}
};

class ShapeMismatch : public Error {
public:
    explicit ShapeMismatch(const std::string& msg) : Error(msg) {}
};

class NodeCountMismatch : public Error {
public:
    explicit NodeCountMismatch(const std::string& msg) : Error(msg) {}
};

/// Rank statistic denominator is zero (response constant across rows).
class DegenerateDenominator : public Error {
public:
    explicit DegenerateDenominator(const std::string& msg) : Error(msg) {}
};

/// Conditioning regression design matrix is rank deficient.
class SingularDesign : public Error {
public:
    explicit SingularDesign(const std::string& msg) : Error(msg) {}
};

class NonFinite : public Error {
public:
    explicit NonFinite(const std::string& msg) : Error(msg) {}
};

class FactorizationFailure : public Error {
public:
    explicit FactorizationFailure(const std::string& msg) : Error(msg) {}
};

class NonPositiveSum : public Error {
public:
    explicit NonPositiveSum(const std::string& msg) : Error(msg) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace cges
