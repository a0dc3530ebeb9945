#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace csopt {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Caller handed us an argument outside the documented domain.
class BadParameter : public Error {
public:
    explicit BadParameter(const std::string& msg) : Error(msg) {}
};

// A column that must be nonzero (normalization, atom selection) has
// numerically zero norm. `index` is the offending column.
class ZeroColumn : public Error {
public:
    ZeroColumn(const std::string& msg, std::size_t index)
        : Error(msg + " (column " + std::to_string(index) + ")"), index(index) {}
    std::size_t index;
};

class NoConvergence : public Error {
public:
    explicit NoConvergence(const std::string& msg) : Error(msg) {}
};

// Alternating-projection correlation solve ran out of sweeps. Carries the
// last iterate (dense, row-major, dim x dim) so callers can inspect it.
class NcmNoConvergence : public NoConvergence {
public:
    NcmNoConvergence(const std::string& msg, std::vector<double> last, std::size_t dim)
        : NoConvergence(msg), last_iterate(std::move(last)), dim(dim) {}
    std::vector<double> last_iterate;
    std::size_t dim;
};

// Penalty solver exhausted its penalty schedule. Carries the best iterate
// seen and its trailing eigenvalue mass.
class MpaNoConvergence : public NoConvergence {
public:
    MpaNoConvergence(const std::string& msg, std::vector<double> best, std::size_t dim,
                     double trailing)
        : NoConvergence(msg), best_iterate(std::move(best)), dim(dim),
          trailing_eigensum(trailing) {}
    std::vector<double> best_iterate;
    std::size_t dim;
    double trailing_eigensum;
};

class NotPsd : public Error {
public:
    explicit NotPsd(const std::string& msg) : Error(msg) {}
};

class NotLowRank : public Error {
public:
    explicit NotLowRank(const std::string& msg) : Error(msg) {}
};

class RankDeficient : public Error {
public:
    explicit RankDeficient(const std::string& msg) : Error(msg) {}
};

class DegenerateSignal : public Error {
public:
    explicit DegenerateSignal(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Config rejected; `field` names the offending key.
class ValidationError : public Error {
public:
    ValidationError(const std::string& msg, std::string field_name)
        : Error(msg), field(std::move(field_name)) {}
    std::string field;
};

}  // namespace csopt
