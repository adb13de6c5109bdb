#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace conkit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Raised when a computation produces or encounters non-finite / numerically
/// unusable data (blow-up during integration, stagnating Newton iteration,
/// underflowed difference quotients). Maps to process exit status 3.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised for malformed or semantically invalid experiment configuration.
/// Maps to process exit status 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when report files cannot be written. Maps to exit status 3.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

inline void require_finite(const Matrix& m, const std::string& what) {
    if (!m.allFinite()) throw std::invalid_argument(what + " must be finite");
}

inline void require_finite(const Vector& v, const std::string& what) {
    if (!v.allFinite()) throw std::invalid_argument(what + " must be finite");
}

inline void require_square(const Matrix& m, const std::string& what) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw std::invalid_argument(what + " must be square and non-empty");
}

} // namespace detail

} // namespace conkit
