// types.hpp - shared numeric aliases and error types.

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace catsim {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;
using Mat2 = Eigen::Matrix2cd;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Raised when a conserved quantity (norm, trace, positivity) drifts past its
/// abort threshold during integration.
class NumericInvariantError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when the Fock truncation cannot represent the requested state.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, int required_truncation)
        : std::runtime_error(what), required_truncation_(required_truncation) {}
    int required_truncation() const noexcept { return required_truncation_; }

private:
    int required_truncation_;
};

}  // namespace catsim
