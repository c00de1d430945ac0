#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fdsic {

using cdouble = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = std::numbers::pi;

enum class ErrorCode {
    InvalidDimension,
    InvalidParameter,
    DimensionMismatch,
    SingularMatrix,
    SingularSymbol,
    NonHermitian,
    InvalidConfig,
    IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Warnings go to stderr; the library never aborts on them.
void warn(const std::string& message);

// Index into a length-n circular buffer with possibly negative offset.
inline std::size_t wrap(long offset, long n) {
    long r = offset % n;
    return static_cast<std::size_t>(r < 0 ? r + n : r);
}

}  // namespace fdsic
