#include "fdsic/common.hpp"

#include <iostream>

namespace fdsic {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidDimension: return "invalid-dimension";
        case ErrorCode::InvalidParameter: return "invalid-parameter";
        case ErrorCode::DimensionMismatch: return "dimension-mismatch";
        case ErrorCode::SingularMatrix: return "singular-matrix";
        case ErrorCode::SingularSymbol: return "singular-symbol";
        case ErrorCode::NonHermitian: return "non-hermitian";
        case ErrorCode::InvalidConfig: return "invalid-config";
        case ErrorCode::IoError: return "io-error";
    }
    return "unknown";
}

void warn(const std::string& message) {
    std::clog << "[fdsic] warning: " << message << '\n';
}

}  // namespace fdsic
