#pragma once

#include <stdexcept>
#include <string>

namespace cvbit {

/// Base class for all library failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonSymmetric : Error { using Error::Error; };
struct Unphysical : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct NotSymplectic : Error { using Error::Error; };
struct ExhaustedAttempts : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };

struct TailMassExceeded : Error { using Error::Error; };
struct NotHermitian : Error { using Error::Error; };
struct NotNormalized : Error { using Error::Error; };
struct CutoffCapExceeded : Error { using Error::Error; };
struct NotConverged : Error { using Error::Error; };

struct AllZero : Error { using Error::Error; };
struct Empty : Error { using Error::Error; };
struct GridUnderflow : Error { using Error::Error; };

struct ParseError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace cvbit
