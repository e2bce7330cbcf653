#pragma once

#include <stdexcept>
#include <string>

namespace qcat {

// Domain and usage errors map to CLI exit code 2, numeric failures to 3.

class CapExceeded : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class KernelDomain : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class ZeroDenominator : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

class DegreeBoundTooSmall : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class InvalidWeight : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class NoSignChange : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class InvalidConfig : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class InsufficientGrid : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class CountOverflow : public std::overflow_error {
  public:
    using std::overflow_error::overflow_error;
};

// Numeric failure: the Toeplitz covariance of a tabulated kernel is not PSD.
class KernelNotPSD : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace qcat
