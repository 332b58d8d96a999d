#ifndef GERBEKIT_ERRORS_HPP
#define GERBEKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gerbekit {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands belong to different group/algebra variants.
class VariantMismatch : public Error {
 public:
  using Error::Error;
};

// A finite-difference stencil would leave the chart domain.
class ChartClearanceError : public Error {
 public:
  ChartClearanceError(std::string chart, double clearance, double needed)
      : Error("insufficient clearance in chart '" + chart + "': have " + std::to_string(clearance) +
              ", need " + std::to_string(needed)),
        chart_(std::move(chart)) {}
  const std::string& chart() const { return chart_; }

 private:
  std::string chart_;
};

// Sampled objects defined on different grids (loop sizes, disk grids).
class GridMismatch : public Error {
 public:
  using Error::Error;
};

// Operation needs a global model of the extension (twisted product on Γ × T).
class NoGlobalModel : public Error {
 public:
  using Error::Error;
};

// Form degree incompatible with the requested operation.
class DegreeError : public Error {
 public:
  using Error::Error;
};

// Residual check failed before an operation could proceed.
class ResidualError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace gerbekit

#endif
