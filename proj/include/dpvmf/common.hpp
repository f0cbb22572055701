#ifndef DPVMF_COMMON_HPP
#define DPVMF_COMMON_HPP

#include <cstddef>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpvmf {

enum class ErrorCode {
  Ok = 0,
  DegenerateVector,
  DimensionMismatch,
  DegenerateGeodesic,
  NoPrincipalSolution,
  NonConvergence,
  InconsistentLabeling,
  LengthMismatch,
  SingleCluster,
  ParseError,
  NormViolation,
  SeparationInfeasible,
  InvalidArgument,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kNormEps = 1e-12;   // degenerate-sum detection
inline constexpr double kUnitTol = 1e-9;    // unit-norm invariant

/// Dense batch of unit vectors, row-major, uniform dimension.
struct Batch {
  std::size_t dim = 0;
  std::vector<double> data;

  Batch() = default;
  Batch(std::size_t d, std::vector<double> values) : dim(d), data(std::move(values)) {
    if (dim < 2) fail(ErrorCode::InvalidArgument, "batch dimension must be >= 2");
    if (data.empty() || data.size() % dim != 0)
      fail(ErrorCode::InvalidArgument, "batch data size not a multiple of dim");
  }

  std::size_t size() const { return dim == 0 ? 0 : data.size() / dim; }
  const double* row(std::size_t i) const { return data.data() + i * dim; }
  double* row(std::size_t i) { return data.data() + i * dim; }

  void append(const double* v) { data.insert(data.end(), v, v + dim); }
};

inline double dot(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const double* a, std::size_t d) {
  return std::sqrt(dot(a, a, d));
}

inline double clamp_unit(double x) {
  return x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x);
}

}  // namespace dpvmf

#endif
