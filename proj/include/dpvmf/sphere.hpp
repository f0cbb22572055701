#ifndef DPVMF_SPHERE_HPP
#define DPVMF_SPHERE_HPP

#include <cstdint>
#include <random>

#include "dpvmf/common.hpp"

namespace dpvmf {

using Rng = std::mt19937_64;

/// Unnormalized vector sum plus member count for one cluster.
struct MeanAccumulator {
  std::vector<double> sum;
  std::size_t count = 0;

  explicit MeanAccumulator(std::size_t dim) : sum(dim, 0.0) {}
  void add(const double* x) {
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += x[i];
    ++count;
  }
};

std::vector<double> normalize(const std::vector<double>& v, double eps = kNormEps);
void normalize_inplace(double* v, std::size_t dim, double eps = kNormEps);

/// Angle in [0, pi] between two unit vectors; dot clamped to [-1, 1].
double geodesic_angle(const double* u, const double* v, std::size_t dim);
double geodesic_angle(const std::vector<double>& u, const std::vector<double>& v);

/// Point on the u -> target geodesic at angular distance `angle` from u.
std::vector<double> rotate_towards(const std::vector<double>& u,
                                   const std::vector<double>& target,
                                   double angle);

/// von-Mises-Fisher draw via the Ulrich-Wood rejection sampler.
/// tau == 0 degenerates to the uniform law on the sphere.
std::vector<double> sample_vmf(const std::vector<double>& mean, double tau, Rng& rng);

std::vector<double> sample_uniform_sphere(std::size_t dim, Rng& rng);

/// (normalized sum, norm of sum) over the selected batch rows.
std::pair<std::vector<double>, double> weighted_mean_direction(
    const Batch& batch, const std::vector<std::size_t>& indices);

}  // namespace dpvmf

#endif
