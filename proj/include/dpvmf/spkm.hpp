#ifndef DPVMF_SPKM_HPP
#define DPVMF_SPKM_HPP

#include "dpvmf/dp.hpp"
#include "dpvmf/sphere.hpp"

namespace dpvmf {

struct SpkmConfig {
  int k = 1;
  int max_iterations = 100;
  int restarts = 10;
  std::uint64_t seed = 0;
  int workers = 0;

  void validate(std::size_t n) const;
};

/// k-means++-style seeding under angular distance: first mean uniform over
/// points, each next mean drawn with probability proportional to
/// (1 - max_k x^T mu_k).
std::vector<std::vector<double>> spkm_init_means(const Batch& batch, int k, Rng& rng);

/// Spherical k-means. objective is the cosine objective sum x_i^T mu_{z_i};
/// the best of `restarts` seeded initializations is returned (ties to the
/// lowest restart index). FitResult.repairs counts empty-cluster reseeds.
FitResult spkm_fit(const Batch& batch, const SpkmConfig& config);

}  // namespace dpvmf

#endif
