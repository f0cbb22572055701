#ifndef DPVMF_SYNTH_HPP
#define DPVMF_SYNTH_HPP

#include "dpvmf/sphere.hpp"

namespace dpvmf {

struct SynthSpec {
  int k_t = 30;
  std::size_t n = 6000;
  double tau = 500.0;
  std::size_t dim = 3;
  double min_separation = 28.0 * kPi / 180.0;  // radians
  std::vector<double> weights;                 // empty = uniform mixture
  std::uint64_t seed = 0;

  void validate() const;
};

struct SynthData {
  Batch points;
  std::vector<int> labels;
  std::vector<double> means;  // k_t x dim, row-major
};

/// Mixture means by rejection sampling on the uniform sphere until pairwise
/// geodesic separation >= min_separation; raises SeparationInfeasible when
/// the retry cap is exhausted.
std::vector<double> draw_separated_means(int k, std::size_t dim, double min_sep,
                                         Rng& rng);

SynthData generate(const SynthSpec& spec);

/// Streaming scenario: a pool of global clusters with persistent ids, and per
/// frame the subset that is active. Frames draw points_per_cluster draws per
/// active cluster, in categorical order.
struct StreamScenario {
  std::size_t dim = 3;
  double tau = 500.0;
  double min_separation = 28.0 * kPi / 180.0;
  std::uint64_t seed = 0;
  std::size_t points_per_cluster = 200;
  int pool = 0;                        // global clusters to draw
  std::vector<double> explicit_means;  // optional; overrides pool
  std::vector<std::vector<int>> frames;

  void validate() const;
  std::size_t pool_size() const {
    return explicit_means.empty() ? static_cast<std::size_t>(pool)
                                  : explicit_means.size() / dim;
  }
};

struct FrameData {
  Batch points;
  std::vector<long> true_ids;  // global cluster id per point
};

std::vector<FrameData> generate_stream(const StreamScenario& scenario);

}  // namespace dpvmf

#endif
