#ifndef DPVMF_DDP_HPP
#define DPVMF_DDP_HPP

#include "dpvmf/common.hpp"
#include "dpvmf/oir.hpp"
#include "dpvmf/solver.hpp"

namespace dpvmf {

struct DdpConfig {
  double lambda = std::cos(100.0 * kPi / 180.0) - 1.0;
  double beta = 1e5;
  double q = (std::cos(100.0 * kPi / 180.0) - 1.0) / 400.0;  // survival exponent Q
  int max_iterations = 100;
  std::uint64_t seed = 0;
  int workers = 0;

  static DdpConfig defaults_for_lambda(double lambda_value, double q_frac = 400.0);
  void validate() const;
};

enum class ClusterStatus { Instantiated, TrackedDead, Removed };

/// One tracked cluster across frames. mean/weight/dt/count_past describe the
/// prior carried between frames; within a frame they stay frozen and the
/// instantiated posterior lives in frame scratch until the timestep finalizes.
struct ClusterState {
  long id = -1;
  ClusterStatus status = ClusterStatus::TrackedDead;
  std::vector<double> mean;  // m_k
  double weight = 0.0;       // w_k
  int dt = 0;                // timesteps since last instantiated
  long count_past = 0;       // c_k

  // frame scratch
  bool born = false;
  bool revived = false;
  bool has_posterior_mean = false;
  std::vector<double> posterior_mean;
  double f_star = 0.0;
  double xbar_norm = 0.0;
  double cos_zeta_max = 2.0;  // revival candidacy: m^T x >= cos_zeta_max
};

struct FrameResult {
  std::vector<long> labels;  // stable cluster ids, one per observation
  std::vector<long> cluster_ids;
  std::vector<double> fractions;  // per cluster_ids entry; sums to 1
  std::vector<double> means;      // flat, parallel to cluster_ids
  std::vector<double> weights;
  std::vector<long> counts;
  std::vector<long> born_ids;
  std::vector<long> revived_ids;
  std::vector<long> removed_ids;
  int iterations = 0;
  int restarts = 0;
  bool converged = false;
  bool degenerate_geodesic = false;
};

/// Streaming DDP-vMF-means over an ordered frame sequence. One instance owns
/// its cluster set; frames must be fed in order from a single thread. Label
/// passes fan out through the OIR engine.
class DdpStream {
 public:
  DdpStream(const DdpConfig& config, std::size_t dim);

  FrameResult step(const Batch& batch);

  const std::vector<ClusterState>& clusters() const { return clusters_; }
  const DdpConfig& config() const { return config_; }
  long next_id() const { return next_id_; }

  /// J_k of one observation against one cluster slot (exposed for testing).
  double score_point(const double* x, std::size_t slot) const;

  // Individual frame phases; step() composes them.
  std::vector<long> begin_timestep();
  oir::PassResult run_label_pass(const Batch& batch, std::vector<int>& labels);
  void run_parameter_pass(const Batch& batch, const std::vector<int>& labels);
  FrameResult finalize_timestep(const Batch& batch, const std::vector<int>& labels);

 private:
  friend class DdpPolicy;
  DdpConfig config_;
  std::size_t dim_;
  std::vector<ClusterState> clusters_;
  long next_id_ = 0;
  std::vector<long> frame_removed_;
  bool frame_degenerate_ = false;
  int frame_iterations_ = 0;
  int frame_restarts_ = 0;
  bool frame_converged_ = false;

  double dead_score(const double* x, const ClusterState& c) const;
};

}  // namespace dpvmf

#endif
