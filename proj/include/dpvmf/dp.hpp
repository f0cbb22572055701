#ifndef DPVMF_DP_HPP
#define DPVMF_DP_HPP

#include "dpvmf/common.hpp"
#include "dpvmf/oir.hpp"

namespace dpvmf {

struct DpConfig {
  double lambda = -0.5;  // cos(phi_lambda) - 1, phi_lambda = 60 deg
  int max_iterations = 100;
  std::uint64_t seed = 0;
  int workers = 0;  // 0 = hardware default

  static DpConfig from_phi_lambda_deg(double deg);
  void validate() const;
};

/// Mutable mid-fit clustering state: alive cluster means plus per-observation
/// assignments (slot index or -1 for unassigned).
struct DpState {
  std::size_t dim = 0;
  std::vector<std::vector<double>> means;
  std::vector<bool> alive;
  std::vector<int> assignments;

  std::size_t alive_count() const;
};

struct FitResult {
  std::vector<int> labels;
  std::vector<double> means;  // K x dim, row-major
  std::size_t dim = 0;
  std::size_t k = 0;
  std::vector<long> counts;
  double objective = 0.0;
  int iterations = 0;
  int restarts = 0;
  int repairs = 0;  // spkm empty-cluster reseeds
  bool converged = false;
  std::vector<double> objective_trace;  // after every label and parameter phase
};

/// Single-point decision: index of the best existing mean, or -1 to open a
/// new cluster. A point joins iff its best dot beats lambda + 1; ties go to
/// the existing cluster, and among existing clusters the lowest index wins.
int assign_one(const double* x, const DpState& state, double lambda);

/// One sequential-semantics label pass (executed via the OIR engine).
oir::PassResult label_pass(const Batch& batch, DpState& state, double lambda,
                           int workers = 0);

/// Mean-direction update: every alive cluster's mean becomes the normalized
/// vector sum of its members.
void update_parameters(const Batch& batch, DpState& state);

double objective(const Batch& batch, const std::vector<int>& labels,
                 const std::vector<double>& means, std::size_t dim,
                 double lambda);

FitResult fit(const Batch& batch, const DpConfig& config);

}  // namespace dpvmf

#endif
