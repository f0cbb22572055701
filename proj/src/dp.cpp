#include "dpvmf/dp.hpp"

#include <algorithm>
#include <limits>

namespace dpvmf {

DpConfig DpConfig::from_phi_lambda_deg(double deg) {
  DpConfig cfg;
  cfg.lambda = std::cos(deg * kPi / 180.0) - 1.0;
  return cfg;
}

void DpConfig::validate() const {
  if (!(lambda >= -2.0 && lambda <= 0.0))
    fail(ErrorCode::InvalidArgument, "lambda must lie in [-2, 0]");
  if (max_iterations < 1)
    fail(ErrorCode::InvalidArgument, "max_iterations must be >= 1");
}

std::size_t DpState::alive_count() const {
  return static_cast<std::size_t>(std::count(alive.begin(), alive.end(), true));
}

int assign_one(const double* x, const DpState& state, double lambda) {
  double best = lambda + 1.0;
  int best_slot = -1;
  for (std::size_t k = 0; k < state.means.size(); ++k) {
    if (!state.alive[k]) continue;
    double score = dot(x, state.means[k].data(), state.dim);
    if (score > best || (score == best && best_slot == -1)) {
      best = score;
      best_slot = static_cast<int>(k);
    }
  }
  return best_slot;
}

namespace {

class DpPolicy final : public oir::LabelPolicy {
 public:
  DpPolicy(const Batch& batch, DpState& state, double lambda)
      : batch_(batch), state_(state), lambda_(lambda) {}

  std::size_t slot_count() const override { return state_.means.size(); }

  oir::Decision propose(std::size_t i) const override {
    int slot = assign_one(batch_.row(i), state_, lambda_);
    return {slot, slot == oir::Decision::kNewCluster};
  }

  bool removable(int) const override { return true; }

  int relabel_sole_member(std::size_t i, int slot,
                          int& structural_events) override {
    state_.alive[slot] = false;
    const double* x = batch_.row(i);
    int choice = assign_one(x, state_, lambda_);
    if (choice != oir::Decision::kNewCluster) {
      structural_events = 1;  // removal stands, the point departs
      return choice;
    }
    // the point reopens its own cluster: reuse the slot instead of churning
    bool same = std::equal(x, x + state_.dim, state_.means[slot].begin());
    state_.means[slot].assign(x, x + state_.dim);
    state_.alive[slot] = true;
    structural_events = same ? 0 : 2;
    return slot;
  }

  int apply_structural(std::size_t i, const oir::Decision&) override {
    const double* x = batch_.row(i);
    state_.means.emplace_back(x, x + state_.dim);
    state_.alive.push_back(true);
    return static_cast<int>(state_.means.size() - 1);
  }

 private:
  const Batch& batch_;
  DpState& state_;
  double lambda_;
};

}  // namespace

oir::PassResult label_pass(const Batch& batch, DpState& state, double lambda,
                           int workers) {
  if (state.dim == 0) state.dim = batch.dim;
  if (state.dim != batch.dim)
    fail(ErrorCode::DimensionMismatch, "state/batch dimension mismatch");
  if (state.assignments.empty()) state.assignments.assign(batch.size(), -1);
  DpPolicy policy(batch, state, lambda);
  return oir::parallel_label_pass(batch.size(), state.assignments, policy, workers);
}

void update_parameters(const Batch& batch, DpState& state) {
  const std::size_t d = state.dim;
  std::vector<std::vector<double>> sums(state.means.size(),
                                        std::vector<double>(d, 0.0));
  std::vector<long> counts(state.means.size(), 0);
  for (std::size_t i = 0; i < state.assignments.size(); ++i) {
    int k = state.assignments[i];
    if (k < 0) continue;
    const double* x = batch.row(i);
    for (std::size_t j = 0; j < d; ++j) sums[k][j] += x[j];
    ++counts[k];
  }
  for (std::size_t k = 0; k < state.means.size(); ++k) {
    if (!state.alive[k]) continue;
    if (counts[k] == 0)
      fail(ErrorCode::InconsistentLabeling, "alive cluster with no members");
    double n = norm2(sums[k].data(), d);
    if (n <= kNormEps)
      fail(ErrorCode::DegenerateVector, "cluster vector sum vanished");
    for (std::size_t j = 0; j < d; ++j) state.means[k][j] = sums[k][j] / n;
  }
}

double objective(const Batch& batch, const std::vector<int>& labels,
                 const std::vector<double>& means, std::size_t dim,
                 double lambda) {
  if (labels.size() != batch.size())
    fail(ErrorCode::LengthMismatch, "labels do not match batch size");
  if (dim != batch.dim || means.size() % dim != 0)
    fail(ErrorCode::DimensionMismatch, "means layout does not match batch");
  const long k = static_cast<long>(means.size() / dim);
  double j = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= k)
      fail(ErrorCode::InconsistentLabeling, "label out of range");
    j += dot(batch.row(i), means.data() + labels[i] * dim, dim);
  }
  return j + lambda * static_cast<double>(k);
}

namespace {

double state_objective(const Batch& batch, const DpState& state, double lambda) {
  double j = 0.0;
  for (std::size_t i = 0; i < state.assignments.size(); ++i) {
    int k = state.assignments[i];
    if (k >= 0) j += dot(batch.row(i), state.means[k].data(), state.dim);
  }
  return j + lambda * static_cast<double>(state.alive_count());
}

FitResult finalize(const Batch& batch, const DpState& state, double lambda,
                   int iterations, int restarts, bool converged,
                   std::vector<double> trace) {
  FitResult r;
  r.dim = batch.dim;
  r.iterations = iterations;
  r.restarts = restarts;
  r.converged = converged;
  r.objective_trace = std::move(trace);

  std::vector<int> remap(state.means.size(), -1);
  for (std::size_t k = 0; k < state.means.size(); ++k) {
    if (!state.alive[k]) continue;
    remap[k] = static_cast<int>(r.k++);
    r.means.insert(r.means.end(), state.means[k].begin(), state.means[k].end());
  }
  r.counts.assign(r.k, 0);
  r.labels.resize(state.assignments.size());
  for (std::size_t i = 0; i < r.labels.size(); ++i) {
    r.labels[i] = remap[state.assignments[i]];
    ++r.counts[r.labels[i]];
  }
  r.objective = objective(batch, r.labels, r.means, r.dim, lambda);
  return r;
}

}  // namespace

FitResult fit(const Batch& batch, const DpConfig& config) {
  config.validate();
  DpState state;
  state.dim = batch.dim;
  state.assignments.assign(batch.size(), -1);

  std::vector<double> trace;
  int restarts = 0;
  int iterations = 0;
  bool converged = false;

  DpState best_state;
  double best_objective = -std::numeric_limits<double>::infinity();

  for (int it = 0; it < config.max_iterations; ++it) {
    ++iterations;
    auto pass = label_pass(batch, state, config.lambda, config.workers);
    restarts += pass.restarts;
    trace.push_back(state_objective(batch, state, config.lambda));
    update_parameters(batch, state);
    trace.push_back(state_objective(batch, state, config.lambda));
    if (trace.back() >= best_objective) {
      best_objective = trace.back();
      best_state = state;
    }
    if (!pass.any_change) {
      converged = true;
      break;
    }
  }

  // On a hit iteration cap, the best-objective iterate wins.
  const DpState& out = converged ? state : best_state;
  return finalize(batch, out, config.lambda, iterations, restarts, converged,
                  std::move(trace));
}

}  // namespace dpvmf
