#include "dpvmf/ddp.hpp"

#include <algorithm>

#include "dpvmf/sphere.hpp"

namespace dpvmf {

DdpConfig DdpConfig::defaults_for_lambda(double lambda_value, double q_frac) {
  DdpConfig cfg;
  cfg.lambda = lambda_value;
  cfg.q = lambda_value / q_frac;
  return cfg;
}

void DdpConfig::validate() const {
  if (!(lambda >= -2.0 && lambda <= 0.0))
    fail(ErrorCode::InvalidArgument, "lambda must lie in [-2, 0]");
  if (!(beta > 0.0) || !std::isfinite(beta))
    fail(ErrorCode::InvalidArgument, "beta must be finite and > 0");
  if (!(q <= 0.0))
    fail(ErrorCode::InvalidArgument, "survival exponent Q must be <= 0");
  if (max_iterations < 1)
    fail(ErrorCode::InvalidArgument, "max_iterations must be >= 1");
}

DdpStream::DdpStream(const DdpConfig& config, std::size_t dim)
    : config_(config), dim_(dim) {
  config_.validate();
  if (dim_ < 2) fail(ErrorCode::InvalidArgument, "dimension must be >= 2");
}

double DdpStream::dead_score(const double* x, const ClusterState& c) const {
  TransitionParams p{c.weight, config_.beta, c.dt, 1.0};
  double zeta = geodesic_angle(c.mean.data(), x, dim_);
  return dead_cluster_score(zeta, p, config_.q);
}

double DdpStream::score_point(const double* x, std::size_t slot) const {
  const ClusterState& c = clusters_.at(slot);
  switch (c.status) {
    case ClusterStatus::Removed:
      fail(ErrorCode::InvalidArgument, "scoring a removed cluster");
    case ClusterStatus::Instantiated:
      if (c.has_posterior_mean) return dot(x, c.posterior_mean.data(), dim_);
      return dead_score(x, c);  // revived, pre-parameter-pass
    case ClusterStatus::TrackedDead:
      return dead_score(x, c);
  }
  return 0.0;
}

std::vector<long> DdpStream::begin_timestep() {
  frame_removed_.clear();
  frame_degenerate_ = false;
  frame_iterations_ = 0;
  frame_restarts_ = 0;
  frame_converged_ = false;
  for (auto& c : clusters_) {
    if (c.status == ClusterStatus::Removed) continue;
    c.dt += 1;
    c.born = false;
    c.revived = false;
    c.has_posterior_mean = false;
    c.posterior_mean.clear();
    c.f_star = 0.0;
    c.xbar_norm = 0.0;
    if (config_.q * c.dt < config_.lambda) {
      c.status = ClusterStatus::Removed;
      frame_removed_.push_back(c.id);
      continue;
    }
    c.status = ClusterStatus::TrackedDead;
    TransitionParams p{c.weight, config_.beta, c.dt, 1.0};
    double zmax = revival_threshold(p, config_.q, config_.lambda);
    c.cos_zeta_max = zmax > 0.0 ? std::cos(zmax) : 2.0;
  }
  return frame_removed_;
}

namespace {

class DdpPolicy final : public oir::LabelPolicy {
 public:
  DdpPolicy(const Batch& batch, DdpStream& stream,
            std::vector<ClusterState>& clusters, long& next_id,
            const DdpConfig& cfg)
      : batch_(batch), stream_(stream), clusters_(clusters), next_id_(next_id),
        cfg_(cfg) {}

  std::size_t slot_count() const override { return clusters_.size(); }

  oir::Decision propose(std::size_t i) const override {
    const double* x = batch_.row(i);
    double best = cfg_.lambda + 1.0;
    int best_slot = -1;
    // instantiated clusters: join on >=, lowest slot wins ties
    for (std::size_t k = 0; k < clusters_.size(); ++k) {
      const auto& c = clusters_[k];
      if (c.status != ClusterStatus::Instantiated) continue;
      double score = stream_.score_point(x, k);
      if (score > best || (score == best && best_slot == -1)) {
        best = score;
        best_slot = static_cast<int>(k);
      }
    }
    // tracked-dead clusters: revival only on a strict win
    bool revival = false;
    for (std::size_t k = 0; k < clusters_.size(); ++k) {
      const auto& c = clusters_[k];
      if (c.status != ClusterStatus::TrackedDead || c.count_past <= 0) continue;
      if (dot(x, c.mean.data(), batch_.dim) < c.cos_zeta_max) continue;
      double score = stream_.score_point(x, k);
      if (score > best) {
        best = score;
        best_slot = static_cast<int>(k);
        revival = true;
      }
    }
    return {best_slot, best_slot == -1 || revival};
  }

  bool removable(int slot) const override {
    const auto& c = clusters_[slot];
    return c.born || c.revived;
  }

  int relabel_sole_member(std::size_t i, int slot,
                          int& structural_events) override {
    auto& c = clusters_[slot];
    const double* x = batch_.row(i);
    if (c.born) {
      c.status = ClusterStatus::Removed;
      oir::Decision d = propose(i);
      if (d.slot == oir::Decision::kNewCluster) {
        // the point reopens its own birth: keep the slot and id
        bool same = c.has_posterior_mean &&
                    std::equal(x, x + batch_.dim, c.posterior_mean.begin());
        c.status = ClusterStatus::Instantiated;
        c.posterior_mean.assign(x, x + batch_.dim);
        c.has_posterior_mean = true;
        structural_events = same ? 0 : 2;
        return slot;
      }
      c.born = false;  // dissolved birth; id stays consumed
      if (d.structural) {
        structural_events = 2;  // dissolution plus a revival elsewhere
        return apply_structural(i, d);
      }
      structural_events = 1;
      return d.slot;
    }
    // abandoned revival rolls back to its pre-frame tracked-dead state
    bool had_posterior = c.has_posterior_mean;
    c.status = ClusterStatus::TrackedDead;
    c.revived = false;
    c.has_posterior_mean = false;
    oir::Decision d = propose(i);
    if (d.structural && d.slot == slot) {
      // immediately re-revived; only a real change if a posterior was dropped
      c.status = ClusterStatus::Instantiated;
      c.revived = true;
      structural_events = had_posterior ? 2 : 0;
      return slot;
    }
    if (d.structural) {
      structural_events = 2;
      return apply_structural(i, d);
    }
    structural_events = 1;
    return d.slot;
  }

  int apply_structural(std::size_t i, const oir::Decision& d) override {
    if (d.slot == oir::Decision::kNewCluster) {
      const double* x = batch_.row(i);
      ClusterState c;
      c.id = next_id_++;
      c.status = ClusterStatus::Instantiated;
      c.born = true;
      c.has_posterior_mean = true;
      c.posterior_mean.assign(x, x + batch_.dim);
      clusters_.push_back(std::move(c));
      return static_cast<int>(clusters_.size() - 1);
    }
    auto& c = clusters_[d.slot];
    c.status = ClusterStatus::Instantiated;
    c.revived = true;
    c.has_posterior_mean = false;
    return d.slot;
  }

 private:
  const Batch& batch_;
  DdpStream& stream_;
  std::vector<ClusterState>& clusters_;
  long& next_id_;
  const DdpConfig& cfg_;
};

}  // namespace

oir::PassResult DdpStream::run_label_pass(const Batch& batch,
                                          std::vector<int>& labels) {
  if (batch.dim != dim_)
    fail(ErrorCode::DimensionMismatch, "frame dimension does not match stream");
  DdpPolicy policy(batch, *this, clusters_, next_id_, config_);
  return oir::parallel_label_pass(batch.size(), labels, policy, config_.workers);
}

void DdpStream::run_parameter_pass(const Batch& batch,
                                   const std::vector<int>& labels) {
  std::vector<std::vector<double>> sums(clusters_.size(),
                                        std::vector<double>());
  std::vector<long> counts(clusters_.size(), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    int k = labels[i];
    if (k < 0) continue;
    if (sums[k].empty()) sums[k].assign(dim_, 0.0);
    const double* x = batch.row(i);
    for (std::size_t j = 0; j < dim_; ++j) sums[k][j] += x[j];
    ++counts[k];
  }
  for (std::size_t k = 0; k < clusters_.size(); ++k) {
    auto& c = clusters_[k];
    if (c.status != ClusterStatus::Instantiated) continue;
    if (counts[k] == 0)
      fail(ErrorCode::InconsistentLabeling, "instantiated cluster with no members");
    double n = norm2(sums[k].data(), dim_);
    if (n <= kNormEps)
      fail(ErrorCode::DegenerateVector, "cluster vector sum vanished");
    std::vector<double> xhat(dim_);
    for (std::size_t j = 0; j < dim_; ++j) xhat[j] = sums[k][j] / n;
    c.xbar_norm = n;
    if (c.count_past == 0) {
      c.posterior_mean = std::move(xhat);
    } else {
      double zeta = geodesic_angle(c.mean.data(), xhat.data(), dim_);
      if (zeta > kPi - 1e-6) {
        // antipodal data: keep the data direction, drop the prior, flag the frame
        frame_degenerate_ = true;
        c.posterior_mean = std::move(xhat);
        c.f_star = n;
      } else {
        TransitionParams p{c.weight, config_.beta, c.dt, n};
        AngleSolution sol = solve_transition_angles(zeta, p);
        c.posterior_mean = rotate_towards(xhat, c.mean, sol.eta);
        c.f_star = sol.f_star;
      }
    }
    c.has_posterior_mean = true;
  }
}

FrameResult DdpStream::finalize_timestep(const Batch& batch,
                                         const std::vector<int>& labels) {
  FrameResult r;
  r.removed_ids = frame_removed_;
  r.iterations = frame_iterations_;
  r.restarts = frame_restarts_;
  r.converged = frame_converged_;
  r.degenerate_geodesic = frame_degenerate_;

  std::vector<long> counts(clusters_.size(), 0);
  for (int k : labels)
    if (k >= 0) ++counts[k];

  for (std::size_t k = 0; k < clusters_.size(); ++k) {
    auto& c = clusters_[k];
    if (c.status != ClusterStatus::Instantiated) continue;
    if (c.count_past == 0)
      c.weight = c.xbar_norm;
    else
      c.weight = c.f_star;
    c.count_past += counts[k];
    c.dt = 0;
    c.mean = c.posterior_mean;

    r.cluster_ids.push_back(c.id);
    r.counts.push_back(counts[k]);
    r.weights.push_back(c.weight);
    r.means.insert(r.means.end(), c.mean.begin(), c.mean.end());
    r.fractions.push_back(static_cast<double>(counts[k]) /
                          static_cast<double>(batch.size()));
    if (c.born) r.born_ids.push_back(c.id);
    if (c.revived) r.revived_ids.push_back(c.id);
  }

  r.labels.resize(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) r.labels[i] = clusters_[labels[i]].id;
  return r;
}

FrameResult DdpStream::step(const Batch& batch) {
  begin_timestep();
  std::vector<int> labels(batch.size(), -1);
  for (int it = 0; it < config_.max_iterations; ++it) {
    ++frame_iterations_;
    auto pass = run_label_pass(batch, labels);
    frame_restarts_ += pass.restarts;
    run_parameter_pass(batch, labels);
    if (!pass.any_change) {
      frame_converged_ = true;
      break;
    }
  }
  return finalize_timestep(batch, labels);
}

}  // namespace dpvmf
