#include "dpvmf/synth.hpp"

namespace dpvmf {

void SynthSpec::validate() const {
  if (k_t < 1) fail(ErrorCode::InvalidArgument, "k_t must be >= 1");
  if (n < 1) fail(ErrorCode::InvalidArgument, "n must be >= 1");
  if (dim < 2) fail(ErrorCode::InvalidArgument, "dim must be >= 2");
  if (min_separation < 0.0)
    fail(ErrorCode::InvalidArgument, "min_separation must be >= 0");
  if (!(tau >= 0.0)) fail(ErrorCode::InvalidArgument, "tau must be >= 0");
  if (!weights.empty()) {
    if (weights.size() != static_cast<std::size_t>(k_t))
      fail(ErrorCode::InvalidArgument, "weights must have k_t entries");
    double s = 0.0;
    for (double w : weights) {
      if (w < 0.0) fail(ErrorCode::InvalidArgument, "weights must be >= 0");
      s += w;
    }
    if (std::abs(s - 1.0) > 1e-9)
      fail(ErrorCode::InvalidArgument, "weights must sum to 1");
  }
}

std::vector<double> draw_separated_means(int k, std::size_t dim, double min_sep,
                                         Rng& rng) {
  const long cap_per_mean = 10000;
  std::vector<std::vector<double>> means;
  means.reserve(k);
  for (int i = 0; i < k; ++i) {
    bool placed = false;
    for (long attempt = 0; attempt < cap_per_mean; ++attempt) {
      auto candidate = sample_uniform_sphere(dim, rng);
      bool ok = true;
      for (const auto& m : means) {
        if (geodesic_angle(m.data(), candidate.data(), dim) < min_sep) {
          ok = false;
          break;
        }
      }
      if (ok) {
        means.push_back(std::move(candidate));
        placed = true;
        break;
      }
    }
    if (!placed)
      fail(ErrorCode::SeparationInfeasible,
           "could not place " + std::to_string(k) + " means at the requested separation");
  }
  std::vector<double> flat;
  flat.reserve(k * dim);
  for (const auto& m : means) flat.insert(flat.end(), m.begin(), m.end());
  return flat;
}

SynthData generate(const SynthSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  SynthData out;
  out.means = draw_separated_means(spec.k_t, spec.dim, spec.min_separation, rng);

  std::vector<double> w = spec.weights;
  if (w.empty()) w.assign(spec.k_t, 1.0 / spec.k_t);
  std::discrete_distribution<int> pick(w.begin(), w.end());

  out.points.dim = spec.dim;
  out.points.data.reserve(spec.n * spec.dim);
  out.labels.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    int k = pick(rng);
    std::vector<double> mean(out.means.begin() + k * spec.dim,
                             out.means.begin() + (k + 1) * spec.dim);
    auto x = sample_vmf(mean, spec.tau, rng);
    out.points.append(x.data());
    out.labels.push_back(k);
  }
  return out;
}

void StreamScenario::validate() const {
  if (dim < 2) fail(ErrorCode::InvalidArgument, "dim must be >= 2");
  if (points_per_cluster < 1)
    fail(ErrorCode::InvalidArgument, "points_per_cluster must be >= 1");
  if (!explicit_means.empty() && explicit_means.size() % dim != 0)
    fail(ErrorCode::InvalidArgument, "explicit means layout does not match dim");
  if (pool_size() == 0)
    fail(ErrorCode::InvalidArgument, "scenario needs a cluster pool or explicit means");
  if (frames.empty())
    fail(ErrorCode::InvalidArgument, "scenario needs at least one frame");
  for (const auto& f : frames) {
    if (f.empty()) fail(ErrorCode::InvalidArgument, "every frame must be non-empty");
    for (int id : f)
      if (id < 0 || static_cast<std::size_t>(id) >= pool_size())
        fail(ErrorCode::InvalidArgument, "frame references unknown cluster id");
  }
}

std::vector<FrameData> generate_stream(const StreamScenario& scenario) {
  scenario.validate();
  Rng pool_rng(scenario.seed);
  std::vector<double> means = scenario.explicit_means;
  if (means.empty())
    means = draw_separated_means(scenario.pool, scenario.dim,
                                 scenario.min_separation, pool_rng);

  std::vector<FrameData> out;
  out.reserve(scenario.frames.size());
  for (std::size_t f = 0; f < scenario.frames.size(); ++f) {
    std::seed_seq seq{scenario.seed, static_cast<std::uint64_t>(f + 1)};
    Rng rng(seq);
    const auto& active = scenario.frames[f];
    FrameData frame;
    frame.points.dim = scenario.dim;
    std::size_t n = active.size() * scenario.points_per_cluster;
    frame.points.data.reserve(n * scenario.dim);
    frame.true_ids.reserve(n);
    std::uniform_int_distribution<std::size_t> pick(0, active.size() - 1);
    for (std::size_t i = 0; i < n; ++i) {
      int id = active[pick(rng)];
      std::vector<double> mean(means.begin() + id * scenario.dim,
                               means.begin() + (id + 1) * scenario.dim);
      auto x = sample_vmf(mean, scenario.tau, rng);
      frame.points.append(x.data());
      frame.true_ids.push_back(id);
    }
    out.push_back(std::move(frame));
  }
  return out;
}

}  // namespace dpvmf
