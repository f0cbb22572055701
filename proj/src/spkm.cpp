#include "dpvmf/spkm.hpp"

#include <limits>

namespace dpvmf {

void SpkmConfig::validate(std::size_t n) const {
  if (k < 1) fail(ErrorCode::InvalidArgument, "k must be >= 1");
  if (static_cast<std::size_t>(k) > n)
    fail(ErrorCode::InvalidArgument, "k exceeds the number of observations");
  if (max_iterations < 1 || restarts < 1)
    fail(ErrorCode::InvalidArgument, "max_iterations and restarts must be >= 1");
}

std::vector<std::vector<double>> spkm_init_means(const Batch& batch, int k, Rng& rng) {
  const std::size_t n = batch.size(), d = batch.dim;
  std::vector<std::vector<double>> means;
  means.reserve(k);

  std::uniform_int_distribution<std::size_t> uni(0, n - 1);
  std::size_t first = uni(rng);
  means.emplace_back(batch.row(first), batch.row(first) + d);

  std::vector<double> best_sim(n, -2.0);
  std::vector<double> weight(n);
  while (means.size() < static_cast<std::size_t>(k)) {
    const auto& m = means.back();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      best_sim[i] = std::max(best_sim[i], dot(batch.row(i), m.data(), d));
      weight[i] = std::max(0.0, 1.0 - best_sim[i]);
      total += weight[i];
    }
    std::size_t pick;
    if (total <= 0.0) {
      pick = uni(rng);  // all points already coincide with a chosen mean
    } else {
      std::discrete_distribution<std::size_t> dist(weight.begin(), weight.end());
      pick = dist(rng);
    }
    means.emplace_back(batch.row(pick), batch.row(pick) + d);
  }
  return means;
}

namespace {

struct SpkmRun {
  std::vector<int> labels;
  std::vector<std::vector<double>> means;
  double objective = 0.0;
  int iterations = 0;
  int repairs = 0;
  bool converged = false;
  std::vector<double> trace;
};

SpkmRun run_once(const Batch& batch, const SpkmConfig& cfg, Rng& rng) {
  const std::size_t n = batch.size(), d = batch.dim;
  const int k = cfg.k;
  SpkmRun run;
  run.means = spkm_init_means(batch, k, rng);
  run.labels.assign(n, -1);

  for (int it = 0; it < cfg.max_iterations; ++it) {
    ++run.iterations;
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const double* x = batch.row(i);
      int best = 0;
      double best_score = dot(x, run.means[0].data(), d);
      for (int c = 1; c < k; ++c) {
        double s = dot(x, run.means[c].data(), d);
        if (s > best_score) {
          best_score = s;
          best = c;
        }
      }
      if (run.labels[i] != best) {
        run.labels[i] = best;
        changed = true;
      }
    }

    std::vector<std::vector<double>> sums(k, std::vector<double>(d, 0.0));
    std::vector<long> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const double* x = batch.row(i);
      for (std::size_t j = 0; j < d; ++j) sums[run.labels[i]][j] += x[j];
      ++counts[run.labels[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      // reseed an emptied cluster at the worst-fitting point
      std::size_t worst = 0;
      double worst_sim = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        double s = dot(batch.row(i), run.means[run.labels[i]].data(), d);
        if (s < worst_sim && counts[run.labels[i]] > 1) {
          worst_sim = s;
          worst = i;
        }
      }
      int old = run.labels[worst];
      for (std::size_t j = 0; j < d; ++j) {
        sums[old][j] -= batch.row(worst)[j];
        sums[c][j] = batch.row(worst)[j];
      }
      --counts[old];
      counts[c] = 1;
      run.labels[worst] = c;
      ++run.repairs;
      changed = true;
    }
    for (int c = 0; c < k; ++c) {
      double nn = norm2(sums[c].data(), d);
      if (nn <= kNormEps)
        fail(ErrorCode::DegenerateVector, "spkm cluster vector sum vanished");
      for (std::size_t j = 0; j < d; ++j) run.means[c][j] = sums[c][j] / nn;
    }

    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      obj += dot(batch.row(i), run.means[run.labels[i]].data(), d);
    run.trace.push_back(obj);
    run.objective = obj;
    if (!changed) {
      run.converged = true;
      break;
    }
  }
  return run;
}

}  // namespace

FitResult spkm_fit(const Batch& batch, const SpkmConfig& config) {
  config.validate(batch.size());
  Rng master(config.seed);
  SpkmRun best;
  best.objective = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < config.restarts; ++r) {
    Rng rng(master());
    SpkmRun run = run_once(batch, config, rng);
    if (run.objective > best.objective) best = std::move(run);
  }

  FitResult res;
  res.dim = batch.dim;
  res.k = config.k;
  res.labels = best.labels;
  res.counts.assign(config.k, 0);
  for (int l : res.labels) ++res.counts[l];
  for (const auto& m : best.means) res.means.insert(res.means.end(), m.begin(), m.end());
  res.objective = best.objective;
  res.iterations = best.iterations;
  res.restarts = config.restarts;
  res.repairs = best.repairs;
  res.converged = best.converged;
  res.objective_trace = best.trace;
  return res;
}

}  // namespace dpvmf
