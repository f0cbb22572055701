#include "dpvmf/metrics.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <random>

namespace dpvmf {

namespace {

std::vector<int> compact_labels(const std::vector<int>& labels, std::size_t& k_out) {
  std::map<int, int> remap;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, fresh] = remap.emplace(labels[i], static_cast<int>(remap.size()));
    (void)fresh;
    out[i] = it->second;
  }
  k_out = remap.size();
  return out;
}

}  // namespace

double nmi(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size() || a.empty())
    fail(ErrorCode::LengthMismatch, "nmi: labelings must have equal nonzero length");
  const double n = static_cast<double>(a.size());

  std::size_t ka = 0, kb = 0;
  std::vector<int> ca = compact_labels(a, ka);
  std::vector<int> cb = compact_labels(b, kb);

  std::vector<double> pa(ka, 0.0), pb(kb, 0.0);
  std::map<std::pair<int, int>, double> joint;
  for (std::size_t i = 0; i < a.size(); ++i) {
    pa[ca[i]] += 1.0;
    pb[cb[i]] += 1.0;
    joint[{ca[i], cb[i]}] += 1.0;
  }

  auto entropy = [n](const std::vector<double>& counts) {
    double h = 0.0;
    for (double c : counts)
      if (c > 0.0) h -= (c / n) * std::log(c / n);
    return h;
  };
  double ha = entropy(pa), hb = entropy(pb);
  if (ha <= 0.0 && hb <= 0.0) return 1.0;  // both single-cluster
  if (ha <= 0.0 || hb <= 0.0) return 0.0;

  double mi = 0.0;
  for (const auto& [key, c] : joint) {
    double pij = c / n;
    mi += pij * std::log(pij * n * n / (pa[key.first] * pb[key.second]));
  }
  double v = mi / std::sqrt(ha * hb);
  return std::min(1.0, std::max(0.0, v));
}

double silhouette_cosine(const Batch& batch, const std::vector<int>& labels,
                         std::size_t max_sample, std::uint64_t seed) {
  const std::size_t n = batch.size(), d = batch.dim;
  if (labels.size() != n)
    fail(ErrorCode::LengthMismatch, "silhouette: labels do not match batch size");

  std::size_t k = 0;
  std::vector<int> cl = compact_labels(labels, k);
  if (k < 2) fail(ErrorCode::SingleCluster, "silhouette undefined for one cluster");

  // per-cluster vector sums: mean distance to a cluster is 1 - x . S_c / |c|
  std::vector<std::vector<double>> sums(k, std::vector<double>(d, 0.0));
  std::vector<double> sizes(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = batch.row(i);
    for (std::size_t j = 0; j < d; ++j) sums[cl[i]][j] += x[j];
    sizes[cl[i]] += 1.0;
  }

  std::vector<std::size_t> sample(n);
  std::iota(sample.begin(), sample.end(), 0);
  if (n > max_sample && max_sample > 0) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < max_sample; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(sample[i], sample[pick(rng)]);
    }
    sample.resize(max_sample);
  }

  double total = 0.0;
  for (std::size_t i : sample) {
    const double* x = batch.row(i);
    int own = cl[i];
    double s_i = 0.0;
    if (sizes[own] > 1.0) {
      double own_dot = dot(x, sums[own].data(), d);
      double a = 1.0 - (own_dot - 1.0) / (sizes[own] - 1.0);  // excludes self
      double b = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        if (static_cast<int>(c) == own) continue;
        b = std::min(b, 1.0 - dot(x, sums[c].data(), d) / sizes[c]);
      }
      double m = std::max(a, b);
      s_i = m > 0.0 ? (b - a) / m : 0.0;
    }
    total += s_i;
  }
  return total / static_cast<double>(sample.size());
}

}  // namespace dpvmf
