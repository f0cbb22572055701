#ifndef DPVMF_METRICS_HPP
#define DPVMF_METRICS_HPP

#include <cstdint>

#include "dpvmf/common.hpp"

namespace dpvmf {

/// Normalized mutual information I(A;B)/sqrt(H(A)H(B)) with natural-log
/// entropies. A zero-entropy side yields 0, unless both labelings are a
/// single cluster (then 1).
double nmi(const std::vector<int>& a, const std::vector<int>& b);

/// Mean silhouette with cosine distance d(x, y) = 1 - x^T y. Singleton points
/// and degenerate zero-distance points contribute 0. When n > max_sample, a
/// seeded uniform subsample is scored against the full set.
double silhouette_cosine(const Batch& batch, const std::vector<int>& labels,
                         std::size_t max_sample = 10000, std::uint64_t seed = 0);

}  // namespace dpvmf

#endif
