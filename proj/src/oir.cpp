#include "dpvmf/oir.hpp"

#include <cstdlib>
#include <mutex>
#include <thread>

namespace dpvmf::oir {

int default_workers() {
  if (const char* env = std::getenv("DPVMF_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t begin, std::size_t end, int workers,
                  const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t n = end > begin ? end - begin : 0;
  if (n == 0) return;
  if (workers <= 0) workers = default_workers();
  std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  if (w <= 1 || n < 2048) {
    body(begin, end);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(w);
  std::size_t chunk = (n + w - 1) / w;
  std::exception_ptr first_error;
  std::mutex err_mutex;
  for (std::size_t t = 0; t < w; ++t) {
    std::size_t lo = begin + t * chunk;
    std::size_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([&, lo, hi] {
      try {
        body(lo, hi);
      } catch (...) {
        std::lock_guard<std::mutex> g(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

PassResult parallel_label_pass(std::size_t n, std::vector<int>& labels,
                               LabelPolicy& policy, int workers) {
  if (labels.size() != n)
    fail(ErrorCode::LengthMismatch, "label array does not match batch size");

  PassResult res;
  std::vector<int> entry = labels;
  std::vector<int> proposed(n, Decision::kNewCluster);
  std::vector<std::uint8_t> structural(n, 0);
  std::size_t p = 0;

  while (p < n) {
    ++res.sweeps;
    // parallel sweep against the frozen snapshot
    parallel_for(p, n, workers, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        Decision d = policy.propose(i);
        proposed[i] = d.slot;
        structural[i] = d.structural ? 1 : 0;
      }
    });

    // Reconciliation: walk ids in order with live counts to find the first
    // structural event (sole-member deletion, creation, or revival). Labels
    // before it are exactly what a sequential pass would produce.
    std::vector<long> cnt(policy.slot_count(), 0);
    for (std::size_t i = 0; i < n; ++i)
      if (labels[i] >= 0) ++cnt[labels[i]];

    std::size_t istar = n;
    int relabel_slot = -1;
    int relabel_events = 0;
    for (std::size_t i = p; i < n; ++i) {
      int old_slot = labels[i];
      if (old_slot >= 0 && cnt[old_slot] == 1 && policy.removable(old_slot)) {
        int events = 0;
        int landed = policy.relabel_sole_member(i, old_slot, events);
        if (events == 0) {
          // exact in-place resurrection: the state is unchanged, so the
          // sweep's proposals stay valid (and proposed[i] == old_slot,
          // because nothing else could have beaten the cluster's own mean)
          continue;
        }
        istar = i;
        relabel_slot = landed;
        relabel_events = events;
        break;
      }
      if (structural[i]) {
        istar = i;
        break;
      }
      if (old_slot >= 0) --cnt[old_slot];
      ++cnt[proposed[i]];
    }

    for (std::size_t i = p; i < istar; ++i) labels[i] = proposed[i];
    if (istar == n) break;

    if (relabel_events > 0) {
      labels[istar] = relabel_slot;
      res.restarts += relabel_events;
    } else {
      labels[istar] =
          policy.apply_structural(istar, Decision{proposed[istar], true});
      ++res.restarts;
    }
    p = istar + 1;
  }

  res.any_change = labels != entry;
  return res;
}

}  // namespace dpvmf::oir
