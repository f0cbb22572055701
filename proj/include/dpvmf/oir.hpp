#ifndef DPVMF_OIR_HPP
#define DPVMF_OIR_HPP

#include <cstdint>
#include <functional>

#include "dpvmf/common.hpp"

namespace dpvmf::oir {

/// Outcome of scoring one observation against a frozen snapshot.
struct Decision {
  int slot = -1;           // cluster slot, or kNewCluster
  bool structural = false; // committing it changes the cluster set
  static constexpr int kNewCluster = -1;
};

/// Scoring and mutation hooks for one label pass. propose() must be a pure
/// function of the policy state between structural commits; the engine calls
/// the mutating hooks only from the single coordinator thread.
class LabelPolicy {
 public:
  virtual ~LabelPolicy() = default;

  virtual std::size_t slot_count() const = 0;
  virtual Decision propose(std::size_t i) const = 0;

  /// Whether sole-member deletion applies to this slot.
  virtual bool removable(int slot) const = 0;
  /// Sequential semantics at a sole member: delete (or roll back) the cluster,
  /// re-decide observation i against the reduced set, and apply the outcome.
  /// When the re-decision is "open a new cluster" the policy must reuse the
  /// same slot, so a steady singleton is a fixpoint rather than an endless
  /// remove/recreate churn. Returns the slot the observation lands in;
  /// structural_events is the number of modifications the cluster set actually
  /// underwent (0 when the state is bit-identical afterwards).
  virtual int relabel_sole_member(std::size_t i, int slot,
                                  int& structural_events) = 0;
  /// Apply a structural selection (creation or revival) at observation i;
  /// returns the slot the observation lands in.
  virtual int apply_structural(std::size_t i, const Decision& d) = 0;
};

struct PassResult {
  bool any_change = false;
  int restarts = 0;  // committed structural modifications
  int sweeps = 0;
};

/// Data-parallel label pass with sequential-execution semantics: the result
/// is label-for-label identical to visiting observations in ascending id,
/// deleting a cluster when its sole member is re-labeled, and making new or
/// revived clusters visible to all later observations. Workers sweep disjoint
/// contiguous id ranges against an immutable snapshot; the lowest id that
/// changes the cluster set wins, its change is applied, and everything after
/// it is recomputed.
PassResult parallel_label_pass(std::size_t n, std::vector<int>& labels,
                               LabelPolicy& policy, int workers);

/// Chunked parallel-for helper used by the sweeps (and the metrics module).
void parallel_for(std::size_t begin, std::size_t end, int workers,
                  const std::function<void(std::size_t, std::size_t)>& body);

int default_workers();

}  // namespace dpvmf::oir

#endif
