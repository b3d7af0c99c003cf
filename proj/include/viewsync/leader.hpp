#pragma once

#include <cstdint>
#include <vector>

#include "viewsync/types.hpp"

namespace viewsync {

/// Deterministic view-to-leader mapping, shared by all nodes and the
/// analysis code. Built on a permutation of [1, n] so that every window of
/// n consecutive views covers every node exactly once.
class LeaderSchedule {
 public:
  /// leader(v) = (v mod n) + 1.
  static LeaderSchedule round_robin(NodeId n);

  /// Round-robin over a custom permutation: leader(v) = perm[v mod n].
  static LeaderSchedule from_permutation(std::vector<NodeId> perm);

  /// Seeded Fisher-Yates shuffle of the round-robin order.
  static LeaderSchedule random(NodeId n, std::uint64_t seed);

  NodeId leader_of(View v) const { return perm_[v % perm_.size()]; }
  NodeId node_count() const { return static_cast<NodeId>(perm_.size()); }
  const std::vector<NodeId>& permutation() const { return perm_; }

 private:
  explicit LeaderSchedule(std::vector<NodeId> perm) : perm_(std::move(perm)) {}
  std::vector<NodeId> perm_;
};

}  // namespace viewsync
