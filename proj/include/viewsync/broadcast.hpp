#pragma once

#include <map>
#include <set>

#include "viewsync/synchronizer.hpp"

namespace viewsync {

/// All-to-all synchronizer with quorum amplification: a wish multicasts
/// NEWROUND(curr+1); f+1 distinct NEWROUND(v) make a node relay its own
/// NEWROUND(v) once; 2f+1 distinct NEWROUND(v) with v > curr advance it.
class BroadcastSynchronizer : public Synchronizer {
 public:
  BroadcastSynchronizer(NodeId self, NodeId n, std::size_t f);

  Actions on_wish_to_advance() override;
  Actions on_deliver(const Message& msg) override;

  View current_view() const override { return curr_; }

  std::size_t tally(View v) const;
  bool already_sent(View v) const { return sent_.count(v) > 0; }

 private:
  Actions advance_if_quorum(View v);

  NodeId self_;
  NodeId n_;
  std::size_t f_;
  View curr_ = 0;
  std::set<View> sent_;
  std::map<View, std::set<NodeId>> tallies_;
};

}  // namespace viewsync
