#include "viewsync/broadcast.hpp"

namespace viewsync {

BroadcastSynchronizer::BroadcastSynchronizer(NodeId self, NodeId n, std::size_t f)
    : self_(self), n_(n), f_(f) {}

std::size_t BroadcastSynchronizer::tally(View v) const {
  auto it = tallies_.find(v);
  return it == tallies_.end() ? 0 : it->second.size();
}

Actions BroadcastSynchronizer::on_wish_to_advance() {
  // Each wish re-multicasts, so a node stuck in a view keeps pushing even if
  // earlier copies are still in flight.
  const View v = curr_ + 1;
  sent_.insert(v);
  return {MulticastAction{Message{MsgKind::NEWROUND, v, self_, std::nullopt}}};
}

Actions BroadcastSynchronizer::on_deliver(const Message& msg) {
  if (msg.kind != MsgKind::NEWROUND) return {};
  const View v = msg.view;
  auto& voters = tallies_[v];
  if (!voters.insert(msg.sender).second) return {};  // distinct senders only

  Actions out;
  if (voters.size() >= f_ + 1 && sent_.insert(v).second) {
    // Amplification: relay once per view, even without a local wish.
    out.push_back(MulticastAction{Message{MsgKind::NEWROUND, v, self_, std::nullopt}});
  }
  if (voters.size() >= 2 * f_ + 1 && v > curr_) {
    curr_ = v;
    out.push_back(ProposeViewAction{v});
    // Tallies more than one view behind can never fire again.
    if (curr_ >= 1) {
      tallies_.erase(tallies_.begin(), tallies_.lower_bound(curr_ - 1));
    }
  }
  return out;
}

}  // namespace viewsync
