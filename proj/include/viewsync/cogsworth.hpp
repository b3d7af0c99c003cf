#pragma once

#include <map>
#include <optional>
#include <set>

#include "viewsync/leader.hpp"
#include "viewsync/ledger.hpp"
#include "viewsync/synchronizer.hpp"

namespace viewsync {

/// Leader-relayed synchronizer. Wishes go to the leader of the target view
/// only; the leader aggregates f+1 wishes into a TC and 2f+1 votes into a QC
/// and multicasts each once, so a synchronization with an honest leader costs
/// 5n messages. Nodes that time out waiting for a certificate enlist the
/// leaders of the following views, one per 2*delta, up to f+1 of them.
///
/// Every node runs both roles: the replica role reacts to TC/QC multicasts
/// from leaders in the window [v, v+f+1]; the leader role aggregates directed
/// WISH/VOTE messages and treats a directed TC as ready-made evidence to
/// relay without re-counting.
class CogsworthSynchronizer : public Synchronizer {
 public:
  CogsworthSynchronizer(NodeId self, NodeId n, std::size_t f,
                        const LeaderSchedule& schedule,
                        const CertificateVerifier& verifier, Duration delta);

  Actions on_wish_to_advance() override;
  Actions on_deliver(const Message& msg) override;
  Actions on_timer(const TimerId& id) override;

  View current_view() const override { return curr_; }
  View next_tc_leader() const { return next_tc_leader_; }
  View next_qc_leader() const { return next_qc_leader_; }
  bool holds_tc(View v) const { return held_tc_.count(v) > 0; }

 private:
  bool is_window_leader_for(View v) const;
  bool sender_in_window(const Message& msg) const;
  bool cert_ok(const Message& msg, CertKind want) const;

  Actions handle_tc(const Message& msg);
  Actions handle_qc(const Message& msg);
  void leader_on_wish(const Message& msg, Actions& out);
  void leader_on_vote(const Message& msg, Actions& out);

  NodeId self_;
  NodeId n_;
  std::size_t f_;
  const LeaderSchedule& schedule_;
  const CertificateVerifier& verifier_;
  Duration retry_wait_;  // 2 * delta

  // replica role
  View curr_ = 0;
  View next_tc_leader_ = 0;  // next view whose leader to enlist for a TC
  View next_qc_leader_ = 0;  // next view whose leader to enlist for a QC
  std::optional<View> pending_wish_;
  std::optional<View> pending_vote_;
  std::map<View, Certificate> held_tc_;

  // leader role
  std::map<View, std::set<NodeId>> wish_tally_;
  std::map<View, std::set<NodeId>> vote_tally_;
  std::set<View> tc_sent_;
  std::set<View> qc_sent_;
};

}  // namespace viewsync
