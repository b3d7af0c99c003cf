#include "viewsync/cogsworth.hpp"

#include <stdexcept>

namespace viewsync {

CogsworthSynchronizer::CogsworthSynchronizer(NodeId self, NodeId n, std::size_t f,
                                             const LeaderSchedule& schedule,
                                             const CertificateVerifier& verifier,
                                             Duration delta)
    : self_(self),
      n_(n),
      f_(f),
      schedule_(schedule),
      verifier_(verifier),
      retry_wait_(delta.scaled(2)) {
  if (schedule.node_count() != n) throw std::invalid_argument("schedule size mismatch");
}

bool CogsworthSynchronizer::is_window_leader_for(View v) const {
  for (View r = v; r <= v + f_ + 1; ++r) {
    if (schedule_.leader_of(r) == self_) return true;
  }
  return false;
}

bool CogsworthSynchronizer::sender_in_window(const Message& msg) const {
  for (View r = msg.view; r <= msg.view + f_ + 1; ++r) {
    if (schedule_.leader_of(r) == msg.sender) return true;
  }
  return false;
}

bool CogsworthSynchronizer::cert_ok(const Message& msg, CertKind want) const {
  return msg.cert && msg.cert->kind == want && msg.cert->view == msg.view &&
         verifier_.verify(*msg.cert);
}

Actions CogsworthSynchronizer::on_wish_to_advance() {
  const View v = curr_ + 1;
  Actions out;
  out.push_back(SendAction{Message{MsgKind::WISH, v, self_, std::nullopt},
                           schedule_.leader_of(v)});
  pending_wish_ = v;
  // The enlistment pointer never moves backwards: leaders already found
  // unresponsive in this epoch are not probed again for the next view.
  if (next_tc_leader_ < v + 1) next_tc_leader_ = v + 1;
  out.push_back(SetTimerAction{{TimerKind::TcRetry, v}, retry_wait_});
  return out;
}

Actions CogsworthSynchronizer::on_timer(const TimerId& id) {
  if (id.kind == TimerKind::TcRetry) {
    const View v = id.view;
    if (pending_wish_ != v || curr_ >= v) return {};
    if (held_tc_.count(v)) {
      pending_wish_.reset();
      return {};
    }
    if (next_tc_leader_ > v + f_ + 1) return {};  // all fallback leaders tried
    Actions out;
    out.push_back(SendAction{Message{MsgKind::WISH, v, self_, std::nullopt},
                             schedule_.leader_of(next_tc_leader_)});
    ++next_tc_leader_;
    out.push_back(SetTimerAction{{TimerKind::TcRetry, v}, retry_wait_});
    return out;
  }
  if (id.kind == TimerKind::QcRetry) {
    const View v = id.view;
    if (pending_vote_ != v || curr_ >= v) return {};
    if (next_qc_leader_ > v + f_ + 1) return {};
    auto held = held_tc_.find(v);
    // A vote is only ever cast after a TC is stored, so escalation always has
    // the certificate to hand over.
    if (held == held_tc_.end()) {
      throw std::logic_error("vote escalation without a stored TC");
    }
    const NodeId target = schedule_.leader_of(next_qc_leader_);
    Actions out;
    out.push_back(SendAction{Message{MsgKind::VOTE, v, self_, std::nullopt}, target});
    out.push_back(SendAction{Message{MsgKind::TC, v, self_, held->second}, target});
    ++next_qc_leader_;
    out.push_back(SetTimerAction{{TimerKind::QcRetry, v}, retry_wait_});
    return out;
  }
  return {};
}

Actions CogsworthSynchronizer::on_deliver(const Message& msg) {
  switch (msg.kind) {
    case MsgKind::WISH: {
      Actions out;
      leader_on_wish(msg, out);
      return out;
    }
    case MsgKind::VOTE: {
      Actions out;
      leader_on_vote(msg, out);
      return out;
    }
    case MsgKind::TC:
      return handle_tc(msg);
    case MsgKind::QC:
      return handle_qc(msg);
    case MsgKind::NEWROUND:
      return {};
  }
  return {};
}

void CogsworthSynchronizer::leader_on_wish(const Message& msg, Actions& out) {
  const View v = msg.view;
  if (!is_window_leader_for(v)) return;
  auto& tally = wish_tally_[v];
  tally.insert(msg.sender);
  if (tally.size() >= f_ + 1 && !tc_sent_.count(v)) {
    auto cert = form_certificate(CertKind::TC, v, tally, f_);
    out.push_back(MulticastAction{Message{MsgKind::TC, v, self_, std::move(cert)}});
    tc_sent_.insert(v);
  }
}

void CogsworthSynchronizer::leader_on_vote(const Message& msg, Actions& out) {
  const View v = msg.view;
  if (!is_window_leader_for(v)) return;
  auto& tally = vote_tally_[v];
  tally.insert(msg.sender);
  if (tally.size() >= 2 * f_ + 1 && !qc_sent_.count(v)) {
    auto cert = form_certificate(CertKind::QC, v, tally, f_);
    out.push_back(MulticastAction{Message{MsgKind::QC, v, self_, std::move(cert)}});
    qc_sent_.insert(v);
  }
}

Actions CogsworthSynchronizer::handle_tc(const Message& msg) {
  if (!cert_ok(msg, CertKind::TC)) return {};
  const View v = msg.view;
  Actions out;

  // Replica role: react to a leader's relay. Each valid relay triggers a
  // fresh vote to its sender, so a later relay by a fallback leader collects
  // votes of its own. Nodes already past v vote too: a fallback leader may
  // need their votes to finish the QC for whoever is still behind.
  if (msg.route == Route::Multicast && sender_in_window(msg)) {
    out.push_back(SendAction{Message{MsgKind::TC, v, self_, *msg.cert},
                             schedule_.leader_of(v)});
    out.push_back(SendAction{Message{MsgKind::VOTE, v, self_, std::nullopt}, msg.sender});
    if (v > curr_) {
      held_tc_[v] = *msg.cert;
      if (pending_wish_ == v) pending_wish_.reset();
      pending_vote_ = v;
      if (next_qc_leader_ < v + 1) next_qc_leader_ = v + 1;
      out.push_back(SetTimerAction{{TimerKind::QcRetry, v}, retry_wait_});
    }
  }

  // Leader role: a TC aimed straight at this node enlists it as a relay. The
  // certificate already proves f+1 wishes, so it is multicast as-is.
  if (msg.route == Route::Direct && is_window_leader_for(v) && !tc_sent_.count(v)) {
    out.push_back(MulticastAction{Message{MsgKind::TC, v, self_, *msg.cert}});
    tc_sent_.insert(v);
  }
  return out;
}

Actions CogsworthSynchronizer::handle_qc(const Message& msg) {
  if (!cert_ok(msg, CertKind::QC)) return {};
  if (!sender_in_window(msg)) return {};
  const View v = msg.view;
  if (v <= curr_) return {};

  curr_ = v;
  if (next_tc_leader_ < v + 1) next_tc_leader_ = v + 1;
  if (next_qc_leader_ < v + 1) next_qc_leader_ = v + 1;
  pending_wish_.reset();
  pending_vote_.reset();
  held_tc_.erase(held_tc_.begin(), held_tc_.upper_bound(v));
  wish_tally_.erase(wish_tally_.begin(), wish_tally_.upper_bound(v));
  vote_tally_.erase(vote_tally_.begin(), vote_tally_.upper_bound(v));

  return {ProposeViewAction{v}};
}

}  // namespace viewsync
