#include "viewsync/doubling.hpp"

#include <stdexcept>

namespace viewsync {

DoublingSynchronizer::DoublingSynchronizer(Duration beta, View start_view)
    : beta_(beta),
      curr_(start_view),
      wish_(start_view),
      view_duration_(beta.doubled_times(start_view)) {
  if (beta <= Time{}) throw std::invalid_argument("beta must be positive");
}

Actions DoublingSynchronizer::on_start() {
  return {SetTimerAction{{TimerKind::ViewEnd, curr_}, view_duration_}};
}

Actions DoublingSynchronizer::on_wish_to_advance() {
  ++wish_;
  return {};
}

Actions DoublingSynchronizer::on_deliver(const Message&) {
  return {};  // leaderless and silent; nothing to receive
}

Actions DoublingSynchronizer::on_timer(const TimerId& id) {
  if (id.kind != TimerKind::ViewEnd || id.view != curr_) return {};
  ++curr_;
  view_duration_ = view_duration_.doubled_times(1);
  Actions out;
  if (wish_ >= curr_) {
    out.push_back(ProposeViewAction{curr_});
  }
  out.push_back(SetTimerAction{{TimerKind::ViewEnd, curr_}, view_duration_});
  return out;
}

Time doubling_entry_time(View v, View v0, Duration beta) {
  if (v < v0) throw std::invalid_argument("entry time undefined for v < v0");
  // beta * (2^v - 2^v0) = beta * 2^v0 * (2^(v-v0) - 1)
  const Time base = beta.doubled_times(v0);
  return base.doubled_times(v - v0) - base;
}

View doubling_min_sync_view(Duration c, View v0_min, View v0_max, Duration beta) {
  if (v0_min > v0_max) throw std::invalid_argument("v0_min must not exceed v0_max");
  const Time spread = beta.doubled_times(v0_max) - beta.doubled_times(v0_min);
  for (View v = v0_max;; ++v) {
    Time lead;
    try {
      lead = beta.doubled_times(v);
    } catch (const std::overflow_error&) {
      return v;  // overlap already exceeds any representable c
    }
    if (lead - spread >= c) return v;
  }
}

}  // namespace viewsync
