#pragma once

#include "viewsync/synchronizer.hpp"

namespace viewsync {

/// Message-free synchronizer: every view lasts twice as long as the one
/// before it, so all nodes eventually share a view for any required length.
/// A wish counter gates the proposeView signal; nothing is ever sent.
class DoublingSynchronizer : public Synchronizer {
 public:
  /// A node created with start_view v > 0 stands in for one that has been
  /// running long enough to reach view v: its first view duration is
  /// beta * 2^v and its wish counter starts at v.
  DoublingSynchronizer(Duration beta, View start_view = 0);

  /// Overrides the wish counter's starting value (tests only; the gate then
  /// suppresses signals until wishes catch up with the view counter).
  void set_initial_wish(std::uint64_t wish) { wish_ = wish; }

  Actions on_start() override;
  Actions on_wish_to_advance() override;
  Actions on_deliver(const Message& msg) override;
  Actions on_timer(const TimerId& id) override;

  View current_view() const override { return curr_; }
  std::uint64_t wish_count() const { return wish_; }
  Duration view_duration() const { return view_duration_; }

 private:
  Duration beta_;
  View curr_;
  std::uint64_t wish_;
  Duration view_duration_;
};

/// Time at which a doubling node that held view v0 at time 0 enters view v:
/// beta * (2^v - 2^v0). Requires v >= v0.
Time doubling_entry_time(View v, View v0, Duration beta);

/// Smallest view v >= v0_max whose all-nodes overlap, for start views
/// spanning [v0_min, v0_max], lasts at least c:
/// beta * (2^v + 2^v0_min - 2^v0_max) >= c.
View doubling_min_sync_view(Duration c, View v0_min, View v0_max, Duration beta);

}  // namespace viewsync
