#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"
#include "viewsync/doubling.hpp"
#include "viewsync/rng.hpp"

using namespace viewsync;
using namespace viewsync::testing;

namespace {

ScenarioConfig doubling_config(View k, View l, Time beta, Time c, Time horizon) {
  ScenarioConfig config;
  config.synchronizer = SyncKind::Doubling;
  config.n = 4;
  config.f = 0;
  config.beta = beta;
  config.wish_interval = beta;
  config.min_overlap = c;
  config.horizon = horizon;
  config.start_view_min = k;
  config.start_view_max = l;
  config.seed = 5;
  return config;
}

}  // namespace

TEST_CASE("wishes only bump the counter") {
  DoublingSynchronizer sync(Time::units(1));
  std::size_t send_count = 0;
  for (int i = 0; i < 10; ++i) {
    const Actions out = sync.on_wish_to_advance();
    send_count += count_sends(out);
    CHECK(proposals(out).empty());
  }
  CHECK(sync.wish_count() == 10);
  CHECK(send_count == 0);
}

TEST_CASE("view boundary doubles the duration and gates on wishes") {
  SUBCASE("wish ahead of curr signals") {
    DoublingSynchronizer sync(Time::units(1));
    sync.on_wish_to_advance();  // wish = 1
    const Actions out = sync.on_timer({TimerKind::ViewEnd, 0});
    CHECK(proposals(out) == std::vector<View>{1});
    CHECK(sync.current_view() == 1);
    CHECK(sync.view_duration() == Time::units(2));
  }
  SUBCASE("wish behind curr stays silent") {
    DoublingSynchronizer sync(Time::units(1), 3);
    sync.set_initial_wish(0);
    const Actions out = sync.on_timer({TimerKind::ViewEnd, 3});
    CHECK(proposals(out).empty());
    CHECK(sync.current_view() == 4);
    CHECK(sync.view_duration() == Time::units(16));
  }
  SUBCASE("stale boundary timers are ignored") {
    DoublingSynchronizer sync(Time::units(1));
    sync.on_wish_to_advance();
    (void)sync.on_timer({TimerKind::ViewEnd, 0});
    const Actions out = sync.on_timer({TimerKind::ViewEnd, 0});
    CHECK(out.empty());
    CHECK(sync.current_view() == 1);
  }
}

TEST_CASE("entry-time closed form") {
  CHECK(doubling_entry_time(5, 5, Time::units(3)) == Time::units(0));

  // Independent oracle: sum the durations of views 0..2 directly.
  Time sum;
  Time dur = Time::units(1);
  for (int v = 0; v < 3; ++v) {
    sum += dur;
    dur = dur.scaled(2);
  }
  CHECK(doubling_entry_time(3, 0, Time::units(1)) == sum);
  CHECK(sum == Time::units(7));

  CHECK_THROWS(doubling_entry_time(2, 3, Time::units(1)));
}

TEST_CASE("simulated entry times match the closed form") {
  // Node with start view 2, beta = 1: view 5 starts at 2^5 - 2^2 = 28.
  auto config = doubling_config(2, 2, Time::units(1), Time::units(0), Time::units(200));
  const Trace trace = run_scenario_trace(config);
  const auto times = propose_times(trace);
  for (NodeId id = 1; id <= config.n; ++id) {
    REQUIRE(times.count(id));
    for (const auto& [v, at] : times.at(id)) {
      CHECK(at == doubling_entry_time(v, 2, Time::units(1)));
    }
    CHECK(times.at(id).at(5) == Time::units(28));
  }
}

TEST_CASE("minimum synchronized view") {
  SUBCASE("zero-length requirement with equal starts") {
    CHECK(doubling_min_sync_view(Time::units(0), 3, 3, Time::units(1)) == 3);
  }
  SUBCASE("gap of four at c = 1") {
    CHECK(doubling_min_sync_view(Time::units(1), 0, 4, Time::units(1)) == 4);
  }
  SUBCASE("scan oracle agrees across random instances") {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
      const View k = static_cast<View>(rng.below(5));
      const View l = k + static_cast<View>(rng.below(6));
      const Time beta = Time::from_ticks(static_cast<std::int64_t>(rng.below(4'000'000) + 250'000));
      const Time c = Time::from_ticks(static_cast<std::int64_t>(
          rng.below(static_cast<std::uint64_t>(beta.doubled_times(l + 2).ticks()))));
      // Oracle: walk candidate views upward evaluating the overlap length.
      View expected = l;
      while (beta.doubled_times(expected) + beta.doubled_times(k) - beta.doubled_times(l) < c) {
        ++expected;
      }
      CHECK(doubling_min_sync_view(c, k, l, beta) == expected);
    }
  }
}

TEST_CASE("doubling sends nothing, ever") {
  Rng rng(21);
  for (int i = 0; i < 10; ++i) {
    const View k = static_cast<View>(rng.below(3));
    const View l = k + static_cast<View>(rng.below(4));
    auto config = doubling_config(k, l, Time::units(1), Time::units(1), Time::units(300));
    config.seed = rng.next();
    const Trace trace = run_scenario_trace(config);
    CHECK(count_trace_sends(trace) == 0);
  }
}

TEST_CASE("earlier-started nodes never fall behind") {
  auto config = doubling_config(1, 4, Time::units(1), Time::units(0), Time::units(300));
  const Trace trace = run_scenario_trace(config);
  const auto timelines = build_timelines(trace);
  // Node ids are assigned start views in non-decreasing order.
  for (NodeId a = 1; a < config.n; ++a) {
    const NodeId b = a + 1;
    for (const auto& span_b : timelines.at(b)) {
      auto reached_a = time_reached(timelines.at(a), span_b.view);
      auto reached_b = time_reached(timelines.at(b), span_b.view);
      REQUIRE(reached_b);
      if (reached_a) CHECK(*reached_b <= *reached_a);
    }
  }
}

TEST_CASE("simulated first synchronized view equals the closed form") {
  const View k = 1, l = 4;
  const Time beta = Time::units(1), c = Time::units(2);
  const View expected = doubling_min_sync_view(c, k, l, beta);
  auto config = doubling_config(k, l, beta, c,
                                doubling_entry_time(expected + 2, k, beta));
  const Trace trace = run_scenario_trace(config);
  const auto intervals = detect_sync_intervals(trace, c);
  REQUIRE(!intervals.empty());
  CHECK(intervals.front().view == expected);
}
