#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"
#include "viewsync/cogsworth.hpp"
#include "viewsync/doubling.hpp"
#include "viewsync/broadcast.hpp"

using namespace viewsync;
using namespace viewsync::testing;

namespace {

struct Fixture {
  LeaderSchedule schedule = LeaderSchedule::round_robin(4);
  ThresholdOnlyVerifier verifier{1};
  CogsworthSynchronizer sync{1, 4, 1, schedule, verifier, Time::units(1)};
};

Certificate tc_cert(View v, std::vector<NodeId> signers = {2, 3}) {
  return Certificate{CertKind::TC, v, std::move(signers)};
}

Certificate qc_cert(View v, std::vector<NodeId> signers = {2, 3, 4}) {
  return Certificate{CertKind::QC, v, std::move(signers)};
}

Message tc_msg(View v, NodeId from, Route route, Certificate cert) {
  return Message{MsgKind::TC, v, from, std::move(cert), route};
}

Message qc_msg(View v, NodeId from, Certificate cert, Route route = Route::Multicast) {
  return Message{MsgKind::QC, v, from, std::move(cert), route};
}

Message wish_msg(View v, NodeId from) {
  return Message{MsgKind::WISH, v, from, std::nullopt, Route::Direct};
}

Message vote_msg(View v, NodeId from) {
  return Message{MsgKind::VOTE, v, from, std::nullopt, Route::Direct};
}

}  // namespace

TEST_CASE("a wish sends exactly one message, to the next view's leader") {
  Fixture fx;
  const Actions out = fx.sync.on_wish_to_advance();
  const auto direct = sends(out);
  REQUIRE(direct.size() == 1);
  CHECK(direct[0].msg.kind == MsgKind::WISH);
  CHECK(direct[0].msg.view == 1);
  CHECK(direct[0].to == 2);  // leader(1) = (1 mod 4) + 1
  CHECK(multicasts(out).empty());
  CHECK(fx.sync.next_tc_leader() == 2);
}

TEST_CASE("replica reacts to a leader's TC relay") {
  Fixture fx;
  const Actions out = fx.sync.on_deliver(tc_msg(5, /*from leader(5)=*/2, Route::Multicast, tc_cert(5)));
  const auto direct = sends(out);
  REQUIRE(direct.size() == 2);
  CHECK(direct[0].msg.kind == MsgKind::TC);
  CHECK(direct[0].to == 2);  // echo to leader(5) itself
  CHECK(direct[1].msg.kind == MsgKind::VOTE);
  CHECK(direct[1].msg.view == 5);
  CHECK(direct[1].to == 2);  // vote goes to whichever leader relayed
  CHECK(fx.sync.holds_tc(5));
}

TEST_CASE("a fallback leader's relay attracts the vote instead") {
  Fixture fx;
  // leader(6) = 3 relays TC(5); window is views 5..7, so it qualifies.
  const Actions out = fx.sync.on_deliver(tc_msg(5, 3, Route::Multicast, tc_cert(5)));
  const auto direct = sends(out);
  REQUIRE(direct.size() == 2);
  CHECK(direct[0].to == 2);  // TC echo still goes to leader(5)
  CHECK(direct[1].to == 3);  // vote goes to the relaying leader
}

TEST_CASE("TC relays outside the sender window are dropped") {
  Fixture fx;
  // Window for view 5 is leaders of views 5..7 = nodes {2,3,4}; node 1 is
  // leader(8), one past it.
  const Actions out = fx.sync.on_deliver(tc_msg(5, 1, Route::Multicast, tc_cert(5)));
  CHECK(out.empty());
}

TEST_CASE("malformed certificates are dropped") {
  Fixture fx;
  SUBCASE("below threshold") {
    const Actions out = fx.sync.on_deliver(tc_msg(5, 2, Route::Multicast, tc_cert(5, {2})));
    CHECK(out.empty());
  }
  SUBCASE("view mismatch between message and certificate") {
    const Actions out = fx.sync.on_deliver(tc_msg(5, 2, Route::Multicast, tc_cert(4)));
    CHECK(out.empty());
  }
}

TEST_CASE("wish timeout enlists the next leaders one by one") {
  Fixture fx;
  (void)fx.sync.on_wish_to_advance();

  const Actions first_retry = fx.sync.on_timer({TimerKind::TcRetry, 1});
  auto direct = sends(first_retry);
  REQUIRE(direct.size() == 1);
  CHECK(direct[0].msg.view == 1);
  CHECK(direct[0].to == 3);  // leader(2)

  const Actions second_retry = fx.sync.on_timer({TimerKind::TcRetry, 1});
  direct = sends(second_retry);
  REQUIRE(direct.size() == 1);
  CHECK(direct[0].to == 4);  // leader(3) = leader(v + f + 1), the last in budget

  // Budget spent: one initial send plus f+1 fallbacks.
  CHECK(fx.sync.on_timer({TimerKind::TcRetry, 1}).empty());
}

TEST_CASE("a TC arriving before the deadline cancels the retry") {
  Fixture fx;
  (void)fx.sync.on_wish_to_advance();
  (void)fx.sync.on_deliver(tc_msg(1, 2, Route::Multicast, tc_cert(1)));
  CHECK(fx.sync.on_timer({TimerKind::TcRetry, 1}).empty());
}

TEST_CASE("vote timeout escalates the vote together with the TC") {
  Fixture fx;
  (void)fx.sync.on_deliver(tc_msg(1, 2, Route::Multicast, tc_cert(1)));

  const Actions out = fx.sync.on_timer({TimerKind::QcRetry, 1});
  const auto direct = sends(out);
  REQUIRE(direct.size() == 2);
  CHECK(direct[0].msg.kind == MsgKind::VOTE);
  CHECK(direct[1].msg.kind == MsgKind::TC);
  REQUIRE(direct[1].msg.cert);
  CHECK(direct[1].msg.cert->view == 1);
  CHECK(direct[0].to == 3);  // leader(2), "so the next leader can multicast"
  CHECK(direct[1].to == 3);
}

TEST_CASE("a QC arriving first makes the vote timeout a no-op") {
  Fixture fx;
  (void)fx.sync.on_deliver(tc_msg(1, 2, Route::Multicast, tc_cert(1)));
  (void)fx.sync.on_deliver(qc_msg(1, 2, qc_cert(1)));
  CHECK(fx.sync.on_timer({TimerKind::QcRetry, 1}).empty());
}

TEST_CASE("QC receipt enters the view exactly once") {
  Fixture fx;
  const Actions first = fx.sync.on_deliver(qc_msg(1, 2, qc_cert(1)));
  CHECK(proposals(first) == std::vector<View>{1});
  CHECK(fx.sync.current_view() == 1);

  const Actions dup = fx.sync.on_deliver(qc_msg(1, 2, qc_cert(1)));
  CHECK(dup.empty());
}

TEST_CASE("view skipping by QC is permitted") {
  Fixture fx;
  (void)fx.sync.on_deliver(qc_msg(1, 2, qc_cert(1)));
  // Views are led round-robin, so leader(3) = 4 relays QC(3).
  const Actions out = fx.sync.on_deliver(qc_msg(3, 4, qc_cert(3)));
  CHECK(proposals(out) == std::vector<View>{3});
  CHECK(fx.sync.current_view() == 3);
}

TEST_CASE("stale TC relays still draw a vote but no escalation state") {
  Fixture fx;
  (void)fx.sync.on_deliver(qc_msg(2, 3, qc_cert(2)));
  REQUIRE(fx.sync.current_view() == 2);
  // A relay for view 1 arrives late; someone behind may still need the QC.
  const Actions out = fx.sync.on_deliver(tc_msg(1, 2, Route::Multicast, tc_cert(1)));
  const auto direct = sends(out);
  REQUIRE(direct.size() == 2);
  CHECK(direct[1].msg.kind == MsgKind::VOTE);
  CHECK(direct[1].msg.view == 1);
  // But its own retry machinery stays quiet for views it already passed.
  CHECK(fx.sync.on_timer({TimerKind::QcRetry, 1}).empty());
  CHECK(!fx.sync.holds_tc(1));
}

TEST_CASE("stale or out-of-window QCs are dropped") {
  Fixture fx;
  (void)fx.sync.on_deliver(qc_msg(2, 3, qc_cert(2)));
  CHECK(fx.sync.on_deliver(qc_msg(1, 2, qc_cert(1))).empty());
  // Sender outside leaders of views 3..5 (= nodes 4,1,2).
  CHECK(fx.sync.on_deliver(qc_msg(3, 3, qc_cert(3))).empty());
}

TEST_CASE("leader aggregates f+1 wishes into one TC multicast") {
  Fixture fx;
  CogsworthSynchronizer leader{2, 4, 1, fx.schedule, fx.verifier, Time::units(1)};

  CHECK(leader.on_deliver(wish_msg(1, 1)).empty());
  const Actions out = leader.on_deliver(wish_msg(1, 3));
  const auto casts = multicasts(out);
  REQUIRE(casts.size() == 1);
  CHECK(casts[0].msg.kind == MsgKind::TC);
  REQUIRE(casts[0].msg.cert);
  CHECK(casts[0].msg.cert->signers == std::vector<NodeId>{1, 3});

  // Further wishes for the same view do not re-multicast.
  CHECK(leader.on_deliver(wish_msg(1, 4)).empty());
}

TEST_CASE("duplicate wish senders do not reach the threshold") {
  Fixture fx;
  CogsworthSynchronizer leader{2, 4, 1, fx.schedule, fx.verifier, Time::units(1)};
  CHECK(leader.on_deliver(wish_msg(1, 1)).empty());
  CHECK(leader.on_deliver(wish_msg(1, 1)).empty());
}

TEST_CASE("leaders ignore wishes outside their window") {
  Fixture fx;
  // Node 1 is leader(0), leader(4), ...; view 1 needs leaders of views 1..3.
  CogsworthSynchronizer not_leader{1, 4, 1, fx.schedule, fx.verifier, Time::units(1)};
  CHECK(not_leader.on_deliver(wish_msg(1, 2)).empty());
  CHECK(not_leader.on_deliver(wish_msg(1, 3)).empty());
}

TEST_CASE("a directed TC enlists a fallback leader without re-counting") {
  Fixture fx;
  CogsworthSynchronizer fallback{3, 4, 1, fx.schedule, fx.verifier, Time::units(1)};
  const Actions out = fallback.on_deliver(tc_msg(1, 4, Route::Direct, tc_cert(1)));
  const auto casts = multicasts(out);
  REQUIRE(casts.size() == 1);
  CHECK(casts[0].msg.kind == MsgKind::TC);
  CHECK(casts[0].msg.sender == 3);
  CHECK(casts[0].msg.cert->signers == tc_cert(1).signers);  // relayed as-is

  // Seeing the same certificate again changes nothing.
  CHECK(multicasts(fallback.on_deliver(tc_msg(1, 1, Route::Direct, tc_cert(1)))).empty());
}

TEST_CASE("another leader's multicast relay is not an enlistment") {
  Fixture fx;
  // Node 3 = leader(2) is in view 1's window but receives the relay the same
  // way every replica does; only a TC aimed straight at it makes it relay.
  CogsworthSynchronizer bystander{3, 4, 1, fx.schedule, fx.verifier, Time::units(1)};
  const Actions out = bystander.on_deliver(tc_msg(1, 2, Route::Multicast, tc_cert(1)));
  CHECK(multicasts(out).empty());
  CHECK(sends(out).size() == 2);  // echo + vote, the ordinary replica reaction
}

TEST_CASE("leader aggregates 2f+1 votes into one QC multicast") {
  Fixture fx;
  CogsworthSynchronizer leader{2, 4, 1, fx.schedule, fx.verifier, Time::units(1)};
  CHECK(leader.on_deliver(vote_msg(1, 1)).empty());
  CHECK(leader.on_deliver(vote_msg(1, 3)).empty());
  CHECK(leader.on_deliver(vote_msg(1, 3)).empty());  // duplicate
  const Actions out = leader.on_deliver(vote_msg(1, 4));
  const auto casts = multicasts(out);
  REQUIRE(casts.size() == 1);
  CHECK(casts[0].msg.kind == MsgKind::QC);
  CHECK(casts[0].msg.cert->signers == std::vector<NodeId>{1, 3, 4});
  CHECK(leader.on_deliver(vote_msg(1, 2)).empty());
}

TEST_CASE("identical input sequences produce identical action sequences") {
  auto feed = [](Synchronizer& sync) {
    std::string log;
    auto run = [&](const Actions& actions) {
      for (const auto& a : actions) log += to_string(a) + "\n";
    };
    run(sync.on_start());
    run(sync.on_wish_to_advance());
    run(sync.on_deliver(tc_msg(1, 2, Route::Multicast, tc_cert(1))));
    run(sync.on_timer({TimerKind::QcRetry, 1}));
    run(sync.on_deliver(qc_msg(1, 2, qc_cert(1))));
    run(sync.on_wish_to_advance());
    run(sync.on_deliver(wish_msg(6, 3)));
    run(sync.on_deliver(Message{MsgKind::NEWROUND, 2, 3, std::nullopt, Route::Multicast}));
    return log;
  };

  Fixture a, b;
  CHECK(feed(a.sync) == feed(b.sync));

  DoublingSynchronizer d1(Time::units(2)), d2(Time::units(2));
  CHECK(feed(d1) == feed(d2));

  BroadcastSynchronizer b1(1, 4, 1), b2(1, 4, 1);
  CHECK(feed(b1) == feed(b2));
}
