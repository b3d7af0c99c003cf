#include "viewsync/simnet.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <queue>
#include <set>
#include <stdexcept>

#include "viewsync/broadcast.hpp"
#include "viewsync/cogsworth.hpp"
#include "viewsync/doubling.hpp"
#include "viewsync/ledger.hpp"
#include "viewsync/rng.hpp"

namespace viewsync {

namespace {

// Same-instant ordering. Deliveries precede timer fires so that "received
// within 2*delta" holds inclusively at the deadline; wish ticks come last so
// a node that just entered a view wishes for the view after it.
enum EventPrio : int { PrioCrash = 0, PrioStart = 1, PrioDeliver = 2, PrioTimer = 3, PrioWish = 4 };

struct Event {
  Time at;
  int prio = 0;
  std::uint64_t seq = 0;
  NodeId node = 0;

  // Deliver
  Message msg;
  Time sent_at;

  // TimerFire
  TimerId timer;
  std::uint64_t timer_gen = 0;
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.at != b.at) return a.at > b.at;
    if (a.prio != b.prio) return a.prio > b.prio;
    return a.seq > b.seq;
  }
};

class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& config)
      : config_(config),
        corrupt_set_(make_corrupt_set()),
        delay_rng_(Rng(config.seed).fork(1)),
        schedule_(make_schedule()),
        ledger_(config.f, corrupt_set_) {
    trace_.context.n = config_.n;
    trace_.context.f = config_.f;
    trace_.context.delta = config_.delta;
    trace_.context.gst = config_.gst;
    trace_.context.horizon = config_.horizon;
    trace_.context.corrupt = corrupt_set_;
    trace_.context.leader_perm = schedule_.permutation();
  }

  Trace run() {
    build_nodes();
    schedule_initial_events();
    loop();
    return std::move(trace_);
  }

 private:
  struct Node {
    std::unique_ptr<Synchronizer> machine;
    bool crashed = false;
    bool silent = false;
    bool wishes = true;
    bool withholds_qc = false;
    bool amplifies_tc = false;
    std::set<View> amplified;
    std::map<TimerId, std::uint64_t> timer_gen;
    std::optional<View> last_proposed;
    Time start_time;
  };

  std::set<NodeId> make_corrupt_set() const {
    auto list = corrupt_nodes(config_);
    return {list.begin(), list.end()};
  }

  LeaderSchedule make_schedule() const {
    // The corrupt set is fixed by the config before this draw happens, so a
    // random permutation is never known to the adversary.
    if (config_.leader_map == LeaderMapKind::Random) {
      return LeaderSchedule::random(config_.n, Rng(config_.seed).fork(2).next());
    }
    return LeaderSchedule::round_robin(config_.n);
  }

  std::unique_ptr<Synchronizer> make_machine(NodeId id) const {
    switch (config_.synchronizer) {
      case SyncKind::Doubling: {
        View v0 = config_.start_view_min;
        if (config_.n > 1) {
          const View span = config_.start_view_max - config_.start_view_min;
          v0 += span * (id - 1) / (config_.n - 1);
        } else {
          v0 = config_.start_view_max;
        }
        return std::make_unique<DoublingSynchronizer>(config_.beta, v0);
      }
      case SyncKind::Broadcast:
        return std::make_unique<BroadcastSynchronizer>(id, config_.n, config_.f);
      case SyncKind::Cogsworth:
        return std::make_unique<CogsworthSynchronizer>(id, config_.n, config_.f,
                                                       schedule_, ledger_, config_.delta);
    }
    throw std::logic_error("unknown synchronizer kind");
  }

  void build_nodes() {
    nodes_.resize(config_.n + 1);
    const auto& adv = config_.adversary;
    for (NodeId id = 1; id <= config_.n; ++id) {
      Node& node = nodes_[id];
      node.start_time = Time{};
      if (adv.kind == AdversaryKind::Scripted && corrupt_set_.count(id) &&
          adv.scripted_machine) {
        node.machine = adv.scripted_machine(id);
        node.wishes = false;
      } else {
        node.machine = make_machine(id);
      }
      if (adv.kind == AdversaryKind::SilentNode && corrupt_set_.count(id)) {
        node.silent = true;
        node.wishes = false;
      }
      if (adv.kind == AdversaryKind::QcWithhold && corrupt_set_.count(id)) {
        node.withholds_qc = true;
      }
      if (adv.kind == AdversaryKind::TcAmplify && corrupt_set_.count(id)) {
        node.amplifies_tc = true;
      }
      trace_.context.start_time[id] = node.start_time;
      trace_.context.initial_view[id] = node.machine->current_view();
    }
  }

  void schedule_initial_events() {
    for (NodeId id = 1; id <= config_.n; ++id) {
      push_event(Event{nodes_[id].start_time, PrioStart, next_seq(), id, {}, {}, {}, 0});
      if (nodes_[id].wishes) {
        push_event(Event{nodes_[id].start_time, PrioWish, next_seq(), id, {}, {}, {}, 0});
      }
    }
    if (config_.adversary.kind == AdversaryKind::CrashLeaders ||
        config_.adversary.kind == AdversaryKind::CrashNode) {
      for (NodeId id : corrupt_set_) {
        push_event(Event{config_.adversary.at, PrioCrash, next_seq(), id, {}, {}, {}, 0});
      }
    }
  }

  void loop() {
    while (!queue_.empty()) {
      Event ev = queue_.top();
      queue_.pop();
      if (ev.at > config_.horizon) break;
      dispatch(ev);
    }
  }

  void dispatch(const Event& ev) {
    Node& node = nodes_[ev.node];
    switch (ev.prio) {
      case PrioCrash:
        node.crashed = true;
        record(ev.at, RecordKind::Crash, ev.node);
        return;
      case PrioStart: {
        if (node.crashed) return;
        record(ev.at, RecordKind::Start, ev.node);
        perform(ev.node, ev.at, node.machine->on_start());
        return;
      }
      case PrioDeliver: {
        if (node.crashed) return;  // absorbed silently
        TraceRecord r;
        r.at = ev.at;
        r.kind = RecordKind::Deliver;
        r.node = ev.node;
        r.msg = ev.msg;
        r.to = ev.node;
        r.sent_at = ev.sent_at;
        trace_.records.push_back(r);
        if (node.silent) return;
        Actions out = node.machine->on_deliver(ev.msg);
        if (node.amplifies_tc) amplify(ev.node, ev.msg, out);
        perform(ev.node, ev.at, std::move(out));
        return;
      }
      case PrioTimer: {
        if (node.crashed || node.silent) return;
        auto it = node.timer_gen.find(ev.timer);
        if (it == node.timer_gen.end() || it->second != ev.timer_gen) return;  // re-armed
        TraceRecord r;
        r.at = ev.at;
        r.kind = RecordKind::TimerFired;
        r.node = ev.node;
        r.timer = ev.timer;
        trace_.records.push_back(r);
        perform(ev.node, ev.at, node.machine->on_timer(ev.timer));
        return;
      }
      case PrioWish: {
        if (node.crashed) return;
        record(ev.at, RecordKind::Wish, ev.node);
        perform(ev.node, ev.at, node.machine->on_wish_to_advance());
        const Time next = ev.at + config_.wish_interval;
        if (next <= config_.horizon) {
          push_event(Event{next, PrioWish, next_seq(), ev.node, {}, {}, {}, 0});
        }
        return;
      }
      default:
        throw std::logic_error("unknown event priority");
    }
  }

  void amplify(NodeId id, const Message& msg, Actions& out) {
    if (msg.kind != MsgKind::TC || !msg.cert) return;
    if (!ledger_.verify(*msg.cert)) return;
    Node& node = nodes_[id];
    if (!node.amplified.insert(msg.view).second) return;
    // Enlist every fallback leader at once; each relays with a multicast of
    // its own, which is what drives the quadratic blow-up.
    for (View r = msg.view + 1; r <= msg.view + config_.f + 1; ++r) {
      out.push_back(SendAction{Message{MsgKind::TC, msg.view, id, *msg.cert},
                               schedule_.leader_of(r)});
    }
  }

  void perform(NodeId id, Time now, Actions actions) {
    Node& node = nodes_[id];
    for (auto& action : actions) {
      if (node.silent) break;
      if (auto* send = std::get_if<SendAction>(&action)) {
        send->msg.route = Route::Direct;
        do_send(id, now, send->msg, send->to);
      } else if (auto* mcast = std::get_if<MulticastAction>(&action)) {
        mcast->msg.route = Route::Multicast;
        if (node.withholds_qc && mcast->msg.kind == MsgKind::QC) {
          // Reveal the certificate to a single honest node; everyone else has
          // to fall back on the next leaders.
          do_send(id, now, with_route(mcast->msg, Route::Direct), withhold_victim());
          continue;
        }
        for (NodeId to = 1; to <= config_.n; ++to) {
          do_send(id, now, mcast->msg, to);
        }
      } else if (auto* set = std::get_if<SetTimerAction>(&action)) {
        const auto gen = ++node.timer_gen[set->id];
        push_event(Event{now + set->after, PrioTimer, next_seq(), id, {}, {}, set->id, gen});
      } else if (auto* prop = std::get_if<ProposeViewAction>(&action)) {
        if (node.last_proposed && prop->view <= *node.last_proposed) {
          throw std::logic_error("proposed views must be strictly increasing");
        }
        node.last_proposed = prop->view;
        TraceRecord r;
        r.at = now;
        r.kind = RecordKind::Propose;
        r.node = id;
        r.view = prop->view;
        trace_.records.push_back(r);
      }
    }
  }

  static Message with_route(Message m, Route route) {
    m.route = route;
    return m;
  }

  NodeId withhold_victim() const {
    for (NodeId id = 1; id <= config_.n; ++id) {
      if (!corrupt_set_.count(id)) return id;
    }
    return 1;
  }

  void do_send(NodeId from, Time now, const Message& msg, NodeId to) {
    TraceRecord r;
    r.at = now;
    r.kind = RecordKind::Send;
    r.node = from;
    r.msg = msg;
    r.to = to;
    trace_.records.push_back(r);

    // Ideal-crypto bookkeeping: a WISH or VOTE is a signature contribution.
    if (msg.kind == MsgKind::WISH) ledger_.record(CertKind::TC, msg.view, from);
    if (msg.kind == MsgKind::VOTE) ledger_.record(CertKind::QC, msg.view, from);

    push_event(Event{delivery_time(msg, to, now), PrioDeliver, next_seq(), to, msg, now, {}, 0});
  }

  Time delivery_time(const Message& msg, NodeId to, Time sent) {
    const Time bound = std::max(sent, config_.gst) + config_.delta;
    switch (config_.delay_mode) {
      case DelayMode::WorstCase:
        return bound;
      case DelayMode::UniformRandom:
        return Time::from_ticks(delay_rng_.range(sent.ticks() + 1, bound.ticks()));
      case DelayMode::AdversaryChosen: {
        const Time earliest = Time::from_ticks(sent.ticks() + 1);
        return std::clamp(config_.delay_hook(msg, to, sent, earliest, bound), earliest, bound);
      }
    }
    return bound;
  }

  void record(Time at, RecordKind kind, NodeId node) {
    TraceRecord r;
    r.at = at;
    r.kind = kind;
    r.node = node;
    trace_.records.push_back(r);
  }

  std::uint64_t next_seq() { return seq_++; }

  void push_event(Event ev) { queue_.push(std::move(ev)); }

  ScenarioConfig config_;
  std::set<NodeId> corrupt_set_;
  Rng delay_rng_;
  LeaderSchedule schedule_;
  ContributionLedger ledger_;
  std::vector<Node> nodes_;
  std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
  std::uint64_t seq_ = 0;
  Trace trace_;
};

}  // namespace

Trace run_scenario_trace(const ScenarioConfig& config) {
  validate(config);
  Simulation sim(config);
  return sim.run();
}

std::string check_trace_invariants(const Trace& trace) {
  const auto& ctx = trace.context;

  // Sent messages by honest nodes, for spoof checks.
  std::multiset<std::pair<NodeId, std::uint64_t>> outstanding;  // (sender, key)
  auto key_of = [](const Message& m) {
    return (static_cast<std::uint64_t>(m.kind) << 56) ^ (m.view << 8) ^ m.sender;
  };

  // Signature contributions seen so far, for certificate replay.
  std::map<std::pair<CertKind, View>, std::set<NodeId>> contributions;

  std::map<NodeId, View> last_proposed;
  for (const auto& r : trace.records) {
    auto start_it = ctx.start_time.find(r.node);
    if (start_it != ctx.start_time.end() && r.at < start_it->second) {
      return "record before node start: " + to_string(r);
    }
    switch (r.kind) {
      case RecordKind::Send:
        outstanding.insert({r.node, key_of(r.msg)});
        if (r.msg.kind == MsgKind::WISH) {
          contributions[{CertKind::TC, r.msg.view}].insert(r.node);
        } else if (r.msg.kind == MsgKind::VOTE) {
          contributions[{CertKind::QC, r.msg.view}].insert(r.node);
        }
        // Replay unforgeability: an honest node only passes on certificates
        // it accepted, and every honest signer of an accepted certificate
        // must have contributed earlier in the trace.
        if (r.msg.cert && ctx.is_honest(r.node)) {
          const auto& seen = contributions[{r.msg.cert->kind, r.msg.cert->view}];
          for (NodeId signer : r.msg.cert->signers) {
            if (ctx.is_honest(signer) && !seen.count(signer)) {
              return "certificate names honest non-contributor " +
                     std::to_string(signer) + ": " + to_string(r);
            }
          }
        }
        break;
      case RecordKind::Deliver: {
        const Time bound = std::max(r.sent_at, ctx.gst) + ctx.delta;
        if (!(r.at > r.sent_at) || r.at > bound) {
          return "delivery outside (s, max(s,GST)+delta]: " + to_string(r);
        }
        if (ctx.is_honest(r.msg.sender)) {
          auto it = outstanding.find({r.msg.sender, key_of(r.msg)});
          if (it == outstanding.end()) {
            return "delivered message never sent by honest sender: " + to_string(r);
          }
          outstanding.erase(it);
        }
        break;
      }
      case RecordKind::Propose: {
        auto [it, fresh] = last_proposed.try_emplace(r.node, r.view);
        if (!fresh) {
          if (r.view <= it->second) {
            return "proposed views not strictly increasing: " + to_string(r);
          }
          it->second = r.view;
        }
        break;
      }
      default:
        break;
    }
  }
  return "";
}

}  // namespace viewsync
