#pragma once

#include <string>
#include <variant>
#include <vector>

#include "viewsync/message.hpp"
#include "viewsync/time.hpp"
#include "viewsync/types.hpp"

namespace viewsync {

enum class TimerKind : std::uint8_t {
  ViewEnd,    // view-doubling boundary
  TcRetry,    // waiting on a TC for the pending view
  QcRetry,    // waiting on a QC after voting
};

/// Timers are identified per node by (kind, view); re-arming the same id
/// replaces the previous deadline.
struct TimerId {
  TimerKind kind = TimerKind::ViewEnd;
  View view = 0;

  bool operator==(const TimerId&) const = default;
  auto operator<=>(const TimerId&) const = default;
};

struct SendAction {
  Message msg;
  NodeId to = 0;
  bool operator==(const SendAction&) const = default;
};

struct MulticastAction {  // to all n nodes, including the sender
  Message msg;
  bool operator==(const MulticastAction&) const = default;
};

struct SetTimerAction {
  TimerId id;
  Duration after;
  bool operator==(const SetTimerAction&) const = default;
};

struct ProposeViewAction {
  View view = 0;
  bool operator==(const ProposeViewAction&) const = default;
};

using Action = std::variant<SendAction, MulticastAction, SetTimerAction, ProposeViewAction>;
using Actions = std::vector<Action>;

std::string to_string(const TimerId& id);
std::string to_string(const Action& a);

/// A view synchronizer as a deterministic state machine: the environment
/// feeds start / wishToAdvance / message deliveries / timer expiries, the
/// machine returns the actions to perform. Identical input sequences yield
/// identical action sequences.
class Synchronizer {
 public:
  virtual ~Synchronizer() = default;

  virtual Actions on_start() { return {}; }
  virtual Actions on_wish_to_advance() = 0;
  virtual Actions on_deliver(const Message& msg) = 0;
  virtual Actions on_timer(const TimerId& id) { (void)id; return {}; }

  virtual View current_view() const = 0;
};

}  // namespace viewsync
