#include "viewsync/synchronizer.hpp"

namespace viewsync {

std::string to_string(const TimerId& id) {
  const char* k = "?";
  switch (id.kind) {
    case TimerKind::ViewEnd: k = "view-end"; break;
    case TimerKind::TcRetry: k = "tc-retry"; break;
    case TimerKind::QcRetry: k = "qc-retry"; break;
  }
  return std::string(k) + "@" + std::to_string(id.view);
}

std::string to_string(const Action& a) {
  struct Visitor {
    std::string operator()(const SendAction& s) const {
      return "send " + to_string(s.msg) + " -> " + std::to_string(s.to);
    }
    std::string operator()(const MulticastAction& m) const {
      return "multicast " + to_string(m.msg);
    }
    std::string operator()(const SetTimerAction& t) const {
      return "set-timer " + to_string(t.id) + " +" + t.after.to_string();
    }
    std::string operator()(const ProposeViewAction& p) const {
      return "propose-view " + std::to_string(p.view);
    }
  };
  return std::visit(Visitor{}, a);
}

}  // namespace viewsync
