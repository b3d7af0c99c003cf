#include "viewsync/trace.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace viewsync {

const char* to_string(RecordKind k) {
  switch (k) {
    case RecordKind::Start: return "start";
    case RecordKind::Crash: return "crash";
    case RecordKind::Wish: return "wish";
    case RecordKind::Send: return "send";
    case RecordKind::Deliver: return "deliver";
    case RecordKind::TimerFired: return "timer";
    case RecordKind::Propose: return "propose";
  }
  return "?";
}

std::vector<NodeId> TraceContext::honest_nodes() const {
  std::vector<NodeId> out;
  for (NodeId id = 1; id <= n; ++id) {
    if (is_honest(id)) out.push_back(id);
  }
  return out;
}

namespace {

nlohmann::ordered_json record_json(const TraceRecord& r) {
  nlohmann::ordered_json j;
  j["t"] = r.at.to_string();
  j["kind"] = to_string(r.kind);
  j["node"] = r.node;
  switch (r.kind) {
    case RecordKind::Send:
    case RecordKind::Deliver: {
      j["msg"] = to_string(r.msg.kind);
      j["view"] = r.msg.view;
      j["from"] = r.msg.sender;
      j["to"] = r.to;
      j["route"] = r.msg.route == Route::Multicast ? "multicast" : "direct";
      if (r.msg.cert) j["signers"] = r.msg.cert->signers;
      if (r.kind == RecordKind::Deliver) j["sent_at"] = r.sent_at.to_string();
      break;
    }
    case RecordKind::TimerFired:
      j["timer"] = to_string(r.timer);
      break;
    case RecordKind::Propose:
      j["view"] = r.view;
      break;
    default:
      break;
  }
  return j;
}

}  // namespace

std::string to_jsonl(const Trace& trace) {
  std::string out;
  for (const auto& r : trace.records) {
    out += record_json(r).dump();
    out += '\n';
  }
  return out;
}

void write_jsonl(const Trace& trace, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << to_jsonl(trace);
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string to_string(const TraceRecord& r) {
  std::string s = r.at.to_string() + " " + to_string(r.kind) + " n" + std::to_string(r.node);
  if (r.kind == RecordKind::Send || r.kind == RecordKind::Deliver) {
    s += " " + to_string(r.msg) + " -> " + std::to_string(r.to);
  } else if (r.kind == RecordKind::Propose) {
    s += " view " + std::to_string(r.view);
  } else if (r.kind == RecordKind::TimerFired) {
    s += " " + to_string(r.timer);
  }
  return s;
}

}  // namespace viewsync
