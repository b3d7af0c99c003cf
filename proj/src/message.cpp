#include "viewsync/message.hpp"

#include <algorithm>

namespace viewsync {

const char* to_string(CertKind k) {
  return k == CertKind::TC ? "TC" : "QC";
}

const char* to_string(MsgKind k) {
  switch (k) {
    case MsgKind::WISH: return "WISH";
    case MsgKind::TC: return "TC";
    case MsgKind::VOTE: return "VOTE";
    case MsgKind::QC: return "QC";
    case MsgKind::NEWROUND: return "NEWROUND";
  }
  return "?";
}

std::string to_string(const Message& m) {
  std::string s = std::string(to_string(m.kind)) + "(" + std::to_string(m.view) +
                  ") from " + std::to_string(m.sender);
  if (m.cert) {
    s += " cert[";
    for (std::size_t i = 0; i < m.cert->signers.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(m.cert->signers[i]);
    }
    s += "]";
  }
  return s;
}

std::size_t cert_threshold(CertKind kind, std::size_t f) {
  return kind == CertKind::TC ? f + 1 : 2 * f + 1;
}

std::optional<Certificate> form_certificate(CertKind kind, View v,
                                            const std::set<NodeId>& contributors,
                                            std::size_t f) {
  if (contributors.size() < cert_threshold(kind, f)) return std::nullopt;
  Certificate c;
  c.kind = kind;
  c.view = v;
  c.signers.assign(contributors.begin(), contributors.end());
  return c;
}

bool certificate_well_formed(const Certificate& c, std::size_t f) {
  if (c.signers.size() < cert_threshold(c.kind, f)) return false;
  if (!std::is_sorted(c.signers.begin(), c.signers.end())) return false;
  return std::adjacent_find(c.signers.begin(), c.signers.end()) == c.signers.end();
}

}  // namespace viewsync
