#include "viewsync/leader.hpp"

#include <numeric>
#include <stdexcept>

#include "viewsync/rng.hpp"

namespace viewsync {

LeaderSchedule LeaderSchedule::round_robin(NodeId n) {
  if (n == 0) throw std::invalid_argument("leader schedule needs n >= 1");
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), NodeId{1});
  return LeaderSchedule(std::move(perm));
}

LeaderSchedule LeaderSchedule::from_permutation(std::vector<NodeId> perm) {
  if (perm.empty()) throw std::invalid_argument("leader schedule needs n >= 1");
  std::vector<bool> seen(perm.size() + 1, false);
  for (NodeId id : perm) {
    if (id < 1 || id > perm.size() || seen[id]) {
      throw std::invalid_argument("leader schedule requires a permutation of [1, n]");
    }
    seen[id] = true;
  }
  return LeaderSchedule(std::move(perm));
}

LeaderSchedule LeaderSchedule::random(NodeId n, std::uint64_t seed) {
  LeaderSchedule s = round_robin(n);
  Rng rng(seed);
  for (NodeId i = n; i > 1; --i) {
    const auto j = static_cast<NodeId>(rng.below(i));
    std::swap(s.perm_[i - 1], s.perm_[j]);
  }
  return s;
}

}  // namespace viewsync
