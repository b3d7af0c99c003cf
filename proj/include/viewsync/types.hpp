#pragma once

#include <cstdint>

namespace viewsync {

/// View numbers are unbounded in principle; 64 bits cover any run this
/// simulator can finish, and arithmetic on them is overflow-checked where
/// exponentiation is involved.
using View = std::uint64_t;

/// Node identifiers are 1-based, stable for a run.
using NodeId = std::uint32_t;

}  // namespace viewsync
