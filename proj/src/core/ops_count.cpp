#include "core/ops_count.hpp"

namespace toasync {

namespace {
thread_local OpCounts* g_sink = nullptr;
}

namespace ops {

bool active() noexcept { return g_sink != nullptr; }

void add(std::uint64_t flops, std::uint64_t sqrts) noexcept {
  if (g_sink != nullptr) {
    g_sink->flops += flops;
    g_sink->sqrts += sqrts;
  }
}

}  // namespace ops

OpCountScope::OpCountScope(OpCounts& sink) : previous_(g_sink) { g_sink = &sink; }

OpCountScope::~OpCountScope() { g_sink = previous_; }

}  // namespace toasync
