#pragma once

#include <cstdint>

namespace toasync {

// Tally of arithmetic work (multiplies/adds/divides) and square roots.
// Used as a per-step cost diagnostic for the solver; counts are gathered at
// loop granularity inside the numeric kernels, so they track the implemented
// operation counts rather than a textbook tally.
struct OpCounts {
  std::uint64_t flops = 0;
  std::uint64_t sqrts = 0;

  OpCounts& operator+=(const OpCounts& o) {
    flops += o.flops;
    sqrts += o.sqrts;
    return *this;
  }
};

namespace ops {

// Counting is off unless a scope is active on the current thread.
bool active() noexcept;
void add(std::uint64_t flops, std::uint64_t sqrts = 0) noexcept;

}  // namespace ops

// Activates op counting on this thread for its lifetime, accumulating into
// the given sink. Scopes do not nest; the innermost wins.
class OpCountScope {
 public:
  explicit OpCountScope(OpCounts& sink);
  ~OpCountScope();

  OpCountScope(const OpCountScope&) = delete;
  OpCountScope& operator=(const OpCountScope&) = delete;

 private:
  OpCounts* previous_;
};

}  // namespace toasync
