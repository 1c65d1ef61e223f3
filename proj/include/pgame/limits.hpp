#pragma once

#include <chrono>
#include <cstdint>
#include <stdexcept>

#include <pgame/node_set.hpp>

namespace pgame
{
  enum class Status
  {
    ok,
    timeout,
    memout_guard,
  };

  inline const char* status_name(Status s)
  {
    switch (s)
      {
      case Status::ok:
        return "ok";
      case Status::timeout:
        return "timeout";
      case Status::memout_guard:
        return "memout-guard";
      }
    return "?";
  }

  struct SolveLimits
  {
    /// 0 = unbounded.
    double timeout_seconds = 0.0;
    /// Cap on 64-bit words newly allocated into NodeSets by the solving
    /// thread; 0 = unbounded.
    std::uint64_t max_set_words = 0;
  };

  struct SolveAborted : std::runtime_error
  {
    explicit SolveAborted(Status why)
      : std::runtime_error(why == Status::timeout ? "solve aborted: timeout"
                                                  : "solve aborted: memory guard"),
        reason(why)
    {
    }

    Status reason;
  };

  /// Cooperative cancellation token. Solvers call tick() from their inner
  /// loops; every 16th tick (and the very first, so sub-millisecond deadlines
  /// still fire) the deadline and the thread's set-allocation counter are
  /// checked and SolveAborted is thrown on violation. Checks are at
  /// bounded intervals, so over-run beyond the deadline stays small.
  class Budget
  {
  public:
    explicit Budget(const SolveLimits& limits)
      : alloc_start_(detail::nodeset_alloc_words),
        max_words_(limits.max_set_words)
    {
      if (limits.timeout_seconds > 0)
        {
          deadline_ = std::chrono::steady_clock::now() +
                      std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                          std::chrono::duration<double>(limits.timeout_seconds));
          has_deadline_ = true;
        }
    }

    void tick()
    {
      if ((++ticks_ & 15) == 0 || ticks_ == 1)
        check();
    }

    void check() const
    {
      if (has_deadline_ && std::chrono::steady_clock::now() > deadline_)
        throw SolveAborted(Status::timeout);
      if (max_words_ &&
          detail::nodeset_alloc_words - alloc_start_ > max_words_)
        throw SolveAborted(Status::memout_guard);
    }

  private:
    std::chrono::steady_clock::time_point deadline_{};
    bool has_deadline_ = false;
    std::uint64_t ticks_ = 0;
    std::uint64_t alloc_start_ = 0;
    std::uint64_t max_words_ = 0;
  };

  inline void budget_tick(Budget* b)
  {
    if (b)
      b->tick();
  }
}
