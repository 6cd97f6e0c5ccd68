#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <thread>

#include <omp.h>

#include "rlu/sparse.hpp"

namespace rlu {

enum class ExecMode { sequential, scheduled_parallel };

struct ExecPolicy {
  ExecMode mode = ExecMode::sequential;
  int worker_count = 1;
  unsigned jitter_seed = 0;  // nonzero injects random scheduling delays (testing aid)
};

/// Dependency-driven execution with one ready flag per row. Workers claim
/// rows in ascending index order; a worker blocked on an unready dependency
/// claims the lowest unclaimed row at or below that dependency and processes
/// it instead of spinning. Assist targets are therefore strictly below the
/// blocked row, so the per-worker chain of in-flight rows is strictly
/// decreasing and every wait is bounded by completed work.
///
/// Row bodies write only their own row's state and read dependency state
/// only after wait() returns. Bodies must not throw; failures are recorded
/// with fail() and the failing row still completes (with poisoned values),
/// so dependents never hang and the lowest recorded row matches what a
/// sequential run would report first.
class SyncFreeScheduler {
 public:
  class Waiter {
   public:
    void wait(index_t dep) const {
      if (slow_) slow_(ctx_, dep);
    }

   private:
    friend class SyncFreeScheduler;
    void (*slow_)(void*, index_t) = nullptr;  // null in sequential mode
    void* ctx_ = nullptr;
  };

  /// Runs fn(i, waiter) for every row i in [0, n).
  template <class Fn>
  void run(index_t n, const ExecPolicy& exec, Fn&& fn) {
    failed_.store(-1, std::memory_order_relaxed);
    const int workers =
        exec.mode == ExecMode::scheduled_parallel ? std::max(1, exec.worker_count) : 1;
    if (workers == 1 || n <= 1) {
      Waiter w;
      for (index_t i = 0; i < n; ++i) fn(i, w);
      return;
    }

    ensure(n);
    n_ = n;
    for (index_t i = 0; i < n; ++i) {
      ready_[i].store(0, std::memory_order_relaxed);
      claimed_[i].store(0, std::memory_order_relaxed);
    }
    cursor_.store(0, std::memory_order_relaxed);
    low_.store(0, std::memory_order_relaxed);

    Runner<Fn> runner{this, fn};
#pragma omp parallel num_threads(workers)
    {
      Jitter jitter(exec.jitter_seed, static_cast<unsigned>(omp_get_thread_num()));
      while (true) {
        const index_t i = claim_from_cursor();
        if (i < 0) break;
        runner.process(i, jitter);
      }
    }
  }

  /// Records a row failure; the lowest failing row wins.
  void fail(index_t row) {
    index_t cur = failed_.load(std::memory_order_relaxed);
    while (cur == -1 || row < cur) {
      if (failed_.compare_exchange_weak(cur, row, std::memory_order_relaxed)) break;
    }
  }

  index_t failed_row() const { return failed_.load(std::memory_order_relaxed); }

  /// Number of times the flag arrays were (re)allocated.
  std::uint64_t allocation_events() const { return allocation_events_; }

  /// Pre-sizes the flag arrays so run() itself does not allocate.
  void ensure(index_t n) {
    if (n <= capacity_) return;
    ready_ = std::make_unique<std::atomic<std::uint8_t>[]>(n);
    claimed_ = std::make_unique<std::atomic<std::uint8_t>[]>(n);
    capacity_ = n;
    ++allocation_events_;
  }

 private:
  struct Jitter {
    std::uint64_t state;
    bool enabled;
    Jitter(unsigned seed, unsigned worker)
        : state((std::uint64_t{seed} << 20) ^ (worker * 0x9E3779B97F4A7C15ull) ^ 0x853c49e6748fea9bull),
          enabled(seed != 0) {}
    void pause() {
      if (!enabled) return;
      state ^= state << 13;
      state ^= state >> 7;
      state ^= state << 17;
      const unsigned spins = static_cast<unsigned>(state & 0xFF);
      for (unsigned s = 0; s < spins; ++s) {
        std::atomic_signal_fence(std::memory_order_seq_cst);
      }
      if ((state & 0x300) == 0) std::this_thread::yield();
    }
  };

  template <class Fn>
  struct Runner {
    SyncFreeScheduler* sched;
    Fn& fn;

    void process(index_t i, Jitter& jitter) {
      jitter.pause();
      Waiter w;
      Ctx ctx{this, &jitter};
      w.slow_ = &Runner::wait_thunk;
      w.ctx_ = &ctx;
      fn(i, w);
      sched->ready_[i].store(1, std::memory_order_release);
      sched->advance_low();
    }

    struct Ctx {
      Runner* runner;
      Jitter* jitter;
    };

    static void wait_thunk(void* vctx, index_t dep) {
      auto* ctx = static_cast<Ctx*>(vctx);
      ctx->runner->wait(dep, *ctx->jitter);
    }

    void wait(index_t dep, Jitter& jitter) {
      auto* s = sched;
      if (s->ready_[dep].load(std::memory_order_acquire)) return;
      unsigned spins = 0;
      while (true) {
        const index_t j = s->claim_below(dep);
        if (j >= 0) {
          process(j, jitter);
        } else {
          jitter.pause();
          if (++spins % 64 == 0) std::this_thread::yield();
        }
        if (s->ready_[dep].load(std::memory_order_acquire)) return;
      }
    }
  };

  index_t claim_from_cursor() {
    while (true) {
      const index_t i = cursor_.fetch_add(1, std::memory_order_relaxed);
      if (i >= n_) return -1;
      if (claimed_[i].exchange(1, std::memory_order_relaxed) == 0) return i;
    }
  }

  // Lowest unclaimed row at or below `dep`, claimed for the caller; -1 if none.
  index_t claim_below(index_t dep) {
    for (index_t j = low_.load(std::memory_order_relaxed); j <= dep; ++j) {
      if (ready_[j].load(std::memory_order_relaxed)) continue;
      if (claimed_[j].load(std::memory_order_relaxed)) continue;
      if (claimed_[j].exchange(1, std::memory_order_relaxed) == 0) return j;
    }
    return -1;
  }

  void advance_low() {
    index_t low = low_.load(std::memory_order_relaxed);
    while (low < n_ && ready_[low].load(std::memory_order_acquire)) {
      low_.compare_exchange_weak(low, low + 1, std::memory_order_relaxed);
      low = low_.load(std::memory_order_relaxed);
    }
  }

  std::unique_ptr<std::atomic<std::uint8_t>[]> ready_;
  std::unique_ptr<std::atomic<std::uint8_t>[]> claimed_;
  index_t capacity_ = 0;
  index_t n_ = 0;
  std::atomic<index_t> cursor_{0};
  std::atomic<index_t> low_{0};
  std::atomic<index_t> failed_{-1};
  std::uint64_t allocation_events_ = 0;
};

}  // namespace rlu
