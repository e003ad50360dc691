#pragma once

#include <atomic>
#include <chrono>
#include <memory>
#include <optional>
#include <stdexcept>

namespace bimatrix {

struct TimeoutError : std::runtime_error {
  TimeoutError() : std::runtime_error("time budget exhausted") {}
};

// Cooperative cancellation: solver loops poll `expired()` (or call `check()`)
// at pivot / iteration / support-pair granularity.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() = default;

  static Deadline never() { return {}; }
  static Deadline after(double seconds) {
    Deadline d;
    d.end_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                std::chrono::duration<double>(seconds));
    return d;
  }

  // Shares a cancellation flag with another thread (e.g. a watchdog).
  Deadline with_flag(std::shared_ptr<std::atomic<bool>> flag) const {
    Deadline d = *this;
    d.flag_ = std::move(flag);
    return d;
  }

  bool expired() const {
    if (flag_ && flag_->load(std::memory_order_relaxed)) return true;
    return end_ && Clock::now() >= *end_;
  }

  void check() const {
    if (expired()) throw TimeoutError();
  }

  bool bounded() const { return end_.has_value(); }

 private:
  std::optional<Clock::time_point> end_;
  std::shared_ptr<std::atomic<bool>> flag_;
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace bimatrix
