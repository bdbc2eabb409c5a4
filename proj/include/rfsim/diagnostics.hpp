#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace rfsim {

/**
 * Thread-safe sink for non-fatal warnings raised during a run.
 *
 * Identical messages are folded into one entry with a repeat count, so a
 * render that hits the same singular condition on many grid points stays
 * readable. Entries keep first-seen order.
 */
class Diagnostics {
public:
  struct Entry {
    std::string message;
    std::size_t count = 0;
  };

  void warn(const std::string& message) {
    std::lock_guard lock(mutex_);
    auto [it, inserted] = index_.try_emplace(message, entries_.size());
    if (inserted) entries_.push_back({message, 0});
    ++entries_[it->second].count;
  }

  std::vector<Entry> entries() const {
    std::lock_guard lock(mutex_);
    return entries_;
  }

  bool empty() const {
    std::lock_guard lock(mutex_);
    return entries_.empty();
  }

  bool contains(const std::string& needle) const {
    std::lock_guard lock(mutex_);
    for (const auto& e : entries_)
      if (e.message.find(needle) != std::string::npos) return true;
    return false;
  }

private:
  mutable std::mutex mutex_;
  std::vector<Entry> entries_;
  std::map<std::string, std::size_t> index_;
};

inline void warn(Diagnostics* diag, const std::string& message) {
  if (diag != nullptr) diag->warn(message);
}

}  // namespace rfsim
