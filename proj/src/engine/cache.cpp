#include "miner/engine/cache.hpp"

namespace miner {

struct CacheStore::Entry {
  std::mutex m;
  std::condition_variable cv;
  std::atomic<bool> ready{false};  // atomic so eviction can peek without the entry lock
  bool failed = false;
  Json value;
  std::string error_message;
  std::list<CacheKey>::iterator lru_pos;
};

CacheStore::CacheStore(std::optional<std::size_t> max_entries) : max_entries_(max_entries) {}

std::size_t CacheStore::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

void CacheStore::touch_locked(Entry& entry) {
  lru_.splice(lru_.begin(), lru_, entry.lru_pos);
}

void CacheStore::evict_locked() {
  if (!max_entries_) return;
  while (entries_.size() > *max_entries_ && !lru_.empty()) {
    // Never evict an in-flight entry: waiters hold its shared_ptr and the
    // key must stay claimable by exactly one computation at a time.
    auto it = lru_.end();
    bool evicted = false;
    while (it != lru_.begin()) {
      --it;
      auto found = entries_.find(*it);
      if (found != entries_.end() && found->second->ready.load()) {
        entries_.erase(found);
        lru_.erase(it);
        evicted = true;
        break;
      }
    }
    if (!evicted) break;
  }
}

CacheStore::Outcome CacheStore::get_or_compute(const CacheKey& key,
                                               const std::function<Json()>& compute) {
  std::shared_ptr<Entry> entry;
  bool owner = false;
  {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      entry = std::make_shared<Entry>();
      lru_.push_front(key);
      entry->lru_pos = lru_.begin();
      entries_.emplace(key, entry);
      owner = true;
    } else {
      entry = it->second;
      touch_locked(*entry);
    }
  }

  if (owner) {
    misses_++;
    Outcome outcome;
    try {
      outcome.value = compute();
    } catch (const std::exception& e) {
      outcome.failed = true;
      outcome.error_message = e.what();
    }
    {
      std::lock_guard entry_lock(entry->m);
      entry->ready = true;
      entry->failed = outcome.failed;
      entry->value = outcome.value;
      entry->error_message = outcome.error_message;
    }
    entry->cv.notify_all();
    {
      std::lock_guard lock(mutex_);
      evict_locked();
    }
    return outcome;
  }

  hits_++;
  std::unique_lock entry_lock(entry->m);
  entry->cv.wait(entry_lock, [&] { return entry->ready.load(); });
  Outcome outcome;
  outcome.hit = true;
  outcome.failed = entry->failed;
  outcome.value = entry->value;
  outcome.error_message = entry->error_message;
  return outcome;
}

}  // namespace miner
