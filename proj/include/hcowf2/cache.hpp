#pragma once

#include <filesystem>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <utility>

#include "hcowf2/encoding.hpp"
#include "hcowf2/function_description.hpp"

namespace hcowf2 {

// Content-addressed cache of function descriptions keyed by their
// signature, least-recently-used eviction at capacity. insert() computes
// the key itself, so an entry can never disagree with its key. Safe for
// concurrent sessions; values are shared immutable snapshots.
class FdCache {
public:
  using Entry = std::shared_ptr<const FunctionDescription>;

  explicit FdCache(std::size_t capacity = 256) : capacity_(capacity ? capacity : 1) {}

  std::optional<Entry> get(const Signature &sig) {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto it = map_.find(sig);
    if (it == map_.end())
      return std::nullopt;
    order_.splice(order_.begin(), order_, it->second);
    return it->second->second;
  }

  Signature insert(FunctionDescription fd) {
    auto entry = std::make_shared<const FunctionDescription>(std::move(fd));
    const Signature sig = fd_signature(*entry);
    std::lock_guard<std::mutex> lock(mutex_);
    const auto it = map_.find(sig);
    if (it != map_.end()) {
      // content-addressed: same key means same value, just refresh
      order_.splice(order_.begin(), order_, it->second);
      return sig;
    }
    order_.emplace_front(sig, std::move(entry));
    map_[sig] = order_.begin();
    while (map_.size() > capacity_) {
      map_.erase(order_.back().first);
      order_.pop_back();
    }
    return sig;
  }

  bool contains(const Signature &sig) {
    std::lock_guard<std::mutex> lock(mutex_);
    return map_.find(sig) != map_.end();
  }

  std::size_t size() {
    std::lock_guard<std::mutex> lock(mutex_);
    return map_.size();
  }

  std::size_t capacity() const { return capacity_; }

private:
  std::size_t capacity_;
  std::mutex mutex_;
  std::list<std::pair<Signature, Entry>> order_;
  std::unordered_map<Signature, std::list<std::pair<Signature, Entry>>::iterator,
                     Signature::Hash>
      map_;
};

// Directory persistence: one canonical `.hcw2` file per entry, named by
// the hex signature.
inline std::filesystem::path cache_entry_path(const std::filesystem::path &dir,
                                              const Signature &sig) {
  return dir / (sig.to_hex() + ".hcw2");
}

inline void persist_cache_entry(const std::filesystem::path &dir,
                                const FunctionDescription &fd) {
  std::filesystem::create_directories(dir);
  write_fd_file(cache_entry_path(dir, fd_signature(fd)), fd);
}

// Loads every *.hcw2 file that decodes and validates; skips files whose
// name does not match their content. Returns the number of entries
// loaded.
inline std::size_t load_cache_dir(const std::filesystem::path &dir, FdCache &cache) {
  std::size_t loaded = 0;
  if (!std::filesystem::is_directory(dir))
    return 0;
  for (const auto &file : std::filesystem::directory_iterator(dir)) {
    if (file.path().extension() != ".hcw2")
      continue;
    try {
      FunctionDescription fd = read_fd_file(file.path());
      if (cache_entry_path(dir, fd_signature(fd)) != file.path())
        continue;
      cache.insert(std::move(fd));
      ++loaded;
    } catch (const Error &) {
      continue; // unreadable or invalid entry: not our problem to repair
    }
  }
  return loaded;
}

} // namespace hcowf2
