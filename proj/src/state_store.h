#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "trac/rng.h"
#include "trac/strips.h"

namespace trac::detail {

// Append-only arena of fixed-width states with an open-addressing index.
// Search code uses it instead of node-based hash sets.
class StateStore {
 public:
  explicit StateStore(std::size_t words) : words_(words), table_(1024, 0) {}

  std::size_t size() const { return count_; }

  std::span<const std::uint64_t> at(std::uint32_t i) const {
    return {data_.data() + static_cast<std::size_t>(i) * words_, words_};
  }

  void load(std::uint32_t i, State& out) const {
    std::span<const std::uint64_t> src = at(i);
    std::span<std::uint64_t> dst = out.words();
    std::copy(src.begin(), src.end(), dst.begin());
  }

  std::optional<std::uint32_t> find(std::span<const std::uint64_t> s) const {
    std::size_t mask = table_.size() - 1;
    for (std::size_t slot = hash(s) & mask;; slot = (slot + 1) & mask) {
      std::uint32_t entry = table_[slot];
      if (entry == 0) return std::nullopt;
      if (equal(entry - 1, s)) return entry - 1;
    }
  }

  // Returns the index of `s` and whether it was newly added.
  std::pair<std::uint32_t, bool> insert(std::span<const std::uint64_t> s) {
    if ((count_ + 1) * 2 > table_.size()) grow();
    std::size_t mask = table_.size() - 1;
    std::size_t slot = hash(s) & mask;
    for (;; slot = (slot + 1) & mask) {
      std::uint32_t entry = table_[slot];
      if (entry == 0) break;
      if (equal(entry - 1, s)) return {entry - 1, false};
    }
    auto id = static_cast<std::uint32_t>(count_++);
    data_.insert(data_.end(), s.begin(), s.end());
    table_[slot] = id + 1;
    return {id, true};
  }

 private:
  static std::size_t hash(std::span<const std::uint64_t> s) {
    std::uint64_t h = 0x2545f4914f6cdd1dULL;
    for (std::uint64_t w : s) h = mix64(h ^ w);
    return static_cast<std::size_t>(h);
  }

  bool equal(std::uint32_t i, std::span<const std::uint64_t> s) const {
    const std::uint64_t* p = data_.data() + static_cast<std::size_t>(i) * words_;
    for (std::size_t k = 0; k < words_; ++k) {
      if (p[k] != s[k]) return false;
    }
    return true;
  }

  void grow() {
    std::vector<std::uint32_t> old(table_.size() * 2, 0);
    old.swap(table_);
    std::size_t mask = table_.size() - 1;
    for (std::uint32_t i = 0; i < count_; ++i) {
      std::size_t slot = hash(at(i)) & mask;
      while (table_[slot] != 0) slot = (slot + 1) & mask;
      table_[slot] = i + 1;
    }
  }

  std::size_t words_;
  std::size_t count_ = 0;
  std::vector<std::uint64_t> data_;
  std::vector<std::uint32_t> table_;
};

}  // namespace trac::detail
