#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace quasivar {

// Odometer over the mixed-radix space sizes[0] × … × sizes[n-1], last digit fastest.
class TupleCounter {
 public:
  explicit TupleCounter(std::vector<int> sizes) : sizes_(std::move(sizes)), digits_(sizes_.size(), 0) {
    for (int s : sizes_)
      if (s == 0) done_ = true;
  }

  bool done() const { return done_; }
  const std::vector<int>& digits() const { return digits_; }

  void next() {
    for (std::size_t i = digits_.size(); i-- > 0;) {
      if (++digits_[i] < sizes_[i]) return;
      digits_[i] = 0;
    }
    done_ = true;
  }

 private:
  std::vector<int> sizes_;
  std::vector<int> digits_;
  bool done_ = false;
};

inline std::size_t tuple_count(std::span<const int> sizes) {
  std::size_t n = 1;
  for (int s : sizes) n *= static_cast<std::size_t>(s);
  return n;
}

// Small fixed-universe bitset over point indices.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t n, bool full = false) : size_(n), words_((n + 63) / 64, 0) {
    if (full)
      for (std::size_t i = 0; i < n; ++i) set(i);
  }

  std::size_t size() const { return size_; }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }

  bool empty() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }
  bool subset_of(const PointSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }
  PointSet operator&(const PointSet& o) const {
    PointSet r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= o.words_[i];
    return r;
  }
  bool operator==(const PointSet&) const = default;
  bool operator<(const PointSet& o) const { return words_ < o.words_; }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace quasivar
