#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace revelio {

/// Dense bit-vector set over 0-based indices (events or conditions).
/// Queries beyond the current universe answer false; set() grows the set.
class EventSet {
public:
  EventSet() = default;
  explicit EventSet(std::size_t universe)
      : size_(universe), words_((universe + 63) / 64, 0) {}

  std::size_t universe() const { return size_; }

  bool test(std::size_t i) const {
    if (i >= size_) return false;
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }

  void set(std::size_t i) {
    if (i >= size_) resize(i + 1);
    words_[i >> 6] |= std::uint64_t{1} << (i & 63);
  }

  void reset(std::size_t i) {
    if (i < size_) words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }

  void resize(std::size_t universe) {
    size_ = universe;
    words_.resize((universe + 63) / 64, 0);
    trim_tail();
  }

  EventSet& operator|=(const EventSet& o) {
    if (o.size_ > size_) resize(o.size_);
    for (std::size_t w = 0; w < o.words_.size(); ++w) words_[w] |= o.words_[w];
    return *this;
  }

  EventSet& operator&=(const EventSet& o) {
    for (std::size_t w = 0; w < words_.size(); ++w)
      words_[w] &= w < o.words_.size() ? o.words_[w] : 0;
    return *this;
  }

  /// Removes every member of `o` from this set.
  EventSet& subtract(const EventSet& o) {
    std::size_t n = words_.size() < o.words_.size() ? words_.size() : o.words_.size();
    for (std::size_t w = 0; w < n; ++w) words_[w] &= ~o.words_[w];
    return *this;
  }

  /// Superset test: every member of `o` is a member of this set.
  bool contains_all(const EventSet& o) const {
    for (std::size_t w = 0; w < o.words_.size(); ++w) {
      std::uint64_t mine = w < words_.size() ? words_[w] : 0;
      if (o.words_[w] & ~mine) return false;
    }
    return true;
  }

  bool intersects(const EventSet& o) const {
    std::size_t n = words_.size() < o.words_.size() ? words_.size() : o.words_.size();
    for (std::size_t w = 0; w < n; ++w)
      if (words_[w] & o.words_[w]) return true;
    return false;
  }

  bool none() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }

  /// Membership equality; trailing universe width is ignored.
  bool operator==(const EventSet& o) const {
    std::size_t n = words_.size() > o.words_.size() ? words_.size() : o.words_.size();
    for (std::size_t w = 0; w < n; ++w) {
      std::uint64_t a = w < words_.size() ? words_[w] : 0;
      std::uint64_t b = w < o.words_.size() ? o.words_[w] : 0;
      if (a != b) return false;
    }
    return true;
  }

  std::vector<std::uint32_t> members() const {
    std::vector<std::uint32_t> out;
    for_each([&](std::uint32_t i) { out.push_back(i); });
    return out;
  }

  template <class F>
  void for_each(F f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        unsigned b = std::countr_zero(bits);
        f(static_cast<std::uint32_t>(w * 64 + b));
        bits &= bits - 1;
      }
    }
  }

private:
  void trim_tail() {
    if (size_ & 63 && !words_.empty())
      words_.back() &= (std::uint64_t{1} << (size_ & 63)) - 1;
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace revelio
