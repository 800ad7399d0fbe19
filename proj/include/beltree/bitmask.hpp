#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace beltree {

// Fixed-width bit vector used for sets of configurations within a frame.
// All masks participating in one valuation share the same bit width.
class Bitmask {
 public:
  Bitmask() = default;
  explicit Bitmask(uint32_t bit_count)
      : bit_count_(bit_count), words_((bit_count + 63) / 64, 0) {}

  static Bitmask full(uint32_t bit_count) {
    Bitmask m(bit_count);
    for (auto& w : m.words_) w = ~uint64_t{0};
    m.trim();
    return m;
  }

  static Bitmask from_word(uint32_t bit_count, uint64_t word) {
    Bitmask m(bit_count);
    if (!m.words_.empty()) m.words_[0] = word;
    m.trim();
    return m;
  }

  uint32_t bit_size() const { return bit_count_; }

  void set(uint32_t i) { words_[i >> 6] |= uint64_t{1} << (i & 63); }
  void reset(uint32_t i) { words_[i >> 6] &= ~(uint64_t{1} << (i & 63)); }
  bool test(uint32_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1;
  }

  bool none() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }
  bool any() const { return !none(); }

  uint32_t count() const {
    uint32_t c = 0;
    for (auto w : words_) c += static_cast<uint32_t>(std::popcount(w));
    return c;
  }

  bool subset_of(const Bitmask& o) const {
    for (size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  Bitmask operator&(const Bitmask& o) const {
    Bitmask r(bit_count_);
    for (size_t i = 0; i < words_.size(); ++i)
      r.words_[i] = words_[i] & o.words_[i];
    return r;
  }

  Bitmask operator|(const Bitmask& o) const {
    Bitmask r(bit_count_);
    for (size_t i = 0; i < words_.size(); ++i)
      r.words_[i] = words_[i] | o.words_[i];
    return r;
  }

  // First word; for frames of at most 64 configurations this is the whole set,
  // and doubles as the index into dense subset-lattice arrays.
  uint64_t low_word() const { return words_.empty() ? 0 : words_[0]; }

  template <class F>
  void for_each_set(F&& f) const {
    for (size_t wi = 0; wi < words_.size(); ++wi) {
      uint64_t w = words_[wi];
      while (w) {
        uint32_t b = static_cast<uint32_t>(std::countr_zero(w));
        f(static_cast<uint32_t>(wi * 64 + b));
        w &= w - 1;
      }
    }
  }

  friend bool operator==(const Bitmask& a, const Bitmask& b) {
    return a.bit_count_ == b.bit_count_ && a.words_ == b.words_;
  }

  // Numeric-value ordering; total, deterministic, used for canonical map keys.
  friend bool operator<(const Bitmask& a, const Bitmask& b) {
    if (a.bit_count_ != b.bit_count_) return a.bit_count_ < b.bit_count_;
    for (size_t i = a.words_.size(); i-- > 0;) {
      if (a.words_[i] != b.words_[i]) return a.words_[i] < b.words_[i];
    }
    return false;
  }

 private:
  void trim() {
    uint32_t tail = bit_count_ & 63;
    if (tail && !words_.empty())
      words_.back() &= (uint64_t{1} << tail) - 1;
  }

  uint32_t bit_count_ = 0;
  std::vector<uint64_t> words_;
};

}  // namespace beltree
