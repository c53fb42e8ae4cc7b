#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "biasgraph/detail/huge_page_allocator.hpp"

namespace biasgraph::detail {

// Exact set of keys from [0, 2^key_bits), stored by quotienting: a bijective
// mix h of the key is split into a home slot (top bits) and a remainder (low
// bits). A slot holds the remainder and the probe distance from home, so a
// key costs sizeof(Slot) bytes instead of a full 64-bit word. Linear probing,
// load kept below 0.7.
template <class Slot> class QuotientSet {
public:
  static constexpr unsigned kSlotBits = 8 * sizeof(Slot);
  static constexpr unsigned kMaxRemainderBits = kSlotBits - 8;
  static constexpr unsigned kMinTableBits = 10;

  explicit QuotientSet(unsigned key_bits) : key_bits_(key_bits) {
    if (key_bits == 0 || key_bits > 64)
      throw std::invalid_argument("QuotientSet: key_bits must lie in [1, 64]");
    unsigned bits = key_bits > kMaxRemainderBits ? key_bits - kMaxRemainderBits : 0;
    bits = std::max(bits, std::min(kMinTableBits, key_bits));
    resize(bits);
  }

  std::size_t size() const noexcept { return size_; }

  bool contains(std::uint64_t key) const {
    const std::uint64_t h = mix(key);
    const std::size_t home = static_cast<std::size_t>(h >> rem_bits_);
    const Slot rem = static_cast<Slot>(h & rem_mask_);
    for (std::size_t i = home, d = 0;; i = (i + 1) & mask_, ++d) {
      const Slot s = slots_[i];
      if (s == 0)
        return false;
      if ((s & 0xFF) == d + 1 && (s >> 8) == rem)
        return true;
    }
  }

  void prefetch(std::uint64_t key) const noexcept {
    __builtin_prefetch(slots_.data() + (mix(key) >> rem_bits_));
  }

  /// False if the key was already present.
  bool insert(std::uint64_t key) {
    if (10 * (size_ + 1) > 7 * slots_.size() && table_bits_ < key_bits_)
      resize(table_bits_ + 1);
    const std::uint64_t h = mix(key);
    for (;;) {
      const std::size_t home = static_cast<std::size_t>(h >> rem_bits_);
      const Slot rem = static_cast<Slot>(h & rem_mask_);
      std::size_t i = home;
      std::size_t d = 0;
      for (; slots_[i] != 0; i = (i + 1) & mask_, ++d)
        if ((slots_[i] & 0xFF) == d + 1 && (slots_[i] >> 8) == rem)
          return false;
      if (d < 255) {
        slots_[i] = static_cast<Slot>((rem << 8) | (d + 1));
        ++size_;
        return true;
      }
      if (table_bits_ >= key_bits_)
        throw std::logic_error("QuotientSet: probe run too long");
      resize(table_bits_ + 1);
    }
  }

private:
  // Odd multipliers and xor-shifts are bijections on key_bits-bit integers.
  std::uint64_t mix(std::uint64_t x) const {
    const unsigned s = (key_bits_ + 1) / 2;
    x = (x * 0x9e3779b97f4a7c15ULL) & key_mask();
    x ^= x >> s;
    x = (x * 0xbf58476d1ce4e5b9ULL) & key_mask();
    x ^= x >> s;
    return x;
  }

  std::uint64_t key_mask() const {
    return key_bits_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << key_bits_) - 1;
  }

  void resize(unsigned bits) {
    Slots old(std::size_t{1} << bits, 0);
    old.swap(slots_);
    const unsigned old_rem_bits = rem_bits_;
    const std::size_t old_mask = old.size() - 1;
    table_bits_ = bits;
    rem_bits_ = key_bits_ - bits;
    rem_mask_ = rem_bits_ == 0 ? 0 : (std::uint64_t{1} << rem_bits_) - 1;
    mask_ = slots_.size() - 1;
    for (std::size_t i = 0; i < old.size(); ++i) {
      const Slot s = old[i];
      if (s == 0)
        continue;
      const std::uint64_t home = (i - ((s & 0xFF) - 1)) & old_mask;
      place((home << old_rem_bits) | static_cast<std::uint64_t>(s >> 8));
    }
  }

  // Insert of a mixed value known to be absent, during a resize.
  void place(std::uint64_t h) {
    std::size_t i = static_cast<std::size_t>(h >> rem_bits_);
    std::size_t d = 0;
    for (; slots_[i] != 0; i = (i + 1) & mask_)
      ++d;
    if (d >= 255)
      throw std::logic_error("QuotientSet: probe run too long");
    slots_[i] = static_cast<Slot>((static_cast<Slot>(h & rem_mask_) << 8) | (d + 1));
  }

  using Slots = std::vector<Slot, HugePageAllocator<Slot>>;
  Slots slots_;
  unsigned key_bits_;
  unsigned table_bits_ = 0;
  unsigned rem_bits_ = 0;
  std::uint64_t rem_mask_ = 0;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

} // namespace biasgraph::detail
