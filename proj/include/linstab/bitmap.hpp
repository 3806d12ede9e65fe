#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace linstab {

/// Fixed-length bit vector with the shift-or primitive used by finite sumsets.
class Bitmap {
 public:
  Bitmap() = default;
  explicit Bitmap(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) noexcept { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void assign(std::size_t i, bool v) noexcept {
    if (v)
      set(i);
    else
      reset(i);
  }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool none() const noexcept {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  template <typename F>
  void for_each_set(F&& f) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w) {
        const int b = std::countr_zero(w);
        f(wi * 64 + static_cast<std::size_t>(b));
        w &= w - 1;
      }
    }
  }

  /// this |= (src << offset); bits shifted past the end are dropped.
  void or_shifted(const Bitmap& src, std::size_t offset) {
    const std::size_t word_shift = offset >> 6;
    const unsigned bit_shift = offset & 63;
    const std::size_t n = words_.size();
    for (std::size_t i = 0; i < src.words_.size(); ++i) {
      const std::uint64_t w = src.words_[i];
      if (!w) continue;
      const std::size_t dst = i + word_shift;
      if (dst >= n) break;
      words_[dst] |= w << bit_shift;
      if (bit_shift != 0 && dst + 1 < n) words_[dst + 1] |= w >> (64 - bit_shift);
    }
    trim();
  }

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  friend bool operator==(const Bitmap& a, const Bitmap& b) {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }

 private:
  void trim() noexcept {
    if (size_ & 63) words_.back() &= (std::uint64_t{1} << (size_ & 63)) - 1;
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace linstab
