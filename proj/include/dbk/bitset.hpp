#ifndef DBK_BITSET_HPP
#define DBK_BITSET_HPP

#include <bit>
#include <cstdint>
#include <vector>

namespace dbk {

// Fixed-capacity bitset sized at runtime.  Rows of the adjacency matrix are
// stored this way so that candidate-set intersections cost O(n/64).
class Bitset {
 public:
  Bitset() = default;

  explicit Bitset(int nbits) : nbits_(nbits), w_((nbits + 63) / 64, 0) {}

  int capacity() const { return nbits_; }

  void set(int i) { w_[i >> 6] |= uint64_t{1} << (i & 63); }

  void reset(int i) { w_[i >> 6] &= ~(uint64_t{1} << (i & 63)); }

  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }

  void clear() {
    for (auto& w : w_) w = 0;
  }

  bool any() const {
    for (auto w : w_)
      if (w) return true;
    return false;
  }

  bool none() const { return !any(); }

  int count() const {
    int c = 0;
    for (auto w : w_) c += std::popcount(w);
    return c;
  }

  // Lowest set bit, or -1 when empty.
  int find_first() const {
    for (size_t k = 0; k < w_.size(); ++k)
      if (w_[k]) return int(k * 64) + std::countr_zero(w_[k]);
    return -1;
  }

  Bitset& operator&=(const Bitset& o) {
    for (size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
    return *this;
  }

  Bitset& operator|=(const Bitset& o) {
    for (size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
    return *this;
  }

  // this &= ~o
  Bitset& and_not(const Bitset& o) {
    for (size_t k = 0; k < w_.size(); ++k) w_[k] &= ~o.w_[k];
    return *this;
  }

  // |this & o| without materializing the intersection.
  int and_count(const Bitset& o) const {
    int c = 0;
    for (size_t k = 0; k < w_.size(); ++k) c += std::popcount(w_[k] & o.w_[k]);
    return c;
  }

  bool intersects(const Bitset& o) const {
    for (size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & o.w_[k]) return true;
    return false;
  }

  bool operator==(const Bitset& o) const { return nbits_ == o.nbits_ && w_ == o.w_; }

  // Calls f(i) for every set bit, in increasing order.
  template <typename F>
  void for_each(F&& f) const {
    for (size_t k = 0; k < w_.size(); ++k) {
      uint64_t w = w_[k];
      while (w) {
        f(int(k * 64) + std::countr_zero(w));
        w &= w - 1;
      }
    }
  }

  std::vector<int> to_vector() const {
    std::vector<int> out;
    out.reserve(count());
    for_each([&](int i) { out.push_back(i); });
    return out;
  }

  const std::vector<uint64_t>& words() const { return w_; }

 private:
  int nbits_ = 0;
  std::vector<uint64_t> w_;
};

}  // namespace dbk

#endif  // DBK_BITSET_HPP
