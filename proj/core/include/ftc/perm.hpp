#pragma once

#include <cassert>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

namespace ftc {

// Permutation of {0..n-1} as an image table. Products act on the left:
// (a*b)(x) = a(b(x)).
class Perm {
  std::vector<uint16_t> img_;

public:
  Perm() = default;
  explicit Perm(unsigned n) : img_(n) {
    std::iota(img_.begin(), img_.end(), 0);
  }
  explicit Perm(std::vector<uint16_t> img) : img_(std::move(img)) {}

  unsigned degree() const { return static_cast<unsigned>(img_.size()); }
  uint16_t operator[](unsigned x) const { return img_[x]; }
  uint16_t& at(unsigned x) { return img_[x]; }
  const std::vector<uint16_t>& images() const { return img_; }

  bool is_identity() const {
    for (unsigned i = 0; i < degree(); ++i)
      if (img_[i] != i) return false;
    return true;
  }

  Perm inverse() const {
    std::vector<uint16_t> inv(img_.size());
    for (unsigned i = 0; i < degree(); ++i) inv[img_[i]] = static_cast<uint16_t>(i);
    return Perm(std::move(inv));
  }

  friend Perm operator*(const Perm& a, const Perm& b) {
    assert(a.degree() == b.degree());
    std::vector<uint16_t> out(a.degree());
    for (unsigned i = 0; i < a.degree(); ++i) out[i] = a.img_[b.img_[i]];
    return Perm(std::move(out));
  }

  Perm conj(const Perm& g) const {  // g * this * g^-1
    return g * (*this * g.inverse());
  }

  // lcm of cycle lengths; callers keep degrees small enough for uint64
  uint64_t order() const {
    assert(degree() <= 1024);
    std::vector<bool> seen(degree(), false);
    uint64_t ord = 1;
    for (unsigned i = 0; i < degree(); ++i) {
      if (seen[i]) continue;
      uint64_t len = 0;
      unsigned j = i;
      while (!seen[j]) {
        seen[j] = true;
        j = img_[j];
        ++len;
      }
      ord = std::lcm(ord, len);
    }
    return ord;
  }

  bool operator==(const Perm& o) const { return img_ == o.img_; }
  bool operator!=(const Perm& o) const { return img_ != o.img_; }
  bool operator<(const Perm& o) const { return img_ < o.img_; }
};

struct PermHash {
  size_t operator()(const Perm& p) const {
    uint64_t h = 0x9e3779b97f4a7c15ull;
    for (uint16_t v : p.images()) {
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<size_t>(h);
  }
};

}  // namespace ftc
