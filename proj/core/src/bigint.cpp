#include "ftc/bigint.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace ftc {

BigUint::BigUint(uint64_t v) {
  limbs_.push_back(static_cast<uint32_t>(v));
  if (v >> 32) limbs_.push_back(static_cast<uint32_t>(v >> 32));
}

uint64_t BigUint::as_u64() const {
  assert(fits_u64());
  uint64_t v = limbs_[0];
  if (limbs_.size() > 1) v |= static_cast<uint64_t>(limbs_[1]) << 32;
  return v;
}

void BigUint::trim() {
  while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
}

BigUint& BigUint::operator*=(const BigUint& rhs) {
  std::vector<uint32_t> out(limbs_.size() + rhs.limbs_.size(), 0);
  for (size_t i = 0; i < limbs_.size(); ++i) {
    uint64_t carry = 0;
    for (size_t j = 0; j < rhs.limbs_.size(); ++j) {
      uint64_t cur = static_cast<uint64_t>(limbs_[i]) * rhs.limbs_[j] +
                     out[i + j] + carry;
      out[i + j] = static_cast<uint32_t>(cur);
      carry = cur >> 32;
    }
    out[i + rhs.limbs_.size()] += static_cast<uint32_t>(carry);
  }
  limbs_ = std::move(out);
  trim();
  return *this;
}

BigUint BigUint::pow(uint64_t base, uint64_t exp) {
  BigUint acc(1);
  BigUint b(base);
  while (exp) {
    if (exp & 1) acc *= b;
    b *= b;
    exp >>= 1;
  }
  return acc;
}

int BigUint::cmp_raw(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  return 0;
}

int BigUint::cmp(const BigUint& rhs) const { return cmp_raw(limbs_, rhs.limbs_); }

void BigUint::sub_raw(std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  int64_t borrow = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    int64_t cur = static_cast<int64_t>(a[i]) - borrow -
                  (i < b.size() ? static_cast<int64_t>(b[i]) : 0);
    borrow = 0;
    if (cur < 0) {
      cur += int64_t(1) << 32;
      borrow = 1;
    }
    a[i] = static_cast<uint32_t>(cur);
  }
  assert(borrow == 0);
}

size_t BigUint::bits() const {
  uint32_t top = limbs_.back();
  size_t n = (limbs_.size() - 1) * 32;
  while (top) {
    ++n;
    top >>= 1;
  }
  return n;
}

void BigUint::shift_left_bits(size_t k) {
  size_t words = k / 32, rem = k % 32;
  size_t old = limbs_.size();
  limbs_.resize(old + words + 1, 0);
  for (size_t i = old; i-- > 0;) {
    uint64_t v = static_cast<uint64_t>(limbs_[i]) << rem;
    limbs_[i + words + 1] |= static_cast<uint32_t>(v >> 32);
    limbs_[i + words] = static_cast<uint32_t>(v);
    if (i < words) limbs_[i] = 0;
  }
  for (size_t i = 0; i < words; ++i) limbs_[i] = 0;
  trim();
}

BigUint BigUint::divmod(const BigUint& rhs, BigUint& rem) const {
  if (rhs.is_zero()) throw std::domain_error("BigUint: division by zero");
  rem = *this;
  BigUint quot(0);
  if (cmp(rhs) < 0) return quot;

  // binary long division: shift-subtract
  size_t shift = bits() - rhs.bits();
  BigUint d = rhs;
  d.shift_left_bits(shift);
  quot.limbs_.assign(shift / 32 + 1, 0);
  for (size_t s = shift + 1; s-- > 0;) {
    if (cmp_raw(rem.limbs_, d.limbs_) >= 0) {
      sub_raw(rem.limbs_, d.limbs_);
      rem.trim();
      quot.limbs_[s / 32] |= uint32_t(1) << (s % 32);
    }
    // shift d right one bit
    uint32_t carry = 0;
    for (size_t i = d.limbs_.size(); i-- > 0;) {
      uint32_t next = d.limbs_[i] & 1;
      d.limbs_[i] = (d.limbs_[i] >> 1) | (carry << 31);
      carry = next;
    }
    d.trim();
  }
  quot.trim();
  return quot;
}

bool BigUint::divides(const BigUint& n) const {
  BigUint rem;
  n.divmod(*this, rem);
  return rem.is_zero();
}

bool BigUint::is_prime_power(uint64_t& p) const {
  if (is_zero()) return false;
  BigUint v = *this;
  if (v == BigUint(1)) return true;
  uint64_t f = 0;
  for (uint64_t c = 2; c < 6000; ++c) {
    BigUint rem;
    BigUint q = v.divmod(BigUint(c), rem);
    if (rem.is_zero()) {
      f = c;
      break;
    }
    if (BigUint(c) * BigUint(c) > v) {
      f = v.as_u64();
      break;
    }
  }
  if (f == 0) return false;  // no small factor found, value too composite
  while (true) {
    BigUint rem;
    BigUint q = v.divmod(BigUint(f), rem);
    if (!rem.is_zero()) return false;
    v = q;
    if (v == BigUint(1)) {
      p = f;
      return true;
    }
  }
}

std::string BigUint::str() const {
  std::vector<uint32_t> v = limbs_;
  std::string out;
  while (!(v.size() == 1 && v[0] == 0)) {
    uint64_t rem = 0;
    for (size_t i = v.size(); i-- > 0;) {
      uint64_t cur = (rem << 32) | v[i];
      v[i] = static_cast<uint32_t>(cur / 1000000000u);
      rem = cur % 1000000000u;
    }
    while (v.size() > 1 && v.back() == 0) v.pop_back();
    for (int k = 0; k < 9; ++k) {
      out.push_back(static_cast<char>('0' + rem % 10));
      rem /= 10;
    }
  }
  while (out.size() > 1 && out.back() == '0') out.pop_back();
  if (out.empty()) out = "0";
  return std::string(out.rbegin(), out.rend());
}

double BigUint::log() const {
  assert(!is_zero());
  double acc = 0;
  size_t n = limbs_.size();
  // top 64 bits give enough precision
  if (n == 1) return std::log(static_cast<double>(limbs_[0]));
  uint64_t top = (static_cast<uint64_t>(limbs_[n - 1]) << 32) | limbs_[n - 2];
  acc = std::log(static_cast<double>(top)) + (n - 2) * 32.0 * std::log(2.0);
  return acc;
}

}  // namespace ftc
