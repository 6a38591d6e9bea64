#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ftc {

// Arbitrary-size unsigned integer, base 2^32. Group orders on trees of
// depth 7 reach ~10^130, past any fixed-width type.
class BigUint {
public:
  BigUint() : limbs_{0} {}
  BigUint(uint64_t v);

  static BigUint pow(uint64_t base, uint64_t exp);

  bool is_zero() const { return limbs_.size() == 1 && limbs_[0] == 0; }
  bool fits_u64() const { return limbs_.size() <= 2; }
  uint64_t as_u64() const;

  BigUint& operator*=(const BigUint& rhs);
  BigUint& operator*=(uint64_t rhs) { return *this *= BigUint(rhs); }
  friend BigUint operator*(BigUint a, const BigUint& b) { return a *= b; }

  // Quotient; rem receives the remainder. Division by zero is an error.
  BigUint divmod(const BigUint& rhs, BigUint& rem) const;
  BigUint operator/(const BigUint& rhs) const {
    BigUint r;
    return divmod(rhs, r);
  }
  bool divides(const BigUint& n) const;

  int cmp(const BigUint& rhs) const;
  bool operator==(const BigUint& rhs) const { return cmp(rhs) == 0; }
  bool operator!=(const BigUint& rhs) const { return cmp(rhs) != 0; }
  bool operator<(const BigUint& rhs) const { return cmp(rhs) < 0; }
  bool operator<=(const BigUint& rhs) const { return cmp(rhs) <= 0; }
  bool operator>(const BigUint& rhs) const { return cmp(rhs) > 0; }

  // True if the value is p^k for some k >= 0; sets p to the prime when the
  // value is > 1. Factors by trial division, fine for orders built from
  // orbit lengths <= 3^7.
  bool is_prime_power(uint64_t& p) const;

  size_t bits() const;
  std::string str() const;
  double log() const;

private:
  void trim();
  void shift_left_bits(size_t k);
  static int cmp_raw(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  static void sub_raw(std::vector<uint32_t>& a, const std::vector<uint32_t>& b);

  std::vector<uint32_t> limbs_;  // little-endian
};

}  // namespace ftc
