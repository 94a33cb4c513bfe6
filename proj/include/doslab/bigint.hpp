#pragma once

#include <gmp.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace doslab {

/// Thin RAII wrapper around a GMP signed integer; just the operations the
/// model-counting pipeline needs.
class BigInt {
 public:
  BigInt() { mpz_init(z_); }
  BigInt(long v) { mpz_init_set_si(z_, v); }  // NOLINT: implicit by design
  BigInt(const BigInt& o) { mpz_init_set(z_, o.z_); }
  BigInt(BigInt&& o) noexcept {
    mpz_init(z_);
    mpz_swap(z_, o.z_);
  }
  BigInt& operator=(const BigInt& o) {
    if (this != &o) mpz_set(z_, o.z_);
    return *this;
  }
  BigInt& operator=(BigInt&& o) noexcept {
    mpz_swap(z_, o.z_);
    return *this;
  }
  ~BigInt() { mpz_clear(z_); }

  static BigInt pow2(unsigned bits) {
    BigInt r;
    mpz_setbit(r.z_, bits);
    return r;
  }
  static BigInt from_u64(uint64_t v) {
    BigInt r;
    mpz_import(r.z_, 1, 1, sizeof v, 0, 0, &v);
    return r;
  }

  BigInt& operator+=(const BigInt& o) {
    mpz_add(z_, z_, o.z_);
    return *this;
  }
  BigInt& operator-=(const BigInt& o) {
    mpz_sub(z_, z_, o.z_);
    return *this;
  }
  friend BigInt operator+(BigInt a, const BigInt& b) { return a += b; }
  friend BigInt operator-(BigInt a, const BigInt& b) { return a -= b; }
  friend BigInt operator*(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_mul(r.z_, a.z_, b.z_);
    return r;
  }

  BigInt& shift_left(unsigned bits) {
    mpz_mul_2exp(z_, z_, bits);
    return *this;
  }

  /// floor division by 2^bits with ties rounded up; requires *this >= 0.
  /// This is round-half-away-from-zero for the nonnegative rationals the
  /// counting pipeline produces.
  BigInt round_shift_right_half_up(unsigned bits) const {
    BigInt q, twice_r;
    mpz_fdiv_q_2exp(q.z_, z_, bits);
    mpz_fdiv_r_2exp(twice_r.z_, z_, bits);
    mpz_mul_2exp(twice_r.z_, twice_r.z_, 1);
    BigInt half = pow2(bits);
    if (mpz_cmp(twice_r.z_, half.z_) >= 0) mpz_add_ui(q.z_, q.z_, 1);
    return q;
  }

  int sign() const { return mpz_sgn(z_); }
  int compare(const BigInt& o) const { return mpz_cmp(z_, o.z_); }
  bool operator==(const BigInt& o) const { return compare(o) == 0; }
  bool operator<(const BigInt& o) const { return compare(o) < 0; }
  bool operator<=(const BigInt& o) const { return compare(o) <= 0; }

  double to_double() const { return mpz_get_d(z_); }
  std::string to_string() const {
    char* s = mpz_get_str(nullptr, 10, z_);
    std::string out(s);
    void (*freefunc)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefunc);
    freefunc(s, out.size() + 1);
    return out;
  }
  static BigInt from_string(const std::string& s) {
    BigInt r;
    if (mpz_set_str(r.z_, s.c_str(), 10) != 0) throw std::invalid_argument("not a decimal integer");
    return r;
  }

 private:
  mpz_t z_;
};

}  // namespace doslab
