#pragma once

#include <cstdint>

#include "jacp/errors.hpp"

namespace jacp {

class FpElem;

// Prime field context F_p. The prime is validated deterministically at
// construction (trial division; p <= 2^20 keeps every product of two residues
// inside 64 bits). FieldCtx is a small value type; two contexts describe the
// same field iff their primes are equal.
class FieldCtx {
 public:
  static constexpr uint32_t kMaxPrime = 1u << 20;

  explicit FieldCtx(uint32_t p);

  uint32_t p() const { return p_; }

  // Reduces v mod p.
  FpElem elem(uint64_t v) const;
  // Reduces a signed value mod p into [0, p).
  FpElem elem_signed(int64_t v) const;
  FpElem zero() const;
  FpElem one() const;

  friend bool operator==(const FieldCtx&, const FieldCtx&) = default;

 private:
  uint32_t p_;
};

// Immutable residue in [0, p), bound to the field it was created in.
// Arithmetic between elements of different fields throws FieldMismatchError.
class FpElem {
 public:
  FpElem() : v_(0), p_(2) {}

  uint32_t value() const { return v_; }
  uint32_t modulus() const { return p_; }
  FieldCtx ctx() const { return FieldCtx(p_); }
  bool is_zero() const { return v_ == 0; }

  friend bool operator==(const FpElem& a, const FpElem& b) {
    return a.p_ == b.p_ && a.v_ == b.v_;
  }

 private:
  friend class FieldCtx;
  FpElem(uint32_t v, uint32_t p) : v_(v), p_(p) {}

  uint32_t v_;
  uint32_t p_;
};

FpElem operator+(FpElem a, FpElem b);
FpElem operator-(FpElem a, FpElem b);
FpElem operator*(FpElem a, FpElem b);
FpElem operator-(FpElem a);

// Multiplicative inverse via the extended Euclidean algorithm.
// Throws std::domain_error on zero.
FpElem inv(FpElem a);

// a / b = a * inv(b).
FpElem operator/(FpElem a, FpElem b);

// Square-and-multiply; pow(0, 0) = 1 by convention.
FpElem pow(FpElem a, uint64_t e);

}  // namespace jacp
