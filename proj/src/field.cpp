#include "jacp/field.hpp"

#include <string>

namespace jacp {

namespace {

bool is_prime(uint32_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (uint32_t d = 3; static_cast<uint64_t>(d) * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

void require_same_field(FpElem a, FpElem b) {
  if (a.modulus() != b.modulus()) {
    throw FieldMismatchError("elements belong to F_" +
                             std::to_string(a.modulus()) + " and F_" +
                             std::to_string(b.modulus()));
  }
}

}  // namespace

FieldCtx::FieldCtx(uint32_t p) : p_(p) {
  if (p > kMaxPrime) {
    throw std::invalid_argument("modulus " + std::to_string(p) +
                                " exceeds the 2^20 cap");
  }
  if (!is_prime(p)) {
    throw std::invalid_argument("modulus " + std::to_string(p) +
                                " is not prime");
  }
}

FpElem FieldCtx::elem(uint64_t v) const {
  return FpElem(static_cast<uint32_t>(v % p_), p_);
}

FpElem FieldCtx::elem_signed(int64_t v) const {
  int64_t r = v % static_cast<int64_t>(p_);
  if (r < 0) r += p_;
  return FpElem(static_cast<uint32_t>(r), p_);
}

FpElem FieldCtx::zero() const { return FpElem(0, p_); }

FpElem FieldCtx::one() const { return FpElem(1 % p_, p_); }

FpElem operator+(FpElem a, FpElem b) {
  require_same_field(a, b);
  uint32_t s = a.value() + b.value();
  if (s >= a.modulus()) s -= a.modulus();
  return a.ctx().elem(s);
}

FpElem operator-(FpElem a, FpElem b) {
  require_same_field(a, b);
  uint32_t s = a.value() + (a.modulus() - b.value());
  if (s >= a.modulus()) s -= a.modulus();
  return a.ctx().elem(s);
}

FpElem operator*(FpElem a, FpElem b) {
  require_same_field(a, b);
  return a.ctx().elem(static_cast<uint64_t>(a.value()) * b.value());
}

FpElem operator-(FpElem a) {
  return a.ctx().elem(a.value() == 0 ? 0 : a.modulus() - a.value());
}

FpElem inv(FpElem a) {
  if (a.value() == 0) {
    throw std::domain_error("zero has no inverse in F_" +
                            std::to_string(a.modulus()));
  }
  // Extended Euclid on (p, a): maintains t with t*a = r (mod p).
  int64_t p = a.modulus();
  int64_t r0 = p, r1 = a.value();
  int64_t t0 = 0, t1 = 1;
  while (r1 != 0) {
    int64_t q = r0 / r1;
    int64_t r2 = r0 - q * r1;
    int64_t t2 = t0 - q * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  if (t0 < 0) t0 += p;
  return a.ctx().elem(static_cast<uint64_t>(t0));
}

FpElem operator/(FpElem a, FpElem b) {
  require_same_field(a, b);
  return a * inv(b);
}

FpElem pow(FpElem a, uint64_t e) {
  FpElem result = a.ctx().one();
  FpElem base = a;
  while (e > 0) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

}  // namespace jacp
