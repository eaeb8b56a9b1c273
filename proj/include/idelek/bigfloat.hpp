#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <string>
#include <utility>

#include "idelek/errors.hpp"

namespace idelek {

/* Thin RAII wrapper over mpfr_t. All operations round to nearest; binary
 * operations compute at the larger precision of the two operands. */
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec = 128) {
    mpfr_init2(x_, prec);
    mpfr_set_zero(x_, 1);
  }
  BigFloat(const BigFloat& o) {
    mpfr_init2(x_, mpfr_get_prec(o.x_));
    mpfr_set(x_, o.x_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(x_, 2);
    mpfr_swap(x_, o.x_);
  }
  BigFloat& operator=(BigFloat o) noexcept {
    mpfr_swap(x_, o.x_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(x_); }

  static BigFloat of(const mpq_class& q, mpfr_prec_t prec) {
    BigFloat r(prec);
    mpfr_set_q(r.x_, q.get_mpq_t(), MPFR_RNDN);
    return r;
  }
  static BigFloat of(long v, mpfr_prec_t prec) {
    BigFloat r(prec);
    mpfr_set_si(r.x_, v, MPFR_RNDN);
    return r;
  }
  static BigFloat pi(mpfr_prec_t prec) {
    BigFloat r(prec);
    mpfr_const_pi(r.x_, MPFR_RNDN);
    return r;
  }

  mpfr_prec_t prec() const { return mpfr_get_prec(x_); }
  mpfr_ptr raw() { return x_; }
  mpfr_srcptr raw() const { return x_; }

  int sign() const { return mpfr_sgn(x_); }
  bool is_zero() const { return mpfr_zero_p(x_) != 0; }
  bool is_number() const { return mpfr_number_p(x_) != 0; }

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.prec(), b.prec()));
    mpfr_add(r.x_, a.x_, b.x_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.prec(), b.prec()));
    mpfr_sub(r.x_, a.x_, b.x_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.prec(), b.prec()));
    mpfr_mul(r.x_, a.x_, b.x_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.prec(), b.prec()));
    mpfr_div(r.x_, a.x_, b.x_, MPFR_RNDN);
    return r;
  }
  BigFloat operator-() const {
    BigFloat r(prec());
    mpfr_neg(r.x_, x_, MPFR_RNDN);
    return r;
  }

  friend bool operator<(const BigFloat& a, const BigFloat& b) {
    return mpfr_cmp(a.x_, b.x_) < 0;
  }
  friend bool operator>(const BigFloat& a, const BigFloat& b) {
    return mpfr_cmp(a.x_, b.x_) > 0;
  }
  friend bool operator==(const BigFloat& a, const BigFloat& b) {
    return mpfr_cmp(a.x_, b.x_) == 0;
  }

  friend BigFloat abs(const BigFloat& a) {
    BigFloat r(a.prec());
    mpfr_abs(r.x_, a.x_, MPFR_RNDN);
    return r;
  }
  friend BigFloat sqrt(const BigFloat& a) {
    BigFloat r(a.prec());
    mpfr_sqrt(r.x_, a.x_, MPFR_RNDN);
    return r;
  }
  friend BigFloat log(const BigFloat& a) {
    BigFloat r(a.prec());
    mpfr_log(r.x_, a.x_, MPFR_RNDN);
    return r;
  }
  friend BigFloat exp(const BigFloat& a) {
    BigFloat r(a.prec());
    mpfr_exp(r.x_, a.x_, MPFR_RNDN);
    return r;
  }
  friend BigFloat atan2(const BigFloat& y, const BigFloat& x) {
    BigFloat r(std::max(y.prec(), x.prec()));
    mpfr_atan2(r.x_, y.x_, x.x_, MPFR_RNDN);
    return r;
  }
  friend BigFloat round_away(const BigFloat& a) {
    BigFloat r(a.prec());
    mpfr_round(r.x_, a.x_);
    return r;
  }

  long to_long() const { return mpfr_get_si(x_, MPFR_RNDN); }
  double to_double() const { return mpfr_get_d(x_, MPFR_RNDN); }

  /* Deterministic decimal rendering: enough digits to round-trip at this
   * precision, fixed format. */
  std::string str() const {
    long digits = static_cast<long>(static_cast<double>(prec()) * 0.30103) + 3;
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", static_cast<int>(digits), x_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }

  static BigFloat parse(const std::string& s, mpfr_prec_t prec) {
    BigFloat r(prec);
    if (mpfr_set_str(r.x_, s.c_str(), 10, MPFR_RNDN) != 0)
      throw ValidationError("ParseError", "bad numeric literal '" + s + "'");
    return r;
  }

 private:
  mpfr_t x_;
};

/* 2^-k at a given working precision, for tolerance thresholds. */
inline BigFloat pow2(long k, mpfr_prec_t prec) {
  BigFloat r(prec);
  mpfr_set_ui_2exp(r.raw(), 1, k, MPFR_RNDN);
  return r;
}

struct BigComplex {
  BigFloat re, im;

  explicit BigComplex(mpfr_prec_t prec = 128) : re(prec), im(prec) {}
  BigComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}

  bool is_real() const { return im.is_zero(); }

  friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend BigComplex operator/(const BigComplex& a, const BigComplex& b) {
    BigFloat n = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  BigFloat abs2() const { return re * re + im * im; }
  /* log |z|, via log(|z|^2)/2 to avoid a sqrt */
  BigFloat log_abs() const { return log(abs2()) / BigFloat::of(2, re.prec()); }
  BigFloat arg() const { return atan2(im, re); }
};

}  // namespace idelek
