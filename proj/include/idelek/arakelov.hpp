#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "idelek/classes.hpp"

namespace idelek {

/* --------------------------- Arakelov divisors ---------------------------- */

/* Formal sum over the places of a number field: integer multiplicities at
 * prime ideals, keyed by the rational prime below and the index of the prime
 * in factor_prime order, and real coefficients at the archimedean places. */
struct ArakelovDivisor {
  const NumberField* F = nullptr;
  std::map<std::pair<mpz_class, unsigned>, long> finite;
  std::vector<BigFloat> infinite;
  mpfr_prec_t precision_bits = 128;
};

inline ArakelovDivisor zero_divisor(const NumberField& F, mpfr_prec_t prec = 128) {
  ArakelovDivisor d;
  d.F = &F;
  d.precision_bits = prec;
  for (unsigned v = 0; v < place_count(F); ++v) d.infinite.push_back(BigFloat::of(0, prec));
  return d;
}

inline void validate_divisor(const ArakelovDivisor& d) {
  if (!d.F) throw ValidationError("ValidationError", "divisor has no field");
  if (d.infinite.size() != place_count(*d.F))
    throw ValidationError("DimensionMismatch", "wrong number of archimedean coefficients");
  // A NaN coefficient would compare as neither close nor far and slip
  // through the tolerance checks as a silent "equal".
  for (const auto& x : d.infinite)
    if (!x.is_number())
      throw ValidationError("ValidationError", "archimedean coefficient is not finite");
  for (const auto& [key, m] : d.finite) {
    if (key.first < 2 || !is_prime(key.first))
      throw ValidationError("ValidationError", "divisor key is not a prime");
    (void)m;
  }
}

inline ArakelovDivisor divisor_negate(const ArakelovDivisor& a) {
  validate_divisor(a);
  ArakelovDivisor r = a;
  for (auto& [key, m] : r.finite) m = -m;
  for (auto& x : r.infinite) x = BigFloat::of(0, x.prec()) - x;
  return r;
}

inline ArakelovDivisor divisor_add(const ArakelovDivisor& a, const ArakelovDivisor& b) {
  validate_divisor(a);
  validate_divisor(b);
  if (a.F != b.F) throw ValidationError("FieldMismatch", "divisors over different fields");
  ArakelovDivisor r = a;
  r.precision_bits = std::max(a.precision_bits, b.precision_bits);
  for (const auto& [key, m] : b.finite) {
    auto it = r.finite.find(key);
    long s = (it == r.finite.end() ? 0 : it->second) + m;
    if (s == 0)
      r.finite.erase(key);
    else
      r.finite[key] = s;
  }
  for (unsigned v = 0; v < r.infinite.size(); ++v) r.infinite[v] = r.infinite[v] + b.infinite[v];
  return r;
}

/* The fractional ideal cut out by the finite part. */
inline FractionalIdeal divisor_ideal(const ArakelovDivisor& d) {
  validate_divisor(d);
  FractionalIdeal I = unit_ideal(*d.F);
  for (const auto& [key, m] : d.finite) {
    auto primes = factor_prime(*d.F, key.first);
    if (key.second >= primes.size())
      throw ValidationError("ValidationError", "prime index out of range");
    I = ideal_mul(I, detail::ideal_pow(primes[key.second].ideal, m));
  }
  return I;
}

/* Divisor of a nonzero field element: valuations over every prime in the
 * support, log|sigma(f)| at each archimedean place. The support is read off
 * the numerator and denominator of the field norm together with the
 * denominators of the coordinates: a negative valuation at a prime over p
 * forces p into some coordinate denominator, and a positive valuation with
 * all others nonnegative forces p into the norm numerator. */
inline ArakelovDivisor principal_divisor(const FieldElement& f, mpfr_prec_t prec = 128) {
  if (!f.F) throw ValidationError("ValidationError", "element has no field");
  if (f.is_zero()) throw ValidationError("ZeroElement", "the zero element has no divisor");
  const NumberField& F = *f.F;
  ArakelovDivisor d = zero_divisor(F, prec);
  std::set<mpz_class> support;
  mpq_class nf = norm(f);
  for (const auto& [p, e] : factor(abs(nf.get_num()))) support.insert(p);
  for (const auto& [p, e] : factor(nf.get_den())) support.insert(p);
  mpz_class den = 1;
  for (const auto& q : f.c) den = lcm(den, q.get_den());
  for (const auto& [p, e] : factor(den)) support.insert(p);
  for (const auto& p : support) {
    auto primes = factor_prime(F, p);
    for (unsigned i = 0; i < primes.size(); ++i) {
      long v = element_valuation(f, primes[i]);
      if (v != 0) d.finite[{p, i}] = v;
    }
  }
  for (unsigned v = 0; v < place_count(F); ++v) d.infinite[v] = embed(f, v, prec).log_abs();
  return d;
}

namespace detail {

struct LogUnitMatch {
  BigFloat defect;
  long exponent = 0;
};

/* Best approximation of a residual vector by the logarithm image of a unit:
 * zero when the unit group is finite, an integer multiple of the fundamental
 * log-vector for real quadratic fields. The exponent is solved by orthogonal
 * projection with a one-step guard band against rounding. */
inline LogUnitMatch match_log_units(const NumberField& K, const std::vector<BigFloat>& r,
                                    mpfr_prec_t prec) {
  if (K.is_rationals() || K.n_complex > 0) {
    BigFloat d = BigFloat::of(0, prec);
    for (const auto& x : r)
      if (abs(x) > d) d = abs(x);
    return {d, 0};
  }
  UnitGroup ug = unit_group(K);
  const FieldElement& eps = *ug.fundamental;
  BigFloat u1 = log(abs(embed(eps, 0, prec).re)), u2 = log(abs(embed(eps, 1, prec).re));
  BigFloat proj = (r[0] * u1 + r[1] * u2) / (u1 * u1 + u2 * u2);
  long n0 = proj.to_long();
  const long cap = 1L << 20;
  if (n0 > cap) n0 = cap;
  if (n0 < -cap) n0 = -cap;
  LogUnitMatch best{BigFloat::of(0, prec), 0};
  bool first = true;
  for (long n = n0 - 1; n <= n0 + 1; ++n) {
    BigFloat nn = BigFloat::of(n, prec);
    BigFloat d1 = abs(r[0] - nn * u1), d2 = abs(r[1] - nn * u2);
    BigFloat d = d1 > d2 ? d1 : d2;
    if (first || d < best.defect) best = {d, n};
    first = false;
  }
  return best;
}

}  // namespace detail

/* Equality in the metrized class group. The difference must cut out a
 * principal ideal whose generator, adjusted by a unit, reproduces the
 * archimedean coefficients through log|sigma|. Decisions follow the same
 * tolerance discipline as class_equal: a defect within 2^-64 is equal, one
 * beyond 2^-48 is different, and anything between escalates the working
 * precision up to 1024 bits before failing loudly. */
inline bool pic_hat_equal(const ArakelovDivisor& a, const ArakelovDivisor& b) {
  validate_divisor(a);
  validate_divisor(b);
  if (a.F != b.F) throw ValidationError("FieldMismatch", "divisors over different fields");
  const NumberField& K = *a.F;
  if (!K.is_rationals() && !K.is_quadratic())
    throw UnsupportedError("UnsupportedField", "metrized class decisions need degree <= 2");
  ArakelovDivisor e = divisor_add(a, divisor_negate(b));
  auto gen = is_principal(divisor_ideal(e));
  if (!gen) return false;
  const FieldElement g = *gen;
  const unsigned places = place_count(K);
  mpfr_prec_t prec = std::max<mpfr_prec_t>(std::max(a.precision_bits, b.precision_bits), 128);
  const mpfr_prec_t prec_cap = 1024;
  for (;;) {
    std::vector<BigFloat> r(places, BigFloat::of(0, prec));
    for (unsigned v = 0; v < places; ++v) r[v] = e.infinite[v] - embed(g, v, prec).log_abs();
    BigFloat delta = detail::match_log_units(K, r, prec).defect;
    if (!(delta > pow2(-64, prec))) return true;
    if (delta > pow2(-48, prec)) return false;
    if (prec >= prec_cap)
      throw PrecisionExhausted("metrized class comparison undecided at 1024 bits");
    prec *= 2;
  }
}

/* -------------------------- metrized line bundles ------------------------- */

struct MetrizedLineBundle {
  FractionalIdeal ideal;
  std::vector<BigFloat> norms_sq;  // squared norm of 1 at each archimedean place
  mpfr_prec_t precision_bits = 128;
};

/* All archimedean normalization lives here: a coefficient x scales the
 * squared norm of 1 by exp(-2x), against a base of 1 at a real place and 2
 * at a complex one. */
inline MetrizedLineBundle metric_of_divisor(const ArakelovDivisor& d) {
  validate_divisor(d);
  MetrizedLineBundle L;
  L.ideal = divisor_ideal(d);
  L.precision_bits = d.precision_bits;
  for (unsigned v = 0; v < d.infinite.size(); ++v) {
    mpfr_prec_t prec = std::max(d.precision_bits, d.infinite[v].prec());
    BigFloat base = BigFloat::of(v < d.F->n_real ? 1 : 2, prec);
    L.norms_sq.push_back(base * exp(BigFloat::of(-2, prec) * d.infinite[v]));
  }
  return L;
}

/* ------------------------ comparison with K-theory ------------------------ */

namespace detail {

/* Center of the unique field component of the class's algebra; the metrized
 * class maps are only defined for commutative centers of degree <= 2. */
inline const NumberField& arakelov_center(const IdeleClass& x) {
  if (x.flavor != ClassFlavor::K0Rel)
    throw ValidationError("FlavorMismatch", "expected a relative K-class");
  const SemisimpleAlgebra& A = *x.order->A;
  if (A.components.size() != 1 || A.components[0].kind != ComponentKind::Field)
    throw UnsupportedError("UnsupportedField", "metrized class maps need one field component");
  const NumberField& K = *A.components[0].center;
  if (!K.is_rationals() && !K.is_quadratic())
    throw UnsupportedError("UnsupportedField", "metrized class maps need degree <= 2");
  return K;
}

}  // namespace detail

/* Image of a relative K-class in the metrized class group: valuations of
 * each local value at the primes over its own residue characteristic, and
 * log absolute values at the archimedean places. */
inline ArakelovDivisor k0_to_pic_hat(const IdeleClass& x) {
  const NumberField& K = detail::arakelov_center(x);
  validate_idele(x.rep);
  ArakelovDivisor d = zero_divisor(K, x.precision_bits);
  for (const auto& [key, val] : x.rep.finite) {
    mpz_class p(key.second);
    auto primes = factor_prime(K, p);
    for (unsigned i = 0; i < primes.size(); ++i) {
      long m = element_valuation(val.entries[0], primes[i]);
      if (m != 0) d.finite[{p, i}] = m;
    }
  }
  for (unsigned v = 0; v < d.infinite.size(); ++v) {
    const InfiniteValue& iv = x.rep.infinite[v];
    d.infinite[v] = iv.is_exact ? embed(iv.exact.entries[0], v, x.precision_bits).log_abs()
                                : iv.numeric.log_abs();
  }
  return d;
}

/* --------------------------- angular components --------------------------- */

/* A point of the compact torus attached to the archimedean places: one
 * unit-modulus value per place, considered modulo the roots of unity of the
 * field acting diagonally through the embeddings. */
struct AngularElement {
  const NumberField* F = nullptr;
  std::vector<BigComplex> values;
  mpfr_prec_t precision_bits = 128;
};

inline AngularElement trivial_angular(const NumberField& F, mpfr_prec_t prec = 128) {
  AngularElement a;
  a.F = &F;
  a.precision_bits = prec;
  for (unsigned v = 0; v < place_count(F); ++v) {
    BigComplex one(prec);
    one.re = BigFloat::of(1, prec);
    a.values.push_back(one);
  }
  return a;
}

/* Angular part of a class that maps to zero in the metrized class group: the
 * local value at each archimedean place divided by the matched unit-adjusted
 * principal generator, leaving only the direction. Classes outside the
 * kernel are rejected. */
inline AngularElement angular_part(const IdeleClass& x) {
  const NumberField& K = detail::arakelov_center(x);
  ArakelovDivisor d = k0_to_pic_hat(x);
  auto gen = is_principal(divisor_ideal(d));
  if (!gen) throw ValidationError("NotInKernel", "finite part generates a nontrivial class");
  const FieldElement g = *gen;
  const unsigned places = place_count(K);
  mpfr_prec_t prec = std::max<mpfr_prec_t>(x.precision_bits, 128);
  const mpfr_prec_t prec_cap = 1024;
  long n = 0;
  for (;;) {
    std::vector<BigFloat> r(places, BigFloat::of(0, prec));
    for (unsigned v = 0; v < places; ++v) r[v] = d.infinite[v] - embed(g, v, prec).log_abs();
    detail::LogUnitMatch m = detail::match_log_units(K, r, prec);
    if (!(m.defect > pow2(-64, prec))) {
      n = m.exponent;
      break;
    }
    if (m.defect > pow2(-48, prec))
      throw ValidationError("NotInKernel", "archimedean part misses the principal fiber");
    if (prec >= prec_cap) throw PrecisionExhausted("kernel membership undecided at 1024 bits");
    prec *= 2;
  }
  std::optional<FieldElement> eps;
  if (n != 0) eps = unit_group(K).fundamental;
  AngularElement a;
  a.F = &K;
  a.precision_bits = x.precision_bits;
  for (unsigned v = 0; v < places; ++v) {
    const InfiniteValue& iv = x.rep.infinite[v];
    BigComplex zv = iv.is_exact ? embed_infinite(iv.exact, v, prec) : iv.numeric;
    BigComplex hv = embed(g, v, prec);
    if (eps) {
      // The matched power of the fundamental unit is applied through its
      // logarithm; an exact power of exponent ~2^20 would be astronomically
      // large while the floating image stays perfectly tame.
      BigFloat le = log(abs(embed(*eps, v, prec).re));
      int sgn = embed(*eps, v, prec).re.sign();
      hv = hv * BigComplex{detail::real_unit_power(le, sgn, n, prec), BigFloat::of(0, prec)};
    }
    a.values.push_back(zv / hv);
  }
  return a;
}

/* Equality on the compact torus modulo roots of unity, under the shared
 * tolerance discipline. */
inline bool angular_equal(const AngularElement& a, const AngularElement& b) {
  if (!a.F || !b.F) throw ValidationError("ValidationError", "angular element has no field");
  if (a.F != b.F)
    throw ValidationError("FieldMismatch", "angular elements over different fields");
  const NumberField& K = *a.F;
  const unsigned places = place_count(K);
  if (a.values.size() != places || b.values.size() != places)
    throw ValidationError("DimensionMismatch", "wrong number of archimedean values");
  mpfr_prec_t prec = std::max<mpfr_prec_t>(std::max(a.precision_bits, b.precision_bits), 128);
  const mpfr_prec_t prec_cap = 1024;
  for (;;) {
    BigFloat best = BigFloat::of(2, prec);
    for (const auto& zeta : roots_of_unity(K)) {
      BigFloat d = BigFloat::of(0, prec);
      for (unsigned v = 0; v < places; ++v) {
        BigFloat dv = detail::dist_to_one(a.values[v] / (embed(zeta, v, prec) * b.values[v]));
        if (dv > d) d = dv;
      }
      if (d < best) best = d;
    }
    if (!(best > pow2(-64, prec))) return true;
    if (best > pow2(-48, prec)) return false;
    if (prec >= prec_cap) throw PrecisionExhausted("angular comparison undecided at 1024 bits");
    prec *= 2;
  }
}

}  // namespace idelek
