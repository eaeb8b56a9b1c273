#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "idelek/algebra.hpp"
#include "idelek/bigfloat.hpp"
#include "idelek/errors.hpp"
#include "idelek/ideles.hpp"
#include "idelek/number_field.hpp"
#include "idelek/numeric.hpp"
#include "idelek/order.hpp"

namespace idelek {

/* Classes of ideles in three quotients:
 *   K0Rel      J(A) / (norm-one part * global units * finite-unit ideles),
 *   Cl         the further quotient that forgets the archimedean data, i.e.
 *              plain ideal-class information on each center,
 *   CenterForm J(center) / (center units positive at the ramified real
 *              places * reduced norms of local unit groups).
 * Noncommutative components are always decided through their reduced norm,
 * which identifies the K0Rel value with the CenterForm one. */

enum class ClassFlavor { K0Rel, Cl, CenterForm };

/* ------------------------------ center ideles ----------------------------- */

/* A value in the center of one component: an exact field element, or a
 * floating approximation of its image under one archimedean place. */
struct CenterValue {
  bool is_exact = true;
  FieldElement exact;
  BigComplex numeric;
};

inline CenterValue exact_center(FieldElement v) {
  CenterValue r;
  r.exact = std::move(v);
  return r;
}

inline CenterValue numeric_center(BigComplex z) {
  CenterValue r;
  r.is_exact = false;
  r.numeric = std::move(z);
  return r;
}

struct CenterIdele {
  const SemisimpleAlgebra* A = nullptr;
  /* (component index, rational prime) -> nonzero element of that center. */
  std::map<std::pair<std::size_t, long>, FieldElement> finite;
  std::vector<CenterValue> infinite;  // flat archimedean places, as in Idele
};

inline CenterIdele trivial_center_idele(const SemisimpleAlgebra& a) {
  CenterIdele c;
  c.A = &a;
  for (unsigned v = 0; v < infinite_place_count(a); ++v) {
    std::size_t ci = infinite_place_owner(a, v).first;
    c.infinite.push_back(exact_center(FieldElement::of(*a.components[ci].center, 1)));
  }
  return c;
}

inline void validate_center_idele(const CenterIdele& c) {
  if (!c.A) throw ValidationError("InvalidIdele", "center idele without algebra");
  for (const auto& [key, v] : c.finite) {
    if (key.first >= c.A->components.size())
      throw ValidationError("InvalidIdele", "component index out of range");
    if (key.second < 2 || !is_prime(mpz_class(key.second)))
      throw ValidationError("InvalidIdele", "finite place key is not a prime");
    if (v.F != c.A->components[key.first].center.get())
      throw ValidationError("InvalidIdele", "finite value lies in the wrong center");
    if (v.is_zero()) throw ValidationError("InvalidIdele", "finite value is zero");
  }
  if (c.infinite.size() != infinite_place_count(*c.A))
    throw ValidationError("InvalidIdele", "wrong number of infinite values");
  for (unsigned v = 0; v < c.infinite.size(); ++v) {
    auto [ci, local] = infinite_place_owner(*c.A, v);
    const SimpleComponent& comp = c.A->components[ci];
    const CenterValue& iv = c.infinite[v];
    if (iv.is_exact) {
      if (iv.exact.F != comp.center.get())
        throw ValidationError("InvalidIdele", "infinite value lies in the wrong center");
      if (iv.exact.is_zero()) throw ValidationError("InvalidIdele", "infinite value is zero");
    } else {
      if (iv.numeric.abs2().sign() <= 0)
        throw ValidationError("InvalidIdele", "numeric infinite value is zero");
      if (local < comp.center->n_real && iv.numeric.im.sign() != 0)
        throw ValidationError("InvalidIdele", "numeric value at a real place must be real");
    }
  }
}

namespace detail {

inline CenterValue center_value_mul(const CenterValue& x, const CenterValue& y, unsigned local) {
  if (x.is_exact && y.is_exact) return exact_center(x.exact * y.exact);
  mpfr_prec_t prec = 128;
  if (!x.is_exact) prec = std::max(prec, x.numeric.re.prec());
  if (!y.is_exact) prec = std::max(prec, y.numeric.re.prec());
  BigComplex xv = x.is_exact ? embed(x.exact, local, prec) : x.numeric;
  BigComplex yv = y.is_exact ? embed(y.exact, local, prec) : y.numeric;
  return numeric_center(xv * yv);
}

}  // namespace detail

inline CenterIdele center_mul(const CenterIdele& a, const CenterIdele& b) {
  if (a.A != b.A) throw ValidationError("InvalidIdele", "center ideles over different algebras");
  CenterIdele r = a;
  for (const auto& [key, v] : b.finite) {
    auto it = r.finite.find(key);
    if (it == r.finite.end())
      r.finite.emplace(key, v);
    else
      it->second = it->second * v;
  }
  for (unsigned p = 0; p < r.infinite.size(); ++p) {
    unsigned local = infinite_place_owner(*a.A, p).second;
    r.infinite[p] = detail::center_value_mul(a.infinite[p], b.infinite[p], local);
  }
  return r;
}

inline CenterIdele center_inverse(const CenterIdele& a) {
  validate_center_idele(a);
  CenterIdele r;
  r.A = a.A;
  for (const auto& [key, v] : a.finite) r.finite.emplace(key, inverse(v));
  for (unsigned p = 0; p < a.infinite.size(); ++p) {
    const CenterValue& iv = a.infinite[p];
    if (iv.is_exact) {
      r.infinite.push_back(exact_center(inverse(iv.exact)));
    } else {
      mpfr_prec_t prec = iv.numeric.re.prec();
      BigComplex one{BigFloat::of(1, prec), BigFloat::of(0, prec)};
      r.infinite.push_back(numeric_center(one / iv.numeric));
    }
  }
  return r;
}

/* Image of an algebra idele under the componentwise reduced norm. */
inline CenterIdele center_idele_of(const Idele& a) {
  validate_idele(a);
  CenterIdele c;
  c.A = a.A;
  for (const auto& [key, v] : a.finite) c.finite.emplace(key, component_reduced_norm(v));
  for (unsigned p = 0; p < a.infinite.size(); ++p) {
    std::size_t ci = infinite_place_owner(*a.A, p).first;
    const InfiniteValue& iv = a.infinite[p];
    if (iv.is_exact)
      c.infinite.push_back(exact_center(component_reduced_norm(iv.exact)));
    else
      c.infinite.push_back(numeric_center(numeric_reduced_norm(iv.numeric, a.A->components[ci])));
  }
  return c;
}

/* --------------------------- the decision kernel -------------------------- */

namespace detail {

/* Center data of one component of a quotient idele, ready for the triviality
 * decision: finite values keyed by rational primes, one value per archimedean
 * place of the center, and whether the matching global element must be
 * positive at the real places (definite quaternion components). */
struct CenterView {
  const NumberField* K = nullptr;
  std::vector<std::pair<long, FieldElement>> finite;
  std::vector<CenterValue> inf;
  bool positive_only = false;
};

inline FractionalIdeal ideal_pow(const FractionalIdeal& I, long e) {
  FractionalIdeal r = unit_ideal(*I.F);
  FractionalIdeal b = e >= 0 ? I : ideal_inverse(I);
  for (long i = 0; i < (e >= 0 ? e : -e); ++i) r = ideal_mul(r, b);
  return r;
}

/* Generator of the fractional ideal cut out by the finite data, when it is
 * principal. For the rationals the positive generator is returned. */
inline std::optional<FieldElement> view_generator(const CenterView& v) {
  const NumberField& K = *v.K;
  if (K.is_rationals()) {
    mpq_class g = 1;
    for (const auto& [p, val] : v.finite) g *= qpow(mpq_class(p), qval(val.c[0], p));
    return FieldElement::of(K, g);
  }
  FractionalIdeal I = unit_ideal(K);
  for (const auto& [p, val] : v.finite)
    for (const auto& P : factor_prime(K, mpz_class(p))) {
      long e = element_valuation(val, P);
      if (e != 0) I = ideal_mul(I, ideal_pow(P.ideal, e));
    }
  return is_principal(I);
}

inline BigFloat dist_to_one(const BigComplex& z) {
  mpfr_prec_t prec = z.re.prec();
  BigComplex d{z.re - BigFloat::of(1, prec), z.im};
  return sqrt(d.abs2());
}

/* sigma_v(eps)^n as a real number, with the sign tracked through the parity
 * of n (the conjugate embedding of a fundamental unit can be negative). */
inline BigFloat real_unit_power(const BigFloat& log_abs_eps, int sgn, long n, mpfr_prec_t prec) {
  BigFloat mag = exp(BigFloat::of(n, prec) * log_abs_eps);
  if (sgn < 0 && (n % 2 != 0)) return BigFloat::of(0, prec) - mag;
  return mag;
}

/* Smallest max-place distance |r_v / sigma_v(u) - 1| over unit candidates u.
 * Candidates: roots of unity, times powers of the fundamental unit for real
 * quadratic fields (the exponent is solved from logarithms, with a one-step
 * guard band against rounding). */
inline BigFloat unit_match_defect(const NumberField& K, const std::vector<BigComplex>& r,
                                  mpfr_prec_t prec) {
  BigFloat best = BigFloat::of(1, prec);
  if (K.is_rationals() || K.n_complex > 0) {
    for (const auto& zeta : roots_of_unity(K)) {
      BigFloat d = BigFloat::of(0, prec);
      for (unsigned v = 0; v < r.size(); ++v) {
        BigFloat dv = dist_to_one(r[v] / embed(zeta, v, prec));
        if (dv > d) d = dv;
      }
      if (d < best) best = d;
    }
    return best;
  }
  // real quadratic: r has two real entries
  UnitGroup ug = unit_group(K);
  const FieldElement& eps = *ug.fundamental;
  int eps_norm_sign = norm(eps) < 0 ? -1 : 1;
  BigFloat l1 = log(abs(r[0].re)), l2 = log(abs(r[1].re));
  BigFloat u1 = log(abs(embed(eps, 0, prec).re)), u2 = log(abs(embed(eps, 1, prec).re));
  BigFloat proj = (l1 * u1 + l2 * u2) / (u1 * u1 + u2 * u2);
  long n0 = proj.to_long();
  const long cap = 1L << 20;
  if (n0 > cap) n0 = cap;
  if (n0 < -cap) n0 = -cap;
  for (long n = n0 - 1; n <= n0 + 1; ++n) {
    BigFloat p1 = real_unit_power(u1, 1, n, prec);
    BigFloat p2 = real_unit_power(u2, eps_norm_sign, n, prec);
    BigFloat s1 = r[0].re / p1, s2 = r[1].re / p2;
    for (int zeta = -1; zeta <= 1; zeta += 2) {
      BigFloat z = BigFloat::of(zeta, prec);
      BigFloat d1 = abs(s1 - z), d2 = abs(s2 - z);
      BigFloat d = d1 > d2 ? d1 : d2;
      if (d < best) best = d;
    }
  }
  return best;
}

inline int center_value_sign_at(const CenterValue& v, unsigned place) {
  if (!v.is_exact) return v.numeric.re.sign();
  return embed(v.exact, place, 256).re.sign();
}

/* Decides whether the view is trivial in the relevant quotient: the finite
 * part must cut out a principal ideal, and some generator adjusted by a unit
 * must reproduce the archimedean data (exactly, or within 2^-64 relative).
 * Undecidable comparisons escalate the working precision up to 1024 bits and
 * then fail loudly; an inequality is only certified by a separation above
 * 2^-48, so this never returns a silent "equal". */
inline bool center_quotient_trivial(const CenterView& v, mpfr_prec_t prec0) {
  const NumberField& K = *v.K;
  if (!K.is_rationals() && !K.is_quadratic())
    throw UnsupportedError("UnsupportedField", "class decisions need a degree <= 2 center");
  const unsigned places = place_count(K);
  if (v.inf.size() != places)
    throw ValidationError("DimensionMismatch", "wrong number of archimedean values");

  // A totally positive matching element reproduces in particular the signs of
  // the data, so definite components with a negative value can never be
  // trivial; this is exact regardless of precision.
  if (v.positive_only)
    for (unsigned p = 0; p < K.n_real; ++p)
      if (center_value_sign_at(v.inf[p], p) < 0) return false;

  auto gen = view_generator(v);
  if (!gen) return false;
  const FieldElement g = *gen;

  bool all_exact = true;
  for (const auto& e : v.inf) all_exact = all_exact && e.is_exact;
  if (all_exact) {
    // Archimedean embeddings are injective, so the entries must all be one
    // and the same element g*u, and u must be an integral unit.
    FieldElement u = v.inf[0].exact / g;
    for (unsigned p = 1; p < places; ++p)
      if (!(v.inf[p].exact / g == u)) return false;
    for (const auto& q : to_basis_coords(u))
      if (q.get_den() != 1) return false;
    mpq_class nu = norm(u);
    return nu == 1 || nu == -1;
  }

  mpfr_prec_t prec = std::max<mpfr_prec_t>(prec0, 128);
  const mpfr_prec_t prec_cap = 1024;
  for (;;) {
    std::vector<BigComplex> r(places);
    for (unsigned p = 0; p < places; ++p) {
      BigComplex val = v.inf[p].is_exact ? embed(v.inf[p].exact, p, prec) : v.inf[p].numeric;
      r[p] = val / embed(g, p, prec);
    }
    BigFloat delta = unit_match_defect(K, r, prec);
    if (!(delta > pow2(-64, prec))) return true;
    if (delta > pow2(-48, prec)) return false;
    if (prec >= prec_cap)
      throw PrecisionExhausted("class comparison undecided at 1024 bits");
    prec *= 2;
  }
}

/* View of one component of an algebra idele through the reduced norm. */
inline CenterView component_norm_view(const Idele& d, std::size_t ci) {
  const SimpleComponent& comp = d.A->components[ci];
  CenterView v;
  v.K = comp.center.get();
  v.positive_only = comp.kind == ComponentKind::Quaternion && comp.ramified_at_infinity();
  for (const auto& [key, val] : d.finite)
    if (key.first == ci) v.finite.emplace_back(key.second, component_reduced_norm(val));
  for (unsigned p = 0; p < d.infinite.size(); ++p) {
    if (infinite_place_owner(*d.A, p).first != ci) continue;
    const InfiniteValue& iv = d.infinite[p];
    if (iv.is_exact)
      v.inf.push_back(exact_center(component_reduced_norm(iv.exact)));
    else
      v.inf.push_back(numeric_center(numeric_reduced_norm(iv.numeric, comp)));
  }
  return v;
}

inline CenterView component_center_view(const CenterIdele& d, std::size_t ci) {
  const SimpleComponent& comp = d.A->components[ci];
  CenterView v;
  v.K = comp.center.get();
  v.positive_only = comp.kind == ComponentKind::Quaternion && comp.ramified_at_infinity();
  for (const auto& [key, val] : d.finite)
    if (key.first == ci) v.finite.emplace_back(key.second, val);
  for (unsigned p = 0; p < d.infinite.size(); ++p)
    if (infinite_place_owner(*d.A, p).first == ci) v.inf.push_back(d.infinite[p]);
  return v;
}

}  // namespace detail

/* ------------------------------- idele classes ---------------------------- */

struct IdeleClass {
  ClassFlavor flavor = ClassFlavor::K0Rel;
  const Order* order = nullptr;
  Idele rep;         // K0Rel and Cl flavors
  CenterIdele crep;  // CenterForm flavor
  mpfr_prec_t precision_bits = 128;
};

inline IdeleClass k0rel_class(const Idele& a, const Order& o, mpfr_prec_t prec = 128) {
  validate_idele(a);
  if (a.A != o.A) throw ValidationError("OrderMismatch", "idele and order algebras differ");
  return {ClassFlavor::K0Rel, &o, a, {}, prec};
}

/* Class of the lattice a*order minus the free class, i.e. the image of the
 * idele in the plain ideal-class quotient. */
inline IdeleClass frohlich_class(const Idele& a, const Order& o, mpfr_prec_t prec = 128) {
  validate_idele(a);
  if (a.A != o.A) throw ValidationError("OrderMismatch", "idele and order algebras differ");
  return {ClassFlavor::Cl, &o, a, {}, prec};
}

inline IdeleClass center_class(const CenterIdele& c, const Order& o, mpfr_prec_t prec = 128) {
  validate_center_idele(c);
  if (c.A != o.A) throw ValidationError("OrderMismatch", "center idele and order algebras differ");
  return {ClassFlavor::CenterForm, &o, {}, c, prec};
}

inline IdeleClass centerform_class(const Idele& a, const Order& o, mpfr_prec_t prec = 128) {
  if (a.A != o.A) throw ValidationError("OrderMismatch", "idele and order algebras differ");
  return center_class(center_idele_of(a), o, prec);
}

inline IdeleClass cl_projection(const IdeleClass& x) {
  if (x.flavor != ClassFlavor::K0Rel)
    throw ValidationError("FlavorMismatch", "projection only applies to K0Rel classes");
  return {ClassFlavor::Cl, x.order, x.rep, {}, x.precision_bits};
}

inline bool class_equal(const IdeleClass& x, const IdeleClass& y) {
  if (x.flavor != y.flavor)
    throw ValidationError("FlavorMismatch", "classes live in different quotients");
  if (x.order != y.order)
    throw ValidationError("OrderMismatch", "classes are relative to different orders");
  mpfr_prec_t prec = std::max(x.precision_bits, y.precision_bits);
  const SemisimpleAlgebra& A = *x.order->A;
  switch (x.flavor) {
    case ClassFlavor::K0Rel: {
      Idele d = idele_mul(x.rep, idele_inverse(y.rep));
      for (std::size_t i = 0; i < A.components.size(); ++i)
        if (!detail::center_quotient_trivial(detail::component_norm_view(d, i), prec))
          return false;
      return true;
    }
    case ClassFlavor::Cl: {
      Idele d = idele_mul(x.rep, idele_inverse(y.rep));
      for (std::size_t i = 0; i < A.components.size(); ++i) {
        detail::CenterView v = detail::component_norm_view(d, i);
        if (v.K->is_rationals()) continue;  // every fractional ideal of Z is principal
        if (!v.K->is_quadratic())
          throw UnsupportedError("UnsupportedField", "class decisions need a degree <= 2 center");
        if (!detail::view_generator(v)) return false;
      }
      return true;
    }
    case ClassFlavor::CenterForm: {
      CenterIdele d = center_mul(x.crep, center_inverse(y.crep));
      for (std::size_t i = 0; i < A.components.size(); ++i)
        if (!detail::center_quotient_trivial(detail::component_center_view(d, i), prec))
          return false;
      return true;
    }
  }
  throw ValidationError("FlavorMismatch", "unknown class flavor");
}

/* ------------------------- local generator searches ----------------------- */

namespace detail {

inline std::vector<long> lattice_support_primes(const OrderLattice& l) {
  std::set<long> s;
  for (const auto& [p, e] : factor(l.lat.den)) s.insert(p.get_si());
  for (const auto& [p, e] : factor(abs(det(l.lat.basis)))) s.insert(p.get_si());
  return {s.begin(), s.end()};
}

/* Element x of L with x*O_p = L_p at every support prime of L, found by a
 * box search over lattice coordinates. Correctness of a hit is certified by
 * x being in L (hence x*O inside L) together with the local index match. */
inline std::optional<AlgebraElement> find_local_generator(const OrderLattice& l, long bound) {
  const Order& o = *l.order;
  std::size_t n = o.dim();
  std::vector<long> support = lattice_support_primes(l);
  if (support.empty()) return algebra_one(*o.A);
  RatMatrix rows = l.lat.rat_basis();
  mpq_class target = order_lattice_index(l);
  ZLattice std_lat = ZLattice::standard(n);

  std::vector<long> c(n, -1);
  for (long r = 1; r <= bound; ++r) {
    std::fill(c.begin(), c.end(), -r);
    for (;;) {
      bool on_shell = false;
      for (std::size_t i = 0; i < n; ++i)
        if (c[i] == r || c[i] == -r) on_shell = true;
      if (on_shell) {
        std::vector<mpq_class> coords(n);
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t i = 0; i < n; ++i)
            if (c[i] != 0) coords[j] += c[i] * rows.at(i, j);
        AlgebraElement x = element_of_order_coords(o, coords);
        if (is_invertible(x)) {
          mpq_class ix = lattice_index(principal_order_lattice_raw(o, x), std_lat);
          bool ok = true;
          for (long p : support)
            if (qval(ix, p) != qval(target, p)) ok = false;
          if (ok) return x;
        }
      }
      std::size_t k = 0;
      while (k < n && c[k] == r) c[k++] = -r;
      if (k == n) break;
      ++c[k];
    }
  }
  return std::nullopt;
}

inline AlgebraElement local_generator(const OrderLattice& l, long bound) {
  auto g = find_local_generator(l, bound);
  if (!g)
    throw ValidationError("NotLocallyFree",
                          "no local generator found within the search bound");
  return *g;
}

/* Multiplies the component values of g into the idele at the given primes. */
inline void fold_generator(Idele& rep, const AlgebraElement& g, const std::vector<long>& primes) {
  for (long p : primes)
    for (std::size_t i = 0; i < g.parts.size(); ++i) {
      auto key = std::make_pair(i, p);
      auto it = rep.finite.find(key);
      if (it == rep.finite.end())
        rep.finite.emplace(key, g.parts[i]);
      else
        it->second = component_mul(it->second, g.parts[i]);
    }
}

}  // namespace detail

/* K0Rel class of a formal difference of locally free lattices. Commutative
 * components go through a generator search; components with a noncommutative
 * factor are only supported when both sides are the standard lattice (no
 * noncommutative inverse search is attempted). */
inline IdeleClass swan_to_class(const SwanElement& s, mpfr_prec_t prec = 128, long bound = 50) {
  validate_swan(s);
  const Order& o = *s.P[0].order;
  const SemisimpleAlgebra& A = *o.A;
  bool commutative = true;
  for (const auto& comp : A.components)
    if (comp.kind != ComponentKind::Field) commutative = false;

  Idele rep = trivial_idele(A);
  OrderLattice unit = unit_order_lattice(o);
  for (std::size_t t = 0; t < s.P.size(); ++t) {
    if (commutative) {
      AlgebraElement gq = detail::local_generator(s.Q[t], bound);
      AlgebraElement gp = detail::local_generator(s.P[t], bound);
      detail::fold_generator(rep, gq, detail::lattice_support_primes(s.Q[t]));
      detail::fold_generator(rep, inverse(gp), detail::lattice_support_primes(s.P[t]));
    } else if (!(s.P[t] == unit) || !(s.Q[t] == unit)) {
      throw UnsupportedError("UnsupportedComponent",
                             "noncommutative inverse search is not supported");
    }
    for (unsigned v = 0; v < rep.infinite.size(); ++v)
      rep.infinite[v] = infinite_mul(s.phi[t][v], rep.infinite[v], A, v);
  }
  return k0rel_class(rep, o, prec);
}

/* Rank and Steinitz class of a list of locally free lattices over an order in
 * a commutative algebra. The Steinitz class is the Cl class of the product of
 * local-generator ideles. */
inline std::pair<std::size_t, IdeleClass> k0_class(const std::vector<OrderLattice>& mods,
                                                   const Order& o, mpfr_prec_t prec = 128,
                                                   long bound = 50) {
  for (const auto& comp : o.A->components)
    if (comp.kind != ComponentKind::Field)
      throw UnsupportedError("UnsupportedComponent",
                             "ranks and Steinitz classes need a commutative algebra");
  for (const auto& l : mods)
    if (l.order != &o) throw ValidationError("OrderMismatch", "lattice over a different order");
  Idele rep = trivial_idele(*o.A);
  for (const auto& l : mods) {
    AlgebraElement g = detail::local_generator(l, bound);
    detail::fold_generator(rep, g, detail::lattice_support_primes(l));
  }
  return {mods.size(), frohlich_class(rep, o, prec)};
}

/* ------------------------------ boundary map ------------------------------ */

namespace detail {

inline int center_sign_at(const FieldElement& x, unsigned place) {
  return embed(x, place, 256).re.sign();
}

inline std::string sign_pattern(const std::vector<int>& s) {
  std::string out;
  for (int v : s) out += v < 0 ? '-' : '+';
  return out;
}

/* Multiplier making lambda*y positive at every real place of the center.
 * For the rationals this is a sign; for real quadratic centers a small box
 * of integral elements a + b*theta is scanned. */
inline std::optional<FieldElement> find_sign_multiplier(const NumberField& K,
                                                        const std::vector<int>& want) {
  if (K.is_rationals())
    return FieldElement::of(K, want[0] < 0 ? -1 : 1);
  for (long a = -20; a <= 20; ++a)
    for (long b = -20; b <= 20; ++b) {
      if (a == 0 && b == 0) continue;
      FieldElement lam(K, {mpq_class(a), mpq_class(b)});
      bool ok = true;
      for (unsigned p = 0; p < K.n_real; ++p)
        if (center_sign_at(lam, p) != want[p]) ok = false;
      if (ok) return lam;
    }
  return std::nullopt;
}

inline std::vector<long> element_support_primes(const FieldElement& x) {
  std::set<long> s;
  mpq_class n = norm(x);
  for (const auto& [p, e] : factor(abs(n.get_num()))) s.insert(p.get_si());
  for (const auto& [p, e] : factor(n.get_den())) s.insert(p.get_si());
  return {s.begin(), s.end()};
}

}  // namespace detail

/* Boundary of an archimedean tuple y: the CenterForm class of the idele that
 * is lambda at the finite places and lambda*y at the infinite ones, where
 * lambda straightens the signs of y at the ramified real places. A caller may
 * force the multipliers; a forced lambda with the wrong signs is rejected. */
inline IdeleClass extended_boundary(
    const std::vector<CenterValue>& y, const Order& o, mpfr_prec_t prec = 128,
    const std::optional<std::vector<FieldElement>>& forced_lambda = std::nullopt) {
  const SemisimpleAlgebra& A = *o.A;
  if (y.size() != infinite_place_count(A))
    throw ValidationError("DimensionMismatch", "wrong number of archimedean values");
  if (forced_lambda && forced_lambda->size() != A.components.size())
    throw ValidationError("DimensionMismatch", "one multiplier per component required");

  CenterIdele psi;
  psi.A = &A;
  psi.infinite.resize(y.size());
  for (std::size_t i = 0; i < A.components.size(); ++i) {
    const SimpleComponent& comp = A.components[i];
    const NumberField& K = *comp.center;
    bool definite = comp.kind == ComponentKind::Quaternion && comp.ramified_at_infinity();

    // flat places owned by this component, and the signs of y there
    std::vector<unsigned> flat;
    for (unsigned v = 0; v < y.size(); ++v)
      if (infinite_place_owner(A, v).first == i) flat.push_back(v);
    std::vector<int> ysign;
    for (unsigned p = 0; p < K.n_real; ++p) {
      const CenterValue& val = y[flat[p]];
      if (val.is_exact) {
        if (val.exact.F != &K)
          throw ValidationError("InvalidIdele", "value lies in the wrong center");
        if (val.exact.is_zero()) throw ValidationError("InvalidIdele", "zero archimedean value");
        ysign.push_back(detail::center_sign_at(val.exact, p));
      } else {
        if (val.numeric.im.sign() != 0)
          throw ValidationError("InvalidIdele", "value at a real place must be real");
        if (val.numeric.re.sign() == 0)
          throw ValidationError("InvalidIdele", "zero archimedean value");
        ysign.push_back(val.numeric.re.sign());
      }
    }

    FieldElement lam = FieldElement::of(K, 1);
    if (forced_lambda) {
      lam = (*forced_lambda)[i];
      if (lam.F != &K) throw ValidationError("InvalidIdele", "multiplier in the wrong center");
      if (lam.is_zero()) throw ValidationError("InvalidIdele", "zero multiplier");
      if (definite)
        for (unsigned p = 0; p < K.n_real; ++p)
          if (detail::center_sign_at(lam, p) * ysign[p] <= 0)
            throw ValidationError("NoLambdaFound",
                                  "forced multiplier does not straighten sign pattern " +
                                      detail::sign_pattern(ysign));
    } else if (definite) {
      auto found = detail::find_sign_multiplier(K, ysign);
      if (!found)
        throw ValidationError("NoLambdaFound", "no multiplier straightens sign pattern " +
                                                   detail::sign_pattern(ysign));
      lam = *found;
    }

    for (long p : detail::element_support_primes(lam))
      psi.finite.emplace(std::make_pair(i, p), lam);
    for (unsigned local = 0; local < flat.size(); ++local) {
      const CenterValue& val = y[flat[local]];
      if (val.is_exact)
        psi.infinite[flat[local]] = exact_center(lam * val.exact);
      else {
        mpfr_prec_t vp = std::max<mpfr_prec_t>(prec, val.numeric.re.prec());
        psi.infinite[flat[local]] = numeric_center(embed(lam, local, vp) * val.numeric);
      }
    }
  }
  return center_class(psi, o, prec);
}

}  // namespace idelek
