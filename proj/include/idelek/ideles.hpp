#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "idelek/bigfloat.hpp"
#include "idelek/order.hpp"

namespace idelek {

/* ----------------------------- infinite parts ----------------------------- */

/* Value of an idele at one archimedean place of the center: either an exact
 * element of the component (interpreted through the place's embedding) or a
 * numeric complex/real value at a stated precision. */
struct InfiniteValue {
  bool is_exact = true;
  ComponentElement exact;
  BigComplex numeric;
};

inline InfiniteValue exact_inf(ComponentElement v) {
  InfiniteValue x;
  x.exact = std::move(v);
  return x;
}

inline InfiniteValue numeric_inf(BigComplex z) {
  InfiniteValue x;
  x.is_exact = false;
  x.numeric = std::move(z);
  return x;
}

inline unsigned infinite_place_count(const SemisimpleAlgebra& a) {
  unsigned n = 0;
  for (const auto& c : a.components) n += place_count(*c.center);
  return n;
}

/* (component index, place index within that component's center). */
inline std::pair<std::size_t, unsigned> infinite_place_owner(const SemisimpleAlgebra& a,
                                                             unsigned idx) {
  for (std::size_t i = 0; i < a.components.size(); ++i) {
    unsigned n = place_count(*a.components[i].center);
    if (idx < n) return {i, idx};
    idx -= n;
  }
  throw ValidationError("ValidationError", "infinite place index out of range");
}

/* If the element is central, its value as an element of the component center. */
inline std::optional<FieldElement> central_value(const ComponentElement& x) {
  const SimpleComponent& c = *x.comp;
  switch (c.kind) {
    case ComponentKind::Field:
      return x.entries[0];
    case ComponentKind::Matrix: {
      for (std::size_t i = 0; i < c.n; ++i)
        for (std::size_t j = 0; j < c.n; ++j) {
          const FieldElement& e = x.entries[i * c.n + j];
          if (i != j && !e.is_zero()) return std::nullopt;
          if (i == j && !(e == x.entries[0])) return std::nullopt;
        }
      return x.entries[0];
    }
    case ComponentKind::Quaternion:
      if (x.quat[1] != 0 || x.quat[2] != 0 || x.quat[3] != 0) return std::nullopt;
      return FieldElement::of(*c.center, x.quat[0]);
  }
  return std::nullopt;
}

/* Numeric value of an exact infinite entry at its place. */
inline BigComplex embed_infinite(const ComponentElement& x, unsigned place, mpfr_prec_t prec) {
  auto cv = central_value(x);
  if (!cv)
    throw UnsupportedError("UnsupportedComponent",
                           "numeric evaluation of a non-central infinite component");
  return embed(*cv, place, prec);
}

/* -------------------------------- ideles --------------------------------- */

/* Finite places are keyed by rational primes; the stored global element is the
 * local component at every prime of the center above p.  Unlisted places carry
 * the component 1.  Infinite places are listed flat across components. */
struct Idele {
  const SemisimpleAlgebra* A = nullptr;
  std::map<std::pair<std::size_t, long>, ComponentElement> finite;
  std::vector<InfiniteValue> infinite;
};

inline Idele trivial_idele(const SemisimpleAlgebra& a) {
  Idele x;
  x.A = &a;
  for (unsigned v = 0; v < infinite_place_count(a); ++v) {
    std::size_t ci = infinite_place_owner(a, v).first;
    x.infinite.push_back(exact_inf(component_one(a.components[ci])));
  }
  return x;
}

inline bool component_invertible(const ComponentElement& x) {
  return !component_reduced_norm(x).is_zero();
}

inline void validate_idele(const Idele& a) {
  if (!a.A) throw ValidationError("InvalidIdele", "idele has no algebra");
  for (const auto& [key, v] : a.finite) {
    auto [ci, p] = key;
    if (ci >= a.A->components.size())
      throw ValidationError("InvalidIdele", "finite component index out of range");
    if (p < 2 || !is_prime(p))
      throw ValidationError("InvalidIdele", "finite place key is not a prime");
    if (v.comp != &a.A->components[ci])
      throw ValidationError("InvalidIdele", "finite value belongs to the wrong component");
    if (!component_invertible(v))
      throw ValidationError("InvalidIdele", "finite component is not invertible");
  }
  if (a.infinite.size() != infinite_place_count(*a.A))
    throw ValidationError("InvalidIdele", "wrong number of infinite components");
  for (unsigned v = 0; v < a.infinite.size(); ++v) {
    auto [ci, local] = infinite_place_owner(*a.A, v);
    const InfiniteValue& iv = a.infinite[v];
    if (iv.is_exact) {
      if (iv.exact.comp != &a.A->components[ci])
        throw ValidationError("InvalidIdele", "infinite value belongs to the wrong component");
      if (!component_invertible(iv.exact))
        throw ValidationError("InvalidIdele", "infinite component is not invertible");
    } else {
      if (iv.numeric.abs2().is_zero())
        throw ValidationError("InvalidIdele", "infinite component is zero");
      if (local < a.A->components[ci].center->n_real && !iv.numeric.im.is_zero())
        throw ValidationError("InvalidIdele", "numeric value at a real place must be real");
    }
  }
}

/* x placed in component ci, with 1 in every other component. */
inline AlgebraElement embed_component(const SemisimpleAlgebra& a, std::size_t ci,
                                      ComponentElement x) {
  AlgebraElement e = algebra_one(a);
  e.parts[ci] = std::move(x);
  return e;
}

inline InfiniteValue infinite_mul(const InfiniteValue& x, const InfiniteValue& y,
                                  const SemisimpleAlgebra& a, unsigned flat_index) {
  if (x.is_exact && y.is_exact) return exact_inf(component_mul(x.exact, y.exact));
  unsigned local = infinite_place_owner(a, flat_index).second;
  mpfr_prec_t prec = std::max<mpfr_prec_t>(x.is_exact ? 0 : x.numeric.re.prec(),
                                           y.is_exact ? 0 : y.numeric.re.prec());
  BigComplex xv = x.is_exact ? embed_infinite(x.exact, local, prec) : x.numeric;
  BigComplex yv = y.is_exact ? embed_infinite(y.exact, local, prec) : y.numeric;
  return numeric_inf(xv * yv);
}

inline InfiniteValue infinite_inverse(const InfiniteValue& x) {
  if (x.is_exact) return exact_inf(component_inverse(x.exact));
  BigComplex one(x.numeric.re.prec());
  one.re = BigFloat::of(1, x.numeric.re.prec());
  return numeric_inf(one / x.numeric);
}

inline Idele idele_mul(const Idele& a, const Idele& b) {
  if (a.A != b.A) throw ValidationError("InvalidIdele", "idele product across algebras");
  Idele r;
  r.A = a.A;
  r.finite = a.finite;
  for (const auto& [key, v] : b.finite) {
    auto it = r.finite.find(key);
    if (it == r.finite.end())
      r.finite.emplace(key, v);
    else
      it->second = component_mul(it->second, v);
  }
  for (unsigned i = 0; i < a.infinite.size(); ++i)
    r.infinite.push_back(infinite_mul(a.infinite[i], b.infinite[i], *a.A, i));
  return r;
}

inline Idele idele_inverse(const Idele& a) {
  Idele r;
  r.A = a.A;
  for (const auto& [key, v] : a.finite) r.finite.emplace(key, component_inverse(v));
  for (const auto& iv : a.infinite) r.infinite.push_back(infinite_inverse(iv));
  return r;
}

inline bool is_unit_finite(const Idele& a, const Order& o) {
  validate_idele(a);
  for (const auto& [key, v] : a.finite)
    if (!is_local_unit(embed_component(*a.A, key.first, v), key.second, o)) return false;
  for (unsigned i = 0; i < a.infinite.size(); ++i) {
    const InfiniteValue& iv = a.infinite[i];
    if (iv.is_exact) {
      std::size_t ci = infinite_place_owner(*a.A, i).first;
      if (!(iv.exact == component_one(a.A->components[ci]))) return false;
    } else {
      if (!(iv.numeric.re == BigFloat::of(1, iv.numeric.re.prec())) || !iv.numeric.im.is_zero())
        return false;
    }
  }
  return true;
}

/* Reduced norm of a numeric scalar value in the given component. */
inline BigComplex numeric_reduced_norm(const BigComplex& z, const SimpleComponent& c) {
  switch (c.kind) {
    case ComponentKind::Field:
      return z;
    case ComponentKind::Matrix: {
      BigComplex r = z;
      for (std::size_t i = 1; i < c.n; ++i) r = r * z;
      return r;
    }
    case ComponentKind::Quaternion:
      return z * z;
  }
  return z;
}

inline bool is_norm_one_idele(const Idele& a, long tol_bits = 64) {
  for (const auto& [key, v] : a.finite) {
    if (!component_invertible(v))
      throw ValidationError("NonInvertibleComponent", "norm-one test on singular component");
    FieldElement nr = component_reduced_norm(v);
    if (!(nr == FieldElement::of(*v.comp->center, 1))) return false;
  }
  for (unsigned i = 0; i < a.infinite.size(); ++i) {
    const InfiniteValue& iv = a.infinite[i];
    const SimpleComponent& c = a.A->components[infinite_place_owner(*a.A, i).first];
    if (iv.is_exact) {
      if (!component_invertible(iv.exact))
        throw ValidationError("NonInvertibleComponent", "norm-one test on singular component");
      if (!(component_reduced_norm(iv.exact) == FieldElement::of(*c.center, 1))) return false;
    } else {
      if (iv.numeric.abs2().is_zero())
        throw ValidationError("NonInvertibleComponent", "norm-one test on zero component");
      BigComplex nr = numeric_reduced_norm(iv.numeric, c);
      mpfr_prec_t prec = nr.re.prec();
      BigFloat one = BigFloat::of(1, prec);
      BigFloat d2 = (nr.re - one) * (nr.re - one) + nr.im * nr.im;
      BigFloat tol = pow2(-2 * tol_bits, prec);
      if (d2 > tol) return false;
    }
  }
  return true;
}

/* ------------------------- the lattice of an idele ------------------------ */

namespace detail {

/* Residue of a rational with p-free denominator modulo m (a power of p). */
inline mpz_class rational_mod(const mpq_class& q, const mpz_class& m) {
  mpz_class den_inv;
  if (mpz_invert(den_inv.get_mpz_t(), q.get_den().get_mpz_t(), m.get_mpz_t()) == 0)
    throw ValidationError("InvalidIdele", "denominator not invertible in residue ring");
  mpz_class r = (q.get_num() * den_inv) % m;
  if (r < 0) r += m;
  return r;
}

}  // namespace detail

/* The unique full right lattice over the order agreeing with a_p * (order)
 * locally at every finite place.  Per support prime, an exponent k sandwiches
 * p^k(order) between the scaled copies; generators are assembled in the
 * quotient by D^2(order) with D the product of the p^k, then rescaled. */
inline OrderLattice lattice_of_idele(const Idele& a, const Order& o) {
  validate_idele(a);
  if (a.A != o.A) throw ValidationError("InvalidIdele", "idele and order algebras differ");
  std::size_t n = o.dim();

  std::map<long, AlgebraElement> by_prime;
  for (const auto& [key, v] : a.finite) {
    auto [ci, p] = key;
    auto it = by_prime.find(p);
    if (it == by_prime.end()) it = by_prime.emplace(p, algebra_one(*a.A)).first;
    it->second.parts[ci] = component_mul(it->second.parts[ci], v);
  }

  struct LocalData {
    long k = 0;
    std::vector<std::vector<mpq_class>> gen_coords;  // order coords of a_p * basis[j]
  };
  std::map<long, LocalData> locals;

  for (const auto& [p, ap] : by_prime) {
    AlgebraElement api = inverse(ap);
    auto ca = order_coords(o, ap);
    auto ci = order_coords(o, api);

    long k = 0;
    CenterElement nr = reduced_norm(ap);
    for (const auto& v : nr.parts) {
      long vp = qval(norm(v), p);
      k = std::max(k, vp < 0 ? -vp : vp);
    }
    long dv = std::max(zval(denominator_lcm(ca), p), zval(denominator_lcm(ci), p));
    k += dv + 1;

    LocalData ld;
    for (;;) {
      bool ok = true;
      ld.gen_coords.clear();
      for (std::size_t j = 0; j < n && ok; ++j) {
        std::vector<mpq_class> e(n);
        e[j] = 1;
        auto fwd = order_coords_mul(o, ca, e);
        auto bwd = order_coords_mul(o, ci, e);
        if (zval(denominator_lcm(fwd), p) > k || zval(denominator_lcm(bwd), p) > k) ok = false;
        ld.gen_coords.push_back(std::move(fwd));
      }
      if (ok) break;
      ++k;  // unreachable with the bound above; kept as an exact guarantee
    }
    ld.k = k;
    locals.emplace(p, std::move(ld));
  }

  mpz_class d(1);
  for (const auto& [p, ld] : locals) d *= zpow(p, static_cast<unsigned long>(ld.k));
  if (locals.empty()) return unit_order_lattice(o);

  std::vector<std::vector<mpz_class>> rows;
  for (const auto& [p, ld] : locals) {
    mpz_class pk = zpow(p, static_cast<unsigned long>(ld.k));
    mpz_class p2k = pk * pk;
    mpz_class rest = (d / pk) * (d / pk);  // unit mod p^{2k}
    mpz_class rest_inv;
    mpz_invert(rest_inv.get_mpz_t(), rest.get_mpz_t(), p2k.get_mpz_t());
    for (const auto& w : ld.gen_coords) {
      std::vector<mpz_class> row(n);
      for (std::size_t t = 0; t < n; ++t) {
        mpz_class r = detail::rational_mod(w[t] * pk, p2k);
        row[t] = rest * ((r * rest_inv) % p2k);
      }
      rows.push_back(std::move(row));
    }
  }
  mpz_class d2 = d * d;
  IntMatrix gens(rows.size() + n, n);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) gens.at(i, j) = rows[i][j];
  for (std::size_t j = 0; j < n; ++j) gens.at(rows.size() + j, j) = d2;

  ZLattice scaled = ZLattice::from_int_rows(gens);
  mpq_class inv_d(1, d);
  inv_d.canonicalize();
  return order_lattice(o, lattice_scale(scaled, inv_d));
}

/* ----------------------------- Swan elements ------------------------------ */

/* Formal generator [P, phi, Q]: a pair of direct sums of full lattices and an
 * invertible real-point map between them, stored blockwise per summand. */
struct SwanElement {
  std::vector<OrderLattice> P;
  std::vector<std::vector<InfiniteValue>> phi;
  std::vector<OrderLattice> Q;
};

inline void validate_swan(const SwanElement& s) {
  if (s.P.size() != s.Q.size() || s.P.size() != s.phi.size())
    throw ValidationError("DimensionMismatch", "swan element summand counts differ");
  if (s.P.empty()) throw ValidationError("DimensionMismatch", "empty swan element");
  const Order* o = s.P[0].order;
  for (const auto& l : s.P)
    if (l.order != o) throw ValidationError("ValidationError", "swan lattices over mixed orders");
  for (const auto& l : s.Q)
    if (l.order != o) throw ValidationError("ValidationError", "swan lattices over mixed orders");
  for (const auto& block : s.phi) {
    if (block.size() != infinite_place_count(*o->A))
      throw ValidationError("DimensionMismatch", "swan map has wrong number of places");
    for (unsigned i = 0; i < block.size(); ++i) {
      const InfiniteValue& iv = block[i];
      if (iv.is_exact) {
        if (!component_invertible(iv.exact))
          throw ValidationError("ValidationError", "swan map not invertible at a place");
      } else if (iv.numeric.abs2().is_zero()) {
        throw ValidationError("ValidationError", "swan map not invertible at a place");
      }
    }
  }
}

inline SwanElement swan_zero(const Order& o) {
  SwanElement s;
  s.P = {unit_order_lattice(o)};
  s.Q = {unit_order_lattice(o)};
  s.phi = {trivial_idele(*o.A).infinite};
  return s;
}

/* theta(a) = [order, a_infinity, a*order]. */
inline SwanElement theta(const Idele& a, const Order& o) {
  SwanElement s;
  s.P = {unit_order_lattice(o)};
  s.phi = {a.infinite};
  s.Q = {lattice_of_idele(a, o)};
  validate_swan(s);
  return s;
}

/* Relation A shape: direct sum. */
inline SwanElement swan_add(const SwanElement& s1, const SwanElement& s2) {
  validate_swan(s1);
  validate_swan(s2);
  if (s1.P[0].order != s2.P[0].order)
    throw ValidationError("ValidationError", "swan sum over mixed orders");
  SwanElement s = s1;
  s.P.insert(s.P.end(), s2.P.begin(), s2.P.end());
  s.Q.insert(s.Q.end(), s2.Q.begin(), s2.Q.end());
  s.phi.insert(s.phi.end(), s2.phi.begin(), s2.phi.end());
  return s;
}

/* Relation B shape: composition through an identical middle object. */
inline SwanElement swan_compose(const SwanElement& s1, const SwanElement& s2) {
  validate_swan(s1);
  validate_swan(s2);
  if (s1.Q.size() != s2.P.size())
    throw ValidationError("MiddleMismatch", "swan composition ranks differ");
  for (std::size_t t = 0; t < s1.Q.size(); ++t)
    if (!(s1.Q[t] == s2.P[t]))
      throw ValidationError("MiddleMismatch", "swan composition middle objects differ");
  SwanElement s;
  s.P = s1.P;
  s.Q = s2.Q;
  const SemisimpleAlgebra& a = *s1.P[0].order->A;
  for (std::size_t t = 0; t < s1.phi.size(); ++t) {
    std::vector<InfiniteValue> block;
    for (unsigned i = 0; i < s1.phi[t].size(); ++i)
      block.push_back(infinite_mul(s2.phi[t][i], s1.phi[t][i], a, i));
    s.phi.push_back(std::move(block));
  }
  return s;
}

}  // namespace idelek
