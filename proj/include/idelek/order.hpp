#pragma once

#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "idelek/algebra.hpp"
#include "idelek/lattice.hpp"
#include "idelek/matrix.hpp"
#include "idelek/number_field.hpp"
#include "idelek/numeric.hpp"

namespace idelek {

/* An order: a subring of the algebra that is a full Z-lattice.  The basis is
 * stored as algebra elements; products of basis elements are cached as an
 * integer 3-tensor so lattice stability checks stay in integer arithmetic. */
struct Order {
  const SemisimpleAlgebra* A = nullptr;
  std::vector<AlgebraElement> basis;
  RatMatrix coord_matrix;   // row i = canonical rational coordinates of basis[i]
  RatMatrix coord_inverse;  // canonical coords -> order coords, as a right factor
  std::vector<IntMatrix> structure;  // structure[i].at(j,k): basis[i]*basis[j] in the basis

  std::size_t dim() const { return basis.size(); }
};

inline std::vector<mpq_class> row_times(const std::vector<mpq_class>& v, const RatMatrix& m) {
  if (v.size() != m.rows) throw ValidationError("DimensionMismatch", "row_times");
  std::vector<mpq_class> out(m.cols);
  for (std::size_t i = 0; i < m.rows; ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < m.cols; ++j) out[j] += v[i] * m.at(i, j);
  }
  return out;
}

inline std::vector<mpq_class> order_coords(const Order& o, const AlgebraElement& x) {
  return row_times(algebra_coords(x), o.coord_inverse);
}

inline AlgebraElement element_of_order_coords(const Order& o, const std::vector<mpq_class>& c) {
  return algebra_from_coords(*o.A, row_times(c, o.coord_matrix));
}

/* Product of two elements given in order coordinates, via the structure tensor. */
inline std::vector<mpq_class> order_coords_mul(const Order& o, const std::vector<mpq_class>& a,
                                               const std::vector<mpq_class>& b) {
  std::size_t n = o.dim();
  std::vector<mpq_class> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (b[j] == 0) continue;
      mpq_class c = a[i] * b[j];
      for (std::size_t k = 0; k < n; ++k) {
        const mpz_class& s = o.structure[i].at(j, k);
        if (s != 0) out[k] += c * s;
      }
    }
  }
  return out;
}

inline Order make_order(const SemisimpleAlgebra& a, std::vector<AlgebraElement> basis) {
  std::size_t n = a.dim();
  if (basis.size() != n)
    throw ValidationError("InvalidOrder", "order basis must have as many elements as dim A");
  Order o;
  o.A = &a;
  o.basis = std::move(basis);
  o.coord_matrix = RatMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (o.basis[i].A != &a) throw ValidationError("InvalidOrder", "basis element of wrong algebra");
    auto c = algebra_coords(o.basis[i]);
    for (std::size_t j = 0; j < n; ++j) o.coord_matrix.at(i, j) = c[j];
  }
  if (det(o.coord_matrix) == 0)
    throw ValidationError("InvalidOrder", "order basis does not span the algebra");
  o.coord_inverse = inverse(o.coord_matrix);

  auto c1 = order_coords(o, algebra_one(a));
  for (const auto& q : c1)
    if (q.get_den() != 1)
      throw ValidationError("InvalidOrder", "order does not contain 1");

  o.structure.assign(n, IntMatrix(n, n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto prod = order_coords(o, o.basis[i] * o.basis[j]);
      for (std::size_t k = 0; k < n; ++k) {
        if (prod[k].get_den() != 1)
          throw ValidationError("InvalidOrder", "order is not closed under multiplication");
        o.structure[i].at(j, k) = prod[k].get_num();
      }
    }
  return o;
}

/* Ring of integers in each component; defined when every component is a field. */
inline Order maximal_order(const SemisimpleAlgebra& a) {
  std::vector<AlgebraElement> basis;
  for (std::size_t i = 0; i < a.components.size(); ++i) {
    const SimpleComponent& c = a.components[i];
    if (c.kind != ComponentKind::Field)
      throw UnsupportedError("UnsupportedComponent",
                             "built-in maximal order requires field components");
    const NumberField& k = *c.center;
    for (std::size_t r = 0; r < k.deg; ++r) {
      std::vector<mpq_class> coords(k.deg);
      for (std::size_t j = 0; j < k.deg; ++j) coords[j] = k.basis.at(r, j);
      AlgebraElement e = algebra_zero(a);
      e.parts[i].entries[0] = FieldElement{k, coords};
      basis.push_back(e);
    }
  }
  return make_order(a, std::move(basis));
}

/* The maximal order 1, i, j, (1+i+j+k)/2 of the definite rational quaternions. */
inline Order hurwitz_order(const SemisimpleAlgebra& a) {
  if (a.components.size() != 1 || a.components[0].kind != ComponentKind::Quaternion ||
      a.components[0].qa != -1 || a.components[0].qb != -1)
    throw ValidationError("InvalidOrder", "built-in hurwitz order requires Quaternion(-1,-1)");
  auto q = [&](long x, long y, long z, long w, long den) {
    AlgebraElement e = algebra_zero(a);
    e.parts[0].quat = {mpq_class(x, den), mpq_class(y, den), mpq_class(z, den),
                       mpq_class(w, den)};
    for (auto& v : e.parts[0].quat) v.canonicalize();
    return e;
  };
  return make_order(a, {q(1, 0, 0, 0, 1), q(0, 1, 0, 0, 1), q(0, 0, 1, 0, 1), q(1, 1, 1, 1, 2)});
}

/* A full lattice in A, in order coordinates, stable under right multiplication
 * by the order (so it is a right module over it). */
struct OrderLattice {
  const Order* order = nullptr;
  ZLattice lat;

  bool operator==(const OrderLattice& o) const { return order == o.order && lat == o.lat; }
};

inline OrderLattice order_lattice(const Order& o, ZLattice lat) {
  if (lat.dim != o.dim()) throw ValidationError("DimensionMismatch", "order_lattice");
  std::size_t n = o.dim();
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<mpq_class> v(n);
    for (std::size_t j = 0; j < n; ++j) {
      v[j] = mpq_class(lat.basis.at(r, j), lat.den);
      v[j].canonicalize();
    }
    for (std::size_t bi = 0; bi < n; ++bi) {
      std::vector<mpq_class> e(n);
      e[bi] = 1;
      if (!lattice_contains(lat, order_coords_mul(o, v, e)))
        throw ValidationError("NotStable", "lattice is not a right module over the order");
    }
  }
  return OrderLattice{&o, std::move(lat)};
}

inline OrderLattice unit_order_lattice(const Order& o) {
  return OrderLattice{&o, ZLattice::standard(o.dim())};
}

/* Generalized index [order : L] as a positive rational. */
inline mpq_class order_lattice_index(const OrderLattice& l) {
  return lattice_index(l.lat, ZLattice::standard(l.order->dim()));
}

/* Lattice x * order for invertible x, in order coordinates. */
inline ZLattice principal_order_lattice_raw(const Order& o, const AlgebraElement& x) {
  std::size_t n = o.dim();
  auto cx = order_coords(o, x);
  RatMatrix rows(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<mpq_class> e(n);
    e[j] = 1;
    auto prod = order_coords_mul(o, cx, e);
    for (std::size_t k = 0; k < n; ++k) rows.at(j, k) = prod[k];
  }
  return ZLattice::from_rat_rows(rows);
}

inline bool coords_p_integral(const std::vector<mpq_class>& c, long p) {
  for (const auto& q : c)
    if (zval(q.get_den(), p) != 0) return false;
  return true;
}

/* Local unit test at p: x and x^-1 both p-integral in the order.  A second
 * criterion (p-integrality plus unit reduced norm above p, valid for maximal
 * orders) is evaluated independently; a mismatch is surfaced rather than
 * resolved, since it signals a non-maximal order outside the certified scope. */
inline bool is_local_unit(const AlgebraElement& x, long p, const Order& o) {
  AlgebraElement xi = inverse(x);
  auto cx = order_coords(o, x);
  bool contained = coords_p_integral(cx, p);
  bool crit_containment = contained && coords_p_integral(order_coords(o, xi), p);

  bool crit_norm = contained;
  if (crit_norm) {
    CenterElement nr = reduced_norm(x);
    for (std::size_t i = 0; i < o.A->components.size() && crit_norm; ++i) {
      const NumberField& k = *o.A->components[i].center;
      const FieldElement& v = nr.parts[i];
      if (k.is_rationals()) {
        crit_norm = qval(v.c[0], p) == 0;
      } else {
        for (const auto& pr : factor_prime(k, p))
          if (element_valuation(v, pr) != 0) {
            crit_norm = false;
            break;
          }
      }
    }
  }
  if (crit_containment != crit_norm)
    throw ValidationError("CriteriaDisagree",
                          "containment and reduced-norm local unit criteria disagree at p=" +
                              std::to_string(p));
  return crit_containment;
}

}  // namespace idelek
