#pragma once

#include <gmpxx.h>

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "idelek/errors.hpp"
#include "idelek/number_field.hpp"
#include "idelek/numeric.hpp"

namespace idelek {

/* ------------------------- Hilbert symbols over Q ------------------------- */

namespace detail {

/* residue of a p-unit rational mod m (m = p or 8), in [0, m) */
inline long punit_residue(const mpq_class& t, long m) {
  mpz_class num = t.get_num() % m, den = t.get_den() % m;
  long n = ((num.get_si() % m) + m) % m;
  long d = ((den.get_si() % m) + m) % m;
  // invert d mod m by scan (m is tiny)
  for (long k = 1; k < m; ++k)
    if (k * d % m == 1) return n * k % m;
  throw ValidationError("ValidationError", "residue not a unit");
}

}  // namespace detail

/* Hilbert symbol (a,b)_p for nonzero rationals, p a finite prime. */
inline int hilbert_symbol(const mpq_class& a, const mpq_class& b, const mpz_class& p) {
  if (a == 0 || b == 0)
    throw ValidationError("ValidationError", "hilbert symbol needs nonzero arguments");
  if (p < 2 || !is_prime(p)) throw ValidationError("ValidationError", "p must be prime");
  long alpha = qval(a, p), beta = qval(b, p);
  mpq_class u = a / qpow(mpq_class(p), alpha);
  mpq_class v = b / qpow(mpq_class(p), beta);
  if (p == 2) {
    auto eps = [](long r) { return ((r - 1) / 2) % 2; };      // r mod 8, odd
    auto omega = [](long r) { return ((r * r - 1) / 8) % 2; };
    long ru = detail::punit_residue(u, 8), rv = detail::punit_residue(v, 8);
    long e = eps(ru) * eps(rv) + alpha * omega(rv) + beta * omega(ru);
    return (e % 2 != 0) ? -1 : 1;
  }
  int s = 1;
  if ((alpha % 2 != 0) && (beta % 2 != 0) && ((p - 1) / 2) % 2 == 1) s = -s;
  if (beta % 2 != 0)
    s *= mpz_legendre(u.get_num().get_mpz_t(), p.get_mpz_t()) *
         mpz_legendre(u.get_den().get_mpz_t(), p.get_mpz_t());
  if (alpha % 2 != 0)
    s *= mpz_legendre(v.get_num().get_mpz_t(), p.get_mpz_t()) *
         mpz_legendre(v.get_den().get_mpz_t(), p.get_mpz_t());
  return s;
}

inline int hilbert_symbol_at_infinity(const mpq_class& a, const mpq_class& b) {
  return (a < 0 && b < 0) ? -1 : 1;
}

/* ------------------------------ components ------------------------------ */

enum class ComponentKind { Field, Matrix, Quaternion };

constexpr unsigned kMaxMatrixSize = 4;

struct SimpleComponent {
  ComponentKind kind = ComponentKind::Field;
  std::shared_ptr<const NumberField> center;  // Field: itself; Matrix: base; Quaternion: Q
  unsigned n = 1;                             // matrix size
  mpq_class qa = 0, qb = 0;                   // quaternion parameters

  unsigned dim() const {
    switch (kind) {
      case ComponentKind::Field:
        return center->deg;
      case ComponentKind::Matrix:
        return n * n * center->deg;
      default:
        return 4;
    }
  }
  /* the definite case: ramified at the unique real place of Q */
  bool ramified_at_infinity() const {
    return kind == ComponentKind::Quaternion &&
           hilbert_symbol_at_infinity(qa, qb) == -1;
  }
};

inline SimpleComponent field_component(NumberField f) {
  SimpleComponent c;
  c.kind = ComponentKind::Field;
  c.center = std::make_shared<NumberField>(std::move(f));
  return c;
}

inline SimpleComponent matrix_component(unsigned n, NumberField base) {
  if (n < 1 || n > kMaxMatrixSize)
    throw UnsupportedError("UnsupportedComponent", "matrix size out of range");
  SimpleComponent c;
  c.kind = ComponentKind::Matrix;
  c.n = n;
  c.center = std::make_shared<NumberField>(std::move(base));
  return c;
}

inline SimpleComponent quaternion_component(const mpq_class& a, const mpq_class& b) {
  if (a == 0 || b == 0)
    throw ValidationError("ValidationError", "quaternion parameters must be nonzero");
  SimpleComponent c;
  c.kind = ComponentKind::Quaternion;
  c.center = std::make_shared<NumberField>(NumberField::rationals());
  c.qa = a;
  c.qb = b;
  return c;
}

/* finite primes p <= 100 where the quaternion algebra (a,b / Q) ramifies */
inline std::vector<mpz_class> quaternion_ramified_primes(const SimpleComponent& c) {
  if (c.kind != ComponentKind::Quaternion)
    throw ValidationError("ValidationError", "not a quaternion component");
  std::vector<mpz_class> out;
  for (long p : primes_upto(100))
    if (hilbert_symbol(c.qa, c.qb, p) == -1) out.push_back(p);
  return out;
}

struct SemisimpleAlgebra {
  std::vector<SimpleComponent> components;

  unsigned dim() const {
    unsigned d = 0;
    for (const auto& c : components) d += c.dim();
    return d;
  }
  static SemisimpleAlgebra of(std::vector<SimpleComponent> comps) {
    if (comps.empty())
      throw ValidationError("ValidationError", "algebra needs at least one component");
    return {std::move(comps)};
  }
};

/* ------------------------------- elements ------------------------------- */

struct ComponentElement {
  const SimpleComponent* comp = nullptr;
  std::vector<FieldElement> entries;  // Field: 1 entry; Matrix: n*n row-major
  std::vector<mpq_class> quat;        // Quaternion: (x, y, z, w)

  bool operator==(const ComponentElement& o) const {
    return entries == o.entries && quat == o.quat;
  }
  bool is_zero() const {
    for (const auto& e : entries)
      if (!e.is_zero()) return false;
    for (const auto& q : quat)
      if (q != 0) return false;
    return true;
  }
};

inline ComponentElement component_zero(const SimpleComponent& c) {
  ComponentElement e;
  e.comp = &c;
  if (c.kind == ComponentKind::Quaternion) {
    e.quat.assign(4, mpq_class(0));
  } else {
    unsigned cnt = (c.kind == ComponentKind::Field) ? 1 : c.n * c.n;
    for (unsigned i = 0; i < cnt; ++i)
      e.entries.push_back(FieldElement::of(*c.center, 0));
  }
  return e;
}

inline ComponentElement component_one(const SimpleComponent& c) {
  ComponentElement e = component_zero(c);
  if (c.kind == ComponentKind::Quaternion) {
    e.quat[0] = 1;
  } else if (c.kind == ComponentKind::Field) {
    e.entries[0] = FieldElement::of(*c.center, 1);
  } else {
    for (unsigned i = 0; i < c.n; ++i)
      e.entries[i * c.n + i] = FieldElement::of(*c.center, 1);
  }
  return e;
}

inline ComponentElement component_mul(const ComponentElement& x, const ComponentElement& y) {
  const SimpleComponent& c = *x.comp;
  ComponentElement r = component_zero(c);
  switch (c.kind) {
    case ComponentKind::Field:
      r.entries[0] = x.entries[0] * y.entries[0];
      break;
    case ComponentKind::Matrix:
      for (unsigned i = 0; i < c.n; ++i)
        for (unsigned j = 0; j < c.n; ++j) {
          FieldElement acc = FieldElement::of(*c.center, 0);
          for (unsigned k = 0; k < c.n; ++k)
            acc = acc + x.entries[i * c.n + k] * y.entries[k * c.n + j];
          r.entries[i * c.n + j] = acc;
        }
      break;
    case ComponentKind::Quaternion: {
      const mpq_class &a = c.qa, &b = c.qb;
      const auto &p = x.quat, &q = y.quat;
      r.quat[0] = p[0] * q[0] + a * p[1] * q[1] + b * p[2] * q[2] - a * b * p[3] * q[3];
      r.quat[1] = p[0] * q[1] + p[1] * q[0] - b * p[2] * q[3] + b * p[3] * q[2];
      r.quat[2] = p[0] * q[2] + p[2] * q[0] + a * p[1] * q[3] - a * p[3] * q[1];
      r.quat[3] = p[0] * q[3] + p[3] * q[0] + p[1] * q[2] - p[2] * q[1];
      break;
    }
  }
  return r;
}

inline ComponentElement component_add(const ComponentElement& x, const ComponentElement& y) {
  ComponentElement r = x;
  for (std::size_t i = 0; i < r.entries.size(); ++i) r.entries[i] = r.entries[i] + y.entries[i];
  for (std::size_t i = 0; i < r.quat.size(); ++i) r.quat[i] += y.quat[i];
  return r;
}

inline ComponentElement component_scale(const ComponentElement& x, const mpq_class& s) {
  ComponentElement r = x;
  for (auto& e : r.entries) e = e * s;
  for (auto& q : r.quat) q *= s;
  return r;
}

/* determinant of the matrix entries by Laplace expansion (n <= 4) */
namespace detail {
inline FieldElement fmat_det(const NumberField& K, const std::vector<FieldElement>& m,
                             unsigned n) {
  if (n == 1) return m[0];
  FieldElement acc = FieldElement::of(K, 0);
  for (unsigned j = 0; j < n; ++j) {
    if (m[j].is_zero()) continue;
    std::vector<FieldElement> minor;
    for (unsigned r = 1; r < n; ++r)
      for (unsigned cidx = 0; cidx < n; ++cidx)
        if (cidx != j) minor.push_back(m[r * n + cidx]);
    FieldElement term = m[j] * fmat_det(K, minor, n - 1);
    acc = (j % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}
}  // namespace detail

/* reduced norm of one component, landing in its center */
inline FieldElement component_reduced_norm(const ComponentElement& x) {
  const SimpleComponent& c = *x.comp;
  switch (c.kind) {
    case ComponentKind::Field:
      return x.entries[0];
    case ComponentKind::Matrix:
      return detail::fmat_det(*c.center, x.entries, c.n);
    default: {
      const auto& q = x.quat;
      mpq_class nr =
          q[0] * q[0] - c.qa * q[1] * q[1] - c.qb * q[2] * q[2] + c.qa * c.qb * q[3] * q[3];
      return FieldElement::of(*c.center, nr);
    }
  }
}

inline ComponentElement component_inverse(const ComponentElement& x) {
  const SimpleComponent& c = *x.comp;
  switch (c.kind) {
    case ComponentKind::Field: {
      ComponentElement r = x;
      r.entries[0] = inverse(x.entries[0]);
      return r;
    }
    case ComponentKind::Quaternion: {
      mpq_class nr = component_reduced_norm(x).c[0];
      if (nr == 0) throw ValidationError("NotInvertible", "quaternion with zero norm");
      ComponentElement r = x;
      r.quat[0] = x.quat[0] / nr;
      for (int i = 1; i < 4; ++i) r.quat[i] = -x.quat[i] / nr;
      return r;
    }
    default: {
      // Gauss-Jordan over the base field
      const unsigned n = c.n;
      std::vector<FieldElement> m = x.entries;
      ComponentElement inv = component_one(c);
      std::vector<FieldElement>& w = inv.entries;
      for (unsigned col = 0; col < n; ++col) {
        unsigned piv = col;
        while (piv < n && m[piv * n + col].is_zero()) ++piv;
        if (piv == n) throw ValidationError("NotInvertible", "singular matrix component");
        if (piv != col)
          for (unsigned j = 0; j < n; ++j) {
            std::swap(m[piv * n + j], m[col * n + j]);
            std::swap(w[piv * n + j], w[col * n + j]);
          }
        FieldElement d = inverse(m[col * n + col]);
        for (unsigned j = 0; j < n; ++j) {
          m[col * n + j] = m[col * n + j] * d;
          w[col * n + j] = w[col * n + j] * d;
        }
        for (unsigned r = 0; r < n; ++r) {
          if (r == col || m[r * n + col].is_zero()) continue;
          FieldElement f = m[r * n + col];
          for (unsigned j = 0; j < n; ++j) {
            m[r * n + j] = m[r * n + j] - f * m[col * n + j];
            w[r * n + j] = w[r * n + j] - f * w[col * n + j];
          }
        }
      }
      return inv;
    }
  }
}

/* ------------------------- algebra-level elements ------------------------- */

struct AlgebraElement {
  const SemisimpleAlgebra* A = nullptr;
  std::vector<ComponentElement> parts;

  bool operator==(const AlgebraElement& o) const { return parts == o.parts; }
};

struct CenterElement {
  const SemisimpleAlgebra* A = nullptr;
  std::vector<FieldElement> parts;  // one per component, in that component's center

  bool operator==(const CenterElement& o) const { return parts == o.parts; }
};

inline AlgebraElement algebra_one(const SemisimpleAlgebra& A) {
  AlgebraElement e;
  e.A = &A;
  for (const auto& c : A.components) e.parts.push_back(component_one(c));
  return e;
}

inline AlgebraElement algebra_zero(const SemisimpleAlgebra& A) {
  AlgebraElement e;
  e.A = &A;
  for (const auto& c : A.components) e.parts.push_back(component_zero(c));
  return e;
}

inline AlgebraElement operator*(const AlgebraElement& x, const AlgebraElement& y) {
  AlgebraElement r;
  r.A = x.A;
  for (std::size_t i = 0; i < x.parts.size(); ++i)
    r.parts.push_back(component_mul(x.parts[i], y.parts[i]));
  return r;
}

inline AlgebraElement operator+(const AlgebraElement& x, const AlgebraElement& y) {
  AlgebraElement r;
  r.A = x.A;
  for (std::size_t i = 0; i < x.parts.size(); ++i)
    r.parts.push_back(component_add(x.parts[i], y.parts[i]));
  return r;
}

inline AlgebraElement inverse(const AlgebraElement& x) {
  AlgebraElement r;
  r.A = x.A;
  for (const auto& p : x.parts) r.parts.push_back(component_inverse(p));
  return r;
}

inline CenterElement reduced_norm(const AlgebraElement& x) {
  CenterElement c;
  c.A = x.A;
  for (const auto& p : x.parts) c.parts.push_back(component_reduced_norm(p));
  return c;
}

inline bool is_invertible(const AlgebraElement& x) {
  for (const auto& p : x.parts)
    if (component_reduced_norm(p).is_zero()) return false;
  return true;
}

inline bool is_norm_one(const AlgebraElement& x) {
  if (!is_invertible(x)) throw ValidationError("NotAUnit", "element is not invertible");
  for (const auto& p : x.parts) {
    FieldElement nr = component_reduced_norm(p);
    if (!(nr == FieldElement::of(*p.comp->center, 1))) return false;
  }
  return true;
}

/* diagonal embedding of a center element into the algebra */
inline AlgebraElement center_to_element(const CenterElement& c) {
  AlgebraElement e;
  e.A = c.A;
  for (std::size_t i = 0; i < c.parts.size(); ++i) {
    const SimpleComponent& comp = c.A->components[i];
    ComponentElement p = component_zero(comp);
    switch (comp.kind) {
      case ComponentKind::Field:
        p.entries[0] = c.parts[i];
        break;
      case ComponentKind::Matrix:
        for (unsigned d = 0; d < comp.n; ++d) p.entries[d * comp.n + d] = c.parts[i];
        break;
      case ComponentKind::Quaternion:
        if (!c.parts[i].is_rational())
          throw ValidationError("ValidationError", "quaternion center is Q");
        p.quat[0] = c.parts[i].c[0];
        break;
    }
    e.parts.push_back(std::move(p));
  }
  return e;
}

/* Positivity at the ramified real places of the center (the "+" condition).
 * Field and matrix components impose nothing; a quaternion component over Q
 * ramified at infinity requires its rational center value to be positive.
 * Everything here is exact, so the precision argument only matters for a
 * numeric center value, which this overload does not carry. */
inline bool is_totally_positive_plus(const CenterElement& c, mpfr_prec_t /*precision*/ = 128) {
  for (std::size_t i = 0; i < c.parts.size(); ++i) {
    const SimpleComponent& comp = c.A->components[i];
    if (!comp.ramified_at_infinity()) continue;
    if (c.parts[i].is_zero())
      throw ValidationError("ValidationError", "center element not invertible");
    if (c.parts[i].c[0] <= 0) return false;
  }
  return true;
}

/* Normalized valuation on a ramified quaternion component: v_p of the reduced
 * norm, which makes a uniformizer have value 1 and units of the maximal local
 * order value 0. */
inline long quaternion_local_valuation(const ComponentElement& x, const mpz_class& p) {
  const SimpleComponent& c = *x.comp;
  if (c.kind != ComponentKind::Quaternion)
    throw ValidationError("ValidationError", "not a quaternion component");
  if (hilbert_symbol(c.qa, c.qb, p) != -1)
    throw ValidationError("NotRamified", "quaternion splits at p");
  if (x.is_zero()) throw ValidationError("ZeroElement", "valuation of zero");
  mpq_class nr = component_reduced_norm(x).c[0];
  return qval(nr, p);
}

/* ------------------------ canonical Q-coordinates ------------------------ */
/* Field: power basis. Matrix: entries row-major, each in the power basis.
 * Quaternion: 1, i, j, k. Components concatenated in order. */

inline unsigned component_dim(const SimpleComponent& c) { return c.dim(); }

inline std::vector<mpq_class> component_coords(const ComponentElement& x) {
  std::vector<mpq_class> out;
  if (x.comp->kind == ComponentKind::Quaternion) return x.quat;
  for (const auto& e : x.entries) out.insert(out.end(), e.c.begin(), e.c.end());
  return out;
}

inline ComponentElement component_from_coords(const SimpleComponent& c,
                                              const std::vector<mpq_class>& v) {
  if (v.size() != c.dim()) throw ValidationError("DimensionMismatch", "component coords");
  ComponentElement e = component_zero(c);
  if (c.kind == ComponentKind::Quaternion) {
    e.quat = v;
    return e;
  }
  unsigned deg = c.center->deg;
  for (std::size_t i = 0; i < e.entries.size(); ++i) {
    std::vector<mpq_class> coords(v.begin() + i * deg, v.begin() + (i + 1) * deg);
    e.entries[i] = FieldElement{*c.center, std::move(coords)};
  }
  return e;
}

inline std::vector<mpq_class> algebra_coords(const AlgebraElement& x) {
  std::vector<mpq_class> out;
  for (const auto& p : x.parts) {
    auto v = component_coords(p);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

inline AlgebraElement algebra_from_coords(const SemisimpleAlgebra& A,
                                          const std::vector<mpq_class>& v) {
  if (v.size() != A.dim()) throw ValidationError("DimensionMismatch", "algebra coords");
  AlgebraElement e;
  e.A = &A;
  std::size_t off = 0;
  for (const auto& c : A.components) {
    std::vector<mpq_class> slice(v.begin() + off, v.begin() + off + c.dim());
    e.parts.push_back(component_from_coords(c, slice));
    off += c.dim();
  }
  return e;
}

}  // namespace idelek
