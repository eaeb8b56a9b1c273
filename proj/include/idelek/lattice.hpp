#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <vector>

#include "idelek/errors.hpp"
#include "idelek/matrix.hpp"
#include "idelek/numeric.hpp"

namespace idelek {

/* Full-rank lattice in Q^n, stored as (1/den) * rowspan_Z(basis) with basis a
 * square HNF matrix and den the minimal positive integer clearing all
 * denominators. The pair is a canonical form, so equality is structural. */
struct ZLattice {
  std::size_t dim = 0;
  mpz_class den = 1;
  IntMatrix basis;

  bool operator==(const ZLattice&) const = default;

  static ZLattice standard(std::size_t n) {
    ZLattice l;
    l.dim = n;
    l.basis = IntMatrix::identity(n);
    return l;
  }

  /* (1/den) * rowspan of gens; gens may be any generating set of full rank. */
  static ZLattice from_int_rows(const IntMatrix& gens, const mpz_class& den = 1) {
    if (den <= 0) throw ValidationError("ValidationError", "denominator must be positive");
    IntMatrix h = hnf(gens);
    if (h.rows != gens.cols)
      throw ValidationError("ValidationError", "rank-deficient lattice generators");
    mpz_class content = 0;
    for (const auto& x : h.a) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), x.get_mpz_t());
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), content.get_mpz_t(), den.get_mpz_t());
    ZLattice l;
    l.dim = gens.cols;
    l.den = den / g;
    l.basis = h;
    if (g > 1)
      for (auto& x : l.basis.a) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    return l;
  }

  static ZLattice from_rat_rows(const RatMatrix& gens) {
    mpz_class l = 1;
    for (const auto& q : gens.a) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
    IntMatrix z(gens.rows, gens.cols);
    for (std::size_t i = 0; i < gens.a.size(); ++i) {
      mpq_class v = gens.a[i] * l;
      z.a[i] = v.get_num();
    }
    return from_int_rows(z, l);
  }

  RatMatrix rat_basis() const { return RatMatrix::of(basis, den); }
};

/* Coordinates of x in the lattice basis if x is a member. */
inline bool lattice_coords(const ZLattice& l, const std::vector<mpq_class>& x,
                           std::vector<mpz_class>* out = nullptr) {
  if (x.size() != l.dim) throw ValidationError("DimensionMismatch", "lattice_coords");
  // Solve c * basis = den * x over Z, exploiting that basis is upper triangular.
  std::vector<mpq_class> rem(x);
  for (auto& v : rem) v *= l.den;
  std::vector<mpz_class> c(l.dim);
  for (std::size_t j = 0; j < l.dim; ++j) {
    mpq_class cj = rem[j] / l.basis.at(j, j);
    if (cj.get_den() != 1) return false;
    c[j] = cj.get_num();
    if (c[j] != 0)
      for (std::size_t k = j; k < l.dim; ++k) rem[k] -= mpq_class(c[j] * l.basis.at(j, k));
  }
  for (const auto& v : rem)
    if (v != 0) return false;
  if (out) *out = std::move(c);
  return true;
}

inline bool lattice_contains(const ZLattice& l, const std::vector<mpq_class>& x) {
  return lattice_coords(l, x);
}

inline ZLattice lattice_sum(const ZLattice& a, const ZLattice& b) {
  if (a.dim != b.dim) throw ValidationError("DimensionMismatch", "lattice_sum");
  mpz_class l;
  mpz_lcm(l.get_mpz_t(), a.den.get_mpz_t(), b.den.get_mpz_t());
  IntMatrix gens(a.dim * 2, a.dim);
  mpz_class fa = l / a.den, fb = l / b.den;
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t j = 0; j < a.dim; ++j) {
      gens.at(i, j) = fa * a.basis.at(i, j);
      gens.at(a.dim + i, j) = fb * b.basis.at(i, j);
    }
  return ZLattice::from_int_rows(gens, l);
}

/* Dual lattice { y : <x,y> in Z for all x in L }. */
inline ZLattice lattice_dual(const ZLattice& l) {
  RatMatrix inv = inverse(l.rat_basis());
  return ZLattice::from_rat_rows(transpose(inv));
}

inline ZLattice lattice_intersect(const ZLattice& a, const ZLattice& b) {
  if (a.dim != b.dim) throw ValidationError("DimensionMismatch", "lattice_intersect");
  return lattice_dual(lattice_sum(lattice_dual(a), lattice_dual(b)));
}

/* Generalized index [sup : sub] as a positive rational: the absolute
 * determinant of any rational change of basis from sup to sub. Equals the
 * group index when sub is contained in sup. */
inline mpq_class lattice_index(const ZLattice& sub, const ZLattice& sup) {
  if (sub.dim != sup.dim) throw ValidationError("DimensionMismatch", "lattice_index");
  mpq_class dsub(abs(det(sub.basis)), zpow(sub.den, static_cast<unsigned long>(sub.dim)));
  dsub.canonicalize();
  mpq_class dsup(abs(det(sup.basis)), zpow(sup.den, static_cast<unsigned long>(sup.dim)));
  dsup.canonicalize();
  return dsub / dsup;
}

inline bool lattice_subset(const ZLattice& a, const ZLattice& b) {
  std::vector<mpq_class> row(a.dim);
  for (std::size_t i = 0; i < a.dim; ++i) {
    for (std::size_t j = 0; j < a.dim; ++j) {
      row[j] = mpq_class(a.basis.at(i, j), a.den);
      row[j].canonicalize();
    }
    if (!lattice_contains(b, row)) return false;
  }
  return true;
}

inline ZLattice lattice_scale(const ZLattice& l, const mpq_class& c) {
  if (c == 0) throw ValidationError("ZeroElement", "scaling lattice by 0");
  IntMatrix b = l.basis;
  mpz_class num = abs(c.get_num());
  for (auto& x : b.a) x *= num;
  return ZLattice::from_int_rows(b, mpz_class(l.den * c.get_den()));
}

}  // namespace idelek
