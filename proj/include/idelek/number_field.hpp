#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "idelek/bigfloat.hpp"
#include "idelek/errors.hpp"
#include "idelek/lattice.hpp"
#include "idelek/matrix.hpp"
#include "idelek/numeric.hpp"
#include "idelek/polynomial.hpp"

namespace idelek {

struct OverridePrime {
  std::vector<mpq_class> gen;  // power-basis coordinates of the second generator
  unsigned e = 1, f = 1;
};

/* Number field Q[x]/(poly) with a user-supplied (validated) integral basis.
 * Elements are coordinate vectors in the power basis; ideals are lattices in
 * integral-basis coordinates. Exact class-group / unit / principality
 * machinery is implemented for degree <= 2; everything else that only needs
 * ring arithmetic works up to degree 6. */
struct NumberField {
  QPoly poly;          // monic, integer coefficients, irreducible
  unsigned deg = 0;
  RatMatrix basis;     // rows = integral basis in power coordinates
  RatMatrix basis_inv;
  unsigned n_real = 0, n_complex = 0;
  mpz_class disc = 0;        // field discriminant (of the given basis)
  mpz_class power_index = 0; // [O_F : Z[theta]]
  std::map<long, std::vector<OverridePrime>> prime_overrides;

  bool is_rationals() const { return deg == 1; }
  bool is_quadratic() const { return deg == 2; }

  /* For quadratic fields: the squarefree d with F = Q(sqrt(d)). */
  mpz_class quad_d() const {
    if (!is_quadratic()) throw UnsupportedError("UnsupportedField", "not quadratic");
    // x^2 + bx + c has root (-b + sqrt(b^2-4c))/2
    mpq_class dq = poly[1] * poly[1] - 4 * poly[0];
    mpz_class d = dq.get_num();  // integer since poly is integral
    mpz_class sq = 1;
    for (const auto& [p, e] : factor(abs(d)))
      if (e >= 2) sq *= zpow(p, e / 2);
    return d / (sq * sq);
  }

  static NumberField rationals() {
    NumberField f;
    f.poly = {mpq_class(0), mpq_class(1)};  // x
    f.deg = 1;
    f.basis = RatMatrix::identity(1);
    f.basis_inv = f.basis;
    f.n_real = 1;
    f.n_complex = 0;
    f.disc = 1;
    f.power_index = 1;
    return f;
  }

  static NumberField quadratic(const mpz_class& d);
  static NumberField create(QPoly poly, RatMatrix basis,
                            std::map<long, std::vector<OverridePrime>> overrides = {});
};

struct FieldElement {
  const NumberField* F = nullptr;
  std::vector<mpq_class> c;  // power-basis coordinates

  FieldElement() = default;
  FieldElement(const NumberField& f, std::vector<mpq_class> coords)
      : F(&f), c(std::move(coords)) {
    if (c.size() != f.deg) throw ValidationError("DimensionMismatch", "element coords");
  }
  static FieldElement of(const NumberField& f, const mpq_class& q) {
    std::vector<mpq_class> c(f.deg);
    c[0] = q;
    return {f, std::move(c)};
  }
  static FieldElement theta(const NumberField& f) {
    if (f.deg < 2) throw ValidationError("ValidationError", "theta needs degree >= 2");
    std::vector<mpq_class> c(f.deg);
    c[1] = 1;
    return {f, std::move(c)};
  }
  bool is_zero() const {
    for (const auto& x : c)
      if (x != 0) return false;
    return true;
  }
  bool is_rational() const {
    for (std::size_t i = 1; i < c.size(); ++i)
      if (c[i] != 0) return false;
    return true;
  }
  bool operator==(const FieldElement& o) const { return c == o.c; }
};

inline FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  std::vector<mpq_class> c(a.c);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += b.c[i];
  return {*a.F, std::move(c)};
}

inline FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  std::vector<mpq_class> c(a.c);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b.c[i];
  return {*a.F, std::move(c)};
}

inline FieldElement operator-(const FieldElement& a) {
  std::vector<mpq_class> c(a.c);
  for (auto& x : c) x = -x;
  return {*a.F, std::move(c)};
}

inline FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  QPoly pa(a.c.begin(), a.c.end()), pb(b.c.begin(), b.c.end());
  QPoly r = poly_mod(poly_mul(poly_trim(pa), poly_trim(pb)), a.F->poly);
  r.resize(a.F->deg);
  return {*a.F, std::move(r)};
}

inline FieldElement operator*(const FieldElement& a, const mpq_class& q) {
  std::vector<mpq_class> c(a.c);
  for (auto& x : c) x *= q;
  return {*a.F, std::move(c)};
}

inline FieldElement inverse(const FieldElement& a) {
  if (a.is_zero()) throw ValidationError("ZeroElement", "inverse of zero");
  QPoly pa(a.c.begin(), a.c.end());
  auto [g, s, t] = poly_xgcd(poly_trim(pa), a.F->poly);
  if (poly_deg(g) != 0)
    throw ValidationError("NotInvertible", "element shares a factor with the modulus");
  QPoly r = poly_mod(poly_scale(s, 1 / g[0]), a.F->poly);
  r.resize(a.F->deg);
  return {*a.F, std::move(r)};
}

inline FieldElement operator/(const FieldElement& a, const FieldElement& b) {
  return a * inverse(b);
}

/* multiplication-by-x matrix in power coordinates (row convention: coords
 * of x * theta^i in row i) */
inline RatMatrix mult_matrix(const FieldElement& x) {
  const unsigned n = x.F->deg;
  RatMatrix m(n, n);
  FieldElement cur = x;
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = 0; j < n; ++j) m.at(i, j) = cur.c[j];
    if (i + 1 < n) cur = cur * FieldElement::theta(*x.F);
  }
  return m;
}

inline mpq_class norm(const FieldElement& x) { return det(mult_matrix(x)); }

inline mpq_class trace(const FieldElement& x) {
  RatMatrix m = mult_matrix(x);
  mpq_class t = 0;
  for (unsigned i = 0; i < x.F->deg; ++i) t += m.at(i, i);
  return t;
}

/* coordinates with respect to the integral basis */
inline std::vector<mpq_class> to_basis_coords(const FieldElement& x) {
  return solve_left(x.F->basis, x.c);
}

inline FieldElement from_basis_coords(const NumberField& F, const std::vector<mpq_class>& v) {
  if (v.size() != F.deg) throw ValidationError("DimensionMismatch", "basis coords");
  std::vector<mpq_class> c(F.deg);
  for (unsigned i = 0; i < F.deg; ++i)
    for (unsigned j = 0; j < F.deg; ++j) c[j] += v[i] * F.basis.at(i, j);
  return {F, std::move(c)};
}

/* ------------------------------ field setup ------------------------------ */

inline NumberField NumberField::create(QPoly poly, RatMatrix basis,
                                       std::map<long, std::vector<OverridePrime>> overrides) {
  poly = poly_trim(std::move(poly));
  long n = poly_deg(poly);
  if (n < 1) throw ValidationError("ValidationError", "defining polynomial must be nonconstant");
  if (n > 6) throw UnsupportedError("UnsupportedField", "degree capped at 6");
  if (poly.back() != 1) throw ValidationError("ValidationError", "defining polynomial must be monic");
  for (const auto& c : poly)
    if (c.get_den() != 1)
      throw ValidationError("ValidationError", "defining polynomial must be integral");
  if (!poly_irreducible(poly))
    throw ValidationError("ValidationError", "defining polynomial is reducible");

  NumberField F;
  F.poly = std::move(poly);
  F.deg = static_cast<unsigned>(n);
  if (basis.rows != F.deg || basis.cols != F.deg)
    throw ValidationError("DimensionMismatch", "integral basis must be deg x deg");
  F.basis = basis;
  F.basis_inv = inverse(basis);  // throws NotInvertible if rank-deficient
  F.prime_overrides = std::move(overrides);

  // signature by Sturm
  int real_roots = count_real_roots(F.poly);
  F.n_real = static_cast<unsigned>(real_roots);
  F.n_complex = (F.deg - F.n_real) / 2;

  // the basis lattice (power coordinates) must contain Z[theta] = Z^n
  ZLattice order_lat = ZLattice::from_rat_rows(F.basis);
  if (!lattice_subset(ZLattice::standard(F.deg), order_lat))
    throw ValidationError("ValidationError", "integral basis does not contain Z[theta]");
  mpq_class idx = lattice_index(ZLattice::standard(F.deg), order_lat);
  F.power_index = idx.get_num();  // integer by the containment above

  // multiplicative closure: all b_i * b_j must lie in the basis lattice
  std::vector<FieldElement> bs;
  for (unsigned i = 0; i < F.deg; ++i) {
    std::vector<mpq_class> row(F.deg);
    for (unsigned j = 0; j < F.deg; ++j) row[j] = F.basis.at(i, j);
    bs.push_back(FieldElement{F, std::move(row)});
  }
  for (unsigned i = 0; i < F.deg; ++i)
    for (unsigned j = i; j < F.deg; ++j) {
      FieldElement prod = bs[i] * bs[j];
      if (!lattice_contains(order_lat, prod.c))
        throw ValidationError("ValidationError", "integral basis is not closed under products");
    }

  // discriminant = det of the trace form on the basis
  RatMatrix tf(F.deg, F.deg);
  for (unsigned i = 0; i < F.deg; ++i)
    for (unsigned j = 0; j < F.deg; ++j) tf.at(i, j) = trace(bs[i] * bs[j]);
  mpq_class d = det(tf);
  if (d == 0) throw ValidationError("ValidationError", "degenerate trace form");
  F.disc = d.get_num();
  return F;
}

inline NumberField NumberField::quadratic(const mpz_class& d) {
  if (d == 0 || d == 1) throw ValidationError("ValidationError", "d must not be 0 or 1");
  for (const auto& [p, e] : factor(abs(d)))
    if (e >= 2) throw ValidationError("ValidationError", "d must be squarefree");
  QPoly poly{mpq_class(-d), mpq_class(0), mpq_class(1)};
  RatMatrix basis = RatMatrix::identity(2);
  std::map<long, std::vector<OverridePrime>> ov;
  bool half_basis = mpz_class((d % 4 + 4) % 4) == 1;
  if (half_basis) {
    basis.at(1, 0) = mpq_class(1, 2);
    basis.at(1, 1) = mpq_class(1, 2);
    // factor 2 through the minimal polynomial of (1+sqrt d)/2: x^2 - x + (1-d)/4
    mpz_class c = (1 - d) / 4;
    std::vector<OverridePrime> at2;
    if (mpz_class((c % 2 + 2) % 2) == 0) {
      // splits: roots 0 and 1, primes (2, omega - r)
      for (long r = 0; r <= 1; ++r) {
        OverridePrime op;
        op.gen = {mpq_class(1, 2) - r, mpq_class(1, 2)};  // omega - r
        op.e = 1;
        op.f = 1;
        at2.push_back(std::move(op));
      }
    } else {
      OverridePrime op;  // inert
      op.gen = {mpq_class(2), mpq_class(0)};
      op.e = 1;
      op.f = 2;
      at2.push_back(std::move(op));
    }
    ov[2] = std::move(at2);
  }
  return create(std::move(poly), std::move(basis), std::move(ov));
}

/* ------------------------------- ideals ------------------------------- */

struct FractionalIdeal {
  const NumberField* F = nullptr;
  ZLattice lat;  // integral-basis coordinates

  bool operator==(const FractionalIdeal& o) const { return lat == o.lat; }
  bool is_integral() const { return lattice_subset(lat, ZLattice::standard(lat.dim)); }
};

inline FractionalIdeal unit_ideal(const NumberField& F) {
  return {&F, ZLattice::standard(F.deg)};
}

inline FractionalIdeal ideal_from_generators(const NumberField& F,
                                             const std::vector<FieldElement>& gens) {
  std::vector<FieldElement> bs;
  for (unsigned i = 0; i < F.deg; ++i) {
    std::vector<mpq_class> row(F.deg);
    for (unsigned j = 0; j < F.deg; ++j) row[j] = F.basis.at(i, j);
    bs.push_back(FieldElement{F, std::move(row)});
  }
  RatMatrix rows(F.deg * gens.size(), F.deg);
  std::size_t r = 0;
  for (const auto& g : gens)
    for (unsigned i = 0; i < F.deg; ++i, ++r) {
      std::vector<mpq_class> v = to_basis_coords(g * bs[i]);
      for (unsigned j = 0; j < F.deg; ++j) rows.at(r, j) = v[j];
    }
  return {&F, ZLattice::from_rat_rows(rows)};
}

inline FractionalIdeal principal_ideal(const FieldElement& x) {
  if (x.is_zero()) throw ValidationError("ZeroElement", "zero generates no lattice");
  return ideal_from_generators(*x.F, {x});
}

inline FieldElement ideal_basis_element(const FractionalIdeal& I, std::size_t i) {
  std::vector<mpq_class> v(I.lat.dim);
  for (std::size_t j = 0; j < I.lat.dim; ++j) {
    v[j] = mpq_class(I.lat.basis.at(i, j), I.lat.den);
    v[j].canonicalize();
  }
  return from_basis_coords(*I.F, v);
}

inline FractionalIdeal ideal_mul(const FractionalIdeal& I, const FractionalIdeal& J) {
  const unsigned n = I.F->deg;
  RatMatrix rows(n * n, n);
  for (unsigned i = 0; i < n; ++i) {
    FieldElement a = ideal_basis_element(I, i);
    for (unsigned j = 0; j < n; ++j) {
      std::vector<mpq_class> v = to_basis_coords(a * ideal_basis_element(J, j));
      for (unsigned k = 0; k < n; ++k) rows.at(i * n + j, k) = v[k];
    }
  }
  return {I.F, ZLattice::from_rat_rows(rows)};
}

inline FractionalIdeal ideal_scale(const FractionalIdeal& I, const mpq_class& q) {
  return {I.F, lattice_scale(I.lat, q)};
}

inline mpq_class ideal_norm(const FractionalIdeal& I) {
  return lattice_index(I.lat, ZLattice::standard(I.lat.dim));
}

/* colon ideal (I : J) = { x : xJ <= I } */
inline FractionalIdeal ideal_colon(const FractionalIdeal& I, const FractionalIdeal& J) {
  const unsigned n = I.F->deg;
  std::optional<ZLattice> acc;
  for (unsigned j = 0; j < n; ++j) {
    FieldElement w = ideal_basis_element(J, j);
    // x * M_w maps basis coords of x to basis coords of x*w
    RatMatrix mw(n, n);
    for (unsigned i = 0; i < n; ++i) {
      std::vector<mpq_class> bi(n);
      bi[i] = 1;
      std::vector<mpq_class> v = to_basis_coords(from_basis_coords(*I.F, bi) * w);
      for (unsigned k = 0; k < n; ++k) mw.at(i, k) = v[k];
    }
    RatMatrix inv = inverse(mw);
    // preimage of I.lat under right-multiplication by mw
    RatMatrix pre = mul(RatMatrix::of(I.lat.basis, I.lat.den), inv);
    ZLattice li = ZLattice::from_rat_rows(pre);
    acc = acc ? lattice_intersect(*acc, li) : li;
  }
  return {I.F, *acc};
}

inline FractionalIdeal ideal_inverse(const FractionalIdeal& I) {
  return ideal_colon(unit_ideal(*I.F), I);
}

/* canonical byte key used for deterministic sorting and map keys */
inline std::string ideal_key(const FractionalIdeal& I) {
  std::string s = I.lat.den.get_str();
  for (const auto& x : I.lat.basis.a) {
    s += ',';
    s += x.get_str();
  }
  return s;
}

/* ------------------------------ prime ideals ------------------------------ */

struct PrimeIdeal {
  FractionalIdeal ideal;
  mpz_class p;
  unsigned e = 1, f = 1;
  FieldElement second_gen;  // ideal = (p) + (second_gen)
};

inline std::vector<PrimeIdeal> factor_prime(const NumberField& F, const mpz_class& p) {
  if (p < 2 || !is_prime(p)) throw ValidationError("ValidationError", "p must be prime");
  std::vector<PrimeIdeal> out;
  auto build = [&](const FieldElement& g, unsigned e, unsigned f) {
    PrimeIdeal P;
    P.p = p;
    P.e = e;
    P.f = f;
    P.second_gen = g;
    P.ideal = g.is_zero()
                  ? ideal_from_generators(F, {FieldElement::of(F, mpq_class(p))})
                  : ideal_from_generators(F, {FieldElement::of(F, mpq_class(p)), g});
    out.push_back(std::move(P));
  };
  if (F.is_rationals()) {
    build(FieldElement::of(F, 0), 1, 1);
    return out;
  }
  auto ov = F.prime_overrides.find(p.get_si());
  if (p.fits_slong_p() && ov != F.prime_overrides.end()) {
    for (const auto& op : ov->second) build(FieldElement{F, op.gen}, op.e, op.f);
  } else {
    if (mpz_divisible_p(F.power_index.get_mpz_t(), p.get_mpz_t()))
      throw ValidationError("IndexDivisorError",
                            "p divides [O_F : Z[theta]]; supply a prime override");
    if (!p.fits_slong_p())
      throw UnsupportedError("UnsupportedField", "prime too large for factoring");
    for (const auto& [g, mult] : factor_mod_p(F.poly, p.get_si())) {
      unsigned gdeg = static_cast<unsigned>(g.c.size() - 1);
      if (gdeg == F.deg) {  // inert: the lifted generator is redundant
        build(FieldElement::of(F, 0), mult, gdeg);
        continue;
      }
      std::vector<mpq_class> coords(F.deg);
      for (std::size_t i = 0; i < g.c.size(); ++i) {
        long ci = g.c[i];
        if (2 * ci > g.p) ci -= g.p;  // centered lift keeps generators small
        coords[i] = ci;
      }
      build(FieldElement{F, coords}, mult, gdeg);
    }
  }
  unsigned total = 0;
  for (const auto& P : out) total += P.e * P.f;
  if (total != F.deg)
    throw ValidationError("ValidationError", "prime factorization degree mismatch");
  std::sort(out.begin(), out.end(), [](const PrimeIdeal& a, const PrimeIdeal& b) {
    return ideal_key(a.ideal) < ideal_key(b.ideal);
  });
  return out;
}

/* v_P(I) for a fractional ideal: scale integral, then count containments in
 * successive powers of P. */
inline long ideal_valuation(const FractionalIdeal& I, const PrimeIdeal& P) {
  mpz_class den = I.lat.den;
  FractionalIdeal J = ideal_scale(I, mpq_class(den));
  long shift = static_cast<long>(P.e) * zval(den, P.p);
  long v = 0;
  FractionalIdeal power = P.ideal;  // P^(v+1)
  while (lattice_subset(J.lat, power.lat)) {
    ++v;
    power = ideal_mul(power, P.ideal);
  }
  return v - shift;
}

inline long element_valuation(const FieldElement& x, const PrimeIdeal& P) {
  return ideal_valuation(principal_ideal(x), P);
}

/* p-part of the principal ideal (x): prod over P | p of P^{v_P(x)} */
inline FractionalIdeal p_part_of_principal(const FieldElement& x, const mpz_class& p) {
  const NumberField& F = *x.F;
  FractionalIdeal acc = unit_ideal(F);
  for (const auto& P : factor_prime(F, p)) {
    long v = element_valuation(x, P);
    FractionalIdeal pw = unit_ideal(F);
    for (long i = 0; i < (v > 0 ? v : -v); ++i) pw = ideal_mul(pw, P.ideal);
    if (v < 0) pw = ideal_inverse(pw);
    acc = ideal_mul(acc, pw);
  }
  return acc;
}

/* ------------------------------ unit group ------------------------------ */

struct UnitGroup {
  FieldElement mu_gen;  // generator of the roots of unity
  unsigned mu_order = 2;
  std::optional<FieldElement> fundamental;  // sigma_1 image > 1 when present
};

namespace detail {

/* Continued fraction of sqrt(d): returns the fundamental Pell solution
 * (x, y) of x^2 - d y^2 = +-1 (d > 1 not a square). */
inline std::pair<mpz_class, mpz_class> pell_by_continued_fraction(const mpz_class& d) {
  mpz_class a0;
  mpz_sqrt(a0.get_mpz_t(), d.get_mpz_t());
  mpz_class P = 0, Q = 1, a = a0;
  mpz_class p_prev = 1, p_cur = a0, q_prev = 0, q_cur = 1;
  for (;;) {
    P = a * Q - P;
    Q = (d - P * P) / Q;
    if (Q == 1) return {p_cur, q_cur};
    a = (a0 + P) / Q;
    mpz_class p_next = a * p_cur + p_prev;
    mpz_class q_next = a * q_cur + q_prev;
    p_prev = p_cur;
    p_cur = p_next;
    q_prev = q_cur;
    q_cur = q_next;
  }
}

}  // namespace detail

inline UnitGroup unit_group(const NumberField& F) {
  if (F.is_rationals())
    return {FieldElement::of(F, -1), 2, std::nullopt};
  if (!F.is_quadratic())
    throw UnsupportedError("UnsupportedField", "unit group implemented for degree <= 2");
  mpz_class d = F.quad_d();
  if (d < 0) {
    if (d == -1) return {FieldElement::theta(F), 4, std::nullopt};  // i
    if (d == -3) {
      std::vector<mpq_class> c{mpq_class(1, 2), mpq_class(1, 2)};  // (1 + sqrt(-3))/2
      return {FieldElement{F, c}, 6, std::nullopt};
    }
    return {FieldElement::of(F, -1), 2, std::nullopt};
  }
  auto [x, y] = detail::pell_by_continued_fraction(d);
  mpz_class u_num = x, v_num = y, half = 1;  // unit = (u + v sqrt d)/half
  if (mpz_class((d % 4 + 4) % 4) == 1) {
    // the maximal order may have a smaller unit (u + v sqrt d)/2 with
    // u^2 - d v^2 = +-4; scan v up to the Pell solution
    for (mpz_class v = 1; v <= y; ++v) {
      for (int s = -1; s <= 1; s += 2) {
        mpz_class u2 = d * v * v + 4 * s;
        if (u2 <= 0) continue;
        mpz_class u;
        mpz_sqrt(u.get_mpz_t(), u2.get_mpz_t());
        if (u * u == u2 && (u - v) % 2 == 0) {
          u_num = u;
          v_num = v;
          half = 2;
          goto found;
        }
      }
    }
  found:;
  }
  std::vector<mpq_class> c{mpq_class(u_num, half), mpq_class(v_num, half)};
  c[0].canonicalize();
  c[1].canonicalize();
  return {FieldElement::of(F, -1), 2, FieldElement{F, c}};
}

/* all roots of unity of F as elements */
inline std::vector<FieldElement> roots_of_unity(const NumberField& F) {
  UnitGroup ug = unit_group(F);
  std::vector<FieldElement> out;
  FieldElement z = FieldElement::of(F, 1);
  for (unsigned i = 0; i < ug.mu_order; ++i) {
    out.push_back(z);
    z = z * ug.mu_gen;
  }
  return out;
}

/* ----------------------------- principality ----------------------------- */

/* Decide whether a fractional ideal is principal; returns a generator if so.
 * Exhaustive search over coordinates bounded through the embeddings, with
 * units quotiented out by a fundamental-domain bound in the real case. */
inline std::optional<FieldElement> is_principal(const FractionalIdeal& I) {
  const NumberField& F = *I.F;
  if (F.is_rationals()) {
    mpq_class g(I.lat.basis.at(0, 0), I.lat.den);
    g.canonicalize();
    return FieldElement::of(F, g);
  }
  if (!F.is_quadratic())
    throw UnsupportedError("UnsupportedField", "principality implemented for degree <= 2");

  // scale to an integral ideal
  mpz_class den = I.lat.den;
  FractionalIdeal J = ideal_scale(I, mpq_class(den));
  mpq_class nq = ideal_norm(J);
  mpz_class N = nq.get_num();  // integral ideal: integer norm

  mpz_class d = F.quad_d();
  // norm-bound B on |sigma_i(alpha)| for a candidate generator alpha
  mpz_class B;
  if (d < 0) {
    mpz_sqrt(B.get_mpz_t(), N.get_mpz_t());
    B += 1;
  } else {
    UnitGroup ug = unit_group(F);
    // integer upper bound for sigma_1(fundamental unit)
    mpz_class sq;
    mpz_sqrt(sq.get_mpz_t(), d.get_mpz_t());
    mpq_class eps_up = ug.fundamental->c[0] + ug.fundamental->c[1] * (sq + 1);
    mpz_class eb = eps_up.get_num() / eps_up.get_den() + 1;
    mpz_class t = N * eb;
    mpz_sqrt(B.get_mpz_t(), t.get_mpz_t());
    B += 2;
  }
  // coordinate box: alpha = a + b*omega in the power basis means
  // alpha = a + b*theta with rational a, b; enumerate integral-basis coords.
  // |sigma1(alpha) - sigma2(alpha)| = |b| * 2 sqrt|d| (theta coefficient)
  mpz_class sqd;
  mpz_class ad = abs(d);
  mpz_sqrt(sqd.get_mpz_t(), ad.get_mpz_t());
  if (sqd == 0) sqd = 1;
  // integral basis row 1 is either theta or (1+theta)/2
  bool half = F.basis.at(1, 0) != 0;
  mpz_class Ybound = (half ? 2 * B : B) / sqd + 2;
  // a = sigma_1(alpha) - b * sigma_1(omega); for imaginary fields the real
  // part of omega is 0 or 1/2, for real fields sigma_1(omega) <= sqd + 2
  mpz_class Xbound = B + 2;
  if (d > 0)
    Xbound += Ybound * (sqd + 2);
  else if (half)
    Xbound += Ybound / 2 + 1;

  for (mpz_class y = -Ybound; y <= Ybound; ++y)
    for (mpz_class x = -Xbound; x <= Xbound; ++x) {
      if (x == 0 && y == 0) continue;
      std::vector<mpq_class> bc{mpq_class(x), mpq_class(y)};
      if (!lattice_contains(J.lat, bc)) continue;
      FieldElement alpha = from_basis_coords(F, bc);
      if (abs(norm(alpha)) == nq) {
        mpq_class scale(1, den);
        scale.canonicalize();
        return alpha * scale;
      }
    }
  return std::nullopt;
}

/* ------------------------------ class group ------------------------------ */

struct ClassGroup {
  mpz_class order = 1;
  std::vector<mpz_class> invariants;       // nontrivial cyclic factors, d1 | d2 | ...
  std::vector<FractionalIdeal> reps;       // canonical representatives; reps[0] trivial
  std::map<std::string, std::size_t> prime_class;  // ideal_key of primes below the bound
};

/* index of the class of I among cg.reps */
inline std::size_t class_of(const ClassGroup& cg, const FractionalIdeal& I) {
  for (std::size_t k = 0; k < cg.reps.size(); ++k) {
    FractionalIdeal q = ideal_mul(I, ideal_inverse(cg.reps[k]));
    if (is_principal(q)) return k;
  }
  throw ValidationError("ValidationError", "class not represented; enumeration incomplete");
}

inline ClassGroup class_group(const NumberField& F) {
  ClassGroup cg;
  cg.reps.push_back(unit_ideal(F));
  if (F.is_rationals()) return cg;
  if (!F.is_quadratic())
    throw UnsupportedError("UnsupportedField", "class group implemented for degree <= 2");

  // Minkowski-style norm bound (slight overshoot is harmless: it only adds
  // generators). Imaginary: (2/pi) sqrt|disc| <= sqrt(4|disc|/9).
  // Real: sqrt(disc)/2.
  mpz_class bound;
  if (F.disc < 0) {
    mpz_class t = 4 * abs(F.disc) / 9;
    mpz_sqrt(bound.get_mpz_t(), t.get_mpz_t());
    bound += 1;
  } else {
    mpz_sqrt(bound.get_mpz_t(), F.disc.get_mpz_t());
    bound = bound / 2 + 1;
  }

  // prime ideals of norm <= bound
  std::vector<PrimeIdeal> gens;
  for (long p : primes_upto(bound.get_si() < 2 ? 2 : bound.get_si())) {
    for (const auto& P : factor_prime(F, p))
      if (zpow(P.p, P.f) <= bound) gens.push_back(P);
  }

  // all integral ideals of norm <= bound (products of the above), as lattices
  std::vector<FractionalIdeal> pool{unit_ideal(F)};
  std::vector<mpz_class> pool_norm{1};
  for (const auto& P : gens) {
    std::size_t sz = pool.size();
    mpz_class np = zpow(P.p, P.f);
    for (std::size_t i = 0; i < sz; ++i) {
      FractionalIdeal cur = pool[i];
      mpz_class nn = pool_norm[i] * np;
      while (nn <= bound) {
        cur = ideal_mul(cur, P.ideal);
        pool.push_back(cur);
        pool_norm.push_back(nn);
        nn *= np;
      }
    }
  }

  // partition the pool into ideal classes
  std::vector<std::vector<std::size_t>> members;  // pool indices per class
  std::vector<std::size_t> class_idx(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    bool placed = false;
    for (std::size_t k = 0; k < members.size() && !placed; ++k) {
      FractionalIdeal q = ideal_mul(pool[i], ideal_inverse(pool[members[k][0]]));
      if (is_principal(q)) {
        members[k].push_back(i);
        class_idx[i] = k;
        placed = true;
      }
    }
    if (!placed) {
      members.push_back({i});
      class_idx[i] = members.size() - 1;
    }
  }

  // canonical representative per class: minimal (norm, lattice key)
  std::vector<FractionalIdeal> reps;
  for (const auto& m : members) {
    std::size_t best = m[0];
    for (std::size_t i : m) {
      auto key = [&](std::size_t t) {
        return std::make_pair(pool_norm[t], ideal_key(pool[t]));
      };
      if (key(i) < key(best)) best = i;
    }
    reps.push_back(pool[best]);
  }
  // trivial class first (contains the unit ideal = pool[0]), others by key
  std::size_t triv = class_idx[0];
  std::swap(reps[0], reps[triv]);
  std::sort(reps.begin() + 1, reps.end(), [&](const auto& a, const auto& b) {
    auto ka = std::make_pair(ideal_norm(a), ideal_key(a));
    auto kb = std::make_pair(ideal_norm(b), ideal_key(b));
    return ka < kb;
  });
  cg.reps = reps;
  cg.order = reps.size();

  // abelian invariants from the full multiplication table
  const std::size_t h = reps.size();
  if (h > 1) {
    auto locate = [&](const FractionalIdeal& I) {
      for (std::size_t k = 0; k < h; ++k)
        if (is_principal(ideal_mul(I, ideal_inverse(cg.reps[k])))) return k;
      throw ValidationError("ValidationError", "class table incomplete");
    };
    IntMatrix rel(h * h, h);
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < h; ++j) {
        std::size_t k = locate(ideal_mul(cg.reps[i], cg.reps[j]));
        rel.at(i * h + j, i) += 1;
        rel.at(i * h + j, j) += 1;
        rel.at(i * h + j, k) -= 1;
      }
    for (const auto& dcand : snf(rel))
      if (dcand != 1 && dcand != 0) cg.invariants.push_back(dcand);
    // a finite group presented by its multiplication table has no free part
  }

  // record the class of every prime ideal used as a generator
  for (const auto& P : gens) {
    for (std::size_t k = 0; k < h; ++k)
      if (is_principal(ideal_mul(P.ideal, ideal_inverse(cg.reps[k])))) {
        cg.prime_class[ideal_key(P.ideal)] = k;
        break;
      }
  }
  return cg;
}

/* ------------------------------ embeddings ------------------------------ */

/* Number of archimedean places: n_real + n_complex. Real places are indexed
 * first, in ascending order of the corresponding real root. */
inline unsigned place_count(const NumberField& F) { return F.n_real + F.n_complex; }

inline BigComplex embed(const FieldElement& x, unsigned place, mpfr_prec_t prec) {
  const NumberField& F = *x.F;
  if (place >= place_count(F)) throw ValidationError("ValidationError", "place out of range");
  mpfr_prec_t work = prec + 16;
  if (F.deg == 1) {
    BigComplex z(prec);
    z.re = BigFloat::of(x.c[0], prec);
    return z;
  }
  if (place < F.n_real) {
    auto ivs = isolate_real_roots(F.poly);
    BigFloat th = refine_root(F.poly, ivs[place], work);
    BigFloat v(work);
    for (std::size_t i = x.c.size(); i-- > 0;) v = v * th + BigFloat::of(x.c[i], work);
    BigComplex z(prec);
    mpfr_set(z.re.raw(), v.raw(), MPFR_RNDN);
    return z;
  }
  if (F.deg != 2)
    throw UnsupportedError("UnsupportedField", "complex embeddings implemented for degree 2");
  // theta = (-b + i sqrt(4c - b^2)) / 2 for x^2 + b x + c
  mpq_class b = F.poly[1], c0 = F.poly[0];
  mpq_class disc = 4 * c0 - b * b;  // positive here
  BigFloat root = sqrt(BigFloat::of(disc, work));
  BigFloat two = BigFloat::of(2, work);
  BigFloat re_th = BigFloat::of(-b, work) / two;
  BigFloat im_th = root / two;
  BigComplex z(prec);
  BigFloat re = BigFloat::of(x.c[0], work) + BigFloat::of(x.c[1], work) * re_th;
  BigFloat im = BigFloat::of(x.c[1], work) * im_th;
  mpfr_set(z.re.raw(), re.raw(), MPFR_RNDN);
  mpfr_set(z.im.raw(), im.raw(), MPFR_RNDN);
  return z;
}

}  // namespace idelek
