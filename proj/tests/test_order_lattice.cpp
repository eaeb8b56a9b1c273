#include <catch2/catch_amalgamated.hpp>

#include <gmpxx.h>

#include "idelek/ideles.hpp"
#include "idelek/order.hpp"
#include "idelek/rng.hpp"

using namespace idelek;

namespace {

struct QuatSetup {
  SemisimpleAlgebra A = SemisimpleAlgebra::of({quaternion_component(-1, -1)});
  Order O;
  QuatSetup() { O = hurwitz_order(A); }
};

struct QuadSetup {
  SemisimpleAlgebra A;
  Order O;
  explicit QuadSetup(long d) {
    A = SemisimpleAlgebra::of({field_component(NumberField::quadratic(d))});
    O = maximal_order(A);
  }
};

struct RatSetup {
  SemisimpleAlgebra A = SemisimpleAlgebra::of({field_component(NumberField::rationals())});
  Order O;
  RatSetup() { O = maximal_order(A); }
};

AlgebraElement quat_el(const SemisimpleAlgebra& a, long x, long y, long z, long w, long den = 1) {
  AlgebraElement e = algebra_zero(a);
  e.parts[0].quat = {mpq_class(x, den), mpq_class(y, den), mpq_class(z, den), mpq_class(w, den)};
  for (auto& q : e.parts[0].quat) q.canonicalize();
  return e;
}

AlgebraElement field_el(const SemisimpleAlgebra& a, const mpq_class& c0, const mpq_class& c1) {
  AlgebraElement e = algebra_zero(a);
  e.parts[0].entries[0] = FieldElement{*a.components[0].center, {c0, c1}};
  return e;
}

Idele one_prime_idele(const SemisimpleAlgebra& a, std::size_t ci, long p, ComponentElement v) {
  Idele x = trivial_idele(a);
  x.finite.emplace(std::make_pair(ci, p), std::move(v));
  return x;
}

/* Independent oracle for the p-part of the generalized index [O : aO]:
 * sum over components of (degree weight) * v_p of the rational norm of the
 * component's reduced norm.  Weight 1 for fields, n for n x n matrices, 2 for
 * quaternions. */
long index_vp_oracle(const Idele& a, long p) {
  long total = 0;
  for (const auto& [key, v] : a.finite) {
    if (key.second != p) continue;
    long weight = 1;
    switch (v.comp->kind) {
      case ComponentKind::Field: weight = 1; break;
      case ComponentKind::Matrix: weight = static_cast<long>(v.comp->n); break;
      case ComponentKind::Quaternion: weight = 2; break;
    }
    total += weight * qval(norm(component_reduced_norm(v)), p);
  }
  return total;
}

}  // namespace

TEST_CASE("hurwitz order: construction and structure") {
  QuatSetup s;
  CHECK(s.O.dim() == 4);
  // omega = (1+i+j+k)/2 has integral products with everything
  auto omega = order_coords(s.O, quat_el(s.A, 1, 1, 1, 1, 2));
  CHECK(omega == std::vector<mpq_class>{0, 0, 0, 1});
  auto k_coords = order_coords(s.O, quat_el(s.A, 0, 0, 0, 1));
  CHECK(k_coords == std::vector<mpq_class>{-1, -1, -1, 2});

  // round trip through order coordinates
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    AlgebraElement x = quat_el(s.A, rng.range(-9, 9), rng.range(-9, 9), rng.range(-9, 9),
                               rng.range(-9, 9));
    CHECK(element_of_order_coords(s.O, order_coords(s.O, x)) == x);
  }

  // multiplication through the structure tensor agrees with algebra multiplication
  for (int t = 0; t < 50; ++t) {
    AlgebraElement x = quat_el(s.A, rng.range(-5, 5), rng.range(-5, 5), rng.range(-5, 5),
                               rng.range(-5, 5));
    AlgebraElement y = quat_el(s.A, rng.range(-5, 5), rng.range(-5, 5), rng.range(-5, 5),
                               rng.range(-5, 5));
    CHECK(order_coords_mul(s.O, order_coords(s.O, x), order_coords(s.O, y)) ==
          order_coords(s.O, x * y));
  }
}

TEST_CASE("order validation rejects bad bases") {
  SemisimpleAlgebra A = SemisimpleAlgebra::of({quaternion_component(-1, -1)});
  auto q = [&](long x, long y, long z, long w, long den) {
    AlgebraElement e = algebra_zero(A);
    e.parts[0].quat = {mpq_class(x, den), mpq_class(y, den), mpq_class(z, den),
                       mpq_class(w, den)};
    for (auto& v : e.parts[0].quat) v.canonicalize();
    return e;
  };
  // does not contain 1
  CHECK_THROWS_AS(
      make_order(A, {q(2, 0, 0, 0, 1), q(0, 1, 0, 0, 1), q(0, 0, 1, 0, 1), q(1, 1, 1, 1, 2)}),
      ValidationError);
  // not closed under multiplication: i/2 squares to -1/4
  CHECK_THROWS_AS(
      make_order(A, {q(1, 0, 0, 0, 1), q(0, 1, 0, 0, 2), q(0, 0, 1, 0, 1), q(0, 0, 0, 1, 1)}),
      ValidationError);
  // does not span
  CHECK_THROWS_AS(
      make_order(A, {q(1, 0, 0, 0, 1), q(0, 1, 0, 0, 1), q(0, 2, 0, 0, 1), q(0, 0, 0, 1, 1)}),
      ValidationError);
  // built-in guards
  CHECK_THROWS_AS(hurwitz_order(SemisimpleAlgebra::of({quaternion_component(-1, -3)})),
                  ValidationError);
  CHECK_THROWS_AS(maximal_order(A), UnsupportedError);
}

TEST_CASE("maximal orders of quadratic fields") {
  QuadSetup s(-5);
  CHECK(s.O.dim() == 2);
  // half-integral basis case: (1+sqrt(-3))/2 is integral
  QuadSetup t(-3);
  auto c = order_coords(t.O, field_el(t.A, mpq_class(1, 2), mpq_class(1, 2)));
  CHECK(c == std::vector<mpq_class>{0, 1});
  // product of two fields
  SemisimpleAlgebra prod = SemisimpleAlgebra::of(
      {field_component(NumberField::rationals()), field_component(NumberField::quadratic(2))});
  Order po = maximal_order(prod);
  CHECK(po.dim() == 3);
  CHECK(order_coords(po, algebra_one(prod)) == std::vector<mpq_class>{1, 1, 0});
}

TEST_CASE("local unit tests at rational primes") {
  QuatSetup h;
  RatSetup q;
  QuadSetup f(-5);

  for (long p : {2L, 3L, 5L}) {
    CHECK(is_local_unit(algebra_one(h.A), p, h.O));
    CHECK(is_local_unit(algebra_one(q.A), p, q.O));
    CHECK(is_local_unit(algebra_one(f.A), p, f.O));
  }
  // 1+i has reduced norm 2
  CHECK_FALSE(is_local_unit(quat_el(h.A, 1, 1, 0, 0), 2, h.O));
  CHECK(is_local_unit(quat_el(h.A, 1, 1, 0, 0), 3, h.O));
  // units of the order stay units everywhere
  CHECK(is_local_unit(quat_el(h.A, 1, 1, 1, 1, 2), 2, h.O));
  CHECK(is_local_unit(quat_el(h.A, 0, 1, 0, 0), 2, h.O));
  // 1/3 in Q
  AlgebraElement third = algebra_zero(q.A);
  third.parts[0].entries[0] = FieldElement::of(*q.A.components[0].center, mpq_class(1, 3));
  CHECK(is_local_unit(third, 2, q.O));
  CHECK_FALSE(is_local_unit(third, 3, q.O));
  // 1+sqrt(-5) has norm 6
  CHECK_FALSE(is_local_unit(field_el(f.A, 1, 1), 2, f.O));
  CHECK_FALSE(is_local_unit(field_el(f.A, 1, 1), 3, f.O));
  CHECK(is_local_unit(field_el(f.A, 1, 1), 7, f.O));
  // non-invertible input propagates the inversion failure
  CHECK_THROWS_AS(is_local_unit(algebra_zero(h.A), 2, h.O), ValidationError);
}

TEST_CASE("order lattices: stability check") {
  QuadSetup s(-5);
  // the prime above 2: rows (2,0) and (1,1) in the integral basis (1, sqrt(-5))
  IntMatrix m(2, 2);
  m.at(0, 0) = 2;
  m.at(1, 0) = 1;
  m.at(1, 1) = 1;
  OrderLattice p2 = order_lattice(s.O, ZLattice::from_int_rows(m));
  CHECK(order_lattice_index(p2) == 2);

  // Z + 2 sqrt(-5) Z is not an ideal
  IntMatrix bad(2, 2);
  bad.at(0, 0) = 1;
  bad.at(1, 1) = 2;
  CHECK_THROWS_AS(order_lattice(s.O, ZLattice::from_int_rows(bad)), ValidationError);

  // principal lattices have index |norm|
  CHECK(order_lattice_index(
            order_lattice(s.O, principal_order_lattice_raw(s.O, field_el(s.A, 1, 1)))) == 6);
  QuatSetup h;
  CHECK(order_lattice_index(
            order_lattice(h.O, principal_order_lattice_raw(h.O, quat_el(h.A, 1, 1, 0, 0)))) == 4);
  CHECK(order_lattice_index(
            order_lattice(h.O, principal_order_lattice_raw(h.O, quat_el(h.A, 2, 0, 0, 0)))) == 16);
}

TEST_CASE("lattice of an idele: pinned values") {
  // trivial idele gives the order itself
  QuatSetup h;
  CHECK(lattice_of_idele(trivial_idele(h.A), h.O) == unit_order_lattice(h.O));

  // 1/2 at p=2 over Z in Q gives (1/2)Z
  RatSetup q;
  ComponentElement half = component_zero(q.A.components[0]);
  half.entries[0] = FieldElement::of(*q.A.components[0].center, mpq_class(1, 2));
  OrderLattice l = lattice_of_idele(one_prime_idele(q.A, 0, 2, half), q.O);
  CHECK(l.lat.den == 2);
  CHECK(l.lat.basis.at(0, 0) == 1);
  CHECK(order_lattice_index(l) == mpq_class(1, 2));

  // 1+sqrt(-5) at p=2 gives the prime (2, 1+sqrt(-5)), not the full principal ideal
  QuadSetup f(-5);
  ComponentElement v = component_zero(f.A.components[0]);
  v.entries[0] = FieldElement{*f.A.components[0].center, {mpq_class(1), mpq_class(1)}};
  OrderLattice p2 = lattice_of_idele(one_prime_idele(f.A, 0, 2, v), f.O);
  IntMatrix m(2, 2);
  m.at(0, 0) = 2;
  m.at(1, 0) = 1;
  m.at(1, 1) = 1;
  CHECK(p2.lat == ZLattice::from_int_rows(m));

  // same component at p=3 keeps only the 3-part (3, 1+sqrt(-5))
  OrderLattice p3 = lattice_of_idele(one_prime_idele(f.A, 0, 3, v), f.O);
  CHECK(order_lattice_index(p3) == 3);
  CHECK(lattice_contains(p3.lat, {mpq_class(1), mpq_class(1)}));
  CHECK(lattice_contains(p3.lat, {mpq_class(3), mpq_class(0)}));
  CHECK_FALSE(lattice_contains(p3.lat, {mpq_class(1), mpq_class(0)}));

  // Hurwitz: 1+i at p=2 gives the two-sided maximal ideal of norm 4
  OrderLattice hp = lattice_of_idele(
      one_prime_idele(h.A, 0, 2, quat_el(h.A, 1, 1, 0, 0).parts[0]), h.O);
  CHECK(order_lattice_index(hp) == 4);
  CHECK(lattice_contains(hp.lat, order_coords(h.O, quat_el(h.A, 1, 1, 0, 0))));
  CHECK_FALSE(lattice_contains(hp.lat, order_coords(h.O, algebra_one(h.A))));

  // invalid ideles are rejected
  Idele bad = trivial_idele(q.A);
  bad.finite.emplace(std::make_pair(std::size_t{0}, 4L),
                     component_one(q.A.components[0]));
  CHECK_THROWS_AS(lattice_of_idele(bad, q.O), ValidationError);
  Idele sing = trivial_idele(q.A);
  sing.finite.emplace(std::make_pair(std::size_t{0}, 2L),
                      component_zero(q.A.components[0]));
  CHECK_THROWS_AS(lattice_of_idele(sing, q.O), ValidationError);
}

TEST_CASE("lattice of an idele: local index property") {
  Rng rng(424242);
  QuadSetup f(-5);
  QuatSetup h;

  auto random_field_value = [&](const SimpleComponent& c) {
    ComponentElement v = component_zero(c);
    for (;;) {
      std::vector<mpq_class> coords(c.center->deg);
      for (auto& q : coords)
        q = mpq_class(rng.range(-10, 10), 1 + static_cast<long>(rng.below(3)));
      for (auto& q : coords) q.canonicalize();
      v.entries[0] = FieldElement{*c.center, coords};
      if (!component_reduced_norm(v).is_zero()) return v;
    }
  };

  const long primes[] = {2, 3, 5, 7, 11};
  for (int t = 0; t < 40; ++t) {
    Idele a = trivial_idele(f.A);
    int support = 1 + static_cast<int>(rng.below(3));
    for (int s = 0; s < support; ++s)
      a.finite[{0, primes[rng.below(5)]}] = random_field_value(f.A.components[0]);
    OrderLattice l = lattice_of_idele(a, f.O);
    mpq_class idx = order_lattice_index(l);
    for (long p : primes)
      CHECK(qval(idx, p) == index_vp_oracle(a, p));
  }

  for (int t = 0; t < 25; ++t) {
    Idele a = trivial_idele(h.A);
    ComponentElement v = component_zero(h.A.components[0]);
    for (;;) {
      for (auto& q : v.quat) q = rng.range(-9, 9);
      if (!component_reduced_norm(v).is_zero()) break;
    }
    a.finite[{0, primes[rng.below(5)]}] = v;
    mpq_class idx = order_lattice_index(lattice_of_idele(a, h.O));
    for (long p : primes)
      CHECK(qval(idx, p) == index_vp_oracle(a, p));
  }

  // mixed algebra: field times 2x2 matrices, order = integers x integer matrices
  SemisimpleAlgebra mixed = SemisimpleAlgebra::of(
      {field_component(NumberField::quadratic(2)), matrix_component(2, NumberField::rationals())});
  std::vector<AlgebraElement> mb;
  for (std::size_t r = 0; r < 2; ++r) {
    AlgebraElement e = algebra_zero(mixed);
    std::vector<mpq_class> coords = {mpq_class(r == 0 ? 1 : 0), mpq_class(r == 0 ? 0 : 1)};
    e.parts[0].entries[0] = FieldElement{*mixed.components[0].center, coords};
    mb.push_back(e);
  }
  for (std::size_t idx = 0; idx < 4; ++idx) {
    AlgebraElement e = algebra_zero(mixed);
    e.parts[1].entries[idx] = FieldElement::of(*mixed.components[1].center, 1);
    mb.push_back(e);
  }
  Order mo = make_order(mixed, mb);
  for (int t = 0; t < 15; ++t) {
    Idele a = trivial_idele(mixed);
    a.finite[{0, primes[rng.below(5)]}] = random_field_value(mixed.components[0]);
    ComponentElement mv = component_zero(mixed.components[1]);
    for (;;) {
      for (auto& q : mv.entries)
        q = FieldElement::of(*mixed.components[1].center, mpq_class(rng.range(-6, 6)));
      if (!component_reduced_norm(mv).is_zero()) break;
    }
    a.finite[{1, primes[rng.below(5)]}] = mv;
    mpq_class idx2 = order_lattice_index(lattice_of_idele(a, mo));
    for (long p : primes)
      CHECK(qval(idx2, p) == index_vp_oracle(a, p));
  }
}

TEST_CASE("lattice of an idele: multiplicativity on disjoint support") {
  Rng rng(5150);
  QuadSetup f(-5);
  auto rand_val = [&]() {
    ComponentElement v = component_zero(f.A.components[0]);
    for (;;) {
      std::vector<mpq_class> c = {mpq_class(rng.range(-10, 10)), mpq_class(rng.range(-10, 10))};
      v.entries[0] = FieldElement{*f.A.components[0].center, c};
      if (!component_reduced_norm(v).is_zero()) return v;
    }
  };
  for (int t = 0; t < 30; ++t) {
    Idele a = one_prime_idele(f.A, 0, 2, rand_val());
    Idele b = one_prime_idele(f.A, 0, t % 2 ? 3 : 7, rand_val());
    mpq_class ia = order_lattice_index(lattice_of_idele(a, f.O));
    mpq_class ib = order_lattice_index(lattice_of_idele(b, f.O));
    mpq_class iab = order_lattice_index(lattice_of_idele(idele_mul(a, b), f.O));
    CHECK(iab == ia * ib);
  }
}

TEST_CASE("lattice of an idele: invariance under local units") {
  Rng rng(99);
  QuatSetup h;
  for (int t = 0; t < 25; ++t) {
    ComponentElement v = component_zero(h.A.components[0]);
    for (;;) {
      for (auto& q : v.quat) q = rng.range(-9, 9);
      if (!component_reduced_norm(v).is_zero()) break;
    }
    Idele a = one_prime_idele(h.A, 0, 2, v);
    // u: a random local unit at 2 (odd reduced norm)
    ComponentElement u = component_zero(h.A.components[0]);
    for (;;) {
      for (auto& q : u.quat) q = rng.range(-9, 9);
      mpq_class nr = component_reduced_norm(u).c[0];
      if (nr != 0 && qval(nr, 2) == 0) break;
    }
    Idele ua = one_prime_idele(h.A, 0, 2, component_mul(u, v));
    CHECK(is_local_unit(embed_component(h.A, 0, u), 2, h.O));
    CHECK(lattice_of_idele(ua, h.O) == lattice_of_idele(a, h.O));
  }
}

TEST_CASE("unit-finite and norm-one predicates") {
  RatSetup q;
  QuatSetup h;
  CHECK(is_unit_finite(trivial_idele(q.A), q.O));
  CHECK(is_norm_one_idele(trivial_idele(q.A)));

  // 3 at p=3 over Z is not unit-finite
  ComponentElement three = component_zero(q.A.components[0]);
  three.entries[0] = FieldElement::of(*q.A.components[0].center, 3);
  CHECK_FALSE(is_unit_finite(one_prime_idele(q.A, 0, 3, three), q.O));
  CHECK(is_unit_finite(one_prime_idele(q.A, 0, 2, three), q.O));

  // diag(2, 1/2) at p=2 in M2(Q) has determinant 1
  SemisimpleAlgebra m = SemisimpleAlgebra::of({matrix_component(2, NumberField::rationals())});
  const NumberField& k = *m.components[0].center;
  ComponentElement dg = component_zero(m.components[0]);
  dg.entries[0] = FieldElement::of(k, 2);
  dg.entries[3] = FieldElement::of(k, mpq_class(1, 2));
  CHECK(is_norm_one_idele(one_prime_idele(m, 0, 2, dg)));

  // numeric infinite part: value 1 is unit-finite, e (numerically) is not norm-one
  Idele numeric_one = trivial_idele(q.A);
  BigComplex z(128);
  z.re = BigFloat::of(1, 128);
  numeric_one.infinite[0] = numeric_inf(z);
  CHECK(is_unit_finite(numeric_one, q.O));
  CHECK(is_norm_one_idele(numeric_one));
  BigComplex e(128);
  e.re = exp(BigFloat::of(1, 128));
  Idele numeric_e = trivial_idele(q.A);
  numeric_e.infinite[0] = numeric_inf(e);
  CHECK_FALSE(is_unit_finite(numeric_e, q.O));
  CHECK_FALSE(is_norm_one_idele(numeric_e));

  // -1 at infinity: norm one over Q (field), not over the quaternions (nr = 1 anyway)
  Idele minus = trivial_idele(h.A);
  minus.infinite[0] = exact_inf(component_scale(component_one(h.A.components[0]), -1));
  CHECK(is_norm_one_idele(minus));
  CHECK_FALSE(is_unit_finite(minus, h.O));

  // norm-one test rejects singular components
  Idele sing = trivial_idele(q.A);
  sing.infinite[0] = exact_inf(component_zero(q.A.components[0]));
  CHECK_THROWS_AS(is_norm_one_idele(sing), ValidationError);
}

TEST_CASE("swan elements: zero, add, compose") {
  QuadSetup f(-5);
  SwanElement z = swan_zero(f.O);
  validate_swan(z);

  ComponentElement v = component_zero(f.A.components[0]);
  v.entries[0] = FieldElement{*f.A.components[0].center, {mpq_class(1), mpq_class(1)}};
  Idele a = one_prime_idele(f.A, 0, 2, v);
  SwanElement ta = theta(a, f.O);
  CHECK(ta.P[0] == unit_order_lattice(f.O));
  CHECK(order_lattice_index(ta.Q[0]) == 2);

  SwanElement sum = swan_add(ta, z);
  CHECK(sum.P.size() == 2);
  CHECK(sum.Q.size() == 2);

  // compose [O, a, aO] with [aO, b, abO] -> [O, ba, abO]
  Idele b = one_prime_idele(f.A, 0, 2, v);
  SwanElement tb;
  tb.P = {ta.Q[0]};
  tb.phi = {b.infinite};
  tb.Q = {lattice_of_idele(idele_mul(a, b), f.O)};
  validate_swan(tb);
  SwanElement comp = swan_compose(ta, tb);
  CHECK(comp.P[0] == unit_order_lattice(f.O));
  CHECK(comp.Q[0] == tb.Q[0]);

  // middle mismatch is rejected
  CHECK_THROWS_AS(swan_compose(ta, ta), ValidationError);
}
