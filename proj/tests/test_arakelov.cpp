#include <catch2/catch_amalgamated.hpp>

#include <gmpxx.h>

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "idelek/arakelov.hpp"
#include "idelek/rng.hpp"

using namespace idelek;

namespace {

struct FieldSetup {
  SemisimpleAlgebra A;
  Order O;
  explicit FieldSetup(long d) {
    A = SemisimpleAlgebra::of({field_component(
        d == 1 ? NumberField::rationals() : NumberField::quadratic(d))});
    O = maximal_order(A);
  }
  const NumberField& K() const { return *A.components[0].center; }
};

ComponentElement fe(const SemisimpleAlgebra& a, std::vector<mpq_class> c) {
  ComponentElement e;
  e.comp = &a.components[0];
  e.entries = {FieldElement{*a.components[0].center, std::move(c)}};
  return e;
}

FieldElement rand_elem(Rng& rng, const NumberField& k) {
  for (;;) {
    std::vector<mpq_class> c(k.deg);
    for (auto& q : c) q = rng.range(-5, 5);
    FieldElement x{k, c};
    if (!x.is_zero()) return x;
  }
}

Idele rand_field_idele(Rng& rng, const SemisimpleAlgebra& a, bool allow_numeric) {
  const NumberField& k = *a.components[0].center;
  Idele x = trivial_idele(a);
  for (long p : {2L, 3L, 5L}) {
    if (!rng.flip()) continue;
    x.finite.emplace(std::make_pair(std::size_t{0}, p), fe(a, rand_elem(rng, k).c));
  }
  for (unsigned v = 0; v < x.infinite.size(); ++v) {
    FieldElement w = rand_elem(rng, k);
    if (allow_numeric && rng.flip())
      x.infinite[v] = numeric_inf(embed(w, v, 192));
    else
      x.infinite[v] = exact_inf(fe(a, w.c));
  }
  return x;
}

long mult_at(const ArakelovDivisor& d, long p, unsigned idx) {
  auto it = d.finite.find({mpz_class(p), idx});
  return it == d.finite.end() ? 0 : it->second;
}

FieldElement fpow(const FieldElement& x, long e) {
  FieldElement r = FieldElement::of(*x.F, 1);
  FieldElement b = e >= 0 ? x : r / x;
  for (long i = 0; i < (e >= 0 ? e : -e); ++i) r = r * b;
  return r;
}

/* Rational primes that can carry a nonzero valuation of f: the support used
 * by the divisor construction, recomputed here from first principles. */
std::set<mpz_class> support_primes(const FieldElement& f) {
  std::set<mpz_class> supp;
  mpq_class nf = norm(f);
  for (const auto& [p, e] : factor(abs(nf.get_num()))) supp.insert(p);
  for (const auto& [p, e] : factor(nf.get_den())) supp.insert(p);
  mpz_class den = 1;
  for (const auto& q : f.c) den = lcm(den, q.get_den());
  for (const auto& [p, e] : factor(den)) supp.insert(p);
  return supp;
}

/* An idele with the same field element at every place, finite and infinite:
 * the image of f under the diagonal embedding. */
Idele diagonal_idele(const SemisimpleAlgebra& a, const FieldElement& f) {
  Idele x = trivial_idele(a);
  for (const auto& p : support_primes(f))
    x.finite.emplace(std::make_pair(std::size_t{0}, p.get_si()), fe(a, f.c));
  for (unsigned v = 0; v < x.infinite.size(); ++v) x.infinite[v] = exact_inf(fe(a, f.c));
  return x;
}

/* Sum of residue degrees times multiplicities over each rational prime must
 * reproduce the valuation of the field norm; this ties the divisor of an
 * element to plain rational arithmetic with no shared code path. */
void check_norm_bookkeeping(const FieldElement& f, const ArakelovDivisor& d) {
  std::set<mpz_class> ps;
  for (const auto& [key, m] : d.finite) ps.insert(key.first);
  mpq_class nf = norm(f);
  for (const auto& p : ps) {
    auto primes = factor_prime(*f.F, p);
    long lhs = 0;
    for (unsigned i = 0; i < primes.size(); ++i) lhs += long(primes[i].f) * mult_at(d, p.get_si(), i);
    CHECK(lhs == qval(nf, p));
  }
  std::set<mpz_class> np;
  for (const auto& [p, e] : factor(abs(nf.get_num()))) np.insert(p);
  for (const auto& [p, e] : factor(nf.get_den())) np.insert(p);
  for (const auto& p : np)
    if (qval(nf, p) != 0) CHECK(ps.count(p) == 1);
}

BigComplex circle_point(long a, long b, mpfr_prec_t prec) {
  BigFloat n = sqrt(BigFloat::of(a * a + b * b, prec));
  BigComplex z(prec);
  z.re = BigFloat::of(a, prec) / n;
  z.im = BigFloat::of(b, prec) / n;
  return z;
}

}  // namespace

TEST_CASE("element divisors: valuation bookkeeping against field norms") {
  FieldSetup q(1), gi(-1), f5(-5), r2(2);

  // 2 in Q: one finite place with multiplicity one, log 2 at infinity
  ArakelovDivisor d2 = principal_divisor(FieldElement::of(q.K(), 2), 160);
  CHECK(d2.finite.size() == 1);
  CHECK(mult_at(d2, 2, 0) == 1);
  CHECK(abs(d2.infinite[0] - log(BigFloat::of(2, 160))) < pow2(-100, 160));

  // 3/4 in Q
  ArakelovDivisor d34 = principal_divisor(FieldElement::of(q.K(), mpq_class(3, 4)), 160);
  CHECK(mult_at(d34, 2, 0) == -2);
  CHECK(mult_at(d34, 3, 0) == 1);
  CHECK(d34.finite.size() == 2);
  CHECK(abs(d34.infinite[0] - log(BigFloat::of(mpq_class(3, 4), 160))) < pow2(-100, 160));

  // 1 + sqrt(-5): one prime over 2 (ramified), one of the two primes over 3,
  // and log sqrt(6) at the complex place
  FieldElement u5{f5.K(), {1, 1}};
  ArakelovDivisor du = principal_divisor(u5, 160);
  CHECK(mult_at(du, 2, 0) == 1);
  CHECK(mult_at(du, 3, 0) + mult_at(du, 3, 1) == 1);
  CHECK((mult_at(du, 3, 0) == 0 || mult_at(du, 3, 1) == 0));
  CHECK(du.finite.size() == 2);
  BigFloat half_log6 = log(BigFloat::of(6, 160)) / BigFloat::of(2, 160);
  CHECK(abs(du.infinite[0] - half_log6) < pow2(-100, 160));
  check_norm_bookkeeping(u5, du);

  // (1+2i)/(1-2i) has norm 1; its support is only visible through the
  // coordinate denominators
  FieldElement w{gi.K(), {mpq_class(-3, 5), mpq_class(4, 5)}};
  CHECK(norm(w) == 1);
  ArakelovDivisor dw = principal_divisor(w, 160);
  CHECK(dw.finite.size() == 2);
  CHECK(mult_at(dw, 5, 0) + mult_at(dw, 5, 1) == 0);
  CHECK((mult_at(dw, 5, 0) == 1 || mult_at(dw, 5, 1) == 1));
  CHECK(abs(dw.infinite[0]) < pow2(-100, 160));

  // units have empty support and zero coefficients where the absolute value
  // is one
  ArakelovDivisor di = principal_divisor(FieldElement::theta(gi.K()), 160);
  CHECK(di.finite.empty());
  CHECK(abs(di.infinite[0]) < pow2(-100, 160));
  ArakelovDivisor d1 = principal_divisor(FieldElement::of(q.K(), 1), 160);
  CHECK(d1.finite.empty());
  CHECK(d1.infinite[0].is_zero());

  CHECK_THROWS_AS(principal_divisor(FieldElement::of(q.K(), 0)), ValidationError);

  // the finite part always realizes the principal ideal itself
  Rng rng(0xA11CE);
  for (FieldSetup* s : {&q, &gi, &f5, &r2}) {
    for (int i = 0; i < 10; ++i) {
      FieldElement f = rand_elem(rng, s->K());
      if (rng.flip()) f = f / FieldElement::of(s->K(), rng.range(1, 7));
      ArakelovDivisor d = principal_divisor(f, 160);
      CHECK(divisor_ideal(d) == principal_ideal(f));
      check_norm_bookkeeping(f, d);
    }
    // multiplicativity: divisors add when elements multiply
    FieldElement a = rand_elem(rng, s->K()), b = rand_elem(rng, s->K());
    ArakelovDivisor sum = divisor_add(principal_divisor(a, 160), principal_divisor(b, 160));
    ArakelovDivisor prod = principal_divisor(a * b, 160);
    CHECK(sum.finite == prod.finite);
    for (unsigned v = 0; v < sum.infinite.size(); ++v)
      CHECK(abs(sum.infinite[v] - prod.infinite[v]) < pow2(-100, 160));
  }
}

TEST_CASE("metrics of divisors: base values and element compatibility") {
  FieldSetup q(1), gi(-1), f5(-5), r2(2);

  MetrizedLineBundle lq = metric_of_divisor(zero_divisor(q.K()));
  CHECK(lq.norms_sq.size() == 1);
  CHECK(lq.norms_sq[0] == BigFloat::of(1, 128));
  CHECK(lq.ideal == unit_ideal(q.K()));

  MetrizedLineBundle li = metric_of_divisor(zero_divisor(gi.K()));
  CHECK(li.norms_sq[0] == BigFloat::of(2, 128));

  MetrizedLineBundle lr = metric_of_divisor(zero_divisor(r2.K()));
  CHECK(lr.norms_sq[0] == BigFloat::of(1, 128));
  CHECK(lr.norms_sq[1] == BigFloat::of(1, 128));

  // a real coefficient log 2 scales the squared norm by 1/4
  ArakelovDivisor d = zero_divisor(q.K());
  d.infinite[0] = log(BigFloat::of(2, 128));
  MetrizedLineBundle l2 = metric_of_divisor(d);
  CHECK(abs(l2.norms_sq[0] - BigFloat::of(mpq_class(1, 4), 128)) < pow2(-120, 128));

  // a degree-3 field still has a well-defined metric: one real and one
  // complex place for x^3 - 2
  NumberField cub = NumberField::create({mpq_class(-2), mpq_class(0), mpq_class(0), mpq_class(1)},
                                        RatMatrix::identity(3));
  MetrizedLineBundle lc = metric_of_divisor(zero_divisor(cub));
  REQUIRE(lc.norms_sq.size() == 2);
  CHECK(lc.norms_sq[0] == BigFloat::of(1, 128));
  CHECK(lc.norms_sq[1] == BigFloat::of(2, 128));

  // the metric of an element's divisor is the inverse square of its images
  Rng rng(0xBEE5);
  for (FieldSetup* s : {&q, &gi, &f5, &r2}) {
    for (int i = 0; i < 10; ++i) {
      FieldElement f = rand_elem(rng, s->K());
      ArakelovDivisor df = principal_divisor(f, 160);
      MetrizedLineBundle lf = metric_of_divisor(df);
      CHECK(lf.ideal == principal_ideal(f));
      for (unsigned v = 0; v < lf.norms_sq.size(); ++v) {
        BigFloat c = BigFloat::of(v < s->K().n_real ? 1 : 2, 160);
        BigFloat rel = lf.norms_sq[v] * embed(f, v, 160).abs2() / c;
        CHECK(abs(rel - BigFloat::of(1, 160)) < pow2(-64, 160));
      }
    }
  }
}

TEST_CASE("metrized class equality: principal shifts, units, and obstructions") {
  FieldSetup q(1), gi(-1), f5(-5), r2(2);

  // plain rational pins
  CHECK(pic_hat_equal(zero_divisor(q.K()), zero_divisor(q.K())));
  ArakelovDivisor off = zero_divisor(q.K());
  off.infinite[0] = BigFloat::of(1, 128);
  CHECK_FALSE(pic_hat_equal(off, zero_divisor(q.K())));
  CHECK(pic_hat_equal(principal_divisor(FieldElement::of(q.K(), 2)), zero_divisor(q.K())));

  // the fundamental unit of Q(sqrt 2) moves the coefficients without moving
  // the class; an equal pair of coefficients is not a unit vector
  FieldElement eps{r2.K(), {1, 1}};
  CHECK(pic_hat_equal(principal_divisor(eps), zero_divisor(r2.K())));
  ArakelovDivisor same = zero_divisor(r2.K());
  same.infinite[0] = embed(eps, 0, 128).log_abs();
  same.infinite[1] = same.infinite[0];
  CHECK_FALSE(pic_hat_equal(same, zero_divisor(r2.K())));
  // non-finite coefficients are rejected rather than silently compared
  ArakelovDivisor nan_div = zero_divisor(r2.K());
  nan_div.infinite[0] = log(BigFloat::of(-1, 128));
  CHECK_THROWS_AS(pic_hat_equal(nan_div, zero_divisor(r2.K())), ValidationError);
  ArakelovDivisor inf_div = zero_divisor(q.K());
  inf_div.infinite[0] = BigFloat::of(1, 128) / BigFloat::of(0, 128);
  CHECK_THROWS_AS(metric_of_divisor(inf_div), ValidationError);
  ArakelovDivisor twice = divisor_add(principal_divisor(eps), principal_divisor(eps));
  CHECK(pic_hat_equal(twice, zero_divisor(r2.K())));

  // a nonprincipal prime is an obstruction no coefficient can repair
  ArakelovDivisor p2 = zero_divisor(f5.K());
  p2.finite[{mpz_class(2), 0}] = 1;
  CHECK_FALSE(pic_hat_equal(p2, zero_divisor(f5.K())));
  // but its square is the principal ideal (2), provided the archimedean
  // coefficient follows along
  ArakelovDivisor p2sq = zero_divisor(f5.K());
  p2sq.finite[{mpz_class(2), 0}] = 2;
  CHECK_FALSE(pic_hat_equal(p2sq, zero_divisor(f5.K())));
  p2sq.infinite[0] = log(BigFloat::of(2, 128));
  CHECK(pic_hat_equal(p2sq, zero_divisor(f5.K())));

  // same shape over Q(i) with the ramified prime (1+i)
  ArakelovDivisor r = zero_divisor(gi.K());
  r.finite[{mpz_class(2), 0}] = 1;
  CHECK_FALSE(pic_hat_equal(r, zero_divisor(gi.K())));
  r.infinite[0] = log(BigFloat::of(2, 128)) / BigFloat::of(2, 128);
  CHECK(pic_hat_equal(r, zero_divisor(gi.K())));

  // principal divisors are equivalent to zero, and shifting by them is an
  // equivalence relation
  Rng rng(0xC0FFEE);
  for (FieldSetup* s : {&q, &gi, &f5, &r2}) {
    for (int i = 0; i < 8; ++i) {
      FieldElement f = rand_elem(rng, s->K());
      CHECK(pic_hat_equal(principal_divisor(f, 192), zero_divisor(s->K(), 192)));
    }
    ArakelovDivisor a = principal_divisor(rand_elem(rng, s->K()), 192);
    ArakelovDivisor b = divisor_add(a, principal_divisor(rand_elem(rng, s->K()), 192));
    ArakelovDivisor c = divisor_add(b, principal_divisor(rand_elem(rng, s->K()), 192));
    CHECK(pic_hat_equal(a, a));
    CHECK(pic_hat_equal(a, b));
    CHECK(pic_hat_equal(b, a));
    CHECK(pic_hat_equal(b, c));
    CHECK(pic_hat_equal(a, c));
    ArakelovDivisor shifted = a;
    shifted.infinite[0] = shifted.infinite[0] + BigFloat::of(mpq_class(1, 2), 192);
    CHECK_FALSE(pic_hat_equal(shifted, a));
  }

  // tolerance discipline: clearly small accepted, clearly large rejected,
  // the band in between refuses to guess
  for (long e : {-80L, -40L, -56L}) {
    ArakelovDivisor d = zero_divisor(q.K());
    d.infinite[0] = pow2(e, 128);
    if (e == -80)
      CHECK(pic_hat_equal(d, zero_divisor(q.K())));
    else if (e == -40)
      CHECK_FALSE(pic_hat_equal(d, zero_divisor(q.K())));
    else
      CHECK_THROWS_AS(pic_hat_equal(d, zero_divisor(q.K())), PrecisionExhausted);
  }

  CHECK_THROWS_AS(pic_hat_equal(zero_divisor(gi.K()), zero_divisor(f5.K())), ValidationError);
  NumberField cub = NumberField::create({mpq_class(-2), mpq_class(0), mpq_class(0), mpq_class(1)},
                                        RatMatrix::identity(3));
  CHECK_THROWS_AS(pic_hat_equal(zero_divisor(cub), zero_divisor(cub)), UnsupportedError);
}

TEST_CASE("relative K-classes project onto metrized divisors") {
  FieldSetup q(1), gi(-1), f5(-5), r2(2);

  // the trivial class lands on the zero divisor
  ArakelovDivisor z = k0_to_pic_hat(k0rel_class(trivial_idele(f5.A), f5.O));
  CHECK(z.finite.empty());
  CHECK(abs(z.infinite[0]) < pow2(-120, 128));
  CHECK(pic_hat_equal(z, zero_divisor(f5.K())));

  // a local value only counts at the primes over its own place: 1+sqrt(-5)
  // at p=2 contributes nothing at 3 even though its norm is divisible by 3
  Idele x = trivial_idele(f5.A);
  x.finite.emplace(std::make_pair(std::size_t{0}, 2L), fe(f5.A, {1, 1}));
  ArakelovDivisor dx = k0_to_pic_hat(k0rel_class(x, f5.O));
  CHECK(dx.finite.size() == 1);
  CHECK(mult_at(dx, 2, 0) == 1);
  CHECK(abs(dx.infinite[0]) < pow2(-120, 128));

  // archimedean data: exact elements go through their embedding, numeric
  // values through their absolute value
  Idele y = trivial_idele(gi.A);
  y.infinite[0] = exact_inf(fe(gi.A, {1, 1}));
  ArakelovDivisor dy = k0_to_pic_hat(k0rel_class(y, gi.O));
  BigFloat half_log2 = log(BigFloat::of(2, 128)) / BigFloat::of(2, 128);
  CHECK(abs(dy.infinite[0] - half_log2) < pow2(-100, 128));

  Idele yn = trivial_idele(gi.A);
  BigComplex v34(192);
  v34.re = BigFloat::of(3, 192);
  v34.im = BigFloat::of(4, 192);
  yn.infinite[0] = numeric_inf(v34);
  ArakelovDivisor dn = k0_to_pic_hat(k0rel_class(yn, gi.O, 192));
  CHECK(abs(dn.infinite[0] - log(BigFloat::of(5, 192))) < pow2(-100, 192));

  // flavor and scope guards
  CHECK_THROWS_AS(k0_to_pic_hat(frohlich_class(trivial_idele(f5.A), f5.O)), ValidationError);
  SemisimpleAlgebra h = SemisimpleAlgebra::of({quaternion_component(-1, -1)});
  Order oh = hurwitz_order(h);
  CHECK_THROWS_AS(k0_to_pic_hat(k0rel_class(trivial_idele(h), oh)), UnsupportedError);

  // multiplying by a diagonal element moves neither the class nor its image
  Rng rng(0xD1A6);
  for (FieldSetup* s : {&gi, &f5, &r2}) {
    for (int i = 0; i < 6; ++i) {
      Idele a = rand_field_idele(rng, s->A, true);
      Idele b = idele_mul(a, diagonal_idele(s->A, rand_elem(rng, s->K())));
      IdeleClass ca = k0rel_class(a, s->O, 192), cb = k0rel_class(b, s->O, 192);
      CHECK(class_equal(ca, cb));
      CHECK(pic_hat_equal(k0_to_pic_hat(ca), k0_to_pic_hat(cb)));
    }
  }
}

TEST_CASE("divisor lifting hits prescribed valuations and coefficients") {
  Rng rng(0x11F7);
  for (long d : {1L, -1L, -5L, 2L}) {
    FieldSetup s(d);
    const NumberField& k = s.K();
    for (long p : {2L, 5L}) {
      auto primes = factor_prime(k, mpz_class(p));
      // one-hot elements: valuation 1 at primes[i] and 0 at the others
      std::vector<FieldElement> onehot;
      for (unsigned i = 0; i < primes.size(); ++i) {
        std::optional<FieldElement> u;
        for (long c0 = -9; c0 <= 9 && !u; ++c0)
          for (long c1 = -9; c1 <= 9 && !u; ++c1) {
            if (c0 == 0 && (k.deg < 2 || c1 == 0)) continue;
            std::vector<mpq_class> co(k.deg);
            co[0] = c0;
            if (k.deg > 1) co[1] = c1;
            FieldElement cand{k, co};
            bool ok = true;
            for (unsigned j = 0; j < primes.size(); ++j)
              if (element_valuation(cand, primes[j]) != (j == i ? 1 : 0)) ok = false;
            if (ok) u = cand;
          }
        REQUIRE(u.has_value());
        onehot.push_back(*u);
      }
      for (int iter = 0; iter < 4; ++iter) {
        ArakelovDivisor target = zero_divisor(k, 192);
        FieldElement lift = FieldElement::of(k, 1);
        for (unsigned i = 0; i < primes.size(); ++i) {
          long t = rng.range(-2, 2);
          if (t != 0) target.finite[{mpz_class(p), i}] = t;
          lift = lift * fpow(onehot[i], t);
        }
        Idele a = trivial_idele(s.A);
        a.finite.emplace(std::make_pair(std::size_t{0}, p), fe(s.A, lift.c));
        for (unsigned v = 0; v < a.infinite.size(); ++v) {
          mpq_class xv(rng.range(-3, 3), 2);
          xv.canonicalize();
          target.infinite[v] = BigFloat::of(xv, 192);
          BigComplex zv(192);
          zv.re = exp(BigFloat::of(xv, 192));
          a.infinite[v] = numeric_inf(zv);
        }
        ArakelovDivisor img = k0_to_pic_hat(k0rel_class(a, s.O, 192));
        CHECK(pic_hat_equal(img, target));
      }
    }
  }
}

TEST_CASE("angular parts: torus directions modulo roots of unity") {
  FieldSetup q(1), gi(-1), f5(-5), r2(2);

  // i is a root of unity, so its direction is trivial
  Idele xi = trivial_idele(gi.A);
  xi.infinite[0] = exact_inf(fe(gi.A, {0, 1}));
  AngularElement ai = angular_part(k0rel_class(xi, gi.O));
  CHECK(angular_equal(ai, trivial_angular(gi.K())));

  // a direction of slope 3/4 is not trivial, equals itself, equals its own
  // quarter turn, and differs from slope 1/2
  auto circle_class = [&](long a, long b) {
    Idele x = trivial_idele(gi.A);
    x.infinite[0] = numeric_inf(circle_point(a, b, 192));
    return k0rel_class(x, gi.O, 192);
  };
  AngularElement a34 = angular_part(circle_class(4, 3));
  CHECK_FALSE(angular_equal(a34, trivial_angular(gi.K())));
  CHECK(angular_equal(a34, a34));
  AngularElement a34r = angular_part(circle_class(-3, 4));
  CHECK(angular_equal(a34, a34r));
  AngularElement a12 = angular_part(circle_class(2, 1));
  CHECK_FALSE(angular_equal(a34, a12));

  // real quadratic: sign vectors modulo the diagonal
  Idele sgn = trivial_idele(r2.A);
  sgn.infinite[0] = exact_inf(fe(r2.A, {-1, 0}));
  AngularElement both = angular_part(k0rel_class(sgn, r2.O));
  CHECK_FALSE(angular_equal(both, trivial_angular(r2.K())));
  sgn.infinite[1] = exact_inf(fe(r2.A, {-1, 0}));
  AngularElement diag = angular_part(k0rel_class(sgn, r2.O));
  CHECK(angular_equal(diag, trivial_angular(r2.K())));

  // the unit-adjusted generator absorbs a fundamental-unit stretch: the
  // archimedean images of -eps give the diagonal sign class
  FieldElement eps{r2.K(), {1, 1}};
  Idele ue = trivial_idele(r2.A);
  FieldElement meps = FieldElement::of(r2.K(), -1) * eps;
  ue.infinite[0] = exact_inf(fe(r2.A, meps.c));
  ue.infinite[1] = exact_inf(fe(r2.A, meps.c));
  AngularElement aeps = angular_part(k0rel_class(ue, r2.O));
  CHECK(angular_equal(aeps, trivial_angular(r2.K())));

  // kernel guards: a nonprincipal finite part, then a principal one whose
  // archimedean data is off the principal fiber
  Idele bad = trivial_idele(f5.A);
  bad.finite.emplace(std::make_pair(std::size_t{0}, 2L), fe(f5.A, {1, 1}));
  CHECK_THROWS_AS(angular_part(k0rel_class(bad, f5.O)), ValidationError);
  Idele off = trivial_idele(gi.A);
  off.finite.emplace(std::make_pair(std::size_t{0}, 2L), fe(gi.A, {1, 1}));
  CHECK_THROWS_AS(angular_part(k0rel_class(off, gi.O)), ValidationError);

  // a radial perturbation inside the guard band cannot be decided
  Idele band = trivial_idele(q.A);
  BigComplex near(256);
  near.re = BigFloat::of(1, 256) + pow2(-56, 256);
  band.infinite[0] = numeric_inf(near);
  CHECK_THROWS_AS(angular_part(k0rel_class(band, q.O, 256)), PrecisionExhausted);

  // directions compose along the sequence: every circle direction maps to a
  // class whose divisor is zero, and the angular part recovers the direction
  Rng rng(0x5EA5);
  int samples = 0;
  for (int i = 0; i < 100; ++i) {
    long a = rng.range(-9, 9), b = rng.range(-9, 9);
    if (a == 0 && b == 0) continue;
    ++samples;
    IdeleClass c = circle_class(a, b);
    CHECK(pic_hat_equal(k0_to_pic_hat(c), zero_divisor(gi.K(), 192)));
    AngularElement got = angular_part(c);
    AngularElement want;
    want.F = &gi.K();
    want.precision_bits = 192;
    want.values.push_back(circle_point(a, b, 192));
    CHECK(angular_equal(got, want));
  }
  CHECK(samples >= 90);

  // distinct directions stay distinct, both on the torus and in the class
  // group it embeds into
  std::vector<std::pair<long, long>> dirs = {{1, 0}, {3, 4}, {4, 3}, {1, 1},
                                             {5, 12}, {12, 5}, {2, 1}, {1, 2}};
  std::vector<IdeleClass> cls;
  std::vector<AngularElement> angs;
  for (auto [a, b] : dirs) {
    cls.push_back(circle_class(a, b));
    angs.push_back(angular_part(cls.back()));
  }
  for (unsigned i = 0; i < dirs.size(); ++i)
    for (unsigned j = i + 1; j < dirs.size(); ++j) {
      CHECK_FALSE(angular_equal(angs[i], angs[j]));
      CHECK_FALSE(class_equal(cls[i], cls[j]));
    }
  // while a quarter turn changes neither
  for (unsigned i = 0; i < 3; ++i) {
    IdeleClass rot = circle_class(-dirs[i].second, dirs[i].first);
    CHECK(class_equal(cls[i], rot));
    CHECK(angular_equal(angs[i], angular_part(rot)));
  }

  CHECK_THROWS_AS(angular_equal(trivial_angular(gi.K()), trivial_angular(f5.K())),
                  ValidationError);
}
