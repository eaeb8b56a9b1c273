#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <tuple>
#include <utility>
#include <vector>

#include "idelek/bigfloat.hpp"
#include "idelek/errors.hpp"
#include "idelek/numeric.hpp"

namespace idelek {

/* Polynomials over Q, coefficient vector lowest degree first, no trailing
 * zeros (the zero polynomial is the empty vector). */
using QPoly = std::vector<mpq_class>;

inline QPoly poly_trim(QPoly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

inline long poly_deg(const QPoly& p) { return static_cast<long>(p.size()) - 1; }

inline QPoly poly_add(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i < a.size()) r[i] += a[i];
    if (i < b.size()) r[i] += b[i];
  }
  return poly_trim(std::move(r));
}

inline QPoly poly_scale(QPoly a, const mpq_class& c) {
  for (auto& x : a) x *= c;
  return poly_trim(std::move(a));
}

inline QPoly poly_sub(const QPoly& a, const QPoly& b) {
  return poly_add(a, poly_scale(b, -1));
}

inline QPoly poly_mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return poly_trim(std::move(r));
}

/* quotient and remainder, divisor nonzero */
inline std::pair<QPoly, QPoly> poly_divmod(QPoly a, const QPoly& b) {
  if (b.empty()) throw ValidationError("ZeroElement", "division by zero polynomial");
  QPoly q;
  while (a.size() >= b.size()) {
    mpq_class c = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    if (q.size() < shift + 1) q.resize(shift + 1);
    q[shift] += c;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
    a = poly_trim(std::move(a));
    if (a.empty()) break;
  }
  return {poly_trim(std::move(q)), std::move(a)};
}

inline QPoly poly_mod(const QPoly& a, const QPoly& b) { return poly_divmod(a, b).second; }

inline QPoly poly_derivative(const QPoly& p) {
  QPoly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
  return poly_trim(std::move(d));
}

inline mpq_class poly_eval(const QPoly& p, const mpq_class& x) {
  mpq_class v = 0;
  for (std::size_t i = p.size(); i-- > 0;) v = v * x + p[i];
  return v;
}

inline BigFloat poly_eval(const QPoly& p, const BigFloat& x) {
  BigFloat v(x.prec());
  for (std::size_t i = p.size(); i-- > 0;) v = v * x + BigFloat::of(p[i], x.prec());
  return v;
}

/* monic gcd */
inline QPoly poly_gcd(QPoly a, QPoly b) {
  while (!b.empty()) {
    QPoly r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty() && a.back() != 1) a = poly_scale(a, mpq_class(1) / a.back());
  return a;
}

/* extended gcd: returns (g, s, t) with s*a + t*b = g, g monic */
inline std::tuple<QPoly, QPoly, QPoly> poly_xgcd(QPoly a, QPoly b) {
  QPoly s0{mpq_class(1)}, s1, t0, t1{mpq_class(1)};
  while (!b.empty()) {
    auto [q, r] = poly_divmod(a, b);
    a = std::move(b);
    b = std::move(r);
    QPoly s2 = poly_sub(s0, poly_mul(q, s1));
    QPoly t2 = poly_sub(t0, poly_mul(q, t1));
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (!a.empty() && a.back() != 1) {
    mpq_class inv = mpq_class(1) / a.back();
    a = poly_scale(a, inv);
    s0 = poly_scale(s0, inv);
    t0 = poly_scale(t0, inv);
  }
  return {std::move(a), std::move(s0), std::move(t0)};
}

/* ----------------------------- Sturm theory ----------------------------- */

inline std::vector<QPoly> sturm_sequence(const QPoly& f) {
  std::vector<QPoly> seq;
  QPoly g = poly_gcd(f, poly_derivative(f));
  QPoly sf = g.size() <= 1 ? f : poly_divmod(f, g).first;  // squarefree part
  seq.push_back(sf);
  seq.push_back(poly_derivative(sf));
  while (!seq.back().empty()) {
    QPoly r = poly_scale(poly_mod(seq[seq.size() - 2], seq.back()), -1);
    seq.push_back(std::move(r));
  }
  seq.pop_back();
  return seq;
}

inline int sgn(const mpq_class& q) { return mpq_sgn(q.get_mpq_t()); }

inline int sturm_variations_at(const std::vector<QPoly>& seq, const mpq_class& x) {
  int var = 0, last = 0;
  for (const auto& p : seq) {
    int s = sgn(poly_eval(p, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++var;
    last = s;
  }
  return var;
}

inline int sturm_variations_at_inf(const std::vector<QPoly>& seq, int dir) {
  int var = 0, last = 0;
  for (const auto& p : seq) {
    if (p.empty()) continue;
    int s = sgn(p.back());
    if (dir < 0 && poly_deg(p) % 2 == 1) s = -s;
    if (s == 0) continue;
    if (last != 0 && s != last) ++var;
    last = s;
  }
  return var;
}

inline int count_real_roots(const QPoly& f) {
  auto seq = sturm_sequence(f);
  return sturm_variations_at_inf(seq, -1) - sturm_variations_at_inf(seq, +1);
}

/* Isolating intervals (a, b] for all real roots of f, ascending. A rational
 * root may come back as the degenerate interval [r, r]. */
inline std::vector<std::pair<mpq_class, mpq_class>> isolate_real_roots(const QPoly& f) {
  auto seq = sturm_sequence(f);
  const QPoly& sf = seq[0];
  mpq_class bound = 1;
  for (const auto& c : sf) {
    mpq_class t = abs(c / sf.back());
    if (t > bound) bound = t;
  }
  bound += 1;
  std::vector<std::pair<mpq_class, mpq_class>> work{{-bound, bound}}, out;
  auto count_in = [&](const mpq_class& a, const mpq_class& b) {
    return sturm_variations_at(seq, a) - sturm_variations_at(seq, b);
  };
  while (!work.empty()) {
    auto [a, b] = work.back();
    work.pop_back();
    int n = count_in(a, b);
    if (n == 0) continue;
    if (n == 1) {
      out.emplace_back(a, b);
      continue;
    }
    // split at a non-root point so the halves partition the roots
    mpq_class mid = (a + b) / 2;
    for (long j = 3; poly_eval(sf, mid) == 0; j += 2) mid = a + (b - a) / j;
    work.emplace_back(mid, b);
    work.emplace_back(a, mid);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& l, const auto& r) { return l.second < r.second; });
  return out;
}

/* Bisect a Sturm isolating interval (a, b] down to relative width
 * 2^-(prec+16), then round into a BigFloat. Exact rational roots hit along
 * the way are returned exactly. */
inline BigFloat refine_root(const QPoly& f, std::pair<mpq_class, mpq_class> iv,
                            mpfr_prec_t prec) {
  auto seq = sturm_sequence(f);
  const QPoly& sf = seq[0];
  auto [a, b] = std::move(iv);
  if (a == b) return BigFloat::of(a, prec);
  if (poly_eval(sf, b) == 0) return BigFloat::of(b, prec);
  // shrink until the left endpoint is clean, using Sturm counts
  while (poly_eval(sf, a) == 0) {
    mpq_class mid = (a + b) / 2;
    if (poly_eval(sf, mid) == 0) return BigFloat::of(mid, prec);
    if (sturm_variations_at(seq, mid) - sturm_variations_at(seq, b) == 1)
      a = mid;
    else
      b = mid;
  }
  int sa = sgn(poly_eval(sf, a));
  mpq_class width = b - a;
  mpq_class target = qpow(mpq_class(1, 2), static_cast<long>(prec) + 16);
  mpq_class scale = abs(b);
  if (scale < 1) scale = 1;
  while (width > target * scale) {
    mpq_class mid = (a + b) / 2;
    int sm = sgn(poly_eval(sf, mid));
    if (sm == 0) return BigFloat::of(mid, prec);
    if (sm == sa)
      a = mid;
    else
      b = mid;
    width = b - a;
  }
  return BigFloat::of(mpq_class((a + b) / 2), prec);
}

/* ----------------------- irreducibility over Q ----------------------- */

namespace detail {
inline std::vector<mpz_class> all_divisors(const mpz_class& n) {
  std::vector<mpz_class> ds{1};
  for (const auto& [p, e] : factor(abs(n))) {
    std::size_t sz = ds.size();
    mpz_class pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < sz; ++i) ds.push_back(ds[i] * pk);
    }
  }
  std::size_t sz = ds.size();
  for (std::size_t i = 0; i < sz; ++i) ds.push_back(-ds[i]);
  return ds;
}
}  // namespace detail

/* Kronecker interpolation test for a monic integer polynomial of degree <= 6:
 * any degree-d factor is pinned by its values on d+1 points, and those values
 * divide the values of f. Exhaustive at blackboard scale. */
inline bool poly_irreducible(const QPoly& f) {
  long n = poly_deg(f);
  if (n <= 0) throw ValidationError("ValidationError", "constant defining polynomial");
  for (const auto& c : f)
    if (c.get_den() != 1)
      throw ValidationError("ValidationError", "defining polynomial must have integer coefficients");
  if (n == 1) return true;
  if (n > 6) throw UnsupportedError("UnsupportedField", "irreducibility check capped at degree 6");
  for (long d = 1; d <= n / 2; ++d) {
    // evaluation points 0, 1, -1, 2, -2, ...
    std::vector<mpq_class> pts;
    for (long k = 0; static_cast<long>(pts.size()) < d + 1; ++k) {
      mpq_class x = (k % 2 == 1) ? mpq_class((k + 1) / 2) : mpq_class(-(k / 2));
      if (poly_eval(f, x) == 0) return false;  // rational root
      pts.push_back(x);
    }
    std::vector<std::vector<mpz_class>> choices;
    for (const auto& x : pts) choices.push_back(detail::all_divisors(poly_eval(f, x).get_num()));
    std::vector<std::size_t> idx(pts.size(), 0);
    for (;;) {
      // Lagrange interpolation through (pts[i], choices[i][idx[i]])
      QPoly g;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        QPoly li{mpq_class(choices[i][idx[i]])};
        for (std::size_t j = 0; j < pts.size(); ++j) {
          if (i == j) continue;
          li = poly_mul(li, QPoly{-pts[j] / (pts[i] - pts[j]), 1 / (pts[i] - pts[j])});
        }
        g = poly_add(g, li);
      }
      bool ok = poly_deg(g) >= 1;
      for (const auto& c : g)
        if (c.get_den() != 1) ok = false;
      if (ok && poly_mod(f, g).empty()) return false;
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == choices[k].size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
  }
  return true;
}

/* --------------------- factorization modulo a prime --------------------- */

/* Monic polynomials over F_p, p < 2^31, coefficients 0..p-1, low first. */
struct ModPoly {
  long p = 0;
  std::vector<long> c;
};

namespace modp {

inline std::vector<long> trim(std::vector<long> v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
  return v;
}

inline std::vector<long> mul(const std::vector<long>& a, const std::vector<long>& b, long p) {
  if (a.empty() || b.empty()) return {};
  std::vector<long> r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return trim(std::move(r));
}

inline long inv(long a, long p) {
  long t = 0, nt = 1, r = p, nr = ((a % p) + p) % p;
  while (nr != 0) {
    long q = r / nr;
    long t2 = t - q * nt;
    t = nt;
    nt = t2;
    long r2 = r - q * nr;
    r = nr;
    nr = r2;
  }
  return (t % p + p) % p;
}

/* divide a by monic-izable b; returns (quotient, remainder) */
inline std::pair<std::vector<long>, std::vector<long>> divmod(std::vector<long> a,
                                                              const std::vector<long>& b,
                                                              long p) {
  std::vector<long> q;
  long binv = inv(b.back(), p);
  while (a.size() >= b.size()) {
    long c = a.back() * binv % p;
    std::size_t shift = a.size() - b.size();
    if (q.size() < shift + 1) q.resize(shift + 1, 0);
    q[shift] = (q[shift] + c) % p;
    for (std::size_t i = 0; i < b.size(); ++i)
      a[shift + i] = ((a[shift + i] - c * b[i]) % p + p) % p;
    a = trim(std::move(a));
    if (a.empty()) break;
  }
  return {trim(std::move(q)), std::move(a)};
}

inline long eval(const std::vector<long>& f, long x, long p) {
  long v = 0;
  for (std::size_t i = f.size(); i-- > 0;) v = (v * x + f[i]) % p;
  return v;
}

}  // namespace modp

/* Factor a monic polynomial over F_p into monic irreducible factors with
 * multiplicities, by root scanning plus trial division over all monic
 * polynomials of ascending degree. Exponential in general; fine for p and
 * degree at blackboard scale. */
inline std::vector<std::pair<ModPoly, unsigned>> factor_mod_p(const QPoly& f, long p) {
  std::vector<long> g;
  for (const auto& c : f) {
    if (zval(c.get_den(), p) != 0)
      throw ValidationError("ValidationError", "polynomial has p in a denominator");
    mpz_class num = c.get_num() % p, den = c.get_den() % p;
    long v = mpz_class((num * mpz_class(modp::inv(den.get_si() % p, p))) % p).get_si();
    g.push_back(((v % p) + p) % p);
  }
  g = modp::trim(std::move(g));
  if (g.empty() || g.size() == 1)
    throw ValidationError("ValidationError", "factor_mod_p needs positive degree");
  // make monic
  long lead_inv = modp::inv(g.back(), p);
  for (auto& x : g) x = x * lead_inv % p;

  std::vector<std::pair<ModPoly, unsigned>> out;
  auto record = [&](const std::vector<long>& irr) {
    for (auto& fe : out)
      if (fe.first.c == irr) {
        ++fe.second;
        return;
      }
    out.push_back({ModPoly{p, irr}, 1u});
  };
  // linear factors
  for (long r = 0; r < p && g.size() > 1; ++r) {
    while (g.size() > 1 && modp::eval(g, r, p) == 0) {
      std::vector<long> lin{(p - r) % p, 1};
      g = modp::divmod(g, lin, p).first;
      record(lin);
    }
  }
  // higher-degree factors by exhaustive monic trial division
  for (long d = 2; g.size() > 1 && d <= static_cast<long>(g.size() - 1) / 2; ++d) {
    // iterate monic polys x^d + c_{d-1} x^{d-1} + ... + c_0
    std::vector<long> c(d, 0);
    for (;;) {
      std::vector<long> cand(c);
      cand.push_back(1);
      for (;;) {
        auto [q, r] = modp::divmod(g, cand, p);
        if (!r.empty()) break;
        g = q;
        record(cand);
        if (g.size() <= 1) break;
      }
      if (g.size() <= 1) break;
      long k = 0;
      while (k < d && ++c[k] == p) c[k++] = 0;
      if (k == d) break;
    }
  }
  if (g.size() > 1) record(g);  // leftover is irreducible
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first.c < b.first.c; });
  return out;
}

}  // namespace idelek
