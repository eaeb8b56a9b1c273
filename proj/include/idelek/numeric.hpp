#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "idelek/errors.hpp"

namespace idelek {

inline mpz_class zpow(const mpz_class& b, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

inline mpq_class qpow(const mpq_class& b, long e) {
  if (e == 0) return 1;
  if (b == 0) throw ValidationError("ZeroElement", "0 has no negative power");
  mpq_class r = 1, a = e > 0 ? b : mpq_class(1 / b);
  for (long i = 0; i < (e > 0 ? e : -e); ++i) r *= a;
  return r;
}

/* p-adic valuation of a nonzero integer. */
inline long zval(const mpz_class& n, const mpz_class& p) {
  if (n == 0) throw ValidationError("ZeroElement", "valuation of 0");
  mpz_class m = abs(n);
  long v = 0;
  while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
    m /= p;
    ++v;
  }
  return v;
}

inline long qval(const mpq_class& q, const mpz_class& p) {
  if (q == 0) throw ValidationError("ZeroElement", "valuation of 0");
  return zval(q.get_num(), p) - zval(q.get_den(), p);
}

inline mpq_class parse_rat(const std::string& s) {
  mpq_class q;
  if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
    throw ValidationError("ParseError", "bad rational '" + s + "'");
  q.canonicalize();
  return q;
}

inline std::string rat_str(const mpq_class& q) { return q.get_str(); }

inline mpz_class denominator_lcm(const std::vector<mpq_class>& v) {
  mpz_class l = 1;
  for (const auto& q : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
  return l;
}

inline std::vector<long> primes_upto(long n) {
  std::vector<bool> c(n + 1, false);
  std::vector<long> ps;
  for (long i = 2; i <= n; ++i) {
    if (c[i]) continue;
    ps.push_back(i);
    for (long j = 2 * i; j <= n; j += i) c[j] = true;
  }
  return ps;
}

inline bool is_prime(const mpz_class& n) {
  return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

namespace detail {
inline mpz_class pollard_rho(const mpz_class& n) {
  if (n % 2 == 0) return 2;
  for (unsigned long c = 1;; ++c) {
    mpz_class x = 2, y = 2, d = 1;
    while (d == 1) {
      x = (x * x + c) % n;
      y = (y * y + c) % n;
      y = (y * y + c) % n;
      mpz_class diff = abs(x - y);
      if (diff == 0) break;  // cycle without factor, bump c
      mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    }
    if (d != 1 && d != n) return d;
  }
}
}  // namespace detail

/* Factor a positive integer: trial division for the common small case,
 * Pollard rho for stray large cofactors. Returns (prime, exponent) pairs in
 * increasing prime order. */
inline std::vector<std::pair<mpz_class, unsigned>> factor(mpz_class n) {
  if (n <= 0) throw ValidationError("ZeroElement", "factor() needs n > 0");
  std::vector<std::pair<mpz_class, unsigned>> out;
  auto push = [&](const mpz_class& p) {
    for (auto& pe : out)
      if (pe.first == p) {
        ++pe.second;
        return;
      }
    out.emplace_back(p, 1u);
  };
  for (mpz_class p = 2; p * p <= n && p < 100000; p += (p == 2 ? 1 : 2))
    while (n % p == 0) {
      push(p);
      n /= p;
    }
  // remaining cofactor: prime, or split recursively
  std::vector<mpz_class> stack;
  if (n > 1) stack.push_back(n);
  while (!stack.empty()) {
    mpz_class m = stack.back();
    stack.pop_back();
    if (is_prime(m)) {
      push(m);
      continue;
    }
    mpz_class d = detail::pollard_rho(m);
    stack.push_back(d);
    stack.push_back(m / d);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

}  // namespace idelek
