#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <utility>
#include <vector>

#include "idelek/errors.hpp"
#include "idelek/numeric.hpp"

namespace idelek {

/* Dense row-major matrices over Z and Q. Ambient dimension is capped: this
 * library works at blackboard scale and the exact algorithms below are
 * quadratic-to-cubic with fat integers. Row counts run higher because
 * generating sets get stacked before reduction. */
inline constexpr std::size_t kMaxCols = 32;
inline constexpr std::size_t kMaxRows = 4096;

struct IntMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<mpz_class> a;

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {
    if (c > kMaxCols || r > kMaxRows)
      throw ValidationError("DimensionCap", "matrix too large");
  }
  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }
  static IntMatrix from_rows(const std::vector<std::vector<mpz_class>>& r) {
    IntMatrix m(r.size(), r.empty() ? 0 : r[0].size());
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (r[i].size() != m.cols)
        throw ValidationError("DimensionMismatch", "ragged rows");
      for (std::size_t j = 0; j < m.cols; ++j) m.at(i, j) = r[i][j];
    }
    return m;
  }
  mpz_class& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const mpz_class& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
  bool operator==(const IntMatrix&) const = default;
  bool is_zero() const {
    for (const auto& x : a)
      if (x != 0) return false;
    return true;
  }
};

inline IntMatrix mul(const IntMatrix& x, const IntMatrix& y) {
  if (x.cols != y.rows) throw ValidationError("DimensionMismatch", "mul");
  IntMatrix r(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      if (x.at(i, k) == 0) continue;
      for (std::size_t j = 0; j < y.cols; ++j) r.at(i, j) += x.at(i, k) * y.at(k, j);
    }
  return r;
}

namespace detail {

inline void swap_rows(IntMatrix& m, std::size_t i, std::size_t j) {
  for (std::size_t k = 0; k < m.cols; ++k) std::swap(m.at(i, k), m.at(j, k));
}

inline void negate_row(IntMatrix& m, std::size_t i) {
  for (std::size_t k = 0; k < m.cols; ++k) m.at(i, k) = -m.at(i, k);
}

/* row_i -= q * row_r */
inline void row_submul(IntMatrix& m, std::size_t i, std::size_t r, const mpz_class& q) {
  for (std::size_t k = 0; k < m.cols; ++k) m.at(i, k) -= q * m.at(r, k);
}

/* (row_r, row_i) <- (s*row_r + t*row_i, c*row_r + d*row_i) */
inline void row_combine(IntMatrix& m, std::size_t r, std::size_t i, const mpz_class& s,
                        const mpz_class& t, const mpz_class& c, const mpz_class& d) {
  for (std::size_t k = 0; k < m.cols; ++k) {
    mpz_class nr = s * m.at(r, k) + t * m.at(i, k);
    mpz_class ni = c * m.at(r, k) + d * m.at(i, k);
    m.at(r, k) = nr;
    m.at(i, k) = ni;
  }
}

}  // namespace detail

struct HnfResult {
  IntMatrix h;  // same shape as input, zero rows at the bottom
  IntMatrix u;  // unimodular, u * input = h
  std::size_t rank = 0;
};

/* Row-style Hermite normal form: echelon, positive pivots, entries above a
 * pivot reduced into [0, pivot). Unimodular row operations only. */
inline HnfResult hnf_transform(IntMatrix m) {
  IntMatrix u = IntMatrix::identity(m.rows);
  std::size_t r = 0;
  for (std::size_t j = 0; j < m.cols && r < m.rows; ++j) {
    std::size_t piv = m.rows;
    for (std::size_t i = r; i < m.rows; ++i)
      if (m.at(i, j) != 0) {
        piv = i;
        break;
      }
    if (piv == m.rows) continue;
    if (piv != r) {
      detail::swap_rows(m, piv, r);
      detail::swap_rows(u, piv, r);
    }
    for (std::size_t i = r + 1; i < m.rows; ++i) {
      if (m.at(i, j) == 0) continue;
      if (mpz_divisible_p(m.at(i, j).get_mpz_t(), m.at(r, j).get_mpz_t())) {
        mpz_class q = m.at(i, j) / m.at(r, j);
        detail::row_submul(m, i, r, q);
        detail::row_submul(u, i, r, q);
      } else {
        mpz_class g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), m.at(r, j).get_mpz_t(),
                   m.at(i, j).get_mpz_t());
        mpz_class c = -mpz_class(m.at(i, j) / g), d = m.at(r, j) / g;
        detail::row_combine(m, r, i, s, t, c, d);
        detail::row_combine(u, r, i, s, t, c, d);
      }
    }
    if (m.at(r, j) < 0) {
      detail::negate_row(m, r);
      detail::negate_row(u, r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), m.at(i, j).get_mpz_t(), m.at(r, j).get_mpz_t());
      if (q != 0) {
        detail::row_submul(m, i, r, q);
        detail::row_submul(u, i, r, q);
      }
    }
    ++r;
  }
  return {std::move(m), std::move(u), r};
}

/* Canonical HNF with zero rows dropped. */
inline IntMatrix hnf(const IntMatrix& m) {
  HnfResult res = hnf_transform(m);
  IntMatrix out(res.rank, m.cols);
  for (std::size_t i = 0; i < res.rank; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out.at(i, j) = res.h.at(i, j);
  return out;
}

inline std::size_t rank(const IntMatrix& m) { return hnf_transform(m).rank; }

/* Basis of { x : x * m = 0 }, saturated, in HNF. */
inline IntMatrix left_kernel(const IntMatrix& m) {
  HnfResult res = hnf_transform(m);
  IntMatrix k(m.rows - res.rank, m.rows);
  for (std::size_t i = res.rank; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.rows; ++j) k.at(i - res.rank, j) = res.u.at(i, j);
  return hnf(k);
}

namespace detail {
inline void swap_cols(IntMatrix& m, std::size_t i, std::size_t j) {
  for (std::size_t k = 0; k < m.rows; ++k) std::swap(m.at(k, i), m.at(k, j));
}
inline void col_submul(IntMatrix& m, std::size_t i, std::size_t r, const mpz_class& q) {
  for (std::size_t k = 0; k < m.rows; ++k) m.at(k, i) -= q * m.at(k, r);
}
inline void col_combine(IntMatrix& m, std::size_t r, std::size_t i, const mpz_class& s,
                        const mpz_class& t, const mpz_class& c, const mpz_class& d) {
  for (std::size_t k = 0; k < m.rows; ++k) {
    mpz_class nr = s * m.at(k, r) + t * m.at(k, i);
    mpz_class ni = c * m.at(k, r) + d * m.at(k, i);
    m.at(k, r) = nr;
    m.at(k, i) = ni;
  }
}
}  // namespace detail

/* Invariant factors d_1 | d_2 | ... (nonnegative; zeros pad up to min(r,c)).
 * Row and column operations, divisibility fixup included. */
inline std::vector<mpz_class> snf(IntMatrix m) {
  const std::size_t n = std::min(m.rows, m.cols);
  std::vector<mpz_class> d(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pi = m.rows, pj = 0;
    for (std::size_t i = k; i < m.rows && pi == m.rows; ++i)
      for (std::size_t j = k; j < m.cols; ++j)
        if (m.at(i, j) != 0) {
          pi = i;
          pj = j;
          break;
        }
    if (pi == m.rows) break;  // remaining block is zero
    if (pi != k) detail::swap_rows(m, pi, k);
    if (pj != k) detail::swap_cols(m, pj, k);
    for (;;) {
      for (std::size_t i = k + 1; i < m.rows; ++i) {
        if (m.at(i, k) == 0) continue;
        if (mpz_divisible_p(m.at(i, k).get_mpz_t(), m.at(k, k).get_mpz_t())) {
          detail::row_submul(m, i, k, mpz_class(m.at(i, k) / m.at(k, k)));
        } else {
          mpz_class g, s, t;
          mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), m.at(k, k).get_mpz_t(),
                     m.at(i, k).get_mpz_t());
          detail::row_combine(m, k, i, s, t, -mpz_class(m.at(i, k) / g),
                              mpz_class(m.at(k, k) / g));
        }
      }
      bool row_clean = true;
      for (std::size_t j = k + 1; j < m.cols; ++j) {
        if (m.at(k, j) == 0) continue;
        if (mpz_divisible_p(m.at(k, j).get_mpz_t(), m.at(k, k).get_mpz_t())) {
          detail::col_submul(m, j, k, mpz_class(m.at(k, j) / m.at(k, k)));
        } else {
          mpz_class g, s, t;
          mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), m.at(k, k).get_mpz_t(),
                     m.at(k, j).get_mpz_t());
          detail::col_combine(m, k, j, s, t, -mpz_class(m.at(k, j) / g),
                              mpz_class(m.at(k, k) / g));
          row_clean = false;
        }
      }
      if (!row_clean) continue;  // column ops may have refilled column k
      bool col_zero = true;
      for (std::size_t i = k + 1; i < m.rows; ++i) col_zero = col_zero && m.at(i, k) == 0;
      if (!col_zero) continue;
      // pivot must divide the rest of the block
      bool fixed = true;
      for (std::size_t i = k + 1; i < m.rows && fixed; ++i)
        for (std::size_t j = k + 1; j < m.cols && fixed; ++j)
          if (!mpz_divisible_p(m.at(i, j).get_mpz_t(), m.at(k, k).get_mpz_t())) {
            for (std::size_t c = 0; c < m.cols; ++c) m.at(k, c) += m.at(i, c);
            fixed = false;
          }
      if (fixed) break;
    }
    d[k] = abs(m.at(k, k));
  }
  return d;
}

/* Exact determinant by Bareiss fraction-free elimination. */
inline mpz_class det(IntMatrix m) {
  if (m.rows != m.cols) throw ValidationError("DimensionMismatch", "det of non-square");
  const std::size_t n = m.rows;
  if (n == 0) return 1;
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m.at(k, k) == 0) {
      std::size_t piv = n;
      for (std::size_t i = k + 1; i < n; ++i)
        if (m.at(i, k) != 0) {
          piv = i;
          break;
        }
      if (piv == n) return 0;
      detail::swap_rows(m, piv, k);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class t = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
        mpz_divexact(m.at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = m.at(k, k);
  }
  return sign * m.at(n - 1, n - 1);
}

struct RatMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<mpq_class> a;

  RatMatrix() = default;
  RatMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {
    if (c > kMaxCols || r > kMaxRows)
      throw ValidationError("DimensionCap", "matrix too large");
  }
  static RatMatrix identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }
  static RatMatrix of(const IntMatrix& z, const mpz_class& den = 1) {
    RatMatrix m(z.rows, z.cols);
    for (std::size_t i = 0; i < z.a.size(); ++i) {
      m.a[i] = mpq_class(z.a[i], den);
      m.a[i].canonicalize();
    }
    return m;
  }
  mpq_class& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const mpq_class& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
  bool operator==(const RatMatrix&) const = default;
};

inline RatMatrix mul(const RatMatrix& x, const RatMatrix& y) {
  if (x.cols != y.rows) throw ValidationError("DimensionMismatch", "mul");
  RatMatrix r(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      if (x.at(i, k) == 0) continue;
      for (std::size_t j = 0; j < y.cols; ++j) r.at(i, j) += x.at(i, k) * y.at(k, j);
    }
  return r;
}

inline mpq_class det(const RatMatrix& m) {
  if (m.rows != m.cols) throw ValidationError("DimensionMismatch", "det of non-square");
  // clear denominators row by row, then Bareiss on the integer part
  IntMatrix z(m.rows, m.cols);
  mpq_class scale = 1;
  for (std::size_t i = 0; i < m.rows; ++i) {
    mpz_class l = 1;
    for (std::size_t j = 0; j < m.cols; ++j)
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m.at(i, j).get_den().get_mpz_t());
    for (std::size_t j = 0; j < m.cols; ++j) {
      mpq_class v = m.at(i, j) * l;
      z.at(i, j) = v.get_num();
    }
    scale /= l;
  }
  return scale * det(z);
}

/* Gauss-Jordan inverse; throws with kind NotInvertible on singular input. */
inline RatMatrix inverse(RatMatrix m) {
  if (m.rows != m.cols) throw ValidationError("DimensionMismatch", "inverse of non-square");
  const std::size_t n = m.rows;
  RatMatrix inv = RatMatrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = n;
    for (std::size_t i = k; i < n; ++i)
      if (m.at(i, k) != 0) {
        piv = i;
        break;
      }
    if (piv == n) throw ValidationError("NotInvertible", "singular matrix");
    if (piv != k)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(m.at(piv, j), m.at(k, j));
        std::swap(inv.at(piv, j), inv.at(k, j));
      }
    mpq_class d = m.at(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      m.at(k, j) /= d;
      inv.at(k, j) /= d;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || m.at(i, k) == 0) continue;
      mpq_class f = m.at(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        m.at(i, j) -= f * m.at(k, j);
        inv.at(i, j) -= f * inv.at(k, j);
      }
    }
  }
  return inv;
}

/* Solve x * m = b for a row vector x (m square invertible). */
inline std::vector<mpq_class> solve_left(const RatMatrix& m, const std::vector<mpq_class>& b) {
  if (b.size() != m.cols) throw ValidationError("DimensionMismatch", "solve_left");
  RatMatrix inv = inverse(m);
  std::vector<mpq_class> x(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) x[i] += b[j] * inv.at(j, i);
  return x;
}

inline RatMatrix transpose(const RatMatrix& m) {
  RatMatrix t(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
  return t;
}

}  // namespace idelek
