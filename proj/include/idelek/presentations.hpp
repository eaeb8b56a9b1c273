#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "ideles.hpp"

namespace idelek {

/* --------------------------- module descriptors --------------------------- */

/* A finitely generated module in one of three shapes: cyclic-factor data
 * (one generator per listed factor, 0 = infinite order), a full lattice over
 * an order (free as an abelian group, in its basis coordinates), or the
 * symbolic adelic object attached to an algebra.  The first two are "matrix
 * world": maps between them are integer matrices acting on row vectors. */
enum class ModuleKind { SnfModule, Lattice, Adelic };

struct ModuleDesc {
  ModuleKind kind = ModuleKind::SnfModule;
  std::vector<mpz_class> factors;
  OrderLattice lat;
  const SemisimpleAlgebra* alg = nullptr;

  bool operator==(const ModuleDesc& o) const {
    if (kind != o.kind) return false;
    if (kind == ModuleKind::Lattice) return lat == o.lat;
    if (kind == ModuleKind::Adelic) return alg == o.alg;
    return factors == o.factors;
  }
};

inline ModuleDesc zero_module() { return ModuleDesc{}; }

inline ModuleDesc free_module(std::size_t rank) {
  ModuleDesc d;
  d.factors.assign(rank, mpz_class(0));
  return d;
}

inline ModuleDesc snf_module(std::vector<mpz_class> factors) {
  for (const auto& f : factors)
    if (f < 0) throw ValidationError("InvalidPresentation", "negative cyclic factor");
  ModuleDesc d;
  d.factors = std::move(factors);
  return d;
}

inline ModuleDesc lattice_module(OrderLattice l) {
  ModuleDesc d;
  d.kind = ModuleKind::Lattice;
  d.lat = std::move(l);
  return d;
}

inline ModuleDesc adelic_module(const SemisimpleAlgebra& a) {
  ModuleDesc d;
  d.kind = ModuleKind::Adelic;
  d.alg = &a;
  return d;
}

/* -------------------------------- maps ------------------------------------ */

/* Matrix maps act on row vectors of generator coordinates, x -> x * mat.
 * Zero and Identity resolve to the obvious matrices in the matrix world and
 * are the only injection/unit shapes available over the adelic object, where
 * the remaining endomorphisms are "multiply by an idele". */
enum class MapKind { Matrix, Zero, Identity, MultiplyBy };

struct ModuleMap {
  MapKind kind = MapKind::Matrix;
  IntMatrix mat;
  Idele mult;
};

inline ModuleMap matrix_map(IntMatrix m) {
  ModuleMap f;
  f.mat = std::move(m);
  return f;
}

inline ModuleMap zero_map() {
  ModuleMap f;
  f.kind = MapKind::Zero;
  return f;
}

inline ModuleMap identity_map() {
  ModuleMap f;
  f.kind = MapKind::Identity;
  return f;
}

inline ModuleMap multiply_map(Idele a) {
  ModuleMap f;
  f.kind = MapKind::MultiplyBy;
  f.mult = std::move(a);
  return f;
}

/* Two parallel short exact sequences on the same three objects: the solid
 * (yin) pair and the dotted (yang) pair, each A -> B -> C. */
struct DoubleExactSequence {
  ModuleDesc A, B, C;
  ModuleMap yin_inj, yin_surj;
  ModuleMap yang_inj, yang_surj;
};

struct DesStatus {
  bool valid = false;
  bool degenerate = false;
};

/* ------------------------- matrix-world machinery ------------------------- */

namespace detail {

inline bool matrix_world(const ModuleDesc& d) { return d.kind != ModuleKind::Adelic; }

inline std::size_t desc_gens(const ModuleDesc& d) {
  if (d.kind == ModuleKind::Adelic)
    throw ValidationError("DimensionMismatch", "adelic object has no generator coordinates");
  return d.kind == ModuleKind::Lattice ? d.lat.lat.dim : d.factors.size();
}

/* Defining relations d_i * e_i for the finite-order generators. */
inline IntMatrix desc_relations(const ModuleDesc& d) {
  std::size_t g = desc_gens(d);
  if (d.kind == ModuleKind::Lattice) return IntMatrix(0, g);
  std::size_t t = 0;
  for (const auto& f : d.factors)
    if (f != 0) ++t;
  IntMatrix r(t, g);
  std::size_t k = 0;
  for (std::size_t i = 0; i < g; ++i)
    if (d.factors[i] != 0) r.at(k++, i) = d.factors[i];
  return r;
}

inline IntMatrix stack(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols != b.cols) throw ValidationError("DimensionMismatch", "stack");
  IntMatrix s(a.rows + b.rows, a.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) s.at(i, j) = a.at(i, j);
  for (std::size_t i = 0; i < b.rows; ++i)
    for (std::size_t j = 0; j < b.cols; ++j) s.at(a.rows + i, j) = b.at(i, j);
  return s;
}

/* Membership of v in the row span of a canonical HNF (pivots strictly to the
 * right as rows descend, no zero rows): clear pivot columns left to right by
 * exact division. */
inline bool span_contains(const IntMatrix& h, std::vector<mpz_class> v) {
  std::size_t i = 0;
  for (std::size_t j = 0; j < h.cols; ++j) {
    bool pivot_here = false;
    if (i < h.rows) {
      std::size_t lead = 0;
      while (lead < h.cols && h.at(i, lead) == 0) ++lead;
      pivot_here = lead == j;
    }
    if (pivot_here) {
      if (!mpz_divisible_p(v[j].get_mpz_t(), h.at(i, j).get_mpz_t())) return false;
      mpz_class q = v[j] / h.at(i, j);
      if (q != 0)
        for (std::size_t k = j; k < h.cols; ++k) v[k] -= q * h.at(i, k);
      ++i;
    } else if (v[j] != 0) {
      return false;
    }
  }
  return true;
}

/* Full integer preimage { x : x * m lies in the row span of rels }, as rows. */
inline IntMatrix kernel_preimage(const IntMatrix& m, const IntMatrix& rels) {
  IntMatrix s = stack(m, rels);
  IntMatrix k = left_kernel(s);
  IntMatrix proj(k.rows, m.rows);
  for (std::size_t i = 0; i < k.rows; ++i)
    for (std::size_t j = 0; j < m.rows; ++j) proj.at(i, j) = k.at(i, j);
  return proj;
}

/* Canonical form of the subgroup generated by the given rows together with
 * the relations of the ambient descriptor. */
inline IntMatrix subgroup_in(const IntMatrix& rows, const ModuleDesc& d) {
  return hnf(stack(rows, desc_relations(d)));
}

inline IntMatrix resolve_matrix(const ModuleMap& f, const ModuleDesc& src,
                                const ModuleDesc& dst) {
  std::size_t gs = desc_gens(src), gd = desc_gens(dst);
  switch (f.kind) {
    case MapKind::Matrix:
      if (f.mat.rows != gs || f.mat.cols != gd)
        throw ValidationError("DimensionMismatch", "map matrix shape does not fit the modules");
      return f.mat;
    case MapKind::Zero:
      return IntMatrix(gs, gd);
    case MapKind::Identity:
      if (gs != gd)
        throw ValidationError("DimensionMismatch", "identity between different generator counts");
      return IntMatrix::identity(gs);
    case MapKind::MultiplyBy:
      throw ValidationError("DimensionMismatch", "idele multiplication is not a matrix map");
  }
  throw ValidationError("DimensionMismatch", "unknown map kind");
}

/* The matrix represents a homomorphism iff every defining relation of the
 * source lands in the relation span of the target. */
inline bool map_well_defined(const IntMatrix& m, const ModuleDesc& src, const ModuleDesc& dst) {
  IntMatrix rs = desc_relations(src);
  IntMatrix rd = hnf(desc_relations(dst));
  for (std::size_t i = 0; i < rs.rows; ++i) {
    std::vector<mpz_class> v(m.cols, 0);
    for (std::size_t j = 0; j < m.cols; ++j)
      for (std::size_t k = 0; k < m.rows; ++k) v[j] += rs.at(i, k) * m.at(k, j);
    if (!span_contains(rd, std::move(v))) return false;
  }
  return true;
}

/* Equality of two matrices as homomorphisms into dst (difference of every
 * generator image lies in the target relations). */
inline bool homs_equal(const IntMatrix& a, const IntMatrix& b, const ModuleDesc& dst) {
  if (a.rows != b.rows || a.cols != b.cols) return false;
  IntMatrix rd = hnf(desc_relations(dst));
  for (std::size_t i = 0; i < a.rows; ++i) {
    std::vector<mpz_class> v(a.cols);
    for (std::size_t j = 0; j < a.cols; ++j) v[j] = a.at(i, j) - b.at(i, j);
    if (!span_contains(rd, std::move(v))) return false;
  }
  return true;
}

inline bool group_trivial(const ModuleDesc& d) {
  if (d.kind != ModuleKind::SnfModule) return false;
  for (const auto& f : d.factors)
    if (f != 1) return false;
  return true;
}

inline bool idele_structurally_one(const Idele& a) {
  for (const auto& [key, v] : a.finite)
    if (!(v == component_one(a.A->components[key.first]))) return false;
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

/* Structural comparison of two ideles as maps: same algebra, same value at
 * every place, with unlisted finite places counting as 1. */
inline bool ideles_structurally_equal(const Idele& a, const Idele& b) {
  if (a.A != b.A) return false;
  auto value_matches = [&](const Idele& x, const Idele& y,
                           const std::pair<std::size_t, long>& key) {
    auto it = x.finite.find(key);
    auto jt = y.finite.find(key);
    const ComponentElement one = component_one(x.A->components[key.first]);
    const ComponentElement& xv = it == x.finite.end() ? one : it->second;
    const ComponentElement& yv = jt == y.finite.end() ? one : jt->second;
    return xv == yv;
  };
  for (const auto& [key, v] : a.finite)
    if (!value_matches(a, b, key)) return false;
  for (const auto& [key, v] : b.finite)
    if (!value_matches(a, b, key)) return false;
  if (a.infinite.size() != b.infinite.size()) return false;
  for (std::size_t i = 0; i < a.infinite.size(); ++i) {
    const InfiniteValue& x = a.infinite[i];
    const InfiniteValue& y = b.infinite[i];
    if (x.is_exact != y.is_exact) return false;
    if (x.is_exact) {
      if (!(x.exact == y.exact)) return false;
    } else {
      if (!(x.numeric.re == y.numeric.re) || !(x.numeric.im == y.numeric.im)) return false;
    }
  }
  return true;
}

/* Do two map records define the same homomorphism src -> dst? */
inline bool maps_agree(const ModuleMap& f, const ModuleMap& g, const ModuleDesc& src,
                       const ModuleDesc& dst) {
  if (dst.kind == ModuleKind::Adelic) {
    if (f.kind == MapKind::Zero || g.kind == MapKind::Zero) return f.kind == g.kind;
    auto is_one = [](const ModuleMap& m) {
      return m.kind == MapKind::Identity ||
             (m.kind == MapKind::MultiplyBy && idele_structurally_one(m.mult));
    };
    if (f.kind == MapKind::MultiplyBy && g.kind == MapKind::MultiplyBy)
      return ideles_structurally_equal(f.mult, g.mult);
    return is_one(f) && is_one(g);
  }
  return homs_equal(resolve_matrix(f, src, dst), resolve_matrix(g, src, dst), dst);
}

/* Exactness of one row A -> B -> C.  Matrix world: injectivity, surjectivity
 * and im = ker are certified through Hermite forms of the relevant subgroups.
 * Adelic world: the only expressible rows are 0 -> A_adelic -> A_adelic with
 * the surjection an invertible multiplication or the identity. */
inline bool row_exact(const ModuleDesc& A, const ModuleDesc& B, const ModuleDesc& C,
                      const ModuleMap& p, const ModuleMap& r) {
  if (B.kind == ModuleKind::Adelic || C.kind == ModuleKind::Adelic ||
      A.kind == ModuleKind::Adelic) {
    if (B.kind != ModuleKind::Adelic || C.kind != ModuleKind::Adelic)
      throw ValidationError("DimensionMismatch", "adelic object mixed with matrix modules");
    if (A.kind == ModuleKind::Adelic)
      throw ValidationError("DimensionMismatch", "no injections between adelic objects");
    if (B.alg != C.alg)
      throw ValidationError("DimensionMismatch", "adelic objects over different algebras");
    if (!group_trivial(A))
      throw ValidationError("DimensionMismatch", "nontrivial module mapped into adelic object");
    if (p.kind == MapKind::Matrix || p.kind == MapKind::MultiplyBy || r.kind == MapKind::Matrix)
      throw ValidationError("DimensionMismatch", "map kind has no meaning over the adelic object");
    if (p.kind != MapKind::Zero) return false;
    if (r.kind == MapKind::Identity) return true;
    if (r.kind != MapKind::MultiplyBy) return false;
    if (r.mult.A != B.alg)
      throw ValidationError("DimensionMismatch", "multiplication idele over the wrong algebra");
    validate_idele(r.mult);
    return true;
  }
  IntMatrix pm = resolve_matrix(p, A, B);
  IntMatrix rm = resolve_matrix(r, B, C);
  if (!map_well_defined(pm, A, B) || !map_well_defined(rm, B, C)) return false;
  if (subgroup_in(kernel_preimage(pm, desc_relations(B)), A) !=
      hnf(desc_relations(A)))
    return false;
  if (subgroup_in(rm, C) != IntMatrix::identity(desc_gens(C))) return false;
  return subgroup_in(pm, B) == subgroup_in(kernel_preimage(rm, desc_relations(C)), B);
}

}  // namespace detail

/* ------------------------------- validation ------------------------------- */

inline DesStatus validate_des(const DoubleExactSequence& d) {
  DesStatus s;
  bool yin = detail::row_exact(d.A, d.B, d.C, d.yin_inj, d.yin_surj);
  bool yang = detail::row_exact(d.A, d.B, d.C, d.yang_inj, d.yang_surj);
  s.valid = yin && yang;
  s.degenerate = s.valid && detail::maps_agree(d.yin_inj, d.yang_inj, d.A, d.B) &&
                 detail::maps_agree(d.yin_surj, d.yang_surj, d.B, d.C);
  return s;
}

/* An automorphism phi of X as the class generator 0 => X => X with the two
 * surjections (phi, 1). */
inline DoubleExactSequence aut_to_des(const ModuleMap& phi, const ModuleDesc& x) {
  if (x.kind == ModuleKind::Adelic) {
    if (phi.kind == MapKind::Matrix)
      throw ValidationError("DimensionMismatch", "matrix map over the adelic object");
    if (phi.kind == MapKind::Zero)
      throw ValidationError("NotInvertible", "zero map over the adelic object");
    if (phi.kind == MapKind::MultiplyBy) {
      if (phi.mult.A != x.alg)
        throw ValidationError("DimensionMismatch", "multiplication idele over the wrong algebra");
      validate_idele(phi.mult);
    }
  } else {
    IntMatrix m = detail::resolve_matrix(phi, x, x);
    IntMatrix rels = detail::desc_relations(x);
    bool ok = detail::map_well_defined(m, x, x) &&
              detail::subgroup_in(detail::kernel_preimage(m, rels), x) == hnf(rels) &&
              detail::subgroup_in(m, x) == IntMatrix::identity(detail::desc_gens(x));
    if (!ok) throw ValidationError("NotInvertible", "map is not an automorphism of the module");
  }
  DoubleExactSequence d;
  d.A = zero_module();
  d.B = x;
  d.C = x;
  d.yin_inj = zero_map();
  d.yang_inj = zero_map();
  d.yin_surj = phi;
  d.yang_surj = identity_map();
  return d;
}

/* Class generator of an idele: 0 => A_adelic => A_adelic with surjections
 * (multiplication by a, identity).  Degenerate exactly for trivial a. */
inline DoubleExactSequence nenashev_rep(const Idele& a) {
  validate_idele(a);
  DoubleExactSequence d;
  d.A = zero_module();
  d.B = adelic_module(*a.A);
  d.C = d.B;
  d.yin_inj = zero_map();
  d.yang_inj = zero_map();
  d.yin_surj = multiply_map(a);
  d.yang_surj = identity_map();
  return d;
}

/* Field-by-field structural comparison of sequence records (not a class
 * comparison: two records may represent equal classes and still differ). */
inline bool map_records_match(const ModuleMap& f, const ModuleMap& g) {
  if (f.kind != g.kind) return false;
  if (f.kind == MapKind::Matrix) return f.mat == g.mat;
  if (f.kind == MapKind::MultiplyBy) return detail::ideles_structurally_equal(f.mult, g.mult);
  return true;
}

inline bool des_records_match(const DoubleExactSequence& a, const DoubleExactSequence& b) {
  return a.A == b.A && a.B == b.B && a.C == b.C && map_records_match(a.yin_inj, b.yin_inj) &&
         map_records_match(a.yin_surj, b.yin_surj) && map_records_match(a.yang_inj, b.yang_inj) &&
         map_records_match(a.yang_surj, b.yang_surj);
}

/* ------------------------------- 3x3 grids -------------------------------- */

/* A 3x3 grid of objects X[i][j] with a double exact sequence along every row
 * and every column.  rows[i] runs over X[i][0] -> X[i][1] -> X[i][2] and
 * cols[j] over X[0][j] -> X[1][j] -> X[2][j]. */
struct ThreeByThreeGrid {
  std::array<DoubleExactSequence, 3> rows;
  std::array<DoubleExactSequence, 3> cols;
};

namespace detail {

inline const ModuleDesc& grid_object(const ThreeByThreeGrid& g, std::size_t i, std::size_t j) {
  const DoubleExactSequence& r = g.rows[i];
  return j == 0 ? r.A : j == 1 ? r.B : r.C;
}

/* The four interlocking squares of one side (yin or yang) commute. */
inline bool grid_side_commutes(const ThreeByThreeGrid& g, bool yang) {
  auto inj = [&](const DoubleExactSequence& d) { return yang ? d.yang_inj : d.yin_inj; };
  auto surj = [&](const DoubleExactSequence& d) { return yang ? d.yang_surj : d.yin_surj; };
  auto mat = [&](const ModuleMap& f, const ModuleDesc& s, const ModuleDesc& t) {
    return resolve_matrix(f, s, t);
  };
  const ThreeByThreeGrid& G = g;
  auto X = [&](std::size_t i, std::size_t j) -> const ModuleDesc& { return grid_object(G, i, j); };
  const std::array<DoubleExactSequence, 3>& R = g.rows;
  const std::array<DoubleExactSequence, 3>& C = g.cols;
  // X00 -> X01 -> X11 against X00 -> X10 -> X11
  bool tl = homs_equal(mul(mat(inj(R[0]), X(0, 0), X(0, 1)), mat(inj(C[1]), X(0, 1), X(1, 1))),
                       mul(mat(inj(C[0]), X(0, 0), X(1, 0)), mat(inj(R[1]), X(1, 0), X(1, 1))),
                       X(1, 1));
  // X01 -> X02 -> X12 against X01 -> X11 -> X12
  bool tr = homs_equal(mul(mat(surj(R[0]), X(0, 1), X(0, 2)), mat(inj(C[2]), X(0, 2), X(1, 2))),
                       mul(mat(inj(C[1]), X(0, 1), X(1, 1)), mat(surj(R[1]), X(1, 1), X(1, 2))),
                       X(1, 2));
  // X10 -> X11 -> X21 against X10 -> X20 -> X21
  bool bl = homs_equal(mul(mat(inj(R[1]), X(1, 0), X(1, 1)), mat(surj(C[1]), X(1, 1), X(2, 1))),
                       mul(mat(surj(C[0]), X(1, 0), X(2, 0)), mat(inj(R[2]), X(2, 0), X(2, 1))),
                       X(2, 1));
  // X11 -> X12 -> X22 against X11 -> X21 -> X22
  bool br = homs_equal(mul(mat(surj(R[1]), X(1, 1), X(1, 2)), mat(surj(C[2]), X(1, 2), X(2, 2))),
                       mul(mat(surj(C[1]), X(1, 1), X(2, 1)), mat(surj(R[2]), X(2, 1), X(2, 2))),
                       X(2, 2));
  return tl && tr && bl && br;
}

}  // namespace detail

/* Certifies a grid as a relation instance: the six edge sequences must all be
 * double exact, and the diagram must commute after keeping only the yin maps,
 * and likewise after keeping only the yang maps. */
inline bool validate_3x3(const ThreeByThreeGrid& g) {
  for (std::size_t i = 0; i < 3; ++i) {
    const DoubleExactSequence& c = g.cols[i];
    if (!(detail::grid_object(g, 0, i) == c.A) || !(detail::grid_object(g, 1, i) == c.B) ||
        !(detail::grid_object(g, 2, i) == c.C))
      throw ValidationError("DimensionMismatch", "row and column objects disagree");
  }
  for (std::size_t i = 0; i < 3; ++i)
    if (!validate_des(g.rows[i]).valid || !validate_des(g.cols[i]).valid) return false;
  return detail::grid_side_commutes(g, false) && detail::grid_side_commutes(g, true);
}

/* ----------------------------- group completion --------------------------- */

/* A commutative monoid by generators and relations; each relation equates two
 * words written additively as vectors of nonnegative exponents. */
struct MonoidPresentation {
  std::size_t generators = 0;
  std::vector<std::pair<std::vector<mpz_class>, std::vector<mpz_class>>> relations;
};

/* Invariant factors of the group completion: finite cyclic orders first in
 * divisibility order, then one 0 per free summand.  Trivial factors are
 * dropped, so the trivial group comes back as an empty list. */
inline std::vector<mpz_class> group_completion(const MonoidPresentation& m) {
  IntMatrix d(m.relations.size(), m.generators);
  for (std::size_t i = 0; i < m.relations.size(); ++i) {
    const auto& [lhs, rhs] = m.relations[i];
    if (lhs.size() != m.generators || rhs.size() != m.generators)
      throw ValidationError("DimensionMismatch", "relation word length differs from generators");
    for (std::size_t j = 0; j < m.generators; ++j) {
      if (lhs[j] < 0 || rhs[j] < 0)
        throw ValidationError("InvalidPresentation", "monoid words need nonnegative exponents");
      d.at(i, j) = lhs[j] - rhs[j];
    }
  }
  std::vector<mpz_class> diag = snf(d);
  std::vector<mpz_class> out;
  std::size_t rank = 0;
  for (const auto& v : diag)
    if (v != 0) ++rank;
  for (const auto& v : diag)
    if (v > 1) out.push_back(v);
  out.insert(out.end(), m.generators - rank, mpz_class(0));
  return out;
}

}  // namespace idelek
