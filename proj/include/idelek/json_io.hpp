#pragma once

#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "idelek/arakelov.hpp"
#include "idelek/presentations.hpp"

/* JSON wire formats. Rationals travel as strings "num/den" (or bare JSON
 * integers), integers inside matrices as decimal strings, floating values as
 * MPFR hex-float strings so that a parse-print round trip is bit-exact. */

namespace idelek {

using Json = nlohmann::json;

/* ------------------------------- scalars ---------------------------------- */

inline mpq_class rational_from_json(const Json& j) {
  mpq_class q;
  if (j.is_number_integer()) {
    q = static_cast<long>(j.get<long long>());
    return q;
  }
  if (!j.is_string())
    throw ValidationError("ParseError", "rational must be a string or an integer");
  if (q.set_str(j.get<std::string>(), 10) != 0)
    throw ValidationError("ParseError", "malformed rational " + j.get<std::string>());
  if (q.get_den() == 0) throw ValidationError("ParseError", "rational with denominator zero");
  q.canonicalize();
  return q;
}

inline Json rational_to_json(const mpq_class& q) { return q.get_str(); }

inline mpz_class integer_from_json(const Json& j) {
  mpq_class q = rational_from_json(j);
  if (q.get_den() != 1) throw ValidationError("ParseError", "expected an integer");
  return q.get_num();
}

inline BigFloat bigfloat_from_json(const Json& j, mpfr_prec_t prec) {
  if (!j.is_string()) throw ValidationError("ParseError", "float must be a string");
  BigFloat x(prec);
  // base 0 auto-detects the 0x hex-float form next to plain decimal
  if (mpfr_set_str(x.raw(), j.get<std::string>().c_str(), 0, MPFR_RNDN) != 0)
    throw ValidationError("ParseError", "malformed float " + j.get<std::string>());
  if (!x.is_number()) throw ValidationError("ParseError", "float must be finite");
  return x;
}

inline Json bigfloat_to_json(const BigFloat& x) {
  char* s = nullptr;
  mpfr_asprintf(&s, "%Ra", x.raw());
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

namespace detail {

inline const Json& jkey(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name))
    throw ValidationError("ParseError", std::string("missing key ") + name);
  return j[name];
}

inline const Json& jarray(const Json& j, const char* what) {
  if (!j.is_array()) throw ValidationError("ParseError", std::string(what) + " must be an array");
  return j;
}

inline std::vector<mpq_class> rational_row(const Json& j, const char* what) {
  std::vector<mpq_class> row;
  for (const auto& e : jarray(j, what)) row.push_back(rational_from_json(e));
  return row;
}

}  // namespace detail

/* ------------------------------ number fields ----------------------------- */

inline NumberField field_from_json(const Json& j) {
  QPoly poly;
  for (const auto& c : detail::jarray(detail::jkey(j, "poly"), "poly"))
    poly.push_back(rational_from_json(c));
  const Json& jb = detail::jarray(detail::jkey(j, "integral_basis"), "integral_basis");
  std::size_t n = jb.size();
  RatMatrix basis(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = detail::rational_row(jb[i], "basis row");
    if (row.size() != n)
      throw ValidationError("ParseError", "integral basis must be square");
    for (std::size_t k = 0; k < n; ++k) basis.at(i, k) = row[k];
  }
  std::map<long, std::vector<OverridePrime>> ov;
  if (j.contains("prime_overrides")) {
    const Json& jo = j["prime_overrides"];
    if (!jo.is_object()) throw ValidationError("ParseError", "prime_overrides must be an object");
    for (const auto& [pstr, list] : jo.items()) {
      long p = std::stol(pstr);
      std::vector<OverridePrime> at;
      for (const auto& e : detail::jarray(list, "override list")) {
        OverridePrime op;
        op.gen = detail::rational_row(detail::jkey(e, "gen"), "override generator");
        op.e = detail::jkey(e, "e").get<unsigned>();
        op.f = detail::jkey(e, "f").get<unsigned>();
        at.push_back(std::move(op));
      }
      ov[p] = std::move(at);
    }
  }
  return NumberField::create(std::move(poly), std::move(basis), std::move(ov));
}

inline Json field_to_json(const NumberField& F) {
  Json j;
  j["poly"] = Json::array();
  for (const auto& c : F.poly) j["poly"].push_back(rational_to_json(c));
  j["integral_basis"] = Json::array();
  for (unsigned i = 0; i < F.deg; ++i) {
    Json row = Json::array();
    for (unsigned k = 0; k < F.deg; ++k) row.push_back(rational_to_json(F.basis.at(i, k)));
    j["integral_basis"].push_back(std::move(row));
  }
  if (!F.prime_overrides.empty()) {
    Json jo = Json::object();
    for (const auto& [p, list] : F.prime_overrides) {
      Json at = Json::array();
      for (const auto& op : list) {
        Json e;
        e["gen"] = Json::array();
        for (const auto& q : op.gen) e["gen"].push_back(rational_to_json(q));
        e["e"] = op.e;
        e["f"] = op.f;
        at.push_back(std::move(e));
      }
      jo[std::to_string(p)] = std::move(at);
    }
    j["prime_overrides"] = std::move(jo);
  }
  return j;
}

/* -------------------------------- algebras -------------------------------- */

inline SemisimpleAlgebra algebra_from_json(const Json& j) {
  std::vector<SimpleComponent> comps;
  for (const auto& c : detail::jarray(detail::jkey(j, "components"), "components")) {
    std::string kind = detail::jkey(c, "kind").get<std::string>();
    if (kind == "field") {
      comps.push_back(field_component(field_from_json(c)));
    } else if (kind == "matrix") {
      comps.push_back(matrix_component(detail::jkey(c, "n").get<unsigned>(),
                                       field_from_json(detail::jkey(c, "center"))));
    } else if (kind == "quaternion") {
      comps.push_back(quaternion_component(rational_from_json(detail::jkey(c, "a")),
                                           rational_from_json(detail::jkey(c, "b"))));
    } else {
      throw ValidationError("ParseError", "unknown component kind " + kind);
    }
  }
  return SemisimpleAlgebra::of(std::move(comps));
}

inline Json algebra_to_json(const SemisimpleAlgebra& A) {
  Json j;
  j["components"] = Json::array();
  for (const auto& c : A.components) {
    Json e;
    switch (c.kind) {
      case ComponentKind::Field:
        e = field_to_json(*c.center);
        e["kind"] = "field";
        break;
      case ComponentKind::Matrix:
        e["kind"] = "matrix";
        e["n"] = c.n;
        e["center"] = field_to_json(*c.center);
        break;
      case ComponentKind::Quaternion:
        e["kind"] = "quaternion";
        e["a"] = rational_to_json(c.qa);
        e["b"] = rational_to_json(c.qb);
        break;
    }
    j["components"].push_back(std::move(e));
  }
  return j;
}

/* --------------------------------- orders --------------------------------- */

/* A parsed order keeps its algebra alive: the order (and everything built on
 * it) points into the shared allocation. */
struct LoadedOrder {
  std::shared_ptr<SemisimpleAlgebra> algebra;
  Order order;
};

inline LoadedOrder order_from_json(const Json& j) {
  auto A = std::make_shared<SemisimpleAlgebra>(algebra_from_json(detail::jkey(j, "algebra")));
  const Json& b = detail::jkey(j, "basis");
  Order o;
  if (b.is_string()) {
    std::string name = b.get<std::string>();
    if (name == "maximal")
      o = maximal_order(*A);
    else if (name == "hurwitz")
      o = hurwitz_order(*A);
    else
      throw ValidationError("ParseError", "unknown built-in basis " + name);
  } else {
    std::vector<AlgebraElement> basis;
    for (const auto& row : detail::jarray(b, "basis"))
      basis.push_back(algebra_from_coords(*A, detail::rational_row(row, "basis row")));
    o = make_order(*A, std::move(basis));
  }
  return {std::move(A), std::move(o)};
}

inline Json order_to_json(const Order& o) {
  Json j;
  j["algebra"] = algebra_to_json(*o.A);
  j["basis"] = Json::array();
  for (std::size_t i = 0; i < o.basis.size(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < o.coord_matrix.cols; ++k)
      row.push_back(rational_to_json(o.coord_matrix.at(i, k)));
    j["basis"].push_back(std::move(row));
  }
  return j;
}

/* --------------------------------- ideles --------------------------------- */

inline ComponentElement component_value_from_json(const SimpleComponent& c, const Json& j) {
  ComponentElement e;
  e.comp = &c;
  switch (c.kind) {
    case ComponentKind::Field: {
      auto coords = detail::rational_row(j, "field value");
      e.entries = {FieldElement{*c.center, std::move(coords)}};
      break;
    }
    case ComponentKind::Matrix: {
      for (const auto& entry : detail::jarray(j, "matrix value"))
        e.entries.push_back(
            FieldElement{*c.center, detail::rational_row(entry, "matrix entry")});
      if (e.entries.size() != std::size_t(c.n) * c.n)
        throw ValidationError("ParseError", "matrix value needs n*n entries");
      break;
    }
    case ComponentKind::Quaternion: {
      e.quat = detail::rational_row(j, "quaternion value");
      if (e.quat.size() != 4)
        throw ValidationError("ParseError", "quaternion value needs 4 coordinates");
      break;
    }
  }
  return e;
}

inline Json component_value_to_json(const ComponentElement& e) {
  Json j = Json::array();
  switch (e.comp->kind) {
    case ComponentKind::Field:
      for (const auto& q : e.entries[0].c) j.push_back(rational_to_json(q));
      break;
    case ComponentKind::Matrix:
      for (const auto& f : e.entries) {
        Json entry = Json::array();
        for (const auto& q : f.c) entry.push_back(rational_to_json(q));
        j.push_back(std::move(entry));
      }
      break;
    case ComponentKind::Quaternion:
      for (const auto& q : e.quat) j.push_back(rational_to_json(q));
      break;
  }
  return j;
}

inline Idele idele_from_json(const Json& j, const SemisimpleAlgebra& A, mpfr_prec_t prec = 128) {
  Idele x = trivial_idele(A);
  for (const auto& e : detail::jarray(detail::jkey(j, "finite"), "finite")) {
    std::size_t ci = detail::jkey(e, "component").get<std::size_t>();
    if (ci >= A.components.size())
      throw ValidationError("ParseError", "component index out of range");
    mpz_class p = integer_from_json(detail::jkey(e, "prime"));
    x.finite[{ci, p.get_si()}] =
        component_value_from_json(A.components[ci], detail::jkey(e, "value"));
  }
  for (const auto& e : detail::jarray(detail::jkey(j, "infinite"), "infinite")) {
    unsigned v = detail::jkey(e, "place").get<unsigned>();
    if (v >= x.infinite.size()) throw ValidationError("ParseError", "place out of range");
    std::size_t ci = infinite_place_owner(A, v).first;
    if (e.contains("exact")) {
      x.infinite[v] = exact_inf(component_value_from_json(A.components[ci], e["exact"]));
    } else {
      const Json& num = detail::jkey(e, "numeric");
      BigComplex z(prec);
      z.re = bigfloat_from_json(detail::jkey(num, "re"), prec);
      z.im = bigfloat_from_json(detail::jkey(num, "im"), prec);
      x.infinite[v] = numeric_inf(std::move(z));
    }
  }
  validate_idele(x);
  return x;
}

inline Json idele_to_json(const Idele& x) {
  Json j;
  j["finite"] = Json::array();
  for (const auto& [key, v] : x.finite) {
    Json e;
    e["component"] = key.first;
    e["prime"] = std::to_string(key.second);
    e["value"] = component_value_to_json(v);
    j["finite"].push_back(std::move(e));
  }
  j["infinite"] = Json::array();
  for (unsigned v = 0; v < x.infinite.size(); ++v) {
    Json e;
    e["place"] = v;
    if (x.infinite[v].is_exact) {
      e["exact"] = component_value_to_json(x.infinite[v].exact);
    } else {
      e["numeric"] = {{"re", bigfloat_to_json(x.infinite[v].numeric.re)},
                      {"im", bigfloat_to_json(x.infinite[v].numeric.im)}};
    }
    j["infinite"].push_back(std::move(e));
  }
  return j;
}

inline Json center_idele_to_json(const CenterIdele& c) {
  Json j;
  j["finite"] = Json::array();
  for (const auto& [key, v] : c.finite) {
    Json e;
    e["component"] = key.first;
    e["prime"] = std::to_string(key.second);
    e["value"] = Json::array();
    for (const auto& q : v.c) e["value"].push_back(rational_to_json(q));
    j["finite"].push_back(std::move(e));
  }
  j["infinite"] = Json::array();
  for (unsigned v = 0; v < c.infinite.size(); ++v) {
    Json e;
    e["place"] = v;
    if (c.infinite[v].is_exact) {
      e["exact"] = Json::array();
      for (const auto& q : c.infinite[v].exact.c) e["exact"].push_back(rational_to_json(q));
    } else {
      e["numeric"] = {{"re", bigfloat_to_json(c.infinite[v].numeric.re)},
                      {"im", bigfloat_to_json(c.infinite[v].numeric.im)}};
    }
    j["infinite"].push_back(std::move(e));
  }
  return j;
}

/* -------------------------------- divisors -------------------------------- */

inline ArakelovDivisor divisor_from_json(const Json& j, const NumberField& F,
                                         mpfr_prec_t prec = 128) {
  ArakelovDivisor d = zero_divisor(F, prec);
  for (const auto& e : detail::jarray(detail::jkey(j, "finite"), "finite")) {
    const Json& pj = detail::jkey(e, "prime");
    mpz_class p = integer_from_json(detail::jkey(pj, "p"));
    unsigned idx = detail::jkey(pj, "index").get<unsigned>();
    if (!p.fits_slong_p() || p < 2 || !is_prime(p))
      throw ValidationError("ParseError", "divisor key is not a prime");
    if (idx >= factor_prime(F, p.get_si()).size())
      throw ValidationError("ParseError", "prime index out of range");
    long m = detail::jkey(e, "mult").get<long>();
    if (m != 0) d.finite[{p, idx}] = m;
  }
  for (const auto& e : detail::jarray(detail::jkey(j, "infinite"), "infinite")) {
    unsigned v = detail::jkey(e, "place").get<unsigned>();
    if (v >= d.infinite.size()) throw ValidationError("ParseError", "place out of range");
    d.infinite[v] = bigfloat_from_json(detail::jkey(e, "value"), prec);
  }
  validate_divisor(d);
  return d;
}

inline Json divisor_to_json(const ArakelovDivisor& d) {
  Json j;
  j["finite"] = Json::array();
  for (const auto& [key, m] : d.finite) {
    Json e;
    e["prime"] = {{"p", key.first.get_str()}, {"index", key.second}};
    e["mult"] = m;
    j["finite"].push_back(std::move(e));
  }
  j["infinite"] = Json::array();
  for (unsigned v = 0; v < d.infinite.size(); ++v)
    j["infinite"].push_back({{"place", v}, {"value", bigfloat_to_json(d.infinite[v])}});
  return j;
}

/* ------------------------- double exact sequences ------------------------- */

inline ModuleDesc module_desc_from_json(const Json& j, const SemisimpleAlgebra* alg) {
  std::string kind = detail::jkey(j, "kind").get<std::string>();
  if (kind == "snf") {
    std::vector<mpz_class> factors;
    for (const auto& f : detail::jarray(detail::jkey(j, "factors"), "factors"))
      factors.push_back(integer_from_json(f));
    return snf_module(std::move(factors));
  }
  if (kind == "adelic") {
    if (!alg) throw ValidationError("ParseError", "adelic descriptor needs an algebra");
    return adelic_module(*alg);
  }
  throw ValidationError("ParseError", "unknown module kind " + kind);
}

inline Json module_desc_to_json(const ModuleDesc& d) {
  Json j;
  switch (d.kind) {
    case ModuleKind::SnfModule: {
      j["kind"] = "snf";
      j["factors"] = Json::array();
      for (const auto& f : d.factors) j["factors"].push_back(f.get_str());
      break;
    }
    case ModuleKind::Adelic:
      j["kind"] = "adelic";
      break;
    case ModuleKind::Lattice:
      throw ValidationError("ValidationError", "lattice descriptors are in-memory only");
  }
  return j;
}

inline ModuleMap module_map_from_json(const Json& j, const SemisimpleAlgebra* alg,
                                      mpfr_prec_t prec = 128) {
  std::string kind = detail::jkey(j, "kind").get<std::string>();
  if (kind == "zero") return zero_map();
  if (kind == "identity") return identity_map();
  if (kind == "matrix") {
    const Json& shape = detail::jarray(detail::jkey(j, "shape"), "shape");
    if (shape.size() != 2) throw ValidationError("ParseError", "shape must be [rows, cols]");
    IntMatrix m(shape[0].get<std::size_t>(), shape[1].get<std::size_t>());
    const Json& rows = detail::jarray(detail::jkey(j, "rows"), "rows");
    if (rows.size() != m.rows) throw ValidationError("ParseError", "row count mismatch");
    for (std::size_t i = 0; i < m.rows; ++i) {
      const Json& row = detail::jarray(rows[i], "matrix row");
      if (row.size() != m.cols) throw ValidationError("ParseError", "column count mismatch");
      for (std::size_t k = 0; k < m.cols; ++k) m.at(i, k) = integer_from_json(row[k]);
    }
    return matrix_map(std::move(m));
  }
  if (kind == "multiply") {
    if (!alg) throw ValidationError("ParseError", "multiply map needs an algebra");
    return multiply_map(idele_from_json(detail::jkey(j, "idele"), *alg, prec));
  }
  throw ValidationError("ParseError", "unknown map kind " + kind);
}

inline Json module_map_to_json(const ModuleMap& m) {
  Json j;
  switch (m.kind) {
    case MapKind::Zero:
      j["kind"] = "zero";
      break;
    case MapKind::Identity:
      j["kind"] = "identity";
      break;
    case MapKind::Matrix: {
      j["kind"] = "matrix";
      j["shape"] = {m.mat.rows, m.mat.cols};
      j["rows"] = Json::array();
      for (std::size_t i = 0; i < m.mat.rows; ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < m.mat.cols; ++k) row.push_back(m.mat.at(i, k).get_str());
        j["rows"].push_back(std::move(row));
      }
      break;
    }
    case MapKind::MultiplyBy:
      j["kind"] = "multiply";
      j["idele"] = idele_to_json(m.mult);
      break;
  }
  return j;
}

inline DoubleExactSequence des_from_json(const Json& j, const SemisimpleAlgebra* alg = nullptr,
                                         mpfr_prec_t prec = 128) {
  DoubleExactSequence s;
  s.A = module_desc_from_json(detail::jkey(j, "a"), alg);
  s.B = module_desc_from_json(detail::jkey(j, "b"), alg);
  s.C = module_desc_from_json(detail::jkey(j, "c"), alg);
  s.yin_inj = module_map_from_json(detail::jkey(j, "yin_inj"), alg, prec);
  s.yin_surj = module_map_from_json(detail::jkey(j, "yin_surj"), alg, prec);
  s.yang_inj = module_map_from_json(detail::jkey(j, "yang_inj"), alg, prec);
  s.yang_surj = module_map_from_json(detail::jkey(j, "yang_surj"), alg, prec);
  return s;
}

inline Json des_to_json(const DoubleExactSequence& s) {
  Json j;
  j["a"] = module_desc_to_json(s.A);
  j["b"] = module_desc_to_json(s.B);
  j["c"] = module_desc_to_json(s.C);
  j["yin_inj"] = module_map_to_json(s.yin_inj);
  j["yin_surj"] = module_map_to_json(s.yin_surj);
  j["yang_inj"] = module_map_to_json(s.yang_inj);
  j["yang_surj"] = module_map_to_json(s.yang_surj);
  return j;
}

inline ThreeByThreeGrid grid_from_json(const Json& j, const SemisimpleAlgebra* alg = nullptr,
                                       mpfr_prec_t prec = 128) {
  ThreeByThreeGrid g;
  const Json& rows = detail::jarray(detail::jkey(j, "rows"), "rows");
  const Json& cols = detail::jarray(detail::jkey(j, "cols"), "cols");
  if (rows.size() != 3 || cols.size() != 3)
    throw ValidationError("ParseError", "grid needs 3 rows and 3 columns");
  for (unsigned i = 0; i < 3; ++i) {
    g.rows[i] = des_from_json(rows[i], alg, prec);
    g.cols[i] = des_from_json(cols[i], alg, prec);
  }
  return g;
}

inline Json grid_to_json(const ThreeByThreeGrid& g) {
  Json j;
  j["rows"] = Json::array();
  j["cols"] = Json::array();
  for (unsigned i = 0; i < 3; ++i) {
    j["rows"].push_back(des_to_json(g.rows[i]));
    j["cols"].push_back(des_to_json(g.cols[i]));
  }
  return j;
}

/* --------------------------------- files ---------------------------------- */

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("ParseError", "cannot open " + path);
  try {
    Json j;
    in >> j;
    return j;
  } catch (const Json::exception& e) {
    throw ValidationError("ParseError", path + ": " + e.what());
  }
}

}  // namespace idelek
