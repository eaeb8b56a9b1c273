#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <iostream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "idelek/json_io.hpp"
#include "idelek/rng.hpp"

using namespace idelek;

namespace {

struct JobConfig {
  std::string field_path, order_path, idele_path, divisor_path;
  std::string command, flavor = "k0rel", suite, y_text;
  long precision_bits = 128;
  unsigned sample_count = 100;
  std::uint64_t seed = 0;
  bool json = false;
};

/* ------------------------------ formatting -------------------------------- */

std::string fmt_float(const BigFloat& x) {
  char* s = nullptr;
  mpfr_asprintf(&s, "%.12Rg", x.raw());
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

std::string fmt_complex(const BigComplex& z) {
  if (z.im.is_zero()) return fmt_float(z.re);
  return fmt_float(z.re) + (z.im.sign() < 0 ? " - " : " + ") + fmt_float(abs(z.im)) + "i";
}

std::string fmt_field_elem(const FieldElement& x) {
  if (x.F->deg == 1) return x.c[0].get_str();
  std::string out = "[";
  for (std::size_t i = 0; i < x.c.size(); ++i) {
    if (i) out += ", ";
    out += x.c[i].get_str();
  }
  return out + "]";
}

void emit(const JobConfig& cfg, const Json& report, const std::string& human) {
  if (cfg.json)
    std::cout << report.dump() << "\n";
  else
    std::cout << human;
}

/* -------------------------------- loading --------------------------------- */

NumberField load_field(const std::string& path) {
  return field_from_json(load_json_file(path));
}

LoadedOrder load_order(const std::string& path) {
  return order_from_json(load_json_file(path));
}

Idele load_idele(const std::string& path, const SemisimpleAlgebra& A, long prec) {
  return idele_from_json(load_json_file(path), A, prec);
}

/* Fractional ideal cut out by the finite part of an idele over a single
 * field component; the canonical home of its ideal-class index. */
std::optional<std::pair<std::size_t, ClassGroup>> ideal_class_index(
    const Idele& a, const SemisimpleAlgebra& A) {
  if (A.components.size() != 1 || A.components[0].kind != ComponentKind::Field)
    return std::nullopt;
  const NumberField& K = *A.components[0].center;
  if (K.deg > 2) return std::nullopt;
  ClassGroup cg = class_group(K);
  FractionalIdeal I = unit_ideal(K);
  for (const auto& [key, v] : a.finite)
    for (const auto& P : factor_prime(K, mpz_class(key.second))) {
      long e = element_valuation(v.entries[0], P);
      if (e != 0) I = ideal_mul(I, detail::ideal_pow(P.ideal, e));
    }
  return std::make_pair(class_of(cg, I), std::move(cg));
}

std::string group_shape(const ClassGroup& cg) {
  if (cg.invariants.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < cg.invariants.size(); ++i) {
    if (i) s += " x ";
    s += "Z/" + cg.invariants[i].get_str();
  }
  return s;
}

std::string describe_support(const Idele& a) {
  if (a.finite.empty()) return "(none)";
  std::string s;
  for (const auto& kv : a.finite) {
    if (!s.empty()) s += ", ";
    s += "component " + std::to_string(kv.first.first) +
         " at p=" + std::to_string(kv.first.second);
  }
  return s;
}

/* -------------------------------- commands -------------------------------- */

int cmd_classgroup(const JobConfig& cfg) {
  NumberField F = load_field(cfg.field_path);
  ClassGroup cg = class_group(F);
  const char* procedure = "minkowski-bound ideal enumeration";

  Json report;
  report["command"] = "classgroup";
  report["degree"] = F.deg;
  report["order"] = cg.order.get_str();
  report["invariants"] = Json::array();
  for (const auto& d : cg.invariants) report["invariants"].push_back(d.get_str());
  report["procedure"] = procedure;

  std::ostringstream out;
  out << "Cl ≅ " << group_shape(cg) << "  (order " << cg.order.get_str() << ")\n";
  out << "computed by: " << procedure << "\n";
  emit(cfg, report, out.str());
  return 0;
}

int cmd_theta(const JobConfig& cfg) {
  LoadedOrder lo = load_order(cfg.order_path);
  Idele a = load_idele(cfg.idele_path, *lo.algebra, cfg.precision_bits);
  SwanElement s = theta(a, lo.order);
  IdeleClass c = swan_to_class(s, cfg.precision_bits);
  IdeleClass triv = k0rel_class(trivial_idele(*lo.algebra), lo.order, cfg.precision_bits);
  bool zero = class_equal(c, triv);
  const char* procedure = "theta lattice construction; swan reduction to an idele class";

  Json report;
  report["command"] = "theta";
  report["summands"] = s.P.size();
  report["zero"] = zero;
  report["normal_form"] = {{"flavor", "k0rel"}, {"rep", idele_to_json(c.rep)}};
  report["procedure"] = procedure;

  std::ostringstream out;
  out << "swan element with " << s.P.size() << " summand(s)\n";
  out << "zero element: " << (zero ? "yes" : "no") << "\n";
  out << "computed by: " << procedure << "\n";
  emit(cfg, report, out.str());
  return 0;
}

int cmd_normalform(const JobConfig& cfg, bool frohlich_view) {
  LoadedOrder lo = load_order(cfg.order_path);
  Idele a = load_idele(cfg.idele_path, *lo.algebra, cfg.precision_bits);

  std::string flavor = frohlich_view ? "cl" : cfg.flavor;
  IdeleClass c, triv;
  if (flavor == "k0rel") {
    c = k0rel_class(a, lo.order, cfg.precision_bits);
    triv = k0rel_class(trivial_idele(*lo.algebra), lo.order, cfg.precision_bits);
  } else if (flavor == "cl") {
    c = frohlich_class(a, lo.order, cfg.precision_bits);
    triv = frohlich_class(trivial_idele(*lo.algebra), lo.order, cfg.precision_bits);
  } else {
    c = centerform_class(a, lo.order, cfg.precision_bits);
    triv = centerform_class(trivial_idele(*lo.algebra), lo.order, cfg.precision_bits);
  }
  bool trivial = class_equal(c, triv);
  std::string procedure = frohlich_view
                              ? "locally free class projection"
                              : "idele class normalization in the " + flavor + " quotient";

  Json report;
  report["command"] = frohlich_view ? "frohlich" : "normalform";
  report["flavor"] = flavor;
  report["trivial"] = trivial;
  if (flavor == "centerform")
    report["normal_form"] = center_idele_to_json(c.crep);
  else
    report["normal_form"] = idele_to_json(c.rep);
  report["procedure"] = procedure;

  std::ostringstream out;
  out << "flavor: " << flavor << "\n";
  out << "finite support: " << describe_support(a) << "\n";
  out << "class decision: " << (trivial ? "trivial" : "nontrivial") << "\n";
  if (flavor != "centerform") {
    if (auto idx = ideal_class_index(a, *lo.algebra)) {
      report["ideal_class_index"] = idx->first;
      report["group"] = group_shape(idx->second);
      out << "ideal class index: " << idx->first << " in Cl ≅ " << group_shape(idx->second)
          << "\n";
    }
  }
  out << "computed by: " << procedure << "\n";
  emit(cfg, report, out.str());
  return 0;
}

std::vector<CenterValue> parse_y(const JobConfig& cfg, const SemisimpleAlgebra& A) {
  Json j;
  try {
    j = Json::parse(cfg.y_text);
  } catch (const Json::exception& e) {
    throw ValidationError("ParseError", std::string("--y: ") + e.what());
  }
  unsigned places = infinite_place_count(A);
  if (j.is_array() && j.size() != places)
    throw ValidationError("DimensionMismatch", "--y needs one entry per archimedean place");
  std::vector<CenterValue> y;
  for (unsigned v = 0; v < places; ++v) {
    const NumberField& K = *A.components[infinite_place_owner(A, v).first].center;
    const Json& e = j.is_array() ? j.at(v % j.size()) : j;
    if (e.is_object()) {
      BigComplex z(cfg.precision_bits);
      z.re = bigfloat_from_json(detail::jkey(e, "re"), cfg.precision_bits);
      z.im = bigfloat_from_json(detail::jkey(e, "im"), cfg.precision_bits);
      y.push_back(numeric_center(std::move(z)));
    } else if (e.is_array()) {
      y.push_back(exact_center(FieldElement(K, detail::rational_row(e, "y entry"))));
    } else {
      y.push_back(exact_center(FieldElement::of(K, rational_from_json(e))));
    }
  }
  return y;
}

int cmd_delta_hat(const JobConfig& cfg) {
  LoadedOrder lo = load_order(cfg.order_path);
  std::vector<CenterValue> y = parse_y(cfg, *lo.algebra);
  IdeleClass c = extended_boundary(y, lo.order, cfg.precision_bits);
  IdeleClass triv =
      centerform_class(trivial_idele(*lo.algebra), lo.order, cfg.precision_bits);
  bool trivial = class_equal(c, triv);
  const char* procedure = "extended boundary with a sign-straightened multiplier";

  Json report;
  report["command"] = "delta-hat";
  report["flavor"] = "centerform";
  report["trivial"] = trivial;
  report["normal_form"] = center_idele_to_json(c.crep);
  report["procedure"] = procedure;

  std::ostringstream out;
  out << "centerform class of the extended boundary\n";
  std::string fin;
  for (const auto& [key, v] : c.crep.finite) {
    if (!fin.empty()) fin += ", ";
    fin += "component " + std::to_string(key.first) + " at p=" + std::to_string(key.second) +
           ": " + fmt_field_elem(v);
  }
  out << "finite support: " << (fin.empty() ? "(none)" : fin) << "\n";
  for (unsigned v = 0; v < c.crep.infinite.size(); ++v) {
    const CenterValue& cv = c.crep.infinite[v];
    out << "infinity part [place " << v << "]: "
        << (cv.is_exact ? fmt_field_elem(cv.exact) : fmt_complex(cv.numeric)) << "\n";
  }
  out << "class decision: " << (trivial ? "trivial" : "nontrivial") << "\n";
  out << "computed by: " << procedure << "\n";
  emit(cfg, report, out.str());
  return 0;
}

int cmd_arakelov(const JobConfig& cfg) {
  NumberField F = load_field(cfg.field_path);
  ArakelovDivisor d = divisor_from_json(load_json_file(cfg.divisor_path), F,
                                        cfg.precision_bits);
  MetrizedLineBundle L = metric_of_divisor(d);
  bool finite_principal = is_principal(L.ideal).has_value();
  bool trivial = pic_hat_equal(d, zero_divisor(F, cfg.precision_bits));
  const char* procedure = "principal-divisor matching over the unit lattice";

  Json report;
  report["command"] = "arakelov";
  report["finite_principal"] = finite_principal;
  report["metric_norms_sq"] = Json::array();
  for (const auto& x : L.norms_sq) report["metric_norms_sq"].push_back(bigfloat_to_json(x));
  report["trivial"] = trivial;
  report["procedure"] = procedure;

  std::ostringstream out;
  out << "finite part principal: " << (finite_principal ? "yes" : "no") << "\n";
  for (unsigned v = 0; v < L.norms_sq.size(); ++v)
    out << "metric |1|^2 at place " << v << ": " << fmt_float(L.norms_sq[v]) << "\n";
  out << "metrized class: " << (trivial ? "trivial" : "nontrivial") << "\n";
  out << "computed by: " << procedure << "\n";
  emit(cfg, report, out.str());
  return 0;
}

/* --------------------------- randomized sampling --------------------------- */

constexpr long kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};

mpq_class rand_rat(Rng& rng) {
  mpq_class q(rng.range(-10, 10), rng.range(1, 10));
  q.canonicalize();
  return q;
}

mpq_class rand_rat_nonzero(Rng& rng) {
  for (;;) {
    mpq_class q = rand_rat(rng);
    if (q != 0) return q;
  }
}

ComponentElement rand_component_value(Rng& rng, const SimpleComponent& c,
                                      bool integer_coords = false) {
  auto draw = [&]() -> mpq_class {
    return integer_coords ? mpq_class(rng.range(-10, 10)) : rand_rat(rng);
  };
  ComponentElement e;
  e.comp = &c;
  switch (c.kind) {
    case ComponentKind::Field: {
      std::vector<mpq_class> coords(c.center->deg);
      do {
        for (auto& q : coords) q = draw();
      } while (std::all_of(coords.begin(), coords.end(),
                           [](const mpq_class& q) { return q == 0; }));
      e.entries = {FieldElement(*c.center, std::move(coords))};
      break;
    }
    case ComponentKind::Quaternion: {
      do {
        e.quat.assign(4, 0);
        for (auto& q : e.quat) q = draw();
      } while (component_reduced_norm(e).is_zero());
      break;
    }
    case ComponentKind::Matrix: {
      // unipotent upper-triangular draws are always invertible
      e = component_one(c);
      for (unsigned i = 0; i < c.n; ++i)
        for (unsigned k = i + 1; k < c.n; ++k)
          e.entries[i * c.n + k] = FieldElement::of(*c.center, rand_rat(rng));
      break;
    }
  }
  return e;
}

/* Support of size <= 3 over primes <= 50, coordinates <= 10 in absolute
 * value, archimedean data mixing exact and numeric values. */
Idele rand_idele(Rng& rng, const SemisimpleAlgebra& A, long prec,
                 bool integral_finite = false) {
  Idele x = trivial_idele(A);
  unsigned k = static_cast<unsigned>(rng.below(4));
  for (unsigned j = 0; j < k; ++j) {
    std::size_t ci = rng.below(A.components.size());
    long p = kPrimes[rng.below(std::size(kPrimes))];
    x.finite[{ci, p}] = rand_component_value(rng, A.components[ci], integral_finite);
  }
  for (unsigned v = 0; v < x.infinite.size(); ++v) {
    auto [ci, local] = infinite_place_owner(A, v);
    const SimpleComponent& comp = A.components[ci];
    bool complex_place =
        comp.kind == ComponentKind::Field && local >= comp.center->n_real;
    if (comp.kind != ComponentKind::Field || rng.flip()) {
      x.infinite[v] = exact_inf(rand_component_value(rng, comp));
    } else {
      BigComplex z(prec);
      z.re = BigFloat::of(rand_rat_nonzero(rng), prec);
      if (complex_place) z.im = BigFloat::of(rand_rat(rng), prec);
      x.infinite[v] = numeric_inf(std::move(z));
    }
  }
  validate_idele(x);
  return x;
}

/* Unit-finite means local units at every support prime and exactly one at
 * the archimedean places, so only the finite entries are randomized; integer
 * coordinates because a denominator at a support prime can never be a unit. */
Idele rand_unit_finite_idele(Rng& rng, const LoadedOrder& lo, long prec) {
  (void)prec;
  const SemisimpleAlgebra& A = *lo.algebra;
  for (int tries = 0; tries < 10000; ++tries) {
    Idele x = trivial_idele(A);
    unsigned k = static_cast<unsigned>(rng.below(4));
    for (unsigned j = 0; j < k; ++j) {
      std::size_t ci = rng.below(A.components.size());
      long p = kPrimes[rng.below(std::size(kPrimes))];
      x.finite[{ci, p}] = rand_component_value(rng, A.components[ci], true);
    }
    if (is_unit_finite(x, lo.order)) return x;
  }
  throw Error("SamplerError", "could not draw a unit-finite idele");
}

std::set<long> element_support(const ComponentElement& e) {
  std::set<long> s;
  auto add = [&](const mpz_class& n) {
    if (n == 0) return;
    for (const auto& [p, m] : factor(abs(n))) s.insert(p.get_si());
  };
  mpq_class nr = norm(component_reduced_norm(e));
  add(nr.get_num());
  add(nr.get_den());
  auto add_coord = [&](const mpq_class& q) { add(q.get_den()); };
  for (const auto& f : e.entries)
    for (const auto& q : f.c) add_coord(q);
  for (const auto& q : e.quat) add_coord(q);
  return s;
}

/* Diagonal image of a global element: the same value at every finite place
 * where it is not a unit and at every archimedean place. */
Idele diagonal_idele(Rng& rng, const SemisimpleAlgebra& A) {
  std::vector<ComponentElement> parts;
  std::set<long> support;
  for (const auto& c : A.components) {
    parts.push_back(rand_component_value(rng, c));
    for (long p : element_support(parts.back())) support.insert(p);
  }
  Idele x = trivial_idele(A);
  for (std::size_t ci = 0; ci < A.components.size(); ++ci)
    for (long p : support) x.finite[{ci, p}] = parts[ci];
  for (unsigned v = 0; v < x.infinite.size(); ++v)
    x.infinite[v] = exact_inf(parts[infinite_place_owner(A, v).first]);
  return x;
}

ComponentElement circle_quat(Rng& rng, const SimpleComponent& c, bool ij_plane) {
  long a = rng.range(-5, 5), b = rng.range(1, 5);
  mpq_class den(a * a + b * b);
  mpq_class p = mpq_class(a * a - b * b) / den, q = mpq_class(2 * a * b) / den;
  p.canonicalize();
  q.canonicalize();
  ComponentElement e;
  e.comp = &c;
  e.quat = ij_plane ? std::vector<mpq_class>{p, q, 0, 0} : std::vector<mpq_class>{0, 0, p, q};
  return e;
}

ComponentElement rand_norm_one_value(Rng& rng, const SimpleComponent& c) {
  if (c.kind == ComponentKind::Field || c.kind == ComponentKind::Matrix)
    return component_one(c);  // commutative reduced norm is the identity
  if (c.qa != -1 || c.qb != -1) {
    ComponentElement e = component_one(c);
    if (rng.flip()) e.quat[0] = -1;
    return e;
  }
  static const mpq_class h(1, 2);
  ComponentElement u = component_one(c);
  switch (rng.below(3)) {
    case 0:
      u.quat.assign(4, 0);
      u.quat[rng.below(4)] = rng.flip() ? 1 : -1;
      break;
    case 1:
      for (auto& q : u.quat) q = rng.flip() ? h : -h;
      break;
    default:
      break;
  }
  ComponentElement e = component_mul(u, circle_quat(rng, c, true));
  return component_mul(e, circle_quat(rng, c, false));
}

Idele rand_norm_one_idele(Rng& rng, const SemisimpleAlgebra& A, long prec) {
  Idele x = trivial_idele(A);
  unsigned k = static_cast<unsigned>(rng.below(4));
  for (unsigned j = 0; j < k; ++j) {
    std::size_t ci = rng.below(A.components.size());
    long p = kPrimes[rng.below(std::size(kPrimes))];
    x.finite[{ci, p}] = rand_norm_one_value(rng, A.components[ci]);
  }
  for (unsigned v = 0; v < x.infinite.size(); ++v) {
    const SimpleComponent& comp = A.components[infinite_place_owner(A, v).first];
    if (comp.kind == ComponentKind::Quaternion || rng.flip()) {
      x.infinite[v] = exact_inf(rand_norm_one_value(rng, comp));
    } else {
      BigComplex z(prec);
      z.re = BigFloat::of(1, prec);
      x.infinite[v] = numeric_inf(std::move(z));
    }
  }
  validate_idele(x);
  return x;
}

Json y_to_json(const std::vector<CenterValue>& y) {
  Json j = Json::array();
  for (const auto& cv : y) {
    if (cv.is_exact) {
      Json coords = Json::array();
      for (const auto& q : cv.exact.c) coords.push_back(q.get_str());
      j.push_back(std::move(coords));
    } else {
      j.push_back({{"re", bigfloat_to_json(cv.numeric.re)},
                   {"im", bigfloat_to_json(cv.numeric.im)}});
    }
  }
  return j;
}

/* Totally positive and nonzero, so multiplying a valid boundary multiplier
 * by it keeps the signs valid. */
FieldElement totally_positive_shift(const NumberField& K) {
  if (K.deg == 1) return FieldElement::of(K, 5);
  mpz_class bound(2);
  for (const auto& c : K.poly) {
    mpz_class a = abs(c.get_num()) + 1;
    if (a > bound) bound = a;
  }
  std::vector<mpq_class> coords(K.deg);
  coords[0] = mpq_class(bound + 1);
  coords[1] = 1;
  return FieldElement(K, std::move(coords));
}

/* ------------------------------ verify suites ------------------------------ */

struct SuiteOutcome {
  Json failures = Json::array();
  unsigned samples = 0;
};

using SampleRunner = std::function<void(Rng&, SuiteOutcome&, unsigned)>;

SuiteOutcome run_samples(const JobConfig& cfg, std::uint64_t suite_seed,
                         const SampleRunner& body) {
  Rng master(suite_seed);
  std::vector<std::uint64_t> seeds(cfg.sample_count);
  for (auto& s : seeds) s = master.next();
  SuiteOutcome out;
  out.samples = cfg.sample_count;
  // samples are independent; the report is assembled in index order
  for (unsigned i = 0; i < cfg.sample_count; ++i) {
    Rng rng(seeds[i]);
    body(rng, out, i);
  }
  return out;
}

std::uint64_t suite_seed(const JobConfig& cfg, const std::string& name) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h ^ cfg.seed;
}

SuiteOutcome suite_theta_homomorphism(const JobConfig& cfg, const LoadedOrder& lo) {
  return run_samples(cfg, suite_seed(cfg, "theta-homomorphism"),
                     [&](Rng& rng, SuiteOutcome& out, unsigned i) {
    Idele a = rand_idele(rng, *lo.algebra, cfg.precision_bits);
    Idele b = rand_idele(rng, *lo.algebra, cfg.precision_bits);
    IdeleClass prod = swan_to_class(theta(idele_mul(a, b), lo.order), cfg.precision_bits);
    IdeleClass sum = swan_to_class(swan_add(theta(a, lo.order), theta(b, lo.order)),
                                   cfg.precision_bits);
    if (!class_equal(prod, sum))
      out.failures.push_back({{"sample", i},
                              {"idele_a", idele_to_json(a)},
                              {"idele_b", idele_to_json(b)}});
  });
}

SuiteOutcome suite_vanishing(const JobConfig& cfg, const LoadedOrder& lo,
                             const std::string& which) {
  IdeleClass triv = k0rel_class(trivial_idele(*lo.algebra), lo.order, cfg.precision_bits);
  IdeleClass ctriv =
      centerform_class(trivial_idele(*lo.algebra), lo.order, cfg.precision_bits);
  return run_samples(cfg, suite_seed(cfg, which),
                     [&, which](Rng& rng, SuiteOutcome& out, unsigned i) {
    Idele a;
    bool ok;
    if (which == "unit-vanishing") {
      a = rand_unit_finite_idele(rng, lo, cfg.precision_bits);
      ok = class_equal(swan_to_class(theta(a, lo.order), cfg.precision_bits), triv);
    } else if (which == "diagonal-vanishing") {
      a = diagonal_idele(rng, *lo.algebra);
      ok = class_equal(swan_to_class(theta(a, lo.order), cfg.precision_bits), triv);
    } else {
      a = rand_norm_one_idele(rng, *lo.algebra, cfg.precision_bits);
      ok = class_equal(centerform_class(a, lo.order, cfg.precision_bits), ctriv);
    }
    if (!ok) out.failures.push_back({{"sample", i}, {"idele", idele_to_json(a)}});
  });
}

SuiteOutcome suite_swan_cl_square(const JobConfig& cfg, const LoadedOrder& lo) {
  return run_samples(cfg, suite_seed(cfg, "swan-cl-square"),
                     [&](Rng& rng, SuiteOutcome& out, unsigned i) {
    Idele a = rand_idele(rng, *lo.algebra, cfg.precision_bits);
    IdeleClass direct = frohlich_class(a, lo.order, cfg.precision_bits);
    IdeleClass through =
        cl_projection(swan_to_class(theta(a, lo.order), cfg.precision_bits));
    if (!class_equal(direct, through))
      out.failures.push_back({{"sample", i}, {"idele", idele_to_json(a)}});
  });
}

SuiteOutcome suite_cancellation(const JobConfig& cfg, const LoadedOrder& lo) {
  return run_samples(cfg, suite_seed(cfg, "cancellation"),
                     [&](Rng& rng, SuiteOutcome& out, unsigned i) {
    Idele a = rand_idele(rng, *lo.algebra, cfg.precision_bits);
    Idele b = rand_idele(rng, *lo.algebra, cfg.precision_bits);
    auto lhs = k0_class({lattice_of_idele(a, lo.order), lattice_of_idele(b, lo.order)},
                        lo.order, cfg.precision_bits);
    auto rhs = k0_class({lattice_of_idele(idele_mul(a, b), lo.order),
                         unit_order_lattice(lo.order)},
                        lo.order, cfg.precision_bits);
    if (lhs.first != rhs.first || !class_equal(lhs.second, rhs.second))
      out.failures.push_back({{"sample", i},
                              {"idele_a", idele_to_json(a)},
                              {"idele_b", idele_to_json(b)}});
  });
}

SuiteOutcome suite_delta_hat(const JobConfig& cfg, const LoadedOrder& lo) {
  const SemisimpleAlgebra& A = *lo.algebra;
  return run_samples(cfg, suite_seed(cfg, "delta-hat-welldef"),
                     [&](Rng& rng, SuiteOutcome& out, unsigned i) {
    std::vector<CenterValue> y;
    for (unsigned v = 0; v < infinite_place_count(A); ++v) {
      const NumberField& K = *A.components[infinite_place_owner(A, v).first].center;
      std::vector<mpq_class> coords(K.deg);
      do {
        for (auto& q : coords) q = rand_rat(rng);
      } while (std::all_of(coords.begin(), coords.end(),
                           [](const mpq_class& q) { return q == 0; }));
      y.push_back(exact_center(FieldElement(K, coords)));
    }
    std::vector<unsigned> first_place(A.components.size(), 0);
    for (unsigned w = infinite_place_count(A); w-- > 0;)
      first_place[infinite_place_owner(A, w).first] = w;
    std::vector<FieldElement> lam1, lam2;
    for (std::size_t ci = 0; ci < A.components.size(); ++ci) {
      const SimpleComponent& comp = A.components[ci];
      const NumberField& K = *comp.center;
      mpq_class sign(1);
      if (comp.kind == ComponentKind::Quaternion) {
        // one ramified real place per quaternion component: straighten it
        if (y[first_place[ci]].exact.c[0] < 0) sign = -1;
      }
      lam1.push_back(FieldElement::of(K, sign));
      lam2.push_back(FieldElement::of(K, sign) * totally_positive_shift(K));
    }
    IdeleClass c1 = extended_boundary(y, lo.order, cfg.precision_bits, lam1);
    IdeleClass c2 = extended_boundary(y, lo.order, cfg.precision_bits, lam2);
    if (!class_equal(c1, c2)) {
      Json l1 = Json::array(), l2 = Json::array();
      for (const auto& l : lam1) {
        Json coords = Json::array();
        for (const auto& q : l.c) coords.push_back(q.get_str());
        l1.push_back(std::move(coords));
      }
      for (const auto& l : lam2) {
        Json coords = Json::array();
        for (const auto& q : l.c) coords.push_back(q.get_str());
        l2.push_back(std::move(coords));
      }
      out.failures.push_back({{"sample", i},
                              {"y", y_to_json(y)},
                              {"lambda", std::move(l1)},
                              {"lambda_prime", std::move(l2)}});
    }
  });
}

const std::vector<std::string> kSuites = {
    "theta-homomorphism", "unit-vanishing",  "diagonal-vanishing",
    "norm-one-vanishing", "swan-cl-square",  "cancellation",
    "delta-hat-welldef"};

SuiteOutcome dispatch_suite(const JobConfig& cfg, const LoadedOrder& lo,
                            const std::string& name) {
  if (name == "theta-homomorphism") return suite_theta_homomorphism(cfg, lo);
  if (name == "unit-vanishing" || name == "diagonal-vanishing" ||
      name == "norm-one-vanishing")
    return suite_vanishing(cfg, lo, name);
  if (name == "swan-cl-square") return suite_swan_cl_square(cfg, lo);
  if (name == "cancellation") return suite_cancellation(cfg, lo);
  if (name == "delta-hat-welldef") return suite_delta_hat(cfg, lo);
  throw ValidationError("ParseError", "unknown suite " + name);
}

int cmd_verify(const JobConfig& cfg) {
  LoadedOrder lo = load_order(cfg.order_path);
  std::vector<std::string> names =
      cfg.suite == "all" ? kSuites : std::vector<std::string>{cfg.suite};

  Json report;
  report["command"] = "verify";
  report["seed"] = cfg.seed;
  report["precision_bits"] = cfg.precision_bits;
  report["suites"] = Json::array();
  std::ostringstream out;
  bool pass = true;
  for (const auto& name : names) {
    SuiteOutcome r = dispatch_suite(cfg, lo, name);
    bool ok = r.failures.empty();
    pass = pass && ok;
    report["suites"].push_back({{"suite", name},
                                {"samples", r.samples},
                                {"failures", r.failures},
                                {"pass", ok}});
    out << "suite " << name << ": " << r.samples << " samples, "
        << r.failures.size() << " failure(s)\n";
    for (const auto& f : r.failures) out << "  reproducer: " << f.dump() << "\n";
  }
  report["pass"] = pass;
  out << (pass ? "PASS" : "FAIL") << "\n";
  emit(cfg, report, out.str());
  return pass ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"idele-class computations for orders in semisimple algebras"};
  app.require_subcommand(1);
  JobConfig cfg;

  auto add_common = [&](CLI::App* s) {
    s->add_option("--precision", cfg.precision_bits, "working precision in bits")
        ->check(CLI::Range(16L, 4096L))
        ->capture_default_str();
    s->add_flag("--json", cfg.json, "emit a machine-readable report");
  };

  CLI::App* c_cg = app.add_subcommand("classgroup", "ideal class group of a field");
  c_cg->add_option("--field", cfg.field_path, "field description (JSON)")->required();
  add_common(c_cg);

  CLI::App* c_theta = app.add_subcommand("theta", "swan element of an idele");
  CLI::App* c_nf = app.add_subcommand("normalform", "normal form of an idele class");
  CLI::App* c_fr = app.add_subcommand("frohlich", "locally free class of an idele");
  for (CLI::App* s : {c_theta, c_nf, c_fr}) {
    s->add_option("--order", cfg.order_path, "order description (JSON)")->required();
    s->add_option("--idele", cfg.idele_path, "idele description (JSON)")->required();
    add_common(s);
  }
  c_nf->add_option("--flavor", cfg.flavor, "class quotient")
      ->check(CLI::IsMember({"k0rel", "cl", "centerform"}))
      ->capture_default_str();

  CLI::App* c_dh = app.add_subcommand("delta-hat", "extended boundary of archimedean data");
  c_dh->add_option("--order", cfg.order_path, "order description (JSON)")->required();
  c_dh->add_option("--y", cfg.y_text,
                   "archimedean center values (inline JSON: scalar, coords, or re/im)")
      ->required();
  add_common(c_dh);

  CLI::App* c_ar = app.add_subcommand("arakelov", "metrized divisor report");
  c_ar->add_option("--field", cfg.field_path, "field description (JSON)")->required();
  c_ar->add_option("--divisor", cfg.divisor_path, "divisor description (JSON)")->required();
  add_common(c_ar);

  CLI::App* c_vf = app.add_subcommand("verify", "randomized property suites");
  c_vf->add_option("--order", cfg.order_path, "order description (JSON)")->required();
  {
    std::vector<std::string> allowed = kSuites;
    allowed.push_back("all");
    c_vf->add_option("--suite", cfg.suite, "suite name")
        ->check(CLI::IsMember(allowed))
        ->required();
  }
  c_vf->add_option("--samples", cfg.sample_count, "samples per suite")
      ->check(CLI::Range(1u, 100000u))
      ->capture_default_str();
  c_vf->add_option("--seed", cfg.seed, "seed for the sample generator")
      ->capture_default_str();
  add_common(c_vf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (c_cg->parsed()) return cmd_classgroup(cfg);
    if (c_theta->parsed()) return cmd_theta(cfg);
    if (c_nf->parsed()) return cmd_normalform(cfg, false);
    if (c_fr->parsed()) return cmd_normalform(cfg, true);
    if (c_dh->parsed()) return cmd_delta_hat(cfg);
    if (c_ar->parsed()) return cmd_arakelov(cfg);
    if (c_vf->parsed()) return cmd_verify(cfg);
  } catch (const PrecisionExhausted& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const UnsupportedError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 1;
}
