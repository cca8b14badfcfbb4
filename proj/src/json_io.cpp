#include "freelevy/json_io.hpp"

#include <cmath>

#include "freelevy/error.hpp"

namespace freelevy {
namespace {

[[noreturn]] void parse_fail(const std::string& what) { fail(ErrorCode::kParseError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) parse_fail(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) parse_fail(std::string("missing field '") + key + "'");
  return *it;
}

double num(const Json& j) {
  if (!j.is_number()) parse_fail("expected a number, got " + j.dump());
  return j.get<double>();
}

double num(const Json& j, const char* key) { return num(field(j, key)); }

double num_or(const Json& j, const char* key, double fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : num(*it);
}

std::vector<double> num_array(const Json& j) {
  if (!j.is_array()) parse_fail("expected an array, got " + j.dump());
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(num(v));
  return out;
}

const Json& array_field(const Json& j, const char* key) {
  const Json& a = field(j, key);
  if (!a.is_array()) parse_fail(std::string("field '") + key + "' must be an array");
  return a;
}

Json array_or_empty(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) return Json::array();
  if (!it->is_array()) parse_fail(std::string("field '") + key + "' must be an array");
  return *it;
}

Flavor parse_flavor(const Json& j) {
  if (!j.is_string()) parse_fail("flavor must be a string");
  auto s = j.get<std::string>();
  if (s == "free") return Flavor::kFree;
  if (s == "classical") return Flavor::kClassical;
  parse_fail("unknown flavor '" + s + "'");
}

// One near-origin power law per side with shared alpha and cut-off.
bool is_near_zero_shape(const std::vector<PowerPiece>& p) {
  if (p.empty() || p.size() > 2) return false;
  for (const auto& q : p)
    if (q.inner != 0.0 || q.alpha != p[0].alpha || q.outer != p[0].outer) return false;
  return p.size() == 1 || p[0].side != p[1].side;
}

Json seeds_to_json(double theta, double sigma2, const LevyMeasure& rho) {
  return Json{{"theta", theta}, {"sigma2", sigma2}, {"rho", levy_measure_to_json(rho)}};
}

LevyMeasure rho_from(const Json& j) {
  auto it = j.find("rho");
  return it == j.end() ? LevyMeasure{} : levy_measure_from_json(*it);
}

std::string kind_name(rmt::EnsembleKind k) {
  switch (k) {
    case rmt::EnsembleKind::kGue: return "gue";
    case rmt::EnsembleKind::kWishart: return "wishart";
    case rmt::EnsembleKind::kFid: return "fid";
  }
  return "gue";
}

Json law_to_json(const AtomLaw& law) {
  Json j{{"positive", law.positive}};
  if (law.triplet) j["triplet"] = triplet_to_json(*law.triplet);
  if (law.moments) j["moments"] = law.moments->values;
  return j;
}

}  // namespace

Json levy_measure_to_json(const LevyMeasure& r) {
  Json j = Json::object();
  Json atoms = Json::array();
  for (const auto& a : r.atoms()) atoms.push_back({{"location", a.location}, {"mass", a.mass}});
  j["atoms"] = atoms;
  const auto& p = r.power_pieces();
  if (is_near_zero_shape(p)) {
    double cp = 0.0, cm = 0.0;
    for (const auto& q : p) (q.side > 0 ? cp : cm) = q.coef;
    j["near_zero"] = {{"alpha", p[0].alpha}, {"c_plus", cp}, {"c_minus", cm}, {"eps0", p[0].outer}};
  } else if (!p.empty()) {
    Json arr = Json::array();
    for (const auto& q : p)
      arr.push_back({{"alpha", q.alpha}, {"coef", q.coef}, {"inner", q.inner},
                     {"outer", q.outer}, {"side", q.side}});
    j["power"] = arr;
  }
  Json body = Json::array();
  for (const auto& q : r.poly_pieces())
    body.push_back({{"lo", q.lo}, {"hi", q.hi}, {"coeffs", q.coeffs}});
  j["body"] = body;
  return j;
}

LevyMeasure levy_measure_from_json(const Json& j) {
  if (!j.is_object()) parse_fail("Levy measure must be an object");
  std::vector<LevyAtom> atoms;
  for (const auto& a : array_or_empty(j, "atoms")) {
    if (a.is_array() && a.size() == 2) {
      atoms.push_back({num(a[0]), num(a[1])});
    } else {
      atoms.push_back({num(a, "location"), num(a, "mass")});
    }
  }
  std::vector<PowerPiece> power;
  if (auto it = j.find("near_zero"); it != j.end() && !it->is_null()) {
    auto nz = LevyMeasure::near_zero(num(*it, "alpha"), num_or(*it, "c_plus", 0.0),
                                     num_or(*it, "c_minus", 0.0), num(*it, "eps0"));
    power = nz.power_pieces();
  }
  for (const auto& q : array_or_empty(j, "power")) {
    const Json& side = field(q, "side");
    if (!side.is_number_integer()) parse_fail("power piece side must be +1 or -1");
    power.push_back({num(q, "alpha"), num(q, "coef"), num_or(q, "inner", 0.0), num(q, "outer"),
                     side.get<int>()});
  }
  std::vector<PolyPiece> poly;
  for (const auto& q : array_or_empty(j, "body"))
    poly.push_back({num(q, "lo"), num(q, "hi"), num_array(field(q, "coeffs"))});
  return LevyMeasure(std::move(atoms), std::move(power), std::move(poly));
}

Json triplet_to_json(const FreeTriplet& u) {
  return Json{{"schema", kSchemaVersion}, {"a", u.a}, {"b", u.b},
              {"flavor", to_string(u.flavor)}, {"r", levy_measure_to_json(u.r)}};
}

FreeTriplet triplet_from_json(const Json& j) {
  if (!j.is_object()) parse_fail("triplet must be an object");
  Flavor fl = Flavor::kFree;
  if (auto it = j.find("flavor"); it != j.end()) fl = parse_flavor(*it);
  LevyMeasure r;
  if (auto it = j.find("r"); it != j.end()) r = levy_measure_from_json(*it);
  return make_triplet(num(j, "a"), num(j, "b"), std::move(r), fl);
}

Json set_to_json(const SetExpr& s) {
  Json arr = Json::array();
  for (const auto& iv : s.intervals()) arr.push_back({iv.lo, iv.hi});
  return arr;
}

SetExpr set_from_json(const Json& j) {
  if (j.is_string()) return parse_set_expr(j.get<std::string>());
  if (!j.is_array()) parse_fail("set must be a string or an array of [lo, hi] pairs");
  std::vector<Interval> raw;
  for (const auto& iv : j) {
    if (!iv.is_array() || iv.size() != 2) parse_fail("set interval must be [lo, hi]");
    raw.push_back({num(iv[0]), num(iv[1])});
  }
  return set_normalize(std::move(raw));
}

Json field_to_json(const SeedField& f) {
  Json cells = Json::array();
  for (const auto& c : f.cells) {
    Json jc = seeds_to_json(c.theta, c.sigma2, c.rho);
    jc["lo"] = c.lo;
    jc["hi"] = c.hi;
    jc["kappa_density"] = c.kappa_density;
    cells.push_back(jc);
  }
  Json atoms = Json::array();
  for (const auto& a : f.atoms) {
    Json ja = seeds_to_json(a.theta, a.sigma2, a.rho);
    ja["x"] = a.x;
    ja["mass"] = a.mass;
    atoms.push_back(ja);
  }
  return Json{{"schema", kSchemaVersion}, {"carrier", set_to_json(f.carrier)},
              {"cells", cells}, {"kappa_atoms", atoms}};
}

SeedField field_from_json(const Json& j) {
  if (!j.is_object()) parse_fail("field must be an object");
  SetExpr carrier;
  if (auto it = j.find("carrier"); it != j.end()) carrier = set_from_json(*it);
  std::vector<SeedCell> cells;
  for (const auto& c : array_field(j, "cells"))
    cells.push_back({num(c, "lo"), num(c, "hi"), num_or(c, "theta", 0.0),
                     num_or(c, "sigma2", 0.0), rho_from(c), num_or(c, "kappa_density", 1.0)});
  std::vector<KappaAtom> atoms;
  for (const auto& a : array_or_empty(j, "kappa_atoms"))
    atoms.push_back({num(a, "x"), num(a, "mass"), num_or(a, "theta", 0.0),
                     num_or(a, "sigma2", 0.0), rho_from(a)});
  return make_field(std::move(carrier), std::move(cells), std::move(atoms));
}

Json integrand_to_json(const Integrand& f) {
  Json pieces = Json::array();
  for (const auto& p : f.pieces())
    pieces.push_back({{"lo", p.lo}, {"hi", p.hi}, {"coeffs", p.coeffs}});
  return Json{{"schema", kSchemaVersion}, {"pieces", pieces}};
}

Integrand integrand_from_json(const Json& j) {
  if (!j.is_object()) parse_fail("integrand must be an object");
  std::vector<IntegrandPiece> pieces;
  for (const auto& p : array_field(j, "pieces"))
    pieces.push_back({num(p, "lo"), num(p, "hi"), num_array(field(p, "coeffs"))});
  return Integrand(std::move(pieces));
}

Json signed_measure_to_json(const SignedSetMeasure& m) {
  Json pieces = Json::array();
  for (const auto& p : m.pieces) pieces.push_back({{"lo", p.lo}, {"hi", p.hi}, {"density", p.density}});
  Json atoms = Json::array();
  for (const auto& a : m.atoms) atoms.push_back({{"x", a.x}, {"mass", a.mass}});
  return Json{{"pieces", pieces}, {"atoms", atoms}};
}

SignedSetMeasure signed_measure_from_json(const Json& j) {
  SignedSetMeasure m;
  for (const auto& p : array_field(j, "pieces"))
    m.pieces.push_back({num(p, "lo"), num(p, "hi"), num(p, "density")});
  for (const auto& a : array_or_empty(j, "atoms")) m.atoms.push_back({num(a, "x"), num(a, "mass")});
  return m;
}

Json levy_ito_to_json(const LevyItoParts& p) {
  Json j{{"schema", kSchemaVersion},
         {"drift", signed_measure_to_json(p.drift)},
         {"gaussian", field_to_json(p.gaussian)},
         {"jumps", field_to_json(p.jumps)}};
  j["compensated_drift"] = p.compensated_drift ? signed_measure_to_json(*p.compensated_drift) : Json();
  return j;
}

Json model_to_json(const FCRMModel& m) {
  Json atoms = Json::array();
  for (const auto& a : m.atoms) atoms.push_back({{"x", a.x}, {"law", law_to_json(a.law)}});
  return Json{{"schema", kSchemaVersion}, {"diffuse", field_to_json(m.diffuse)}, {"atoms", atoms}};
}

FCRMModel model_from_json(const Json& j) {
  if (!j.is_object()) parse_fail("model must be an object");
  SeedField diffuse = field_from_json(field(j, "diffuse"));
  std::vector<FcrmAtom> atoms;
  for (const auto& a : array_or_empty(j, "atoms")) {
    const Json& jl = field(a, "law");
    AtomLaw law;
    if (auto it = jl.find("triplet"); it != jl.end()) law.triplet = triplet_from_json(*it);
    if (auto it = jl.find("moments"); it != jl.end()) law.moments = MomentVector{num_array(*it)};
    if (auto it = jl.find("positive"); it != jl.end()) {
      if (!it->is_boolean()) parse_fail("'positive' must be a boolean");
      law.positive = it->get<bool>();
    }
    atoms.push_back({num(a, "x"), std::move(law)});
  }
  return make_model(std::move(diffuse), std::move(atoms));
}

Json kingman_to_json(const KingmanResult& k) {
  Json atomic = Json::array();
  for (const auto& t : k.atomic)
    atomic.push_back({{"x", t.x}, {"mu_mass", t.mu_mass}, {"law", law_to_json(t.law)}});
  Json levels = Json::array();
  for (const auto& l : k.null_array.levels)
    levels.push_back({{"n", l.n}, {"bound", l.bound}, {"triplet_gap", l.triplet_gap}});
  return Json{{"schema", kSchemaVersion},
              {"atomic", atomic},
              {"dropped", k.dropped},
              {"diffuse", field_to_json(k.diffuse)},
              {"null_array",
               {{"eps", k.null_array.eps},
                {"mu_total", k.null_array.mu_total},
                {"levels", levels},
                {"decays", k.null_array.decays}}}};
}

Json convergence_to_json(const ConvergenceReport& r) {
  return Json{{"schema", kSchemaVersion},   {"drift_gap", r.drift_gap},
              {"bump_gap", r.bump_gap},     {"bracket", r.bracket},
              {"ct_gap", r.ct_gap},         {"eps_grid", r.eps_grid},
              {"drift_pass", r.drift_pass}, {"bump_pass", r.bump_pass},
              {"bracket_pass", r.bracket_pass}, {"ct_pass", r.ct_pass},
              {"note", r.note},             {"pass", r.pass()}};
}

Json density_sidecar_to_json(const SpectralDensity& d) {
  Json atoms = Json::array();
  for (const auto& a : d.atoms) atoms.push_back({{"location", a.location}, {"mass", a.mass}});
  Json support = d.has_support ? Json::array({d.support_lo, d.support_hi}) : Json();
  return Json{{"schema", kSchemaVersion}, {"atoms", atoms}, {"support", support},
              {"failed_points", d.failed_points}, {"total_mass", d.total_mass()}};
}

Json cumulants_to_json(const CumulantVector& k) {
  return Json{{"schema", kSchemaVersion}, {"cumulants", k.values}};
}

Json ensemble_to_json(const rmt::Ensemble& e) {
  Json j{{"schema", kSchemaVersion}, {"kind", kind_name(e.kind)}, {"n", e.n}, {"seed", e.seed}};
  switch (e.kind) {
    case rmt::EnsembleKind::kGue: j["variance"] = e.variance; break;
    case rmt::EnsembleKind::kWishart: j["lambda"] = e.lambda; break;
    case rmt::EnsembleKind::kFid:
      j["triplet"] = triplet_to_json(e.triplet);
      j["eps"] = e.eps;
      break;
  }
  return j;
}

rmt::Ensemble ensemble_from_json(const Json& j) {
  if (!j.is_object()) parse_fail("ensemble must be an object");
  rmt::Ensemble e;
  const Json& kind = field(j, "kind");
  if (!kind.is_string()) parse_fail("ensemble kind must be a string");
  auto k = kind.get<std::string>();
  const Json& n = field(j, "n");
  if (!n.is_number_unsigned() || n.get<std::uint64_t>() < 2)
    fail(ErrorCode::kInvalidArgument, "ensemble size n must be an integer >= 2");
  e.n = n.get<std::size_t>();
  if (auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_unsigned()) parse_fail("seed must be a non-negative integer");
    e.seed = it->get<std::uint64_t>();
  }
  if (k == "gue") {
    e.kind = rmt::EnsembleKind::kGue;
    e.variance = num_or(j, "variance", 1.0);
    if (!(e.variance > 0.0) || !std::isfinite(e.variance))
      fail(ErrorCode::kInvalidArgument, "variance must be positive");
  } else if (k == "wishart") {
    e.kind = rmt::EnsembleKind::kWishart;
    e.lambda = num_or(j, "lambda", 1.0);
    if (!(e.lambda > 0.0) || !std::isfinite(e.lambda))
      fail(ErrorCode::kInvalidArgument, "lambda must be positive");
  } else if (k == "fid") {
    e.kind = rmt::EnsembleKind::kFid;
    e.triplet = triplet_from_json(field(j, "triplet"));
    e.eps = num_or(j, "eps", 1e-3);
    if (!(e.eps > 0.0)) fail(ErrorCode::kInvalidArgument, "eps must be positive");
  } else {
    parse_fail("unknown ensemble kind '" + k + "'");
  }
  return e;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    parse_fail(e.what());
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace freelevy
