#include "catlas/fixtures.hpp"

#include <fstream>

namespace catlas {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& msg) { throw Error("schema", msg); }

V3 v3_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) schema_error(what + " must be an array of 3 numbers");
  V3 v;
  for (int k = 0; k < 3; ++k) {
    if (!j[k].is_number()) schema_error(what + " must be an array of 3 numbers");
    v[k] = j[k].get<double>();
  }
  return v;
}

double number(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) schema_error("'" + key + "' must be a number");
  return j[key].get<double>();
}

std::string text(const json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_string()) schema_error("missing string '" + key + "'");
  return j[key].get<std::string>();
}

PolynomialMap polynomial_map_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) schema_error("'components' must list 3 polynomials");
  PolynomialMap m;
  for (const auto& c : j) m.components.push_back(polynomial_from_json(c));
  return m;
}

OneForm form_from_json(const json& src) {
  const std::string form = text(src, "form");
  if (form == "standard") return make_form(FormKind::standard, 1);
  if (form == "rotational") return make_form(FormKind::rotational, 1);
  if (form == "overtwisted") return overtwisted_form();
  if (form == "polynomial") {
    if (!src.contains("coefficients")) schema_error("polynomial form needs 'coefficients'");
    return polynomial_form(polynomial_map_from_json(src["coefficients"]));
  }
  schema_error("unknown form '" + form + "'");
}

TangentField synthetic_from_json(const json& src, const std::string& name) {
  const std::string field = text(src, "field");
  TangentField Y;
  if (field == "height_gradient") {
    Y = height_gradient_field();
  } else if (field == "rotation") {
    Y = rotation_field(number(src, "omega", 1.0));
  } else if (field == "equator_cycle") {
    const std::string p = text(src, "profile");
    CycleProfile profile;
    if (p == "attracting") profile = CycleProfile::attracting;
    else if (p == "repelling") profile = CycleProfile::repelling;
    else if (p == "semistable") profile = CycleProfile::semistable;
    else schema_error("unknown cycle profile '" + p + "'");
    Y = equator_cycle_field(profile, number(src, "omega", 1.0));
  } else if (field == "projected_polynomial") {
    if (!src.contains("components")) schema_error("projected_polynomial needs 'components'");
    Y = projected_field(polynomial_map_from_json(src["components"]), name);
  } else if (field == "projected_linear") {
    const json& m = src.value("matrix", json());
    if (!m.is_array() || m.size() != 3) schema_error("'matrix' must be 3x3");
    Eigen::Matrix3d M;
    for (int r = 0; r < 3; ++r) M.row(r) = v3_from_json(m[r], "matrix row").transpose();
    Y = projected_linear_field(M, name);
  } else {
    schema_error("unknown synthetic field '" + field + "'");
  }
  return Y;
}

// Hamiltonian alpha(p)(p), whose contact field is transverse to round spheres about 0
// wherever it does not degenerate.
ScalarField alpha_position(const OneForm& alpha) {
  ScalarField H;
  H.dim = 3;
  H.f = [alpha](const Vec& p) { return alpha.coeffs(p).dot(p); };
  H.grad = [alpha](const Vec& p) { return Vec(alpha.coeffs(p) + alpha.coeff_jacobian(p).transpose() * p); };
  return H;
}

}  // namespace

Polynomial polynomial_from_json(const json& j, int nvars) {
  if (j.is_number()) return Polynomial::constant(nvars, j.get<double>());
  if (!j.is_array()) schema_error("polynomial must be a number or a list of [coeff, exponents] terms");
  std::vector<Monomial> terms;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 2 || !t[0].is_number() || !t[1].is_array() ||
        static_cast<int>(t[1].size()) != nvars)
      schema_error("polynomial term must be [coeff, [e_1, ..., e_n]]");
    Monomial m;
    m.coeff = t[0].get<double>();
    for (const auto& e : t[1]) {
      if (!e.is_number_integer() || e.get<int>() < 0) schema_error("exponents must be non-negative integers");
      m.exponents.push_back(e.get<int>());
    }
    terms.push_back(std::move(m));
  }
  return Polynomial(nvars, std::move(terms));
}

json polynomial_to_json(const Polynomial& p) {
  json out = json::array();
  for (const auto& m : p.terms()) out.push_back({m.coeff, m.exponents});
  return out;
}

FoliationFixture foliation_fixture_from_json(const json& j) {
  if (!j.is_object()) schema_error("fixture must be a JSON object");
  if (j.value("kind", "") != "foliation_fixture") schema_error("kind must be 'foliation_fixture'");
  FoliationFixture fx;
  fx.name = text(j, "name");
  fx.description = j.value("description", "");
  fx.source = j;
  if (j.contains("surface")) {
    const json& s = j["surface"];
    if (s.contains("center")) fx.surface.center = v3_from_json(s["center"], "surface.center");
    fx.surface.radius = number(s, "radius", 1.0);
    if (!(fx.surface.radius > 0)) schema_error("surface.radius must be positive");
  }
  if (!j.contains("source") || !j["source"].is_object()) schema_error("missing object 'source'");
  const json& src = j["source"];
  const std::string kind = text(src, "kind");
  if (kind == "form") {
    fx.form = form_from_json(src);
    fx.field = characteristic_field(*fx.form, fx.surface, fx.name);
  } else if (kind == "synthetic") {
    if (fx.surface.radius != 1.0 || fx.surface.center != V3::Zero())
      schema_error("synthetic fields live on the unit sphere");
    fx.field = synthetic_from_json(src, fx.name);
  } else {
    schema_error("source.kind must be 'form' or 'synthetic'");
  }
  fx.field.name = fx.name;
  if (j.contains("patches")) {
    for (const auto& p : j["patches"]) {
      PatchSpec spec;
      spec.center = v3_from_json(p.value("center", json()), "patch.center").normalized();
      spec.radius = number(p, "radius", spec.radius);
      spec.split = number(p, "split", spec.split);
      spec.rate = number(p, "rate", spec.rate);
      fx.field = apply_patch(fx.field, spec);
      fx.field.name = fx.name;
    }
  }
  if (j.contains("transverse")) {
    if (!fx.form) schema_error("a transverse field needs a form source");
    const json& t = j["transverse"];
    const std::string tk = text(t, "kind");
    if (tk == "dilation") {
      fx.transverse = dilation_field(1);
    } else if (tk == "hamiltonian") {
      if (!t.contains("hamiltonian")) schema_error("transverse hamiltonian missing");
      if (t["hamiltonian"].is_string()) {
        if (t["hamiltonian"] != "alpha_position") schema_error("unknown named hamiltonian");
        fx.transverse = field_of_hamiltonian(alpha_position(*fx.form), *fx.form);
      } else {
        fx.transverse = field_of_hamiltonian(scalar_from_polynomial(polynomial_from_json(t["hamiltonian"])), *fx.form);
      }
    } else {
      schema_error("unknown transverse kind '" + tk + "'");
    }
  }
  return fx;
}

FoliationFixture load_foliation_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    schema_error(path + ": " + e.what());
  }
  return foliation_fixture_from_json(j);
}

FoliationReport analyze_fixture(const FoliationFixture& fx, const FoliationParams& params, int subdivisions) {
  FoliationReport r = analyze_foliation(fx.field, params);
  if (fx.form && fx.transverse) {
    r.dividing = dividing_set(fx.surface, *fx.form, *fx.transverse, subdivisions);
    const int c = r.dividing->components;
    r.dividing_tight = c == 1 ? Verdict::yes : c == 0 ? Verdict::inconclusive : Verdict::no;
  }
  return r;
}

}  // namespace catlas
