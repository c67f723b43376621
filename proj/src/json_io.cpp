#include "catlas/json_io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

namespace catlas {

namespace {

[[noreturn]] void schema_error(const std::string& msg) { throw Error("schema", msg); }

json v3(const V3& v) { return json::array({v.x(), v.y(), v.z()}); }

json polyline(const std::vector<V3>& pts) {
  json out = json::array();
  for (const auto& p : pts) out.push_back(v3(p));
  return out;
}

json edge(const GraphEdge& e, bool with_polyline) {
  json j = {{"from", e.from}, {"to", e.to}};
  if (with_polyline) j["polyline"] = polyline(e.polyline);
  return j;
}

json graph(const SignedGraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges) edges.push_back(edge(e, false));
  return {{"vertices", g.vertices}, {"edges", edges},        {"components", g.components},
          {"betti", g.betti},       {"loop_edges", g.loop_edges}, {"forest", g.forest()}};
}

json complex_pair(const std::array<std::complex<double>, 2>& ev) {
  json out = json::array();
  for (const auto& z : ev) out.push_back({{"re", z.real()}, {"im", z.imag()}});
  return out;
}

}  // namespace

json report_envelope(const std::string& kind, std::uint64_t seed) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return {{"schema_version", kSchemaVersion}, {"kind", kind}, {"seed", seed}, {"generated_at", buf}};
}

void write_text_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("io", "cannot write " + tmp.string());
    out << text;
    if (!out) throw Error("io", "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("io", "cannot rename onto " + path + ": " + ec.message());
  }
}

void write_json_atomic(const std::string& path, const json& j) { write_text_atomic(path, j.dump(2) + "\n"); }

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    schema_error(path + ": " + e.what());
  }
}

json to_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json to_json(const Rational& r) { return to_string(r); }

json to_json(const Box& b) {
  json lo = json::array(), hi = json::array();
  for (const auto& x : b.lo) lo.push_back(to_string(x));
  for (const auto& x : b.hi) hi.push_back(to_string(x));
  return {{"lo", lo}, {"hi", hi}};
}

json to_json(const PullbackReport& r, bool include_samples) {
  json j = {{"sample_count", r.sample_count},
            {"fitted", r.fitted},
            {"claimed_factor", r.claimed_factor},
            {"tol", r.tol},
            {"max_residual", r.max_residual},
            {"max_kernel_angle", r.max_kernel_angle},
            {"min_factor", r.min_factor},
            {"max_factor", r.max_factor},
            {"failed_evaluations", r.failed_evaluations},
            {"pass", r.passed()}};
  j["counterexample"] = r.counterexample ? to_json(*r.counterexample) : json(nullptr);
  if (include_samples) {
    json s = json::array();
    for (const auto& p : r.samples)
      s.push_back({{"point", to_json(p.point)}, {"residual", p.residual}, {"factor", p.factor},
                   {"kernel_angle", p.kernel_angle}, {"error", p.error}});
    j["samples"] = s;
  }
  return j;
}

json to_json(const SeparationReport& r) {
  return {{"dim", r.d},
          {"scale", to_string(r.s)},
          {"color", r.color},
          {"cube_count", r.cube_count},
          {"min_chebyshev", to_string(r.min_chebyshev)},
          {"min_euclidean_sq", to_string(r.min_euclidean_sq)},
          {"min_euclidean", r.min_euclidean},
          {"witness", {to_json(r.witness_a.box()), to_json(r.witness_b.box())}},
          {"n2_disjoint", r.n2_disjoint}};
}

json to_json(const CoverPlan& p, bool include_regions) {
  json charts = json::array();
  for (const auto& c : p.charts) {
    json off = json::array();
    for (const auto& x : c.offset) off.push_back(to_string(x));
    charts.push_back({{"name", c.name}, {"offset", off}, {"rho", to_string(c.rho)}});
  }
  json scales = json::array();
  for (const auto& s : p.scales)
    scales.push_back({{"s", to_string(s.s)}, {"delta", to_string(s.delta)}, {"cubes_used", s.cubes_used}});
  json fams = json::array();
  for (const auto& f : p.families) {
    json fam = {{"regions", f.size()}};
    size_t boxes = 0;
    for (const auto& r : f) boxes += r.boxes.size();
    fam["boxes"] = boxes;
    if (include_regions) {
      json regs = json::array();
      for (const auto& r : f) {
        json bx = json::array();
        for (const auto& b : r.boxes) bx.push_back(to_json(b));
        regs.push_back({{"chart", r.chart}, {"boxes", bx}});
      }
      fam["region_boxes"] = regs;
    }
    fams.push_back(fam);
  }
  json log = json::array();
  for (const auto& m : p.log)
    log.push_back({{"color", m.color}, {"chart", m.chart}, {"incoming", m.incoming}, {"absorbed", m.absorbed},
                   {"attached", m.attached}, {"retained", m.retained}});
  return {{"dim", p.d},
          {"charts", charts},
          {"scales", scales},
          {"family_count", p.families.size()},
          {"families", fams},
          {"merge_log", log},
          {"grid", {{"resolution", p.grid.resolution}, {"points", p.grid.points}, {"covered", p.grid.covered}}},
          {"families_disjoint", p.families_disjoint},
          {"charts_cover", p.charts_cover},
          {"complete", p.complete()}};
}

json to_json(const CuboidCertificate& c) {
  json faces = json::array();
  for (const auto& f : c.faces) faces.push_back({{"axis", f.axis}, {"side", f.side}, {"min_margin", f.min_margin}});
  return {{"epsilon", c.epsilon},
          {"Mz", c.Mz},
          {"analytic_min_margin", c.analytic_min_margin},
          {"sampled_min_margin", c.sampled_min_margin},
          {"samples_per_face", c.samples_per_face},
          {"failures", c.failures},
          {"faces", faces},
          {"pass", c.pass}};
}

json to_json(const StarShapedCertificate& c) {
  return {{"boundary_samples", c.boundary.size()},
          {"min_margin", c.min_margin},
          {"max_crossings", c.max_crossings},
          {"zero_found", c.zero_found},
          {"zero_in_domain", c.zero_in_domain},
          {"zero", c.zero_found ? to_json(c.zero) : json(nullptr)},
          {"backward_converges", c.backward_converges},
          {"forward_escapes", c.forward_escapes},
          {"bounded", c.bounded},
          {"diagnostics", c.diagnostics},
          {"pass", c.pass}};
}

json to_json(const FoliationReport& r) {
  json sing = json::array();
  for (const auto& s : r.singular)
    sing.push_back({{"position", v3(s.position)},
                    {"world", v3(s.world)},
                    {"chart", to_string(s.chart)},
                    {"eigenvalues", complex_pair(s.eigenvalues)},
                    {"divergence", s.divergence},
                    {"sign", s.sign},
                    {"type", s.type_label()},
                    {"index", s.index},
                    {"margin", s.margin},
                    {"error", s.error}});
  json cycles = json::array();
  for (const auto& c : r.cycles)
    cycles.push_back({{"point", v3(c.point)},
                      {"period", c.period},
                      {"multiplier", c.lambda},
                      {"second_derivative", c.second_derivative},
                      {"degenerate", c.degenerate},
                      {"isolated", c.isolated},
                      {"stability", c.stability},
                      {"polyline_points", c.polyline.size()}});
  json retro = json::array(), conn = json::array();
  for (const auto& e : r.graph.retrograde) retro.push_back(edge(e, false));
  for (const auto& e : r.graph.saddle_connections) conn.push_back(edge(e, false));
  json j = {{"name", r.name},
            {"singular_points", sing},
            {"cycles", cycles},
            {"graphs",
             {{"positive", graph(r.graph.positive)},
              {"negative", graph(r.graph.negative)},
              {"separatrices", r.graph.separatrices.size()},
              {"retrograde", retro},
              {"saddle_connections", conn},
              {"unresolved", r.graph.unresolved},
              {"edges_found", "found"}}},
            {"index_sum", r.index_sum},
            {"convexity", {{"convex", to_string(r.convexity.convex)},
                           {"degenerate_cycles", r.convexity.degenerate_cycles},
                           {"retrograde_connections", r.convexity.retrograde_connections},
                           {"reason", r.convexity.reason}}},
            {"tightness", {{"tight", to_string(r.tightness.tight)},
                           {"witness", r.tightness.witness},
                           {"trees", r.tightness.trees}}},
            {"stability", {{"class", to_string(r.stability.cls)},
                           {"degenerate_points", r.stability.degenerate_points},
                           {"saddle_nodes", r.stability.saddle_nodes},
                           {"degenerate_cycles", r.stability.degenerate_cycles},
                           {"saddle_connections", r.stability.saddle_connections},
                           {"evidence", r.stability.evidence}}},
            {"dividing_tight", to_string(r.dividing_tight)}};
  if (r.dividing) {
    size_t pts = 0;
    for (const auto& c : r.dividing->curves) pts += c.size();
    j["dividing_set"] = {{"components", r.dividing->components},
                         {"transversality", r.dividing->transversality},
                         {"mesh_vertices", r.dividing->mesh_vertices},
                         {"curve_points", pts}};
  } else {
    j["dividing_set"] = nullptr;
  }
  return j;
}

json to_json(const ExtensiveReport& r) {
  json ev = json::array();
  for (const auto& e : r.evidence) {
    json cr = json::array();
    for (const auto& c : e.crossings)
      cr.push_back({{"segment", c.curve_segment}, {"point", v3(c.point)}, {"angle", c.angle}});
    ev.push_back({{"condition", e.condition}, {"target", e.target}, {"satisfied", e.satisfied}, {"crossings", cr}});
  }
  return {{"embedded", r.embedded}, {"extensive", r.extensive}, {"evidence", ev}};
}

json to_json(const PartitionReport& r) {
  json sets = json::array();
  for (const auto& set : r.sets) {
    json pieces = json::array();
    for (const auto& p : set)
      pieces.push_back({{"disc", p.disc}, {"z", {p.z_lo, p.z_hi}}, {"tau", {p.t0, p.t1}}});
    sets.push_back(pieces);
  }
  return {{"model", to_string(r.model)},
          {"parallel_height", r.parallel_height},
          {"sets", sets},
          {"grid_points", r.grid_points},
          {"covered", r.covered},
          {"min_margin", r.min_margin},
          {"complete", r.complete()}};
}

json to_json(const BoundResult& r) {
  return {{"lower", r.lower}, {"upper", r.upper}, {"exact", r.exact()}, {"rules", r.rules}};
}

json to_json(const CategoryBounds& r) {
  return {{"cup_length_lower", r.cup_length_lower}, {"cat", to_json(r.cat)}, {"B", to_json(r.B)}};
}

json to_json(const ManifoldDescriptor& m) {
  json j = {{"class", to_string(m.cls)}, {"dim", m.dim}, {"contact", to_string(m.contact)}};
  if (m.cls == ManifoldClass::connected_sum_s2xs1) j["k"] = m.k;
  if (m.cls == ManifoldClass::product_with_surface) j["genus"] = m.k;
  if (m.connectivity) j["connectivity"] = *m.connectivity;
  if (m.cup_length) j["cup_length"] = *m.cup_length;
  if (m.euler_characteristic) j["euler_characteristic"] = *m.euler_characteristic;
  if (!m.orientable) j["orientable"] = false;
  if (!m.parts.empty()) {
    json parts = json::array();
    for (const auto& p : m.parts) parts.push_back(to_json(p));
    j["parts"] = parts;
  }
  return j;
}

ManifoldDescriptor descriptor_from_json(const json& j) {
  if (!j.is_object()) schema_error("descriptor must be an object");
  if (!j.contains("class") || !j["class"].is_string()) schema_error("descriptor needs a string 'class'");
  auto int_field = [&](const char* key) -> std::optional<int> {
    if (!j.contains(key)) return std::nullopt;
    if (!j[key].is_number_integer()) schema_error(std::string("'") + key + "' must be an integer");
    return j[key].get<int>();
  };
  ManifoldDescriptor m;
  m.cls = manifold_class_from_string(j["class"].get<std::string>());
  if (j.contains("contact")) {
    if (!j["contact"].is_string()) schema_error("'contact' must be a string");
    m.contact = contact_tag_from_string(j["contact"].get<std::string>());
  }
  if (j.contains("parts")) {
    if (!j["parts"].is_array()) schema_error("'parts' must be an array");
    for (const auto& p : j["parts"]) m.parts.push_back(descriptor_from_json(p));
  }
  if (j.contains("base")) m.parts = {descriptor_from_json(j["base"])};
  const auto dim = int_field("dim");
  switch (m.cls) {
    case ManifoldClass::s3:
    case ManifoldClass::connected_sum_s2xs1:
    case ManifoldClass::other_3manifold:
      m.dim = dim.value_or(3);
      break;
    case ManifoldClass::spherisation:
      if (m.parts.size() != 1) schema_error("spherisation_of needs one 'base'");
      m.dim = dim.value_or(2 * m.parts[0].dim - 1);
      break;
    case ManifoldClass::product_with_surface:
      if (m.parts.size() != 1) schema_error("product_with_surface needs one factor in 'parts'");
      m.dim = dim.value_or(m.parts[0].dim + 2);
      break;
    case ManifoldClass::connected_sum:
      if (m.parts.empty()) schema_error("connected_sum needs 'parts'");
      m.dim = dim.value_or(m.parts[0].dim);
      break;
    default:
      if (!dim) schema_error("'dim' is required for class " + to_string(m.cls));
      m.dim = *dim;
  }
  m.k = int_field("k").value_or(int_field("genus").value_or(0));
  m.connectivity = int_field("connectivity");
  m.cup_length = int_field("cup_length");
  m.euler_characteristic = int_field("euler_characteristic");
  if (m.cls == ManifoldClass::torus && !m.euler_characteristic) m.euler_characteristic = 0;
  if (m.cls == ManifoldClass::sphere || (m.cls == ManifoldClass::generic && j.value("is_sphere", false))) {
    if (!m.connectivity) m.connectivity = m.dim - 1;
    if (!m.cup_length) m.cup_length = 1;
    if (m.dim % 2 == 0 && !m.euler_characteristic) m.euler_characteristic = 2;
  }
  m.orientable = j.value("orientable", true);
  try {
    m.validate();
  } catch (const Error& e) {
    schema_error(e.what());
  }
  return m;
}

std::vector<TorusChart> torus_charts_from_json(const json& j, int* dim, int* grid_resolution) {
  if (!j.is_object() || j.value("kind", "") != "torus_charts") schema_error("kind must be 'torus_charts'");
  if (!j.contains("dim") || !j["dim"].is_number_integer()) schema_error("'dim' must be an integer");
  const int d = j["dim"].get<int>();
  if (d < 1) schema_error("'dim' must be positive");
  if (!j.contains("charts") || !j["charts"].is_array() || j["charts"].empty()) schema_error("'charts' must be a list");
  std::vector<TorusChart> charts;
  try {
    for (const auto& c : j["charts"]) {
      TorusChart t;
      t.name = c.value("name", "chart" + std::to_string(charts.size()));
      const auto& off = c.at("offset");
      if (!off.is_array() || static_cast<int>(off.size()) != d) schema_error("chart offset must have dim entries");
      for (const auto& x : off) t.offset.push_back(parse_rational(x.is_string() ? x.get<std::string>() : x.dump()));
      const auto& rho = c.at("rho");
      t.rho = parse_rational(rho.is_string() ? rho.get<std::string>() : rho.dump());
      if (t.rho <= 0) schema_error("chart rho must be positive");
      charts.push_back(std::move(t));
    }
  } catch (const json::exception& e) {
    schema_error(e.what());
  }
  if (dim) *dim = d;
  if (grid_resolution) *grid_resolution = j.value("grid_resolution", 512);
  return charts;
}

}  // namespace catlas
