#include "catlas/contact_core.hpp"
#include "catlas/dimension_cover.hpp"
#include "catlas/fixtures.hpp"
#include "catlas/foliation.hpp"
#include "catlas/json_io.hpp"
#include "catlas/star_shaped.hpp"
#include "catlas/svg.hpp"
#include "catlas/topology_bounds.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>

using namespace catlas;

namespace {

enum Exit { kPass = 0, kUsage = 1, kCounterexample = 2, kInconclusive = 3 };

struct Common {
  std::uint64_t seed = 0;
  std::string out;
  std::string svg;
  std::vector<std::string> inputs;
};

void emit(const Common& c, const json& report) {
  namespace fs = std::filesystem;
  if (c.out.empty()) {
    std::cout << report.dump(2) << "\n";
    return;
  }
  for (const auto& in : c.inputs)
    if (fs::exists(in) && fs::exists(c.out) && fs::equivalent(in, c.out))
      throw Error("usage", "output would overwrite input " + in);
  write_json_atomic(c.out, report);
}

void emit_svg(const Common& c, const std::string& svg) {
  if (!c.svg.empty()) write_text_atomic(c.svg, svg);
}

// ---- audit

int cmd_audit(const Common& c, const std::string& map, int n, int samples, double tol, bool with_samples) {
  Rng rng(c.seed);
  json report = report_envelope("audit", c.seed);
  report["map"] = map;
  report["n"] = n;
  report["samples"] = samples;
  OneForm st = make_form(FormKind::standard, n), rot = make_form(FormKind::rotational, n);
  PullbackReport rep;
  bool pass = true;
  if (map == "psi-normalizer") {
    rep = pullback_report(psi_normalizer(n), st, rot, 2.0, box_samples(2 * n + 1, samples, rng, 2.0), tol);
  } else if (map == "dilation") {
    const double t = 0.7;
    report["t"] = t;
    rep = pullback_report(dilation_map(n, t), st, st, std::exp(2 * t), box_samples(2 * n + 1, samples, rng, 2.0), tol);
  } else if (map == "jet-standard") {
    rep = pullback_report(jet_to_standard_map(n), make_form(FormKind::jet, n), st, 1.0,
                          box_samples(2 * n + 1, samples, rng, 3.0), tol);
  } else if (map == "sphere-jet") {
    const int m = n + 1;
    report["m"] = m;
    rep = pullback_report(sphere_jet_map(m), tautological_form(m), make_form(FormKind::jet, m), 1.0,
                          sphere_jet_samples(m, samples, rng), tol);
  } else if (map == "cotangent-lift") {
    const int m = n + 1;
    SmoothMap beta = random_triangular_diffeo(m, rng);
    report["m"] = m;
    rep = pullback_report(cotangent_lift_map(beta), tautological_form(m), tautological_form(m), 1.0,
                          box_samples(2 * m, samples, rng, 1.0), tol);
  } else if (map == "neck-involution") {
    // Layer identity t(Psi(p)) = -t(p), then the contact identity on the equator and off it.
    double layer = 0.0;
    for (int s = 0; s < samples; ++s) {
      Vec p = uniform_vec(rng, 2 * n + 1, -3, 3);
      if (p.norm() < 1e-3) continue;
      layer = std::max(layer, std::abs(neck_layer(neck_involution(p, n), n) + neck_layer(p, n)));
    }
    std::vector<TangentSample> eq;
    for (int s = 0; s < samples; ++s) {
      Vec p = uniform_vec(rng, 2 * n + 1, -2, 2);
      p[2 * n] = 0;
      eq.push_back({p, Mat::Identity(2 * n + 1, 2 * n + 1)});
    }
    const auto equator = pullback_report(neck_map(n), rot, rot, std::nullopt, eq, tol);
    rep = pullback_report(neck_map(n), rot, rot, std::nullopt, box_samples(2 * n + 1, samples, rng, 2.0), tol);
    report["layer_identity_max_error"] = layer;
    report["layer_identity_pass"] = layer < tol;
    report["equator"] = to_json(equator);
    pass = layer < tol && equator.passed();
  } else {
    throw Error("usage", "unknown map '" + map + "'");
  }
  report["pullback"] = to_json(rep, with_samples);
  pass = pass && rep.passed();
  report["verdict"] = pass ? "pass" : "counterexample";
  emit(c, report);
  return pass ? kPass : kCounterexample;
}

// ---- foliation

json tight_value(Verdict v) {
  if (v == Verdict::yes) return true;
  if (v == Verdict::no) return false;
  return to_string(v);
}

int cmd_foliation(const Common& c, const FoliationParams& params, int subdivisions, bool extensive) {
  const auto fx = load_foliation_fixture(c.inputs.at(0));
  const FoliationReport r = analyze_fixture(fx, params, subdivisions);
  json report = report_envelope("foliation", c.seed);
  report["fixture"] = fx.name;
  report["surface"] = {{"center", {fx.surface.center.x(), fx.surface.center.y(), fx.surface.center.z()}},
                       {"radius", fx.surface.radius}};
  report["analysis"] = to_json(r);

  // Combined tightness: graph criterion when applicable, dividing set otherwise; disagreement is inconclusive.
  Verdict tight = r.tightness.tight;
  if (tight == Verdict::inconclusive || tight == Verdict::inapplicable) {
    if (r.dividing_tight == Verdict::yes || r.dividing_tight == Verdict::no) tight = r.dividing_tight;
  } else if ((r.dividing_tight == Verdict::yes || r.dividing_tight == Verdict::no) && r.dividing_tight != tight) {
    tight = Verdict::inconclusive;
  }
  report["convex"] = tight_value(r.convexity.convex);
  report["tight"] = tight_value(tight);
  report["tight_graph_criterion"] = to_string(r.tightness.tight);
  report["tight_dividing_set"] = to_string(r.dividing_tight);
  report["stability_class"] = to_string(r.stability.cls);
  if (extensive) {
    try {
      const auto curve = find_extensive_curve(fx.field, r);
      report["extensive_curve"] = to_json(extensive_report(curve, fx.field, r));
    } catch (const Error& e) {
      report["extensive_curve"] = {{"error", e.code()}};
    }
  }
  const bool unresolved = r.convexity.convex == Verdict::inconclusive || tight == Verdict::inconclusive;
  report["verdict"] = unresolved ? "inconclusive" : "resolved";
  emit(c, report);
  emit_svg(c, phase_portrait_svg(r, fx.surface));
  return unresolved ? kInconclusive : kPass;
}

// ---- cover

int cmd_cover(const Common& c, int d, const std::string& scale, double lo, double hi) {
  if (d < 1 || d > 3) throw Error("usage", "--dim must be 1, 2 or 3");
  if (!(hi > lo)) throw Error("usage", "window must satisfy lo < hi");
  const Rational s = parse_rational(scale);
  if (s <= 0) throw Error("usage", "--scale must be positive");
  auto rat = [](double x) {
    const double r = std::round(x * 1000);
    return Rational(BigInt(static_cast<long long>(r)), BigInt(1000));
  };
  Box window;
  for (int k = 0; k < d; ++k) {
    window.lo.push_back(rat(lo));
    window.hi.push_back(rat(hi));
  }
  json report = report_envelope("cover", c.seed);
  report["dim"] = d;
  report["scale"] = to_string(s);
  report["window"] = to_json(window);
  const Rational expected = s / Rational(d);
  report["expected_separation"] = to_string(expected);
  report["n1_size"] = to_string(s * (1 + Rational(1, 4 * d)));
  report["n2_size"] = to_string(s * (1 + Rational(1, 2 * d)));
  json colors = json::array();
  bool pass = true;
  Rational min_sep;
  for (int color = 1; color <= d + 1; ++color) {
    const auto rep = separation_report(d, s, color, window);
    colors.push_back(to_json(rep));
    if (color == 1 || rep.min_chebyshev < min_sep) min_sep = rep.min_chebyshev;
    pass = pass && rep.min_chebyshev == expected && rep.n2_disjoint;
  }
  report["colors"] = colors;
  report["min_distance"] = to_string(min_sep);
  report["min_distance_value"] = to_double(min_sep);
  report["verdict"] = pass ? "pass" : "counterexample";
  emit(c, report);
  if (d == 2) emit_svg(c, brick_svg(s, window));
  return pass ? kPass : kCounterexample;
}

int cmd_torus_cover(const Common& c, int d, int resolution) {
  int file_dim = 0, file_res = 0;
  const auto charts = torus_charts_from_json(read_json_file(c.inputs.at(0)), &file_dim, &file_res);
  if (d == 0) d = file_dim;
  if (d != file_dim) throw Error("usage", "--dim disagrees with the chart file");
  if (d > 3) throw Error("usage", "torus-cover supports d <= 3");
  if (resolution == 0) resolution = file_res;
  const CoverPlan plan = torus_cover(d, charts, resolution);
  json report = report_envelope("torus_cover", c.seed);
  report["plan"] = to_json(plan);
  report["verdict"] = plan.complete() ? "pass" : "counterexample";
  emit(c, report);
  if (d == 2) emit_svg(c, cover_plan_svg(plan));
  return plan.complete() ? kPass : kCounterexample;
}

// ---- bounds

int cmd_bounds(const Common& c, const std::string& inline_json) {
  json doc;
  if (!inline_json.empty()) {
    try {
      doc = json::parse(inline_json);
    } catch (const json::parse_error& e) {
      throw Error("schema", e.what());
    }
  } else {
    doc = read_json_file(c.inputs.at(0));
  }
  const json& desc_json = doc.contains("descriptor") ? doc["descriptor"] : doc;
  const ManifoldDescriptor m = descriptor_from_json(desc_json);
  json report = report_envelope("bounds", c.seed);
  report["descriptor"] = to_json(m);
  report["category"] = to_json(category_bounds(m));
  if (m.dim % 2 == 1) {
    const auto C = covering_number_bounds(m);
    report["C"] = to_json(C);
    report["interval"] = {C.lower, C.upper};
  } else {
    report["C"] = nullptr;
  }
  try {
    const auto v = three_manifold_values(m);
    report["three_manifold"] = {{"B", v.B}, {"C", v.C}};
  } catch (const Error& e) {
    report["three_manifold"] = {{"error", e.code()}};
  }
  emit(c, report);
  return kPass;
}

// ---- star-shaped

int cmd_star_shaped(const Common& c, const std::string& domain, int n, int count, int samples) {
  Rng rng(c.seed);
  json report = report_envelope("star_shaped", c.seed);
  report["domain"] = domain;
  report["n"] = n;
  bool pass = true;
  if (domain == "cuboids") {
    json certs = json::array();
    int failures = 0;
    double min_margin = INFINITY;
    for (int k = 0; k < count; ++k) {
      Cuboid Q{n, uniform_vec(rng, 2 * n + 1, -20, 20), uniform_vec(rng, n, 0.01, 3), uniform_vec(rng, n, 0.01, 3),
               std::uniform_real_distribution<double>(0.01, 3)(rng)};
      const auto cert = cuboid_epsilon(Q, samples, c.seed + k);
      failures += cert.failures;
      min_margin = std::min(min_margin, cert.sampled_min_margin);
      pass = pass && cert.pass;
      json cj = to_json(cert);
      cj["center"] = to_json(Q.center);
      cj["a"] = to_json(Q.a);
      cj["b"] = to_json(Q.b);
      cj["c"] = Q.c;
      certs.push_back(cj);
    }
    report["cuboids"] = certs;
    report["failures"] = failures;
    report["min_sampled_margin"] = min_margin;
  } else if (domain == "ball") {
    const auto cert = star_shaped_report(ball_function(2 * n + 1), dilation_field(n), samples, 2.0, c.seed);
    report["certificate"] = to_json(cert);
    pass = cert.pass;
  } else if (domain == "shell") {
    const auto cert = star_shaped_report(shell_function(2 * n + 1, 1, 2), dilation_field(n), samples, 3.0, c.seed);
    report["certificate"] = to_json(cert);
    pass = cert.pass;
  } else {
    throw Error("usage", "unknown domain '" + domain + "'");
  }
  report["verdict"] = pass ? "pass" : "counterexample";
  emit(c, report);
  return pass ? kPass : kCounterexample;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"catlas: contact geometry toolkit"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--seed", common.seed, "Seed for all randomness (embedded in reports)")->default_val(0);
  app.add_option("-o,--out", common.out, "Report path (stdout when omitted)");
  app.fallthrough();

  std::string map;
  int audit_n = 1, audit_samples = 1000;
  double audit_tol = 1e-9;
  bool audit_with_samples = false;
  auto* audit = app.add_subcommand("audit", "Audit a map's contact pullback identity");
  audit->add_option("map", map, "psi-normalizer | neck-involution | jet-standard | sphere-jet | cotangent-lift | dilation")
      ->required()
      ->check(CLI::IsMember({"psi-normalizer", "neck-involution", "jet-standard", "sphere-jet", "cotangent-lift",
                             "dilation"}));
  audit->add_option("--n", audit_n, "Half dimension n of R^{2n+1}")->check(CLI::Range(1, 4));
  audit->add_option("--samples", audit_samples)->check(CLI::Range(1, 10000000));
  audit->add_option("--tol", audit_tol)->check(CLI::PositiveNumber);
  audit->add_flag("--include-samples", audit_with_samples);

  FoliationParams params;
  int subdivisions = 5;
  bool extensive = false;
  auto* fol = app.add_subcommand("foliation", "Analyse the characteristic foliation of a sphere fixture");
  fol->add_option("fixture", common.inputs, "Fixture JSON")->required()->expected(1)->check(CLI::ExistingFile);
  fol->add_option("--svg", common.svg, "Write a two-hemisphere phase portrait");
  fol->add_option("--seeds", params.seeds, "Newton seeds for singular points")->check(CLI::Range(16, 100000));
  fol->add_option("--tol-eig", params.tol_eig)->check(CLI::PositiveNumber);
  fol->add_option("--tol-cycle", params.tol_cycle)->check(CLI::PositiveNumber);
  fol->add_option("--subdivisions", subdivisions, "Icosphere subdivisions for the dividing set")->check(CLI::Range(1, 7));
  fol->add_flag("--extensive", extensive, "Search for an extensive curve");

  int cover_dim = 2;
  std::string cover_scale = "1";
  std::vector<double> window{-6, 6};
  auto* cover = app.add_subcommand("cover", "Brute-force check of the colored brick cover of R^d");
  cover->add_option("--dim", cover_dim)->check(CLI::Range(1, 3));
  cover->add_option("--scale", cover_scale, "Cube size s (rational, e.g. 1/3)");
  cover->add_option("--window", window, "Window lo hi")->expected(2)->allow_extra_args(false);
  cover->add_option("--svg", common.svg, "Write a brick diagram (d = 2)");

  int torus_dim = 0, resolution = 0;
  auto* tcover = app.add_subcommand("torus-cover", "Build and verify a finite cover of the torus");
  tcover->add_option("--charts", common.inputs, "Chart JSON")->required()->expected(1)->check(CLI::ExistingFile);
  tcover->add_option("--dim", torus_dim)->check(CLI::Range(1, 3));
  tcover->add_option("--resolution", resolution, "Coverage grid points per axis")->check(CLI::Range(2, 4096));
  tcover->add_option("--svg", common.svg, "Write a region diagram (d = 2)");

  std::string descriptor;
  auto* bounds = app.add_subcommand("bounds", "Bounds on cat, B and C for a manifold descriptor");
  bounds->add_option("descriptor_file", common.inputs, "Descriptor JSON")->expected(0, 1)->check(CLI::ExistingFile);
  bounds->add_option("--descriptor", descriptor, "Inline descriptor JSON");

  std::string domain = "cuboids";
  int star_n = 1, star_count = 100, star_samples = 10000;
  auto* star = app.add_subcommand("star-shaped", "Certificates for contact star-shaped domains");
  star->add_option("--domain", domain)->check(CLI::IsMember({"cuboids", "ball", "shell"}));
  star->add_option("--n", star_n)->check(CLI::Range(1, 3));
  star->add_option("--count", star_count)->check(CLI::Range(1, 100000));
  star->add_option("--samples", star_samples)->check(CLI::Range(1, 10000000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kUsage;
  }

  try {
    if (*audit) return cmd_audit(common, map, audit_n, audit_samples, audit_tol, audit_with_samples);
    if (*fol) return cmd_foliation(common, params, subdivisions, extensive);
    if (*cover) return cmd_cover(common, cover_dim, cover_scale, window.at(0), window.at(1));
    if (*tcover) return cmd_torus_cover(common, torus_dim, resolution);
    if (*bounds) {
      if (descriptor.empty() && common.inputs.empty()) throw Error("usage", "bounds needs a descriptor");
      return cmd_bounds(common, descriptor);
    }
    if (*star) return cmd_star_shaped(common, domain, star_n, star_count, star_samples);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
