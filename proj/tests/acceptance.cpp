// Acceptance checks: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include "catlas/contact_core.hpp"
#include "catlas/dimension_cover.hpp"
#include "catlas/fixtures.hpp"
#include "catlas/foliation.hpp"
#include "catlas/json_io.hpp"
#include "catlas/star_shaped.hpp"
#include "catlas/topology_bounds.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

using namespace catlas;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

const std::string kFixtures = CATLAS_FIXTURE_DIR;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

Vec vec3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

FoliationFixture fixture(const std::string& name) {
  return load_foliation_fixture(kFixtures + "/foliation/" + name + ".json");
}

// 1. Hamiltonian correspondence.
Outcome check_hamiltonian() {
  OneForm st = make_form(FormKind::standard, 1);
  Polynomial H(3, {{2.0, {0, 0, 1}}, {1.0, {1, 1, 0}}});
  VectorField X = field_of_hamiltonian(scalar_from_polynomial(H), st);
  VectorField R = reeb_field(st);
  Rng rng(1);
  double exact_err = 0.0, id1 = 0.0, id2 = 0.0;
  for (int s = 0; s < 1000; ++s) {
    Vec p = uniform_vec(rng, 3, -2, 2), w = uniform_vec(rng, 3, -1, 1);
    const Vec Xp = X(p);
    exact_err = std::max(exact_err, (Xp - vec3(p[0], p[1], 2 * p[2])).cwiseAbs().maxCoeff());
    // i_X alpha = H and i_X d alpha = (i_R dH) alpha - dH, with dH written out by hand.
    const Vec dH = vec3(p[1], p[0], 2.0);
    id1 = std::max(id1, std::abs(st.eval(p, Xp) - (2 * p[2] + p[0] * p[1])));
    id2 = std::max(id2, std::abs(st.d_eval(p, Xp, w) - (R(p).dot(dH) * st.eval(p, w) - dH.dot(w))));
  }
  // Closed form: the result equals (x, y, 2z) up to floating-point rounding of the products.
  const bool pass = exact_err <= 1e-15 * 8 && id1 < 1e-9 && id2 < 1e-9;
  return {pass, "max |X - (x,y,2z)| = " + fmt(exact_err) + ", identity residuals " + fmt(id1) + ", " + fmt(id2)};
}

// 2. psi-normalizer audit.
Outcome check_psi_audit() {
  Rng rng(2);
  double worst = 0.0;
  bool ok = true;
  for (int n : {1, 2}) {
    auto rep = pullback_report(psi_normalizer(n), make_form(FormKind::standard, n), make_form(FormKind::rotational, n),
                               2.0, box_samples(2 * n + 1, 1000, rng, 2.0), 1e-12);
    worst = std::max(worst, rep.max_residual);
    ok = ok && rep.passed() && rep.max_residual < 1e-12;
  }
  return {ok, "max residual " + fmt(worst) + " (n = 1, 2; 1000 samples each)"};
}

// 3. Jet and spherisation audits.
Outcome check_jet_audits() {
  Rng rng(3);
  double worst = 0.0;
  bool ok = true;
  for (int n : {1, 2}) {
    auto jet = pullback_report(jet_to_standard_map(n), make_form(FormKind::jet, n), make_form(FormKind::standard, n),
                               1.0, box_samples(2 * n + 1, 1000, rng, 3.0), 1e-9);
    const int m = n + 1;
    auto sph = pullback_report(sphere_jet_map(m), tautological_form(m), make_form(FormKind::jet, m), 1.0,
                               sphere_jet_samples(m, 1000, rng), 1e-9);
    worst = std::max({worst, jet.max_residual, sph.max_residual});
    ok = ok && jet.passed() && sph.passed() && jet.max_residual < 1e-9 && sph.max_residual < 1e-9;
  }
  return {ok, "max residual " + fmt(worst)};
}

// 4. Neck involution.
Outcome check_neck() {
  const int n = 1;
  Rng rng(4);
  double layer = 0.0;
  for (int s = 0; s < 1000; ++s) {
    Vec p = uniform_vec(rng, 3, -3, 3);
    if (p.norm() < 1e-3) continue;
    layer = std::max(layer, std::abs(neck_layer(neck_involution(p, n), n) + neck_layer(p, n)));
  }
  OneForm rot = make_form(FormKind::rotational, n);
  std::vector<TangentSample> eq;
  for (int s = 0; s < 1000; ++s) {
    Vec p = uniform_vec(rng, 3, -2, 2);
    p[2] = 0;
    eq.push_back({p, Mat::Identity(3, 3)});
  }
  auto equator = pullback_report(neck_map(n), rot, rot, std::nullopt, eq, 1e-9);
  auto full = pullback_report(neck_map(n), rot, rot, std::nullopt, box_samples(3, 1000, rng, 2.0), 1e-9);
  const bool definitive = full.passed() || full.counterexample.has_value();
  const bool pass = layer < 1e-9 && equator.passed() && equator.max_residual < 1e-9 && definitive;
  std::string outcome = full.passed() ? "contact identity passes" : "contact identity counterexample recorded";
  return {pass, "layer error " + fmt(layer) + ", equator residual " + fmt(equator.max_residual) + ", " + outcome +
                    " (max residual " + fmt(full.max_residual) + ")"};
}

// 5. Cuboid certificates.
Outcome check_cuboids() {
  Rng rng(5);
  int failures = 0, bad = 0;
  double margin = INFINITY;
  for (int k = 0; k < 100; ++k) {
    const int n = k % 2 ? 2 : 1;
    Cuboid Q{n, uniform_vec(rng, 2 * n + 1, -20, 20), uniform_vec(rng, n, 0.01, 3), uniform_vec(rng, n, 0.01, 3),
             std::uniform_real_distribution<double>(0.01, 3)(rng)};
    auto cert = cuboid_epsilon(Q, 10000, k);
    failures += cert.failures;
    bad += !cert.pass;
    margin = std::min(margin, cert.sampled_min_margin);
  }
  return {failures == 0 && bad == 0 && margin > 0,
          std::to_string(failures) + " failing samples, min margin " + fmt(margin) + " (10^4 samples per face)"};
}

// 6. Dimension cover separation, by an independent enumeration.
Outcome check_dimension_cover() {
  bool ok = true;
  std::string detail;
  for (int d = 1; d <= 3; ++d)
    for (const Rational& s : {Rational(1), Rational(1, 3)}) {
      Box w;
      for (int k = 0; k < d; ++k) {
        w.lo.push_back(-2 * s);
        w.hi.push_back(3 * s);
      }
      std::vector<std::vector<Box>> by_color(d + 1);
      std::vector<std::int64_t> layer(d, -3);
      bool sizes_ok = true;
      while (true) {
        const CubeId c = cube_from_layers(d, s, layer);
        const Box b = c.box();
        if (box_contains(w, b)) by_color[color_of(c) - 1].push_back(b);
        const auto nb = neighborhoods(c);
        for (int k = 0; k < d; ++k)
          sizes_ok = sizes_ok && nb.N1.side(k) == s * (1 + Rational(1, 4 * d)) &&
                     nb.N2.side(k) == s * (1 + Rational(1, 2 * d)) && b.side(k) == s;
        int i = 0;
        while (i < d && ++layer[i] > 5) layer[i++] = -3;
        if (i == d) break;
      }
      for (int col = 0; col <= d; ++col) {
        const auto& boxes = by_color[col];
        Rational best = -1;
        bool n2_disjoint = true;
        for (size_t a = 0; a < boxes.size(); ++a)
          for (size_t b = a + 1; b < boxes.size(); ++b) {
            Rational dist = 0;
            bool separated = false;
            for (int k = 0; k < d; ++k) {
              const Rational gap = std::max(boxes[b].lo[k] - boxes[a].hi[k], boxes[a].lo[k] - boxes[b].hi[k]);
              dist = std::max(dist, gap);
              // N2 extends each side by s/(4d); closed N2 boxes are disjoint iff some gap exceeds s/(2d).
              separated = separated || gap > s / (2 * d);
            }
            n2_disjoint = n2_disjoint && separated;
            if (best < 0 || dist < best) best = dist;
          }
        const auto rep = separation_report(d, s, col + 1, w);
        const bool this_ok = boxes.size() >= 2 && best == s / d && rep.min_chebyshev == best && n2_disjoint &&
                             rep.n2_disjoint && sizes_ok;
        if (!this_ok) detail += " d=" + std::to_string(d) + " s=" + to_string(s) + " color " + std::to_string(col + 1);
        ok = ok && this_ok;
      }
    }
  return {ok, ok ? "separation s/d, N2 disjoint, N1/N2 sizes exact for d = 1..3, s in {1, 1/3}" : "failed:" + detail};
}

// 7. Torus cover.
Outcome check_torus() {
  int dim = 0, res = 0;
  const auto charts = torus_charts_from_json(read_json_file(kFixtures + "/t2-4charts.json"), &dim, &res);
  const CoverPlan plan = torus_cover(2, charts, 512);
  const bool pass = plan.families.size() == 3 && plan.families_disjoint && plan.grid.points == 512 * 512 &&
                    plan.grid.covered == plan.grid.points && plan.charts_cover;
  return {pass, std::to_string(plan.families.size()) + " families, disjoint = " + (plan.families_disjoint ? "yes" : "no") +
                    ", covered " + std::to_string(plan.grid.covered) + "/" + std::to_string(plan.grid.points)};
}

// 8. Round sphere.
Outcome check_round_sphere() {
  const auto fx = fixture("round-sphere");
  const auto r = analyze_fixture(fx);
  bool poles = r.singular.size() == 2;
  double err = 0.0;
  if (poles) {
    for (const auto& s : r.singular) err = std::max(err, std::min((s.world - V3(0, 0, 1)).norm(), (s.world - V3(0, 0, -1)).norm()));
    poles = err < 1e-6 && std::abs(r.singular[0].world.z() - r.singular[1].world.z()) > 1.0;
  }
  const bool signs = poles && r.singular[0].sign * r.singular[1].sign == -1;
  const bool forest = r.graph.positive.forest() && r.graph.negative.forest();
  const bool graph_tight = r.cycles.empty() && forest && r.tightness.tight == Verdict::yes;
  const bool dividing = r.dividing && r.dividing->components == 1 && r.dividing_tight == Verdict::yes;
  return {poles && signs && graph_tight && dividing,
          std::to_string(r.singular.size()) + " singular points (pole error " + fmt(err) + "), " +
              std::to_string(r.cycles.size()) + " cycles, graph criterion " + to_string(r.tightness.tight) +
              ", dividing components " + std::to_string(r.dividing ? r.dividing->components : -1)};
}

// 9. Overtwisted model sphere, radius 2.
Outcome check_overtwisted() {
  const auto r2 = analyze_fixture(fixture("overtwisted-r2"));
  const bool graph_no = r2.tightness.tight == Verdict::no;
  const bool dividing_no = r2.dividing && r2.dividing->components >= 2;
  const auto r4 = analyze_fixture(fixture("overtwisted-r4"));
  std::string detail = "radius 2: graph criterion " + to_string(r2.tightness.tight) + ", " +
                       std::to_string(r2.cycles.size()) + " cycles, dividing components " +
                       std::to_string(r2.dividing ? r2.dividing->components : -1) +
                       "; radius 4: graph criterion " + to_string(r4.tightness.tight) + ", dividing components " +
                       std::to_string(r4.dividing ? r4.dividing->components : -1);
  return {graph_no && dividing_no, detail};
}

// 10. Surgeries.
Outcome check_surgeries() {
  const auto cyc = fixture("equator-cycle-attracting");
  const auto rc = analyze_foliation(cyc.field);
  const auto broken = break_limit_cycle(cyc.field, rc, 0);
  const auto after = analyze_foliation(broken.field);
  const bool cycle_ok = after.singular.size() == rc.singular.size() + 2 && after.cycles.empty();

  const auto loop = fixture("gamma-minus-loop");
  const auto rl = analyze_foliation(loop.field);
  const auto fixed = eliminate_graph_loop(loop.field, rl, true);
  const auto after_l = analyze_foliation(fixed.field);
  const bool loop_ok = after_l.graph.negative.betti == rl.graph.negative.betti - 1;
  return {cycle_ok && loop_ok,
          "singular " + std::to_string(rc.singular.size()) + " -> " + std::to_string(after.singular.size()) +
              ", cycles " + std::to_string(rc.cycles.size()) + " -> " + std::to_string(after.cycles.size()) +
              "; rank H1(Gamma-) " + std::to_string(rl.graph.negative.betti) + " -> " +
              std::to_string(after_l.graph.negative.betti)};
}

// 11. Index sums.
Outcome check_index_sums() {
  int count = 0, bad = 0;
  std::string which;
  for (const auto& e : std::filesystem::directory_iterator(kFixtures + "/foliation")) {
    if (e.path().extension() != ".json") continue;
    const auto fx = load_foliation_fixture(e.path().string());
    const auto r = analyze_foliation(fx.field);
    int sum = 0;
    for (const auto& s : r.singular) sum += s.index;
    ++count;
    if (sum != 2) {
      ++bad;
      which += " " + fx.name + "=" + std::to_string(sum);
    }
  }
  return {count >= 10 && bad == 0, std::to_string(count) + " fixtures, " + std::to_string(bad) + " with sum != 2" + which};
}

// 12. Bound tables.
Outcome check_bounds() {
  ManifoldDescriptor other;
  other.cls = ManifoldClass::other_3manifold;
  other.dim = 3;
  bool ok = three_manifold_values(s3(ContactTag::tight)).C == 2 && three_manifold_values(s3(ContactTag::overtwisted)).C == 3;
  for (int k = 1; k <= 3; ++k) ok = ok && three_manifold_values(connected_sum_s2xs1(k)).C == 3;
  ok = ok && three_manifold_values(other).C == 4;
  auto eq = [](const BoundResult& r, int lo, int hi) { return r.lower == lo && r.upper == hi; };
  const auto t3 = covering_number_bounds(torus(3));
  const auto rp3 = covering_number_bounds(spherisation_of(sphere(2)));
  const auto s5 = covering_number_bounds(sphere(5, ContactTag::overtwisted));
  const int cl = cup_length(torus_ring(3));
  ok = ok && eq(t3, 4, 4) && eq(rp3, 4, 4) && eq(s5, 3, 6) && cl == 3;
  auto iv = [](const BoundResult& r) { return "[" + std::to_string(r.lower) + "," + std::to_string(r.upper) + "]"; };
  return {ok, "C(T3) = " + iv(t3) + ", C(S*S2) = " + iv(rp3) + ", C(S5, ot) = " + iv(s5) + ", cl(T3) = " + std::to_string(cl)};
}

// 13. CLI determinism.
Outcome check_determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "catlas_acceptance";
  fs::create_directories(dir);
  const std::string cli = CATLAS_CLI_PATH;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"audit-psi", "audit psi-normalizer --samples 200"},
      {"audit-neck", "audit neck-involution --samples 200"},
      {"audit-jet", "audit jet-standard --samples 200"},
      {"audit-sphere-jet", "audit sphere-jet --samples 200"},
      {"audit-lift", "audit cotangent-lift --samples 200"},
      {"audit-dilation", "audit dilation --samples 200"},
      {"foliation", "foliation " + kFixtures + "/foliation/gamma-minus-loop.json --svg " + (dir / "f.svg").string()},
      {"cover", "cover --dim 2 --scale 1/3 --window -2 2"},
      {"torus-cover", "torus-cover --charts " + kFixtures + "/s1-2charts.json"},
      {"bounds", "bounds --descriptor '{\"class\":\"torus\",\"dim\":3}'"},
      {"star-shaped", "star-shaped --count 5 --samples 200"},
  };
  int mismatches = 0;
  std::string which;
  for (const auto& [name, args] : commands) {
    std::string outputs[2];
    int codes[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path out = dir / (name + "-" + std::to_string(run) + ".json");
      fs::remove(out);
      const std::string cmd = "'" + cli + "' --seed 11 --out '" + out.string() + "' " + args + " > /dev/null 2>&1";
      codes[run] = std::system(cmd.c_str());
      try {
        json j = read_json_file(out.string());
        j.erase("generated_at");
        outputs[run] = j.dump();
      } catch (const Error&) {
        outputs[run] = "<missing>";
      }
    }
    if (outputs[0] != outputs[1] || codes[0] != codes[1] || outputs[0] == "<missing>") {
      ++mismatches;
      which += " " + name;
    }
  }
  return {mismatches == 0, std::to_string(commands.size()) + " commands run twice, " + std::to_string(mismatches) +
                               " differ" + which};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    double limit_s;  // 0: no runtime limit
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "Hamiltonian correspondence", 1, check_hamiltonian},
      {2, "psi-normalizer audit", 1, check_psi_audit},
      {3, "jet/spherisation audits", 5, check_jet_audits},
      {4, "neck-involution audit", 10, check_neck},
      {5, "cuboid certificates", 30, check_cuboids},
      {6, "dimension cover", 60, check_dimension_cover},
      {7, "torus cover", 120, check_torus},
      {8, "round-sphere foliation", 60, check_round_sphere},
      {9, "overtwisted-model sphere", 120, check_overtwisted},
      {10, "surgeries", 120, check_surgeries},
      {11, "index-sum property", 0, check_index_sums},
      {12, "bounds tables", 1, check_bounds},
      {13, "CLI determinism", 0, check_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = c.limit_s == 0 || secs < c.limit_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::ostringstream line;
    line << (pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail << "; "
         << fmt(secs) << " s";
    if (c.limit_s > 0) line << " (limit " << c.limit_s << " s" << (in_time ? "" : ", exceeded") << ")";
    std::cout << line.str() << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria fail") << std::endl;
  return failed == 0 ? 0 : 1;
}
