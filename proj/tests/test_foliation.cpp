#include "catlas/fixtures.hpp"
#include "catlas/foliation.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>

using namespace catlas;

namespace {

const double kPi = std::numbers::pi;

std::string fixture_path(const std::string& name) {
  return std::string(CATLAS_FIXTURE_DIR) + "/foliation/" + name + ".json";
}

FoliationFixture fixture(const std::string& name) { return load_foliation_fixture(fixture_path(name)); }

// Analyses are reused across test cases.
const FoliationReport& report_of(const std::string& name) {
  static std::map<std::string, FoliationReport> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, analyze_foliation(fixture(name).field)).first;
  return it->second;
}

std::vector<std::string> all_fixtures() {
  std::vector<std::string> names;
  for (const auto& e : std::filesystem::directory_iterator(std::string(CATLAS_FIXTURE_DIR) + "/foliation"))
    if (e.path().extension() == ".json") names.push_back(e.path().stem().string());
  std::sort(names.begin(), names.end());
  return names;
}

std::vector<V3> band_samples(int n) {
  std::vector<V3> out;
  Rng rng(7);
  std::uniform_real_distribution<double> z(-0.85, 0.85), phi(0, 2 * kPi);
  for (int i = 0; i < n; ++i) {
    const double zz = z(rng), p = phi(rng), r = std::sqrt(1 - zz * zz);
    out.emplace_back(r * std::cos(p), r * std::sin(p), zz);
  }
  return out;
}

bool sorted_eigen_close(std::array<std::complex<double>, 2> a, std::array<std::complex<double>, 2> b, double tol) {
  auto key = [](const std::complex<double>& x, const std::complex<double>& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  };
  std::sort(a.begin(), a.end(), key);
  std::sort(b.begin(), b.end(), key);
  return std::abs(a[0] - b[0]) < tol && std::abs(a[1] - b[1]) < tol;
}

}  // namespace

TEST_CASE("chart transition is consistent and orientation preserving on the band") {
  for (const V3& u : band_samples(500)) {
    REQUIRE(SphereSurface::in_band(u));
    const V2 wn = SphereSurface::chart_coords(Chart::north, u);
    const V2 ws = SphereSurface::chart_coords(Chart::south, u);
    CHECK((SphereSurface::transition(Chart::north, wn) - ws).norm() < 1e-10);
    CHECK((SphereSurface::chart_point(Chart::south, ws) - u).norm() < 1e-10);
    // w -> 1/w in complex notation.
    const std::complex<double> inv = 1.0 / std::complex<double>(wn.x(), wn.y());
    CHECK(std::abs(inv - std::complex<double>(ws.x(), ws.y())) < 1e-10);
    CHECK(SphereSurface::transition_jacobian(Chart::north, wn).determinant() > 0);
  }
}

TEST_CASE("tangent field chart representations agree through the transition Jacobian") {
  const auto fx = fixture("round-sphere");
  const auto Y2 = fixture("theta-loop").field;
  for (const TangentField* Y : {&fx.field, &Y2}) {
    for (const V3& u : band_samples(300)) {
      const V2 wn = SphereSurface::chart_coords(Chart::north, u);
      const V2 ws = SphereSurface::chart_coords(Chart::south, u);
      const V2 yn = Y->chart_value(Chart::north, wn);
      const V2 ys = Y->chart_value(Chart::south, ws);
      const V2 mapped = SphereSurface::transition_jacobian(Chart::north, wn) * yn;
      CHECK((mapped - ys).norm() <= 1e-8 * std::max(1.0, ys.norm()));
    }
  }
}

TEST_CASE("characteristic field solves the chart system") {
  // Independent route: the 2x2 system on the chart tangents against the ambient cross product.
  for (const std::string name : {"round-sphere", "overtwisted-r2", "overtwisted-r4"}) {
    const auto fx = fixture(name);
    for (const V3& u : band_samples(100)) {
      for (Chart c : {Chart::north, Chart::south}) {
        const V2 w = SphereSurface::chart_coords(c, u);
        const V2 a = characteristic_chart_value(*fx.form, fx.surface, c, w);
        const V2 b = fx.field.chart_value(c, w);
        CHECK((a - b).norm() <= 1e-8 * std::max(1.0, a.norm()));
      }
    }
  }
}

TEST_CASE("round sphere: foci at the poles with the hand-computed spectrum") {
  const auto& r = report_of("round-sphere");
  REQUIRE(r.singular.size() == 2);
  CHECK((r.singular[0].position - V3(0, 0, 1)).norm() < 1e-6);
  CHECK((r.singular[1].position - V3(0, 0, -1)).norm() < 1e-6);
  CHECK(r.singular[0].sign == 1);
  CHECK(r.singular[1].sign == -1);
  // Near the north pole Y = a x u with a = (0, x, 1): (x - y, x), trace 1, det 1.
  const std::complex<double> root(0.5, std::sqrt(3.0) / 2);
  CHECK(sorted_eigen_close(r.singular[0].eigenvalues, {root, std::conj(root)}, 1e-6));
  CHECK(sorted_eigen_close(r.singular[1].eigenvalues, {-root, -std::conj(root)}, 1e-6));
  CHECK(r.cycles.empty());
  CHECK(r.graph.positive.forest());
  CHECK(r.graph.negative.forest());
  CHECK(r.convexity.convex == Verdict::yes);
  CHECK(r.tightness.tight == Verdict::yes);
  CHECK(r.tightness.trees);
}

TEST_CASE("index sum and sign coherence on every fixture") {
  const auto names = all_fixtures();
  CHECK(names.size() >= 10);
  for (const auto& name : names) {
    CAPTURE(name);
    const auto& r = report_of(name);
    CHECK(r.index_sum == 2);
    for (const auto& p : r.singular) {
      if (p.type == SingularType::node || p.type == SingularType::focus) {
        CHECK(p.sign == (p.source ? 1 : -1));
        CHECK(p.classified_index() == 1);
      }
      if (p.type == SingularType::saddle) {
        CHECK(p.eigenvalues[0].real() * p.eigenvalues[1].real() < 0);
        CHECK(p.classified_index() == -1);
      }
      if (p.type == SingularType::saddle_node) CHECK(p.classified_index() == 0);
      if (p.type != SingularType::indeterminate) {
        const double trace = p.eigenvalues[0].real() + p.eigenvalues[1].real();
        CHECK(p.sign == (trace > 0 ? 1 : -1));
        CHECK(p.classified_index() == p.index);
      }
    }
  }
}

TEST_CASE("singular points agree between forced charts on the band") {
  const auto fx = fixture("theta-loop");
  const auto north = find_singular_points(fx.field, {}, Chart::north);
  const auto south = find_singular_points(fx.field, {}, Chart::south);
  int matched = 0;
  for (const auto& p : north) {
    if (!SphereSurface::in_band(p.position)) continue;
    for (const auto& q : south)
      if ((p.position - q.position).norm() < 1e-6) {
        ++matched;
        CHECK(p.type == q.type);
        CHECK(p.sign == q.sign);
      }
  }
  CHECK(matched == 6);
}

TEST_CASE("rotation centres are indeterminate with winding index one") {
  const auto& r = report_of("rotation");
  REQUIRE(r.singular.size() == 2);
  for (const auto& p : r.singular) {
    CHECK(p.type == SingularType::indeterminate);
    CHECK(p.error == "IndeterminateAtTolerance");
    CHECK(p.index == 1);
  }
  REQUIRE(r.cycles.size() == 1);
  CHECK_FALSE(r.cycles[0].isolated);
  CHECK(r.stability.cls == StabilityClass::other);
}

TEST_CASE("equator cycles: multiplier and period of the linearized drift") {
  // Meridional drift dz/dt = f(z)(1 - z^2) with f = -z, z, z^2 around a period-2pi rotation.
  const auto& att = report_of("equator-cycle-attracting");
  REQUIRE(att.cycles.size() == 1);
  CHECK(std::abs(att.cycles[0].point.z()) < 1e-6);
  CHECK(att.cycles[0].period == doctest::Approx(2 * kPi).epsilon(1e-6));
  CHECK(att.cycles[0].lambda == doctest::Approx(std::exp(-2 * kPi)).epsilon(1e-4));
  CHECK(att.cycles[0].stability == "attracting");
  CHECK(att.tightness.tight == Verdict::no);
  CHECK(att.tightness.witness == "cycle");
  CHECK(att.stability.cls == StabilityClass::structurally_stable);

  const auto& rep = report_of("equator-cycle-repelling");
  REQUIRE(rep.cycles.size() == 1);
  CHECK(rep.cycles[0].lambda == doctest::Approx(std::exp(2 * kPi)).epsilon(1e-4));
  CHECK(rep.cycles[0].stability == "repelling");

  // z' = z^2 gives P(s) = s + 2 pi s^2 + O(s^3): |P''| = 4 pi.
  const auto& semi = report_of("equator-cycle-semistable");
  REQUIRE(semi.cycles.size() == 1);
  CHECK(semi.cycles[0].degenerate);
  CHECK(std::abs(semi.cycles[0].second_derivative) == doctest::Approx(4 * kPi).epsilon(1e-3));
  CHECK(semi.convexity.convex == Verdict::no);
  CHECK(semi.tightness.tight == Verdict::inapplicable);
  CHECK(semi.stability.cls == StabilityClass::q2);
}

TEST_CASE("signed graphs and their first Betti numbers") {
  const auto& minus = report_of("gamma-minus-loop");
  CHECK(minus.singular.size() == 6);
  CHECK(minus.graph.negative.vertices.size() == 4);
  CHECK(minus.graph.negative.edges.size() == 4);
  CHECK(minus.graph.negative.betti == 1);
  CHECK(minus.graph.positive.betti == 0);
  CHECK(minus.tightness.tight == Verdict::no);
  CHECK(minus.tightness.witness == "negative_loop");

  const auto& plus = report_of("gamma-plus-loop");
  CHECK(plus.graph.positive.betti == 1);
  CHECK(plus.graph.negative.betti == 0);
  CHECK(plus.tightness.witness == "positive_loop");

  const auto& tree = report_of("gamma-plus-tree");
  CHECK(tree.singular.size() == 4);
  CHECK(tree.graph.positive.edges.size() == 2);
  CHECK(tree.graph.positive.tree());
  CHECK(tree.graph.negative.tree());
  CHECK(tree.tightness.tight == Verdict::yes);

  const auto& theta = report_of("theta-loop");
  CHECK(theta.graph.negative.vertices.size() == 5);
  CHECK(theta.graph.negative.edges.size() == 6);
  CHECK(theta.graph.negative.betti == 2);
  for (const auto& g : {minus.graph, plus.graph, tree.graph, theta.graph})
    for (const SignedGraph* s : {&g.positive, &g.negative})
      CHECK(s->betti == static_cast<int>(s->edges.size()) - static_cast<int>(s->vertices.size()) + s->components);
}

TEST_CASE("retrograde connection makes the sphere non-convex") {
  const auto& r = report_of("retrograde");
  CHECK(r.graph.retrograde.size() == 2);
  CHECK(r.convexity.convex == Verdict::no);
  CHECK(r.convexity.reason == "retrograde connection");
  CHECK(r.tightness.tight == Verdict::inapplicable);
  for (const auto& e : r.graph.retrograde) {
    CHECK(r.singular[e.from].sign == -1);
    CHECK(r.singular[e.to].sign == 1);
  }
}

TEST_CASE("stability classes") {
  CHECK(report_of("height-gradient").stability.cls == StabilityClass::structurally_stable);
  const auto& sn = report_of("saddle-node");
  CHECK(sn.stability.cls == StabilityClass::q1);
  CHECK(std::count_if(sn.singular.begin(), sn.singular.end(),
                      [](const auto& p) { return p.type == SingularType::saddle_node; }) == 1);
  CHECK(report_of("equator-cycle-semistable").stability.cls == StabilityClass::q2);
  // Two connections along the two equator arcs.
  CHECK(report_of("retrograde").stability.cls == StabilityClass::other);
}

TEST_CASE("dividing sets") {
  const auto round = fixture("round-sphere");
  const auto d = dividing_set(round.surface, *round.form, *round.transverse);
  CHECK(d.components == 1);
  // The zero set of 2z + xy on the unit sphere stays within |z| <= 1/4.
  for (const auto& c : d.curves)
    for (const V3& p : c) {
      CHECK(std::abs(2 * p.z() + p.x() * p.y()) < 1e-6);
      CHECK(std::abs(p.norm() - 1) < 1e-12);
    }

  const auto r2 = fixture("overtwisted-r2");
  CHECK(dividing_set(r2.surface, *r2.form, *r2.transverse).components == 1);
  const auto r4 = fixture("overtwisted-r4");
  const auto d4 = dividing_set(r4.surface, *r4.form, *r4.transverse);
  // z cos r vanishes on z = 0 and on the two circles r = pi/2 of the radius-4 sphere.
  CHECK(d4.components == 3);

  VectorField tangent;
  tangent.dim = 3;
  tangent.f = [](const Vec& p) {
    Vec v(3);
    v << -p[1], p[0], 0;
    return v;
  };
  CHECK_THROWS_WITH_AS(dividing_set(round.surface, *round.form, tangent), doctest::Contains("not_transverse"), Error);
}

TEST_CASE("graph criterion agrees with dividing-set connectivity") {
  for (const std::string name : {"round-sphere", "overtwisted-r2", "overtwisted-r4"}) {
    CAPTURE(name);
    const auto fx = fixture(name);
    const auto& r = report_of(name);
    const auto d = dividing_set(fx.surface, *fx.form, *fx.transverse);
    REQUIRE(r.tightness.tight != Verdict::inconclusive);
    CHECK((r.tightness.tight == Verdict::yes) == (d.components == 1));
  }
  const auto& r4 = report_of("overtwisted-r4");
  REQUIRE(r4.cycles.size() == 2);
  // The closed leaves are the circles r = pi on the radius-4 sphere.
  for (const auto& c : r4.cycles) {
    const V3 p = 4.0 * c.point;
    CHECK(std::hypot(p.x(), p.y()) == doctest::Approx(kPi).epsilon(1e-6));
  }
}

TEST_CASE("extensive curves") {
  const auto& round = report_of("round-sphere");
  const auto Yr = fixture("round-sphere").field;
  const auto equator = great_circle(V3::UnitZ());
  const auto er = extensive_report(equator, Yr, round);
  CHECK(er.extensive);
  CHECK(er.evidence.empty());

  const auto Yc = fixture("equator-cycle-attracting").field;
  const auto& cyc = report_of("equator-cycle-attracting");
  CHECK_FALSE(extensive_report(equator, Yc, cyc).extensive);
  const auto tilted = great_circle(V3(0.3, 0.0, 1.0));
  const auto et = extensive_report(tilted, Yc, cyc);
  CHECK(et.extensive);
  REQUIRE(et.evidence.size() == 1);
  CHECK(et.evidence[0].crossings.size() == 2);
  CHECK(extensive_report(find_extensive_curve(Yc, cyc), Yc, cyc).extensive);

  const auto Yl = fixture("gamma-minus-loop").field;
  const auto& loop = report_of("gamma-minus-loop");
  const auto curve = find_extensive_curve(Yl, loop);
  const auto el = extensive_report(curve, Yl, loop);
  CHECK(el.extensive);
  CHECK(std::any_of(el.evidence.begin(), el.evidence.end(), [](const auto& e) { return e.condition == "E2"; }));

  std::vector<V3> figure_eight;
  for (int k = 0; k < 400; ++k) {
    const double t = 2 * kPi * k / 400;
    figure_eight.push_back(V3(std::sin(t), 0.5 * std::sin(2 * t), 1.0).normalized());
  }
  CHECK_THROWS_WITH_AS(extensive_report(figure_eight, Yr, round), doctest::Contains("not_embedded"), Error);
}

TEST_CASE("breaking limit cycles") {
  for (const std::string name : {"equator-cycle-attracting", "equator-cycle-repelling"}) {
    CAPTURE(name);
    const auto Y = fixture(name).field;
    const auto& r = report_of(name);
    const auto s = break_limit_cycle(Y, r, 0);
    CHECK(s.singular_after == s.singular_before + 2);
    CHECK(s.cycles_after == 0);
    const bool attracting = r.cycles[0].lambda < 1;
    int nodes = 0, saddles = 0;
    for (const auto& p : s.inserted) {
      if (p.type == SingularType::saddle && p.sign == (attracting ? -1 : 1)) ++saddles;
      if ((p.type == SingularType::node || p.type == SingularType::focus) && p.source == !attracting) ++nodes;
    }
    CHECK(nodes == 1);
    CHECK(saddles == 1);
    const auto after = analyze_foliation(s.field);
    CHECK(after.cycles.empty());
    CHECK(after.index_sum == 2);
  }
  const auto semi = fixture("equator-cycle-semistable").field;
  CHECK_THROWS_WITH_AS(break_limit_cycle(semi, report_of("equator-cycle-semistable"), 0),
                       doctest::Contains("degenerate_cycle"), Error);
}

TEST_CASE("eliminating graph loops") {
  const auto Y = fixture("gamma-minus-loop").field;
  const auto& r = report_of("gamma-minus-loop");
  const auto s = eliminate_graph_loop(Y, r, true);
  CHECK(s.negative_betti_after == s.negative_betti_before - 1);
  CHECK(s.positive_betti_after == s.positive_betti_before);
  const auto after = analyze_foliation(s.field);
  CHECK(after.tightness.tight == Verdict::yes);

  const auto Yp = fixture("gamma-plus-loop").field;
  const auto sp = eliminate_graph_loop(Yp, report_of("gamma-plus-loop"), false);
  CHECK(sp.positive_betti_after == 0);

  // Rank 2 needs two eliminations.
  const auto Yt = fixture("theta-loop").field;
  const auto s1 = eliminate_graph_loop(Yt, report_of("theta-loop"), true);
  CHECK(s1.negative_betti_after == 1);
  const auto s2 = eliminate_graph_loop(s1.field, analyze_foliation(s1.field), true);
  CHECK(s2.negative_betti_after == 0);

  CHECK_THROWS_WITH_AS(eliminate_graph_loop(fixture("round-sphere").field, report_of("round-sphere"), true),
                       doctest::Contains("loop_absent"), Error);
}

TEST_CASE("three-set partitions") {
  const std::vector<TighteningSample> constant{{0.0, 0.6}, {0.5, 0.6}};
  const auto p = three_chart_partition(PartitionModel::s2xs1, constant, {0.0, 0.5});
  CHECK(p.complete());
  CHECK(p.covered == p.grid_points);
  CHECK(p.sets[0].size() == 1);
  CHECK(p.sets[1].size() == 1);
  CHECK(p.sets[2].size() == 2);
  // D'- x J_1 and D x J_2 touch in tau, separated by the latitude of the parallel.
  CHECK(p.min_margin == doctest::Approx(std::asin(0.1)));

  const std::vector<TighteningSample> family{{0.25, 0.3}, {0.5, 0.3}, {0.75, 0.3}};
  const auto s3 = three_chart_partition(PartitionModel::s3, family, {0.2, 0.5, 0.8});
  CHECK(s3.complete());
  CHECK(s3.sets[0].back().disc == "B1");
  CHECK(s3.sets[1].back().disc == "B0");

  CHECK_THROWS_WITH_AS(three_chart_partition(PartitionModel::s2xs1, constant, {0.0, 0.3, 0.6}),
                       doctest::Contains("odd_subdivision"), Error);
  CHECK_THROWS_WITH_AS(three_chart_partition(PartitionModel::s2xs1, {{0.0, 0.1}}, {0.0, 0.5}),
                       doctest::Contains("subdivision_too_coarse"), Error);
  CHECK_THROWS_WITH_AS(three_chart_partition(PartitionModel::s3, {{0.0, 0.6}, {0.5, 0.6}}, {0.5}),
                       doctest::Contains("curves_meet_caps"), Error);
}

TEST_CASE("analysis is deterministic") {
  const auto Y = fixture("theta-loop").field;
  const auto a = analyze_foliation(Y);
  const auto b = analyze_foliation(Y);
  REQUIRE(a.singular.size() == b.singular.size());
  for (size_t i = 0; i < a.singular.size(); ++i) CHECK(a.singular[i].position == b.singular[i].position);
  REQUIRE(a.graph.negative.edges.size() == b.graph.negative.edges.size());
  for (size_t i = 0; i < a.graph.negative.edges.size(); ++i)
    CHECK(a.graph.negative.edges[i].polyline == b.graph.negative.edges[i].polyline);
}

TEST_CASE("fixture schema errors") {
  CHECK_THROWS_WITH_AS(foliation_fixture_from_json(nlohmann::json{{"kind", "other"}}), doctest::Contains("schema"), Error);
  nlohmann::json j = {{"kind", "foliation_fixture"}, {"name", "x"}, {"source", {{"kind", "form"}, {"form", "nope"}}}};
  CHECK_THROWS_WITH_AS(foliation_fixture_from_json(j), doctest::Contains("unknown form"), Error);
}
