#include "catlas/dimension_cover.hpp"

#include <doctest.h>

#include <random>

using namespace catlas;

namespace {

Rational R(std::int64_t a, std::int64_t b = 1) { return Rational(a, b); }

Box cube_box(std::initializer_list<Rational> lo, const Rational& side) {
  Box b;
  for (const auto& v : lo) {
    b.lo.push_back(v);
    b.hi.push_back(v + side);
  }
  return b;
}

Box window(int d, const Rational& lo, const Rational& hi) {
  Box w;
  for (int k = 0; k < d; ++k) {
    w.lo.push_back(lo);
    w.hi.push_back(hi);
  }
  return w;
}

// Color of a d = 2 cube by translating it back to the first layer: layer k is the first layer
// moved by ((1 + 1/d)(k - 1), k - 1), and first-layer intervals [k-1, k] carry color k mod 3.
int color_by_back_translation(const CubeId& c) {
  Rational first_layer_anchor = c.anchor[0] - Rational(3, 2) * c.s * Rational(c.layers[1] - 1);
  std::int64_t k = floor_int(first_layer_anchor / c.s) + 1;
  return static_cast<int>(((k - 1) % 3 + 3) % 3) + 1;
}

}  // namespace

TEST_CASE("cube_at places points in half-open cubes") {
  auto c1 = cube_at({R(1, 2)}, 1, R(1));
  CHECK(c1.layers == std::vector<std::int64_t>{1});
  CHECK(c1.anchor[0] == R(0));
  CHECK(c1.box().hi[0] == R(1));

  auto c2 = cube_at({R(1, 4), R(1, 2)}, 2, R(1));
  CHECK(c2.layers == std::vector<std::int64_t>{1, 1});
  CHECK(c2.anchor == RVec{R(0), R(0)});

  // Second layer: lower coordinate shifted by 1/2, so 1/4 falls in [-1/2, 1/2).
  auto c3 = cube_at({R(1, 4), R(3, 2)}, 2, R(1));
  CHECK(c3.layers == std::vector<std::int64_t>{0, 2});
  CHECK(c3.anchor == RVec{R(-1, 2), R(1)});

  // Boundary points belong to the upper cube.
  auto c4 = cube_at({R(1), R(0)}, 2, R(1));
  CHECK(c4.anchor == RVec{R(1), R(0)});

  SUBCASE("anchor is reproducible from the layers") {
    for (int d = 1; d <= 3; ++d) {
      std::mt19937_64 rng(d);
      std::uniform_int_distribution<int> num(-600, 600);
      for (int t = 0; t < 200; ++t) {
        RVec p;
        for (int k = 0; k < d; ++k) p.push_back(R(num(rng), 97));
        for (const Rational& s : {R(1), R(1, 3)}) {
          auto c = cube_at(p, d, s);
          CHECK(cube_from_layers(d, s, c.layers).anchor == c.anchor);
          CHECK(box_contains_point(c.box(), p));
          for (int k = 0; k < d; ++k) CHECK(c.box().side(k) == s);
        }
      }
    }
  }
}

TEST_CASE("cubes of one scale partition the plane") {
  // Every point lies in exactly one enumerated cube.
  for (int d = 2; d <= 3; ++d) {
    Box w = window(d, R(-2), R(2));
    std::vector<CubeId> cubes;
    enumerate_cubes(d, R(1), w, [&](const CubeId& c) { cubes.push_back(c); });
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> num(-180, 180);
    for (int t = 0; t < 300; ++t) {
      RVec p;
      for (int k = 0; k < d; ++k) p.push_back(R(num(rng), 100));
      int hits = 0;
      for (const auto& c : cubes) hits += box_contains_point(c.box(), p) ? 1 : 0;
      CHECK(hits == 1);
      int holder = -1;
      for (size_t i = 0; i < cubes.size(); ++i)
        if (box_contains_point(cubes[i].box(), p)) holder = static_cast<int>(i);
      REQUIRE(holder >= 0);
      CHECK(cubes[holder] == cube_at(p, d, R(1)));
    }
  }
}

TEST_CASE("color_of") {
  CHECK(color_of(cube_from_layers(1, R(1), {1})) == 1);
  CHECK(color_of(cube_from_layers(1, R(1), {2})) == 2);
  CHECK(color_of(cube_from_layers(1, R(1), {3})) == 1);
  CHECK(color_of(cube_at({R(1, 2), R(1, 2)}, 2, R(1))) == 1);

  SUBCASE("d = 2 agrees with the layer translation construction") {
    for (std::int64_t k0 = -6; k0 <= 6; ++k0)
      for (std::int64_t k1 = -6; k1 <= 6; ++k1) {
        auto c = cube_from_layers(2, R(1, 3), {k0, k1});
        CHECK(color_of(c) == color_by_back_translation(c));
      }
  }

  SUBCASE("colors are periodic under d+1 layer shifts") {
    for (int d = 1; d <= 3; ++d)
      enumerate_cubes(d, R(1), window(d, R(-2), R(3)), [&](const CubeId& c) {
        int color = color_of(c);
        CHECK(color >= 1);
        CHECK(color <= d + 1);
        for (int i = 0; i < d; ++i) {
          auto layers = c.layers;
          layers[i] += d + 1;
          CHECK(color_of(cube_from_layers(d, c.s, layers)) == color);
        }
      });
  }
}

TEST_CASE("neighborhood sizes") {
  auto n2d = neighborhoods(cube_from_layers(2, R(1), {1, 1}));
  CHECK(n2d.N1.side(0) == R(9, 8));
  CHECK(n2d.N2.side(1) == R(5, 4));
  CHECK(n2d.N1.lo[0] + n2d.N1.hi[0] == R(1));
  CHECK(n2d.N2.lo[1] + n2d.N2.hi[1] == R(1));

  auto n1d = neighborhoods(cube_from_layers(1, R(1), {1}));
  CHECK(n1d.N1.side(0) == R(5, 4));
  CHECK(n1d.N2.side(0) == R(3, 2));

  auto n3d = neighborhoods(cube_from_layers(3, R(2), {1, 1, 1}));
  for (int k = 0; k < 3; ++k) {
    CHECK(n3d.N1.side(k) == R(13, 6));
    CHECK(n3d.N2.side(k) == R(7, 3));
  }
}

TEST_CASE("same-color separation is s/d") {
  for (int d = 1; d <= 3; ++d)
    for (const Rational& s : {R(1), R(1, 3)})
      for (int j = 1; j <= d + 1; ++j) {
        Box w = window(d, -2 * s, 3 * s);
        auto rep = separation_report(d, s, j, w);
        CHECK(rep.min_chebyshev == s / d);
        CHECK(rep.n2_disjoint);
        CHECK(rep.cube_count >= 2);
        CHECK(rep.min_euclidean_sq <= rep.min_chebyshev * rep.min_chebyshev * d);
        CHECK(rep.min_euclidean_sq >= rep.min_chebyshev * rep.min_chebyshev);

        // Independent pass: enumerate layer indices directly and keep cubes inside the window.
        std::vector<Box> boxes;
        std::vector<std::int64_t> k(d, -3);
        while (true) {
          auto c = cube_from_layers(d, s, k);
          if (color_of(c) == j && box_contains(w, c.box())) boxes.push_back(c.box());
          int i = 0;
          while (i < d && ++k[i] > 5) k[i++] = -3;
          if (i == d) break;
        }
        REQUIRE(static_cast<int>(boxes.size()) == rep.cube_count);
        Rational best = -1;
        for (size_t a = 0; a < boxes.size(); ++a)
          for (size_t b = a + 1; b < boxes.size(); ++b) {
            Rational dist = 0;
            for (int ax = 0; ax < d; ++ax) {
              Rational gap = std::max(boxes[b].lo[ax] - boxes[a].hi[ax], boxes[a].lo[ax] - boxes[b].hi[ax]);
              dist = std::max(dist, gap);
            }
            if (best < 0 || dist < best) best = dist;
          }
        CHECK(best == s / d);
      }

  auto wide = separation_report(2, R(1), 1, window(2, R(-6), R(6)));
  CHECK(wide.min_chebyshev == R(1, 2));
  CHECK(separation_report(1, R(1), 1, window(1, R(-5), R(5))).min_chebyshev == R(1));

  CHECK_THROWS_WITH_AS(separation_report(2, R(1), 1, window(2, R(-1, 2), R(1, 2))),
                       doctest::Contains("window_too_small"), Error);
}

TEST_CASE("box primitives") {
  Box a = cube_box({R(0), R(0)}, R(1));
  Box b = cube_box({R(1), R(0)}, R(1));
  CHECK_FALSE(boxes_intersect(a, b));  // shared face only
  CHECK(boxes_intersect(a, cube_box({R(1, 2), R(1, 2)}, R(1))));
  CHECK(box_contains(a, cube_box({R(0), R(0)}, R(1, 2))));
  CHECK_FALSE(box_contains(a, cube_box({R(3, 4), R(0)}, R(1, 2))));

  // Periodic tests on the unit torus.
  Box wrap = cube_box({R(9, 10), R(0)}, R(1, 5));  // covers [0.9, 1.1) x [0, 0.2)
  CHECK(boxes_intersect(wrap, cube_box({R(0), R(0)}, R(1, 20)), R(1)));
  CHECK_FALSE(boxes_intersect(wrap, cube_box({R(0), R(0)}, R(1, 20))));
  CHECK(box_contains(wrap, cube_box({R(1, 50), R(0)}, R(1, 20)), R(1)));
  CHECK(box_contains_point(wrap, {R(1, 20), R(1, 10)}, R(1)));

  auto pieces = box_difference(cube_box({R(0), R(0)}, R(3)), cube_box({R(1), R(1)}, R(1)));
  CHECK(pieces.size() == 4);
  Rational area = 0;
  for (const auto& p : pieces) area += p.side(0) * p.side(1);
  CHECK(area == R(8));

  CHECK(parse_rational("0.45") == R(9, 20));
  CHECK(parse_rational("-3/6") == R(-1, 2));
  CHECK(parse_rational("-0.5") == R(-1, 2));
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
}

TEST_CASE("merge_generation") {
  auto cube = [](std::initializer_list<Rational> lo) {
    auto c = cube_at(RVec(lo), 2, R(1));
    auto nb = neighborhoods(c);
    return IncomingCube{c.box(), nb.N1, nb.N2};
  };
  IncomingCube c1 = cube({R(0), R(0)});
  IncomingCube far = cube({R(5), R(4)});

  SUBCASE("no existing regions") {
    auto out = merge_generation({}, {c1, far});
    REQUIRE(out.regions.size() == 2);
    CHECK(out.regions[0] == RegionUnion{c1.N1});
    CHECK(out.regions[1] == RegionUnion{far.N1});
    CHECK_FALSE(regions_intersect(out.regions[0], out.regions[1]));
    CHECK(out.retained == 0);
  }

  SUBCASE("region inside N1 is absorbed") {
    RegionUnion inside{cube_box({R(-1, 32), R(1, 2)}, R(1, 8))};
    CHECK(classify_region(inside, c1) == RegionType::inside_n1);
    auto out = merge_generation({inside}, {c1});
    REQUIRE(out.regions.size() == 1);
    CHECK(out.regions[0] == RegionUnion{c1.N1});
    CHECK(out.events[0].absorbed == std::vector<int>{0});
  }

  SUBCASE("region in N2 off the cube is attached") {
    // N1 = [-1/16, 17/16)^2, N2 = [-1/8, 9/8)^2; this box pokes out of N1 but stays in N2.
    RegionUnion straddle{cube_box({R(-7, 64), R(1, 4)}, R(3, 32))};
    RegionUnion distant{cube_box({R(3), R(3)}, R(1, 8))};
    CHECK(classify_region(straddle, c1) == RegionType::inside_n2_off_cube);
    CHECK(classify_region(distant, c1) == RegionType::outside_n1);
    auto out = merge_generation({straddle, distant}, {c1});
    REQUIRE(out.regions.size() == 2);
    CHECK(out.regions[0].size() == 2);
    CHECK(out.regions[0][1] == straddle[0]);
    CHECK(out.regions[1] == distant);
    CHECK(out.origin == std::vector<int>{0, -2});
    CHECK_FALSE(regions_intersect(out.regions[0], out.regions[1]));
    for (const auto& b : out.regions[0]) CHECK(box_contains(c1.N2, b));
  }

  SUBCASE("trichotomy violation") {
    // Meets the cube and leaves N1.
    RegionUnion bad{cube_box({R(-1, 2), R(1, 4)}, R(1))};
    CHECK_FALSE(classify_region(bad, c1).has_value());
    CHECK_THROWS_WITH_AS(merge_generation({bad}, {c1}), doctest::Contains("trichotomy_violation"), Error);
  }

  SUBCASE("overlapping incoming N2 is a precondition failure") {
    IncomingCube next = cube({R(1), R(0)});
    CHECK_THROWS_WITH_AS(merge_generation({}, {c1, next}), doctest::Contains("precondition"), Error);
  }

  SUBCASE("delta bound on merged diameter") {
    // diam N2 = (5/4) sqrt 2, squared 25/8.
    CHECK_NOTHROW(merge_generation({}, {c1}, {}, R(18, 10)));
    CHECK_THROWS_WITH_AS(merge_generation({}, {c1}, {}, R(17, 10)), doctest::Contains("postcondition"), Error);
  }
}

TEST_CASE("torus_cover on the circle") {
  std::vector<TorusChart> charts{{"gap", {R(0)}, R(1, 10)}, {"main", {R(1, 2)}, R(9, 20)}};
  auto plan = torus_cover(1, charts, 10000);
  CHECK(plan.families.size() == 2);
  CHECK(plan.families_disjoint);
  CHECK(plan.grid.points == 10000);
  CHECK(plan.grid.covered == 10000);
  CHECK(plan.complete());
  REQUIRE(plan.scales.size() == 2);
  CHECK(plan.scales[1].cubes_used > 0);
  CHECK(plan.scales[0].cubes_used > 0);
  // Descending induction: diam N2 at the finer scale stays below delta of the coarser one.
  const auto& fine = plan.scales[0];
  CHECK(charts[0].rho * fine.s * R(3, 2) < plan.scales[1].delta);
  CHECK(fine.delta == charts[0].rho * fine.s / 8);
  // Coarsest chart stays injective on its N2 boxes.
  CHECK(2 * charts[1].rho * (1 + R(5, 4) * plan.scales[1].s) <= 1);
}

TEST_CASE("torus_cover preconditions") {
  std::vector<TorusChart> one{{"only", {R(1, 2), R(1, 2)}, R(9, 20)}};
  CHECK_THROWS_WITH_AS(torus_cover(2, one, 64), doctest::Contains("charts_do_not_cover"), Error);
  std::vector<TorusChart> big{{"big", {R(0)}, R(1, 2)}};
  CHECK_THROWS_WITH_AS(torus_cover(1, big, 64), doctest::Contains("chart_not_injective"), Error);
  std::vector<TorusChart> wrong_dim{{"w", {R(0)}, R(1, 4)}};
  CHECK_THROWS_AS(torus_cover(2, wrong_dim, 64), Error);
}
