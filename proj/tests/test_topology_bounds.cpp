#include "catlas/topology_bounds.hpp"

#include <doctest.h>

#include <random>

using namespace catlas;

namespace {

// Independent oracle: longest nonzero product over all ordered tuples of
// positive-degree basis elements, without pruning or ordering.
int cup_length_oracle(const RingPresentation& r) {
  int best = 0;
  std::vector<std::uint64_t> layer;
  for (int i = 1; i < r.size(); ++i) layer.push_back(1ULL << i);
  for (int len = 1; !layer.empty(); ++len) {
    best = len;
    std::vector<std::uint64_t> next;
    for (auto v : layer)
      for (int i = 1; i < r.size(); ++i) {
        const auto p = r.multiply(v, 1ULL << i);
        if (p && std::find(next.begin(), next.end(), p) == next.end()) next.push_back(p);
      }
    layer = std::move(next);
  }
  return best;
}

std::vector<ManifoldDescriptor> pool(int dim) {
  std::vector<ManifoldDescriptor> out;
  if (dim == 3) {
    for (auto t : {ContactTag::tight, ContactTag::overtwisted}) out.push_back(s3(t));
    out.push_back(connected_sum_s2xs1(1));
    out.push_back(connected_sum_s2xs1(4));
    ManifoldDescriptor other;
    other.cls = ManifoldClass::other_3manifold;
    other.dim = 3;
    out.push_back(other);
    out.push_back(torus(3));
    out.push_back(spherisation_of(sphere(2)));
    ManifoldDescriptor lens;
    lens.cls = ManifoldClass::homotopy_sphere_quotient;
    lens.dim = 3;
    out.push_back(lens);
  } else {
    out.push_back(sphere(dim, ContactTag::standard));
    out.push_back(sphere(dim, ContactTag::overtwisted));
    out.push_back(torus(dim));
    ManifoldDescriptor g;
    g.dim = dim;
    out.push_back(g);
    g.connectivity = 1;
    out.push_back(g);
    ManifoldDescriptor q;
    q.cls = ManifoldClass::homotopy_sphere_quotient;
    q.dim = dim;
    out.push_back(q);
    ManifoldDescriptor p;
    p.cls = ManifoldClass::product_with_surface;
    p.dim = dim;
    p.k = 2;
    p.parts = {torus(dim - 2)};
    out.push_back(p);
    out.push_back(spherisation_of(sphere((dim + 1) / 2)));
  }
  return out;
}

}  // namespace

TEST_CASE("ring presentations validate") {
  for (int n = 1; n <= 6; ++n) CHECK_NOTHROW(sphere_ring(n).validate());
  for (int n = 1; n <= 5; ++n) CHECK_NOTHROW(torus_ring(n).validate());
  CHECK_NOTHROW(truncated_polynomial_ring(1, 3).validate());
  CHECK_NOTHROW(surface_ring(3).validate());
  CHECK_NOTHROW(tensor_product(sphere_ring(2), sphere_ring(2)).validate());

  RingPresentation bad = sphere_ring(2);
  bad.product[1][1] = 2;  // a^2 = a breaks grading
  CHECK_THROWS_AS(bad.validate(), Error);

  bad = torus_ring(2);
  bad.product[1][2] = 0;  // ab = 0 but ba != 0
  CHECK_THROWS_AS(bad.validate(), Error);

  // Commutative and graded but not associative: a.b = c, c.b = w, (a.b).b = w but a.(b.b) = 0.
  RingPresentation na;
  na.top_degree = 3;
  na.degrees = {0, 1, 1, 2, 3};
  na.names = {"1", "a", "b", "c", "w"};
  na.product.assign(5, std::vector<std::uint64_t>(5, 0));
  for (int i = 0; i < 5; ++i) na.product[0][i] = na.product[i][0] = 1ULL << i;
  na.product[1][2] = na.product[2][1] = 1ULL << 3;
  na.product[3][2] = na.product[2][3] = 1ULL << 4;
  try {
    na.validate();
    FAIL("non-associative table accepted");
  } catch (const Error& e) {
    CHECK(e.code() == "inconsistent_presentation");
  }
}

TEST_CASE("cup_length by brute force") {
  for (int n = 1; n <= 6; ++n) CHECK(cup_length(sphere_ring(n)) == 1);
  for (int n = 1; n <= 5; ++n) {
    CHECK(cup_length(torus_ring(n)) == n);
    CHECK(cup_length_oracle(torus_ring(n)) == n);
  }
  CHECK(cup_length(truncated_polynomial_ring(1, 3)) == 3);  // RP^3 over Z/2
  CHECK(cup_length(surface_ring(0)) == 1);
  CHECK(cup_length(surface_ring(2)) == 2);
  CHECK(cup_length(tensor_product(sphere_ring(2), sphere_ring(2))) == 2);
  CHECK(cup_length(tensor_product(torus_ring(2), surface_ring(1))) == 4);
  CHECK(cup_length(tensor_product(sphere_ring(3), surface_ring(2))) == 3);
  const auto prod = tensor_product(truncated_polynomial_ring(1, 2), torus_ring(2));
  CHECK(cup_length(prod) == cup_length_oracle(prod));
}

TEST_CASE("category_bounds") {
  ManifoldDescriptor m;
  m.dim = 3;
  m.connectivity = 1;
  CHECK(category_bounds(m).B.upper == 2);
  m.dim = 7;
  CHECK(category_bounds(m).B.upper == 4);
  m.dim = 4;
  CHECK(category_bounds(m).B.upper == 5);  // connectivity rule skipped in dimension 4

  const auto t2 = category_bounds(torus(2), cup_length(torus_ring(2)));
  CHECK(t2.cup_length_lower == 3);
  CHECK(t2.cat.lower == 3);
  CHECK(t2.B.lower == 3);
  CHECK(t2.B.upper == 3);

  ManifoldDescriptor g;
  g.dim = 5;
  const auto gb = category_bounds(g);
  CHECK(gb.B.lower == 1);
  CHECK(gb.B.upper == 6);
}

TEST_CASE("three_manifold_values table") {
  CHECK(three_manifold_values(s3(ContactTag::tight)).C == 2);
  CHECK(three_manifold_values(s3(ContactTag::tight)).B == 2);
  CHECK(three_manifold_values(s3(ContactTag::overtwisted)).C == 3);
  for (int k = 1; k <= 4; ++k)
    for (auto t : {ContactTag::tight, ContactTag::overtwisted, ContactTag::unspecified}) {
      const auto v = three_manifold_values(connected_sum_s2xs1(k, t));
      CHECK(v.B == 3);
      CHECK(v.C == 3);
    }
  ManifoldDescriptor other;
  other.cls = ManifoldClass::other_3manifold;
  other.dim = 3;
  for (auto t : {ContactTag::tight, ContactTag::overtwisted, ContactTag::unspecified}) {
    other.contact = t;
    CHECK(three_manifold_values(other).C == 4);
  }
  try {
    three_manifold_values(s3(ContactTag::unspecified));
    FAIL("missing contact tag accepted");
  } catch (const Error& e) {
    CHECK(e.code() == "contact_tag_missing");
  }
  CHECK_THROWS_AS(three_manifold_values(torus(5)), Error);
}

TEST_CASE("three_manifold_values is total on the enumeration") {
  for (const auto& m : pool(3))
    for (auto t : {ContactTag::tight, ContactTag::overtwisted}) {
      ManifoldDescriptor d = m;
      d.contact = t;
      const auto v = three_manifold_values(d);
      CHECK(v.B >= 2);
      CHECK(v.B <= v.C);
      CHECK(v.C <= 4);
    }
}

TEST_CASE("covering_number_bounds examples") {
  const auto t3 = covering_number_bounds(torus(3));
  CHECK(t3.lower == 4);
  CHECK(t3.upper == 4);
  const auto rp3 = covering_number_bounds(spherisation_of(sphere(2)));
  CHECK(rp3.lower == 4);
  CHECK(rp3.upper == 4);
  const auto s5 = covering_number_bounds(sphere(5, ContactTag::overtwisted));
  CHECK(s5.lower == 3);
  CHECK(s5.upper == 6);
  const auto s5std = covering_number_bounds(sphere(5, ContactTag::standard));
  CHECK(s5std.exact());
  CHECK(s5std.upper == 2);
  const auto t5 = covering_number_bounds(torus(5));
  CHECK(t5.lower == 6);
  CHECK(t5.upper == 6);
  CHECK_FALSE(t3.rules.empty());
  CHECK_THROWS_AS(covering_number_bounds(torus(4)), Error);
}

TEST_CASE("monotone chain on every pooled descriptor") {
  for (int dim : {3, 5, 7})
    for (const auto& m : pool(dim)) {
      const auto cb = category_bounds(m);
      const auto c = covering_number_bounds(m);
      CHECK(cb.cup_length_lower <= cb.cat.lower);
      CHECK(cb.cat.lower <= cb.B.lower);
      CHECK(cb.B.lower <= c.lower);
      CHECK(c.lower <= c.upper);
      CHECK(c.upper <= m.dim + 1);
    }
}

TEST_CASE("connected-sum rule on random pairs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = trial % 2 == 0 ? 3 : 5;
    const auto p = pool(dim);
    std::uniform_int_distribution<size_t> pick(0, p.size() - 1);
    const auto& a = p[pick(rng)];
    const auto& b = p[pick(rng)];
    const auto sum = covering_number_bounds(connected_sum({a, b}));
    CHECK(sum.upper <= std::max(covering_number_bounds(a).upper, covering_number_bounds(b).upper));
    CHECK(sum.lower <= sum.upper);
  }
}

TEST_CASE("descriptor validation") {
  ManifoldDescriptor m;
  m.cls = ManifoldClass::s3;
  m.dim = 5;
  CHECK_THROWS_AS(m.validate(), Error);
  CHECK_THROWS_AS(connected_sum_s2xs1(0).validate(), Error);
  CHECK_THROWS_AS(connected_sum({torus(3), sphere(5)}).validate(), Error);
  CHECK(manifold_class_from_string(to_string(ManifoldClass::spherisation)) == ManifoldClass::spherisation);
  CHECK(contact_tag_from_string("overtwisted") == ContactTag::overtwisted);
  CHECK_THROWS_AS(contact_tag_from_string("loose"), Error);
}
