#pragma once

#include "catlas/core.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace catlas {

// Graded commutative ring over Z/2 given on an additive basis. Basis element 0 is the unit.
// product[i][j] is the set of basis elements (bit k = element k) in the product of i and j.
struct RingPresentation {
  int top_degree = 0;
  std::vector<int> degrees;
  std::vector<std::string> names;
  std::vector<std::vector<std::uint64_t>> product;

  int size() const { return static_cast<int>(degrees.size()); }
  std::uint64_t multiply(std::uint64_t a, std::uint64_t b) const;
  // Throws Error("inconsistent_presentation") unless the table is unital, graded,
  // commutative and associative on the basis.
  void validate() const;
};

RingPresentation sphere_ring(int n);
// Exterior algebra on generators of degree 1: the cohomology of the n-torus.
RingPresentation torus_ring(int n);
// Z/2[a] / a^{height + 1} with deg a = degree, e.g. real projective space RP^height.
RingPresentation truncated_polynomial_ring(int degree, int height);
// Closed orientable surface of genus g.
RingPresentation surface_ring(int genus);
// Kunneth product over the field Z/2.
RingPresentation tensor_product(const RingPresentation& a, const RingPresentation& b);

// Largest k with a nonzero product of k positive-degree classes.
int cup_length(const RingPresentation& ring);

enum class ManifoldClass {
  s3,
  connected_sum_s2xs1,
  other_3manifold,
  torus,
  product_with_surface,
  sphere,
  spherisation,
  homotopy_sphere_quotient,
  connected_sum,
  generic
};

enum class ContactTag { tight, standard, overtwisted, unspecified };

std::string to_string(ManifoldClass c);
std::string to_string(ContactTag t);
ManifoldClass manifold_class_from_string(const std::string& s);
ContactTag contact_tag_from_string(const std::string& s);

struct ManifoldDescriptor {
  ManifoldClass cls = ManifoldClass::generic;
  int dim = 0;
  int k = 0;  // summands of #_k(S^2 x S^1)
  ContactTag contact = ContactTag::unspecified;
  std::optional<int> connectivity;        // p with pi_i = 0 for 1 <= i <= p
  std::optional<int> cup_length;          // known value of cl
  std::optional<int> euler_characteristic;
  bool orientable = true;
  // spherisation: the base; product_with_surface: the odd-dimensional factor; connected_sum: summands.
  std::vector<ManifoldDescriptor> parts;

  // Throws Error("inconsistent_descriptor").
  void validate() const;
};

ManifoldDescriptor s3(ContactTag contact);
ManifoldDescriptor connected_sum_s2xs1(int k, ContactTag contact = ContactTag::unspecified);
ManifoldDescriptor torus(int n, ContactTag contact = ContactTag::unspecified);
ManifoldDescriptor sphere(int dim, ContactTag contact = ContactTag::unspecified);
ManifoldDescriptor spherisation_of(const ManifoldDescriptor& base);
ManifoldDescriptor connected_sum(const std::vector<ManifoldDescriptor>& parts);

struct BoundResult {
  int lower = 1;
  int upper = 1;
  std::vector<std::string> rules;  // names of the rules that were applied

  bool exact() const { return lower == upper; }
};

struct CategoryBounds {
  int cup_length_lower = 0;  // cl + 1 when cl is known, else 0
  BoundResult cat;
  BoundResult B;
};

CategoryBounds category_bounds(const ManifoldDescriptor& m, std::optional<int> cl = std::nullopt);

struct ThreeManifoldValues {
  int B = 0;
  int C = 0;
};

// Throws Error("contact_tag_missing") for S^3 without a tight/overtwisted tag and
// Error("not_a_3manifold_class") for descriptors outside the classified list.
ThreeManifoldValues three_manifold_values(const ManifoldDescriptor& m);

// Intersection of every applicable rule; throws Error("contradictory_rules") on an empty interval.
BoundResult covering_number_bounds(const ManifoldDescriptor& m);

}  // namespace catlas
