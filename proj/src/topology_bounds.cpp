#include "catlas/topology_bounds.hpp"

#include <algorithm>
#include <bit>
#include <functional>

namespace catlas {

namespace {

[[noreturn]] void bad_ring(const std::string& msg) { throw Error("inconsistent_presentation", msg); }
[[noreturn]] void bad_descriptor(const std::string& msg) { throw Error("inconsistent_descriptor", msg); }

RingPresentation empty_ring(int top, int n) {
  RingPresentation r;
  r.top_degree = top;
  r.degrees.assign(n, 0);
  r.names.assign(n, "");
  r.product.assign(n, std::vector<std::uint64_t>(n, 0));
  return r;
}

int element_degree(const RingPresentation& r, std::uint64_t x) {
  int deg = -1;
  for (int k = 0; k < r.size(); ++k)
    if (x >> k & 1) {
      if (deg >= 0 && r.degrees[k] != deg) return -2;
      deg = r.degrees[k];
    }
  return deg;
}

}  // namespace

std::uint64_t RingPresentation::multiply(std::uint64_t a, std::uint64_t b) const {
  std::uint64_t out = 0;
  for (int i = 0; i < size(); ++i)
    if (a >> i & 1)
      for (int j = 0; j < size(); ++j)
        if (b >> j & 1) out ^= product[i][j];
  return out;
}

void RingPresentation::validate() const {
  const int n = size();
  if (n == 0 || n > 64) bad_ring("basis size must lie in [1, 64]");
  if (static_cast<int>(names.size()) != n || static_cast<int>(product.size()) != n) bad_ring("table sizes differ");
  for (const auto& row : product)
    if (static_cast<int>(row.size()) != n) bad_ring("multiplication table is not square");
  if (degrees[0] != 0) bad_ring("basis element 0 must be the unit in degree 0");
  const std::uint64_t mask = n == 64 ? ~0ULL : (1ULL << n) - 1;
  for (int i = 0; i < n; ++i) {
    if (degrees[i] < 0 || degrees[i] > top_degree) bad_ring("degree out of range for " + names[i]);
    if (i > 0 && degrees[i] == 0) bad_ring("reduced cohomology must sit in positive degrees");
    if (product[0][i] != 1ULL << i || product[i][0] != 1ULL << i) bad_ring("element 0 is not a unit");
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::uint64_t p = product[i][j];
      if (p & ~mask) bad_ring("product refers to a missing basis element");
      if (p != product[j][i]) bad_ring("product of " + names[i] + " and " + names[j] + " is not commutative");
      if (p && element_degree(*this, p) != degrees[i] + degrees[j])
        bad_ring("product of " + names[i] + " and " + names[j] + " is not graded");
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (multiply(product[i][j], 1ULL << k) != multiply(1ULL << i, product[j][k]))
          bad_ring("product of " + names[i] + ", " + names[j] + ", " + names[k] + " is not associative");
}

RingPresentation sphere_ring(int n) {
  if (n < 1) throw Error("precondition", "sphere dimension must be positive");
  RingPresentation r = empty_ring(n, 2);
  r.degrees = {0, n};
  r.names = {"1", "a"};
  r.product = {{1, 2}, {2, 0}};
  return r;
}

RingPresentation torus_ring(int n) {
  if (n < 1 || n > 6) throw Error("precondition", "torus dimension must lie in [1, 6]");
  // Basis: subsets of the generators, element index = subset bitmask.
  const int size = 1 << n;
  RingPresentation r = empty_ring(n, size);
  for (int s = 0; s < size; ++s) {
    r.degrees[s] = std::popcount(static_cast<unsigned>(s));
    std::string name;
    for (int g = 0; g < n; ++g)
      if (s >> g & 1) name += static_cast<char>('a' + g);
    r.names[s] = s == 0 ? "1" : name;
  }
  for (int s = 0; s < size; ++s)
    for (int t = 0; t < size; ++t)
      if ((s & t) == 0) r.product[s][t] = 1ULL << (s | t);
  return r;
}

RingPresentation truncated_polynomial_ring(int degree, int height) {
  if (degree < 1 || height < 1 || height > 63) throw Error("precondition", "bad truncated polynomial ring");
  RingPresentation r = empty_ring(degree * height, height + 1);
  for (int i = 0; i <= height; ++i) {
    r.degrees[i] = degree * i;
    r.names[i] = i == 0 ? "1" : i == 1 ? "a" : "a^" + std::to_string(i);
  }
  for (int i = 0; i <= height; ++i)
    for (int j = 0; j <= height; ++j)
      if (i + j <= height) r.product[i][j] = 1ULL << (i + j);
  return r;
}

RingPresentation surface_ring(int genus) {
  if (genus < 0 || genus > 30) throw Error("precondition", "genus must lie in [0, 30]");
  const int n = 2 * genus + 2;
  RingPresentation r = empty_ring(2, n);
  const int top = n - 1;
  r.degrees[top] = 2;
  r.names[0] = "1";
  r.names[top] = "w";
  for (int g = 0; g < genus; ++g) {
    const int a = 1 + 2 * g, b = 2 + 2 * g;
    r.degrees[a] = r.degrees[b] = 1;
    r.names[a] = "a" + std::to_string(g + 1);
    r.names[b] = "b" + std::to_string(g + 1);
    r.product[a][b] = r.product[b][a] = 1ULL << top;
  }
  for (int i = 0; i < n; ++i) r.product[0][i] = r.product[i][0] = 1ULL << i;
  return r;
}

RingPresentation tensor_product(const RingPresentation& a, const RingPresentation& b) {
  const int na = a.size(), nb = b.size();
  if (na * nb > 64) throw Error("precondition", "tensor product exceeds 64 basis elements");
  RingPresentation r = empty_ring(a.top_degree + b.top_degree, na * nb);
  auto idx = [nb](int i, int j) { return i * nb + j; };
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) {
      r.degrees[idx(i, j)] = a.degrees[i] + b.degrees[j];
      r.names[idx(i, j)] = i == 0 ? b.names[j] : j == 0 ? a.names[i] : a.names[i] + "x" + b.names[j];
    }
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j)
      for (int k = 0; k < na; ++k)
        for (int l = 0; l < nb; ++l) {
          const std::uint64_t pa = a.product[i][k], pb = b.product[j][l];
          std::uint64_t out = 0;
          for (int s = 0; s < na; ++s)
            if (pa >> s & 1)
              for (int t = 0; t < nb; ++t)
                if (pb >> t & 1) out |= 1ULL << idx(s, t);
          r.product[idx(i, j)][idx(k, l)] = out;
        }
  return r;
}

int cup_length(const RingPresentation& ring) {
  ring.validate();
  // A nonzero product of sums expands into at least one nonzero product of basis
  // elements of the same length, so nondecreasing basis products suffice.
  int best = 0;
  std::function<void(int, std::uint64_t, int, int)> search = [&](int start, std::uint64_t value, int deg, int len) {
    best = std::max(best, len);
    for (int i = start; i < ring.size(); ++i) {
      if (deg + ring.degrees[i] > ring.top_degree) continue;
      const std::uint64_t next = ring.multiply(value, 1ULL << i);
      if (next) search(i, next, deg + ring.degrees[i], len + 1);
    }
  };
  for (int i = 1; i < ring.size(); ++i) search(i, 1ULL << i, ring.degrees[i], 1);
  return best;
}

std::string to_string(ManifoldClass c) {
  switch (c) {
    case ManifoldClass::s3: return "S3";
    case ManifoldClass::connected_sum_s2xs1: return "connected_sum_S2xS1";
    case ManifoldClass::other_3manifold: return "other_closed_oriented_3mfd";
    case ManifoldClass::torus: return "torus";
    case ManifoldClass::product_with_surface: return "product_with_surface";
    case ManifoldClass::sphere: return "sphere";
    case ManifoldClass::spherisation: return "spherisation_of";
    case ManifoldClass::homotopy_sphere_quotient: return "quotient_of_homotopy_sphere";
    case ManifoldClass::connected_sum: return "connected_sum";
    case ManifoldClass::generic: return "generic";
  }
  return "generic";
}

std::string to_string(ContactTag t) {
  switch (t) {
    case ContactTag::tight: return "tight";
    case ContactTag::standard: return "standard";
    case ContactTag::overtwisted: return "overtwisted";
    case ContactTag::unspecified: return "unspecified";
  }
  return "unspecified";
}

ManifoldClass manifold_class_from_string(const std::string& s) {
  for (auto c : {ManifoldClass::s3, ManifoldClass::connected_sum_s2xs1, ManifoldClass::other_3manifold,
                 ManifoldClass::torus, ManifoldClass::product_with_surface, ManifoldClass::sphere,
                 ManifoldClass::spherisation, ManifoldClass::homotopy_sphere_quotient, ManifoldClass::connected_sum,
                 ManifoldClass::generic})
    if (to_string(c) == s) return c;
  throw Error("schema", "unknown manifold class '" + s + "'");
}

ContactTag contact_tag_from_string(const std::string& s) {
  for (auto t : {ContactTag::tight, ContactTag::standard, ContactTag::overtwisted, ContactTag::unspecified})
    if (to_string(t) == s) return t;
  throw Error("schema", "unknown contact tag '" + s + "'");
}

void ManifoldDescriptor::validate() const {
  if (dim < 1) bad_descriptor("dimension must be positive");
  if (connectivity && *connectivity < 0) bad_descriptor("connectivity must be non-negative");
  if (cup_length && (*cup_length < 1 || *cup_length > dim)) bad_descriptor("cup length must lie in [1, dim]");
  switch (cls) {
    case ManifoldClass::s3:
    case ManifoldClass::other_3manifold:
      if (dim != 3) bad_descriptor(to_string(cls) + " needs dimension 3");
      break;
    case ManifoldClass::connected_sum_s2xs1:
      if (dim != 3 || k < 1) bad_descriptor("#_k(S2xS1) needs dimension 3 and k >= 1");
      break;
    case ManifoldClass::torus:
      break;
    case ManifoldClass::sphere:
      break;
    case ManifoldClass::product_with_surface: {
      if (parts.size() != 1) bad_descriptor("product_with_surface needs one factor");
      const auto& M = parts[0];
      M.validate();
      if (M.dim % 2 != 1 || dim != M.dim + 2) bad_descriptor("product_with_surface needs an odd factor and dim = dim M + 2");
      if (k < 1) bad_descriptor("surface genus must be at least 1");
      break;
    }
    case ManifoldClass::spherisation: {
      if (parts.size() != 1) bad_descriptor("spherisation needs one base");
      parts[0].validate();
      if (parts[0].dim < 2 || dim != 2 * parts[0].dim - 1) bad_descriptor("spherisation needs dim = 2 dim N - 1, dim N >= 2");
      break;
    }
    case ManifoldClass::homotopy_sphere_quotient:
      break;
    case ManifoldClass::connected_sum:
      if (parts.size() < 2) bad_descriptor("connected sum needs at least two summands");
      for (const auto& p : parts) {
        p.validate();
        if (p.dim != dim) bad_descriptor("summands must have the same dimension");
      }
      break;
    case ManifoldClass::generic:
      break;
  }
  if (cls != ManifoldClass::generic && cls != ManifoldClass::torus && cls != ManifoldClass::connected_sum &&
      dim % 2 == 0)
    bad_descriptor(to_string(cls) + " is a contact class and needs odd dimension");
}

ManifoldDescriptor s3(ContactTag contact) {
  ManifoldDescriptor m;
  m.cls = ManifoldClass::s3;
  m.dim = 3;
  m.contact = contact;
  return m;
}

ManifoldDescriptor connected_sum_s2xs1(int k, ContactTag contact) {
  ManifoldDescriptor m;
  m.cls = ManifoldClass::connected_sum_s2xs1;
  m.dim = 3;
  m.k = k;
  m.contact = contact;
  return m;
}

ManifoldDescriptor torus(int n, ContactTag contact) {
  ManifoldDescriptor m;
  m.cls = ManifoldClass::torus;
  m.dim = n;
  m.contact = contact;
  m.euler_characteristic = 0;
  return m;
}

ManifoldDescriptor sphere(int dim, ContactTag contact) {
  ManifoldDescriptor m;
  m.cls = dim == 3 ? ManifoldClass::s3 : ManifoldClass::sphere;
  m.dim = dim;
  m.contact = contact;
  if (dim % 2 == 0) m.cls = ManifoldClass::generic, m.euler_characteristic = 2;
  m.connectivity = dim - 1;
  m.cup_length = 1;
  return m;
}

ManifoldDescriptor spherisation_of(const ManifoldDescriptor& base) {
  ManifoldDescriptor m;
  m.cls = ManifoldClass::spherisation;
  m.dim = 2 * base.dim - 1;
  m.parts = {base};
  return m;
}

ManifoldDescriptor connected_sum(const std::vector<ManifoldDescriptor>& parts) {
  ManifoldDescriptor m;
  m.cls = ManifoldClass::connected_sum;
  m.dim = parts.empty() ? 0 : parts[0].dim;
  m.parts = parts;
  return m;
}

namespace {

void tighten(BoundResult& r, int lo, int hi, const std::string& rule) {
  bool used = false;
  if (lo > r.lower) r.lower = lo, used = true;
  if (hi < r.upper) r.upper = hi, used = true;
  if (used) r.rules.push_back(rule);
  if (r.lower > r.upper)
    throw Error("contradictory_rules", "rule '" + rule + "' empties the interval [" + std::to_string(r.lower) + ", " +
                                           std::to_string(r.upper) + "]");
}

bool closed_3manifold_class(const ManifoldDescriptor& m) {
  switch (m.cls) {
    case ManifoldClass::s3:
    case ManifoldClass::connected_sum_s2xs1:
    case ManifoldClass::other_3manifold:
      return true;
    case ManifoldClass::torus:
    case ManifoldClass::spherisation:
    case ManifoldClass::homotopy_sphere_quotient:
      return m.dim == 3;
    default:
      return false;
  }
}

// Value of B from the 3-manifold table; tori, unit tangent bundles of surfaces and
// nontrivial quotients of S^3 are neither S^3 nor #_k(S2xS1).
int three_manifold_B(const ManifoldDescriptor& m) {
  if (m.cls == ManifoldClass::s3) return 2;
  if (m.cls == ManifoldClass::connected_sum_s2xs1) return 3;
  return 4;
}

std::optional<int> known_cup_length(const ManifoldDescriptor& m) {
  if (m.cup_length) return m.cup_length;
  switch (m.cls) {
    case ManifoldClass::s3:
    case ManifoldClass::sphere:
      return 1;
    case ManifoldClass::connected_sum_s2xs1:
      return 2;
    case ManifoldClass::torus:
      return m.dim;
    case ManifoldClass::product_with_surface: {
      const auto c = known_cup_length(m.parts[0]);
      if (c && *c == m.parts[0].dim) return m.dim;
      return std::nullopt;
    }
    case ManifoldClass::spherisation: {
      const auto& N = m.parts[0];
      if (N.orientable && N.euler_characteristic == 0)
        if (const auto c = known_cup_length(N)) return *c + 1;
      if (N.dim == 2 && N.cls == ManifoldClass::generic && N.euler_characteristic == 2) return 3;  // RP^3 over Z/2
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

}  // namespace

CategoryBounds category_bounds(const ManifoldDescriptor& m, std::optional<int> cl) {
  m.validate();
  const int d = m.dim;
  CategoryBounds out;
  out.B = {1, d + 1, {"dimension bound B <= d+1"}};
  if (!cl) cl = known_cup_length(m);
  if (cl) {
    if (*cl < 0 || *cl > d) throw Error("precondition", "cup length must lie in [0, dim]");
    out.cup_length_lower = *cl + 1;
    tighten(out.B, *cl + 1, d + 1, "cup-length bound cl+1 <= cat <= B");
  }
  if (m.connectivity && d != 4) tighten(out.B, 1, d / (*m.connectivity + 1) + 1, "connectivity bound B <= d/(p+1)+1");

  switch (m.cls) {
    case ManifoldClass::s3:
    case ManifoldClass::sphere:
      tighten(out.B, 2, 2, "B = 2 for spheres");
      break;
    case ManifoldClass::homotopy_sphere_quotient:
      tighten(out.B, d + 1, d + 1, "cat = d+1 for quotients of homotopy spheres");
      break;
    case ManifoldClass::connected_sum_s2xs1:
    case ManifoldClass::other_3manifold:
    case ManifoldClass::torus:
    case ManifoldClass::spherisation:
      if (closed_3manifold_class(m)) {
        const int b = three_manifold_B(m);
        tighten(out.B, b, b, "3-manifold table for B");
      }
      break;
    default:
      break;
  }

  // cat shares the lower bound; cat = B for closed oriented 3-manifolds.
  out.cat = {std::max(1, out.cup_length_lower), out.B.upper, {}};
  if (out.cup_length_lower > 0) out.cat.rules.push_back("cup-length bound cl+1 <= cat <= B");
  out.cat.rules.push_back("cat <= B");
  if (m.cls == ManifoldClass::homotopy_sphere_quotient) {
    out.cat.lower = d + 1;
    out.cat.rules.push_back("cat = d+1 for quotients of homotopy spheres");
  }
  if (closed_3manifold_class(m)) {
    out.cat.lower = out.B.lower;
    out.cat.rules.push_back("cat = B for closed oriented 3-manifolds");
  }
  if (out.cat.lower > out.cat.upper) throw Error("contradictory_rules", "category interval is empty");
  return out;
}

ThreeManifoldValues three_manifold_values(const ManifoldDescriptor& m) {
  m.validate();
  if (!closed_3manifold_class(m)) throw Error("not_a_3manifold_class", to_string(m.cls) + " is not a classified 3-manifold");
  ThreeManifoldValues v;
  v.B = three_manifold_B(m);
  if (m.cls == ManifoldClass::s3) {
    if (m.contact == ContactTag::unspecified) throw Error("contact_tag_missing", "C(S3) depends on tight vs overtwisted");
    v.C = m.contact == ContactTag::overtwisted ? 3 : 2;
  } else {
    v.C = v.B;
  }
  return v;
}

BoundResult covering_number_bounds(const ManifoldDescriptor& m) {
  m.validate();
  if (m.dim % 2 == 0) throw Error("precondition", "contact manifolds have odd dimension");
  const int d = m.dim;
  BoundResult r{1, d + 1, {"dimension bound C <= d+1"}};

  if (m.cls == ManifoldClass::connected_sum) {
    int upper = 0;
    for (const auto& p : m.parts) upper = std::max(upper, covering_number_bounds(p).upper);
    tighten(r, 1, upper, "connected sum C <= max of summands");
  }

  const CategoryBounds cb = category_bounds(m);
  tighten(r, cb.B.lower, d + 1, "C >= B");

  if (closed_3manifold_class(m) && !(m.cls == ManifoldClass::s3 && m.contact == ContactTag::unspecified)) {
    const int c = three_manifold_values(m).C;
    tighten(r, c, c, "3-manifold table for C");
  }
  if (m.cls == ManifoldClass::sphere && m.contact == ContactTag::standard) tighten(r, 2, 2, "C = 2 for the standard sphere");
  if ((m.cls == ManifoldClass::sphere || m.cls == ManifoldClass::s3) && m.contact == ContactTag::overtwisted)
    tighten(r, 3, d + 1, "C >= 3 for overtwisted spheres");
  if (m.cls == ManifoldClass::spherisation) {
    const auto& N = m.parts[0];
    const int bn = category_bounds(N).B.upper;
    tighten(r, 1, 2 * std::min(bn, N.dim), "spherisation C <= 2 min(B(N), dim N)");
  }
  if (m.cls == ManifoldClass::product_with_surface || m.cls == ManifoldClass::torus) {
    const auto cl = known_cup_length(m);
    if (cl && *cl == d) tighten(r, d + 1, d + 1, "cl = d forces C = d+1");
  }
  if (m.cls == ManifoldClass::homotopy_sphere_quotient)
    tighten(r, d + 1, d + 1, "cat = d+1 for quotients of homotopy spheres");
  return r;
}

}  // namespace catlas
