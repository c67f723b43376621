#pragma once

#include "catlas/core.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace catlas {

// 128-bit integers that throw on overflow, so exact comparisons never wrap silently.
using BigInt = boost::multiprecision::checked_int128_t;
using Rational = boost::rational<BigInt>;
using RVec = std::vector<Rational>;

double to_double(const Rational& r);
Rational floor_r(const Rational& r);
std::int64_t floor_int(const Rational& r);
std::string to_string(const Rational& r);
Rational parse_rational(const std::string& s);

// Half-open box [lo, hi) with rational corners.
struct Box {
  RVec lo;
  RVec hi;

  int dim() const { return static_cast<int>(lo.size()); }
  Rational side(int k) const { return hi[k] - lo[k]; }
  bool valid() const;
  Box translated(const RVec& shift) const;
  bool operator==(const Box& o) const { return lo == o.lo && hi == o.hi; }
};

using RegionUnion = std::vector<Box>;

// Interiors intersect. With a period L the boxes live on the flat torus (R/L)^d; they must be
// shorter than L in every direction.
bool boxes_intersect(const Box& a, const Box& b, std::optional<Rational> period = {});
bool box_contains(const Box& outer, const Box& inner, std::optional<Rational> period = {});
bool box_contains_point(const Box& box, const RVec& p, std::optional<Rational> period = {});
bool regions_intersect(const RegionUnion& a, const RegionUnion& b, std::optional<Rational> period = {});
// Concentric box with every side scaled by factor.
Box scaled_box(const Box& b, const Rational& factor);
// Closed-box distances (per-axis gaps).
Rational chebyshev_distance(const Box& a, const Box& b);
Rational squared_euclidean_distance(const Box& a, const Box& b);
Rational squared_diameter(const Box& b);
// a minus b as at most 2d disjoint boxes.
std::vector<Box> box_difference(const Box& a, const Box& b);

struct CubeId {
  int d = 0;
  Rational s;
  std::vector<std::int64_t> layers;  // k_i = m_i + 1
  RVec anchor;

  Box box() const;
  bool operator<(const CubeId& o) const { return layers < o.layers; }
  bool operator==(const CubeId& o) const { return layers == o.layers && s == o.s && d == o.d; }
};

// Cube with layer indices k (1-based): anchor_l = s (m_l + sum_{j>l} ((d - (j - l)) / d) m_j), m = k - 1.
CubeId cube_from_layers(int d, const Rational& s, const std::vector<std::int64_t>& layers);
CubeId cube_at(const RVec& point, int d, const Rational& s);
// Color in 1..d+1: (sum_l (l + 1) m_l mod (d + 1)) + 1.
int color_of(const CubeId& cube);

struct Neighborhoods {
  Box N1;
  Box N2;
};

// Concentric boxes of sizes (1 + 1/(4d)) s and (1 + 1/(2d)) s.
Neighborhoods neighborhoods(const CubeId& cube);

// Calls fn for every cube whose interior meets the interior of window.
void enumerate_cubes(int d, const Rational& s, const Box& window, const std::function<void(const CubeId&)>& fn);

struct SeparationReport {
  int d = 0;
  Rational s;
  int color = 0;
  int cube_count = 0;
  Rational min_chebyshev;
  Rational min_euclidean_sq;
  double min_euclidean = 0.0;
  CubeId witness_a;
  CubeId witness_b;
  bool n2_disjoint = false;
};

// Brute force over the same-color cubes contained in the window.
SeparationReport separation_report(int d, const Rational& s, int color, const Box& window);

struct IncomingCube {
  Box C;
  Box N1;
  Box N2;
};

enum class RegionType { inside_n1, inside_n2_off_cube, outside_n1 };

struct MergeEvent {
  int incoming = 0;
  std::vector<int> absorbed;  // type inside_n1
  std::vector<int> attached;  // type inside_n2_off_cube
};

struct MergeResult {
  std::vector<RegionUnion> regions;  // K_beta for every incoming cube, then the retained regions
  std::vector<int> origin;           // incoming index for K_beta, -1 - existing index for retained
  std::vector<MergeEvent> events;
  int retained = 0;
};

// Classifies a region against one incoming cube; nullopt if none of the three cases holds.
std::optional<RegionType> classify_region(const RegionUnion& region, const IncomingCube& cube,
                                          std::optional<Rational> period = {});

// One merging generation. Throws Error("trichotomy_violation") when a region fits none of the
// three cases and Error("postcondition") if disjointness, coverage or K_beta inside N2 fails.
// When delta_next is given, every K_beta must also have squared diameter < delta_next^2.
MergeResult merge_generation(std::vector<RegionUnion> existing, const std::vector<IncomingCube>& incoming,
                             std::optional<Rational> period = {}, std::optional<Rational> delta_next = {});

// Chart u -> offset + rho u (mod 1) from the open sup-norm unit ball of R^d into the flat torus.
struct TorusChart {
  std::string name;
  RVec offset;
  Rational rho;
};

struct ChartScale {
  Rational s;
  Rational delta;
  int cubes_used = 0;
};

struct CoverRegion {
  RegionUnion boxes;
  int chart = 0;  // chart whose cube (or N1) seeded the region, 0-based
};

struct MergeSummary {
  int color = 0;
  int chart = 0;
  int incoming = 0;
  int absorbed = 0;
  int attached = 0;
  int retained = 0;
};

struct GridStats {
  int resolution = 0;
  std::int64_t points = 0;
  std::int64_t covered = 0;
};

struct CoverPlan {
  int d = 0;
  std::vector<TorusChart> charts;
  std::vector<ChartScale> scales;
  std::vector<std::vector<CoverRegion>> families;
  std::vector<MergeSummary> log;
  GridStats grid;
  bool families_disjoint = false;
  bool charts_cover = false;

  bool complete() const { return families_disjoint && grid.covered == grid.points && charts_cover; }
};

// Charts are ordered finest first: charts[0] gets the smallest scale, charts.back() the largest.
CoverPlan torus_cover(int d, const std::vector<TorusChart>& charts, int grid_resolution);

// Checks that every grid point k / resolution lies in some open chart image.
bool charts_cover_grid(int d, const std::vector<TorusChart>& charts, int grid_resolution);

}  // namespace catlas
