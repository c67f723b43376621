#pragma once

#include "catlas/contact_core.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace catlas {

using V2 = Eigen::Vector2d;
using V3 = Eigen::Vector3d;
using M2 = Eigen::Matrix2d;

// Stereographic charts. north: w = (x, y) / (1 + z), defined off the south pole.
// south: w = (x, -y) / (1 - z), defined off the north pole. Both are orientation
// preserving for the outward normal, and the transition w -> 1 / w is holomorphic.
enum class Chart { north, south };

std::string to_string(Chart c);

// Round sphere |p - center| = radius in R^3. Points are handled in normalized
// coordinates u = (p - center) / radius on the unit sphere.
struct SphereSurface {
  V3 center = V3::Zero();
  double radius = 1.0;

  V3 to_world(const V3& u) const { return center + radius * u; }
  V3 to_unit(const V3& p) const { return (p - center) / radius; }

  static V2 chart_coords(Chart c, const V3& u);
  static V3 chart_point(Chart c, const V2& w);
  // Columns d u / d w_1, d u / d w_2.
  static Eigen::Matrix<double, 3, 2> chart_tangents(Chart c, const V2& w);
  // Derivative of u -> w as a linear map on R^3.
  static Eigen::Matrix<double, 2, 3> chart_differential(Chart c, const V3& u);
  // Chart preferred at u: north on the upper hemisphere, south otherwise.
  static Chart chart_for(const V3& u);
  static V2 transition(Chart from, const V2& w);
  static M2 transition_jacobian(Chart from, const V2& w);
  // Overlap band |z| < 0.9.
  static bool in_band(const V3& u) { return std::abs(u.z()) < 0.9; }
};

enum class Provenance { characteristic, synthetic };

std::string to_string(Provenance p);

// Tangent vector field on a round sphere, stored as an ambient field on the unit sphere.
// For a characteristic field of a form with coefficients a, Y = (a x n) / radius, which
// keeps linearization eigenvalues equal to those of the world field.
struct TangentField {
  std::string name;
  Provenance provenance = Provenance::synthetic;
  SphereSurface surface;
  std::function<V3(const V3&)> field;

  // Tangential part of the field at the unit vector u (u is normalized first).
  V3 operator()(const V3& u) const;
  V2 chart_value(Chart c, const V2& w) const;
  M2 chart_jacobian(Chart c, const V2& w, double h = 1e-5) const;
  // Divergence with respect to the induced area form, in chart coordinates.
  double divergence(Chart c, const V2& w, double h = 1e-5) const;
};

// Characteristic field of a 1-form on R^3 along the sphere: i_Y Omega = alpha|_S.
TangentField characteristic_field(const OneForm& alpha, const SphereSurface& S, const std::string& name = "");
// The same field in a chart, from the 2x2 system built on the chart tangents.
V2 characteristic_chart_value(const OneForm& alpha, const SphereSurface& S, Chart c, const V2& w);

// Built-in forms on R^3.
OneForm dz_form();
// cos r dz + r sin r dphi in cylindrical coordinates around the z-axis.
OneForm overtwisted_form();

// Synthetic fields on the unit sphere.
TangentField height_gradient_field();                  // -grad z: source at the north pole, sink at the south
TangentField rotation_field(double omega = 1.0);       // rotation about the z-axis
// Rotation plus meridional speed f(z) (1 - z^2); f = -z attracting, f = z repelling, f = z^2 semistable.
enum class CycleProfile { attracting, repelling, semistable };
TangentField equator_cycle_field(CycleProfile profile, double omega = 1.0);
// Tangential projection of a polynomial map V: Y(u) = V(u) - (V(u).u) u.
TangentField projected_field(const PolynomialMap& V, const std::string& name);
TangentField projected_linear_field(const Eigen::Matrix3d& M, const std::string& name);

// Bump-blended normal form inserted at a regular point. In flow-box coordinates
// (xi along Y(center), eta = n x xi) the model is
//   W = v ((xi / eps)^2 - split, rate * eta / eps),  eps = radius / 4,  v = |Y(center)|.
// split = 1 gives zeros at xi = -eps and xi = +eps; split = 0 gives one saddle-node at the center.
struct PatchSpec {
  V3 center = V3::UnitX();
  double radius = 0.1;
  double split = 1.0;
  double rate = -1.0;
};

TangentField apply_patch(const TangentField& Y, const PatchSpec& patch);

enum class SingularType { node, focus, saddle, saddle_node, indeterminate };

std::string to_string(SingularType t);

struct SingularPoint {
  V3 position;  // unit sphere
  V3 world;
  Chart chart = Chart::north;
  V2 coords;
  std::array<std::complex<double>, 2> eigenvalues{};
  double divergence = 0.0;
  int sign = 0;  // sign of the divergence; 0 when indeterminate
  SingularType type = SingularType::indeterminate;
  bool source = false;  // node/focus: source; saddle-node: hyperbolic eigenvalue positive
  double margin = 0.0;  // min |Re lambda|
  int index = 0;        // winding number of the field around the point
  // Ambient unit eigendirections for real spectra: {unstable/hyperbolic, stable/center}.
  std::array<V3, 2> directions{V3::Zero(), V3::Zero()};
  double center_quadratic = 0.0;  // saddle-node: g''(0)/2 along the center direction
  std::string error;              // IndeterminateAtTolerance, NotACharacteristicFoliation

  int classified_index() const;
  std::string type_label() const;
};

struct FoliationParams {
  double tol_eig = 1e-7;
  double tol_cycle = 1e-6;
  double dedup_radius = 1e-6;
  double basin_radius = 1e-4;
  int seeds = 1200;
  int cycle_seeds = 48;
  double time_budget = 4000.0;
  int max_singular_points = 64;
};

SingularPoint classify_singular(const TangentField& Y, const V3& u, const FoliationParams& params = {});
// Newton refinement from Fibonacci-lattice seeds (all in the given chart when forced).
std::vector<SingularPoint> find_singular_points(const TangentField& Y, const FoliationParams& params = {},
                                                std::optional<Chart> force_chart = {});
int winding_index(const TangentField& Y, const V3& u, double radius = 1e-3);

enum class LimitKind { singular_point, cycle, polycycle, budget_exhausted };

std::string to_string(LimitKind k);

struct Orbit {
  std::vector<V3> points;  // unit sphere, downsampled
  LimitKind limit = LimitKind::budget_exhausted;
  int singular = -1;  // index into the singular point list
  double time = 0.0;
  V3 cycle_point = V3::Zero();
};

enum class Direction { forward, backward };

// origin: singular point the orbit starts next to; its basin is ignored until the orbit leaves it.
Orbit trace_orbit(const TangentField& Y, const V3& x0, Direction dir, const std::vector<SingularPoint>& singular,
                  const FoliationParams& params = {}, int origin = -1);

struct CycleRecord {
  V3 point;
  double period = 0.0;
  double lambda = 1.0;         // derivative of the Poincare return map
  double second_derivative = 0.0;
  bool degenerate = false;
  bool isolated = true;        // false inside a band of closed orbits
  std::string stability;       // attracting, repelling, semistable, neutral
  std::vector<V3> polyline;
};

struct ReturnMap {
  double value = 0.0;
  double derivative = 0.0;
  double period = 0.0;
  std::vector<V3> polyline;
};

// Return map of the great-circle transversal through x perpendicular to Y(x), at arc parameter s.
ReturnMap return_map(const TangentField& Y, const V3& x, double s, double max_time = 1e4);

std::vector<CycleRecord> find_limit_cycles(const TangentField& Y, const std::vector<SingularPoint>& singular,
                                           const FoliationParams& params = {});

struct GraphEdge {
  int from = -1;  // alpha-limit
  int to = -1;    // omega-limit
  std::vector<V3> polyline;
};

struct SignedGraph {
  std::vector<int> vertices;
  std::vector<GraphEdge> edges;
  int components = 0;
  int betti = 0;
  std::vector<int> loop_edges;  // edges closing an independent cycle
  bool forest() const { return betti == 0; }
  bool tree() const { return betti == 0 && components == 1; }
};

struct Separatrix {
  int saddle = -1;
  Direction direction = Direction::forward;
  Orbit orbit;
  int alpha = -1;
  int omega = -1;
};

struct OrbitGraph {
  SignedGraph positive;
  SignedGraph negative;
  std::vector<Separatrix> separatrices;
  std::vector<GraphEdge> retrograde;
  std::vector<GraphEdge> saddle_connections;
  int unresolved = 0;
  int betti() const { return positive.betti + negative.betti; }
};

OrbitGraph build_graphs(const TangentField& Y, const std::vector<SingularPoint>& singular,
                        const FoliationParams& params = {});

enum class Verdict { yes, no, inconclusive, inapplicable };

std::string to_string(Verdict v);

struct ConvexityReport {
  Verdict convex = Verdict::inconclusive;
  int degenerate_cycles = 0;
  int retrograde_connections = 0;
  std::string reason;
};

ConvexityReport convexity_report(const std::vector<SingularPoint>& singular, const std::vector<CycleRecord>& cycles,
                                 const OrbitGraph& graph);

struct TightnessReport {
  Verdict tight = Verdict::inconclusive;
  std::string witness;  // "cycle", "positive_loop", "negative_loop" or empty
  std::vector<V3> witness_polyline;
  bool trees = false;   // both graphs are trees (checked when tight)
};

TightnessReport tightness_report(const ConvexityReport& convexity, const std::vector<CycleRecord>& cycles,
                                 const OrbitGraph& graph);

enum class StabilityClass { structurally_stable, q1, q2, q3, other };

std::string to_string(StabilityClass c);

struct StabilityReport {
  StabilityClass cls = StabilityClass::other;
  int degenerate_points = 0;
  int saddle_nodes = 0;
  int degenerate_cycles = 0;
  int saddle_connections = 0;
  std::vector<std::string> evidence;
};

StabilityReport stability_class(const std::vector<SingularPoint>& singular, const std::vector<CycleRecord>& cycles,
                                const OrbitGraph& graph, const FoliationParams& params = {});

struct DividingSet {
  std::vector<std::vector<V3>> curves;  // world coordinates
  int components = 0;
  double transversality = 0.0;  // min |<X, n>| / |X| over mesh vertices
  int mesh_vertices = 0;
};

// Zero set of p -> alpha(p)(X(p)) on the sphere by marching triangles on an icosphere mesh.
DividingSet dividing_set(const SphereSurface& S, const OneForm& alpha, const VectorField& X, int subdivisions = 5);

struct FoliationReport {
  std::string name;
  std::vector<SingularPoint> singular;
  std::vector<CycleRecord> cycles;
  OrbitGraph graph;
  ConvexityReport convexity;
  TightnessReport tightness;
  StabilityReport stability;
  std::optional<DividingSet> dividing;
  Verdict dividing_tight = Verdict::inapplicable;  // dividing set connected
  int index_sum = 0;
};

FoliationReport analyze_foliation(const TangentField& Y, const FoliationParams& params = {});

struct Crossing {
  int curve_segment = 0;
  V3 point;
  double angle = 0.0;  // angle between the curve and the field direction at the crossing
};

struct ConditionEvidence {
  std::string condition;  // E1, E2, E3
  int target = 0;
  bool satisfied = false;
  std::vector<Crossing> crossings;
};

struct ExtensiveReport {
  bool embedded = false;
  bool extensive = false;
  std::vector<ConditionEvidence> evidence;
};

// Closed polyline on the unit sphere (last point joins the first).
ExtensiveReport extensive_report(const std::vector<V3>& curve, const TangentField& Y, const FoliationReport& report,
                                 double angle_tol = 1e-3);
std::vector<V3> great_circle(const V3& normal, int samples = 720);
// Great circles with icosahedral normals, then small tilts of each; throws Error("search_exhausted").
std::vector<V3> find_extensive_curve(const TangentField& Y, const FoliationReport& report);

struct SurgeryResult {
  TangentField field;
  PatchSpec patch;
  int singular_before = 0;
  int singular_after = 0;
  int cycles_before = 0;
  int cycles_after = 0;
  int positive_betti_before = 0;
  int positive_betti_after = 0;
  int negative_betti_before = 0;
  int negative_betti_after = 0;
  std::vector<SingularPoint> inserted;
  int attempts = 0;
};

// Inserts a sink and a negative saddle (attracting cycle) or a positive saddle and a source
// (repelling cycle) on the cycle. Throws Error("degenerate_cycle") or Error("patch_failed").
SurgeryResult break_limit_cycle(const TangentField& Y, const FoliationReport& report, int cycle,
                                const FoliationParams& params = {});
// Inserts a sink and a positive saddle (negative loop) or a source and a negative saddle
// (positive loop) on a loop edge. Throws Error("loop_absent") or Error("patch_failed").
SurgeryResult eliminate_graph_loop(const TangentField& Y, const FoliationReport& report, bool negative = true,
                                   const FoliationParams& params = {});

// Three-set partition of S^2 x S^1 or of S^3 = B0 u S^2 x [0,1] u B1 in product coordinates,
// with the curves of the family identified with the equator z = 0.
enum class PartitionModel { s3, s2xs1 };

std::string to_string(PartitionModel m);

struct TighteningSample {
  double tau = 0.0;
  double margin = 0.0;  // V_tau = (tau - margin, tau + margin)
};

// Piece disc x [t0, t1]; disc is one of D (z >= 0), D' (z <= 0), D+ (z >= -h), D'- (z <= -h),
// or a cap B0 (tau <= 0) / B1 (tau >= 1).
struct PartitionPiece {
  std::string disc;
  double z_lo = -1.0;
  double z_hi = 1.0;
  double t0 = 0.0;
  double t1 = 0.0;
};

struct PartitionReport {
  PartitionModel model = PartitionModel::s2xs1;
  std::array<std::vector<PartitionPiece>, 3> sets;
  double parallel_height = 0.0;
  std::int64_t grid_points = 0;
  std::int64_t covered = 0;
  double min_margin = 0.0;  // smallest gap between pieces of the same set
  bool complete() const { return covered == grid_points && min_margin > 0.0; }
};

// breaks: a_0 < ... < a_{2k-1} in [0, 1) for S^2 x S^1 (J_{2k} wraps to a_0), or the interior
// points 0 < a_1 < ... < a_{2k-1} < 1 for S^3.
PartitionReport three_chart_partition(PartitionModel model, const std::vector<TighteningSample>& family,
                                      const std::vector<double>& breaks, double parallel_height = 0.1,
                                      int grid = 200);

}  // namespace catlas
