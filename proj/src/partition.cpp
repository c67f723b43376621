#include "catlas/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace catlas {

std::string to_string(PartitionModel m) { return m == PartitionModel::s3 ? "S3" : "S2xS1"; }

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

struct Interval {
  double lo, hi;  // hi may exceed 1 when the interval wraps on S^1
};

bool inside_neighbourhood(const Interval& J, const TighteningSample& v, bool circular) {
  for (double shift : circular ? std::vector<double>{-1.0, 0.0, 1.0} : std::vector<double>{0.0}) {
    const double c = v.tau + shift;
    if (J.lo > c - v.margin && J.hi < c + v.margin) return true;
  }
  return false;
}

double tau_gap(const PartitionPiece& a, const PartitionPiece& b, bool circular) {
  auto gap = [](double a0, double a1, double b0, double b1) { return std::max({0.0, b0 - a1, a0 - b1}); };
  double g = gap(a.t0, a.t1, b.t0, b.t1);
  if (circular) g = std::min({g, gap(a.t0 + 1, a.t1 + 1, b.t0, b.t1), gap(a.t0 - 1, a.t1 - 1, b.t0, b.t1)});
  return g;
}

double latitude_gap(const PartitionPiece& a, const PartitionPiece& b) {
  auto lat = [](double z) { return std::asin(std::clamp(z, -1.0, 1.0)); };
  return std::max({0.0, lat(b.z_lo) - lat(a.z_hi), lat(a.z_lo) - lat(b.z_hi)});
}

bool contains(const PartitionPiece& p, double t, double z, bool circular) {
  if (z < p.z_lo || z > p.z_hi) return false;
  if (t >= p.t0 && t <= p.t1) return true;
  return circular && t + 1 >= p.t0 && t + 1 <= p.t1;
}

}  // namespace

PartitionReport three_chart_partition(PartitionModel model, const std::vector<TighteningSample>& family,
                                      const std::vector<double>& breaks, double parallel_height, int grid) {
  const bool circular = model == PartitionModel::s2xs1;
  if (!(parallel_height > 0.0 && parallel_height < 1.0)) throw Error("precondition", "parallel height must lie in (0, 1)");
  if (grid < 2) throw Error("precondition", "grid must have at least 2 points per axis");
  for (size_t i = 1; i < breaks.size(); ++i)
    if (!(breaks[i] > breaks[i - 1])) throw Error("precondition", "subdivision points must increase");
  for (double a : breaks)
    if (circular ? (a < 0.0 || a >= 1.0) : (a <= 0.0 || a >= 1.0))
      throw Error("precondition", "subdivision point out of range");

  std::vector<Interval> J;
  if (circular) {
    for (size_t i = 0; i + 1 < breaks.size(); ++i) J.push_back({breaks[i], breaks[i + 1]});
    if (!breaks.empty()) J.push_back({breaks.back(), breaks.front() + 1.0});
  } else {
    double lo = 0.0;
    for (double a : breaks) {
      J.push_back({lo, a});
      lo = a;
    }
    J.push_back({lo, 1.0});
  }
  if (J.size() < 2 || J.size() % 2 != 0)
    throw Error("odd_subdivision", "the construction needs an even number of intervals, got " + std::to_string(J.size()));
  if (!circular)
    for (const auto& v : family)
      if (v.tau <= 0.0 || v.tau >= 1.0)
        throw Error("curves_meet_caps", "tightening family reaches the caps B0, B1");
  for (size_t i = 0; i < J.size(); ++i) {
    const bool ok = std::any_of(family.begin(), family.end(),
                                [&](const TighteningSample& v) { return inside_neighbourhood(J[i], v, circular); });
    if (!ok) throw Error("subdivision_too_coarse", "J_" + std::to_string(i + 1) + " lies in no tight neighbourhood");
  }

  const double h = parallel_height;
  PartitionReport r;
  r.model = model;
  r.parallel_height = h;
  for (size_t i = 0; i < J.size(); ++i) {
    const bool odd = i % 2 == 0;  // J_1, J_3, ...
    if (odd) {
      r.sets[0].push_back({"D+", -h, 1.0, J[i].lo, J[i].hi});
      r.sets[2].push_back({"D'-", -1.0, -h, J[i].lo, J[i].hi});
    } else {
      r.sets[1].push_back({"D'", -1.0, 0.0, J[i].lo, J[i].hi});
      r.sets[2].push_back({"D", 0.0, 1.0, J[i].lo, J[i].hi});
    }
  }
  if (!circular) {
    r.sets[0].push_back({"B1", -1.0, 1.0, 1.0, 1.25});
    r.sets[1].push_back({"B0", -1.0, 1.0, -0.25, 0.0});
  }

  // Coverage on a product grid; for S^3 the grid extends into both caps.
  const double t_lo = circular ? 0.0 : -0.25, t_hi = circular ? 1.0 : 1.25;
  for (int a = 0; a < grid; ++a) {
    const double t = circular ? t_lo + (t_hi - t_lo) * a / grid : t_lo + (t_hi - t_lo) * a / (grid - 1);
    for (int b = 0; b < grid; ++b) {
      const double z = -1.0 + 2.0 * b / (grid - 1);
      ++r.grid_points;
      bool hit = false;
      for (const auto& set : r.sets)
        for (const auto& p : set) hit = hit || contains(p, t, z, circular);
      r.covered += hit;
    }
  }

  // Pieces of one set are separated in the product metric (tau scaled to angle).
  r.min_margin = std::numbers::pi;
  for (const auto& set : r.sets)
    for (size_t i = 0; i < set.size(); ++i)
      for (size_t j = i + 1; j < set.size(); ++j) {
        const double gt = kTwoPi * tau_gap(set[i], set[j], circular);
        const double gl = latitude_gap(set[i], set[j]);
        r.min_margin = std::min(r.min_margin, std::hypot(gt, gl));
      }
  return r;
}

}  // namespace catlas
