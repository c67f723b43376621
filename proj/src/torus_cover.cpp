#include "catlas/dimension_cover.hpp"

#include "box_index.hpp"

#include <cmath>
#include <set>

namespace catlas {

namespace {

const Rational kPeriod(1);

Box image_box(const TorusChart& ch, const Box& u) {
  Box b = u;
  for (int k = 0; k < u.dim(); ++k) {
    b.lo[k] = ch.offset[k] + ch.rho * u.lo[k];
    b.hi[k] = ch.offset[k] + ch.rho * u.hi[k];
  }
  return b;
}

// Open chart image shrunk by margin on every side.
Box open_image(const TorusChart& ch, const Rational& margin) {
  Box b;
  for (size_t k = 0; k < ch.offset.size(); ++k) {
    b.lo.push_back(ch.offset[k] - ch.rho + margin);
    b.hi.push_back(ch.offset[k] + ch.rho - margin);
  }
  return b;
}

bool open_contains(const TorusChart& ch, const RVec& p) {
  for (size_t k = 0; k < p.size(); ++k) {
    // Some integer n with o - rho < p + n < o + rho.
    Rational lo = ch.offset[k] - ch.rho - p[k];
    Rational hi = ch.offset[k] + ch.rho - p[k];
    Rational n = floor_r(lo) + 1;
    if (!(n < hi)) return false;
  }
  return true;
}

template <class F>
void for_each_shift(int d, F&& fn) {
  std::vector<int> n(d, -1);
  while (true) {
    RVec shift(d);
    for (int k = 0; k < d; ++k) shift[k] = Rational(n[k]);
    fn(shift);
    int k = 0;
    while (k < d && ++n[k] > 1) {
      n[k] = -1;
      ++k;
    }
    if (k == d) break;
  }
}

void validate(int d, const std::vector<TorusChart>& charts) {
  if (d < 1 || d > 3) throw Error("schema", "torus dimension must be 1, 2 or 3");
  if (charts.empty()) throw Error("schema", "at least one chart required");
  for (const auto& ch : charts) {
    if (static_cast<int>(ch.offset.size()) != d) throw Error("schema", "chart '" + ch.name + "' has wrong offset dimension");
    if (!(ch.rho > 0)) throw Error("schema", "chart '" + ch.name + "' needs rho > 0");
    if (!(ch.rho < Rational(1, 2)))
      throw Error("chart_not_injective", "chart '" + ch.name + "' needs rho < 1/2 to embed its unit ball");
  }
}

std::vector<ChartScale> chart_scales(int d, const std::vector<TorusChart>& charts) {
  const int l = static_cast<int>(charts.size());
  std::vector<ChartScale> out(l);
  const Rational n1_growth = 1 + Rational(1, 4 * d);
  const Rational n2_growth = 1 + Rational(1, 2 * d);
  {
    // Coarsest chart: 2 rho (1 + (1 + 1/(4d)) s) <= 1 keeps every used N2 box embedded.
    const Rational& rho = charts.back().rho;
    Rational bound = 2 * rho * n1_growth / (1 - 2 * rho);
    std::int64_t n = std::max<std::int64_t>(1, static_cast<std::int64_t>(-floor_r(-bound).numerator()));
    out[l - 1].s = Rational(1, n);
  }
  out[l - 1].delta = charts.back().rho * out[l - 1].s / (8 * d);
  for (int i = l - 2; i >= 0; --i) {
    // diam N2 = rho (1 + 1/(2d)) s sqrt(d) < delta_{i+1}, i.e. n^2 > B.
    const Rational& rho = charts[i].rho;
    Rational B = rho * rho * n2_growth * n2_growth * d / (out[i + 1].delta * out[i + 1].delta);
    std::int64_t n = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(std::sqrt(to_double(B)))));
    while (!(Rational(n) * n > B)) ++n;
    while (n > 1 && Rational(n - 1) * (n - 1) > B) --n;
    out[i].s = Rational(1, n);
    out[i].delta = rho * out[i].s / (8 * d);
    if (!(2 * rho * (1 + n1_growth * out[i].s) <= 1))
      throw Error("chart_not_injective", "chart '" + charts[i].name + "' is not injective at its scale");
  }
  return out;
}

struct ChartCube {
  int color = 0;
  IncomingCube boxes;
};

std::vector<ChartCube> responsible_cubes(int d, const std::vector<TorusChart>& charts, int k, const ChartScale& scale) {
  // Any positive margin is conservative; a small one keeps the extra cubes along image edges few.
  const Rational margin = charts[k].rho * scale.s / 64;
  Box unit;
  for (int i = 0; i < d; ++i) {
    unit.lo.push_back(Rational(0));
    unit.hi.push_back(Rational(1));
  }
  std::vector<Box> uncovered{unit};
  for (size_t c = k + 1; c < charts.size(); ++c) {
    Box img = open_image(charts[c], margin);
    if (!img.valid()) continue;
    for_each_shift(d, [&](const RVec& shift) {
      Box moved = img.translated(shift);
      std::vector<Box> next;
      for (const auto& piece : uncovered) {
        auto diff = box_difference(piece, moved);
        next.insert(next.end(), diff.begin(), diff.end());
      }
      uncovered = std::move(next);
    });
  }

  std::set<std::vector<std::int64_t>> seen;
  std::vector<ChartCube> out;
  const TorusChart& ch = charts[k];
  for (const auto& piece : uncovered) {
    for_each_shift(d, [&](const RVec& shift) {
      Box w = piece.translated(shift);
      for (int i = 0; i < d; ++i) {
        w.lo[i] = std::max(Rational(-1), (w.lo[i] - ch.offset[i]) / ch.rho);
        w.hi[i] = std::min(Rational(1), (w.hi[i] - ch.offset[i]) / ch.rho);
      }
      if (!w.valid()) return;
      enumerate_cubes(d, scale.s, w, [&](const CubeId& cube) {
        if (!seen.insert(cube.layers).second) return;
        auto nb = neighborhoods(cube);
        out.push_back({color_of(cube), {image_box(ch, cube.box()), image_box(ch, nb.N1), image_box(ch, nb.N2)}});
      });
    });
  }
  return out;
}

bool family_disjoint(int d, const std::vector<CoverRegion>& family) {
  detail::MultiIndex index(d, kPeriod);
  std::vector<const Box*> boxes;
  std::vector<detail::DBox> dboxes;
  std::vector<size_t> owner;
  for (size_t i = 0; i < family.size(); ++i)
    for (const auto& box : family[i].boxes) {
      dboxes.push_back(detail::to_dbox(box));
      index.insert(dboxes.back(), static_cast<int>(boxes.size()));
      boxes.push_back(&box);
      owner.push_back(i);
    }
  for (size_t a = 0; a < boxes.size(); ++a)
    for (int b : index.query_larger(dboxes[a]))
      if (owner[b] != owner[a] && detail::fast_intersect(*boxes[a], dboxes[a], *boxes[b], dboxes[b], kPeriod))
        return false;
  return true;
}

// Marks the grid points k / R inside a box on the unit torus.
void mark_grid(int d, int R, const Box& b, std::vector<char>& hit) {
  std::vector<std::int64_t> first(d), count(d);
  for (int k = 0; k < d; ++k) {
    std::int64_t a = static_cast<std::int64_t>(-floor_r(-(b.lo[k] * R)).numerator());
    std::int64_t e = static_cast<std::int64_t>(-floor_r(-(b.hi[k] * R)).numerator());
    count[k] = std::min<std::int64_t>(e - a, R);
    first[k] = a;
    if (count[k] <= 0) return;
  }
  std::vector<std::int64_t> c(d, 0);
  while (true) {
    std::int64_t idx = 0;
    for (int k = d - 1; k >= 0; --k) idx = idx * R + (((first[k] + c[k]) % R) + R) % R;
    hit[idx] = 1;
    int k = 0;
    while (k < d && ++c[k] >= count[k]) {
      c[k] = 0;
      ++k;
    }
    if (k == d) break;
  }
}

}  // namespace

bool charts_cover_grid(int d, const std::vector<TorusChart>& charts, int R) {
  std::vector<std::int64_t> c(d, 0);
  RVec p(d);
  while (true) {
    for (int k = 0; k < d; ++k) p[k] = Rational(c[k], R);
    bool inside = false;
    for (const auto& ch : charts)
      if (open_contains(ch, p)) {
        inside = true;
        break;
      }
    if (!inside) return false;
    int k = 0;
    while (k < d && ++c[k] >= R) {
      c[k] = 0;
      ++k;
    }
    if (k == d) break;
  }
  return true;
}

CoverPlan torus_cover(int d, const std::vector<TorusChart>& charts, int R) {
  validate(d, charts);
  if (R < 1 || std::pow(static_cast<double>(R), d) > 1e7) throw Error("schema", "grid resolution out of range");
  CoverPlan plan;
  plan.d = d;
  plan.charts = charts;
  plan.charts_cover = charts_cover_grid(d, charts, R);
  if (!plan.charts_cover) throw Error("charts_do_not_cover", "open chart images miss a grid point");
  plan.scales = chart_scales(d, charts);

  const int l = static_cast<int>(charts.size());
  std::vector<std::vector<ChartCube>> cubes(l);
  for (int k = 0; k < l; ++k) {
    cubes[k] = responsible_cubes(d, charts, k, plan.scales[k]);
    plan.scales[k].cubes_used = static_cast<int>(cubes[k].size());
  }

  plan.families.resize(d + 1);
  for (int color = 1; color <= d + 1; ++color) {
    std::vector<CoverRegion> regions;
    for (int k = 0; k < l; ++k) {
      std::vector<IncomingCube> incoming;
      for (const auto& c : cubes[k])
        if (c.color == color) incoming.push_back(c.boxes);
      MergeSummary summary{color, k, static_cast<int>(incoming.size()), 0, 0, 0};
      if (k == 0) {
        for (const auto& c : incoming) regions.push_back({{c.C}, 0});
      } else {
        std::vector<RegionUnion> existing;
        existing.reserve(regions.size());
        for (auto& r : regions) existing.push_back(std::move(r.boxes));
        std::optional<Rational> delta;
        if (k + 1 < l) delta = plan.scales[k + 1].delta;
        MergeResult merged = merge_generation(std::move(existing), incoming, kPeriod, delta);
        std::vector<CoverRegion> next;
        next.reserve(merged.regions.size());
        for (size_t i = 0; i < merged.regions.size(); ++i) {
          int origin = merged.origin[i];
          int chart = origin >= 0 ? k : regions[-1 - origin].chart;
          next.push_back({std::move(merged.regions[i]), chart});
        }
        for (const auto& e : merged.events) {
          summary.absorbed += static_cast<int>(e.absorbed.size());
          summary.attached += static_cast<int>(e.attached.size());
        }
        summary.retained = merged.retained;
        regions = std::move(next);
      }
      plan.log.push_back(summary);
    }
    plan.families[color - 1] = std::move(regions);
  }

  plan.families_disjoint = true;
  for (const auto& family : plan.families) plan.families_disjoint = plan.families_disjoint && family_disjoint(d, family);

  std::vector<char> hit(static_cast<size_t>(std::pow(static_cast<double>(R), d)), 0);
  for (const auto& family : plan.families)
    for (const auto& r : family)
      for (const auto& b : r.boxes) mark_grid(d, R, b, hit);
  plan.grid.resolution = R;
  plan.grid.points = static_cast<std::int64_t>(hit.size());
  for (char h : hit) plan.grid.covered += h;
  return plan;
}

}  // namespace catlas
