#include "catlas/dimension_cover.hpp"

#include "box_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace catlas {

double to_double(const Rational& r) {
  return static_cast<double>(static_cast<long double>(r.numerator()) / static_cast<long double>(r.denominator()));
}

Rational floor_r(const Rational& r) {
  BigInt q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) q -= 1;
  return Rational(q);
}

std::int64_t floor_int(const Rational& r) { return static_cast<std::int64_t>(floor_r(r).numerator()); }

static Rational ceil_r(const Rational& r) { return -floor_r(-r); }

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << r.numerator();
  if (r.denominator() != 1) os << "/" << r.denominator();
  return os.str();
}

Rational parse_rational(const std::string& text) {
  auto bad = [&]() { return Error("schema", "not a rational number: '" + text + "'"); };
  if (text.empty()) throw bad();
  auto parse_int = [&](const std::string& t) {
    if (t.empty() || t.size() > 30) throw bad();
    size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) throw bad();
    BigInt v = 0;
    for (; i < t.size(); ++i) {
      if (t[i] < '0' || t[i] > '9') throw bad();
      v = v * 10 + (t[i] - '0');
    }
    return t[0] == '-' ? BigInt(-v) : v;
  };
  if (auto slash = text.find('/'); slash != std::string::npos) {
    BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) throw bad();
    return Rational(parse_int(text.substr(0, slash)), den);
  }
  if (auto dot = text.find('.'); dot != std::string::npos) {
    std::string frac = text.substr(dot + 1);
    std::string whole = text.substr(0, dot);
    bool neg = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    BigInt scale = 1;
    for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt w = parse_int(whole);
    BigInt f = frac.empty() ? BigInt(0) : parse_int(frac);
    if (!frac.empty() && (frac[0] == '-' || frac[0] == '+')) throw bad();
    Rational mag = Rational(w < 0 ? BigInt(-w) : w) + Rational(f, scale);
    return neg ? -mag : mag;
  }
  return Rational(parse_int(text));
}

bool Box::valid() const {
  if (lo.size() != hi.size() || lo.empty()) return false;
  for (size_t k = 0; k < lo.size(); ++k)
    if (!(lo[k] < hi[k])) return false;
  return true;
}

Box Box::translated(const RVec& shift) const {
  Box b = *this;
  for (size_t k = 0; k < lo.size(); ++k) {
    b.lo[k] += shift[k];
    b.hi[k] += shift[k];
  }
  return b;
}

bool boxes_intersect(const Box& a, const Box& b, std::optional<Rational> period) {
  for (int k = 0; k < a.dim(); ++k) {
    if (!period) {
      if (!(a.lo[k] < b.hi[k] && b.lo[k] < a.hi[k])) return false;
      continue;
    }
    // Some integer n with a.lo < b.hi + nL and b.lo + nL < a.hi.
    const Rational& L = *period;
    Rational n_min = floor_r((a.lo[k] - b.hi[k]) / L) + 1;
    Rational n_max = ceil_r((a.hi[k] - b.lo[k]) / L) - 1;
    if (n_min > n_max) return false;
  }
  return true;
}

bool box_contains(const Box& outer, const Box& inner, std::optional<Rational> period) {
  for (int k = 0; k < outer.dim(); ++k) {
    if (!period) {
      if (!(outer.lo[k] <= inner.lo[k] && inner.hi[k] <= outer.hi[k])) return false;
      continue;
    }
    const Rational& L = *period;
    if (outer.side(k) >= L) continue;
    Rational n = ceil_r((outer.lo[k] - inner.lo[k]) / L);
    if (!(inner.hi[k] + n * L <= outer.hi[k])) return false;
  }
  return true;
}

bool box_contains_point(const Box& box, const RVec& p, std::optional<Rational> period) {
  for (int k = 0; k < box.dim(); ++k) {
    if (!period) {
      if (!(box.lo[k] <= p[k] && p[k] < box.hi[k])) return false;
      continue;
    }
    const Rational& L = *period;
    Rational n = ceil_r((box.lo[k] - p[k]) / L);
    if (!(p[k] + n * L < box.hi[k])) return false;
  }
  return true;
}

bool regions_intersect(const RegionUnion& a, const RegionUnion& b, std::optional<Rational> period) {
  for (const auto& x : a)
    for (const auto& y : b)
      if (boxes_intersect(x, y, period)) return true;
  return false;
}

Box scaled_box(const Box& b, const Rational& factor) {
  Box out = b;
  for (int k = 0; k < b.dim(); ++k) {
    Rational mid = (b.lo[k] + b.hi[k]) / 2;
    Rational half = (b.hi[k] - b.lo[k]) / 2 * factor;
    out.lo[k] = mid - half;
    out.hi[k] = mid + half;
  }
  return out;
}

static Rational axis_gap(const Box& a, const Box& b, int k) {
  Rational g = std::max(b.lo[k] - a.hi[k], a.lo[k] - b.hi[k]);
  return g > 0 ? g : Rational(0);
}

Rational chebyshev_distance(const Box& a, const Box& b) {
  Rational m = 0;
  for (int k = 0; k < a.dim(); ++k) m = std::max(m, axis_gap(a, b, k));
  return m;
}

Rational squared_euclidean_distance(const Box& a, const Box& b) {
  Rational m = 0;
  for (int k = 0; k < a.dim(); ++k) {
    Rational g = axis_gap(a, b, k);
    m += g * g;
  }
  return m;
}

Rational squared_diameter(const Box& b) {
  Rational m = 0;
  for (int k = 0; k < b.dim(); ++k) m += b.side(k) * b.side(k);
  return m;
}

std::vector<Box> box_difference(const Box& a, const Box& b) {
  if (!boxes_intersect(a, b)) return {a};
  std::vector<Box> out;
  Box rest = a;
  for (int k = 0; k < a.dim(); ++k) {
    if (rest.lo[k] < b.lo[k]) {
      Box piece = rest;
      piece.hi[k] = b.lo[k];
      out.push_back(piece);
      rest.lo[k] = b.lo[k];
    }
    if (b.hi[k] < rest.hi[k]) {
      Box piece = rest;
      piece.lo[k] = b.hi[k];
      out.push_back(piece);
      rest.hi[k] = b.hi[k];
    }
  }
  return out;
}

namespace {

// sum_{j>l} ((d - (j - l)) / d) m_j
Rational layer_shift(int d, int l, const std::vector<std::int64_t>& m) {
  Rational shift = 0;
  for (int j = l + 1; j < d; ++j) shift += Rational(d - (j - l), d) * Rational(m[j]);
  return shift;
}

CubeId cube_from_m(int d, const Rational& s, const std::vector<std::int64_t>& m) {
  CubeId c;
  c.d = d;
  c.s = s;
  c.layers.resize(d);
  c.anchor.resize(d);
  for (int l = 0; l < d; ++l) {
    c.layers[l] = m[l] + 1;
    c.anchor[l] = s * (Rational(m[l]) + layer_shift(d, l, m));
  }
  return c;
}

void check_scale(int d, const Rational& s) {
  if (d < 1) throw Error("schema", "dimension must be positive");
  if (s <= 0) throw Error("schema", "cube size must be positive");
}

}  // namespace

Box CubeId::box() const {
  Box b;
  b.lo = anchor;
  b.hi = anchor;
  for (auto& v : b.hi) v += s;
  return b;
}

CubeId cube_from_layers(int d, const Rational& s, const std::vector<std::int64_t>& layers) {
  check_scale(d, s);
  if (static_cast<int>(layers.size()) != d) throw Error("schema", "layer index count must equal d");
  std::vector<std::int64_t> m(d);
  for (int l = 0; l < d; ++l) m[l] = layers[l] - 1;
  return cube_from_m(d, s, m);
}

CubeId cube_at(const RVec& point, int d, const Rational& s) {
  check_scale(d, s);
  if (static_cast<int>(point.size()) != d) throw Error("schema", "point dimension must equal d");
  std::vector<std::int64_t> m(d, 0);
  for (int l = d - 1; l >= 0; --l) m[l] = floor_int(point[l] / s - layer_shift(d, l, m));
  return cube_from_m(d, s, m);
}

int color_of(const CubeId& cube) {
  std::int64_t sum = 0;
  const std::int64_t mod = cube.d + 1;
  for (int l = 0; l < cube.d; ++l) sum = (sum + (l + 1) * ((cube.layers[l] - 1) % mod)) % mod;
  return static_cast<int>(((sum % mod) + mod) % mod) + 1;
}

Neighborhoods neighborhoods(const CubeId& cube) {
  Box C = cube.box();
  return {scaled_box(C, 1 + Rational(1, 4 * cube.d)), scaled_box(C, 1 + Rational(1, 2 * cube.d))};
}

void enumerate_cubes(int d, const Rational& s, const Box& window, const std::function<void(const CubeId&)>& fn) {
  check_scale(d, s);
  if (window.dim() != d) throw Error("schema", "window dimension must equal d");
  std::vector<std::int64_t> m(d, 0);
  std::function<void(int)> rec = [&](int l) {
    if (l < 0) {
      fn(cube_from_m(d, s, m));
      return;
    }
    Rational shift = layer_shift(d, l, m);
    // s(m + shift) < hi and s(m + shift + 1) > lo.
    std::int64_t lo = floor_int(window.lo[l] / s - shift - 1) + 1;
    std::int64_t hi = static_cast<std::int64_t>(ceil_r(window.hi[l] / s - shift).numerator()) - 1;
    for (std::int64_t v = lo; v <= hi; ++v) {
      m[l] = v;
      rec(l - 1);
    }
    m[l] = 0;
  };
  rec(d - 1);
}

SeparationReport separation_report(int d, const Rational& s, int color, const Box& window) {
  if (color < 1 || color > d + 1) throw Error("schema", "color must be in 1..d+1");
  std::vector<CubeId> cubes;
  enumerate_cubes(d, s, window, [&](const CubeId& c) {
    if (color_of(c) == color && box_contains(window, c.box())) cubes.push_back(c);
  });
  if (cubes.size() < 2) throw Error("window_too_small", "fewer than two cubes of this color in the window");
  SeparationReport r;
  r.d = d;
  r.s = s;
  r.color = color;
  r.cube_count = static_cast<int>(cubes.size());
  r.n2_disjoint = true;
  bool first = true;
  std::vector<Box> boxes, n2;
  for (const auto& c : cubes) {
    boxes.push_back(c.box());
    n2.push_back(neighborhoods(c).N2);
  }
  for (size_t i = 0; i < cubes.size(); ++i) {
    for (size_t j = i + 1; j < cubes.size(); ++j) {
      Rational cheb = chebyshev_distance(boxes[i], boxes[j]);
      Rational eu = squared_euclidean_distance(boxes[i], boxes[j]);
      if (first || cheb < r.min_chebyshev) {
        r.min_chebyshev = cheb;
        r.witness_a = cubes[i];
        r.witness_b = cubes[j];
      }
      if (first || eu < r.min_euclidean_sq) r.min_euclidean_sq = eu;
      first = false;
      // Closed N2 boxes must be disjoint: some axis with a strictly positive gap.
      bool separated = false;
      for (int k = 0; k < d && !separated; ++k)
        separated = n2[i].hi[k] < n2[j].lo[k] || n2[j].hi[k] < n2[i].lo[k];
      if (!separated) r.n2_disjoint = false;
    }
  }
  r.min_euclidean = std::sqrt(to_double(r.min_euclidean_sq));
  return r;
}

namespace {

struct CubeD {
  detail::DBox C, N1, N2;
};

// Exact classification with floating-point prefilters.
std::optional<RegionType> classify_fast(const RegionUnion& region, const std::vector<detail::DBox>& rd,
                                        const IncomingCube& cube, const CubeD& cd,
                                        const std::optional<Rational>& period) {
  bool in_n1 = true, in_n2 = true, meets_c = false, meets_n1 = false;
  for (size_t i = 0; i < region.size(); ++i) {
    const Box& b = region[i];
    in_n1 = in_n1 && detail::fast_contains(cube.N1, cd.N1, b, rd[i], period);
    in_n2 = in_n2 && detail::fast_contains(cube.N2, cd.N2, b, rd[i], period);
    meets_c = meets_c || detail::fast_intersect(cube.C, cd.C, b, rd[i], period);
    meets_n1 = meets_n1 || detail::fast_intersect(cube.N1, cd.N1, b, rd[i], period);
  }
  if (in_n1) return RegionType::inside_n1;
  if (in_n2 && !meets_c) return RegionType::inside_n2_off_cube;
  if (!meets_n1) return RegionType::outside_n1;
  return std::nullopt;
}

std::vector<detail::DBox> dboxes(const RegionUnion& r) {
  std::vector<detail::DBox> out;
  out.reserve(r.size());
  for (const auto& b : r) out.push_back(detail::to_dbox(b));
  return out;
}

std::string describe(const Box& b) {
  std::string s = "[";
  for (int k = 0; k < b.dim(); ++k) s += (k ? ", " : "") + to_string(b.lo[k]) + ".." + to_string(b.hi[k]);
  return s + ")";
}

}  // namespace

std::optional<RegionType> classify_region(const RegionUnion& region, const IncomingCube& cube,
                                          std::optional<Rational> period) {
  CubeD cd{detail::to_dbox(cube.C), detail::to_dbox(cube.N1), detail::to_dbox(cube.N2)};
  return classify_fast(region, dboxes(region), cube, cd, period);
}

MergeResult merge_generation(std::vector<RegionUnion> existing, const std::vector<IncomingCube>& incoming,
                             std::optional<Rational> period, std::optional<Rational> delta_next) {
  MergeResult out;
  if (incoming.empty() && existing.empty()) return out;
  const int d = incoming.empty() ? existing.front().front().dim() : incoming.front().C.dim();
  if (d > 3) throw Error("schema", "merging supports d <= 3");

  std::vector<CubeD> cd;
  cd.reserve(incoming.size());
  for (const auto& c : incoming) cd.push_back({detail::to_dbox(c.C), detail::to_dbox(c.N1), detail::to_dbox(c.N2)});
  std::vector<std::vector<detail::DBox>> ed;
  ed.reserve(existing.size());
  for (const auto& r : existing) ed.push_back(dboxes(r));

  detail::MultiIndex n2_index(d, period);
  for (size_t b = 0; b < incoming.size(); ++b) {
    for (int c : n2_index.query(cd[b].N2))
      if (detail::fast_intersect(incoming[c].N2, cd[c].N2, incoming[b].N2, cd[b].N2, period))
        throw Error("precondition", "N2 neighborhoods of incoming cubes " + std::to_string(c) + " and " +
                                        std::to_string(b) + " intersect");
    n2_index.insert(cd[b].N2, static_cast<int>(b));
  }

  out.events.resize(incoming.size());
  for (size_t b = 0; b < incoming.size(); ++b) out.events[b].incoming = static_cast<int>(b);
  std::vector<int> owner(existing.size(), -1);
  for (size_t r = 0; r < existing.size(); ++r) {
    std::vector<int> candidates;
    for (const auto& box : ed[r]) {
      auto q = n2_index.query(box);
      candidates.insert(candidates.end(), q.begin(), q.end());
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (int b : candidates) {
      auto type = classify_fast(existing[r], ed[r], incoming[b], cd[b], period);
      if (!type)
        throw Error("trichotomy_violation", "region " + std::to_string(r) + " (first box " +
                                                describe(existing[r].front()) + ") against incoming cube " +
                                                std::to_string(b) + " " + describe(incoming[b].C));
      if (*type == RegionType::outside_n1) continue;
      if (owner[r] >= 0 && owner[r] != b)
        throw Error("postcondition", "region " + std::to_string(r) + " claimed by two incoming cubes");
      owner[r] = b;
      if (*type == RegionType::inside_n1)
        out.events[b].absorbed.push_back(static_cast<int>(r));
      else
        out.events[b].attached.push_back(static_cast<int>(r));
    }
  }

  std::vector<std::vector<detail::DBox>> outd;
  for (size_t b = 0; b < incoming.size(); ++b) {
    RegionUnion K{incoming[b].N1};
    std::vector<detail::DBox> kd{cd[b].N1};
    for (int r : out.events[b].attached) {
      K.insert(K.end(), existing[r].begin(), existing[r].end());
      kd.insert(kd.end(), ed[r].begin(), ed[r].end());
    }
    for (size_t i = 0; i < K.size(); ++i)
      if (!detail::fast_contains(incoming[b].N2, cd[b].N2, K[i], kd[i], period))
        throw Error("postcondition", "merged region leaves N2 of incoming cube " + std::to_string(b));
    for (int r : out.events[b].absorbed)
      for (size_t i = 0; i < existing[r].size(); ++i)
        if (!detail::fast_contains(incoming[b].N1, cd[b].N1, existing[r][i], ed[r][i], period))
          throw Error("postcondition", "absorbed region not inside N1");
    if (delta_next && !(squared_diameter(incoming[b].N2) < *delta_next * *delta_next))
      throw Error("postcondition", "merged region diameter not below delta");
    out.regions.push_back(std::move(K));
    outd.push_back(std::move(kd));
    out.origin.push_back(static_cast<int>(b));
  }
  const size_t merged_count = out.regions.size();
  for (size_t r = 0; r < existing.size(); ++r) {
    if (owner[r] >= 0) continue;
    out.regions.push_back(std::move(existing[r]));
    outd.push_back(std::move(ed[r]));
    out.origin.push_back(-1 - static_cast<int>(r));
    ++out.retained;
  }

  // Disjointness of the output family. Existing regions are pairwise disjoint by assumption, so
  // only pairs involving a merged region are tested.
  detail::MultiIndex all(d, period);
  std::vector<std::pair<int, int>> refs;  // (region, box)
  for (size_t i = 0; i < out.regions.size(); ++i)
    for (size_t j = 0; j < out.regions[i].size(); ++j) {
      all.insert(outd[i][j], static_cast<int>(refs.size()));
      refs.push_back({static_cast<int>(i), static_cast<int>(j)});
    }
  for (size_t c0 = 0; c0 < refs.size(); ++c0) {
    auto [i, j] = refs[c0];
    for (int c : all.query_larger(outd[i][j])) {
      auto [ri, bj] = refs[c];
      if (ri == i || (static_cast<size_t>(ri) >= merged_count && static_cast<size_t>(i) >= merged_count)) continue;
      if (detail::fast_intersect(out.regions[ri][bj], outd[ri][bj], out.regions[i][j], outd[i][j], period))
        throw Error("postcondition", "output regions " + std::to_string(ri) + " and " + std::to_string(i) +
                                         " intersect");
    }
  }
  return out;
}

}  // namespace catlas
