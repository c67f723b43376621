#include "catlas/foliation.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace catlas {

namespace odeint = boost::numeric::odeint;

std::string to_string(LimitKind k) {
  switch (k) {
    case LimitKind::singular_point: return "singular_point";
    case LimitKind::cycle: return "cycle";
    case LimitKind::polycycle: return "polycycle";
    case LimitKind::budget_exhausted: return "budget_exhausted";
  }
  return "budget_exhausted";
}

namespace {

using S3 = std::array<double, 3>;
using S6 = std::array<double, 6>;

V3 to_v3(const double* x) { return V3(x[0], x[1], x[2]); }

// Ambient field whose flow preserves the unit sphere and attracts nearby points to it.
V3 ambient(const TangentField& Y, const V3& x, double sign) {
  const double r = x.norm();
  const V3 u = x / r;
  return sign * Y(u) + (1.0 - r) * u;
}

std::vector<V3> fibonacci(int n) {
  std::vector<V3> pts;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    pts.emplace_back(r * std::cos(golden * i), r * std::sin(golden * i), z);
  }
  return pts;
}

// Transversal through a point: great circle perpendicular to the flow there.
struct Section {
  V3 x;  // base point
  V3 m;  // plane normal, along the flow
  V3 w;  // tangent direction of the transversal
  double coordinate(const V3& q) const { return std::atan2(w.dot(q), x.dot(q)); }
};

Section make_section(const TangentField& Y, const V3& x, double sign) {
  Section s;
  s.x = x.normalized();
  s.m = (sign * Y(s.x)).normalized();
  s.w = s.m.cross(s.x);
  return s;
}

constexpr double kRecordSpacing = 5e-3;
constexpr size_t kMaxRecorded = 20000;

bool far_from_singular(const V3& q, const std::vector<SingularPoint>& singular) {
  for (const auto& p : singular)
    if ((p.position - q).norm() < 1e-2) return false;
  return true;
}

}  // namespace

Orbit trace_orbit(const TangentField& Y, const V3& x0, Direction dir, const std::vector<SingularPoint>& singular,
                  const FoliationParams& params, int origin) {
  const double sign = dir == Direction::forward ? 1.0 : -1.0;
  auto sys = [&](const S3& x, S3& dx, double) {
    const V3 f = ambient(Y, to_v3(x.data()), sign);
    dx = {f.x(), f.y(), f.z()};
  };
  auto stepper = odeint::make_dense_output(1e-10, 1e-8, odeint::runge_kutta_dopri5<S3>());
  const V3 start = x0.normalized();
  stepper.initialize(S3{start.x(), start.y(), start.z()}, 0.0, 1e-3);

  Orbit orbit;
  orbit.points.push_back(start);
  bool left_origin = origin < 0;

  std::optional<Section> section;
  double section_time = 0.0;
  std::vector<double> crossings;
  double last_m = 0.0;
  std::vector<int> saddle_visits(singular.size(), 0);
  std::vector<char> inside_saddle(singular.size(), 0);

  auto finish_at = [&](const V3& x, double t) {
    orbit.points.push_back(x);
    orbit.time = t;
  };

  for (long step = 0; step < 4000000; ++step) {
    auto [t0, t1] = stepper.do_step(sys);
    const V3 x = to_v3(stepper.current_state().data()).normalized();
    if (!x.allFinite()) break;

    // Basin checks at the step end and midpoint.
    S3 mid{};
    stepper.calc_state(0.5 * (t0 + t1), mid);
    const V3 xm = to_v3(mid.data()).normalized();
    for (size_t i = 0; i < singular.size(); ++i) {
      const double d = std::min((singular[i].position - x).norm(), (singular[i].position - xm).norm());
      if (static_cast<int>(i) == origin && !left_origin) {
        if ((singular[i].position - x).norm() > 2 * params.basin_radius) left_origin = true;
        continue;
      }
      if (d < params.basin_radius) {
        orbit.limit = LimitKind::singular_point;
        orbit.singular = static_cast<int>(i);
        finish_at(singular[i].position, t1);
        return orbit;
      }
      if (singular[i].type == SingularType::saddle) {
        const bool near = d < 1e-2;
        if (near && !inside_saddle[i]) ++saddle_visits[i];
        inside_saddle[i] = near;
      }
    }

    if (orbit.points.size() < kMaxRecorded && (x - orbit.points.back()).norm() > kRecordSpacing)
      orbit.points.push_back(x);

    // Transversal returns.
    if (!section || (t1 - section_time > 60.0 && crossings.size() < 2)) {
      if (t1 > 1.0 && Y(x).norm() > 1e-6) {
        section = make_section(Y, x, sign);
        section_time = t1;
        crossings.clear();
        last_m = 0.0;
      }
    } else {
      const double m1 = section->m.dot(x);
      if (last_m < 0 && m1 >= 0 && section->x.dot(x) > 0.9) {
        double a = t0, b = t1;
        S3 s{};
        for (int it = 0; it < 60; ++it) {
          const double c = 0.5 * (a + b);
          stepper.calc_state(c, s);
          if (section->m.dot(to_v3(s.data())) < 0) a = c; else b = c;
        }
        stepper.calc_state(b, s);
        const V3 q = to_v3(s.data()).normalized();
        crossings.push_back(section->coordinate(q));
        const size_t k = crossings.size();
        // Returns converging next to a weak focus are not cycles.
        if (k >= 2 && std::abs(crossings[k - 1] - crossings[k - 2]) < params.tol_cycle &&
            far_from_singular(q, singular)) {
          orbit.limit = LimitKind::cycle;
          orbit.cycle_point = q;
          finish_at(q, b);
          return orbit;
        }
      }
      last_m = m1;
    }
    if (t1 > params.time_budget) {
      orbit.time = t1;
      break;
    }
  }
  orbit.points.push_back(to_v3(stepper.current_state().data()).normalized());
  for (int v : saddle_visits)
    if (v >= 3) orbit.limit = LimitKind::polycycle;
  return orbit;
}

ReturnMap return_map(const TangentField& Y, const V3& x, double s, double max_time) {
  const Section sec = make_section(Y, x, 1.0);
  const V3 p0 = std::cos(s) * sec.x + std::sin(s) * sec.w;
  const V3 v0 = -std::sin(s) * sec.x + std::cos(s) * sec.w;
  auto sys = [&](const S6& st, S6& ds, double) {
    const V3 q = to_v3(st.data());
    const V3 v = to_v3(st.data() + 3);
    const V3 f = ambient(Y, q, 1.0);
    const double h = 1e-6 / std::max(v.norm(), 1e-300);
    const V3 dv = (ambient(Y, q + h * v, 1.0) - ambient(Y, q - h * v, 1.0)) / (2 * h);
    ds = {f.x(), f.y(), f.z(), dv.x(), dv.y(), dv.z()};
  };
  auto stepper = odeint::make_dense_output(1e-12, 1e-11, odeint::runge_kutta_dopri5<S6>());
  stepper.initialize(S6{p0.x(), p0.y(), p0.z(), v0.x(), v0.y(), v0.z()}, 0.0, 1e-3);
  ReturnMap out;
  out.polyline.push_back(p0);
  double last_m = sec.m.dot(p0);
  bool armed = false;
  while (stepper.current_time() < max_time) {
    auto [t0, t1] = stepper.do_step(sys);
    const V3 q = to_v3(stepper.current_state().data());
    if ((q - out.polyline.back()).norm() > kRecordSpacing) out.polyline.push_back(q.normalized());
    const double m1 = sec.m.dot(q);
    if (!armed && sec.x.dot(q) < 0.95) armed = true;
    if (!armed && m1 < 0) armed = true;
    if (armed && last_m < 0 && m1 >= 0 && sec.x.dot(q) > 0.5) {
      double a = t0, b = t1;
      S6 st{};
      for (int it = 0; it < 80; ++it) {
        const double c = 0.5 * (a + b);
        stepper.calc_state(c, st);
        if (sec.m.dot(to_v3(st.data())) < 0) a = c; else b = c;
      }
      stepper.calc_state(b, st);
      const V3 qc = to_v3(st.data());
      const V3 V = to_v3(st.data() + 3);
      const V3 F = ambient(Y, qc, 1.0);
      const V3 delta = V - F * (sec.m.dot(V) / sec.m.dot(F));
      const double cx = sec.x.dot(qc), cw = sec.w.dot(qc);
      const V3 grad = (cx * sec.w - cw * sec.x) / (cx * cx + cw * cw);
      out.value = std::atan2(cw, cx);
      out.derivative = grad.dot(delta);
      out.period = b;
      out.polyline.push_back(qc.normalized());
      return out;
    }
    last_m = m1;
  }
  throw Error("no_return", "orbit does not return to the transversal");
}

std::vector<CycleRecord> find_limit_cycles(const TangentField& Y, const std::vector<SingularPoint>& singular,
                                           const FoliationParams& params) {
  std::vector<CycleRecord> cycles;
  TangentField reversed = Y;
  reversed.field = [f = Y.field](const V3& u) -> V3 { return -f(u); };
  auto near_known = [&](const V3& q, double tol) {
    for (const auto& c : cycles)
      for (const V3& p : c.polyline)
        if ((p - q).norm() < tol) return true;
    return false;
  };
  for (const V3& seed : fibonacci(params.cycle_seeds)) {
    bool near_singular = false;
    for (const auto& p : singular) near_singular = near_singular || (p.position - seed).norm() < 1e-3;
    if (near_singular || Y(seed).norm() < 1e-9) continue;
    for (Direction dir : {Direction::forward, Direction::backward}) {
      Orbit o = trace_orbit(Y, seed, dir, singular, params);
      if (o.limit != LimitKind::cycle || near_known(o.cycle_point, 2e-2)) continue;

      // Newton on P(s) - s for the transversal through the detected return. Cycles found
      // backward are repelling and are solved on the reversed field, where they attract.
      const TangentField& Yd = dir == Direction::forward ? Y : reversed;
      const V3 base = o.cycle_point;
      double s = 0.0;
      ReturnMap P;
      try {
        P = return_map(Yd, base, s);
        for (int it = 0; it < 100; ++it) {
          const double D = P.value - s;
          const double slope = P.derivative - 1.0;
          if (std::abs(D) < 1e-15 || std::abs(slope) < 1e-14) break;
          double step = -D / slope;
          step = std::clamp(step, -0.05, 0.05);
          s += step;
          P = return_map(Yd, base, s);
          if (std::abs(step) < 1e-14) break;
        }
        // Near-degenerate cycles: solve P'(s) = 1 instead, which has a simple root.
        if (std::abs(P.derivative - 1.0) < 1e-3) {
          double s2 = s;
          ReturnMap P2 = P;
          for (int it = 0; it < 30; ++it) {
            const double h = 1e-5;
            const double d2 = (return_map(Yd, base, s2 + h).derivative - return_map(Yd, base, s2 - h).derivative) / (2 * h);
            if (std::abs(d2) < 1e-12) break;
            const double step = std::clamp(-(P2.derivative - 1.0) / d2, -0.01, 0.01);
            s2 += step;
            P2 = return_map(Yd, base, s2);
            if (std::abs(step) < 1e-13) break;
          }
          if (std::abs(P2.value - s2) < 1e-8 && std::abs(P2.derivative - 1.0) < std::abs(P.derivative - 1.0)) {
            s = s2;
            P = P2;
          }
        }
      } catch (const Error&) {
        continue;
      }
      if (std::abs(P.value - s) > 1e-8) continue;
      const double h = 1e-4;
      CycleRecord c;
      const Section sec = make_section(Yd, base, 1.0);
      c.point = (std::cos(s) * sec.x + std::sin(s) * sec.w).normalized();
      c.period = P.period;
      c.lambda = dir == Direction::forward ? P.derivative : 1.0 / P.derivative;
      try {
        c.second_derivative =
            (return_map(Yd, base, s + h).derivative - return_map(Yd, base, s - h).derivative) / (2 * h);
      } catch (const Error&) {
        continue;
      }
      // Inverse map: P'' = -Q'' / Q'^3 at the fixed point.
      if (dir == Direction::backward) c.second_derivative = -c.second_derivative / std::pow(P.derivative, 3);
      c.degenerate = std::abs(c.lambda - 1.0) <= params.tol_cycle;
      c.stability = c.degenerate ? "semistable" : c.lambda < 1.0 ? "attracting" : "repelling";
      c.polyline = P.polyline;
      if (c.period < 1e-6 || !far_from_singular(c.point, singular) || near_known(c.point, 1e-3)) continue;
      if (c.degenerate) {
        // Closed orbits on both sides at a fixed offset: a band of cycles, not an isolated one.
        bool band = true;
        for (double d : {-1e-2, 1e-2}) {
          try {
            band = band && std::abs(return_map(Yd, base, s + d).value - (s + d)) < 1e-9;
          } catch (const Error&) {
            band = false;
          }
        }
        if (band) {
          if (std::any_of(cycles.begin(), cycles.end(), [](const CycleRecord& k) { return !k.isolated; })) continue;
          c.isolated = false;
          c.stability = "neutral";
        }
      }
      cycles.push_back(std::move(c));
    }
  }
  return cycles;
}

}  // namespace catlas
