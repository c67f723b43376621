#pragma once

#include "catlas/dimension_cover.hpp"
#include "catlas/foliation.hpp"

#include <string>

namespace catlas {

// Fixed figure constants: 800 px per square panel, 24 px margin, one fill color per
// brick color (cycled beyond 6).
inline constexpr int kSvgPanel = 800;
inline constexpr int kSvgMargin = 24;

// Brick picture of the cover of the plane at scale s inside window (d = 2), with the
// N2 neighbourhoods of one color outlined.
std::string brick_svg(const Rational& s, const Box& window, int outlined_color = 1);

// Regions of every family of a 2-dimensional torus cover on the unit square.
std::string cover_plan_svg(const CoverPlan& plan);

// Upper and lower hemispheres side by side (orthographic, lower one seen from below).
// Edges of the positive graph use class gamma-plus, of the negative graph gamma-minus;
// the dividing set is dashed.
std::string phase_portrait_svg(const FoliationReport& report, const SphereSurface& surface = {});

}  // namespace catlas
