#pragma once

#include "catlas/contact_core.hpp"
#include "catlas/dimension_cover.hpp"
#include "catlas/foliation.hpp"
#include "catlas/star_shaped.hpp"
#include "catlas/topology_bounds.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>

namespace catlas {

using nlohmann::json;

// Report header shared by every CLI output. The timestamp is the only field that
// varies between runs with the same seed.
json report_envelope(const std::string& kind, std::uint64_t seed);

// Writes to path.tmp and renames over path.
void write_json_atomic(const std::string& path, const json& j);
void write_text_atomic(const std::string& path, const std::string& text);
json read_json_file(const std::string& path);

json to_json(const Vec& v);
json to_json(const Rational& r);
json to_json(const Box& b);
json to_json(const PullbackReport& r, bool include_samples = false);
json to_json(const SeparationReport& r);
json to_json(const CoverPlan& p, bool include_regions = false);
json to_json(const CuboidCertificate& c);
json to_json(const StarShapedCertificate& c);
json to_json(const FoliationReport& r);
json to_json(const ExtensiveReport& r);
json to_json(const PartitionReport& r);
json to_json(const BoundResult& r);
json to_json(const CategoryBounds& r);
json to_json(const ManifoldDescriptor& m);

// Throws Error("schema").
ManifoldDescriptor descriptor_from_json(const json& j);
std::vector<TorusChart> torus_charts_from_json(const json& j, int* dim = nullptr, int* grid_resolution = nullptr);

}  // namespace catlas
