#pragma once

#include "catlas/foliation.hpp"

#include "json.hpp"

#include <optional>
#include <string>

namespace catlas {

// Polynomial on R^3 as a list of terms [coeff, [ex, ey, ez]].
Polynomial polynomial_from_json(const nlohmann::json& j, int nvars = 3);
nlohmann::json polynomial_to_json(const Polynomial& p);

// A sphere with a field on it, and optionally the form it came from and a contact
// vector field transverse to the sphere (needed for the dividing set).
struct FoliationFixture {
  std::string name;
  std::string description;
  SphereSurface surface;
  TangentField field;
  std::optional<OneForm> form;
  std::optional<VectorField> transverse;
  nlohmann::json source;  // the parsed document, echoed into reports
};

// Throws Error("schema") on malformed documents.
FoliationFixture foliation_fixture_from_json(const nlohmann::json& j);
FoliationFixture load_foliation_fixture(const std::string& path);

// analyze_foliation plus the dividing set when the fixture has a transverse field.
FoliationReport analyze_fixture(const FoliationFixture& fx, const FoliationParams& params = {},
                                int subdivisions = 5);

}  // namespace catlas
