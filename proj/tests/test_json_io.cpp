#include "catlas/fixtures.hpp"
#include "catlas/json_io.hpp"
#include "catlas/svg.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace catlas;

namespace {

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "catlas_json_io_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("envelope and atomic writes") {
  const json env = report_envelope("audit", 42);
  CHECK(env["schema_version"] == kSchemaVersion);
  CHECK(env["seed"] == 42);
  CHECK(env["generated_at"].get<std::string>().size() == 20);

  const auto path = scratch_dir() / "sub" / "report.json";
  write_json_atomic(path.string(), {{"a", 1}});
  CHECK(read_json_file(path.string())["a"] == 1);
  write_json_atomic(path.string(), {{"a", 2}});
  CHECK(read_json_file(path.string())["a"] == 2);
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));

  std::ofstream(scratch_dir() / "bad.json") << "{ not json";
  try {
    read_json_file((scratch_dir() / "bad.json").string());
    FAIL("malformed JSON accepted");
  } catch (const Error& e) {
    CHECK(e.code() == "schema");
  }
  CHECK_THROWS_AS(read_json_file("/nonexistent/file.json"), Error);
}

TEST_CASE("descriptor round trip") {
  const json t3 = {{"class", "torus"}, {"dim", 3}};
  const auto m = descriptor_from_json(t3);
  CHECK(m.cls == ManifoldClass::torus);
  CHECK(covering_number_bounds(m).lower == 4);

  const json rp3 = {{"class", "spherisation_of"},
                    {"base", {{"class", "generic"}, {"dim", 2}, {"is_sphere", true}}}};
  const auto s = descriptor_from_json(rp3);
  CHECK(s.dim == 3);
  const auto c = covering_number_bounds(s);
  CHECK(c.lower == 4);
  CHECK(c.upper == 4);

  const auto back = descriptor_from_json(to_json(s));
  CHECK(covering_number_bounds(back).lower == 4);

  const json sum = {{"class", "connected_sum"}, {"parts", {{{"class", "torus"}, {"dim", 3}}, {{"class", "S3"}, {"contact", "tight"}}}}};
  CHECK(covering_number_bounds(descriptor_from_json(sum)).upper <= 4);

  for (const json& bad : {json{{"class", "torus"}}, json{{"class", "S3"}, {"dim", 5}}, json{{"class", "nope"}, {"dim", 3}},
                          json::array(), json{{"class", "torus"}, {"dim", "3"}}}) {
    try {
      descriptor_from_json(bad);
      FAIL("bad descriptor accepted: " << bad.dump());
    } catch (const Error& e) {
      CHECK(e.code() == "schema");
    }
  }
}

TEST_CASE("torus chart files") {
  int dim = 0, res = 0;
  const auto charts = torus_charts_from_json(read_json_file(std::string(CATLAS_FIXTURE_DIR) + "/t2-4charts.json"), &dim, &res);
  CHECK(dim == 2);
  CHECK(res == 512);
  CHECK(charts.size() == 4);
  CHECK(charts[0].rho == Rational(3, 50));
  CHECK_THROWS_AS(torus_charts_from_json(json{{"kind", "torus_charts"}, {"dim", 2}, {"charts", json::array()}}), Error);
  CHECK_THROWS_AS(torus_charts_from_json(json{{"kind", "torus_charts"}, {"dim", 2},
                                              {"charts", {{{"offset", {"0"}}, {"rho", "1/2"}}}}}),
                  Error);
}

TEST_CASE("svg output") {
  Box window{{Rational(-2), Rational(-2)}, {Rational(2), Rational(2)}};
  const std::string bricks = brick_svg(Rational(1), window);
  CHECK(bricks.rfind("<?xml", 0) == 0);
  CHECK(bricks.find("class=\"brick\"") != std::string::npos);
  CHECK(bricks.find("class=\"n2\"") != std::string::npos);
  CHECK(bricks == brick_svg(Rational(1), window));

  const auto fx = load_foliation_fixture(std::string(CATLAS_FIXTURE_DIR) + "/foliation/gamma-minus-loop.json");
  const auto rep = analyze_fixture(fx);
  const std::string svg = phase_portrait_svg(rep, fx.surface);
  CHECK(svg.find("class=\"gamma-minus\"") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);

  const auto round = load_foliation_fixture(std::string(CATLAS_FIXTURE_DIR) + "/foliation/round-sphere.json");
  const std::string svg2 = phase_portrait_svg(analyze_fixture(round), round.surface);
  CHECK(svg2.find("class=\"dividing\"") != std::string::npos);
}

TEST_CASE("foliation report serialization") {
  const auto fx = load_foliation_fixture(std::string(CATLAS_FIXTURE_DIR) + "/foliation/round-sphere.json");
  const json j = to_json(analyze_fixture(fx));
  CHECK(j["singular_points"].size() == 2);
  CHECK(j["index_sum"] == 2);
  CHECK(j["dividing_set"]["components"] == 1);
  CHECK(j["tightness"]["tight"] == "yes");
  CHECK(j["graphs"]["edges_found"] == "found");
}
