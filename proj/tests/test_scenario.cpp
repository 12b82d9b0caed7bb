#include "doctest.h"
#include "morsetower/scenario.hpp"
#include "morsetower/verify.hpp"

using namespace morse;

namespace {

std::string path_of(const std::string& name) {
    return std::string(MORSETOWER_SCENARIO_DIR) + "/" + name;
}

} // namespace

TEST_CASE("all shipped scenarios parse and validate") {
    for (const char* name :
         {"sphere.json", "torus_tilted.json", "sphere_deformed.json", "sphere_pair.json",
          "family_designed.json", "family_constant.json", "family_designed2.json"}) {
        const Scenario sc = Scenario::load_file(path_of(name));
        CHECK_FALSE(sc.name.empty());
        CHECK(sc.surface != nullptr);
    }
}

TEST_CASE("unknown keys are rejected before numeric work") {
    CHECK_THROWS_WITH_AS(
        Scenario::parse_text(R"({"name":"x","surface":{"type":"sphere"},"f_alpha":"z","typo":1})"),
        doctest::Contains("unknown key"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        Scenario::parse_text(
            R"({"name":"x","surface":{"type":"sphere","sides":3},"f_alpha":"z"})"),
        doctest::Contains("unknown key"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        Scenario::parse_text(
            R"({"name":"x","surface":{"type":"sphere"},"f_alpha":"z","homotopy":{"ell":0,"walrus":2,"expr":"z"}})"),
        doctest::Contains("unknown key"), std::invalid_argument);
}

TEST_CASE("malformed input produces parse diagnostics") {
    CHECK_THROWS_AS(Scenario::parse_text("{not json"), std::invalid_argument);
    CHECK_THROWS_AS(
        Scenario::parse_text(R"({"name":"x","surface":{"type":"dodecahedron"},"f_alpha":"z"})"),
        std::invalid_argument);
    CHECK_THROWS_AS(
        Scenario::parse_text(R"({"name":"x","surface":{"type":"sphere"},"f_alpha":"z +"})"),
        std::invalid_argument);
    CHECK_THROWS_AS(Scenario::load_file("/nonexistent/scenario.json"), std::invalid_argument);
}

TEST_CASE("metric variants parse") {
    const Scenario scaled = Scenario::parse_text(
        R"({"name":"x","surface":{"type":"sphere"},"metric":{"scale":2.0},"f_alpha":"z"})");
    CHECK(scaled.surface->metric_mode() == MetricMode::ScaledInduced);
    const Scenario matrix = Scenario::parse_text(
        R"({"name":"x","surface":{"type":"plane"},"metric":{"matrix":["4","0","1"]},"f_alpha":"x"})");
    CHECK(matrix.surface->metric_mode() == MetricMode::Matrix);
    CHECK_THROWS_AS(
        Scenario::parse_text(
            R"({"name":"x","surface":{"type":"sphere"},"metric":"flat","f_alpha":"z"})"),
        std::invalid_argument);
}

TEST_CASE("constant homotopy kind needs equal ends") {
    const Scenario sc = Scenario::parse_text(
        R"({"name":"x","surface":{"type":"sphere"},"f_alpha":"z","f_beta":"x",
            "homotopy":{"ell":0,"kind":"constant"}})");
    auto alpha = sc.make_alpha();
    auto beta = sc.make_beta();
    CHECK_THROWS_AS(sc.make_family(alpha, beta), std::invalid_argument);
}

TEST_CASE("tolerance overrides flow into the record") {
    const Scenario sc = Scenario::parse_text(
        R"({"name":"x","surface":{"type":"sphere"},"f_alpha":"z",
            "tolerances":{"scan_grid":128,"cross_tol":1e-6}})");
    CHECK(sc.tol.scan_grid == 128);
    CHECK(sc.tol.cross_tol == doctest::Approx(1e-6));
    CHECK_THROWS_AS(Scenario::parse_text(
                        R"({"name":"x","surface":{"type":"sphere"},"f_alpha":"z",
                            "tolerances":{"scam_grid":128}})"),
                    std::invalid_argument);
}

TEST_CASE("verify_all on the continuation scenario reports the pipeline checks") {
    const Scenario sc = Scenario::load_file(path_of("sphere_pair.json"));
    VerifyOptions opt;
    const VerifySummary sum = verify_all(sc, opt);
    CHECK(sum.all_pass());
    REQUIRE(sum.find("d2_zero") != nullptr);
    REQUIRE(sum.find("chain_map") != nullptr);
    REQUIRE(sum.find("homology_iso") != nullptr);
    CHECK(sum.find("d2_zero")->pass);
    CHECK(sum.find("chain_map")->pass);
    CHECK(sum.find("homology_iso")->pass);
}
