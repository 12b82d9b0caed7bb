#include "doctest.h"
#include "morsetower/moduli.hpp"
#include "morsetower/scenario.hpp"
#include "test_helpers.hpp"

using namespace morse;

namespace {

const char* scenario_dir() { return MORSETOWER_SCENARIO_DIR; }

ParamHomotopy designed_family(std::shared_ptr<const MorseSmalePair>& pair_out) {
    const Scenario sc = Scenario::load_file(std::string(scenario_dir()) + "/family_designed.json");
    auto alpha = sc.make_alpha();
    pair_out = alpha;
    return sc.make_family(alpha, alpha);
}

} // namespace

TEST_CASE("expected_dimension arithmetic") {
    CHECK(expected_dimension(1, 1, 0) == 0);
    CHECK(expected_dimension(0, 1, 1) == 0);
    CHECK(expected_dimension(2, 0, 0) == 2);
    CHECK(expected_dimension(0, 1, 2) == 1);
}

TEST_CASE("scan_nongeneric: constant-in-s family has an empty locus") {
    const Scenario sc = Scenario::load_file(std::string(scenario_dir()) + "/family_constant.json");
    auto alpha = sc.make_alpha();
    auto beta = sc.make_beta();
    const ParamHomotopy h = sc.make_family(alpha, beta);
    const NonGenericLocus locus = scan_nongeneric(h, "c0_0", "c1_0", testhelp::tols());
    CHECK(locus.roots.empty());
    CHECK(locus.parity() == 0);
}

TEST_CASE("scan_nongeneric: the designed family has exactly one interior root") {
    std::shared_ptr<const MorseSmalePair> pair;
    const ParamHomotopy h = designed_family(pair);
    const NonGenericLocus locus = scan_nongeneric(h, "c0_0", "c1_0", testhelp::tols());
    REQUIRE(locus.roots.size() == 1);
    CHECK(locus.parity() == 1);
    CHECK(locus.roots[0].s > 0.1);
    CHECK(locus.roots[0].s < 0.9);

    // parity and location stable under doubling the scan grid
    Tolerances fine = testhelp::tols();
    fine.scan_grid *= 2;
    const NonGenericLocus locus2 = scan_nongeneric(h, "c0_0", "c1_0", fine);
    REQUIRE(locus2.roots.size() == 1);
    CHECK(std::abs(locus2.roots[0].s - locus.roots[0].s) < 1e-6);
}

TEST_CASE("scan_nongeneric: saddle-to-maximum pairs of the designed family are even") {
    std::shared_ptr<const MorseSmalePair> pair;
    const ParamHomotopy h = designed_family(pair);
    for (const char* mx : {"c2_0", "c2_1"}) {
        const NonGenericLocus locus = scan_nongeneric(h, "c1_0", mx, testhelp::tols());
        CHECK(locus.parity() == 0);
    }
}

TEST_CASE("scan_nongeneric rejects wrong index gaps and wrong ell") {
    std::shared_ptr<const MorseSmalePair> pair;
    const ParamHomotopy h = designed_family(pair);
    CHECK_THROWS_AS(scan_nongeneric(h, "c0_0", "c2_0", testhelp::tols()), std::invalid_argument);
    CHECK_THROWS_AS(scan_nongeneric(h.facet(0), "c0_0", "c1_0", testhelp::tols()),
                    std::invalid_argument);
}

TEST_CASE("boundary_strata: designed family, minimum pair has even boundary") {
    std::shared_ptr<const MorseSmalePair> pair;
    const ParamHomotopy h = designed_family(pair);
    const BoundaryStrata bs = boundary_strata(h, "c0_0", "c0_0", testhelp::tols());
    CHECK(bs.facet0_count == 1);
    CHECK(bs.facet1_count == 1);
    REQUIRE(bs.type_iii.size() == 1);     // the designed root through the saddle
    CHECK(bs.type_iii[0].tail_count == 2); // two separatrices complete the broken line
    CHECK(bs.type_iv.empty());
    CHECK(bs.total_count == 4);
    CHECK(bs.total_parity == 0);
}

TEST_CASE("boundary_strata rejects pairs of the wrong expected dimension") {
    std::shared_ptr<const MorseSmalePair> pair;
    const ParamHomotopy h = designed_family(pair);
    CHECK_THROWS_AS(boundary_strata(h, "c0_0", "c1_0", testhelp::tols()), std::invalid_argument);
}

TEST_CASE("constant-in-s family: boundary types (iii) and (iv) are empty") {
    const Scenario sc = Scenario::load_file(std::string(scenario_dir()) + "/family_constant.json");
    auto alpha = sc.make_alpha();
    const ParamHomotopy h = sc.make_family(alpha, alpha);
    const BoundaryStrata bs = boundary_strata(h, "c0_0", "c0_0", testhelp::tols());
    CHECK(bs.type_iii.empty());
    CHECK(bs.type_iv.empty());
    CHECK(bs.total_parity == 0);
}

TEST_CASE("ell=2 locus polyline: the codimension-one set ends at the interior hit") {
    const Scenario sc = Scenario::load_file(std::string(scenario_dir()) + "/family_designed2.json");
    auto alpha = sc.make_alpha();
    const ParamHomotopy h = sc.make_family(alpha, alpha);
    Tolerances coarse = testhelp::tols();
    coarse.scan_grid = 64;
    const LocusPolyline lp = locus_polyline(h, "c0_0", "c1_0", 13, coarse);
    REQUIRE_FALSE(lp.branches.empty());
    // the branch lives on the s2 > 1/2 side and stops short of s2 = 1/2
    double min_s2 = 2, max_s2 = -1;
    for (const auto& branch : lp.branches)
        for (const auto& pt : branch) {
            min_s2 = std::min(min_s2, pt[0]);
            max_s2 = std::max(max_s2, pt[0]);
        }
    CHECK(min_s2 > 0.55);
    CHECK(max_s2 == doctest::Approx(1.0));
}

TEST_CASE("scans are bit-identical for any worker count") {
    std::shared_ptr<const MorseSmalePair> pair;
    const ParamHomotopy h = designed_family(pair);
    setenv("MORSE_TOWER_THREADS", "1", 1);
    const NonGenericLocus a = scan_nongeneric(h, "c0_0", "c1_0", testhelp::tols());
    setenv("MORSE_TOWER_THREADS", "3", 1);
    const NonGenericLocus b = scan_nongeneric(h, "c0_0", "c1_0", testhelp::tols());
    unsetenv("MORSE_TOWER_THREADS");
    REQUIRE(a.roots.size() == b.roots.size());
    for (std::size_t i = 0; i < a.roots.size(); ++i) CHECK(a.roots[i].s == b.roots[i].s);
}
