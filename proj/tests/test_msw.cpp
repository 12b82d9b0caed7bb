#include "doctest.h"
#include "morsetower/msw.hpp"
#include "morsetower/scenario.hpp"
#include "test_helpers.hpp"

using namespace morse;

namespace {

Scenario load_scenario(const std::string& name) {
    return Scenario::load_file(std::string(MORSETOWER_SCENARIO_DIR) + "/" + name);
}

} // namespace

TEST_CASE("build_msw: sphere height gives bases (1,0,1), zero boundary, homology (1,0,1)") {
    auto pair = testhelp::make_pair(testhelp::unit_sphere(), "z");
    const ChainComplex c = build_msw(*pair, testhelp::tols());
    CHECK(c.dim(0) == 1);
    CHECK(c.dim(1) == 0);
    CHECK(c.dim(2) == 1);
    CHECK(homology_ranks(c) == std::vector<std::size_t>{1, 0, 1});
}

TEST_CASE("build_msw: tilted torus gives bases (1,2,1), zero boundary mod 2, homology (1,2,1)") {
    auto pair = testhelp::make_pair(testhelp::stock_torus(), testhelp::tilted_torus_expr(), 10);
    const ChainComplex c = build_msw(*pair, testhelp::tols());
    CHECK(c.dim(0) == 1);
    CHECK(c.dim(1) == 2);
    CHECK(c.dim(2) == 1);
    CHECK(c.boundary(1).is_zero());
    CHECK(c.boundary(2).is_zero());
    CHECK(homology_ranks(c) == std::vector<std::size_t>{1, 2, 1});
}

TEST_CASE("build_msw: deformed sphere boundary and homology") {
    auto pair = testhelp::make_pair(testhelp::unit_sphere(), testhelp::deformed_sphere_expr());
    const ChainComplex c = build_msw(*pair, testhelp::tols());
    CHECK(c.dim(0) == 1);
    CHECK(c.dim(1) == 1);
    CHECK(c.dim(2) == 2);
    CHECK(c.boundary(1).is_zero()); // two separatrices into the one minimum
    CHECK(c.boundary(2) == Gf2Matrix::from_rows({{1, 1}})); // each maximum feeds the saddle once
    CHECK(homology_ranks(c) == std::vector<std::size_t>{1, 0, 1});
}

TEST_CASE("the two ends of a scenario have equal homology through the continuation map") {
    const Scenario sc = load_scenario("sphere_pair.json");
    auto alpha = sc.make_alpha();
    auto beta = sc.make_beta();
    const ChainComplex C = build_msw(*alpha, testhelp::tols());
    const ChainComplex Cp = build_msw(*beta, testhelp::tols());
    CHECK(homology_ranks(C) == homology_ranks(Cp));

    const ParamHomotopy h = sc.make_family(alpha, beta);
    const GradedMap U = continuation_map(h, testhelp::tols());
    const InducedMap ind = induced_homology_map(U, C, Cp);
    CHECK(ind.iso);

    // degree 2: exactly one of the maxima reaches the unique maximum
    const Gf2Matrix& top = U.block(2);
    REQUIRE(top.rows() == 1);
    REQUIRE(top.cols() == 2);
    CHECK(static_cast<int>(top(0, 0)) + static_cast<int>(top(0, 1)) == 1);
}

TEST_CASE("continuation_map of the identity interpolation is the identity") {
    auto pair = testhelp::make_pair(testhelp::unit_sphere(), testhelp::deformed_sphere_expr());
    const ParamHomotopy h = constant_homotopy(pair, 1.0);
    const GradedMap U = continuation_map(h, testhelp::tols());
    for (const Gf2Matrix& blk : U.blocks) CHECK(blk.is_identity());
}

TEST_CASE("continuation_map: sphere to rotated sphere is the identity in degrees 0 and 2") {
    auto sphere = testhelp::unit_sphere();
    auto alpha = testhelp::make_pair(sphere, "z");
    auto beta = testhelp::make_pair(sphere, "sin(0.3)*x + cos(0.3)*z");
    const ParamHomotopy h = expression_homotopy(
        alpha, beta, 0, 1.0,
        Expression::parse(
            "z*(1-smoothstep((t+1)/2)) + (sin(0.3)*x + cos(0.3)*z)*smoothstep((t+1)/2)"));
    const GradedMap U = continuation_map(h, testhelp::tols());
    CHECK(U.block(0).is_identity());
    CHECK(U.block(2).is_identity());
}

TEST_CASE("chain_homotopy of a constant-in-s family: E = 0 and equal facet maps") {
    const Scenario sc = load_scenario("family_constant.json");
    auto alpha = sc.make_alpha();
    auto beta = sc.make_beta();
    const ParamHomotopy h = sc.make_family(alpha, beta);
    const ChainHomotopyResult r = chain_homotopy(h, testhelp::tols());
    CHECK(r.E.is_zero());
    for (std::size_t k = 0; k < r.U0.blocks.size(); ++k) CHECK(r.U0.blocks[k] == r.U1.blocks[k]);
}

TEST_CASE("chain_homotopy of the designed family: single-entry E, relation holds") {
    const Scenario sc = load_scenario("family_designed.json");
    auto alpha = sc.make_alpha();
    const ParamHomotopy h = sc.make_family(alpha, alpha);
    const ChainHomotopyResult r = chain_homotopy(h, testhelp::tols());

    // E: C_0 -> C_1 sends the minimum to the saddle, nothing else
    CHECK(r.E.block(0) == Gf2Matrix::from_rows({{1}}));
    CHECK(r.E.block(1).is_zero());
    CHECK(verify_homotopy(r.E, r.U0, r.U1, r.C, r.Cprime).pass);

    // both facet maps are quasi-isomorphisms inducing the same map
    const InducedMap i0 = induced_homology_map(r.U0, r.C, r.Cprime);
    const InducedMap i1 = induced_homology_map(r.U1, r.C, r.Cprime);
    CHECK(i0.iso);
    CHECK(i1.iso);
    for (std::size_t k = 0; k < i0.blocks.size(); ++k) CHECK(i0.blocks[k] == i1.blocks[k]);
}

TEST_CASE("higher_homotopy: identity provenance vanishes without scanning") {
    auto pair = testhelp::make_pair(testhelp::unit_sphere(), testhelp::deformed_sphere_expr());
    ParamHomotopy k0 = constant_homotopy(pair, 1.0);
    // lift twice: an inert-lead two-parameter family
    ParamHomotopy lifted = k0;
    for (int i = 0; i < 2; ++i) {
        ParamHomotopy up = lifted;
        up.ell = lifted.ell + 1;
        up.constant_in_lead = true;
        const HomotopyEvaluator inner = lifted.H;
        const std::size_t n = static_cast<std::size_t>(lifted.ell);
        up.H = [inner, n](std::span<const double> s, double t, const EvalEnv& env) {
            return inner(s.first(n), t, env);
        };
        lifted = up;
    }
    const GradedMap phi2 = higher_homotopy(lifted, 2, testhelp::tols());
    CHECK(phi2.is_zero());
    CHECK_THROWS_AS(higher_homotopy(lifted, 3, testhelp::tols()), std::invalid_argument);
}

TEST_CASE("higher_homotopy: the designed two-parameter family counts one crossing") {
    const Scenario sc = load_scenario("family_designed2.json");
    auto alpha = sc.make_alpha();
    const ParamHomotopy h = sc.make_family(alpha, alpha);
    const GradedMap phi2 = higher_homotopy(h, 2, testhelp::tols());

    // single entry: the minimum maps to the +x maximum
    const ChainComplex C = build_msw(*alpha, testhelp::tols());
    const std::size_t col = C.index_of(0, "c0_0");
    const std::size_t row_hit = C.index_of(2, "c2_1");
    const std::size_t row_other = C.index_of(2, "c2_0");
    CHECK(phi2.block(0)(row_hit, col) == 1);
    CHECK(phi2.block(0)(row_other, col) == 0);

    // facet relation: E1 + E0 = d' phi2 + phi2 d
    const GradedMap e0 = chain_homotopy(h.facet(0), testhelp::tols()).E;
    const GradedMap e1 = chain_homotopy(h.facet(1), testhelp::tols()).E;
    CHECK(verify_homotopy(phi2, e0, e1, C, C).pass);
}

TEST_CASE("pipeline complexes pass the boundary-square report") {
    auto torus = testhelp::make_pair(testhelp::stock_torus(), testhelp::tilted_torus_expr(), 10);
    CHECK(check_boundary_square(build_msw(*torus, testhelp::tols())).pass);
    auto deformed = testhelp::make_pair(testhelp::unit_sphere(), testhelp::deformed_sphere_expr());
    CHECK(check_boundary_square(build_msw(*deformed, testhelp::tols())).pass);
}
