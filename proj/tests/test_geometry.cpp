#include <cmath>

#include "doctest.h"
#include "morsetower/field.hpp"
#include "test_helpers.hpp"

using namespace morse;

TEST_CASE("gradient on the Euclidean chart") {
    auto plane = std::make_shared<Surface>(Surface::plane());
    const ScalarField f = ScalarField::parse("x");
    const Vec2 g = gradient(*plane, f, {0, {0.2, -0.4}});
    CHECK(g.x == doctest::Approx(1.0));
    CHECK(g.y == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("gradient with constant metric diag(4,1)") {
    auto plane = std::make_shared<Surface>(Surface::plane());
    plane->set_metric_matrix(Expression::parse("4"), Expression::parse("0"), Expression::parse("1"));
    const ScalarField f = ScalarField::parse("x");
    const Vec2 g = gradient(*plane, f, {0, {0.0, 0.0}});
    CHECK(g.x == doctest::Approx(0.25));
    CHECK(g.y == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("sphere gradient matches a finite-difference directional oracle at the equator") {
    auto sphere = testhelp::unit_sphere();
    const ScalarField f = ScalarField::parse("z");
    const ChartPoint p{0, {1.0, 0.0}}; // equator in the stereographic chart
    const Vec2 g = gradient(*sphere, f, p);

    // directional derivative along each chart axis via central differences,
    // then raise the index with the metric
    const double h = 1e-6;
    auto value = [&](Vec2 u) { return f.value(*sphere, {0, u}); };
    const Vec2 df{(value({p.u.x + h, p.u.y}) - value({p.u.x - h, p.u.y})) / (2 * h),
                  (value({p.u.x, p.u.y + h}) - value({p.u.x, p.u.y - h})) / (2 * h)};
    const Vec2 expect = sphere->metric(p).inverse().apply(df);
    CHECK(g.x == doctest::Approx(expect.x).epsilon(1e-6));
    CHECK(g.y == doctest::Approx(expect.y).epsilon(1e-6));
}

TEST_CASE("morse_index from model Hessians") {
    const Mat2 id{1, 0, 0, 1};
    CHECK(morse_index({1, 0, 0, 1}, id, 1e-6) == 0);
    CHECK(morse_index({-1, 0, 0, 1}, id, 1e-6) == 1);
    CHECK(morse_index({-2, 0, 0, -3}, id, 1e-6) == 2);
    CHECK_THROWS(morse_index({1e-9, 0, 0, 1}, id, 1e-6));
}

TEST_CASE("unit sphere height function has the two polar critical points") {
    auto sphere = testhelp::unit_sphere();
    auto pair = testhelp::make_pair(sphere, "z");
    REQUIRE(pair->critical_points.size() == 2);
    CHECK(pair->critical_points[0].index == 0);
    CHECK(pair->critical_points[0].value == doctest::Approx(-1.0));
    CHECK(pair->critical_points[1].index == 2);
    CHECK(pair->critical_points[1].value == doctest::Approx(1.0));

    const Vec3 south = sphere->embed(pair->critical_points[0].at);
    CHECK(south.z == doctest::Approx(-1.0));
}

TEST_CASE("tilted torus height function: indices 0,1,1,2") {
    auto torus = testhelp::stock_torus();
    auto pair = testhelp::make_pair(torus, testhelp::tilted_torus_expr(), 10);
    REQUIRE(pair->critical_points.size() == 4);
    CHECK(pair->critical_points[0].index == 0);
    CHECK(pair->critical_points[1].index == 1);
    CHECK(pair->critical_points[2].index == 1);
    CHECK(pair->critical_points[3].index == 2);

    // analytic values: +-(sin(a)(R + r sin(a)) + r cos^2(a)) and the saddle pair
    const double a = 0.3, R = 2, r = 1;
    const double vmax = std::sin(a) * (R + r * std::sin(a)) + r * std::cos(a) * std::cos(a);
    const double vsad = std::sin(a) * (R - r * std::sin(a)) - r * std::cos(a) * std::cos(a);
    CHECK(pair->critical_points[0].value == doctest::Approx(-vmax));
    CHECK(pair->critical_points[1].value == doctest::Approx(vsad));
    CHECK(pair->critical_points[2].value == doctest::Approx(-vsad));
    CHECK(pair->critical_points[3].value == doctest::Approx(vmax));
}

TEST_CASE("deformed sphere: indices 0,1,2,2 with the saddle on the symmetry axis") {
    auto sphere = testhelp::unit_sphere();
    auto pair = testhelp::make_pair(sphere, testhelp::deformed_sphere_expr());
    REQUIRE(pair->critical_points.size() == 4);
    CHECK(pair->critical_points[0].index == 0);
    CHECK(pair->critical_points[1].index == 1);
    CHECK(pair->critical_points[2].index == 2);
    CHECK(pair->critical_points[3].index == 2);

    // saddle sits at the north pole by construction
    const Vec3 sad = sphere->embed(pair->critical_points[1].at);
    CHECK(std::abs(sad.x) < 1e-6);
    CHECK(std::abs(sad.y) < 1e-6);
    CHECK(sad.z == doctest::Approx(1.0));
}

TEST_CASE("derivative self-check passes for the stock fields") {
    auto sphere = testhelp::unit_sphere();
    CHECK_NOTHROW(ScalarField::parse(testhelp::deformed_sphere_expr()).check_derivatives(*sphere));
    auto torus = testhelp::stock_torus();
    CHECK_NOTHROW(ScalarField::parse(testhelp::tilted_torus_expr()).check_derivatives(*torus));
}

TEST_CASE("Morse index is invariant under metric rescaling") {
    for (double c : {0.5, 2.0}) {
        auto sphere = std::make_shared<Surface>(Surface::sphere(1.0));
        sphere->set_metric_scale(c);
        auto pair = testhelp::make_pair(sphere, testhelp::deformed_sphere_expr());
        REQUIRE(pair->critical_points.size() == 4);
        CHECK(pair->critical_points[0].index == 0);
        CHECK(pair->critical_points[1].index == 1);
        CHECK(pair->critical_points[2].index == 2);
        CHECK(pair->critical_points[3].index == 2);
    }
}

TEST_CASE("critical point set is stable under doubling the seed grid") {
    auto sphere = testhelp::unit_sphere();
    auto coarse = testhelp::make_pair(sphere, testhelp::deformed_sphere_expr(), 9);
    auto fine = testhelp::make_pair(sphere, testhelp::deformed_sphere_expr(), 18);
    REQUIRE(coarse->critical_points.size() == fine->critical_points.size());
    for (std::size_t i = 0; i < coarse->critical_points.size(); ++i) {
        const double d = sphere->ambient_distance(coarse->critical_points[i].at,
                                                  fine->critical_points[i].at);
        CHECK(d < 1e-6);
        CHECK(coarse->critical_points[i].index == fine->critical_points[i].index);
    }
}

TEST_CASE("Euler characteristic sanity gate") {
    auto euler = [](const MorseSmalePair& p) {
        int chi = 0;
        for (const CriticalPoint& cp : p.critical_points) chi += cp.index % 2 == 0 ? 1 : -1;
        return chi;
    };
    CHECK(euler(*testhelp::make_pair(testhelp::unit_sphere(), "z")) == 2);
    CHECK(euler(*testhelp::make_pair(testhelp::unit_sphere(), testhelp::deformed_sphere_expr())) == 2);
    CHECK(euler(*testhelp::make_pair(testhelp::stock_torus(), testhelp::tilted_torus_expr(), 10)) == 0);
}

TEST_CASE("sphere chart transition is involutive and consistent") {
    auto sphere = testhelp::unit_sphere();
    const ChartPoint p{0, {0.8, -0.3}};
    const ChartPoint q = sphere->to_chart(p, 1);
    const Vec3 a = sphere->embed(p), b = sphere->embed(q);
    CHECK((a - b).norm() < 1e-14);
    const ChartPoint back = sphere->to_chart(q, 0);
    CHECK((sphere->embed(back) - a).norm() < 1e-14);
}

TEST_CASE("a degenerate critical point is reported as an error") {
    auto plane = std::make_shared<Surface>(Surface::plane(3.0));
    // x^4 + y^4: critical at the origin with vanishing Hessian
    const ScalarField f = ScalarField::parse("x^4 + y^4");
    CHECK_THROWS_WITH_AS(find_critical_points(*plane, f, 7, testhelp::tols()),
                         doctest::Contains("degenerate"), std::runtime_error);
}
