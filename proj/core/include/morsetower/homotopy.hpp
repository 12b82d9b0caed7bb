#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "morsetower/field.hpp"
#include "morsetower/surface.hpp"
#include "morsetower/tolerances.hpp"

namespace morse {

/// A surface, a scalar function and the metric choice, with located and
/// classified critical points. The operational Morse-Smale certificate is
/// d^2 = 0 of the derived complex, checked downstream.
struct MorseSmalePair {
    std::shared_ptr<const Surface> surface;
    ScalarField f;
    std::vector<CriticalPoint> critical_points;

    static MorseSmalePair build(std::shared_ptr<const Surface> surface, ScalarField f,
                                int seeds_per_chart, const Tolerances& tol);

    const CriticalPoint& cp(const std::string& id) const { return find_by_id(critical_points, id); }
    std::vector<const CriticalPoint*> by_index(int k) const;
};

/// Evaluates H(s, t, x) with ambient derivatives. s is innermost-first:
/// s[0] is the scan parameter of a 1-parameter family, s[ell-1] the leading
/// (source/target) direction.
using HomotopyEvaluator = std::function<Jet(std::span<const double>, double, const EvalEnv&)>;

struct GradVal {
    double v = 0;
    std::array<double, 3> g{0, 0, 0};
};
/// First-order evaluator; the integrator's fast path.
using HomotopyGradEvaluator = std::function<GradVal(std::span<const double>, double, const EvalEnv&)>;

/// An ell-parameter finite interpolation (H, G) between two pairs. H equals
/// f_alpha for t <= -cutoff and f_beta for t >= cutoff at every parameter
/// value; the metric component is carried by the shared surface (constant
/// paths of metrics), which is what every shipped scenario uses.
struct ParamHomotopy {
    int ell = 0;
    double cutoff = 1.0;
    std::shared_ptr<const Surface> surface;
    std::shared_ptr<const MorseSmalePair> alpha, beta;
    HomotopyEvaluator H;
    HomotopyGradEvaluator Hg; // optional; falls back to H when empty
    bool constant_in_s = false; // declared by provenance, validated by spot checks
    bool constant_in_t = false; // identity interpolation of a single pair
    bool constant_in_lead = false; // identity cells: leading parameter is inert

    double value(std::span<const double> s, double t, const Vec3& x) const;
    Jet jet(std::span<const double> s, double t, const Vec3& x) const;
    /// Chart components of the ambient-jet pullback d(H)/du.
    Vec2 chart_grad(std::span<const double> s, double t, const ChartPoint& p) const;
    /// Metric gradient used by the flow equation.
    Vec2 metric_grad(std::span<const double> s, double t, const ChartPoint& p) const;

    /// Leading-parameter slice; side 0 is the source facet, 1 the target.
    ParamHomotopy facet(int side) const;
    ParamHomotopy slice_leading(double v) const;

    /// End conditions and inner-facet collapse (atavistic property), spot
    /// checked on deterministic grids. Throws on violation.
    void spot_check(const Tolerances& tol) const;
};

/// Identity interpolation of one pair: H(s,t,.) = f for all s,t.
ParamHomotopy constant_homotopy(std::shared_ptr<const MorseSmalePair> pair, double cutoff);

/// Expression-driven family; expr may use x,y,z,t,s1..s3.
ParamHomotopy expression_homotopy(std::shared_ptr<const MorseSmalePair> alpha,
                                  std::shared_ptr<const MorseSmalePair> beta, int ell,
                                  double cutoff, const Expression& expr);

/// Deterministic surface spot points used by all pointwise cell checks.
std::vector<ChartPoint> spot_surface_points(const Surface& s);
/// Parameter spot values {0, 1/4, 1/2, 3/4, 1} and time spot values.
std::vector<double> spot_parameter_values();
std::vector<double> spot_time_values(double cutoff);

/// Pointwise equality of two families on the spot grids.
bool homotopy_equal_on_spots(const ParamHomotopy& a, const ParamHomotopy& b, double tol);

} // namespace morse
