#pragma once

#include <string>
#include <vector>

#include "morsetower/expr.hpp"
#include "morsetower/geom.hpp"
#include "morsetower/surface.hpp"
#include "morsetower/tolerances.hpp"

namespace morse {

/// Scalar function on a surface, given as an ambient expression in x,y,z.
/// Chart derivatives come from the expression jet pulled back through the
/// chart map, so they are closed-form, and check_derivatives can confirm
/// them against central differences.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(Expression f) : f_(std::move(f)) {}
    static ScalarField parse(const std::string& text) { return ScalarField(Expression::parse(text)); }

    double value(const Surface& s, const ChartPoint& p) const;
    Vec2 chart_grad(const Surface& s, const ChartPoint& p) const;
    Mat2 chart_hess(const Surface& s, const ChartPoint& p) const;

    /// "closed-form" always; recorded for the artifact contract.
    std::string derivative_kind() const { return "closed-form"; }
    /// Relative agreement of chart_grad with central differences of value
    /// on the surface seed grid; throws beyond rel_tol.
    void check_derivatives(const Surface& s, double rel_tol = 1e-5) const;

    const Expression& expression() const { return f_; }

private:
    Expression f_;
};

struct CriticalPoint {
    std::string id;
    ChartPoint at;
    double value = 0;
    int index = 0;
    std::array<double, 2> hessian_eigs{0, 0}; // metric-pencil eigenvalues, ascending
};

/// Metric gradient g^{ij} d_j f in chart components.
Vec2 gradient(const Surface& s, const ScalarField& f, const ChartPoint& p);

/// Number of negative eigenvalues of the (metric-corrected) Hessian pencil.
/// Throws when an eigenvalue is within nondegen_tol of zero.
int morse_index(const Mat2& hess, const Mat2& metric, double nondegen_tol);

/// Newton iteration on df = 0 from a deterministic seed grid, deduplicated
/// by ambient distance and classified by Hessian signs. Sorted by
/// (index, value); ids are "c<index>_<rank>".
std::vector<CriticalPoint> find_critical_points(const Surface& s, const ScalarField& f,
                                                int seeds_per_chart, const Tolerances& tol);

const CriticalPoint& find_by_id(const std::vector<CriticalPoint>& pts, const std::string& id);

} // namespace morse
