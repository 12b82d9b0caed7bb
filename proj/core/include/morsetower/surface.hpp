#pragma once

#include <optional>
#include <string>
#include <vector>

#include "morsetower/expr.hpp"
#include "morsetower/geom.hpp"

namespace morse {

struct ChartPoint {
    int chart = 0;
    Vec2 u;
};

/// How the 2x2 metric field is supplied.
enum class MetricMode { Induced, ScaledInduced, Matrix };

/// Explicit parametric surface in R^3 with one or two charts.
/// Supported shapes: "plane" (single Euclidean chart, for unit tests),
/// "sphere" (two stereographic charts), "torus" (one periodic chart).
class Surface {
public:
    static Surface plane(double halfwidth = 10.0);
    static Surface sphere(double radius = 1.0);
    static Surface torus(double major = 2.0, double minor = 1.0);

    const std::string& kind() const { return kind_; }
    int chart_count() const { return charts_; }

    Vec3 embed(const ChartPoint& p) const;
    /// Columns d(sigma)/du1, d(sigma)/du2.
    void jacobian(const ChartPoint& p, Vec3& du1, Vec3& du2) const;
    /// Second chart derivatives sigma_11, sigma_12, sigma_22.
    void second(const ChartPoint& p, Vec3& d11, Vec3& d12, Vec3& d22) const;

    Mat2 metric(const ChartPoint& p) const;
    void set_metric_scale(double s);            // g -> s * g_induced
    void set_metric_matrix(const Expression& g11, const Expression& g12,
                           const Expression& g22); // entries in u1,u2 (plane chart only)
    MetricMode metric_mode() const { return metric_mode_; }
    double metric_scale() const { return metric_scale_; }

    /// Keep the point in its chart's sweet spot: wraps torus coordinates,
    /// moves sphere points to the other chart when |u| grows. Returns true
    /// if the chart or coordinates changed.
    bool normalize(ChartPoint& p) const;
    /// Express p in chart `chart` (throws if not representable there).
    ChartPoint to_chart(const ChartPoint& p, int chart) const;
    bool in_domain(const ChartPoint& p) const;

    /// Deterministic Newton seed grid, n x n per chart.
    std::vector<ChartPoint> seed_grid(int n) const;

    double ambient_distance(const ChartPoint& a, const ChartPoint& b) const {
        return (embed(a) - embed(b)).norm();
    }

    /// Rank-2 Jacobian and SPD metric on a sample grid; throws on failure.
    void validate() const;

private:
    std::string kind_;
    int charts_ = 1;
    double p1_ = 0, p2_ = 0; // radius / (major, minor) / halfwidth
    MetricMode metric_mode_ = MetricMode::Induced;
    double metric_scale_ = 1.0;
    std::vector<Expression> metric_entries_; // g11, g12, g22
};

} // namespace morse
