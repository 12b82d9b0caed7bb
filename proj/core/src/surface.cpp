#include "morsetower/surface.hpp"

#include <cmath>
#include <stdexcept>

namespace morse {

PencilEig sym_pencil_eig(const Mat2& h, const Mat2& g) {
    // det(H - lambda G) = 0: quadratic a l^2 + b l + c = 0
    const double qa = g.det();
    const double qb = -(h.a * g.d + h.d * g.a - h.b * g.c - h.c * g.b);
    const double qc = h.det();
    const double disc = qb * qb - 4 * qa * qc;
    const double sq = std::sqrt(disc > 0 ? disc : 0);
    double l0 = (-qb - sq) / (2 * qa);
    double l1 = (-qb + sq) / (2 * qa);
    if (l0 > l1) std::swap(l0, l1);

    PencilEig out{{l0, l1}, {}};
    for (int k = 0; k < 2; ++k) {
        const double l = out.lambda[static_cast<std::size_t>(k)];
        // (H - l G) v = 0; pick the larger row for stability
        const double r1x = h.a - l * g.a, r1y = h.b - l * g.b;
        const double r2x = h.c - l * g.c, r2y = h.d - l * g.d;
        Vec2 v = (r1x * r1x + r1y * r1y >= r2x * r2x + r2y * r2y) ? Vec2{-r1y, r1x} : Vec2{-r2y, r2x};
        if (v.norm() < 1e-14) v = {1, 0};
        const double gn = std::sqrt(g.a * v.x * v.x + 2 * g.b * v.x * v.y + g.d * v.y * v.y);
        out.vec[static_cast<std::size_t>(k)] = v * (1.0 / gn);
    }
    return out;
}

Surface Surface::plane(double halfwidth) {
    Surface s;
    s.kind_ = "plane";
    s.charts_ = 1;
    s.p1_ = halfwidth;
    return s;
}

Surface Surface::sphere(double radius) {
    Surface s;
    s.kind_ = "sphere";
    s.charts_ = 2;
    s.p1_ = radius;
    return s;
}

Surface Surface::torus(double major, double minor) {
    Surface s;
    s.kind_ = "torus";
    s.charts_ = 1;
    s.p1_ = major;
    s.p2_ = minor;
    return s;
}

Vec3 Surface::embed(const ChartPoint& p) const {
    if (kind_ == "plane") return {p.u.x, p.u.y, 0};
    if (kind_ == "sphere") {
        const double q = p.u.norm2();
        const double s = 1.0 + q;
        const double zsign = p.chart == 0 ? 1.0 : -1.0; // chart 0: projection from north
        return Vec3{2 * p.u.x / s, 2 * p.u.y / s, zsign * (q - 1) / s} * p1_;
    }
    // torus
    const double R = p1_, r = p2_;
    const double cu = std::cos(p.u.x), su = std::sin(p.u.x);
    const double cv = std::cos(p.u.y), sv = std::sin(p.u.y);
    return {(R + r * cv) * cu, (R + r * cv) * su, r * sv};
}

void Surface::jacobian(const ChartPoint& p, Vec3& du1, Vec3& du2) const {
    if (kind_ == "plane") {
        du1 = {1, 0, 0};
        du2 = {0, 1, 0};
        return;
    }
    if (kind_ == "sphere") {
        const double u = p.u.x, v = p.u.y;
        const double q = u * u + v * v;
        const double s = 1.0 + q;
        const double s2 = s * s;
        const double zsign = p.chart == 0 ? 1.0 : -1.0;
        // d/du of (2u/s, 2v/s, (q-1)/s)
        du1 = Vec3{2 / s - 4 * u * u / s2, -4 * u * v / s2, zsign * 4 * u / s2} * p1_;
        du2 = Vec3{-4 * u * v / s2, 2 / s - 4 * v * v / s2, zsign * 4 * v / s2} * p1_;
        return;
    }
    const double R = p1_, r = p2_;
    const double cu = std::cos(p.u.x), su = std::sin(p.u.x);
    const double cv = std::cos(p.u.y), sv = std::sin(p.u.y);
    du1 = {-(R + r * cv) * su, (R + r * cv) * cu, 0};
    du2 = {-r * sv * cu, -r * sv * su, r * cv};
}

void Surface::second(const ChartPoint& p, Vec3& d11, Vec3& d12, Vec3& d22) const {
    if (kind_ == "plane") {
        d11 = d12 = d22 = {0, 0, 0};
        return;
    }
    if (kind_ == "sphere") {
        const double u = p.u.x, v = p.u.y;
        const double q = u * u + v * v;
        const double s = 1.0 + q;
        const double s2 = s * s, s3 = s2 * s;
        const double zsign = p.chart == 0 ? 1.0 : -1.0;
        // x = 2u/s, y = 2v/s, z = zsign (q-1)/s = zsign (1 - 2/s)
        const double xuu = -12 * u / s2 + 16 * u * u * u / s3;
        const double xuv = -4 * v / s2 + 16 * u * u * v / s3;
        const double xvv = -4 * u / s2 + 16 * u * v * v / s3;
        const double yuu = -4 * v / s2 + 16 * u * u * v / s3;
        const double yuv = -4 * u / s2 + 16 * u * v * v / s3;
        const double yvv = -12 * v / s2 + 16 * v * v * v / s3;
        const double zuu = zsign * (4 / s2 - 16 * u * u / s3);
        const double zuv = zsign * (-16 * u * v / s3);
        const double zvv = zsign * (4 / s2 - 16 * v * v / s3);
        d11 = Vec3{xuu, yuu, zuu} * p1_;
        d12 = Vec3{xuv, yuv, zuv} * p1_;
        d22 = Vec3{xvv, yvv, zvv} * p1_;
        return;
    }
    const double R = p1_, r = p2_;
    const double cu = std::cos(p.u.x), su = std::sin(p.u.x);
    const double cv = std::cos(p.u.y), sv = std::sin(p.u.y);
    d11 = {-(R + r * cv) * cu, -(R + r * cv) * su, 0};
    d12 = {r * sv * su, -r * sv * cu, 0};
    d22 = {-r * cv * cu, -r * cv * su, -r * sv};
}

Mat2 Surface::metric(const ChartPoint& p) const {
    if (metric_mode_ == MetricMode::Matrix) {
        EvalEnv env;
        env.u1 = p.u.x;
        env.u2 = p.u.y;
        const double g11 = metric_entries_[0].value(env);
        const double g12 = metric_entries_[1].value(env);
        const double g22 = metric_entries_[2].value(env);
        return {g11, g12, g12, g22};
    }
    Vec3 e1, e2;
    jacobian(p, e1, e2);
    Mat2 g{e1.dot(e1), e1.dot(e2), e1.dot(e2), e2.dot(e2)};
    return metric_mode_ == MetricMode::ScaledInduced ? g * metric_scale_ : g;
}

void Surface::set_metric_scale(double s) {
    metric_mode_ = MetricMode::ScaledInduced;
    metric_scale_ = s;
}

void Surface::set_metric_matrix(const Expression& g11, const Expression& g12, const Expression& g22) {
    metric_mode_ = MetricMode::Matrix;
    metric_entries_ = {g11, g12, g22};
}

bool Surface::normalize(ChartPoint& p) const {
    if (kind_ == "torus") {
        const double tau = 2 * 3.14159265358979323846;
        double nx = std::fmod(p.u.x, tau);
        double ny = std::fmod(p.u.y, tau);
        if (nx < 0) nx += tau;
        if (ny < 0) ny += tau;
        const bool changed = nx != p.u.x || ny != p.u.y;
        p.u = {nx, ny};
        return changed;
    }
    if (kind_ == "sphere" && p.u.norm2() > 2.25) { // |u| > 1.5: swap stereographic chart
        const double q = p.u.norm2();
        p.u = p.u * (1.0 / q);
        p.chart = 1 - p.chart;
        return true;
    }
    return false;
}

ChartPoint Surface::to_chart(const ChartPoint& p, int chart) const {
    if (p.chart == chart) return p;
    if (kind_ != "sphere") throw std::invalid_argument("Surface::to_chart: single-chart surface");
    const double q = p.u.norm2();
    if (q == 0) throw std::invalid_argument("Surface::to_chart: pole not representable in other chart");
    return {chart, p.u * (1.0 / q)};
}

bool Surface::in_domain(const ChartPoint& p) const {
    if (kind_ == "plane") return std::abs(p.u.x) <= p1_ && std::abs(p.u.y) <= p1_;
    if (kind_ == "sphere") return p.u.norm2() <= 16.0;
    return true; // torus: periodic
}

std::vector<ChartPoint> Surface::seed_grid(int n) const {
    std::vector<ChartPoint> seeds;
    if (kind_ == "torus") {
        const double tau = 2 * 3.14159265358979323846;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                seeds.push_back({0, {(i + 0.31) * tau / n, (j + 0.47) * tau / n}});
        return seeds;
    }
    const double span = kind_ == "plane" ? p1_ * 0.9 : 1.25;
    for (int c = 0; c < charts_; ++c)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                seeds.push_back({c, {-span + (2 * span * (i + 0.5)) / n + 0.013,
                                     -span + (2 * span * (j + 0.5)) / n + 0.007}});
    return seeds;
}

void Surface::validate() const {
    for (const ChartPoint& p : seed_grid(5)) {
        Vec3 e1, e2;
        jacobian(p, e1, e2);
        if (e1.cross(e2).norm() < 1e-10)
            throw std::runtime_error("Surface::validate: rank-deficient Jacobian");
        const Mat2 g = metric(p);
        if (g.a <= 0 || g.det() <= 0)
            throw std::runtime_error("Surface::validate: metric not positive definite");
    }
}

} // namespace morse
