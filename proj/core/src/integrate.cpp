#include <cmath>
#include <stdexcept>

#include "morsetower/flow.hpp"

namespace morse {

FlowSpec FlowSpec::autonomous(const MorseSmalePair& p) {
    FlowSpec s;
    s.surface = p.surface;
    s.field = &p.f;
    s.pair = &p;
    return s;
}

FlowSpec FlowSpec::slice(const ParamHomotopy& h, std::vector<double> s_fixed) {
    FlowSpec s;
    s.surface = h.surface;
    s.homotopy = &h;
    s.s = std::move(s_fixed);
    s.t_window = h.cutoff;
    return s;
}

Vec2 FlowSpec::velocity(double t, const ChartPoint& p) const {
    Vec2 g;
    if (homotopy) {
        g = homotopy->metric_grad(std::span<const double>(s.data(), s.size()), t, p);
    } else {
        g = surface->metric(p).inverse().apply(field->chart_grad(*surface, p));
    }
    return {-g.x, -g.y};
}

void FlowSpec::check(const Tolerances& tol) const {
    const double eq = std::max(tol.spot_tol, 1e-10);
    for (const ChartPoint& p : spot_surface_points(*surface)) {
        if (is_autonomous()) {
            const Vec2 a = velocity(0.0, p), b = velocity(17.25, p);
            if (std::abs(a.x - b.x) > eq || std::abs(a.y - b.y) > eq)
                throw std::runtime_error("FlowSpec: static driver is time dependent");
        } else {
            const Mat2 ginv = surface->metric(p).inverse();
            const Vec2 va = ginv.apply(homotopy->alpha->f.chart_grad(*surface, p));
            const Vec2 vb = ginv.apply(homotopy->beta->f.chart_grad(*surface, p));
            const Vec2 ea = velocity(-t_window - 1.0, p);
            const Vec2 eb = velocity(t_window + 1.0, p);
            if (std::abs(ea.x + va.x) > eq || std::abs(ea.y + va.y) > eq)
                throw std::runtime_error("FlowSpec: field != -grad f_alpha before the window");
            if (std::abs(eb.x + vb.x) > eq || std::abs(eb.y + vb.y) > eq)
                throw std::runtime_error("FlowSpec: field != -grad f_beta after the window");
        }
    }
}

namespace {

// Dormand-Prince 5(4) tableau
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
constexpr double E1 = 35.0 / 384 - 5179.0 / 57600, E3 = 500.0 / 1113 - 7571.0 / 16695,
                 E4 = 125.0 / 192 - 393.0 / 640, E5 = -2187.0 / 6784 + 92097.0 / 339200,
                 E6 = 11.0 / 84 - 187.0 / 2100, E7 = -1.0 / 40;
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;

struct RunCtrl {
    double max_ds = 0;       // 0 = unlimited spatial step
    bool stop = false;       // set by after_step to end the run
};

// Integrate dp/dt = vel(t,p) from t0 to t1 (t1 > t0). after_step may stop.
template <typename Vel, typename After>
void dp45_run(const Surface& surf, Vel&& vel, double t0, double t1, ChartPoint& p, double& t,
              double rel, double abs_tol, RunCtrl& ctrl, After&& after_step) {
    t = t0;
    double h = std::min(1e-3, t1 - t0);
    int rejects_in_row = 0;
    while (t < t1 && !ctrl.stop) {
        if (t + h > t1) h = t1 - t;
        const int chart = p.chart;
        const Vec2 y{p.u.x, p.u.y};
        auto at = [&](Vec2 u) { return ChartPoint{chart, u}; };

        const Vec2 k1 = vel(t, at(y));
        const Vec2 k2 = vel(t + C2 * h, at(y + k1 * (A21 * h)));
        const Vec2 k3 = vel(t + C3 * h, at(y + k1 * (A31 * h) + k2 * (A32 * h)));
        const Vec2 k4 = vel(t + C4 * h, at(y + k1 * (A41 * h) + k2 * (A42 * h) + k3 * (A43 * h)));
        const Vec2 k5 = vel(t + C5 * h,
                            at(y + k1 * (A51 * h) + k2 * (A52 * h) + k3 * (A53 * h) + k4 * (A54 * h)));
        const Vec2 k6 = vel(t + h, at(y + k1 * (A61 * h) + k2 * (A62 * h) + k3 * (A63 * h) +
                                      k4 * (A64 * h) + k5 * (A65 * h)));
        const Vec2 ynew = y + k1 * (B1 * h) + k3 * (B3 * h) + k4 * (B4 * h) + k5 * (B5 * h) +
                          k6 * (B6 * h);
        const Vec2 k7 = vel(t + h, at(ynew));
        const Vec2 err = k1 * (E1 * h) + k3 * (E3 * h) + k4 * (E4 * h) + k5 * (E5 * h) +
                         k6 * (E6 * h) + k7 * (E7 * h);

        const double sx = abs_tol + rel * std::max(std::abs(y.x), std::abs(ynew.x));
        const double sy = abs_tol + rel * std::max(std::abs(y.y), std::abs(ynew.y));
        const double enorm = std::sqrt(0.5 * ((err.x / sx) * (err.x / sx) + (err.y / sy) * (err.y / sy)));

        bool accept = enorm <= 1.0;
        double ds_fac = 1.0;
        if (accept && ctrl.max_ds > 0) {
            const double ds = surf.ambient_distance(at(y), at(ynew));
            if (ds > ctrl.max_ds) {
                accept = false;
                ds_fac = 0.8 * ctrl.max_ds / ds;
            }
        }

        if (accept) {
            rejects_in_row = 0;
            t += h;
            p = at(ynew);
            surf.normalize(p);
            const double grow = enorm > 0 ? 0.9 * std::pow(enorm, -0.2) : 5.0;
            h *= std::min(5.0, std::max(0.2, grow));
            after_step(t, p);
        } else {
            if (++rejects_in_row > 60) throw std::runtime_error("integrator: step size underflow");
            const double shrink = enorm > 1.0 ? 0.9 * std::pow(enorm, -0.2) : 1.0;
            h *= std::min(ds_fac, std::max(0.1, shrink));
            if (h < 1e-14) throw std::runtime_error("integrator: step size underflow");
        }
    }
}

std::string nearest_cp_label(const MorseSmalePair& pair, const ChartPoint& p, double radius) {
    const Vec3 x = pair.surface->embed(p);
    for (const CriticalPoint& cp : pair.critical_points)
        if ((pair.surface->embed(cp.at) - x).norm() < radius) return cp.id;
    return {};
}

} // namespace

Trajectory integrate(const FlowSpec& spec, const ChartPoint& x0, Direction dir, const Tolerances& tol,
                     double max_ds) {
    const Surface& surf = *spec.surface;
    const MorseSmalePair* settle_pair = nullptr;
    double settle_after = -1e300; // in run time units
    const double sgn = dir == Direction::Forward ? 1.0 : -1.0;

    if (spec.is_autonomous()) {
        settle_pair = spec.pair;
    } else {
        settle_pair = dir == Direction::Forward ? spec.homotopy->beta.get() : spec.homotopy->alpha.get();
        settle_after = spec.t_window; // run time tau >= T means past the window
    }
    if (!settle_pair) throw std::invalid_argument("integrate: spec carries no critical points");

    // Backward runs integrate w(tau) = u(-tau), dw/dtau = -V(-tau, w).
    auto vel = [&](double tau, const ChartPoint& p) {
        const Vec2 v = spec.velocity(sgn * tau, p);
        return Vec2{sgn * v.x, sgn * v.y};
    };

    const MorseSmalePair* start_pair = spec.is_autonomous()
                                           ? spec.pair
                                           : (dir == Direction::Forward ? spec.homotopy->alpha.get()
                                                                        : spec.homotopy->beta.get());
    Trajectory tr;
    tr.start_label = nearest_cp_label(*start_pair, x0, 0.01);
    if (!spec.s.empty()) tr.parameter = spec.s[0];
    ChartPoint p = x0;
    double tau0 = spec.is_autonomous() ? 0.0 : -spec.t_window;
    tr.times.push_back(sgn * tau0);
    tr.points.push_back(p);

    RunCtrl ctrl;
    ctrl.max_ds = max_ds;
    std::string end_label;
    const int attracting_index = dir == Direction::Forward ? 0 : 2;
    auto after = [&](double tau, const ChartPoint& q) {
        tr.times.push_back(sgn * tau);
        tr.points.push_back(q);
        if (tau < settle_after) return;
        const double gn = settle_pair->f.chart_grad(surf, q).norm();
        if (gn < tol.settle_tol) {
            const std::string lbl = nearest_cp_label(*settle_pair, q, 0.05);
            if (!lbl.empty()) {
                end_label = lbl;
                ctrl.stop = true;
            }
            return;
        }
        // basin capture: once inside the quadratic neighbourhood of a point
        // that attracts this flow direction, the label is decided; the
        // recorded endpoint is the limit point itself
        if (gn < 1e-4) {
            const Vec3 x = surf.embed(q);
            for (const CriticalPoint& cp : settle_pair->critical_points) {
                if (cp.index != attracting_index) continue;
                if ((surf.embed(cp.at) - x).norm() < 0.02) {
                    end_label = cp.id;
                    tr.times.push_back(tr.times.back());
                    tr.points.push_back(cp.at);
                    ctrl.stop = true;
                    return;
                }
            }
        }
    };

    double tau = tau0;
    dp45_run(surf, vel, tau0, tol.t_max, p, tau, tol.rk_rel, tol.rk_abs, ctrl, after);

    if (end_label.empty()) {
        // constant trajectory at a critical point settles immediately
        const Vec2 g = settle_pair->f.chart_grad(surf, p);
        if (spec.is_autonomous() && g.norm() < tol.settle_tol) {
            end_label = nearest_cp_label(*settle_pair, p, 0.05);
        }
    }
    if (end_label.empty()) {
        tr.escaped = true;
        tr.end_label = "escaped";
    } else {
        tr.end_label = end_label;
    }
    return tr;
}

ChartPoint transport_window(const ParamHomotopy& h, std::span<const double> s, const ChartPoint& from,
                            Direction dir, const Tolerances& tol) {
    const double T = h.cutoff;
    const double sgn = dir == Direction::Forward ? 1.0 : -1.0;
    std::vector<double> sv(s.begin(), s.end());
    auto vel = [&](double tau, const ChartPoint& p) {
        const Vec2 g = h.metric_grad(std::span<const double>(sv.data(), sv.size()), sgn * tau, p);
        return Vec2{-sgn * g.x, -sgn * g.y};
    };
    ChartPoint p = from;
    double tau = -T;
    RunCtrl ctrl;
    dp45_run(*h.surface, vel, -T, T, p, tau, tol.rk_rel, tol.rk_abs, ctrl, [](double, const ChartPoint&) {});
    return p;
}

std::string settle_label(const MorseSmalePair& pair, const ChartPoint& x, Direction dir,
                         const Tolerances& tol) {
    FlowSpec spec = FlowSpec::autonomous(pair);
    return integrate(spec, x, dir, tol).end_label;
}

} // namespace morse
