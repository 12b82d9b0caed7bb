#include "morsetower/homotopy.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace morse {

MorseSmalePair MorseSmalePair::build(std::shared_ptr<const Surface> surface, ScalarField f,
                                     int seeds_per_chart, const Tolerances& tol) {
    MorseSmalePair pair;
    pair.surface = std::move(surface);
    pair.critical_points = find_critical_points(*pair.surface, f, seeds_per_chart, tol);
    pair.f = std::move(f);
    return pair;
}

std::vector<const CriticalPoint*> MorseSmalePair::by_index(int k) const {
    std::vector<const CriticalPoint*> out;
    for (const CriticalPoint& p : critical_points)
        if (p.index == k) out.push_back(&p);
    return out;
}

double ParamHomotopy::value(std::span<const double> s, double t, const Vec3& x) const {
    return jet(s, t, x).v;
}

Jet ParamHomotopy::jet(std::span<const double> s, double t, const Vec3& x) const {
    EvalEnv env;
    env.x = x.x;
    env.y = x.y;
    env.z = x.z;
    return H(s, t, env);
}

Vec2 ParamHomotopy::chart_grad(std::span<const double> s, double t, const ChartPoint& p) const {
    Vec3 g;
    if (Hg) {
        const Vec3 x = surface->embed(p);
        EvalEnv env;
        env.x = x.x;
        env.y = x.y;
        env.z = x.z;
        const GradVal gv = Hg(s, t, env);
        g = {gv.g[0], gv.g[1], gv.g[2]};
    } else {
        const Jet j = jet(s, t, surface->embed(p));
        g = {j.g[0], j.g[1], j.g[2]};
    }
    Vec3 e1, e2;
    surface->jacobian(p, e1, e2);
    return {g.dot(e1), g.dot(e2)};
}

Vec2 ParamHomotopy::metric_grad(std::span<const double> s, double t, const ChartPoint& p) const {
    return surface->metric(p).inverse().apply(chart_grad(s, t, p));
}

ParamHomotopy ParamHomotopy::slice_leading(double v) const {
    if (ell < 1) throw std::invalid_argument("ParamHomotopy::slice_leading: no parameters");
    ParamHomotopy out = *this;
    out.ell = ell - 1;
    out.constant_in_lead = false;
    const int n = ell;
    auto remap = [v, n](auto&& inner, std::span<const double> s, double t, const EvalEnv& env) {
        std::array<double, 4> full{};
        for (int i = 0; i + 1 < n; ++i) full[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(i)];
        full[static_cast<std::size_t>(n - 1)] = v;
        return inner(std::span<const double>(full.data(), static_cast<std::size_t>(n)), t, env);
    };
    const HomotopyEvaluator inner = H;
    out.H = [inner, remap](std::span<const double> s, double t, const EvalEnv& env) {
        return remap(inner, s, t, env);
    };
    if (Hg) {
        const HomotopyGradEvaluator innerg = Hg;
        out.Hg = [innerg, remap](std::span<const double> s, double t, const EvalEnv& env) {
            return remap(innerg, s, t, env);
        };
    }
    return out;
}

ParamHomotopy ParamHomotopy::facet(int side) const { return slice_leading(side == 0 ? 0.0 : 1.0); }

void ParamHomotopy::spot_check(const Tolerances& tol) const {
    const std::vector<ChartPoint> xs = spot_surface_points(*surface);
    const std::vector<double> ss = spot_parameter_values();
    const double T = cutoff;
    const double eq_tol = std::max(tol.spot_tol, 1e-11);

    auto sweep_params = [&](auto&& fn) {
        std::array<double, 3> s{};
        if (ell == 0) {
            fn(std::span<const double>(s.data(), 0));
            return;
        }
        for (double a : ss) {
            s[0] = a;
            if (ell == 1) {
                fn(std::span<const double>(s.data(), 1));
                continue;
            }
            for (double b : ss) {
                s[1] = b;
                if (ell == 2) {
                    fn(std::span<const double>(s.data(), 2));
                    continue;
                }
                for (double c : ss) {
                    s[2] = c;
                    fn(std::span<const double>(s.data(), 3));
                }
            }
        }
    };

    // finite ends: H == f_alpha before the window, f_beta after it
    for (double dt : {0.0, 0.7, 3.0}) {
        for (const ChartPoint& p : xs) {
            const Vec3 x = surface->embed(p);
            const double fa = alpha->f.value(*surface, p);
            const double fb = beta->f.value(*surface, p);
            sweep_params([&](std::span<const double> s) {
                if (std::abs(value(s, -T - dt, x) - fa) > eq_tol)
                    throw std::runtime_error("ParamHomotopy: H != f_alpha at t <= -T");
                if (std::abs(value(s, T + dt, x) - fb) > eq_tol)
                    throw std::runtime_error("ParamHomotopy: H != f_beta at t >= T");
            });
        }
    }

    // atavistic collapse for inner slots: fixing slot i at 0 or 1 kills the
    // dependence on every slot above i
    for (int i = 0; i + 1 < ell; ++i) {
        for (double v01 : {0.0, 1.0}) {
            for (const ChartPoint& p : xs) {
                const Vec3 x = surface->embed(p);
                for (double tv : spot_time_values(T)) {
                    double ref = 0;
                    bool have_ref = false;
                    sweep_params([&](std::span<const double> s) {
                        std::array<double, 3> mod{};
                        for (int k = 0; k < ell; ++k) mod[static_cast<std::size_t>(k)] = s[static_cast<std::size_t>(k)];
                        mod[static_cast<std::size_t>(i)] = v01;
                        const double val = value(std::span<const double>(mod.data(), static_cast<std::size_t>(ell)), tv, x);
                        if (!have_ref) {
                            // reference: everything above slot i zeroed
                            std::array<double, 3> base = mod;
                            for (int k = i + 1; k < ell; ++k) base[static_cast<std::size_t>(k)] = 0;
                            ref = value(std::span<const double>(base.data(), static_cast<std::size_t>(ell)), tv, x);
                            have_ref = true;
                        }
                        if (std::abs(val - ref) > eq_tol)
                            throw std::runtime_error("ParamHomotopy: facet collapse violated at slot " +
                                                     std::to_string(i));
                    });
                }
            }
        }
    }
}

ParamHomotopy constant_homotopy(std::shared_ptr<const MorseSmalePair> pair, double cutoff) {
    ParamHomotopy h;
    h.ell = 0;
    h.cutoff = cutoff;
    h.surface = pair->surface;
    h.alpha = pair;
    h.beta = pair;
    h.constant_in_s = true;
    h.constant_in_t = true;
    const Expression f = pair->f.expression();
    h.H = [f](std::span<const double>, double, const EvalEnv& env) { return f.jet(env); };
    h.Hg = [f](std::span<const double>, double, const EvalEnv& env) {
        GradVal gv;
        f.grad(env, gv.v, gv.g);
        return gv;
    };
    return h;
}

ParamHomotopy expression_homotopy(std::shared_ptr<const MorseSmalePair> alpha,
                                  std::shared_ptr<const MorseSmalePair> beta, int ell,
                                  double cutoff, const Expression& expr) {
    if (alpha->surface != beta->surface)
        throw std::invalid_argument("expression_homotopy: ends must share the surface");
    ParamHomotopy h;
    h.ell = ell;
    h.cutoff = cutoff;
    h.surface = alpha->surface;
    h.alpha = std::move(alpha);
    h.beta = std::move(beta);
    h.H = [expr](std::span<const double> s, double t, const EvalEnv& env0) {
        EvalEnv env = env0;
        env.t = t;
        env.s1 = s.size() > 0 ? s[0] : 0;
        env.s2 = s.size() > 1 ? s[1] : 0;
        env.s3 = s.size() > 2 ? s[2] : 0;
        return expr.jet(env);
    };
    h.Hg = [expr](std::span<const double> s, double t, const EvalEnv& env0) {
        EvalEnv env = env0;
        env.t = t;
        env.s1 = s.size() > 0 ? s[0] : 0;
        env.s2 = s.size() > 1 ? s[1] : 0;
        env.s3 = s.size() > 2 ? s[2] : 0;
        GradVal gv;
        expr.grad(env, gv.v, gv.g);
        return gv;
    };
    return h;
}

std::vector<ChartPoint> spot_surface_points(const Surface& s) {
    std::vector<ChartPoint> pts = s.seed_grid(3);
    if (pts.size() > 12) pts.resize(12);
    return pts;
}

std::vector<double> spot_parameter_values() { return {0.0, 0.25, 0.5, 0.75, 1.0}; }

std::vector<double> spot_time_values(double cutoff) {
    std::vector<double> ts;
    for (int i = 0; i < 9; ++i) ts.push_back(-(cutoff + 1.0) + (2.0 * (cutoff + 1.0) * i) / 8.0);
    return ts;
}

bool homotopy_equal_on_spots(const ParamHomotopy& a, const ParamHomotopy& b, double tol) {
    if (a.ell != b.ell) return false;
    const std::vector<ChartPoint> xs = spot_surface_points(*a.surface);
    const std::vector<double> ss = spot_parameter_values();
    const std::vector<double> ts = spot_time_values(std::max(a.cutoff, b.cutoff));

    std::array<double, 3> s{};
    std::vector<std::size_t> idx(static_cast<std::size_t>(std::max(a.ell, 0)), 0);
    for (;;) {
        for (std::size_t k = 0; k < idx.size(); ++k) s[k] = ss[idx[k]];
        for (double t : ts)
            for (const ChartPoint& p : xs) {
                const Vec3 x = a.surface->embed(p);
                if (std::abs(a.value(std::span<const double>(s.data(), idx.size()), t, x) -
                             b.value(std::span<const double>(s.data(), idx.size()), t, x)) > tol)
                    return false;
            }
        // advance mixed-radix counter
        std::size_t k = 0;
        for (; k < idx.size(); ++k) {
            if (++idx[k] < ss.size()) break;
            idx[k] = 0;
        }
        if (k == idx.size()) break;
        if (idx.empty()) break;
    }
    return true;
}

} // namespace morse
