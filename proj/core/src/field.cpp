#include "morsetower/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace morse {

namespace {

EvalEnv env_at(const Surface& s, const ChartPoint& p) {
    const Vec3 a = s.embed(p);
    EvalEnv env;
    env.x = a.x;
    env.y = a.y;
    env.z = a.z;
    return env;
}

} // namespace

double ScalarField::value(const Surface& s, const ChartPoint& p) const {
    return f_.value(env_at(s, p));
}

Vec2 ScalarField::chart_grad(const Surface& s, const ChartPoint& p) const {
    double v;
    std::array<double, 3> g;
    f_.grad(env_at(s, p), v, g);
    Vec3 e1, e2;
    s.jacobian(p, e1, e2);
    const Vec3 gF{g[0], g[1], g[2]};
    return {gF.dot(e1), gF.dot(e2)};
}

Mat2 ScalarField::chart_hess(const Surface& s, const ChartPoint& p) const {
    const Jet j = f_.jet(env_at(s, p));
    Vec3 e[2];
    s.jacobian(p, e[0], e[1]);
    Vec3 d11, d12, d22;
    s.second(p, d11, d12, d22);
    const Vec3 gF{j.g[0], j.g[1], j.g[2]};
    auto hquad = [&](const Vec3& a, const Vec3& b) {
        double acc = 0;
        const double av[3] = {a.x, a.y, a.z};
        const double bv[3] = {b.x, b.y, b.z};
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k) acc += j.hess(i, k) * av[i] * bv[k];
        return acc;
    };
    const double h11 = hquad(e[0], e[0]) + gF.dot(d11);
    const double h12 = hquad(e[0], e[1]) + gF.dot(d12);
    const double h22 = hquad(e[1], e[1]) + gF.dot(d22);
    return {h11, h12, h12, h22};
}

void ScalarField::check_derivatives(const Surface& s, double rel_tol) const {
    const double h = 1e-6;
    double max_rel = 0;
    for (const ChartPoint& p : s.seed_grid(4)) {
        const Vec2 g = chart_grad(s, p);
        auto fd = [&](int axis) {
            ChartPoint pp = p, pm = p;
            (axis == 0 ? pp.u.x : pp.u.y) += h;
            (axis == 0 ? pm.u.x : pm.u.y) -= h;
            return (value(s, pp) - value(s, pm)) / (2 * h);
        };
        const double scale = std::max({1.0, std::abs(g.x), std::abs(g.y)});
        max_rel = std::max(max_rel, std::abs(fd(0) - g.x) / scale);
        max_rel = std::max(max_rel, std::abs(fd(1) - g.y) / scale);
    }
    if (max_rel > rel_tol)
        throw std::runtime_error("ScalarField: derivative self-check failed, rel err " +
                                 std::to_string(max_rel));
}

Vec2 gradient(const Surface& s, const ScalarField& f, const ChartPoint& p) {
    const Mat2 g = s.metric(p);
    if (std::abs(g.det()) < 1e-14) throw std::runtime_error("gradient: singular metric");
    return g.inverse().apply(f.chart_grad(s, p));
}

namespace {

// chart-invariant gradient magnitude |df|_g; safe to compare across charts
double invariant_grad_norm(const Surface& s, const ScalarField& f, const ChartPoint& p) {
    const Vec2 df = f.chart_grad(s, p);
    const Vec2 up = s.metric(p).inverse().apply(df);
    return std::sqrt(std::max(0.0, df.dot(up)));
}

} // namespace

int morse_index(const Mat2& hess, const Mat2& metric, double nondegen_tol) {
    const PencilEig eig = sym_pencil_eig(hess, metric);
    int idx = 0;
    for (double l : eig.lambda) {
        if (std::abs(l) < nondegen_tol)
            throw std::runtime_error("morse_index: near-zero Hessian eigenvalue " + std::to_string(l));
        if (l < 0) ++idx;
    }
    return idx;
}

std::vector<CriticalPoint> find_critical_points(const Surface& s, const ScalarField& f,
                                                int seeds_per_chart, const Tolerances& tol) {
    std::vector<CriticalPoint> found;

    for (const ChartPoint& seed : s.seed_grid(seeds_per_chart)) {
        ChartPoint p = seed;
        bool converged = false;
        double gnorm = invariant_grad_norm(s, f, p);
        for (int it = 0; it < 80; ++it) {
            if (gnorm < tol.grad_tol) {
                converged = true;
                break;
            }
            const Vec2 g = f.chart_grad(s, p);
            const Mat2 h = f.chart_hess(s, p);
            if (std::abs(h.det()) < 1e-14) break;
            Vec2 dir = h.inverse().apply(g);
            const double n = dir.norm();
            if (n > 0.5) dir = dir * (0.5 / n);
            // backtracking on the invariant |df|_g keeps far seeds from ricocheting
            bool advanced = false;
            for (double lam = 1.0; lam > 1.0 / 256; lam *= 0.5) {
                ChartPoint trial{p.chart, p.u - dir * lam};
                s.normalize(trial);
                if (!s.in_domain(trial)) continue;
                const double gt = invariant_grad_norm(s, f, trial);
                if (gt < gnorm) {
                    p = trial;
                    gnorm = gt;
                    advanced = true;
                    break;
                }
            }
            if (!advanced) break;
        }
        if (!converged) continue;
        s.normalize(p);

        bool duplicate = false;
        for (const CriticalPoint& q : found)
            if (s.ambient_distance(p, q.at) < std::max(tol.dedup_tol, 1e-9)) {
                duplicate = true;
                break;
            }
        if (duplicate) continue;

        CriticalPoint cp;
        cp.at = p;
        cp.value = f.value(s, p);
        const Mat2 h = f.chart_hess(s, p);
        const Mat2 g = s.metric(p);
        const PencilEig eig = sym_pencil_eig(h, g);
        cp.hessian_eigs = eig.lambda;
        for (double l : eig.lambda)
            if (std::abs(l) < tol.nondegen_tol)
                throw std::runtime_error("find_critical_points: degenerate critical point near (" +
                                         std::to_string(p.u.x) + "," + std::to_string(p.u.y) +
                                         ") chart " + std::to_string(p.chart));
        cp.index = (eig.lambda[0] < 0 ? 1 : 0) + (eig.lambda[1] < 0 ? 1 : 0);
        found.push_back(cp);
    }

    std::sort(found.begin(), found.end(), [&](const CriticalPoint& a, const CriticalPoint& b) {
        if (a.index != b.index) return a.index < b.index;
        // near-ties in value (symmetric scenarios) fall through to coordinates
        if (std::abs(a.value - b.value) > 1e-9) return a.value < b.value;
        const Vec3 pa = s.embed(a.at), pb = s.embed(b.at);
        if (std::abs(pa.x - pb.x) > 1e-9) return pa.x < pb.x;
        if (std::abs(pa.y - pb.y) > 1e-9) return pa.y < pb.y;
        return pa.z < pb.z;
    });
    std::vector<int> per_index(8, 0);
    for (CriticalPoint& cp : found)
        cp.id = "c" + std::to_string(cp.index) + "_" + std::to_string(per_index[static_cast<std::size_t>(cp.index)]++);
    return found;
}

const CriticalPoint& find_by_id(const std::vector<CriticalPoint>& pts, const std::string& id) {
    for (const CriticalPoint& p : pts)
        if (p.id == id) return p;
    throw std::invalid_argument("no critical point with id '" + id + "'");
}

} // namespace morse
