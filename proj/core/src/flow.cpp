#include "morsetower/flow.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace morse {

namespace {

constexpr double kArcSpacing = 0.02;   // ambient density of separatrix polylines
constexpr double kGermSpacing = 0.06;  // source-germ sampling before transport
constexpr double kCurveGap = 0.04;     // transported-curve refinement target
constexpr double kSnapRadius = 1e-3;   // a refined crossing must approach this close

Vec2 eig_direction(const CriticalPoint& cp, const MorseSmalePair& pair, bool unstable) {
    const Mat2 h = pair.f.chart_hess(*pair.surface, cp.at);
    const Mat2 g = pair.surface->metric(cp.at);
    const PencilEig eig = sym_pencil_eig(h, g);
    // negative eigenvalue direction is unstable for the negative gradient flow
    Vec2 v = unstable ? eig.vec[0] : eig.vec[1];
    if (unstable && eig.lambda[0] >= 0)
        throw std::invalid_argument("separatrices: point has no unstable direction");
    if (!unstable && eig.lambda[1] <= 0)
        throw std::invalid_argument("separatrices: point has no stable direction");
    // deterministic orientation
    if (v.x < 0 || (v.x == 0 && v.y < 0)) v = v * -1.0;
    return v;
}

} // namespace

std::vector<Trajectory> separatrices(const MorseSmalePair& pair, const std::string& saddle_id,
                                     const Tolerances& tol) {
    const CriticalPoint& cp = pair.cp(saddle_id);
    if (cp.index != 1)
        throw std::invalid_argument("separatrices: '" + saddle_id + "' is not an index-1 point");

    const Vec2 vu = eig_direction(cp, pair, true);
    const Vec2 vs = eig_direction(cp, pair, false);
    FlowSpec spec = FlowSpec::autonomous(pair);

    auto trace = [&](Vec2 dirv, double eps, Direction d) {
        ChartPoint seed{cp.at.chart, cp.at.u + dirv * eps};
        pair.surface->normalize(seed);
        Trajectory tr = integrate(spec, seed, d, tol, kArcSpacing);
        tr.start_label = cp.id;
        return tr;
    };

    std::vector<Trajectory> out;
    for (double sgn : {1.0, -1.0}) out.push_back(trace(vu * sgn, tol.sep_eps, Direction::Forward));
    for (double sgn : {1.0, -1.0}) out.push_back(trace(vs * sgn, tol.sep_eps, Direction::Backward));

    // one Richardson check: half the seeding distance, labels must agree
    const char* names[4] = {"unstable+", "unstable-", "stable+", "stable-"};
    for (int k = 0; k < 4; ++k) {
        const Vec2 dirv = (k < 2 ? vu : vs) * (k % 2 == 0 ? 1.0 : -1.0);
        const Direction d = k < 2 ? Direction::Forward : Direction::Backward;
        ChartPoint seed{cp.at.chart, cp.at.u + dirv * (tol.sep_eps * 0.5)};
        pair.surface->normalize(seed);
        FlowSpec sp2 = spec;
        Trajectory half = integrate(sp2, seed, d, tol);
        if (half.end_label != out[static_cast<std::size_t>(k)].end_label)
            throw std::runtime_error("separatrices: " + std::string(names[k]) +
                                     " label unstable under seed halving");
    }
    return out;
}

FlowLineCount count_flow_lines(const MorseSmalePair& pair, const std::string& p_id,
                               const std::string& q_id, const Tolerances& tol) {
    const CriticalPoint& p = pair.cp(p_id);
    const CriticalPoint& q = pair.cp(q_id);
    if (p.index - q.index != 1)
        throw std::invalid_argument("count_flow_lines: index gap must be one");

    FlowLineCount out;
    if (p.index == 1) {
        // saddle -> min: forward unstable separatrices of p
        std::vector<Trajectory> seps = separatrices(pair, p_id, tol);
        for (std::size_t k = 0; k < 2; ++k) {
            Trajectory& tr = seps[k];
            if (tr.escaped) throw std::runtime_error("count_flow_lines: escaped separatrix from " + p_id);
            if (tr.end_label == q_id) {
                ++out.count;
                out.witnesses.push_back(std::move(tr));
            }
        }
    } else {
        // max -> saddle: backward stable separatrices of q
        std::vector<Trajectory> seps = separatrices(pair, q_id, tol);
        for (std::size_t k = 2; k < 4; ++k) {
            Trajectory& tr = seps[k];
            if (tr.escaped) throw std::runtime_error("count_flow_lines: escaped separatrix into " + q_id);
            if (tr.end_label == p_id) {
                ++out.count;
                out.witnesses.push_back(std::move(tr));
            }
        }
    }
    out.parity = out.count % 2;
    return out;
}

namespace {

Arc arc_from_branches(const Surface& surf, const Trajectory& plus, const Trajectory& minus,
                      const CriticalPoint& center, const MorseSmalePair& pair) {
    auto cp_point = [&](const std::string& id) { return pair.cp(id).at; };

    Arc arc;
    auto push = [&](const ChartPoint& p) {
        const Vec3 a = surf.embed(p);
        if (!arc.ambient.empty() && (arc.ambient.back() - a).norm() < 1e-12) return;
        arc.pts.push_back(p);
        arc.ambient.push_back(a);
    };

    if (!plus.escaped && !plus.end_label.empty()) push(cp_point(plus.end_label));
    for (std::size_t i = plus.points.size(); i-- > 0;) push(plus.points[i]);
    push(center.at);
    for (const ChartPoint& p : minus.points) push(p);
    if (!minus.escaped && !minus.end_label.empty()) push(cp_point(minus.end_label));

    arc.normal.resize(arc.pts.size());
    for (std::size_t i = 0; i < arc.pts.size(); ++i) {
        Vec3 e1, e2;
        surf.jacobian(arc.pts[i], e1, e2);
        const Vec3 nu = e1.cross(e2).normalized();
        const Vec3 prev = arc.ambient[i > 0 ? i - 1 : i];
        const Vec3 next = arc.ambient[i + 1 < arc.ambient.size() ? i + 1 : i];
        Vec3 tau = next - prev;
        if (tau.norm() < 1e-14) tau = Vec3{1, 0, 0};
        arc.normal[i] = nu.cross(tau.normalized()).normalized();
    }
    return arc;
}

} // namespace

Arc::Near Arc::nearest(const Vec3& x) const {
    Near best;
    best.dist = 1e300;
    for (std::size_t i = 0; i + 1 < ambient.size(); ++i) {
        const Vec3 a = ambient[i], b = ambient[i + 1];
        const Vec3 ab = b - a;
        const double denom = ab.norm2();
        double f = denom > 0 ? (x - a).dot(ab) / denom : 0.0;
        f = std::clamp(f, 0.0, 1.0);
        const Vec3 proj = a + ab * f;
        const double d = (x - proj).norm();
        if (d < best.dist) {
            best.dist = d;
            best.seg = i;
            best.frac = f;
            best.proj = proj;
            const Vec3 n = (normal[i] * (1 - f) + normal[i + 1] * f).normalized();
            best.side = (x - proj).dot(n);
        }
    }
    return best;
}

Arc stable_arc(const MorseSmalePair& pair, const std::string& saddle_id, const Tolerances& tol) {
    const std::vector<Trajectory> seps = separatrices(pair, saddle_id, tol);
    return arc_from_branches(*pair.surface, seps[2], seps[3], pair.cp(saddle_id), pair);
}

Arc unstable_arc(const MorseSmalePair& pair, const std::string& saddle_id, const Tolerances& tol) {
    const std::vector<Trajectory> seps = separatrices(pair, saddle_id, tol);
    return arc_from_branches(*pair.surface, seps[0], seps[1], pair.cp(saddle_id), pair);
}

GermSource germ_source(const MorseSmalePair& pair, const std::string& id, const Tolerances& tol) {
    const CriticalPoint& cp = pair.cp(id);
    GermSource g;
    if (cp.index == 0) {
        g.is_point = true;
        g.point = cp.at;
        return g;
    }
    if (cp.index == 1) {
        g.arc = unstable_arc(pair, id, tol);
        return g;
    }
    throw std::invalid_argument("germ_source: forward germ needs index 0 or 1");
}

namespace {

/// Source arc resampled to at most `spacing` between consecutive vertices,
/// with a [0,1] chord-length parameter per vertex.
struct SampledCurve {
    std::vector<ChartPoint> src;
    std::vector<double> tau;
};

SampledCurve resample_arc(const Surface& surf, const Arc& arc, double spacing) {
    SampledCurve out;
    if (arc.pts.empty()) return out;
    std::vector<double> cum{0.0};
    for (std::size_t i = 1; i < arc.ambient.size(); ++i)
        cum.push_back(cum.back() + (arc.ambient[i] - arc.ambient[i - 1]).norm());
    const double total = cum.back() > 0 ? cum.back() : 1.0;

    out.src.push_back(arc.pts.front());
    out.tau.push_back(0.0);
    for (std::size_t i = 1; i < arc.pts.size(); ++i) {
        const double seglen = cum[i] - cum[i - 1];
        const int extra = static_cast<int>(seglen / spacing);
        for (int k = 1; k <= extra; ++k) {
            const double f = static_cast<double>(k) / (extra + 1);
            ChartPoint a = arc.pts[i - 1];
            ChartPoint b = arc.pts[i];
            if (a.chart != b.chart) continue; // keep endpoints only across switches
            ChartPoint mid{a.chart, a.u + (b.u - a.u) * f};
            surf.normalize(mid);
            out.src.push_back(mid);
            out.tau.push_back((cum[i - 1] + f * seglen) / total);
        }
        out.src.push_back(arc.pts[i]);
        out.tau.push_back(cum[i] / total);
    }
    return out;
}

ChartPoint lerp_on_surface(const Surface& surf, const ChartPoint& a0, const ChartPoint& b0, double f) {
    ChartPoint a = a0, b = b0;
    if (a.chart != b.chart) b = surf.to_chart(b, a.chart);
    ChartPoint m{a.chart, a.u + (b.u - a.u) * f};
    surf.normalize(m);
    return m;
}

struct TransportedCurve {
    std::vector<ChartPoint> src;
    std::vector<double> tau;
    std::vector<ChartPoint> dst;
    std::vector<Vec3> dst_ambient;
};

TransportedCurve transport_curve(const ParamHomotopy& h, std::span<const double> s, const Arc& source,
                                 double spacing, const Tolerances& tol) {
    const Surface& surf = *h.surface;
    SampledCurve sc = resample_arc(surf, source, spacing);

    TransportedCurve out;
    for (std::size_t i = 0; i < sc.src.size(); ++i) {
        out.src.push_back(sc.src[i]);
        out.tau.push_back(sc.tau[i]);
        const ChartPoint d = transport_window(h, s, sc.src[i], Direction::Forward, tol);
        out.dst.push_back(d);
        out.dst_ambient.push_back(surf.embed(d));
    }

    // refine where the image stretched apart
    for (int pass = 0; pass < 10; ++pass) {
        bool refined = false;
        TransportedCurve next;
        for (std::size_t i = 0; i < out.src.size(); ++i) {
            if (i > 0 && (out.dst_ambient[i] - out.dst_ambient[i - 1]).norm() > kCurveGap &&
                (out.tau[i] - out.tau[i - 1]) > 1e-7) {
                ChartPoint mid = lerp_on_surface(surf, out.src[i - 1], out.src[i], 0.5);
                const ChartPoint d = transport_window(h, s, mid, Direction::Forward, tol);
                next.src.push_back(mid);
                next.tau.push_back(0.5 * (out.tau[i - 1] + out.tau[i]));
                next.dst.push_back(d);
                next.dst_ambient.push_back(surf.embed(d));
                refined = true;
            }
            next.src.push_back(out.src[i]);
            next.tau.push_back(out.tau[i]);
            next.dst.push_back(out.dst[i]);
            next.dst_ambient.push_back(out.dst_ambient[i]);
        }
        out = std::move(next);
        if (!refined) break;
    }
    return out;
}

} // namespace

CrossingReport curve_arc_crossings(const ParamHomotopy& h, std::span<const double> s,
                                   const Arc& source, const Arc& target, const Tolerances& tol) {
    const Surface& surf = *h.surface;
    TransportedCurve tc = transport_curve(h, s, source, kGermSpacing, tol);

    std::vector<double> chi(tc.dst.size());
    for (std::size_t i = 0; i < tc.dst.size(); ++i) chi[i] = target.signed_dist(tc.dst_ambient[i]);

    CrossingReport rep;
    for (double c : chi) rep.min_miss = std::min(rep.min_miss, std::abs(c));

    for (std::size_t i = 0; i + 1 < chi.size(); ++i) {
        if (chi[i] == 0.0) chi[i] = 1e-300; // displace exact zeros deterministically
        if (chi[i] * chi[i + 1] < 0) {
            // bisect the source segment
            ChartPoint a = tc.src[i], b = tc.src[i + 1];
            double ca = chi[i];
            double ta = tc.tau[i], tb = tc.tau[i + 1];
            ChartPoint hit = tc.dst[i];
            double dist = std::abs(ca);
            for (int it = 0; it < 60; ++it) {
                ChartPoint mid = lerp_on_surface(surf, a, b, 0.5);
                const ChartPoint d = transport_window(h, s, mid, Direction::Forward, tol);
                const double cm = target.signed_dist(surf.embed(d));
                if (std::abs(cm) < dist) {
                    dist = std::abs(cm);
                    hit = d;
                }
                if ((cm < 0) == (ca < 0)) {
                    a = mid;
                    ca = cm;
                    ta = 0.5 * (ta + tb);
                } else {
                    b = mid;
                    tb = 0.5 * (ta + tb);
                }
                if (dist < tol.cross_tol || std::abs(tb - ta) < 1e-13) break;
            }
            if (dist < kSnapRadius) {
                ++rep.count;
                rep.taus.push_back(0.5 * (ta + tb));
                rep.hits.push_back(hit);
            }
            // otherwise the nearest-segment side flipped around an arc
            // endpoint without an actual crossing; not a connecting orbit
        }
    }

    // tangency: a local minimum of |chi| under cross_tol with no sign change
    for (std::size_t i = 1; i + 1 < chi.size(); ++i) {
        const double m0 = std::abs(chi[i]);
        if (m0 < tol.cross_tol && m0 <= std::abs(chi[i - 1]) && m0 <= std::abs(chi[i + 1]) &&
            chi[i - 1] * chi[i + 1] > 0) {
            rep.tangency = true;
        }
    }
    if (rep.tangency) throw std::runtime_error("curve_arc_crossings: non-generic homotopy, perturb");

    rep.parity = rep.count % 2;
    return rep;
}

double miss_point_vs_arc(const ParamHomotopy& h, std::span<const double> s, const ChartPoint& from,
                         const Arc& target, const Tolerances& tol) {
    const ChartPoint d = transport_window(h, s, from, Direction::Forward, tol);
    return target.signed_dist(h.surface->embed(d));
}

ContinuationCount continuation_count(const ParamHomotopy& h, const std::string& p_id,
                                     const std::string& q_id, const Tolerances& tol) {
    if (h.ell != 0) throw std::invalid_argument("continuation_count: needs an ell=0 homotopy");
    const CriticalPoint& p = h.alpha->cp(p_id);
    const CriticalPoint& q = h.beta->cp(q_id);
    if (p.index != q.index)
        throw std::invalid_argument("continuation_count: indices must agree");

    ContinuationCount out;
    const std::span<const double> s0{};

    if (h.constant_in_t) {
        // identity interpolation: constant trajectories, Kronecker delta
        out.count = out.parity = (p_id == q_id) ? 1 : 0;
        return out;
    }

    if (p.index == 0) {
        const ChartPoint tp = transport_window(h, s0, p.at, Direction::Forward, tol);
        const std::string lbl = settle_label(*h.beta, tp, Direction::Forward, tol);
        if (lbl == "escaped") throw std::runtime_error("continuation_count: escaped trajectory");
        out.count = out.parity = (lbl == q_id) ? 1 : 0;
        FlowSpec spec = FlowSpec::slice(h, {});
        out.witnesses.push_back(integrate(spec, p.at, Direction::Forward, tol));
        return out;
    }
    if (p.index == 2) {
        const ChartPoint tp = transport_window(h, s0, q.at, Direction::Backward, tol);
        const std::string lbl = settle_label(*h.alpha, tp, Direction::Backward, tol);
        if (lbl == "escaped") throw std::runtime_error("continuation_count: escaped trajectory");
        out.count = out.parity = (lbl == p_id) ? 1 : 0;
        FlowSpec spec = FlowSpec::slice(h, {});
        out.witnesses.push_back(integrate(spec, q.at, Direction::Backward, tol));
        return out;
    }

    // index 1: transported unstable germ of p against the stable arc of q
    const Arc src = unstable_arc(*h.alpha, p_id, tol);
    const Arc dst = stable_arc(*h.beta, q_id, tol);
    CrossingReport rep = curve_arc_crossings(h, s0, src, dst, tol);
    out.count = rep.count;
    out.parity = rep.parity;
    for (const ChartPoint& hitp : rep.hits) {
        FlowSpec spec = FlowSpec::slice(h, {});
        Trajectory w;
        w.times = {h.cutoff};
        w.points = {hitp};
        w.start_label = p_id;
        w.end_label = q_id;
        out.witnesses.push_back(std::move(w));
    }
    return out;
}

void write_trajectory_csv(const Surface& s, const Trajectory& tr, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << "t,chart_id,u1,u2,x,y,z\n";
    f.precision(17);
    for (std::size_t i = 0; i < tr.points.size(); ++i) {
        const ChartPoint& p = tr.points[i];
        const Vec3 a = s.embed(p);
        f << tr.times[i] << ',' << p.chart << ',' << p.u.x << ',' << p.u.y << ',' << a.x << ','
          << a.y << ',' << a.z << '\n';
    }
}

} // namespace morse
