#include "morsetower/moduli.hpp"

#include "morsetower/parallel.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace morse {

int expected_dimension(int ind_p, int ind_q, int ell) { return ind_p - ind_q + ell; }

namespace {

/// Miss function m(s) for a gap-(+1) pair of an ell=1 family. Both supported
/// index pairs reduce to one window point-transport against a separatrix arc:
/// a minimum source is pushed forward against the stable arc of the target
/// saddle; a maximum target is pulled backward (its stable set is the point
/// itself) against the unstable arc of the source saddle.
struct MissFunction {
    const ParamHomotopy* h = nullptr;
    const Tolerances* tol = nullptr;
    bool forward = true;
    ChartPoint seed;
    Arc arc;

    double operator()(double s) const {
        ParamHomotopy slice = h->slice_leading(s);
        const std::span<const double> none{};
        const ChartPoint d = transport_window(slice, none, seed,
                                              forward ? Direction::Forward : Direction::Backward,
                                              *tol);
        return arc.signed_dist(h->surface->embed(d));
    }

    ChartPoint witness(double s) const {
        ParamHomotopy slice = h->slice_leading(s);
        const std::span<const double> none{};
        return transport_window(slice, none, seed,
                                forward ? Direction::Forward : Direction::Backward, *tol);
    }
};

MissFunction make_miss(const ParamHomotopy& h, const std::string& p_id, const std::string& c_id,
                       const Tolerances& tol) {
    const CriticalPoint& p = h.alpha->cp(p_id);
    const CriticalPoint& c = h.beta->cp(c_id);
    if (c.index != p.index + 1)
        throw std::invalid_argument("scan_nongeneric: index gap must be +1");
    MissFunction m;
    m.h = &h;
    m.tol = &tol;
    if (p.index == 0) {
        m.forward = true;
        m.seed = p.at;
        m.arc = stable_arc(*h.beta, c_id, tol);
    } else if (p.index == 1) {
        m.forward = false;
        m.seed = c.at;
        m.arc = unstable_arc(*h.alpha, p_id, tol);
    } else {
        throw std::invalid_argument("scan_nongeneric: source index must be 0 or 1 on a surface");
    }
    return m;
}

} // namespace

NonGenericLocus scan_nongeneric(const ParamHomotopy& h, const std::string& p_id,
                                const std::string& cprime_id, const Tolerances& tol) {
    if (h.ell != 1) throw std::invalid_argument("scan_nongeneric: needs an ell=1 family");
    NonGenericLocus locus;
    locus.source_id = p_id;
    locus.target_id = cprime_id;

    const MissFunction miss = make_miss(h, p_id, cprime_id, tol);

    if (h.constant_in_s) {
        const double m0 = miss(0.5);
        if (std::abs(m0) < tol.cross_tol)
            throw std::runtime_error("scan_nongeneric: requirement (*) violated, perturb homotopy");
        return locus; // no s-dependence, empty locus
    }

    const int n = tol.scan_grid;
    std::vector<double> svals(static_cast<std::size_t>(n)), mvals(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) svals[static_cast<std::size_t>(i)] = static_cast<double>(i) / (n - 1);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) { mvals[i] = miss(svals[i]); });

    // tangency rejection: interior |m| minima under cross_tol with no flip
    for (int i = 1; i + 1 < n; ++i) {
        const double a = mvals[static_cast<std::size_t>(i - 1)], b = mvals[static_cast<std::size_t>(i)],
                     c = mvals[static_cast<std::size_t>(i + 1)];
        if (std::abs(b) < tol.cross_tol && std::abs(b) <= std::abs(a) && std::abs(b) <= std::abs(c) &&
            a * c > 0)
            throw std::runtime_error("scan_nongeneric: requirement (*) violated, perturb homotopy");
    }

    for (int i = 0; i + 1 < n; ++i) {
        double a = svals[static_cast<std::size_t>(i)], b = svals[static_cast<std::size_t>(i + 1)];
        double ma = mvals[static_cast<std::size_t>(i)], mb = mvals[static_cast<std::size_t>(i + 1)];
        if (ma == 0.0) ma = 1e-300;
        if (ma * mb >= 0) continue;
        double best = std::min(std::abs(ma), std::abs(mb));
        while (b - a > tol.bisect_tol) {
            const double mid = 0.5 * (a + b);
            const double mm = miss(mid);
            best = std::min(best, std::abs(mm));
            if ((mm < 0) == (ma < 0)) {
                a = mid;
                ma = mm;
            } else {
                b = mid;
                mb = mm;
            }
        }
        // a genuine connection closes in on the stable object; a sign flip
        // with the miss bounded away from zero is the nearest-point index
        // jumping around an endpoint of the stable arc
        if (best > 1e-3) continue;
        NonGenericLocus::Root root;
        root.s = 0.5 * (a + b);
        root.parity = 1;
        root.witness = miss.witness(root.s);
        if (!locus.roots.empty() && root.s - locus.roots.back().s < tol.locus_sep) {
            locus.merged_warnings.push_back(root.s);
            continue;
        }
        locus.roots.push_back(root);
    }
    return locus;
}

BoundaryStrata boundary_strata(const ParamHomotopy& h, const std::string& p_id,
                               const std::string& q_id, const Tolerances& tol) {
    if (h.ell != 1)
        throw std::invalid_argument("boundary_strata: counting is implemented for ell=1");
    const CriticalPoint& p = h.alpha->cp(p_id);
    const CriticalPoint& q = h.beta->cp(q_id);
    if (expected_dimension(p.index, q.index, h.ell) != 1)
        throw std::invalid_argument("boundary_strata: expected moduli dimension must be 1");

    BoundaryStrata out;
    out.p_id = p_id;
    out.q_id = q_id;

    out.facet0_count = continuation_count(h.facet(0), p_id, q_id, tol).count;
    out.facet1_count = continuation_count(h.facet(1), p_id, q_id, tol).count;
    out.total_count = out.facet0_count + out.facet1_count;

    // type (iii): interior roots into c' (ind = ind p + ell) completed by
    // autonomous lines c' -> q of f_beta
    for (const CriticalPoint& c : h.beta->critical_points) {
        if (c.index != p.index + h.ell) continue;
        const NonGenericLocus locus = scan_nongeneric(h, p_id, c.id, tol);
        if (locus.roots.empty()) continue;
        const FlowLineCount tail = count_flow_lines(*h.beta, c.id, q_id, tol);
        for (const auto& r : locus.roots) {
            out.type_iii.push_back({c.id, r.s, tail.count});
            out.total_count += tail.count;
        }
    }

    // type (iv): autonomous lines p -> c of f_alpha followed by interior
    // roots of (c, q), ind c = ind q - ell
    for (const CriticalPoint& c : h.alpha->critical_points) {
        if (c.index != q.index - h.ell) continue;
        const FlowLineCount head = count_flow_lines(*h.alpha, p_id, c.id, tol);
        if (head.count == 0) continue;
        const NonGenericLocus locus = scan_nongeneric(h, c.id, q_id, tol);
        for (const auto& r : locus.roots) {
            out.type_iv.push_back({c.id, r.s, head.count});
            out.total_count += head.count;
        }
    }

    out.total_parity = out.total_count % 2;
    return out;
}

LocusPolyline locus_polyline(const ParamHomotopy& h, const std::string& p_id,
                             const std::string& cprime_id, int outer_grid, const Tolerances& tol) {
    if (h.ell != 2) throw std::invalid_argument("locus_polyline: needs an ell=2 family");
    LocusPolyline out;
    out.source_id = p_id;
    out.target_id = cprime_id;

    // for each outer value, find inner roots by the ell=1 machinery
    std::vector<std::vector<std::array<double, 2>>> columns;
    for (int i = 0; i < outer_grid; ++i) {
        const double s2 = static_cast<double>(i) / (outer_grid - 1);
        ParamHomotopy slice = h.slice_leading(s2);
        slice.constant_in_s = false;
        std::vector<std::array<double, 2>> col;
        const NonGenericLocus locus = scan_nongeneric(slice, p_id, cprime_id, tol);
        for (const auto& r : locus.roots) col.push_back({s2, r.s});
        columns.push_back(std::move(col));
    }

    // chain nearest roots of consecutive columns into branches
    std::vector<std::vector<std::array<double, 2>>> branches;
    std::vector<int> open; // branch index per point of the previous column
    std::vector<std::array<double, 2>> prev;
    for (const auto& col : columns) {
        std::vector<int> assigned(col.size(), -1);
        for (std::size_t k = 0; k < col.size(); ++k) {
            double bestd = 0.08;
            int bestb = -1;
            for (std::size_t j = 0; j < prev.size(); ++j) {
                const double d = std::abs(prev[j][1] - col[k][1]);
                if (d < bestd) {
                    bestd = d;
                    bestb = open[j];
                }
            }
            if (bestb < 0) {
                branches.emplace_back();
                bestb = static_cast<int>(branches.size()) - 1;
            }
            branches[static_cast<std::size_t>(bestb)].push_back(col[k]);
            assigned[k] = bestb;
        }
        prev = col;
        open.assign(assigned.begin(), assigned.end());
    }
    out.branches = std::move(branches);
    return out;
}

std::vector<HitPoint> scan_hits_l2(const ParamHomotopy& h, const std::string& p_id,
                                   const std::string& cprime_id, const Tolerances& tol) {
    if (h.ell != 2) throw std::invalid_argument("scan_hits_l2: needs an ell=2 family");
    const CriticalPoint& p = h.alpha->cp(p_id);
    const CriticalPoint& c = h.beta->cp(cprime_id);
    if (p.index != 0 || c.index != 2)
        throw std::invalid_argument("scan_hits_l2: supported pairs are minimum -> maximum");

    const Vec3 target = h.surface->embed(c.at);
    Vec3 e1, e2;
    h.surface->jacobian(c.at, e1, e2);
    const Vec3 nu = e1.cross(e2).normalized();
    // orthonormal tangent frame at the target: the two miss components
    const Vec3 a1 = e1.normalized();
    const Vec3 a2 = nu.cross(a1).normalized();

    auto miss2 = [&](double s2, double s1) {
        const std::array<double, 2> sv{s1, s2};
        const ChartPoint d =
            transport_window(h, std::span<const double>(sv.data(), 2), p.at, Direction::Forward, tol);
        const Vec3 delta = h.surface->embed(d) - target;
        return std::array<double, 2>{delta.dot(a1), delta.dot(a2)};
    };

    // sweep A: inner bisection of the first miss component per outer line
    const int n = tol.scan_grid / 8 > 16 ? tol.scan_grid / 8 : 16;
    struct BranchPoint {
        double s2, s1, m2;
    };
    std::vector<BranchPoint> branch;
    for (int i = 0; i < n; ++i) {
        const double s2 = static_cast<double>(i) / (n - 1);
        double prev_s1 = 0, prev_m1 = 0;
        bool have = false;
        const int m = 48;
        for (int j = 0; j < m; ++j) {
            const double s1 = static_cast<double>(j) / (m - 1);
            const auto mm = miss2(s2, s1);
            if (have && prev_m1 * mm[0] < 0) {
                double a = prev_s1, b = s1, ma = prev_m1;
                for (int it = 0; it < 48 && b - a > tol.bisect_tol; ++it) {
                    const double mid = 0.5 * (a + b);
                    const double mv = miss2(s2, mid)[0];
                    if ((mv < 0) == (ma < 0)) {
                        a = mid;
                        ma = mv;
                    } else {
                        b = mid;
                    }
                }
                const double root = 0.5 * (a + b);
                branch.push_back({s2, root, miss2(s2, root)[1]});
            }
            prev_s1 = s1;
            prev_m1 = mm[0];
            have = true;
        }
    }

    // sweep B: along each chained branch, bisect the second component in s2
    std::vector<HitPoint> hits;
    for (std::size_t i = 0; i + 1 < branch.size(); ++i) {
        const BranchPoint& A = branch[i];
        const BranchPoint& B = branch[i + 1];
        if (std::abs(A.s1 - B.s1) > 0.1) continue; // different branches
        if (A.m2 * B.m2 >= 0) continue;
        double lo2 = A.s2, hi2 = B.s2, mlo = A.m2;
        double s1_root = A.s1;
        for (int it = 0; it < 48 && hi2 - lo2 > tol.bisect_tol; ++it) {
            const double mid2 = 0.5 * (lo2 + hi2);
            // re-solve the inner root near s1_root at this outer value
            double a = std::max(0.0, s1_root - 0.1), b = std::min(1.0, s1_root + 0.1);
            double ma = miss2(mid2, a)[0], mb = miss2(mid2, b)[0];
            if (ma * mb > 0) break;
            for (int k = 0; k < 48 && b - a > tol.bisect_tol; ++k) {
                const double mids = 0.5 * (a + b);
                const double mv = miss2(mid2, mids)[0];
                if ((mv < 0) == (ma < 0)) {
                    a = mids;
                    ma = mv;
                } else {
                    b = mids;
                    mb = mv;
                }
            }
            s1_root = 0.5 * (a + b);
            const double m2v = miss2(mid2, s1_root)[1];
            if ((m2v < 0) == (mlo < 0)) {
                lo2 = mid2;
                mlo = m2v;
            } else {
                hi2 = mid2;
            }
        }
        HitPoint hp;
        hp.s2 = 0.5 * (lo2 + hi2);
        hp.s1 = s1_root;
        const std::array<double, 2> sv{hp.s1, hp.s2};
        hp.witness =
            transport_window(h, std::span<const double>(sv.data(), 2), p.at, Direction::Forward, tol);
        // confirm the hit actually closes in
        const auto mm = miss2(hp.s2, hp.s1);
        if (std::abs(mm[0]) < 1e-3 && std::abs(mm[1]) < 1e-3) hits.push_back(hp);
    }
    return hits;
}

} // namespace morse
