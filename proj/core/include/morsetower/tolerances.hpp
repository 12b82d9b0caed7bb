#pragma once

namespace morse {

/// Numeric thresholds shared across the pipeline. One record so acceptance
/// runs can tighten everything at once (see scaled()).
struct Tolerances {
    double grad_tol = 1e-10;      // gradient norm at an accepted critical point
    double nondegen_tol = 1e-6;   // minimal |Hessian eigenvalue|
    double dedup_tol = 1e-6;      // ambient distance identifying critical points
    double settle_tol = 1e-8;     // gradient norm ending a trajectory
    double sep_eps = 1e-5;        // separatrix seeding offset
    double cross_tol = 1e-7;      // tangency rejection for crossing functions
    double locus_sep = 1e-4;      // minimal spacing of locus roots
    double rk_rel = 1e-9;         // integrator relative tolerance
    double rk_abs = 1e-11;        // integrator absolute tolerance
    double t_max = 200.0;         // escape cutoff for settling flows
    double spot_tol = 1e-12;      // pointwise cell-equality tolerance
    double bisect_tol = 1e-10;    // parameter tolerance for locus bisection
    int scan_grid = 256;          // uniform scan resolution per parameter

    /// All floating thresholds multiplied by f (grid size and t_max kept).
    Tolerances scaled(double f) const {
        Tolerances t = *this;
        t.grad_tol *= f;
        t.nondegen_tol *= f;
        t.dedup_tol *= f;
        t.settle_tol *= f;
        t.sep_eps *= f;
        t.cross_tol *= f;
        t.locus_sep *= f;
        t.rk_rel *= f;
        t.rk_abs *= f;
        t.spot_tol *= f;
        t.bisect_tol *= f;
        return t;
    }
};

} // namespace morse
