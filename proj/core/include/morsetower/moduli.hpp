#pragma once

#include <string>
#include <vector>

#include "morsetower/flow.hpp"

namespace morse {

/// Detected codimension-one parameter set for one (source, target) pair with
/// index gap +ell. For ell=1 the points are isolated parameters; each
/// carries parity one and a witness position.
struct NonGenericLocus {
    std::string source_id, target_id;
    struct Root {
        double s = 0;
        int parity = 1;
        ChartPoint witness;     // transported point at the crossing, t = +T
        std::string witness_file; // set when trajectories are dumped
    };
    std::vector<Root> roots;
    std::vector<double> merged_warnings; // roots closer than locus_sep, flagged
    int parity() const { return static_cast<int>(roots.size()) % 2; }
};

/// ind(target) = ind(source) + 1, ell = 1: sweep the miss function on a
/// uniform grid, bisect each sign change, reject tangencies.
NonGenericLocus scan_nongeneric(const ParamHomotopy& h, const std::string& p_id,
                                const std::string& cprime_id, const Tolerances& tol);

/// Stratified boundary of the 1-dimensional compactified moduli space for a
/// pair with ind p - ind q = 1 - ell (ell = 1). Four stratum types; the
/// total count of boundary points must be even for a generic family.
struct BoundaryStrata {
    std::string p_id, q_id;
    int facet0_count = 0; // solutions on the s=0 facet
    int facet1_count = 0; // solutions on the s=1 facet
    struct Broken {
        std::string through;  // intermediate critical point
        double s = 0;         // locus root
        int tail_count = 0;   // autonomous lines completing the broken orbit
    };
    std::vector<Broken> type_iii; // (s, u) x M^{f_beta}(c', q)
    std::vector<Broken> type_iv;  // M^{f_alpha}(p, c) x (s, u)
    int total_count = 0;
    int total_parity = 0;
};

BoundaryStrata boundary_strata(const ParamHomotopy& h, const std::string& p_id,
                               const std::string& q_id, const Tolerances& tol);

/// ind_p - ind_q + ell.
int expected_dimension(int ind_p, int ind_q, int ell);

/// ell = 2 support: polyline approximation of the codimension-one locus of
/// a gap-(+1) pair over [0,1]^2 (grid sweep in the inner parameter per outer
/// grid line), and the isolated gap-(+2) crossing points found as
/// intersections of two bisection sweeps.
struct LocusPolyline {
    std::string source_id, target_id;
    std::vector<std::vector<std::array<double, 2>>> branches; // (s2, s1) chains
};
LocusPolyline locus_polyline(const ParamHomotopy& h, const std::string& p_id,
                             const std::string& cprime_id, int outer_grid, const Tolerances& tol);

struct HitPoint {
    double s2 = 0, s1 = 0;
    ChartPoint witness;
};
/// Isolated parameter points where the transported minimum hits the target
/// maximum exactly (ind gap +2, ell = 2).
std::vector<HitPoint> scan_hits_l2(const ParamHomotopy& h, const std::string& p_id,
                                   const std::string& cprime_id, const Tolerances& tol);

} // namespace morse
