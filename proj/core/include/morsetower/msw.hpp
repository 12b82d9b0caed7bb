#pragma once

#include "morsetower/chain.hpp"
#include "morsetower/moduli.hpp"

namespace morse {

/// Complex generated by the critical points graded by index; boundary
/// entries are mod-2 flow line counts. Throws "not Morse-Smale at this
/// tolerance" when d^2 != 0.
ChainComplex build_msw(const MorseSmalePair& pair, const Tolerances& tol);

/// Degree-preserving map U from counting window trajectories between
/// equal-index points. verify_chain_map must pass or this throws.
GradedMap continuation_map(const ParamHomotopy& h, const Tolerances& tol);

struct ChainHomotopyResult {
    GradedMap U0, U1; // continuation maps of the two facets
    GradedMap E;      // shift-1 homotopy from locus parities
    ChainComplex C, Cprime;
    std::vector<NonGenericLocus> loci;
};

/// Facet maps plus the interior-locus homotopy; verify_homotopy must pass.
ChainHomotopyResult chain_homotopy(const ParamHomotopy& h, const Tolerances& tol);

/// phi_[ell]: ell=1 delegates to chain_homotopy; ell=2 counts isolated
/// gap-(+2) hits; identity families give zero without scanning.
GradedMap higher_homotopy(const ParamHomotopy& h, int ell, const Tolerances& tol);

} // namespace morse
