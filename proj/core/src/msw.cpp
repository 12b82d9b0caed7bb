#include "morsetower/msw.hpp"

#include <stdexcept>

namespace morse {

namespace {

int top_index(const MorseSmalePair& pair) {
    int top = 0;
    for (const CriticalPoint& cp : pair.critical_points) top = std::max(top, cp.index);
    return top < 2 ? 2 : top; // surfaces: keep degrees 0..2 present even if empty
}

std::vector<std::vector<std::string>> graded_labels(const MorseSmalePair& pair) {
    std::vector<std::vector<std::string>> basis(static_cast<std::size_t>(top_index(pair)) + 1);
    for (const CriticalPoint& cp : pair.critical_points)
        basis[static_cast<std::size_t>(cp.index)].push_back(cp.id);
    return basis;
}

} // namespace

ChainComplex build_msw(const MorseSmalePair& pair, const Tolerances& tol) {
    const auto basis = graded_labels(pair);
    std::vector<Gf2Matrix> boundary;
    boundary.emplace_back(0, basis[0].size());
    for (std::size_t k = 1; k < basis.size(); ++k) {
        Gf2Matrix d(basis[k - 1].size(), basis[k].size());
        for (std::size_t j = 0; j < basis[k].size(); ++j)
            for (std::size_t i = 0; i < basis[k - 1].size(); ++i) {
                const FlowLineCount c = count_flow_lines(pair, basis[k][j], basis[k - 1][i], tol);
                d.set(i, j, c.parity);
            }
        boundary.push_back(std::move(d));
    }
    try {
        return ChainComplex::make(std::move(basis), std::move(boundary));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("build_msw: pair not Morse-Smale at this tolerance (") +
                                 e.what() + ")");
    }
}

GradedMap continuation_map(const ParamHomotopy& h, const Tolerances& tol) {
    if (h.ell != 0) throw std::invalid_argument("continuation_map: needs an ell=0 homotopy");
    const ChainComplex C = build_msw(*h.alpha, tol);
    const ChainComplex Cp = build_msw(*h.beta, tol);

    GradedMap U = zero_graded_map(C, Cp, 0);
    for (int r = 0; r <= C.top_degree(); ++r) {
        for (std::size_t j = 0; j < C.dim(r); ++j)
            for (std::size_t i = 0; i < Cp.dim(r); ++i) {
                const ContinuationCount c =
                    continuation_count(h, C.labels(r)[j], Cp.labels(r)[i], tol);
                U.blocks[static_cast<std::size_t>(r)].set(i, j, c.parity);
            }
    }
    const CheckReport rep = verify_chain_map(U, C, Cp);
    if (!rep.pass)
        throw std::runtime_error("continuation_map: homotopy not generic/regular at this tolerance (" +
                                 rep.first_failure + ")");
    return U;
}

ChainHomotopyResult chain_homotopy(const ParamHomotopy& h, const Tolerances& tol) {
    if (h.ell != 1) throw std::invalid_argument("chain_homotopy: needs an ell=1 family");
    ChainHomotopyResult out;
    out.C = build_msw(*h.alpha, tol);
    out.Cprime = build_msw(*h.beta, tol);
    out.U0 = continuation_map(h.facet(0), tol);
    out.U1 = continuation_map(h.facet(1), tol);

    out.E = zero_graded_map(out.C, out.Cprime, 1);
    for (int r = 0; r + 1 <= out.Cprime.top_degree(); ++r) {
        for (std::size_t j = 0; j < out.C.dim(r); ++j)
            for (std::size_t i = 0; i < out.Cprime.dim(r + 1); ++i) {
                NonGenericLocus locus =
                    scan_nongeneric(h, out.C.labels(r)[j], out.Cprime.labels(r + 1)[i], tol);
                out.E.blocks[static_cast<std::size_t>(r)].set(i, j, locus.parity());
                out.loci.push_back(std::move(locus));
            }
    }

    const CheckReport rep = verify_homotopy(out.E, out.U0, out.U1, out.C, out.Cprime);
    if (!rep.pass)
        throw std::runtime_error("chain_homotopy: homotopy relation failed at " + rep.first_failure);
    return out;
}

GradedMap higher_homotopy(const ParamHomotopy& h, int ell, const Tolerances& tol) {
    if (ell != h.ell) throw std::invalid_argument("higher_homotopy: ell mismatch");
    if (ell < 1 || ell > 2)
        throw std::invalid_argument("higher_homotopy: ell must be 1 or 2 for geometric counting");

    const ChainComplex C = build_msw(*h.alpha, tol);
    const ChainComplex Cp = build_msw(*h.beta, tol);

    if (h.constant_in_s) return zero_graded_map(C, Cp, ell); // constant families carry empty loci
    // an inert leading parameter leaves a one-parameter family whose
    // gap-(+ell) moduli are empty by dimension; the identity maps to zero
    if (ell == 2 && h.constant_in_lead) return zero_graded_map(C, Cp, ell);

    if (ell == 1) return chain_homotopy(h, tol).E;

    GradedMap phi = zero_graded_map(C, Cp, 2);
    for (std::size_t j = 0; j < C.dim(0); ++j)
        for (std::size_t i = 0; i < Cp.dim(2); ++i) {
            const auto hits = scan_hits_l2(h, C.labels(0)[j], Cp.labels(2)[i], tol);
            phi.blocks[0].set(i, j, static_cast<int>(hits.size() % 2));
        }
    return phi;
}

} // namespace morse
