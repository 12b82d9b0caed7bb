#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "morsetower/msw.hpp"

namespace morse {

// ---------------------------------------------------------------------------
// A side: cells are parametrized homotopies with provenance
// ---------------------------------------------------------------------------

struct ACell;
using ACellPtr = std::shared_ptr<const ACell>;

struct ACell {
    enum class Kind { Atomic, Identity, Composite };
    Kind kind = Kind::Atomic;
    ParamHomotopy payload;
    ACellPtr inner;       // identity provenance
    ACellPtr left, right; // composite provenance: left = c2, right = c1
    int glue_level = -1;  // p of the composite

    int level() const { return payload.ell; }
};

ACellPtr atomic_cell(ParamHomotopy payload);
/// Constant extension in a new leading parameter.
ACellPtr identity_A(const ACellPtr& c);
/// Halved-parameter concatenation along the (p+1)-th slot, both halves
/// precomposed with the flat-ended smooth step so the seam is smooth.
/// Throws when the facets do not match on the spot grids.
ACellPtr compose_A(const ACellPtr& c2, const ACellPtr& c1, int p, const Tolerances& tol);
ACellPtr source_A(const ACellPtr& c);
ACellPtr target_A(const ACellPtr& c);
ACellPtr iterate_source_A(ACellPtr c, int k);
ACellPtr iterate_target_A(ACellPtr c, int k);

bool cells_equal_A(const ACellPtr& a, const ACellPtr& b, double tol);
/// ss = st and ts = tt on one cell (levels >= 2), checked on spot grids.
bool globular_identities_A(const ACellPtr& cell, double tol);

/// r-parametrized family connecting two ell-cells; endpoints are pinned
/// cells that the family must reproduce pointwise at r = 0, 1.
struct HomotopyWitness {
    std::function<ParamHomotopy(double)> family;
    ACellPtr endpoint0, endpoint1;
};

/// Connects (c3 o c2) o c1 (r=0) with c3 o (c2 o c1) (r=1).
HomotopyWitness witness_assoc(const ACellPtr& c3, const ACellPtr& c2, const ACellPtr& c1, int p,
                              const Tolerances& tol);
/// Connects the identity-padded composite 1^{l-p}(t^{l-p} c) o_p c (r=0)
/// with c itself (r=1).
HomotopyWitness witness_identity_law(const ACellPtr& c, int p, const Tolerances& tol);

bool witness_endpoints_ok(const HomotopyWitness& w, double tol);

// ---------------------------------------------------------------------------
// B side: cells are graded GF(2) maps; composition is addition
// ---------------------------------------------------------------------------

struct BCell;
using BCellPtr = std::shared_ptr<const BCell>;

struct BCell {
    int level = 0;
    std::shared_ptr<const ChainComplex> C, Cp;
    GradedMap map; // shift == level
    BCellPtr src, tgt;
};

/// Level-0 cell: verifies the chain map relation.
BCellPtr make_chain_map_cell(std::shared_ptr<const ChainComplex> C,
                             std::shared_ptr<const ChainComplex> Cp, GradedMap map);
/// Level >= 1 cell: verifies the homotopy relation against its endpoints.
BCellPtr make_homotopy_cell(GradedMap map, const BCellPtr& src, const BCellPtr& tgt);

BCellPtr iterate_source_B(BCellPtr b, int k);
BCellPtr iterate_target_B(BCellPtr b, int k);
bool cells_equal_B(const BCellPtr& a, const BCellPtr& b);
/// ss = st and ts = tt on one cell (levels >= 2), exact.
bool globular_identities_B(const BCellPtr& cell);
bool composable_B(const BCellPtr& b2, const BCellPtr& b1, int p);

/// Blockwise sum with endpoints recomputed per the source/target axiom.
BCellPtr compose_B(const BCellPtr& b2, const BCellPtr& b1, int p);
/// The zero map one level up, from b to b.
BCellPtr identity_B(const BCellPtr& b);

// ---------------------------------------------------------------------------
// The functor and axiom suites
// ---------------------------------------------------------------------------

/// F on cells: identity provenance maps to the zero cell (empty moduli in
/// one dimension down), composite provenance to the sum of the factors
/// (rescaled-locus argument), atomic payloads to the geometric counts.
BCellPtr functor_F(const ACellPtr& c, const Tolerances& tol);
/// Ignores provenance and recounts the payload geometrically; the second
/// route of the functoriality check.
BCellPtr functor_F_rescan(const ACellPtr& c, const Tolerances& tol);

/// sigma-aware rescaling of factor loci into composite coordinates:
/// roots of c1 land at inv(sigma)/2, roots of c2 at (inv(sigma)+1)/2.
std::vector<double> predict_composite_locus(const std::vector<double>& roots_c1,
                                            const std::vector<double>& roots_c2);

/// Levelled cell collections with their source/target structure; validate
/// checks the globular identities on every stored cell.
struct GlobularSetA {
    std::vector<std::vector<ACellPtr>> levels;
    bool validate(double tol) const;
};
struct GlobularSetB {
    std::vector<std::vector<BCellPtr>> levels;
    bool validate() const;
};

struct AxiomReport {
    int samples = 0;
    std::array<int, 6> pass{};
    std::array<int, 6> fail{};
    std::string first_failure;
    bool all_pass() const {
        for (int f : fail)
            if (f) return false;
        return true;
    }
};

/// Six axioms on seeded random towers of graded maps, checked exactly.
AxiomReport check_axioms_B(std::uint64_t seed, int samples);
/// (a),(b),(e),(f) exact and (c),(d) by witness endpoints, on synthetic
/// analytic families over the given end pairs.
AxiomReport check_axioms_A(std::uint64_t seed, int samples,
                           std::shared_ptr<const MorseSmalePair> alpha,
                           std::shared_ptr<const MorseSmalePair> beta, double cutoff,
                           const Tolerances& tol);

/// Seeded generator shared by tests: a random small complex with d^2 = 0.
std::shared_ptr<const ChainComplex> random_complex(std::uint64_t& state, int max_dim = 4,
                                                   int top_degree = 3);
/// Random chain map C -> Cp (kernel sampling of the chain-map constraint).
GradedMap random_chain_map(std::uint64_t& state, const ChainComplex& C, const ChainComplex& Cp);
/// Random graded map of the given shift (unconstrained blocks).
GradedMap random_graded_map(std::uint64_t& state, const ChainComplex& C, const ChainComplex& Cp,
                            int shift);

} // namespace morse
