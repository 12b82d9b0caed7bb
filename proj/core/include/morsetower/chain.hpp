#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "morsetower/gf2.hpp"

namespace morse {

/// Graded GF(2) chain complex with labelled bases. boundary(k) maps degree k
/// to degree k-1, so its shape is dim(k-1) x dim(k). Empty degrees are kept
/// as 0-dimensional spaces so shape checks stay uniform.
class ChainComplex {
public:
    ChainComplex() = default; // empty placeholder; build through make()

    /// Validating constructor: shapes must match and d(k-1)*d(k) must vanish.
    static ChainComplex make(std::vector<std::vector<std::string>> basis,
                             std::vector<Gf2Matrix> boundary);
    /// Shape-checked only; used to build deliberate counterexamples in tests.
    static ChainComplex make_unchecked(std::vector<std::vector<std::string>> basis,
                                       std::vector<Gf2Matrix> boundary);

    int top_degree() const { return static_cast<int>(basis_.size()) - 1; }
    std::size_t dim(int k) const;
    const std::vector<std::string>& labels(int k) const;
    /// d_k : C_k -> C_{k-1}; zero-shaped for k <= 0 or k > top_degree.
    const Gf2Matrix& boundary(int k) const;

    /// Index of a label within its degree; throws if absent.
    std::size_t index_of(int k, const std::string& label) const;

    bool operator==(const ChainComplex& o) const = default;

private:
    std::vector<std::vector<std::string>> basis_;  // basis_[k]
    std::vector<Gf2Matrix> boundary_;              // boundary_[k] = d_k, k = 0..top_degree
    Gf2Matrix empty_;                              // returned outside the graded range
};

/// Degree-shift-l map phi_r : C_r -> C'_{r+l}. Blocks indexed by source
/// degree r = 0..C.top_degree. Over GF(2) the (-1)^{l+1} of the homotopy
/// relation is a no-op and is dropped everywhere.
struct GradedMap {
    int shift = 0;
    std::vector<Gf2Matrix> blocks;
    std::shared_ptr<const GradedMap> source_cell; // optional (l-1)-cells this map interpolates
    std::shared_ptr<const GradedMap> target_cell;

    const Gf2Matrix& block(int r) const;
    bool same_blocks(const GradedMap& o) const { return shift == o.shift && blocks == o.blocks; }
    bool is_zero() const;
};

/// Shift-l map between c and c' with every block zero.
GradedMap zero_graded_map(const ChainComplex& c, const ChainComplex& cprime, int shift);
/// Identity chain map on c.
GradedMap identity_graded_map(const ChainComplex& c);
/// Blockwise sum; shapes must agree.
GradedMap graded_sum(const GradedMap& a, const GradedMap& b);

/// Report from a verification; first_failure describes the earliest offense.
struct CheckReport {
    bool pass = true;
    std::string first_failure;
};

/// d^2 = 0, bit-exact. Report lists the first violating (degree, row, col).
CheckReport check_boundary_square(const ChainComplex& c);

/// GF(2) Betti numbers b_0..b_n. Throws if d^2 != 0.
std::vector<std::size_t> homology_ranks(const ChainComplex& c);

/// d' phi = phi d for a shift-0 map.
CheckReport verify_chain_map(const GradedMap& phi, const ChainComplex& c, const ChainComplex& cprime);

/// phi1 + phi0 = d' phil + phil d blockwise (signs vanish mod 2).
CheckReport verify_homotopy(const GradedMap& phil, const GradedMap& phi0, const GradedMap& phi1,
                            const ChainComplex& c, const ChainComplex& cprime);

/// Deterministic homology bases: cycle representatives completing the image
/// basis, chosen from the kernel basis in free-column order.
struct HomologyBasis {
    // reps[k]: one coordinate vector (in C_k) per homology class generator
    std::vector<std::vector<std::vector<std::uint8_t>>> reps;
    std::vector<std::size_t> ranks;
};
HomologyBasis homology_basis(const ChainComplex& c);

struct InducedMap {
    std::vector<Gf2Matrix> blocks; // per degree, on the chosen homology bases
    bool iso = false;
};

/// phi on homology, expressed in homology_basis coordinates of both sides.
/// Requires verify_chain_map to pass.
InducedMap induced_homology_map(const GradedMap& phi, const ChainComplex& c, const ChainComplex& cprime);

/// JSON round trip: {top_degree, basis, boundary}. Exact bit arrays.
std::string chain_to_json(const ChainComplex& c);
ChainComplex chain_from_json(const std::string& text);

} // namespace morse
