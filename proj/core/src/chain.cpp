#include "morsetower/chain.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace morse {

namespace {

void check_shapes(const std::vector<std::vector<std::string>>& basis,
                  const std::vector<Gf2Matrix>& boundary) {
    if (basis.empty()) throw std::invalid_argument("ChainComplex: need at least degree 0");
    if (boundary.size() != basis.size())
        throw std::invalid_argument("ChainComplex: need one boundary matrix per degree");
    if (boundary[0].rows() != 0 || boundary[0].cols() != basis[0].size())
        throw std::invalid_argument("ChainComplex: d_0 must be 0 x dim(C_0)");
    for (std::size_t k = 1; k < basis.size(); ++k) {
        if (boundary[k].rows() != basis[k - 1].size() || boundary[k].cols() != basis[k].size())
            throw std::invalid_argument("ChainComplex: boundary shape mismatch at degree " + std::to_string(k));
    }
}

} // namespace

ChainComplex ChainComplex::make_unchecked(std::vector<std::vector<std::string>> basis,
                                          std::vector<Gf2Matrix> boundary) {
    check_shapes(basis, boundary);
    ChainComplex c;
    c.basis_ = std::move(basis);
    c.boundary_ = std::move(boundary);
    return c;
}

ChainComplex ChainComplex::make(std::vector<std::vector<std::string>> basis,
                                std::vector<Gf2Matrix> boundary) {
    ChainComplex c = make_unchecked(std::move(basis), std::move(boundary));
    CheckReport rep = check_boundary_square(c);
    if (!rep.pass) throw std::invalid_argument("ChainComplex: d^2 != 0 (" + rep.first_failure + ")");
    return c;
}

std::size_t ChainComplex::dim(int k) const {
    if (k < 0 || k > top_degree()) return 0;
    return basis_[static_cast<std::size_t>(k)].size();
}

const std::vector<std::string>& ChainComplex::labels(int k) const {
    static const std::vector<std::string> none;
    if (k < 0 || k > top_degree()) return none;
    return basis_[static_cast<std::size_t>(k)];
}

const Gf2Matrix& ChainComplex::boundary(int k) const {
    if (k <= 0 || k > top_degree()) return empty_;
    return boundary_[static_cast<std::size_t>(k)];
}

std::size_t ChainComplex::index_of(int k, const std::string& label) const {
    const auto& ls = labels(k);
    auto it = std::find(ls.begin(), ls.end(), label);
    if (it == ls.end())
        throw std::invalid_argument("ChainComplex: no basis label '" + label + "' in degree " + std::to_string(k));
    return static_cast<std::size_t>(it - ls.begin());
}

const Gf2Matrix& GradedMap::block(int r) const {
    static const Gf2Matrix empty;
    if (r < 0 || r >= static_cast<int>(blocks.size())) return empty;
    return blocks[static_cast<std::size_t>(r)];
}

bool GradedMap::is_zero() const {
    return std::all_of(blocks.begin(), blocks.end(), [](const Gf2Matrix& m) { return m.is_zero(); });
}

GradedMap zero_graded_map(const ChainComplex& c, const ChainComplex& cprime, int shift) {
    GradedMap g;
    g.shift = shift;
    for (int r = 0; r <= c.top_degree(); ++r)
        g.blocks.emplace_back(cprime.dim(r + shift), c.dim(r));
    return g;
}

GradedMap identity_graded_map(const ChainComplex& c) {
    GradedMap g;
    g.shift = 0;
    for (int r = 0; r <= c.top_degree(); ++r)
        g.blocks.push_back(Gf2Matrix::identity(c.dim(r)));
    return g;
}

GradedMap graded_sum(const GradedMap& a, const GradedMap& b) {
    if (a.shift != b.shift || a.blocks.size() != b.blocks.size())
        throw std::invalid_argument("graded_sum: incompatible maps");
    GradedMap g;
    g.shift = a.shift;
    for (std::size_t r = 0; r < a.blocks.size(); ++r) g.blocks.push_back(a.blocks[r] + b.blocks[r]);
    return g;
}

CheckReport check_boundary_square(const ChainComplex& c) {
    for (int k = 2; k <= c.top_degree(); ++k) {
        Gf2Matrix prod = c.boundary(k - 1) * c.boundary(k);
        for (std::size_t i = 0; i < prod.rows(); ++i)
            for (std::size_t j = 0; j < prod.cols(); ++j)
                if (prod(i, j))
                    return {false, "degree " + std::to_string(k) + " entry (" + std::to_string(i) +
                                       "," + std::to_string(j) + ")"};
    }
    return {true, {}};
}

std::vector<std::size_t> homology_ranks(const ChainComplex& c) {
    CheckReport rep = check_boundary_square(c);
    if (!rep.pass) throw std::invalid_argument("homology_ranks: d^2 != 0 at " + rep.first_failure);
    std::vector<std::size_t> b;
    for (int k = 0; k <= c.top_degree(); ++k) {
        const std::size_t dim_ker = c.dim(k) - gf2_rank(c.boundary(k));
        const std::size_t rank_next = gf2_rank(c.boundary(k + 1));
        b.push_back(dim_ker - rank_next);
    }
    return b;
}

CheckReport verify_chain_map(const GradedMap& phi, const ChainComplex& c, const ChainComplex& cprime) {
    if (phi.shift != 0) throw std::invalid_argument("verify_chain_map: shift must be 0");
    for (int r = 0; r <= c.top_degree(); ++r) {
        if (phi.block(r).rows() != cprime.dim(r) || phi.block(r).cols() != c.dim(r))
            throw std::invalid_argument("verify_chain_map: block shape mismatch at degree " + std::to_string(r));
    }
    for (int r = 1; r <= c.top_degree(); ++r) {
        Gf2Matrix lhs = cprime.boundary(r) * phi.block(r);
        Gf2Matrix rhs = phi.block(r - 1) * c.boundary(r);
        if (!(lhs == rhs)) return {false, "degree " + std::to_string(r)};
    }
    return {true, {}};
}

CheckReport verify_homotopy(const GradedMap& phil, const GradedMap& phi0, const GradedMap& phi1,
                            const ChainComplex& c, const ChainComplex& cprime) {
    const int l = phil.shift;
    if (phi0.shift != l - 1 || phi1.shift != l - 1)
        throw std::invalid_argument("verify_homotopy: shifts must be (l, l-1, l-1)");
    for (int r = 0; r <= c.top_degree(); ++r) {
        if (phi0.block(r).rows() != phi1.block(r).rows() || phi0.block(r).cols() != phi1.block(r).cols())
            throw std::invalid_argument("verify_homotopy: endpoint shape mismatch at degree " + std::to_string(r));
    }
    for (int r = 0; r <= c.top_degree(); ++r) {
        // phi1_r + phi0_r = d'_{r+l} phil_r + phil_{r-1} d_r, signs dropped mod 2
        Gf2Matrix lhs = phi1.block(r) + phi0.block(r);
        Gf2Matrix rhs(cprime.dim(r + l - 1), c.dim(r));
        if (cprime.dim(r + l) > 0 && r + l <= cprime.top_degree())
            rhs = rhs + cprime.boundary(r + l) * phil.block(r);
        if (r >= 1 && c.dim(r - 1) > 0) rhs = rhs + phil.block(r - 1) * c.boundary(r);
        if (!(lhs == rhs)) return {false, "degree " + std::to_string(r)};
    }
    return {true, {}};
}

HomologyBasis homology_basis(const ChainComplex& c) {
    HomologyBasis hb;
    for (int k = 0; k <= c.top_degree(); ++k) {
        // image basis of d_{k+1}: pivot rows of rref of its transpose
        const Gf2Matrix dk1t = c.boundary(k + 1).transposed();
        const Gf2Rref imr = gf2_rref(dk1t);
        std::vector<std::vector<std::uint8_t>> image;
        for (std::size_t r = 0; r < imr.rank(); ++r) {
            std::vector<std::uint8_t> v(c.dim(k), 0);
            for (std::size_t j = 0; j < c.dim(k); ++j) v[j] = imr.mat(r, j);
            image.push_back(std::move(v));
        }
        // grow the image basis by kernel vectors, free-column order
        std::vector<std::vector<std::uint8_t>> span = image;
        std::vector<std::vector<std::uint8_t>> reps;
        auto extends_span = [&](const std::vector<std::uint8_t>& v) {
            Gf2Matrix m(span.size() + 1, c.dim(k));
            for (std::size_t i = 0; i < span.size(); ++i)
                for (std::size_t j = 0; j < c.dim(k); ++j) m.set(i, j, span[i][j]);
            for (std::size_t j = 0; j < c.dim(k); ++j) m.set(span.size(), j, v[j]);
            return gf2_rank(m) == span.size() + 1;
        };
        for (auto& z : gf2_kernel_basis(c.boundary(k))) {
            if (extends_span(z)) {
                span.push_back(z);
                reps.push_back(std::move(z));
            }
        }
        hb.ranks.push_back(reps.size());
        hb.reps.push_back(std::move(reps));
    }
    return hb;
}

InducedMap induced_homology_map(const GradedMap& phi, const ChainComplex& c, const ChainComplex& cprime) {
    CheckReport rep = verify_chain_map(phi, c, cprime);
    if (!rep.pass)
        throw std::invalid_argument("induced_homology_map: not a chain map at " + rep.first_failure);

    const HomologyBasis hb = homology_basis(c);
    const HomologyBasis hbp = homology_basis(cprime);

    InducedMap out;
    out.iso = true;
    for (int k = 0; k <= c.top_degree(); ++k) {
        const auto& reps = hb.reps[static_cast<std::size_t>(k)];
        const std::size_t hk = reps.size();
        const std::size_t hkp = k <= cprime.top_degree() ? hbp.ranks[static_cast<std::size_t>(k)] : 0;
        Gf2Matrix blk(hkp, hk);

        if (hk > 0) {
            // coordinates of phi(z) in [image basis | homology reps] of C'_k
            const Gf2Matrix dk1t = cprime.boundary(k + 1).transposed();
            const Gf2Rref imr = gf2_rref(dk1t);
            const std::size_t nim = imr.rank();
            Gf2Matrix basis_mat(cprime.dim(k), nim + hkp);
            for (std::size_t r = 0; r < nim; ++r)
                for (std::size_t j = 0; j < cprime.dim(k); ++j)
                    basis_mat.set(j, r, imr.mat(r, j));
            for (std::size_t h = 0; h < hkp; ++h)
                for (std::size_t j = 0; j < cprime.dim(k); ++j)
                    basis_mat.set(j, nim + h, hbp.reps[static_cast<std::size_t>(k)][h][j]);

            for (std::size_t col = 0; col < hk; ++col) {
                const std::vector<std::uint8_t> img = gf2_apply(phi.block(k), reps[col]);
                std::vector<std::uint8_t> coords;
                if (!gf2_solve(basis_mat, img, coords))
                    throw std::logic_error("induced_homology_map: image not a cycle");
                for (std::size_t h = 0; h < hkp; ++h) blk.set(h, col, coords[nim + h]);
            }
        }
        if (blk.rows() != blk.cols() || gf2_rank(blk) != blk.rows()) out.iso = false;
        out.blocks.push_back(std::move(blk));
    }
    return out;
}

std::string chain_to_json(const ChainComplex& c) {
    nlohmann::ordered_json j;
    j["top_degree"] = c.top_degree();
    nlohmann::ordered_json basis = nlohmann::ordered_json::array();
    for (int k = 0; k <= c.top_degree(); ++k) basis.push_back(c.labels(k));
    j["basis"] = basis;
    nlohmann::ordered_json bnd = nlohmann::ordered_json::array();
    for (int k = 1; k <= c.top_degree(); ++k) {
        const Gf2Matrix& m = c.boundary(k);
        nlohmann::ordered_json jm;
        jm["rows"] = m.rows();
        jm["cols"] = m.cols();
        nlohmann::ordered_json data = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < m.rows(); ++i) {
            nlohmann::ordered_json row = nlohmann::ordered_json::array();
            for (std::size_t jj = 0; jj < m.cols(); ++jj) row.push_back(static_cast<int>(m(i, jj)));
            data.push_back(row);
        }
        jm["data"] = data;
        bnd.push_back(jm);
    }
    j["boundary"] = bnd;
    return j.dump(2);
}

ChainComplex chain_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    const int n = j.at("top_degree").get<int>();
    std::vector<std::vector<std::string>> basis;
    for (const auto& b : j.at("basis")) basis.push_back(b.get<std::vector<std::string>>());
    if (static_cast<int>(basis.size()) != n + 1)
        throw std::invalid_argument("chain_from_json: basis/top_degree mismatch");
    std::vector<Gf2Matrix> boundary;
    boundary.emplace_back(0, basis[0].size());
    const auto& bnd = j.at("boundary");
    for (int k = 1; k <= n; ++k) {
        const auto& jm = bnd.at(static_cast<std::size_t>(k - 1));
        Gf2Matrix m(jm.at("rows").get<std::size_t>(), jm.at("cols").get<std::size_t>());
        const auto& data = jm.at("data");
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t jj = 0; jj < m.cols(); ++jj)
                m.set(i, jj, data.at(i).at(jj).get<int>());
        boundary.push_back(std::move(m));
    }
    return ChainComplex::make(std::move(basis), std::move(boundary));
}

} // namespace morse
