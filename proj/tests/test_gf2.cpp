#include <algorithm>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "morsetower/category.hpp"
#include "morsetower/chain.hpp"
#include "morsetower/gf2.hpp"

using namespace morse;

namespace {

std::uint64_t splitmix(std::uint64_t& s) {
    s += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Gf2Matrix random_matrix(std::uint64_t& s, std::size_t r, std::size_t c) {
    Gf2Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.set(i, j, static_cast<int>(splitmix(s) & 1));
    return m;
}

// integer-matrix oracle: multiply over Z, reduce mod 2
Gf2Matrix int_product_mod2(const Gf2Matrix& a, const Gf2Matrix& b) {
    Gf2Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            long acc = 0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc += long(a(i, k)) * long(b(k, j));
            out.set(i, j, static_cast<int>(acc % 2));
        }
    return out;
}

// brute-force rank oracle: size of the row span by enumeration
std::size_t bruteforce_rank(const Gf2Matrix& m) {
    REQUIRE(m.rows() <= 16);
    std::vector<std::vector<std::uint8_t>> span;
    for (std::uint32_t mask = 0; mask < (1u << m.rows()); ++mask) {
        std::vector<std::uint8_t> v(m.cols(), 0);
        for (std::size_t i = 0; i < m.rows(); ++i)
            if (mask & (1u << i))
                for (std::size_t j = 0; j < m.cols(); ++j) v[j] ^= m(i, j);
        if (std::find(span.begin(), span.end(), v) == span.end()) span.push_back(v);
    }
    std::size_t rank = 0;
    while ((std::size_t{1} << rank) < span.size()) ++rank;
    CHECK((std::size_t{1} << rank) == span.size());
    return rank;
}

ChainComplex sphere_complex() {
    return ChainComplex::make({{"m"}, {}, {"M"}},
                              {Gf2Matrix(0, 1), Gf2Matrix(1, 0), Gf2Matrix(0, 1)});
}

ChainComplex torus_like_complex() {
    return ChainComplex::make({{"m"}, {"s0", "s1"}, {"M"}},
                              {Gf2Matrix(0, 1), Gf2Matrix(1, 2), Gf2Matrix(2, 1)});
}

ChainComplex deformed_complex() {
    // min, saddle, two maxima; d2 Mi = s, d1 s = 0
    Gf2Matrix d2 = Gf2Matrix::from_rows({{1, 1}});
    return ChainComplex::make({{"m"}, {"s"}, {"M0", "M1"}}, {Gf2Matrix(0, 1), Gf2Matrix(1, 1), d2});
}

} // namespace

TEST_CASE("mat_mul: identity and hand-checked 2x2") {
    std::uint64_t s = 11;
    const Gf2Matrix m = random_matrix(s, 2, 2);
    CHECK(Gf2Matrix::identity(2) * m == m);

    const Gf2Matrix a = Gf2Matrix::from_rows({{1, 1}, {0, 1}});
    const Gf2Matrix b = Gf2Matrix::from_rows({{1, 0}, {1, 1}});
    CHECK(a * b == Gf2Matrix::from_rows({{0, 1}, {1, 1}}));
}

TEST_CASE("mat_mul agrees with the integer-product oracle on random 8x8 pairs") {
    std::uint64_t s = 2024;
    for (int trial = 0; trial < 20; ++trial) {
        const Gf2Matrix a = random_matrix(s, 8, 8);
        const Gf2Matrix b = random_matrix(s, 8, 8);
        CHECK(a * b == int_product_mod2(a, b));
    }
}

TEST_CASE("mat_mul rejects dimension mismatch") {
    CHECK_THROWS_AS(Gf2Matrix(2, 3) * Gf2Matrix(2, 3), std::invalid_argument);
}

TEST_CASE("rank matches the brute-force row-span oracle up to total size 12") {
    std::uint64_t s = 5;
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t r = 1 + splitmix(s) % 6, c = 1 + splitmix(s) % 6;
        const Gf2Matrix m = random_matrix(s, r, c);
        CHECK(gf2_rank(m) == bruteforce_rank(m));
    }
}

TEST_CASE("kernel basis vectors lie in the kernel and count the nullity") {
    std::uint64_t s = 99;
    const Gf2Matrix m = random_matrix(s, 5, 7);
    const auto kernel = gf2_kernel_basis(m);
    CHECK(kernel.size() == 7 - gf2_rank(m));
    for (const auto& v : kernel)
        for (auto b : gf2_apply(m, v)) CHECK(b == 0);
}

TEST_CASE("check_boundary_square: zero complex passes, injected violation fails at degree 2") {
    CHECK(check_boundary_square(torus_like_complex()).pass);

    Gf2Matrix d1 = Gf2Matrix::from_rows({{1}});
    Gf2Matrix d2 = Gf2Matrix::from_rows({{1}});
    ChainComplex bad =
        ChainComplex::make_unchecked({{"a"}, {"b"}, {"c"}}, {Gf2Matrix(0, 1), d1, d2});
    const CheckReport rep = check_boundary_square(bad);
    CHECK_FALSE(rep.pass);
    CHECK(rep.first_failure.find("degree 2") != std::string::npos);
    CHECK_THROWS_AS(ChainComplex::make({{"a"}, {"b"}, {"c"}}, {Gf2Matrix(0, 1), d1, d2}),
                    std::invalid_argument);
}

TEST_CASE("homology ranks of the stock shapes") {
    CHECK(homology_ranks(sphere_complex()) == std::vector<std::size_t>{1, 0, 1});
    CHECK(homology_ranks(torus_like_complex()) == std::vector<std::size_t>{1, 2, 1});
    CHECK(homology_ranks(deformed_complex()) == std::vector<std::size_t>{1, 0, 1});

    const ChainComplex z =
        ChainComplex::make({{"a", "b"}, {"c", "d"}}, {Gf2Matrix(0, 2), Gf2Matrix(2, 2)});
    CHECK(homology_ranks(z) == std::vector<std::size_t>{2, 2});
}

TEST_CASE("homology ranks reject complexes with d^2 != 0") {
    ChainComplex bad = ChainComplex::make_unchecked(
        {{"a"}, {"b"}, {"c"}},
        {Gf2Matrix(0, 1), Gf2Matrix::from_rows({{1}}), Gf2Matrix::from_rows({{1}})});
    CHECK_THROWS_AS(homology_ranks(bad), std::invalid_argument);
}

TEST_CASE("homology ranks are invariant under basis permutation") {
    std::uint64_t s = 31337;
    for (int trial = 0; trial < 12; ++trial) {
        auto c = random_complex(s);
        const auto ranks = homology_ranks(*c);

        std::vector<std::vector<std::string>> basis;
        std::vector<Gf2Matrix> boundary;
        boundary.emplace_back(0, c->dim(0));
        for (int k = 0; k <= c->top_degree(); ++k) {
            auto ls = c->labels(k);
            std::reverse(ls.begin(), ls.end());
            basis.push_back(ls);
        }
        for (int k = 1; k <= c->top_degree(); ++k) {
            const Gf2Matrix& d = c->boundary(k);
            Gf2Matrix p(d.rows(), d.cols());
            for (std::size_t i = 0; i < d.rows(); ++i)
                for (std::size_t j = 0; j < d.cols(); ++j)
                    p.set(d.rows() - 1 - i, d.cols() - 1 - j, d(i, j));
            boundary.push_back(p);
        }
        const ChainComplex permuted = ChainComplex::make(std::move(basis), std::move(boundary));
        CHECK(homology_ranks(permuted) == ranks);
    }
}

TEST_CASE("verify_chain_map: identity passes, bit flip fails") {
    const ChainComplex c = deformed_complex();
    GradedMap id = identity_graded_map(c);
    CHECK(verify_chain_map(id, c, c).pass);

    GradedMap broken = id;
    broken.blocks[2].flip(0, 1);
    CHECK_FALSE(verify_chain_map(broken, c, c).pass);
}

TEST_CASE("verify_homotopy: zero homotopy between equal maps; mismatch fails") {
    const ChainComplex c = deformed_complex();
    const GradedMap id = identity_graded_map(c);
    const GradedMap zero1 = zero_graded_map(c, c, 1);
    CHECK(verify_homotopy(zero1, id, id, c, c).pass);

    GradedMap other = id;
    other.blocks[0].flip(0, 0);
    CHECK_FALSE(verify_homotopy(zero1, id, other, c, c).pass);
}

TEST_CASE("random towers built from the relation verify, and induced maps agree") {
    std::uint64_t s = 777;
    for (int trial = 0; trial < 15; ++trial) {
        auto C = random_complex(s);
        auto Cp = random_complex(s);
        const GradedMap u0 = random_chain_map(s, *C, *Cp);
        const GradedMap E = random_graded_map(s, *C, *Cp, 1);
        GradedMap u1 = u0; // u1 := u0 + d'E + Ed
        for (int r = 0; r <= C->top_degree(); ++r) {
            Gf2Matrix add(Cp->dim(r), C->dim(r));
            if (Cp->dim(r + 1) > 0 && r + 1 <= Cp->top_degree())
                add = add + Cp->boundary(r + 1) * E.block(r);
            if (r >= 1 && C->dim(r - 1) > 0) add = add + E.block(r - 1) * C->boundary(r);
            u1.blocks[static_cast<std::size_t>(r)] = u1.blocks[static_cast<std::size_t>(r)] + add;
        }
        CHECK(verify_chain_map(u1, *C, *Cp).pass);
        CHECK(verify_homotopy(E, u0, u1, *C, *Cp).pass);

        const InducedMap i0 = induced_homology_map(u0, *C, *Cp);
        const InducedMap i1 = induced_homology_map(u1, *C, *Cp);
        REQUIRE(i0.blocks.size() == i1.blocks.size());
        for (std::size_t k = 0; k < i0.blocks.size(); ++k) CHECK(i0.blocks[k] == i1.blocks[k]);
    }
}

TEST_CASE("induced_homology_map: identity is iso, zero map is not") {
    const ChainComplex c = torus_like_complex();
    const InducedMap id = induced_homology_map(identity_graded_map(c), c, c);
    CHECK(id.iso);
    for (const auto& blk : id.blocks) CHECK(blk.is_identity());

    const InducedMap z = induced_homology_map(zero_graded_map(c, c, 0), c, c);
    CHECK_FALSE(z.iso);
}

TEST_CASE("induced_homology_map requires a chain map") {
    const ChainComplex c = deformed_complex();
    GradedMap broken = identity_graded_map(c);
    broken.blocks[2].flip(0, 1);
    CHECK_THROWS_AS(induced_homology_map(broken, c, c), std::invalid_argument);
}

TEST_CASE("chain complex JSON round trip is exact") {
    const ChainComplex c = deformed_complex();
    CHECK(chain_from_json(chain_to_json(c)) == c);
}

TEST_CASE("boundary ranks of random complexes match the brute-force oracle") {
    std::uint64_t s = 4242;
    int checked = 0;
    while (checked < 10) {
        auto c = random_complex(s);
        std::size_t total = 0;
        for (int k = 0; k <= c->top_degree(); ++k) total += c->dim(k);
        if (total > 12) continue; // oracle enumerates row spans
        ++checked;
        for (int k = 1; k <= c->top_degree(); ++k)
            CHECK(gf2_rank(c->boundary(k)) == bruteforce_rank(c->boundary(k)));
    }
}
