#include "morsetower/category.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace morse {

namespace {

// splitmix64: portable deterministic bits for the seeded suites
std::uint64_t next_rand(std::uint64_t& s) {
    s += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
int rand_below(std::uint64_t& s, int n) { return static_cast<int>(next_rand(s) % static_cast<std::uint64_t>(n)); }
int rand_bit(std::uint64_t& s) { return static_cast<int>(next_rand(s) & 1u); }
double rand_unit(std::uint64_t& s) { return static_cast<double>(next_rand(s) >> 11) * 0x1.0p-53; }

Jet scale_jet(const Jet& a, double c) { return a * Jet::constant(c); }

ParamHomotopy glue_payload(const ParamHomotopy& c1, const ParamHomotopy& c2, int p) {
    ParamHomotopy out = c1;
    const int slot = p;
    auto remap = [slot](auto&& f1, auto&& f2, std::span<const double> s, double t,
                        const EvalEnv& env) {
        std::array<double, 4> mod{};
        for (std::size_t i = 0; i < s.size(); ++i) mod[i] = s[i];
        const double v = s[static_cast<std::size_t>(slot)];
        if (v <= 0.5) {
            mod[static_cast<std::size_t>(slot)] = smoothstep(2 * v);
            return f1(std::span<const double>(mod.data(), s.size()), t, env);
        }
        mod[static_cast<std::size_t>(slot)] = smoothstep(2 * v - 1);
        return f2(std::span<const double>(mod.data(), s.size()), t, env);
    };
    const HomotopyEvaluator h1 = c1.H, h2 = c2.H;
    out.H = [h1, h2, remap](std::span<const double> s, double t, const EvalEnv& env) {
        return remap(h1, h2, s, t, env);
    };
    if (c1.Hg && c2.Hg) {
        const HomotopyGradEvaluator g1 = c1.Hg, g2 = c2.Hg;
        out.Hg = [g1, g2, remap](std::span<const double> s, double t, const EvalEnv& env) {
            return remap(g1, g2, s, t, env);
        };
    } else {
        out.Hg = nullptr;
    }
    out.constant_in_s = c1.constant_in_s && c2.constant_in_s;
    out.constant_in_t = c1.constant_in_t && c2.constant_in_t;
    // an inert leading direction survives gluing only when both halves have
    // it (for a leading-slot glue the matching facets then make them equal)
    out.constant_in_lead = c1.constant_in_lead && c2.constant_in_lead;
    return out;
}

ParamHomotopy identity_payload(const ParamHomotopy& in) {
    ParamHomotopy out = in;
    out.ell = in.ell + 1;
    out.constant_in_lead = true;
    const std::size_t n = static_cast<std::size_t>(in.ell);
    const HomotopyEvaluator h = in.H;
    out.H = [h, n](std::span<const double> s, double t, const EvalEnv& env) {
        return h(s.first(n), t, env);
    };
    if (in.Hg) {
        const HomotopyGradEvaluator hg = in.Hg;
        out.Hg = [hg, n](std::span<const double> s, double t, const EvalEnv& env) {
            return hg(s.first(n), t, env);
        };
    }
    return out;
}

ACellPtr compose_impl(const ACellPtr& c2, const ACellPtr& c1, int p) {
    auto cell = std::make_shared<ACell>();
    cell->kind = ACell::Kind::Composite;
    cell->payload = glue_payload(c1->payload, c2->payload, p);
    cell->left = c2;
    cell->right = c1;
    cell->glue_level = p;
    return cell;
}

ACellPtr facet_A(const ACellPtr& c, int side) {
    if (c->level() < 1) throw std::invalid_argument("facet_A: level-0 cells have no facets");
    switch (c->kind) {
        case ACell::Kind::Identity:
            return c->inner;
        case ACell::Kind::Composite:
            if (c->glue_level == c->level() - 1)
                return side == 0 ? facet_A(c->right, 0) : facet_A(c->left, 1);
            return compose_impl(facet_A(c->left, side), facet_A(c->right, side), c->glue_level);
        case ACell::Kind::Atomic:
        default:
            return atomic_cell(c->payload.facet(side));
    }
}

} // namespace

ACellPtr atomic_cell(ParamHomotopy payload) {
    auto cell = std::make_shared<ACell>();
    cell->kind = ACell::Kind::Atomic;
    cell->payload = std::move(payload);
    return cell;
}

ACellPtr identity_A(const ACellPtr& c) {
    auto cell = std::make_shared<ACell>();
    cell->kind = ACell::Kind::Identity;
    cell->payload = identity_payload(c->payload);
    cell->inner = c;
    return cell;
}

ACellPtr compose_A(const ACellPtr& c2, const ACellPtr& c1, int p, const Tolerances& tol) {
    if (c2->level() != c1->level())
        throw std::invalid_argument("compose_A: cells must share the level");
    if (p < 0 || p >= c1->level())
        throw std::invalid_argument("compose_A: glue level out of range");
    const ACellPtr s2 = iterate_source_A(c2, c1->level() - p);
    const ACellPtr t1 = iterate_target_A(c1, c1->level() - p);
    if (!cells_equal_A(s2, t1, tol.spot_tol))
        throw std::invalid_argument("compose_A: facets do not match along level " + std::to_string(p));
    return compose_impl(c2, c1, p);
}

ACellPtr source_A(const ACellPtr& c) { return facet_A(c, 0); }
ACellPtr target_A(const ACellPtr& c) { return facet_A(c, 1); }

ACellPtr iterate_source_A(ACellPtr c, int k) {
    for (int i = 0; i < k; ++i) c = source_A(c);
    return c;
}
ACellPtr iterate_target_A(ACellPtr c, int k) {
    for (int i = 0; i < k; ++i) c = target_A(c);
    return c;
}

bool cells_equal_A(const ACellPtr& a, const ACellPtr& b, double tol) {
    if (a->level() != b->level()) return false;
    return homotopy_equal_on_spots(a->payload, b->payload, tol);
}

bool globular_identities_A(const ACellPtr& cell, double tol) {
    if (cell->level() < 2) return true;
    const ACellPtr ss = source_A(source_A(cell));
    const ACellPtr st = source_A(target_A(cell));
    const ACellPtr ts = target_A(source_A(cell));
    const ACellPtr tt = target_A(target_A(cell));
    return cells_equal_A(ss, st, tol) && cells_equal_A(ts, tt, tol);
}

bool GlobularSetA::validate(double tol) const {
    for (const auto& level : levels)
        for (const ACellPtr& c : level)
            if (!globular_identities_A(c, tol)) return false;
    return true;
}

namespace {

double mu_left(int piece, double v) {
    switch (piece) {
        case 0: return smoothstep(v);
        case 1: return smoothstep(2 * smoothstep(v / 2));
        default: return smoothstep(2 * smoothstep((v + 1) / 2) - 1);
    }
}
double mu_right(int piece, double v) {
    switch (piece) {
        case 0: return smoothstep(2 * smoothstep(v / 2));
        case 1: return smoothstep(2 * smoothstep((v + 1) / 2) - 1);
        default: return smoothstep(v);
    }
}

} // namespace

HomotopyWitness witness_assoc(const ACellPtr& c3, const ACellPtr& c2, const ACellPtr& c1, int p,
                              const Tolerances& tol) {
    HomotopyWitness w;
    w.endpoint0 = compose_A(compose_A(c3, c2, p, tol), c1, p, tol);
    w.endpoint1 = compose_A(c3, compose_A(c2, c1, p, tol), p, tol);

    const HomotopyEvaluator h1 = c1->payload.H, h2 = c2->payload.H, h3 = c3->payload.H;
    const int slot = p;
    const ParamHomotopy proto = c1->payload;
    w.family = [h1, h2, h3, slot, proto](double r) {
        ParamHomotopy out = proto;
        out.Hg = nullptr;
        out.H = [h1, h2, h3, slot, r](std::span<const double> s, double t, const EvalEnv& env) {
            const double b1 = (1 - r) * 0.5 + r * 0.25;
            const double b2 = (1 - r) * 0.75 + r * 0.5;
            const double v = s[static_cast<std::size_t>(slot)];
            int piece;
            double local;
            if (v <= b1) {
                piece = 0;
                local = v / b1;
            } else if (v <= b2) {
                piece = 1;
                local = (v - b1) / (b2 - b1);
            } else {
                piece = 2;
                local = (v - b2) / (1 - b2);
            }
            const double arg = (1 - r) * mu_left(piece, local) + r * mu_right(piece, local);
            std::array<double, 4> mod{};
            for (std::size_t i = 0; i < s.size(); ++i) mod[i] = s[i];
            mod[static_cast<std::size_t>(slot)] = arg;
            const std::span<const double> ms(mod.data(), s.size());
            if (piece == 0) return h1(ms, t, env);
            if (piece == 1) return h2(ms, t, env);
            return h3(ms, t, env);
        };
        return out;
    };
    return w;
}

HomotopyWitness witness_identity_law(const ACellPtr& c, int p, const Tolerances& tol) {
    const int ell = c->level();
    if (p < 0 || p >= ell) throw std::invalid_argument("witness_identity_law: bad level");

    ACellPtr pad = iterate_target_A(c, ell - p);
    for (int k = 0; k < ell - p; ++k) pad = identity_A(pad);

    HomotopyWitness w;
    w.endpoint0 = compose_A(pad, c, p, tol);
    w.endpoint1 = c;

    const HomotopyEvaluator h = c->payload.H;
    const int slot = p;
    const ParamHomotopy proto = c->payload;
    w.family = [h, slot, proto](double r) {
        ParamHomotopy out = proto;
        out.Hg = nullptr;
        out.H = [h, slot, r](std::span<const double> s, double t, const EvalEnv& env) {
            const double v = s[static_cast<std::size_t>(slot)];
            const double run_then_hold = v <= 0.5 ? smoothstep(2 * v) : 1.0;
            const double arg = (1 - r) * run_then_hold + r * v;
            std::array<double, 4> mod{};
            for (std::size_t i = 0; i < s.size(); ++i) mod[i] = s[i];
            mod[static_cast<std::size_t>(slot)] = arg;
            return h(std::span<const double>(mod.data(), s.size()), t, env);
        };
        return out;
    };
    return w;
}

bool witness_endpoints_ok(const HomotopyWitness& w, double tol) {
    return homotopy_equal_on_spots(w.family(0.0), w.endpoint0->payload, tol) &&
           homotopy_equal_on_spots(w.family(1.0), w.endpoint1->payload, tol);
}

// ---------------------------------------------------------------------------
// B side
// ---------------------------------------------------------------------------

BCellPtr make_chain_map_cell(std::shared_ptr<const ChainComplex> C,
                             std::shared_ptr<const ChainComplex> Cp, GradedMap map) {
    const CheckReport rep = verify_chain_map(map, *C, *Cp);
    if (!rep.pass)
        throw std::invalid_argument("make_chain_map_cell: not a chain map at " + rep.first_failure);
    auto b = std::make_shared<BCell>();
    b->level = 0;
    b->C = std::move(C);
    b->Cp = std::move(Cp);
    b->map = std::move(map);
    return b;
}

BCellPtr make_homotopy_cell(GradedMap map, const BCellPtr& src, const BCellPtr& tgt) {
    if (!src || !tgt || src->level != tgt->level)
        throw std::invalid_argument("make_homotopy_cell: endpoint levels mismatch");
    const CheckReport rep = verify_homotopy(map, src->map, tgt->map, *src->C, *src->Cp);
    if (!rep.pass)
        throw std::invalid_argument("make_homotopy_cell: homotopy relation fails at " + rep.first_failure);
    auto b = std::make_shared<BCell>();
    b->level = src->level + 1;
    b->C = src->C;
    b->Cp = src->Cp;
    b->map = std::move(map);
    b->src = src;
    b->tgt = tgt;
    return b;
}

BCellPtr iterate_source_B(BCellPtr b, int k) {
    for (int i = 0; i < k; ++i) b = b->src;
    return b;
}
BCellPtr iterate_target_B(BCellPtr b, int k) {
    for (int i = 0; i < k; ++i) b = b->tgt;
    return b;
}

bool cells_equal_B(const BCellPtr& a, const BCellPtr& b) {
    if (!a || !b) return a == b;
    if (a->level != b->level) return false;
    if (!a->map.same_blocks(b->map)) return false;
    if (a->level == 0) return true;
    return cells_equal_B(a->src, b->src) && cells_equal_B(a->tgt, b->tgt);
}

bool globular_identities_B(const BCellPtr& cell) {
    if (cell->level < 2) return true;
    return cells_equal_B(cell->src->src, cell->tgt->src) &&
           cells_equal_B(cell->src->tgt, cell->tgt->tgt);
}

bool GlobularSetB::validate() const {
    for (const auto& level : levels)
        for (const BCellPtr& c : level)
            if (!globular_identities_B(c)) return false;
    return true;
}

bool composable_B(const BCellPtr& b2, const BCellPtr& b1, int p) {
    if (!b2 || !b1 || b2->level != b1->level || p < 0 || p >= b1->level) return false;
    return cells_equal_B(iterate_source_B(b2, b1->level - p), iterate_target_B(b1, b1->level - p));
}

BCellPtr compose_B(const BCellPtr& b2, const BCellPtr& b1, int p) {
    if (!composable_B(b2, b1, p))
        throw std::invalid_argument("compose_B: cells not gluable along level " + std::to_string(p));
    GradedMap sum = graded_sum(b2->map, b1->map);
    BCellPtr src, tgt;
    if (p == b1->level - 1) {
        src = b1->src;
        tgt = b2->tgt;
    } else {
        src = compose_B(b2->src, b1->src, p);
        tgt = compose_B(b2->tgt, b1->tgt, p);
    }
    return make_homotopy_cell(std::move(sum), src, tgt);
}

BCellPtr identity_B(const BCellPtr& b) {
    GradedMap zero = zero_graded_map(*b->C, *b->Cp, b->level + 1);
    return make_homotopy_cell(std::move(zero), b, b);
}

// ---------------------------------------------------------------------------
// The functor
// ---------------------------------------------------------------------------

BCellPtr functor_F(const ACellPtr& c, const Tolerances& tol) {
    switch (c->kind) {
        case ACell::Kind::Identity:
            return identity_B(functor_F(c->inner, tol));
        case ACell::Kind::Composite:
            return compose_B(functor_F(c->left, tol), functor_F(c->right, tol), c->glue_level);
        case ACell::Kind::Atomic:
        default:
            return functor_F_rescan(c, tol);
    }
}

BCellPtr functor_F_rescan(const ACellPtr& c, const Tolerances& tol) {
    const ParamHomotopy& h = c->payload;
    if (h.ell == 0) {
        auto C = std::make_shared<ChainComplex>(build_msw(*h.alpha, tol));
        auto Cp = std::make_shared<ChainComplex>(build_msw(*h.beta, tol));
        return make_chain_map_cell(std::move(C), std::move(Cp), continuation_map(h, tol));
    }
    if (h.ell > 2)
        throw std::invalid_argument("functor_F: geometric counting supports atomic levels 0..2");
    const BCellPtr src = functor_F(source_A(c), tol);
    const BCellPtr tgt = functor_F(target_A(c), tol);
    GradedMap map = higher_homotopy(h, h.ell, tol);
    return make_homotopy_cell(std::move(map), src, tgt);
}

std::vector<double> predict_composite_locus(const std::vector<double>& roots_c1,
                                            const std::vector<double>& roots_c2) {
    std::vector<double> out;
    for (double r : roots_c1) out.push_back(smoothstep_inv(r) / 2);
    for (double r : roots_c2) out.push_back((smoothstep_inv(r) + 1) / 2);
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Random generators and axiom suites
// ---------------------------------------------------------------------------

std::shared_ptr<const ChainComplex> random_complex(std::uint64_t& state, int max_dim, int top_degree) {
    std::vector<std::vector<std::string>> basis;
    for (int k = 0; k <= top_degree; ++k) {
        const int d = k == 0 ? 1 + rand_below(state, max_dim) : rand_below(state, max_dim + 1);
        std::vector<std::string> labels;
        for (int i = 0; i < d; ++i) labels.push_back("g" + std::to_string(k) + "_" + std::to_string(i));
        basis.push_back(std::move(labels));
    }
    std::vector<Gf2Matrix> boundary;
    boundary.emplace_back(0, basis[0].size());
    for (int k = 1; k <= top_degree; ++k) {
        const std::size_t rows = basis[static_cast<std::size_t>(k - 1)].size();
        const std::size_t cols = basis[static_cast<std::size_t>(k)].size();
        Gf2Matrix d(rows, cols);
        if (k == 1) {
            for (std::size_t i = 0; i < rows; ++i)
                for (std::size_t j = 0; j < cols; ++j) d.set(i, j, rand_bit(state));
        } else {
            // columns sampled from ker(previous boundary)
            const auto kernel = gf2_kernel_basis(boundary.back());
            for (std::size_t j = 0; j < cols; ++j) {
                std::vector<std::uint8_t> col(rows, 0);
                for (const auto& kv : kernel)
                    if (rand_bit(state))
                        for (std::size_t i = 0; i < rows; ++i) col[i] = static_cast<std::uint8_t>(col[i] ^ kv[i]);
                for (std::size_t i = 0; i < rows; ++i) d.set(i, j, col[i]);
            }
        }
        boundary.push_back(d);
    }
    return std::make_shared<ChainComplex>(ChainComplex::make(std::move(basis), std::move(boundary)));
}

GradedMap random_graded_map(std::uint64_t& state, const ChainComplex& C, const ChainComplex& Cp,
                            int shift) {
    GradedMap g = zero_graded_map(C, Cp, shift);
    for (auto& blk : g.blocks)
        for (std::size_t i = 0; i < blk.rows(); ++i)
            for (std::size_t j = 0; j < blk.cols(); ++j) blk.set(i, j, rand_bit(state));
    return g;
}

GradedMap random_chain_map(std::uint64_t& state, const ChainComplex& C, const ChainComplex& Cp) {
    // variables: all entries of phi_r; constraints: d' phi = phi d per degree
    std::vector<std::size_t> offset;
    std::size_t nvar = 0;
    for (int r = 0; r <= C.top_degree(); ++r) {
        offset.push_back(nvar);
        nvar += Cp.dim(r) * C.dim(r);
    }
    auto var_of = [&](int r, std::size_t i, std::size_t j) {
        return offset[static_cast<std::size_t>(r)] + i * C.dim(r) + j;
    };
    std::size_t neq = 0;
    for (int r = 1; r <= C.top_degree(); ++r) neq += Cp.dim(r - 1) * C.dim(r);

    Gf2Matrix M(neq, nvar);
    std::size_t eq = 0;
    for (int r = 1; r <= C.top_degree(); ++r) {
        const Gf2Matrix& dp = Cp.boundary(r);
        const Gf2Matrix& d = C.boundary(r);
        for (std::size_t i = 0; i < Cp.dim(r - 1); ++i)
            for (std::size_t j = 0; j < C.dim(r); ++j) {
                for (std::size_t k = 0; k < Cp.dim(r); ++k)
                    if (dp(i, k)) M.flip(eq, var_of(r, k, j));
                for (std::size_t m = 0; m < C.dim(r - 1); ++m)
                    if (d(m, j)) M.flip(eq, var_of(r - 1, i, m));
                ++eq;
            }
    }

    std::vector<std::uint8_t> x(nvar, 0);
    for (const auto& kv : gf2_kernel_basis(M))
        if (rand_bit(state))
            for (std::size_t i = 0; i < nvar; ++i) x[i] = static_cast<std::uint8_t>(x[i] ^ kv[i]);

    GradedMap g = zero_graded_map(C, Cp, 0);
    for (int r = 0; r <= C.top_degree(); ++r)
        for (std::size_t i = 0; i < Cp.dim(r); ++i)
            for (std::size_t j = 0; j < C.dim(r); ++j) g.blocks[static_cast<std::size_t>(r)].set(i, j, x[var_of(r, i, j)]);
    return g;
}

namespace {

struct AxiomTally {
    AxiomReport* rep;
    void record(int axiom, bool ok, const std::string& what) {
        if (ok) {
            ++rep->pass[static_cast<std::size_t>(axiom)];
        } else {
            ++rep->fail[static_cast<std::size_t>(axiom)];
            if (rep->first_failure.empty()) rep->first_failure = what;
        }
    }
};

// b0 shifted by the homotopy relation of a random map: a valid parallel cell
GradedMap shift_by_relation(const GradedMap& base, const GradedMap& R, const ChainComplex& C,
                            const ChainComplex& Cp) {
    GradedMap out = base;
    for (int r = 0; r <= C.top_degree(); ++r) {
        Gf2Matrix add(Cp.dim(r + R.shift - 1), C.dim(r));
        if (Cp.dim(r + R.shift) > 0 && r + R.shift <= Cp.top_degree())
            add = add + Cp.boundary(r + R.shift) * R.block(r);
        if (r >= 1 && C.dim(r - 1) > 0) add = add + R.block(r - 1) * C.boundary(r);
        out.blocks[static_cast<std::size_t>(r)] = out.blocks[static_cast<std::size_t>(r)] + add;
    }
    return out;
}

} // namespace

AxiomReport check_axioms_B(std::uint64_t seed, int samples) {
    AxiomReport rep;
    AxiomTally tally{&rep};
    std::uint64_t state = seed * 0x9E3779B97F4A7C15ULL + 0x243F6A8885A308D3ULL;

    for (int sample = 0; sample < samples; ++sample) {
        rep.samples++;
        auto C = random_complex(state);
        auto Cp = random_complex(state);

        // level-0 chain: x0 --a--> x1 --b--> x2, plus parallel copies
        const GradedMap phi0 = random_chain_map(state, *C, *Cp);
        const GradedMap Ra = random_graded_map(state, *C, *Cp, 1);
        const GradedMap Rb = random_graded_map(state, *C, *Cp, 1);
        const GradedMap Rc = random_graded_map(state, *C, *Cp, 1);
        const GradedMap phi1 = shift_by_relation(phi0, Ra, *C, *Cp);
        const GradedMap phi2 = shift_by_relation(phi1, Rb, *C, *Cp);
        const GradedMap phi3 = shift_by_relation(phi2, Rc, *C, *Cp);

        const BCellPtr x0 = make_chain_map_cell(C, Cp, phi0);
        const BCellPtr x1 = make_chain_map_cell(C, Cp, phi1);
        const BCellPtr x2 = make_chain_map_cell(C, Cp, phi2);
        const BCellPtr x3 = make_chain_map_cell(C, Cp, phi3);

        const BCellPtr a = make_homotopy_cell(Ra, x0, x1);
        const BCellPtr b = make_homotopy_cell(Rb, x1, x2);
        const BCellPtr cc = make_homotopy_cell(Rc, x2, x3);

        // (a) sources and targets of composites
        {
            const BCellPtr ba = compose_B(b, a, 0);
            tally.record(0, cells_equal_B(ba->src, a->src) && cells_equal_B(ba->tgt, b->tgt),
                         "axiom (a) at level 1");
        }
        // (b) identity endpoints
        {
            const BCellPtr ia = identity_B(a);
            tally.record(1, cells_equal_B(ia->src, a) && cells_equal_B(ia->tgt, a), "axiom (b)");
        }
        // (c) associativity
        {
            const BCellPtr left = compose_B(cc, compose_B(b, a, 0), 0);
            const BCellPtr right = compose_B(compose_B(cc, b, 0), a, 0);
            tally.record(2, cells_equal_B(left, right), "axiom (c) at level 1");
        }
        // (d) identities absorb
        {
            const BCellPtr lhs = compose_B(identity_B(iterate_target_B(a, 1)), a, 0);
            const BCellPtr rhs = compose_B(a, identity_B(iterate_source_B(a, 1)), 0);
            tally.record(3, cells_equal_B(lhs, a) && cells_equal_B(rhs, a), "axiom (d) at level 1");
        }

        // level-2 grid over two columns for binary interchange
        {
            const GradedMap S1 = random_graded_map(state, *C, *Cp, 2);
            const GradedMap S2 = random_graded_map(state, *C, *Cp, 2);
            const GradedMap T1 = random_graded_map(state, *C, *Cp, 2);
            const GradedMap T2 = random_graded_map(state, *C, *Cp, 2);

            const GradedMap a1m = shift_by_relation(Ra, S1, *C, *Cp);
            const GradedMap a2m = shift_by_relation(a1m, S2, *C, *Cp);
            const GradedMap b1m = shift_by_relation(Rb, T1, *C, *Cp);
            const GradedMap b2m = shift_by_relation(b1m, T2, *C, *Cp);

            const BCellPtr alpha0 = a;
            const BCellPtr alpha1 = make_homotopy_cell(a1m, x0, x1);
            const BCellPtr alpha2 = make_homotopy_cell(a2m, x0, x1);
            const BCellPtr beta0 = b;
            const BCellPtr beta1 = make_homotopy_cell(b1m, x1, x2);
            const BCellPtr beta2 = make_homotopy_cell(b2m, x1, x2);

            const BCellPtr A = make_homotopy_cell(S1, alpha0, alpha1);
            const BCellPtr B = make_homotopy_cell(S2, alpha1, alpha2);
            const BCellPtr Cc = make_homotopy_cell(T1, beta0, beta1);
            const BCellPtr D = make_homotopy_cell(T2, beta1, beta2);

            const BCellPtr lhs = compose_B(compose_B(D, Cc, 1), compose_B(B, A, 1), 0);
            const BCellPtr rhs = compose_B(compose_B(D, B, 0), compose_B(Cc, A, 0), 1);
            GlobularSetB gs;
            gs.levels = {{x0, x1, x2}, {alpha0, alpha1, alpha2, beta0, beta1, beta2}, {A, B, Cc, D, lhs, rhs}};
            tally.record(4, cells_equal_B(lhs, rhs) && gs.validate(), "axiom (e) binary interchange");

            // (f) nullary interchange at level 1 -> 2
            const BCellPtr lhs_f = compose_B(identity_B(b), identity_B(a), 0);
            const BCellPtr rhs_f = identity_B(compose_B(b, a, 0));
            tally.record(5, cells_equal_B(lhs_f, rhs_f), "axiom (f) nullary interchange");
        }
    }
    return rep;
}

namespace {

/// Synthetic analytic ell-cell payloads for the A-side axiom suite: smooth
/// blends of lower cells plus a facet-vanishing modulation. Exactly the
/// degeneracy structure the definitions require, cheap to evaluate.
struct SyntheticFactory {
    std::shared_ptr<const MorseSmalePair> alpha, beta;
    double T = 1.0;
    Expression ga = Expression::parse("sin(2*x+y)*cos(z)");
    Expression gb = Expression::parse("cos(x-3*z)*sin(y)");
    Expression gc = Expression::parse("sin(x*y+z)");

    ParamHomotopy level0(double coef) const {
        ParamHomotopy h;
        h.ell = 0;
        h.cutoff = T;
        h.surface = alpha->surface;
        h.alpha = alpha;
        h.beta = beta;
        h.constant_in_s = true;
        const Expression fa = alpha->f.expression(), fb = beta->f.expression(), g = ga;
        const double Tc = T;
        h.H = [fa, fb, g, coef, Tc](std::span<const double>, double t, const EvalEnv& env) {
            const Jet a = fa.jet(env), b = fb.jet(env);
            const double w = smoothstep((t + Tc) / (2 * Tc));
            Jet out = a + scale_jet(b - a, w);
            return out + scale_jet(g.jet(env), coef * bump_value(t / Tc));
        };
        return h;
    }

    /// ell-cell from lower endpoints lo -> hi plus a modulation that
    /// vanishes (flat) on every facet of the new leading parameter.
    ParamHomotopy blend(const ParamHomotopy& lo, const ParamHomotopy& hi, double coef,
                        const Expression& g) const {
        if (lo.ell != hi.ell) throw std::invalid_argument("SyntheticFactory::blend: level mismatch");
        ParamHomotopy h = lo;
        h.ell = lo.ell + 1;
        h.constant_in_s = false;
        const HomotopyEvaluator hl = lo.H, hh = hi.H;
        const Expression gg = g;
        const double Tc = T;
        const std::size_t n = static_cast<std::size_t>(lo.ell);
        h.H = [hl, hh, gg, coef, Tc, n](std::span<const double> s, double t, const EvalEnv& env) {
            const double lead = s[n];
            const double w = smoothstep(lead);
            const Jet a = hl(s.first(n), t, env);
            const Jet b = hh(s.first(n), t, env);
            Jet out = a + scale_jet(b - a, w);
            // modulation flat on every facet, inner slots included
            double m = w * (1 - w);
            for (std::size_t i = 0; i < n; ++i) {
                const double wi = smoothstep(s[i]);
                m *= wi * (1 - wi);
            }
            return out + scale_jet(gg.jet(env), coef * m * bump_value(t / Tc));
        };
        return h;
    }
};

} // namespace

AxiomReport check_axioms_A(std::uint64_t seed, int samples,
                           std::shared_ptr<const MorseSmalePair> alpha,
                           std::shared_ptr<const MorseSmalePair> beta, double cutoff,
                           const Tolerances& tol) {
    AxiomReport rep;
    AxiomTally tally{&rep};
    std::uint64_t state = seed * 0x9E3779B97F4A7C15ULL + 0x13198A2E03707344ULL;
    SyntheticFactory fac{std::move(alpha), std::move(beta), cutoff};

    const double eq = tol.spot_tol;
    for (int sample = 0; sample < samples; ++sample) {
        rep.samples++;
        auto coef = [&]() { return 0.6 * rand_unit(state) - 0.3; };

        // level-0 cells X, Y, Z and parallel level-1 cells between them
        const ParamHomotopy X = fac.level0(coef());
        const ParamHomotopy Y = fac.level0(coef());
        const ParamHomotopy Z = fac.level0(coef());
        const ACellPtr cX = atomic_cell(X), cY = atomic_cell(Y), cZ = atomic_cell(Z);

        const ACellPtr a0 = atomic_cell(fac.blend(X, Y, coef(), fac.gb));
        const ACellPtr a1 = atomic_cell(fac.blend(X, Y, coef(), fac.gc));
        const ACellPtr a2 = atomic_cell(fac.blend(X, Y, coef(), fac.gb));
        const ACellPtr b0 = atomic_cell(fac.blend(Y, Z, coef(), fac.gc));
        const ACellPtr b1 = atomic_cell(fac.blend(Y, Z, coef(), fac.gb));
        const ACellPtr b2 = atomic_cell(fac.blend(Y, Z, coef(), fac.gc));

        // (a) sources and targets of composites, p = 0 on level 1
        {
            const ACellPtr ba = compose_A(b0, a0, 0, tol);
            const bool ok = cells_equal_A(source_A(ba), source_A(a0), eq) &&
                            cells_equal_A(target_A(ba), target_A(b0), eq);
            tally.record(0, ok, "A axiom (a)");
        }
        // (b) identity endpoints
        {
            const ACellPtr ia = identity_A(a0);
            const bool ok = cells_equal_A(source_A(ia), a0, eq) && cells_equal_A(target_A(ia), a0, eq);
            tally.record(1, ok, "A axiom (b)");
        }
        // (c) associativity up to homotopy: witness endpoints
        {
            const ACellPtr c_extra = atomic_cell(fac.level0(coef()));
            const ACellPtr d0 = atomic_cell(fac.blend(Z, c_extra->payload, coef(), fac.ga));
            const HomotopyWitness w = witness_assoc(d0, b0, a0, 0, tol);
            tally.record(2, witness_endpoints_ok(w, eq), "A axiom (c) witness endpoints");
        }
        // (d) identity law up to homotopy
        {
            const HomotopyWitness w = witness_identity_law(a0, 0, tol);
            tally.record(3, witness_endpoints_ok(w, eq), "A axiom (d) witness endpoints");
        }
        // (e) binary interchange, exact: level-2 grid; also drive the
        // level-2 witnesses along both glue levels
        {
            const ACellPtr A = atomic_cell(fac.blend(a0->payload, a1->payload, coef(), fac.ga));
            const ACellPtr B = atomic_cell(fac.blend(a1->payload, a2->payload, coef(), fac.gb));
            const ACellPtr Cc = atomic_cell(fac.blend(b0->payload, b1->payload, coef(), fac.gc));
            const ACellPtr D = atomic_cell(fac.blend(b1->payload, b2->payload, coef(), fac.ga));
            const ACellPtr lhs = compose_A(compose_A(D, Cc, 1, tol), compose_A(B, A, 1, tol), 0, tol);
            const ACellPtr rhs = compose_A(compose_A(D, B, 0, tol), compose_A(Cc, A, 0, tol), 1, tol);
            GlobularSetA gs;
            gs.levels = {{a0, a1, a2, b0, b1, b2}, {A, B, Cc, D, lhs, rhs}};
            tally.record(4, cells_equal_A(lhs, rhs, eq) && gs.validate(eq), "A axiom (e) interchange");

            const ACellPtr a3 = atomic_cell(fac.blend(X, Y, coef(), fac.ga));
            const ACellPtr E2 = atomic_cell(fac.blend(a2->payload, a3->payload, coef(), fac.gc));
            const HomotopyWitness w_up = witness_assoc(E2, B, A, 1, tol);
            // a third column of cells makes the triple composable along p = 0
            const ParamHomotopy W0 = fac.level0(coef());
            const ACellPtr g0 = atomic_cell(fac.blend(Z, W0, coef(), fac.gb));
            const ACellPtr g1 = atomic_cell(fac.blend(Z, W0, coef(), fac.gc));
            const ACellPtr G = atomic_cell(fac.blend(g0->payload, g1->payload, coef(), fac.ga));
            const HomotopyWitness w_across = witness_assoc(G, Cc, A, 0, tol);
            tally.record(2, witness_endpoints_ok(w_up, eq) && witness_endpoints_ok(w_across, eq),
                         "A axiom (c) level-2 witnesses");
            const HomotopyWitness w_id0 = witness_identity_law(A, 0, tol);
            const HomotopyWitness w_id1 = witness_identity_law(A, 1, tol);
            tally.record(3, witness_endpoints_ok(w_id0, eq) && witness_endpoints_ok(w_id1, eq),
                         "A axiom (d) level-2 witnesses");
        }
        // (f) nullary interchange, exact
        {
            const ACellPtr lhs = compose_A(identity_A(b0), identity_A(a0), 0, tol);
            const ACellPtr rhs = identity_A(compose_A(b0, a0, 0, tol));
            tally.record(5, cells_equal_A(lhs, rhs, eq), "A axiom (f) nullary interchange");
        }
        (void)cX;
        (void)cY;
        (void)cZ;
    }
    return rep;
}

} // namespace morse
