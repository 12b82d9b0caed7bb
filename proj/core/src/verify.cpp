#include "morsetower/verify.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace morse {

namespace {

using nlohmann::ordered_json;

ordered_json matrix_json(const Gf2Matrix& m) {
    ordered_json jm;
    jm["rows"] = m.rows();
    jm["cols"] = m.cols();
    ordered_json data = ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(static_cast<int>(m(i, j)));
        data.push_back(row);
    }
    jm["data"] = data;
    return jm;
}

ordered_json graded_json(const GradedMap& g) {
    ordered_json j;
    j["shift"] = g.shift;
    ordered_json blocks = ordered_json::array();
    for (const auto& b : g.blocks) blocks.push_back(matrix_json(b));
    j["blocks"] = blocks;
    return j;
}

std::string ranks_text(const std::vector<std::size_t>& r) {
    std::string s = "(";
    for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + std::to_string(r[i]);
    return s + ")";
}

ordered_json tol_json(const Tolerances& t) {
    ordered_json j;
    j["grad_tol"] = t.grad_tol;
    j["nondegen_tol"] = t.nondegen_tol;
    j["dedup_tol"] = t.dedup_tol;
    j["settle_tol"] = t.settle_tol;
    j["sep_eps"] = t.sep_eps;
    j["cross_tol"] = t.cross_tol;
    j["locus_sep"] = t.locus_sep;
    j["rk_rel"] = t.rk_rel;
    j["rk_abs"] = t.rk_abs;
    j["t_max"] = t.t_max;
    j["spot_tol"] = t.spot_tol;
    j["bisect_tol"] = t.bisect_tol;
    j["scan_grid"] = t.scan_grid;
    return j;
}

bool induced_equal(const InducedMap& a, const InducedMap& b) {
    if (a.blocks.size() != b.blocks.size()) return false;
    for (std::size_t i = 0; i < a.blocks.size(); ++i)
        if (!(a.blocks[i] == b.blocks[i])) return false;
    return true;
}

} // namespace

std::string VerifySummary::to_text() const {
    std::ostringstream os;
    os << "scenario: " << scenario << "\n";
    for (const auto& l : lines)
        os << (l.pass ? "[PASS] " : "[FAIL] ") << l.check
           << (l.detail.empty() ? "" : "  (" + l.detail + ")") << "\n";
    os << (all_pass() ? "result: all checks passed\n" : "result: FAILURES present\n");
    return os.str();
}

const VerifyLine* VerifySummary::find(const std::string& check) const {
    for (const auto& l : lines)
        if (l.check == check) return &l;
    return nullptr;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::filesystem::create_directories(std::filesystem::path(path).parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << content;
}

std::string graded_map_json(const GradedMap& g) { return graded_json(g).dump(2); }

std::string summary_json(const VerifySummary& s, const Tolerances& tol, std::uint64_t seed) {
    ordered_json j;
    j["scenario"] = s.scenario;
    j["seed"] = seed;
    j["tolerances"] = tol_json(tol);
    ordered_json lines = ordered_json::array();
    for (const auto& l : s.lines) {
        ordered_json jl;
        jl["check"] = l.check;
        jl["pass"] = l.pass;
        jl["detail"] = l.detail;
        lines.push_back(jl);
    }
    j["checks"] = lines;
    j["all_pass"] = s.all_pass();
    return j.dump(2);
}

VerifySummary verify_all(const Scenario& sc, const VerifyOptions& opt) {
    const Tolerances tol = sc.tol.scaled(opt.tol_scale);
    VerifySummary sum;
    sum.scenario = sc.name;
    const bool artifacts = !opt.out_dir.empty();
    auto outpath = [&](const std::string& name) { return opt.out_dir + "/" + name; };

    auto alpha = sc.make_alpha();
    auto beta = sc.has_beta ? sc.make_beta() : alpha;

    ChainComplex C, Cp;
    bool built = false;
    try {
        C = build_msw(*alpha, tol);
        Cp = sc.has_beta ? build_msw(*beta, tol) : C;
        built = true;
        sum.lines.push_back({"d2_zero", true, "both complexes satisfy d^2 = 0 bit-exact"});
    } catch (const std::exception& e) {
        sum.lines.push_back({"d2_zero", false, e.what()});
    }
    if (!built) return sum;

    if (artifacts) {
        write_text_file(outpath("complex_alpha.json"), chain_to_json(C));
        if (sc.has_beta) write_text_file(outpath("complex_beta.json"), chain_to_json(Cp));
    }

    const std::vector<std::size_t> hA = homology_ranks(C);
    const std::vector<std::size_t> hB = homology_ranks(Cp);
    sum.lines.push_back({"homology_ranks", true, ranks_text(hA) + (sc.has_beta ? " / " + ranks_text(hB) : "")});

    if (!sc.family) return sum;

    auto record = [&](const std::string& check, bool pass, const std::string& detail) {
        sum.lines.push_back({check, pass, detail});
    };

    const bool dump = !opt.dump_trajectories_dir.empty();
    auto dump_window_orbit = [&](const ParamHomotopy& h, const ChartPoint& from, Direction dir,
                                 const std::string& name) {
        FlowSpec spec = FlowSpec::slice(h, {});
        const Trajectory tr = integrate(spec, from, dir, tol);
        const std::string path = opt.dump_trajectories_dir + "/" + name + ".csv";
        std::filesystem::create_directories(opt.dump_trajectories_dir);
        write_trajectory_csv(*sc.surface, tr, path);
        return path;
    };

    try {
        ParamHomotopy h = sc.make_family(alpha, beta);

        if (h.ell == 0) {
            const GradedMap U = continuation_map(h, tol);
            record("chain_map", true, "d'U = Ud bit-exact");
            const InducedMap ind = induced_homology_map(U, C, Cp);
            record("homology_iso", ind.iso, ind.iso ? "induced map invertible in every degree"
                                                    : "induced map not invertible");
            if (artifacts) write_text_file(outpath("continuation.json"), graded_map_json(U));
            if (dump) {
                for (const CriticalPoint& p : alpha->critical_points)
                    if (p.index == 0) dump_window_orbit(h, p.at, Direction::Forward, "window_" + p.id);
                for (const CriticalPoint& q : beta->critical_points)
                    if (q.index == 2) dump_window_orbit(h, q.at, Direction::Backward, "window_" + q.id);
            }
        } else if (h.ell == 1) {
            const ChainHomotopyResult chr = chain_homotopy(h, tol);
            record("chain_map_facet0", true, "d'U0 = U0 d bit-exact");
            record("chain_map_facet1", true, "d'U1 = U1 d bit-exact");
            record("homotopy_relation", true, "U1 + U0 = d'E + E d bit-exact");

            // boundary strata parity for every index-gap-0 pair
            bool all_even = true;
            std::string bad;
            ordered_json strata = ordered_json::array();
            for (const CriticalPoint& p : alpha->critical_points)
                for (const CriticalPoint& q : beta->critical_points) {
                    if (p.index != q.index) continue;
                    const BoundaryStrata bs = boundary_strata(h, p.id, q.id, tol);
                    ordered_json js;
                    js["pair"] = {p.id, q.id};
                    js["facet0"] = bs.facet0_count;
                    js["facet1"] = bs.facet1_count;
                    js["type_iii"] = bs.type_iii.size();
                    js["type_iv"] = bs.type_iv.size();
                    js["total"] = bs.total_count;
                    js["parity"] = bs.total_parity;
                    strata.push_back(js);
                    if (bs.total_parity != 0) {
                        all_even = false;
                        bad = p.id + "," + q.id;
                    }
                }
            record("strata_parity", all_even,
                   all_even ? "every gap-0 pair has evenly many boundary points"
                            : "odd boundary at (" + bad + ")");

            const InducedMap i0 = induced_homology_map(chr.U0, C, Cp);
            const InducedMap i1 = induced_homology_map(chr.U1, C, Cp);
            record("induced_maps_equal", induced_equal(i0, i1), "U0, U1 agree on homology");
            record("homology_iso", i0.iso && i1.iso, "facet maps are quasi-isomorphisms");

            if (!sc.family->designed_source.empty()) {
                NonGenericLocus locus =
                    scan_nongeneric(h, sc.family->designed_source, sc.family->designed_target, tol);
                record("designed_locus_odd", locus.parity() == 1,
                       std::to_string(locus.roots.size()) + " root(s) for the designed pair");
                if (dump) {
                    for (std::size_t i = 0; i < locus.roots.size(); ++i) {
                        ParamHomotopy slice = h.slice_leading(locus.roots[i].s);
                        locus.roots[i].witness_file = dump_window_orbit(
                            slice, alpha->cp(sc.family->designed_source).at, Direction::Forward,
                            "locus_root_" + std::to_string(i));
                    }
                }
                if (artifacts) {
                    ordered_json jl;
                    jl["pair"] = {sc.family->designed_source, sc.family->designed_target};
                    ordered_json roots = ordered_json::array();
                    for (const auto& r : locus.roots) {
                        ordered_json jr;
                        jr["s"] = r.s;
                        jr["parity"] = r.parity;
                        jr["witness_file"] = r.witness_file;
                        roots.push_back(jr);
                    }
                    jl["roots"] = roots;
                    write_text_file(outpath("locus.json"), jl.dump(2));
                }
            }
            if (artifacts) {
                write_text_file(outpath("facet0.json"), graded_map_json(chr.U0));
                write_text_file(outpath("facet1.json"), graded_map_json(chr.U1));
                write_text_file(outpath("homotopy.json"), graded_map_json(chr.E));
                write_text_file(outpath("strata.json"), strata.dump(2));
            }
        } else if (h.ell == 2) {
            const GradedMap phi2 = higher_homotopy(h, 2, tol);
            const GradedMap e0 = chain_homotopy(h.facet(0), tol).E;
            const GradedMap e1 = chain_homotopy(h.facet(1), tol).E;
            const CheckReport rel = verify_homotopy(phi2, e0, e1, C, Cp);
            record("facet_relation", rel.pass,
                   rel.pass ? "E1 + E0 = d'phi2 + phi2 d bit-exact" : rel.first_failure);
            if (artifacts) write_text_file(outpath("homotopy2.json"), graded_map_json(phi2));
        }
    } catch (const std::exception& e) {
        sum.lines.push_back({"family_pipeline", false, e.what()});
    }

    if (artifacts)
        write_text_file(outpath("summary.json"), summary_json(sum, tol, opt.seed));
    return sum;
}

} // namespace morse
