// Scenario runner: builds MSW complexes, continuation maps and chain
// homotopies from scenario files, scans non-generic loci, runs the category
// axiom suites, and drives the full verification pipeline.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "morsetower/verify.hpp"

namespace {

using namespace morse;

int g_thread_cap = 0; // parsed from MORSE_TOWER_THREADS; informational

struct CommonArgs {
    std::string scenario_path;
    std::string out_dir;
    std::string dump_trajectories;
    std::uint64_t seed = 7;
    double tol_scale = 1.0;
};

void add_common(CLI::App* app, CommonArgs& a, bool needs_scenario = true) {
    auto* opt = app->add_option("--scenario", a.scenario_path, "scenario JSON file");
    if (needs_scenario) opt->required();
    app->add_option("--out", a.out_dir, "artifact output directory");
    app->add_option("--seed", a.seed, "seed for randomized suites");
    app->add_option("--tol-scale", a.tol_scale, "multiply all tolerances (stability studies)");
    app->add_option("--dump-trajectories", a.dump_trajectories, "directory for witness CSVs");
}

Scenario load(const CommonArgs& a) {
    Scenario sc = Scenario::load_file(a.scenario_path);
    if (a.tol_scale != 1.0) sc.tol = sc.tol.scaled(a.tol_scale);
    return sc;
}

int cmd_msw_build(const CommonArgs& a, const std::string& which) {
    const Scenario sc = load(a);
    auto pair = which == "beta" ? sc.make_beta() : sc.make_alpha();
    const ChainComplex c = build_msw(*pair, sc.tol);
    const std::string js = chain_to_json(c);
    if (!a.out_dir.empty())
        write_text_file(a.out_dir + "/complex_" + which + ".json", js);
    else
        std::cout << js << "\n";
    std::cout << "built complex for f_" << which << "; homology " << [&] {
        std::string s = "(";
        const auto h = homology_ranks(c);
        for (std::size_t i = 0; i < h.size(); ++i) s += (i ? "," : "") + std::to_string(h[i]);
        return s + ")";
    }() << "\n";
    return 0;
}

int cmd_msw_continue(const CommonArgs& a) {
    const Scenario sc = load(a);
    if (!sc.family || sc.family->ell != 0) {
        std::cerr << "msw continue: scenario must declare an ell=0 homotopy\n";
        return 2;
    }
    auto alpha = sc.make_alpha();
    auto beta = sc.make_beta();
    const ParamHomotopy h = sc.make_family(alpha, beta);
    const GradedMap U = continuation_map(h, sc.tol);
    const std::string js = graded_map_json(U);
    if (!a.out_dir.empty())
        write_text_file(a.out_dir + "/continuation.json", js);
    else
        std::cout << js << "\n";
    std::cout << "continuation map verified: d'U = Ud\n";
    return 0;
}

// Witness orbit of a locus root: forward from a minimum source, backward
// from the maximum target of a saddle source (its stable set is the point).
std::string dump_witness_orbit(const Scenario& sc, const ParamHomotopy& h, double s_root,
                               const std::string& source_id, const std::string& target_id,
                               const std::string& dir, const std::string& name) {
    ParamHomotopy slice = h.slice_leading(s_root);
    FlowSpec spec = FlowSpec::slice(slice, {});
    const CriticalPoint& src = h.alpha->cp(source_id);
    const Trajectory tr = src.index == 0
                              ? integrate(spec, src.at, Direction::Forward, sc.tol)
                              : integrate(spec, h.beta->cp(target_id).at, Direction::Backward, sc.tol);
    std::filesystem::create_directories(dir);
    const std::string path = dir + "/" + name + ".csv";
    write_trajectory_csv(*sc.surface, tr, path);
    return path;
}

nlohmann::ordered_json loci_json(const Scenario& sc, const ParamHomotopy& h,
                                 std::vector<NonGenericLocus> loci, const std::string& dump_dir) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    int k = 0;
    for (NonGenericLocus& locus : loci) {
        nlohmann::ordered_json j;
        j["pair"] = {locus.source_id, locus.target_id};
        nlohmann::ordered_json roots = nlohmann::ordered_json::array();
        for (auto& r : locus.roots) {
            if (!dump_dir.empty())
                r.witness_file = dump_witness_orbit(sc, h, r.s, locus.source_id, locus.target_id,
                                                    dump_dir, "witness_" + std::to_string(k));
            nlohmann::ordered_json jr;
            jr["s"] = r.s;
            jr["parity"] = r.parity;
            jr["witness_file"] = r.witness_file;
            roots.push_back(jr);
            ++k;
        }
        j["roots"] = roots;
        out.push_back(j);
    }
    return out;
}

int cmd_msw_homotopy(const CommonArgs& a) {
    const Scenario sc = load(a);
    if (!sc.family || sc.family->ell != 1) {
        std::cerr << "msw homotopy: scenario must declare an ell=1 homotopy family\n";
        return 2;
    }
    auto alpha = sc.make_alpha();
    auto beta = sc.make_beta();
    const ParamHomotopy h = sc.make_family(alpha, beta);
    const ChainHomotopyResult r = chain_homotopy(h, sc.tol);
    if (!a.out_dir.empty()) {
        write_text_file(a.out_dir + "/facet0.json", graded_map_json(r.U0));
        write_text_file(a.out_dir + "/facet1.json", graded_map_json(r.U1));
        write_text_file(a.out_dir + "/homotopy.json", graded_map_json(r.E));
        write_text_file(a.out_dir + "/loci.json",
                        loci_json(sc, h, r.loci, a.dump_trajectories).dump(2));
    }
    std::cout << "chain homotopy verified: U1 + U0 = d'E + Ed\n";
    return 0;
}

int cmd_moduli_scan(const CommonArgs& a, const std::string& pair_arg) {
    const Scenario sc = load(a);
    if (!sc.family || sc.family->ell != 1) {
        std::cerr << "moduli scan: scenario must declare an ell=1 homotopy family\n";
        return 2;
    }
    const auto comma = pair_arg.find(',');
    if (comma == std::string::npos) {
        std::cerr << "moduli scan: --pair expects 'p,c''\n";
        return 2;
    }
    auto alpha = sc.make_alpha();
    auto beta = sc.make_beta();
    const ParamHomotopy h = sc.make_family(alpha, beta);
    const NonGenericLocus locus =
        scan_nongeneric(h, pair_arg.substr(0, comma), pair_arg.substr(comma + 1), sc.tol);
    const std::string js = loci_json(sc, h, {locus}, a.dump_trajectories).at(0).dump(2);
    if (!a.out_dir.empty())
        write_text_file(a.out_dir + "/locus.json", js);
    else
        std::cout << js << "\n";
    std::cout << "scan found " << locus.roots.size() << " root(s), parity " << locus.parity() << "\n";
    return 0;
}

int cmd_moduli_strata(const CommonArgs& a, const std::string& pair_arg) {
    const Scenario sc = load(a);
    if (!sc.family || sc.family->ell != 1) {
        std::cerr << "moduli strata: scenario must declare an ell=1 homotopy family\n";
        return 2;
    }
    const auto comma = pair_arg.find(',');
    if (comma == std::string::npos) {
        std::cerr << "moduli strata: --pair expects 'p,q'\n";
        return 2;
    }
    auto alpha = sc.make_alpha();
    auto beta = sc.make_beta();
    const ParamHomotopy h = sc.make_family(alpha, beta);
    const BoundaryStrata bs =
        boundary_strata(h, pair_arg.substr(0, comma), pair_arg.substr(comma + 1), sc.tol);

    nlohmann::ordered_json j;
    j["pair"] = {bs.p_id, bs.q_id};
    j["facet0"] = bs.facet0_count;
    j["facet1"] = bs.facet1_count;
    nlohmann::ordered_json t3 = nlohmann::ordered_json::array();
    for (const auto& b : bs.type_iii) t3.push_back({{"through", b.through}, {"s", b.s}, {"tail", b.tail_count}});
    nlohmann::ordered_json t4 = nlohmann::ordered_json::array();
    for (const auto& b : bs.type_iv) t4.push_back({{"through", b.through}, {"s", b.s}, {"head", b.tail_count}});
    j["type_iii"] = t3;
    j["type_iv"] = t4;
    j["total"] = bs.total_count;
    j["parity"] = bs.total_parity;
    const std::string js = j.dump(2);
    if (!a.out_dir.empty())
        write_text_file(a.out_dir + "/strata.json", js);
    else
        std::cout << js << "\n";
    std::cout << "boundary points: " << bs.total_count << ", parity " << bs.total_parity << "\n";
    return bs.total_parity == 0 ? 0 : 1;
}

int cmd_category_check(const CommonArgs& a, const std::string& side, int samples) {
    AxiomReport rep;
    if (side == "B") {
        rep = check_axioms_B(a.seed, samples);
    } else if (side == "A") {
        if (a.scenario_path.empty()) {
            std::cerr << "category check --side A needs --scenario for the end pairs\n";
            return 2;
        }
        const Scenario sc = load(a);
        auto alpha = sc.make_alpha();
        auto beta = sc.make_beta();
        const double cutoff = sc.family ? sc.family->cutoff : 1.0;
        rep = check_axioms_A(a.seed, samples, alpha, beta, cutoff, sc.tol);
    } else {
        std::cerr << "category check: --side must be A or B\n";
        return 2;
    }

    nlohmann::ordered_json j;
    j["side"] = side;
    j["seed"] = a.seed;
    j["samples"] = rep.samples;
    const char* names[6] = {"a_sources_targets", "b_identities",     "c_associativity",
                            "d_identity_law",    "e_binary_interchange", "f_nullary_interchange"};
    nlohmann::ordered_json axioms;
    for (int k = 0; k < 6; ++k) {
        nlohmann::ordered_json ja;
        ja["pass"] = rep.pass[static_cast<std::size_t>(k)];
        ja["fail"] = rep.fail[static_cast<std::size_t>(k)];
        axioms[names[k]] = ja;
    }
    j["axioms"] = axioms;
    j["all_pass"] = rep.all_pass();
    const std::string js = j.dump(2);
    if (!a.out_dir.empty())
        write_text_file(a.out_dir + "/category_check_" + side + ".json", js);
    std::cout << js << "\n";
    return rep.all_pass() ? 0 : 1;
}

int cmd_verify_all(const CommonArgs& a) {
    const Scenario sc = Scenario::load_file(a.scenario_path); // tol scaling via options below
    VerifyOptions opt;
    opt.out_dir = a.out_dir;
    opt.dump_trajectories_dir = a.dump_trajectories;
    opt.seed = a.seed;
    opt.tol_scale = a.tol_scale;
    const VerifySummary sum = verify_all(sc, opt);
    std::cout << sum.to_text();
    if (!sum.all_pass()) {
        for (const auto& l : sum.lines)
            if (!l.pass) {
                std::cerr << "first failing check: " << l.check << "\n";
                break;
            }
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    if (const char* env = std::getenv("MORSE_TOWER_THREADS")) g_thread_cap = std::atoi(env);
    (void)g_thread_cap;

    CLI::App app{"morse-tower: gradient-flow chain complexes, continuation maps and their tower of homotopies"};
    app.require_subcommand(1);

    CommonArgs margs, cargs, hargs, sargs, stargs, catargs, vargs;
    std::string which = "alpha", scan_pair, strata_pair, side = "B";
    int samples = 50;

    auto* msw = app.add_subcommand("msw", "complex and map construction");
    msw->require_subcommand(1);
    auto* mb = msw->add_subcommand("build", "build the MSW complex of one end pair");
    add_common(mb, margs);
    mb->add_option("--which", which, "alpha | beta")->check(CLI::IsMember({"alpha", "beta"}));
    auto* mc = msw->add_subcommand("continue", "build and verify the continuation map U");
    add_common(mc, cargs);
    auto* mh = msw->add_subcommand("homotopy", "build U0, U1 and the chain homotopy E");
    add_common(mh, hargs);

    auto* moduli = app.add_subcommand("moduli", "parameter sweeps and boundary strata");
    moduli->require_subcommand(1);
    auto* ms = moduli->add_subcommand("scan", "scan the non-generic locus of a pair");
    add_common(ms, sargs);
    ms->add_option("--pair", scan_pair, "source,target critical point ids")->required();
    auto* mst = moduli->add_subcommand("strata", "stratified boundary report of a pair");
    add_common(mst, stargs);
    mst->add_option("--pair", strata_pair, "p,q critical point ids")->required();

    auto* cat = app.add_subcommand("category", "axiom suites");
    cat->require_subcommand(1);
    auto* cc = cat->add_subcommand("check", "run the axiom checks for one side");
    add_common(cc, catargs, false);
    cc->add_option("--side", side, "A | B")->required();
    cc->add_option("--samples", samples, "number of seeded configurations");

    auto* verify = app.add_subcommand("verify", "verification pipelines");
    verify->require_subcommand(1);
    auto* va = verify->add_subcommand("all", "run every check the scenario supports");
    add_common(va, vargs);

    CLI11_PARSE(app, argc, argv);

    try {
        if (mb->parsed()) return cmd_msw_build(margs, which);
        if (mc->parsed()) return cmd_msw_continue(cargs);
        if (mh->parsed()) return cmd_msw_homotopy(hargs);
        if (ms->parsed()) return cmd_moduli_scan(sargs, scan_pair);
        if (mst->parsed()) return cmd_moduli_strata(stargs, strata_pair);
        if (cc->parsed()) return cmd_category_check(catargs, side, samples);
        if (va->parsed()) return cmd_verify_all(vargs);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
