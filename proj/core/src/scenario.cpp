#include "morsetower/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace morse {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw std::invalid_argument("scenario: unknown key '" + it.key() + "' in " + where);
}

std::shared_ptr<Surface> parse_surface(const json& j) {
    reject_unknown(j, {"type", "radius", "major", "minor", "halfwidth"}, "surface");
    const std::string type = j.at("type").get<std::string>();
    if (type == "sphere")
        return std::make_shared<Surface>(Surface::sphere(j.value("radius", 1.0)));
    if (type == "torus")
        return std::make_shared<Surface>(Surface::torus(j.value("major", 2.0), j.value("minor", 1.0)));
    if (type == "plane")
        return std::make_shared<Surface>(Surface::plane(j.value("halfwidth", 10.0)));
    throw std::invalid_argument("scenario: unknown surface type '" + type + "'");
}

void parse_metric(const json& j, Surface& s) {
    if (j.is_string()) {
        if (j.get<std::string>() != "induced")
            throw std::invalid_argument("scenario: metric must be \"induced\" or an object");
        return;
    }
    reject_unknown(j, {"scale", "matrix"}, "metric");
    if (j.contains("scale")) {
        s.set_metric_scale(j.at("scale").get<double>());
        return;
    }
    const auto entries = j.at("matrix").get<std::vector<std::string>>();
    if (entries.size() != 3)
        throw std::invalid_argument("scenario: metric matrix needs [g11, g12, g22]");
    s.set_metric_matrix(Expression::parse(entries[0]), Expression::parse(entries[1]),
                        Expression::parse(entries[2]));
}

void parse_tolerances(const json& j, Tolerances& t) {
    reject_unknown(j,
                   {"grad_tol", "nondegen_tol", "dedup_tol", "settle_tol", "sep_eps", "cross_tol",
                    "locus_sep", "rk_rel", "rk_abs", "t_max", "spot_tol", "bisect_tol", "scan_grid"},
                   "tolerances");
    t.grad_tol = j.value("grad_tol", t.grad_tol);
    t.nondegen_tol = j.value("nondegen_tol", t.nondegen_tol);
    t.dedup_tol = j.value("dedup_tol", t.dedup_tol);
    t.settle_tol = j.value("settle_tol", t.settle_tol);
    t.sep_eps = j.value("sep_eps", t.sep_eps);
    t.cross_tol = j.value("cross_tol", t.cross_tol);
    t.locus_sep = j.value("locus_sep", t.locus_sep);
    t.rk_rel = j.value("rk_rel", t.rk_rel);
    t.rk_abs = j.value("rk_abs", t.rk_abs);
    t.t_max = j.value("t_max", t.t_max);
    t.spot_tol = j.value("spot_tol", t.spot_tol);
    t.bisect_tol = j.value("bisect_tol", t.bisect_tol);
    t.scan_grid = j.value("scan_grid", t.scan_grid);
}

} // namespace

Scenario Scenario::parse_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("scenario: JSON parse error: ") + e.what());
    }
    reject_unknown(j, {"name", "surface", "metric", "f_alpha", "f_beta", "seeds_per_chart",
                       "homotopy", "tolerances"},
                   "scenario");

    Scenario sc;
    sc.name = j.value("name", "unnamed");
    sc.surface = parse_surface(j.at("surface"));
    if (j.contains("metric")) parse_metric(j.at("metric"), *sc.surface);
    sc.f_alpha_text = j.at("f_alpha").get<std::string>();
    Expression::parse(sc.f_alpha_text); // validate before numeric work
    if (j.contains("f_beta")) {
        sc.f_beta_text = j.at("f_beta").get<std::string>();
        Expression::parse(sc.f_beta_text);
        sc.has_beta = true;
    } else {
        sc.f_beta_text = sc.f_alpha_text;
    }
    sc.seeds_per_chart = j.value("seeds_per_chart", 9);
    if (j.contains("tolerances")) parse_tolerances(j.at("tolerances"), sc.tol);

    if (j.contains("homotopy")) {
        const json& h = j.at("homotopy");
        reject_unknown(h, {"ell", "cutoff", "kind", "expr", "constant_in_s", "designed_pair"},
                       "homotopy");
        Family fam;
        fam.ell = h.at("ell").get<int>();
        if (fam.ell < 0 || fam.ell > 3)
            throw std::invalid_argument("scenario: homotopy ell out of range");
        fam.cutoff = h.value("cutoff", 1.0);
        fam.kind = h.value("kind", "expr");
        if (fam.kind == "expr") {
            fam.expr_text = h.at("expr").get<std::string>();
            Expression::parse(fam.expr_text);
        } else if (fam.kind != "constant") {
            throw std::invalid_argument("scenario: homotopy kind must be 'expr' or 'constant'");
        }
        fam.constant_in_s = h.value("constant_in_s", false);
        if (h.contains("designed_pair")) {
            const auto pair = h.at("designed_pair").get<std::vector<std::string>>();
            if (pair.size() != 2)
                throw std::invalid_argument("scenario: designed_pair needs two critical point ids");
            fam.designed_source = pair[0];
            fam.designed_target = pair[1];
        }
        sc.family = fam;
    }
    sc.surface->validate();
    return sc;
}

Scenario Scenario::load_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("scenario: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_text(ss.str());
}

std::shared_ptr<const MorseSmalePair> Scenario::make_alpha() const {
    ScalarField f = ScalarField::parse(f_alpha_text);
    f.check_derivatives(*surface);
    return std::make_shared<const MorseSmalePair>(
        MorseSmalePair::build(surface, std::move(f), seeds_per_chart, tol));
}

std::shared_ptr<const MorseSmalePair> Scenario::make_beta() const {
    if (!has_beta) return make_alpha();
    ScalarField f = ScalarField::parse(f_beta_text);
    f.check_derivatives(*surface);
    return std::make_shared<const MorseSmalePair>(
        MorseSmalePair::build(surface, std::move(f), seeds_per_chart, tol));
}

ParamHomotopy Scenario::make_family(std::shared_ptr<const MorseSmalePair> alpha,
                                    std::shared_ptr<const MorseSmalePair> beta) const {
    if (!family) throw std::invalid_argument("scenario: no homotopy declared");
    ParamHomotopy h;
    if (family->kind == "constant") {
        if (has_beta && f_beta_text != f_alpha_text)
            throw std::invalid_argument("scenario: constant homotopy needs f_alpha == f_beta");
        h = constant_homotopy(alpha, family->cutoff);
        for (int k = 0; k < family->ell; ++k) {
            ParamHomotopy lift = h;
            lift.ell = h.ell + 1;
            const HomotopyEvaluator inner = h.H;
            const std::size_t n = static_cast<std::size_t>(h.ell);
            lift.H = [inner, n](std::span<const double> s, double t, const EvalEnv& env) {
                return inner(s.first(n), t, env);
            };
            h = lift;
        }
    } else {
        h = expression_homotopy(std::move(alpha), std::move(beta), family->ell, family->cutoff,
                                Expression::parse(family->expr_text));
        h.constant_in_s = family->ell == 0 ? true : family->constant_in_s;
    }
    h.spot_check(tol);
    return h;
}

} // namespace morse
