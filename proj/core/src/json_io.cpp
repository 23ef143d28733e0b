#include "sosb/json_io.hpp"

namespace sosb {

Json to_json(const Polynomial& p) {
    Json terms = Json::array();
    for (const Term& t : p.terms()) {
        Json jt;
        jt["exp"] = t.mono.exp;
        jt["re"] = t.coeff.real();
        jt["im"] = t.coeff.imag();
        terms.push_back(std::move(jt));
    }
    return Json{{"nvars", p.nvars()}, {"terms", std::move(terms)}};
}

Polynomial polynomial_from_json(const Json& j) {
    const int nvars = j.at("nvars").get<int>();
    std::vector<Term> terms;
    for (const Json& jt : j.at("terms")) {
        Term t;
        t.mono.exp = jt.at("exp").get<std::vector<int>>();
        t.coeff = Cplx(jt.at("re").get<double>(), jt.value("im", 0.0));
        terms.push_back(std::move(t));
    }
    return Polynomial(nvars, std::move(terms));
}

Json to_json(const PolySystem& sys) {
    Json eqs = Json::array();
    for (const Polynomial& p : sys.equations) eqs.push_back(to_json(p));
    return Json{{"nvars", sys.nvars}, {"equations", std::move(eqs)}};
}

PolySystem system_from_json(const Json& j) {
    const int nvars = j.at("nvars").get<int>();
    std::vector<Polynomial> eqs;
    for (const Json& je : j.at("equations")) eqs.push_back(polynomial_from_json(je));
    return PolySystem(nvars, std::move(eqs));
}

Json to_json(const Point& p) {
    Json out = Json::array();
    for (const Cplx& c : p) out.push_back(Json{{"re", c.real()}, {"im", c.imag()}});
    return out;
}

Point point_from_json(const Json& j) {
    Point p;
    for (const Json& jc : j) p.push_back(Cplx(jc.at("re").get<double>(), jc.value("im", 0.0)));
    return p;
}

Json to_json(const TrackerConfig& cfg) {
    return Json{{"step_init", cfg.step_init},
                {"step_min", cfg.step_min},
                {"step_max", cfg.step_max},
                {"newton_tol", cfg.newton_tol},
                {"newton_max_iters", cfg.newton_max_iters},
                {"max_steps", cfg.max_steps},
                {"endgame_radius", cfg.endgame_radius},
                {"endgame_ratio", cfg.endgame_ratio},
                {"endgame_samples", cfg.endgame_samples},
                {"corrector_iters", cfg.corrector_iters},
                {"growth_run", cfg.growth_run},
                {"divergence_threshold", cfg.divergence_threshold},
                {"security_norm", cfg.security_norm},
                {"escape_growth", cfg.escape_growth},
                {"max_winding", cfg.max_winding},
                {"endgame_max_radii", cfg.endgame_max_radii}};
}

TrackerConfig tracker_config_from_json(const Json& j) {
    TrackerConfig cfg;
    cfg.step_init = j.value("step_init", cfg.step_init);
    cfg.step_min = j.value("step_min", cfg.step_min);
    cfg.step_max = j.value("step_max", cfg.step_max);
    cfg.newton_tol = j.value("newton_tol", cfg.newton_tol);
    cfg.newton_max_iters = j.value("newton_max_iters", cfg.newton_max_iters);
    cfg.max_steps = j.value("max_steps", cfg.max_steps);
    cfg.endgame_radius = j.value("endgame_radius", cfg.endgame_radius);
    cfg.endgame_ratio = j.value("endgame_ratio", cfg.endgame_ratio);
    cfg.endgame_samples = j.value("endgame_samples", cfg.endgame_samples);
    cfg.corrector_iters = j.value("corrector_iters", cfg.corrector_iters);
    cfg.growth_run = j.value("growth_run", cfg.growth_run);
    cfg.divergence_threshold = j.value("divergence_threshold", cfg.divergence_threshold);
    cfg.security_norm = j.value("security_norm", cfg.security_norm);
    cfg.escape_growth = j.value("escape_growth", cfg.escape_growth);
    cfg.max_winding = j.value("max_winding", cfg.max_winding);
    cfg.endgame_max_radii = j.value("endgame_max_radii", cfg.endgame_max_radii);
    return cfg;
}

Json to_json(const PathCounts& counts) {
    return Json{{"success", counts.success},
                {"divergent", counts.divergent},
                {"failed", counts.failed}};
}

Json to_json(const SolutionSet& sol) {
    Json points = Json::array();
    for (const Point& p : sol.points) points.push_back(to_json(p));
    return Json{{"points", std::move(points)},
                {"residuals", sol.residuals},
                {"multiplicity_flags", sol.multiplicity_flags},
                {"counts", to_json(sol.counts)}};
}

Json to_json(const WitnessSet& ws) {
    Json forms = Json::array();
    for (const Polynomial& f : ws.slice.linear_forms) forms.push_back(to_json(f));
    Json points = Json::array();
    for (const Point& p : ws.points) points.push_back(to_json(p));
    return Json{{"system", to_json(ws.system)},
                {"slice", Json{{"seed", ws.slice.seed.value},
                               {"support", ws.slice.support},
                               {"forms", std::move(forms)}}},
                {"points", std::move(points)},
                {"dim", ws.dim},
                {"degree", ws.degree}};
}

WitnessSet witness_set_from_json(const Json& j) {
    WitnessSet ws;
    ws.system = system_from_json(j.at("system"));
    const Json& js = j.at("slice");
    ws.slice.seed = Seed{js.at("seed").get<std::uint64_t>()};
    ws.slice.support = js.at("support").get<std::vector<int>>();
    for (const Json& jf : js.at("forms")) ws.slice.linear_forms.push_back(polynomial_from_json(jf));
    for (const Json& jp : j.at("points")) ws.points.push_back(point_from_json(jp));
    ws.dim = j.at("dim").get<int>();
    ws.degree = j.at("degree").get<std::uint64_t>();
    return ws;
}

Json to_json(const Decomposition& dec) {
    Json comps = Json::array();
    for (const WitnessSet& ws : dec.components) comps.push_back(to_json(ws));
    Json issues = Json::array();
    for (const DecompositionIssue& is : dec.issues) {
        Json points = Json::array();
        for (const Point& p : is.group) points.push_back(to_json(p));
        issues.push_back(Json{{"dim", is.dim}, {"what", is.what}, {"points", std::move(points)}});
    }
    return Json{{"components", std::move(comps)},
                {"issues", std::move(issues)},
                {"counts", to_json(dec.counts)}};
}

Json bigint_json(const BigInt& v) {
    static const BigInt max_exact = BigInt(1) << 53;
    if (v >= -max_exact && v <= max_exact) return Json(v.convert_to<long long>());
    return Json(v.str());
}

Json to_json(const RankLocusReport& rep) {
    return Json{{"case", rep.case_name},
                {"mode", rep.mode},
                {"dim", rep.dim},
                {"codim", rep.codim},
                {"degree", bigint_json(rep.degree)},
                {"assumptions", rep.assumptions},
                {"path_counts", to_json(rep.path_counts)},
                {"paths_total", rep.paths_total},
                {"paths_tracked", rep.paths_tracked},
                {"complete", rep.complete}};
}

Json to_json(const BoundarySolveReport& rep) {
    Json svals = Json::array();
    for (const Cplx& s : rep.distinct_s)
        svals.push_back(Json{{"re", s.real()}, {"im", s.imag()}});
    return Json{{"distinct_s", std::move(svals)},
                {"distinct_s_count", rep.distinct_s.size()},
                {"counts", to_json(rep.solutions.counts)},
                {"orbits_total", rep.orbits_total},
                {"orbits_tracked", rep.orbits_tracked},
                {"sampled", rep.sampled},
                {"solution_count", rep.solutions.points.size()}};
}

Json to_json(const DetRep& rep) {
    Json entries;
    const char* names[4] = {"1", "2", "3", "4"};
    for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) {
            Json coeffs = Json::array();
            for (int v = 0; v < 4; ++v) {
                std::vector<int> e(4, 0);
                e[v] = 1;
                const Cplx c = rep.M[i][j].coefficient(Monomial(std::move(e)));
                coeffs.push_back(Json{{"re", c.real()}, {"im", c.imag()}});
            }
            entries[std::string("m") + names[i] + names[j]] = std::move(coeffs);
        }
    }
    return Json{{"matrix", std::move(entries)},
                {"scale", Json{{"re", rep.scale.real()}, {"im", rep.scale.imag()}}},
                {"residual", rep.residual}};
}

}  // namespace sosb
