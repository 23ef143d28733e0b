#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <fstream>

#include "sosb/enumerative.hpp"
#include "sosb/json_io.hpp"

namespace sosb::cli {

namespace {

constexpr const char* kVersion = "sosb 0.1.0";

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    Json j;
    in >> j;
    return j;
}

struct GlobalOpts {
    std::uint64_t seed = 20120521;
    int threads = 1;
    double tol = 1e-10;
    std::string out_path;
    std::uint64_t paths_limit = 0;

    SolverConfig solver() const {
        SolverConfig cfg;
        cfg.seed = Seed{seed};
        cfg.threads = threads;
        cfg.tracker.newton_tol = tol;
        cfg.paths_limit = paths_limit;
        return cfg;
    }
};

Json config_snapshot(const GlobalOpts& g) {
    const SolverConfig cfg = g.solver();
    return Json{{"tracker", to_json(cfg.tracker)},
                {"cluster_tol", cfg.cluster_tol},
                {"residual_filter", cfg.residual_filter},
                {"threads", cfg.threads},
                {"paths_limit", cfg.paths_limit}};
}

Json rational_json(const Rational& r) {
    return Json{{"num", r.num}, {"den", r.den}, {"text", r.str()}};
}

Json hankel_layout_json(const HankelSpec& spec) {
    Json rows = Json::array();
    for (const Monomial& m : spec.row_index) rows.push_back(m.exp);
    Json labels = Json::array();
    for (int r = 0; r < spec.size(); ++r) {
        Json row = Json::array();
        for (int c = 0; c < spec.size(); ++c) row.push_back(hankel_entry_label(spec, r, c));
        labels.push_back(std::move(row));
    }
    return Json{{"n", spec.n},
                {"d", spec.d},
                {"size", spec.size()},
                {"coefficient_count", spec.num_coeffs()},
                {"row_index", std::move(rows)},
                {"labels", std::move(labels)}};
}

Json nodes_json(const NodeSet& ns) {
    Json nodes = Json::array();
    for (const Node& n : ns.nodes) {
        nodes.push_back(Json{{"point", to_json(n.location)},
                             {"real", n.real},
                             {"hessian_signature", n.hessian_signature}});
    }
    return nodes;
}

}  // namespace

int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"numerical algebraic geometry of the sums-of-squares boundary surfaces"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--seed", g.seed, "random seed shared by all stages");
    app.add_option("--threads", g.threads, "path-tracking worker threads");
    app.add_option("--tol", g.tol, "Newton tolerance for path tracking");
    app.add_option("--out", g.out_path, "write the result JSON to this file");
    app.add_option("--paths-limit", g.paths_limit, "track at most this many paths (sampling)");

    auto* ht = app.add_subcommand("ht", "rank-locus degree and codimension (symmetric matrices)");
    ht->fallthrough();
    int ht_size = 10, ht_rank = 7;
    ht->add_option("--size", ht_size, "matrix size")->required();
    ht->add_option("--rank", ht_rank, "rank bound")->required();

    auto* gw = app.add_subcommand("gw", "count of rational plane curves through 3d-1 points");
    gw->fallthrough();
    int gw_degree = 1;
    gw->add_option("--degree", gw_degree, "curve degree")->required();

    auto* nl = app.add_subcommand("nl", "boundary degree from the printed modular coefficients");
    nl->fallthrough();
    std::string nl_case;
    nl->add_option("--case", nl_case, "sextic or quartic")->required();

    auto* disc = app.add_subcommand("disc", "discriminant degree n(2d-1)^(n-1)");
    disc->fallthrough();
    int disc_n = 3, disc_d = 3;
    disc->add_option("--n", disc_n, "number of variables")->required();
    disc->add_option("--d", disc_d, "half degree (forms of degree 2d)")->required();

    auto* hankel = app.add_subcommand("hankel", "moment-matrix layouts and rank loci");
    hankel->fallthrough();
    std::string hankel_case = "33";
    int hankel_rank = 0;
    std::string hankel_mode = "formula";
    hankel->add_option("--case", hankel_case, "33, 42, or n,d");
    hankel->add_option("--rank", hankel_rank, "rank bound; adds a rank-locus report");
    hankel->add_option("--mode", hankel_mode, "formula or witness");

    auto* solve = app.add_subcommand("solve", "isolated solutions of a polynomial system");
    solve->fallthrough();
    std::string solve_path;
    solve->add_option("--system", solve_path, "system JSON file")->required();

    auto* witness = app.add_subcommand("witness", "numerical irreducible decomposition");
    witness->fallthrough();
    std::string witness_path;
    std::vector<int> witness_dims;
    witness->add_option("--system", witness_path, "system JSON file")->required();
    witness->add_option("--dim", witness_dims, "component dimension (repeatable)")->required();

    auto* boundary = app.add_subcommand("boundary", "sums-of-squares boundary systems");
    boundary->fallthrough();
    std::string boundary_case;
    std::uint64_t pencil_seed = 0;
    bool boundary_skip_oracle = false;
    boundary->add_option("--case", boundary_case, "sextic, quartic, or binary:k")->required();
    boundary->add_option("--pencil-seed", pencil_seed, "seed for the random rational pencil");
    boundary->add_flag("--skip-oracle", boundary_skip_oracle,
                       "skip the exact resultant oracle (binary cases)");

    auto* symmetroid =
        app.add_subcommand("symmetroid", "symmetric determinantal representation of a quartic");
    symmetroid->fallthrough();
    std::string sym_input;
    double sym_clr_b = 0.0;
    int sym_node_index = 0;
    symmetroid->add_option("--input", sym_input, "quartic surface JSON file (one polynomial)");
    symmetroid->add_option("--clr", sym_clr_b, "use the extremal quartic with this parameter b");
    symmetroid->add_option("--node-index", sym_node_index, "node to project from");

    std::string cmdline = "sosb";
    for (const std::string& a : args) cmdline += " " + a;

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    Json result;
    PathCounts counts;
    int exit_code = 0;
    try {
        if (ht->parsed()) {
            const HarrisTu r = harris_tu_degree(ht_size, ht_rank);
            result = Json{{"degree", bigint_json(r.degree)}, {"codim", r.codim}};
        } else if (gw->parsed()) {
            result = Json{{"N", bigint_json(kontsevich_manin(gw_degree))}};
        } else if (nl->parsed()) {
            NlCase c;
            if (nl_case == "sextic") c = NlCase::Sextic;
            else if (nl_case == "quartic") c = NlCase::Quartic;
            else throw std::invalid_argument("nl: case must be sextic or quartic");
            const NLData data = nl_data(c);
            const Rational delta =
                c == NlCase::Sextic ? delta_exponent(2, 1, 3) : delta_exponent(4, 1, 4);
            result = Json{{"case", nl_case},
                          {"l", data.l},
                          {"delta", rational_json(delta)},
                          {"nl_coefficient", data.coefficient_at(delta)},
                          {"divisor", data.divisor},
                          {"degree", boundary_degree_from_nl(c)}};
        } else if (disc->parsed()) {
            result = Json{{"n", disc_n},
                          {"d", disc_d},
                          {"degree", bigint_json(discriminant_degree(disc_n, disc_d))}};
        } else if (hankel->parsed()) {
            HankelSpec spec;
            if (hankel_case == "33") spec = make_hankel_spec(3, 3);
            else if (hankel_case == "42") spec = make_hankel_spec(4, 2);
            else {
                const auto comma = hankel_case.find(',');
                if (comma == std::string::npos)
                    throw std::invalid_argument("hankel: case must be 33, 42, or n,d");
                spec = make_hankel_spec(std::stoi(hankel_case.substr(0, comma)),
                                        std::stoi(hankel_case.substr(comma + 1)));
            }
            result = hankel_layout_json(spec);
            if (hankel_rank > 0) {
                const RankLocusMode mode = hankel_mode == "witness" ? RankLocusMode::Witness
                                                                    : RankLocusMode::Formula;
                if (mode == RankLocusMode::Witness && spec.size() >= 10 && g.paths_limit == 0)
                    throw std::invalid_argument(
                        "hankel witness runs at this size take hours; set --paths-limit "
                        "to sample");
                WitnessConfig wcfg;
                wcfg.solver = g.solver();
                const RankLocusReport rep = hankel_rank_locus(spec, hankel_rank, mode, wcfg);
                counts = rep.path_counts;
                result["report"] = to_json(rep);
            }
        } else if (solve->parsed()) {
            PolySystem sys = system_from_json(read_json_file(solve_path));
            SolverConfig cfg = g.solver();
            const PolySystem* filter = nullptr;
            PolySystem original = sys;
            if (sys.size() > sys.nvars) {
                Rng rng(cfg.seed);
                sys = randomize_to_square(sys, sys.nvars, Seed{rng.fork(31).raw()});
                filter = &original;
            } else if (sys.size() < sys.nvars) {
                throw std::invalid_argument("solve: system has fewer equations than variables");
            }
            Rng rng(cfg.seed);
            const StartSystem start = total_degree_start(sys, Seed{rng.fork(32).raw()});
            const SolutionSet sol = solve_system(sys, start, nullptr, cfg, filter);
            counts = sol.counts;
            result = to_json(sol);
        } else if (witness->parsed()) {
            WitnessProblem problem;
            problem.system = system_from_json(read_json_file(witness_path));
            WitnessConfig wcfg;
            wcfg.solver = g.solver();
            const Decomposition dec = numerical_decomposition(problem, witness_dims, wcfg);
            counts = dec.counts;
            result = to_json(dec);
        } else if (boundary->parsed()) {
            Rng prng(Seed{pencil_seed != 0 ? pencil_seed : g.seed});
            SolverConfig cfg = g.solver();
            if (boundary_case == "sextic") {
                const Polynomial p = random_int_poly(3, 6, -9, 9, prng);
                const Polynomial q = random_int_poly(3, 6, -9, 9, prng);
                const BoundarySystem sys = sextic_system(p, q, Seed{g.seed});
                result = Json{{"case", "sextic"},
                              {"unknowns", sys.system.nvars},
                              {"equations", sys.system.size()},
                              {"census", Json{{"quadratic", sys.census_quadratic},
                                              {"linear", sys.census_linear}}},
                              {"normalizations", sys.normalizations}};
                if (g.paths_limit > 0) {
                    const BoundarySolveReport rep = solve_boundary(sys, cfg);
                    counts = rep.solutions.counts;
                    result["sampling"] = to_json(rep);
                } else {
                    result["note"] =
                        "full tracking needs 2^25 orbit paths; set --paths-limit to sample";
                }
            } else if (boundary_case == "quartic") {
                const Polynomial p = random_int_poly(4, 4, -9, 9, prng);
                const Polynomial q = random_int_poly(4, 4, -9, 9, prng);
                const BoundarySystem sys = quartic_system(p, q, Seed{g.seed});
                result = Json{{"case", "quartic"},
                              {"unknowns", sys.system.nvars},
                              {"equations", sys.system.size()},
                              {"census", Json{{"quadratic", sys.census_quadratic},
                                              {"linear", sys.census_linear}}},
                              {"normalizations", sys.normalizations},
                              {"residual_symmetry", sys.residual_symmetry},
                              {"note", "not square after normalization; census only"}};
            } else if (boundary_case.rfind("binary:", 0) == 0) {
                const int k = std::stoi(boundary_case.substr(7));
                const Polynomial p = random_int_poly(2, 2 * k, -9, 9, prng);
                const Polynomial q = random_int_poly(2, 2 * k, -9, 9, prng);
                const BoundarySystem sys = binary_analogue_system(k, p, q);
                const BoundarySolveReport rep = solve_boundary(sys, cfg);
                counts = rep.solutions.counts;
                result = Json{{"case", boundary_case},
                              {"unknowns", sys.system.nvars},
                              {"equations", sys.system.size()},
                              {"homotopy", to_json(rep)}};
                if (!boundary_skip_oracle) {
                    const OracleResult oracle = brute_force_degree(sys);
                    result["oracle"] = Json{{"degree", oracle.degree},
                                            {"degenerate", oracle.degenerate}};
                    result["agree"] =
                        !oracle.degenerate &&
                        oracle.degree == static_cast<int>(rep.distinct_s.size());
                }
            } else {
                throw std::invalid_argument("boundary: case must be sextic, quartic, or binary:k");
            }
        } else if (symmetroid->parsed()) {
            QuarticSurface S;
            if (!sym_input.empty()) {
                S.F = polynomial_from_json(read_json_file(sym_input));
            } else if (sym_clr_b != 0.0) {
                S = clr_quartic(sym_clr_b);
            } else {
                throw std::invalid_argument("symmetroid: provide --input or --clr");
            }
            SymmetroidConfig cfg;
            cfg.solver = g.solver();
            const PipelineResult res =
                symmetric_determinantal_representation(S, cfg, sym_node_index);
            counts = res.nodes.counts;
            result = Json{{"ok", res.ok},
                          {"node_count", res.nodes.nodes.size()},
                          {"node_index", res.node_index},
                          {"nodes", nodes_json(res.nodes)}};
            if (!res.ok) {
                result["failure"] = res.failure;
                err << "symmetroid pipeline failed: " << res.failure << "\n";
                exit_code = 1;
            } else {
                result["detrep"] = to_json(res.detrep);
                result["sv_gap"] = res.sv_gap;
            }
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const Json manifest = Json{{"command", cmdline},
                               {"seed", g.seed},
                               {"config", config_snapshot(g)},
                               {"wall_time_s", wall},
                               {"path_counts", to_json(counts)},
                               {"version", kVersion}};

    if (!g.out_path.empty()) {
        std::ofstream f(g.out_path);
        if (!f) {
            err << "error: cannot write " << g.out_path << "\n";
            return 1;
        }
        f << result.dump(2) << "\n";
        std::ofstream mf(g.out_path + ".manifest.json");
        mf << manifest.dump(2) << "\n";
    } else {
        out << result.dump(2) << "\n";
        err << manifest.dump(2) << "\n";
    }
    return exit_code;
}

}  // namespace sosb::cli
