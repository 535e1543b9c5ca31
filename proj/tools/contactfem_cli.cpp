// Command-line driver for the contact experiments.
//
//   contactfem mesh       [--config PATH] [--out DIR]
//   contactfem signorini  [--config PATH] [--out DIR]
//   contactfem penalty    --lambda X [--config PATH] [--out DIR]
//   contactfem sweep      [--config PATH] [--out DIR] [--seed N]
//   contactfem criterion  --solution FILE [--probes N] [--config PATH] [--seed N]

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "contactfem/experiment.hpp"

namespace fs = std::filesystem;
using namespace contactfem;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
};

ExperimentConfig resolve_config(const CommonArgs& args) {
    ExperimentConfig cfg = args.config_path.empty() ? ExperimentConfig{} : load_config(args.config_path);
    if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
    if (args.seed) cfg.seed = *args.seed;
    cfg.validate();
    return cfg;
}

fs::path output_path(const ExperimentConfig& cfg, const std::string& name) {
    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    return dir / name;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
    return os;
}

void print_solve(const char* label, const SolveReport& r) {
    std::printf("%s: %s after %d iterations, energy %.10g, projected gradient %.3e\n", label, r.message.c_str(),
                r.iterations, r.energy, r.projected_gradient_norm);
}

int cmd_mesh(const ExperimentConfig& cfg) {
    const Mesh mesh = tag_boundary(generate_rect_mesh(cfg.width, cfg.height, cfg.h));
    const fs::path path = output_path(cfg, "mesh.txt");
    auto os = open_output(path);
    write_mesh(os, mesh);
    std::printf("mesh: %zu nodes, %zu triangles, %zu contact edges -> %s\n", mesh.nodes.size(), mesh.triangles.size(),
                mesh.count_edges(BoundaryTag::Contact), path.string().c_str());
    return 0;
}

int cmd_signorini(const ExperimentConfig& cfg) {
    const SignoriniResult res = run_signorini(cfg);
    const DiscreteSystem& sys = *res.setup.system;
    print_solve("signorini", res.report);

    const fs::path disp = output_path(cfg, "signorini_displacement.txt");
    {
        auto os = open_output(disp);
        write_displacement(os, sys.expand(res.report.solution));
    }
    const fs::path rep = output_path(cfg, "signorini_report.txt");
    {
        auto os = open_output(rep);
        const auto& c = res.complementarity;
        os << "converged: " << (res.report.converged ? "true" : "false") << '\n';
        os << "iterations: " << res.report.iterations << '\n';
        os << "energy: " << res.report.energy << '\n';
        os << "max_normal_displacement: " << c.max_normal_displacement << '\n';
        os << "max_normal_reaction: " << c.max_normal_reaction << '\n';
        os << "max_abs_product: " << c.max_abs_product << '\n';
        os << "load_norm: " << c.load_norm << '\n';
        os << "active_nodes: " << c.active_nodes << '\n';
        os << "complementarity: " << (c.pass ? "pass" : "fail") << '\n';
    }
    std::printf("complementarity: %s (max u_nu %.3e, max |R u_nu| %.3e)\n",
                res.complementarity.pass ? "pass" : "fail", res.complementarity.max_normal_displacement,
                res.complementarity.max_abs_product);
    std::printf("wrote %s and %s\n", disp.string().c_str(), rep.string().c_str());
    return res.report.converged ? 0 : 3;
}

int cmd_penalty(const ExperimentConfig& cfg, double lambda) {
    const ProblemSetup setup = build_problem(cfg);
    const SolveReport r = run_penalty(cfg, setup, lambda);
    print_solve("penalty", r);
    std::printf("max penetration: %.6e\n", max_penetration(*setup.system, r.solution));
    char name[64];
    std::snprintf(name, sizeof name, "penalty_displacement_%g.txt", lambda);
    const fs::path path = output_path(cfg, name);
    auto os = open_output(path);
    write_displacement(os, setup.system->expand(r.solution));
    std::printf("wrote %s\n", path.string().c_str());
    return r.converged ? 0 : 3;
}

int cmd_sweep(const ExperimentConfig& cfg) {
    const SweepResult res = run_sweep(cfg);
    const fs::path csv = output_path(cfg, "sweep.csv");
    {
        auto os = open_output(csv);
        write_sweep_csv(os, res.rows);
    }
    const fs::path summary = output_path(cfg, "sweep_summary.txt");
    {
        auto os = open_output(summary);
        write_sweep_summary(os, cfg, res);
    }
    std::printf("%-12s %-4s %6s %14s %14s %14s\n", "lambda", "conv", "iters", "error_V_rel", "penetration", "dist_to_K");
    for (const auto& r : res.rows) {
        std::printf("%-12.4g %-4s %6d %14.6e %14.6e %14.6e\n", r.lambda, r.converged ? "yes" : "no", r.iterations,
                    r.error_v_rel, r.max_penetration, r.dist_to_k);
    }
    std::printf("smallness: %s (d0 %.6g, lhs %.6g, m_F %.6g)\n", res.smallness.pass ? "pass" : "fail",
                res.trace.d0, res.smallness.lhs, res.smallness.monotonicity);
    std::printf("wrote %s and %s\n", csv.string().c_str(), summary.string().c_str());
    return 0;
}

int cmd_criterion(const ExperimentConfig& cfg, const std::string& solution, int probes) {
    std::ifstream in(solution);
    if (!in) throw std::runtime_error("cannot open solution file '" + solution + "'");
    const Vec u = read_displacement(in);
    const CriterionReport rep = check_criterion(cfg, u, probes);
    std::printf("eps_residual: %.17g\n", rep.eps_residual);
    std::printf("dist_to_K: %.17g\n", rep.dist_to_k);
    std::printf("solver_tolerance: %.17g\n", rep.solver_tolerance);
    if (!rep.dist_converged) std::printf("warning: distance projection did not converge\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frictional contact with normal compliance: penalty and Signorini solvers"};
    app.require_subcommand(1);

    CommonArgs common;
    auto add_common = [&](CLI::App* sub, bool with_out, bool with_seed) {
        sub->add_option("--config", common.config_path, "key = value configuration file")->check(CLI::ExistingFile);
        if (with_out) sub->add_option("--out", common.out_dir, "output directory");
        if (with_seed) sub->add_option("--seed", common.seed, "seed for residual probe sampling");
    };

    auto* mesh = app.add_subcommand("mesh", "write the tagged triangulation");
    add_common(mesh, true, false);

    auto* signorini = app.add_subcommand("signorini", "solve the rigid-foundation problem");
    add_common(signorini, true, false);

    double lambda = 0.0;
    auto* penalty = app.add_subcommand("penalty", "solve the deformable-foundation problem at one lambda");
    penalty->add_option("--lambda", lambda, "foundation compliance (hardness 1/lambda)")
        ->required()
        ->check(CLI::PositiveNumber);
    add_common(penalty, true, false);

    auto* sweep = app.add_subcommand("sweep", "run the lambda sweep against the reference solution");
    add_common(sweep, true, true);

    std::string solution;
    int probes = -1;
    auto* criterion = app.add_subcommand("criterion", "evaluate the residuals of a displacement file");
    criterion->add_option("--solution", solution, "displacement file")->required()->check(CLI::ExistingFile);
    criterion->add_option("--probes", probes, "number of random probes (default: criterion.probes)")
        ->check(CLI::NonNegativeNumber);
    add_common(criterion, false, true);

    CLI11_PARSE(app, argc, argv);

    try {
        const ExperimentConfig cfg = resolve_config(common);
        if (*mesh) return cmd_mesh(cfg);
        if (*signorini) return cmd_signorini(cfg);
        if (*penalty) return cmd_penalty(cfg, lambda);
        if (*sweep) return cmd_sweep(cfg);
        if (*criterion) return cmd_criterion(cfg, solution, probes < 0 ? cfg.random_probes : probes);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
