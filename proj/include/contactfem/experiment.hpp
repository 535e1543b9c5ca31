#pragma once

// Experiment harness: configuration, the rigid-foundation reference solve,
// the lambda sweep over deformable foundations, criterion evaluation and
// text/CSV I/O.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "contactfem/solver.hpp"

namespace contactfem {

/// 10^0, 10^-0.5, ..., 10^-8
std::vector<double> default_lambda_grid();

struct ExperimentConfig {
    double width = 2.0;
    double height = 1.0;
    double h = 1.0 / 32.0;
    Material material{12000.0, 0.42};
    Vector2 body_force{-200.0, -800.0};
    Vector2 traction{0.0, 0.0};
    double friction_bound = 10.0;
    ContactLaw law = SofteningCompliance{0.1, 0.1};
    std::vector<double> lambdas = default_lambda_grid();
    bool continuation = true;
    double rho = 1e-8;
    SolveOptions solver;
    int random_probes = 8;
    std::uint64_t seed = 0;
    std::string output_dir = ".";

    void validate() const;
};

/// Flat `key = value` text with `#` comments. Unknown keys are rejected.
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::string& path);

struct ProblemSetup {
    Mesh mesh;
    std::shared_ptr<const DiscreteSystem> system;
};

ProblemSetup build_problem(const ExperimentConfig& config);

struct ComplementarityReport {
    double max_normal_displacement = 0.0;  // max u_nu, must be <= 1e-12
    double max_normal_reaction = 0.0;      // max R_nu, nonpositive up to 1e-6 ||f||
    double max_abs_product = 0.0;          // max |R_nu u_nu|, <= 1e-8 ||f||
    double load_norm = 0.0;
    std::size_t active_nodes = 0;
    bool pass = false;
};

ComplementarityReport check_complementarity(const DiscreteSystem& system, const Vec& u);

struct SignoriniResult {
    ProblemSetup setup;
    SolveReport report;
    ComplementarityReport complementarity;
};

SignoriniResult run_signorini(const ExperimentConfig& config);

/// Single penalty solve at `lambda`, cold start.
SolveReport run_penalty(const ExperimentConfig& config, const ProblemSetup& setup, double lambda);

struct SweepRow {
    double lambda = 0.0;
    bool converged = false;
    int iterations = 0;
    double energy = 0.0;
    double error_v_abs = 0.0;
    double error_v_rel = 0.0;
    double max_penetration = 0.0;
    double eps_residual = 0.0;
    double dist_to_k = 0.0;

    bool operator==(const SweepRow&) const = default;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    int reference_iterations = 0;
    double reference_energy = 0.0;
    bool reference_converged = false;
    double reference_v_norm = 0.0;
    double reference_eps_residual = 0.0;
    double reference_dist_to_k = 0.0;
    double max_solution_v_norm = 0.0;  // max over rows of ||u_n||_V
    double solver_tolerance = 0.0;
    TraceConstantEstimate trace;
    SmallnessReport smallness;
    ComplementarityReport complementarity;
};

SweepResult run_sweep(const ExperimentConfig& config);

/// First lambda whose relative error drops below half of the first row's.
std::optional<double> knee_lambda(const std::vector<SweepRow>& rows);

inline constexpr const char* kSweepCsvHeader =
    "lambda,converged,iterations,energy,error_V_abs,error_V_rel,max_penetration,eps_residual,dist_to_K";

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_sweep_csv(std::istream& is);
void write_sweep_summary(std::ostream& os, const ExperimentConfig& config, const SweepResult& result);

/// `displacement v1`, `nodes N`, then one `ux uy` line per node.
void write_displacement(std::ostream& os, const Vec& full_displacement);
Vec read_displacement(std::istream& is);

struct CriterionReport {
    double eps_residual = 0.0;
    double dist_to_k = 0.0;
    bool dist_converged = false;
    double solver_tolerance = 0.0;
};

/// Residuals of a per-node displacement against the configured problem.
/// Probes: 0, the projection, the reference solution and `probe_count`
/// random feasible points.
CriterionReport check_criterion(const ExperimentConfig& config, const Vec& full_displacement, int probe_count);

}  // namespace contactfem
