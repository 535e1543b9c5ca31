#pragma once

#include <optional>
#include <string>
#include <vector>

#include "contactfem/energy.hpp"

namespace contactfem {

struct SolveOptions {
    double grad_tol = 1e-9;  // relative to 1 + ||f||
    int max_iters = 200000;
    double backtrack = 0.5;
    double sufficient_decrease = 1e-4;
    double energy_floor = -1e30;
    std::optional<Vec> warm_start;
    bool record_trace = false;

    void validate() const;
    /// Absolute projected-gradient tolerance for a given system.
    double tolerance(const DiscreteSystem& system) const;
};

struct SolveReport {
    Vec solution;
    int iterations = 0;
    double energy = 0.0;
    double projected_gradient_norm = 0.0;
    bool converged = false;
    std::string message;
    std::vector<double> increments;  // accepted energy changes, when traced
};

/// Rigid foundation: minimizes the constrained energy over u_nu <= 0.
/// Iterates never leave the feasible set.
SolveReport solve_constrained(const ConstrainedProblem& prob, const SolveOptions& opts = {});

/// Deformable foundation: unconstrained minimization of the penalty energy.
SolveReport solve_penalty(const PenaltyProblem& prob, const SolveOptions& opts = {});

struct OracleResult {
    Vec solution;
    Vec multipliers;  // per contact node, reaction on the u_y >= 0 bound
    std::vector<bool> active;
    std::size_t sets_tried = 0;
};

/// Exact frictionless rigid-contact solution by enumeration of all active
/// sets; accepts at most 12 contact nodes and requires F_b = 0.
OracleResult active_set_oracle(const DiscreteSystem& system);

/// Reaction force Ku - f at the contact normal dofs, expressed along the
/// outward normal (nonpositive for compressive contact).
std::vector<double> normal_reactions(const DiscreteSystem& system, const Vec& u);

}  // namespace contactfem
