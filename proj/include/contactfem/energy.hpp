#pragma once

// Discrete energies of the rigid-foundation (constrained) and
// deformable-foundation (penalty) contact problems, the variational-inequality
// residual of a candidate displacement, and its V-distance to the feasible set.
//
// Displacements are reduced vectors (Dirichlet dofs eliminated). The feasible
// set K^h is {u : u_nu <= 0 at every contact node}, i.e. u_y >= 0 there.

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "contactfem/contact_law.hpp"
#include "contactfem/fem.hpp"
#include "contactfem/minimize.hpp"

namespace contactfem {

struct PenaltyProblem {
    std::shared_ptr<const DiscreteSystem> system;
    ContactLaw law = SofteningCompliance{};
    double lambda = 1.0;
    double rho = 1e-8;  // friction smoothing length

    void validate() const;
};

struct ConstrainedProblem {
    std::shared_ptr<const DiscreteSystem> system;
    double rho = 1e-8;

    void validate() const;
};

/// sqrt(t^2 + rho^2) - rho
double smoothed_abs(double t, double rho);

double energy_penalty(const PenaltyProblem& prob, const Vec& u);
Vec gradient_penalty(const PenaltyProblem& prob, const Vec& u);
double energy_constrained(const ConstrainedProblem& prob, const Vec& u);
Vec gradient_constrained(const ConstrainedProblem& prob, const Vec& u);

/// Unsmoothed friction functional, sum_i w_i F_b |u_tau,i|.
double friction_functional(const DiscreteSystem& system, const Vec& u);

/// Reduced indices of the contact normal dofs (the bounded coordinates).
std::vector<Index> normal_dofs(const DiscreteSystem& system);
/// Coordinatewise projection onto K^h.
Vec project_onto_feasible(const DiscreteSystem& system, const Vec& u);
/// max(0, max_i u_nu,i)
double max_penetration(const DiscreteSystem& system, const Vec& u);

/// max over probes v of max(0, [<f - Ku, v - u> - phi(v) + phi(u)] / (1 + ||v - u||_V)).
/// A lower bound of the supremum over all of K^h.
double vi_residual(const DiscreteSystem& system, const Vec& u, const std::vector<Vec>& probes);

/// Probe set: 0, the projection of u, `reference` if given, and `random_count`
/// seeded random feasible points.
std::vector<Vec> make_probes(const DiscreteSystem& system, const Vec& u, const std::optional<Vec>& reference,
                             int random_count, std::uint64_t seed);

struct DistanceResult {
    double distance = 0.0;
    Vec nearest;
    int iterations = 0;
    bool converged = false;
};

/// Exact V-norm distance from u to K^h (bound-constrained QP in the V metric).
DistanceResult distance_to_K(const DiscreteSystem& system, const Vec& u, double tol = 1e-10, int max_iters = 1000);

class PenaltyEnergy final : public Objective {
public:
    explicit PenaltyEnergy(PenaltyProblem prob);

    Index size() const override;
    double value(const Vec& u) const override;
    double increment(const Vec& u, const Vec& step) const override;
    Vec gradient(const Vec& u) const override;
    SpMat curvature(const Vec& u, bool clamp) const override;

private:
    PenaltyProblem prob_;
};

class ConstrainedEnergy final : public Objective {
public:
    explicit ConstrainedEnergy(ConstrainedProblem prob);

    Index size() const override;
    double value(const Vec& u) const override;
    double increment(const Vec& u, const Vec& step) const override;
    Vec gradient(const Vec& u) const override;
    SpMat curvature(const Vec& u, bool clamp) const override;

private:
    ConstrainedProblem prob_;
};

}  // namespace contactfem
