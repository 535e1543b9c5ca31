#pragma once

// Projected Newton-type descent for C^1 objectives subject to lower bounds
// x_i >= 0 on a subset of coordinates (Bertsekas-style two-metric projection).
// Steps are accepted by an Armijo test on accurately computed energy
// increments, so every accepted step is a decrease of the objective.

#include <string>
#include <vector>

#include "contactfem/fem.hpp"

namespace contactfem {

class Objective {
public:
    virtual ~Objective() = default;

    virtual Index size() const = 0;
    virtual double value(const Vec& x) const = 0;
    /// value(x + step) - value(x), computed without cancellation.
    virtual double increment(const Vec& x, const Vec& step) const = 0;
    virtual Vec gradient(const Vec& x) const = 0;
    /// Symmetric curvature model at x. Must keep the same sparsity pattern
    /// across calls. With `clamp` set, the model is positive definite.
    virtual SpMat curvature(const Vec& x, bool clamp) const = 0;
};

struct MinimizeOptions {
    double grad_tol = 1e-9;  // absolute, on the projected gradient 2-norm
    int max_iters = 200000;
    double backtrack = 0.5;
    double sufficient_decrease = 1e-4;
    double min_step = 1e-20;
    double active_eps = 1e-6;
    double energy_floor = -1e30;
    bool record_trace = false;
};

struct MinimizeResult {
    Vec x;
    int iterations = 0;
    double value = 0.0;
    double projected_gradient_norm = 0.0;
    bool converged = false;
    std::string message;
    std::vector<double> increments;  // accepted value decreases, if recorded
};

/// Minimizes `f` from `x0` subject to x_i >= 0 for i in `bounded`.
/// The initial point is projected onto the feasible box first.
MinimizeResult minimize(const Objective& f, const Vec& x0, const std::vector<Index>& bounded,
                        const MinimizeOptions& opts);

/// x - P(x - g) for the box given by `bounded`.
Vec projected_gradient(const Vec& x, const Vec& g, const std::vector<Index>& bounded);

}  // namespace contactfem
