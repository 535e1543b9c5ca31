#include "contactfem/solver.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace contactfem {

void SolveOptions::validate() const {
    if (!(grad_tol > 0.0)) throw std::invalid_argument("solver: grad_tol must be positive");
    if (max_iters < 1) throw std::invalid_argument("solver: max_iters must be at least 1");
    if (!(backtrack > 0.0 && backtrack < 1.0)) throw std::invalid_argument("solver: backtrack must lie in (0,1)");
    if (!(sufficient_decrease > 0.0 && sufficient_decrease < 1.0)) {
        throw std::invalid_argument("solver: sufficient_decrease must lie in (0,1)");
    }
}

double SolveOptions::tolerance(const DiscreteSystem& system) const { return grad_tol * (1.0 + system.load.norm()); }

namespace {

SolveReport run(const Objective& f, const DiscreteSystem& sys, const std::vector<Index>& bounded,
                const SolveOptions& opts) {
    opts.validate();
    MinimizeOptions m;
    m.grad_tol = opts.tolerance(sys);
    m.max_iters = opts.max_iters;
    m.backtrack = opts.backtrack;
    m.sufficient_decrease = opts.sufficient_decrease;
    m.energy_floor = opts.energy_floor;
    m.record_trace = opts.record_trace;

    Vec x0 = Vec::Zero(sys.size());
    if (opts.warm_start) {
        if (opts.warm_start->size() != sys.size()) throw std::invalid_argument("solver: warm start has wrong size");
        x0 = *opts.warm_start;
    }
    MinimizeResult r = minimize(f, x0, bounded, m);
    SolveReport rep;
    rep.solution = std::move(r.x);
    rep.iterations = r.iterations;
    rep.energy = r.value;
    rep.projected_gradient_norm = r.projected_gradient_norm;
    rep.converged = r.converged;
    rep.message = std::move(r.message);
    rep.increments = std::move(r.increments);
    return rep;
}

}  // namespace

SolveReport solve_constrained(const ConstrainedProblem& prob, const SolveOptions& opts) {
    const ConstrainedEnergy f(prob);
    return run(f, *prob.system, normal_dofs(*prob.system), opts);
}

SolveReport solve_penalty(const PenaltyProblem& prob, const SolveOptions& opts) {
    const PenaltyEnergy f(prob);
    return run(f, *prob.system, {}, opts);
}

OracleResult active_set_oracle(const DiscreteSystem& system) {
    const std::size_t m = system.contact.size();
    if (m > 12) throw std::invalid_argument("active_set_oracle: more than 12 contact nodes");
    if (system.friction_bound != 0.0) throw std::invalid_argument("active_set_oracle: requires F_b = 0");

    const Eigen::MatrixXd k = Eigen::MatrixXd(system.stiffness);
    const Vec& f = system.load;
    const Index n = system.size();
    const double primal_tol = 1e-12;
    const double dual_tol = 1e-10 * (1.0 + f.lpNorm<Eigen::Infinity>());

    OracleResult out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        ++out.sets_tried;
        std::vector<char> fixed(static_cast<std::size_t>(n), 0);
        for (std::size_t c = 0; c < m; ++c) {
            if (mask & (std::size_t{1} << c)) fixed[static_cast<std::size_t>(system.contact[c].normal)] = 1;
        }
        std::vector<Index> free;
        for (Index i = 0; i < n; ++i) {
            if (!fixed[static_cast<std::size_t>(i)]) free.push_back(i);
        }
        const Index nf = static_cast<Index>(free.size());
        Eigen::MatrixXd kff(nf, nf);
        Vec ff(nf);
        for (Index a = 0; a < nf; ++a) {
            ff[a] = f[free[static_cast<std::size_t>(a)]];
            for (Index b = 0; b < nf; ++b) kff(a, b) = k(free[static_cast<std::size_t>(a)], free[static_cast<std::size_t>(b)]);
        }
        const Vec uf = kff.ldlt().solve(ff);
        Vec u = Vec::Zero(n);
        for (Index a = 0; a < nf; ++a) u[free[static_cast<std::size_t>(a)]] = uf[a];

        const double scale = 1.0 + u.lpNorm<Eigen::Infinity>();
        const Vec reaction = k * u - f;
        bool ok = true;
        Vec mult = Vec::Zero(static_cast<Index>(m));
        for (std::size_t c = 0; c < m && ok; ++c) {
            const Index dof = system.contact[c].normal;
            if (mask & (std::size_t{1} << c)) {
                mult[static_cast<Index>(c)] = reaction[dof];
                ok = reaction[dof] >= -dual_tol;
            } else {
                ok = u[dof] >= -primal_tol * scale;
            }
        }
        if (!ok) continue;
        out.solution = u;
        out.multipliers = mult;
        out.active.resize(m);
        for (std::size_t c = 0; c < m; ++c) out.active[c] = (mask & (std::size_t{1} << c)) != 0;
        return out;
    }
    throw std::runtime_error("active_set_oracle: no KKT point found");
}

std::vector<double> normal_reactions(const DiscreteSystem& system, const Vec& u) {
    const Vec r = system.stiffness * u - system.load;
    std::vector<double> out;
    out.reserve(system.contact.size());
    // along nu = (0,-1)
    for (const auto& c : system.contact) out.push_back(-r[c.normal]);
    return out;
}

}  // namespace contactfem
