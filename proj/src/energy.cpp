#include "contactfem/energy.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace contactfem {

void PenaltyProblem::validate() const {
    if (!system) throw std::invalid_argument("penalty problem: missing system");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("penalty problem: lambda must be positive");
    if (!(rho > 0.0)) throw std::invalid_argument("penalty problem: rho must be positive");
    contactfem::validate(law);
}

void ConstrainedProblem::validate() const {
    if (!system) throw std::invalid_argument("constrained problem: missing system");
    if (!(rho > 0.0)) throw std::invalid_argument("constrained problem: rho must be positive");
}

double smoothed_abs(double t, double rho) { return std::sqrt(t * t + rho * rho) - rho; }

namespace {

double smoothed_abs_slope(double t, double rho) { return t / std::sqrt(t * t + rho * rho); }

double smoothed_abs_increment(double t, double dt, double rho) {
    const double a = std::sqrt((t + dt) * (t + dt) + rho * rho);
    const double b = std::sqrt(t * t + rho * rho);
    return dt * (2.0 * t + dt) / (a + b);
}

void check_size(const DiscreteSystem& sys, const Vec& u) {
    if (u.size() != sys.size()) throw std::invalid_argument("displacement has wrong number of dofs");
}

// Elastic part and smoothed friction, shared by both problems.
double elastic_friction_energy(const DiscreteSystem& sys, double rho, const Vec& u) {
    check_size(sys, u);
    double e = 0.5 * u.dot(sys.stiffness * u) - sys.load.dot(u);
    for (const auto& c : sys.contact) e += c.weight * sys.friction_bound * smoothed_abs(u[c.tangential], rho);
    return e;
}

double elastic_friction_increment(const DiscreteSystem& sys, double rho, const Vec& u, const Vec& s) {
    const Vec ks = sys.stiffness * s;
    double de = s.dot(sys.stiffness * u - sys.load) + 0.5 * s.dot(ks);
    for (const auto& c : sys.contact) {
        de += c.weight * sys.friction_bound * smoothed_abs_increment(u[c.tangential], s[c.tangential], rho);
    }
    return de;
}

Vec elastic_friction_gradient(const DiscreteSystem& sys, double rho, const Vec& u) {
    check_size(sys, u);
    Vec g = sys.stiffness * u - sys.load;
    for (const auto& c : sys.contact) g[c.tangential] += c.weight * sys.friction_bound * smoothed_abs_slope(u[c.tangential], rho);
    return g;
}

// Stiffness plus the majorizing friction weight F_b w / sqrt(t^2 + rho^2),
// which dominates the exact second derivative of the smoothed |t|.
SpMat elastic_friction_curvature(const DiscreteSystem& sys, double rho, const Vec& u) {
    SpMat h = sys.stiffness;
    for (const auto& c : sys.contact) {
        const double t = u[c.tangential];
        h.coeffRef(c.tangential, c.tangential) += c.weight * sys.friction_bound / std::sqrt(t * t + rho * rho);
    }
    return h;
}

}  // namespace

double energy_penalty(const PenaltyProblem& prob, const Vec& u) {
    const DiscreteSystem& sys = *prob.system;
    double e = elastic_friction_energy(sys, prob.rho, u);
    double contact = 0.0;
    for (std::size_t i = 0; i < sys.contact.size(); ++i) {
        contact += sys.contact[i].weight * potential(prob.law, sys.normal_displacement(u, i));
    }
    return e + contact / prob.lambda;
}

Vec gradient_penalty(const PenaltyProblem& prob, const Vec& u) {
    const DiscreteSystem& sys = *prob.system;
    Vec g = elastic_friction_gradient(sys, prob.rho, u);
    for (std::size_t i = 0; i < sys.contact.size(); ++i) {
        const auto& c = sys.contact[i];
        // d/du_y of j(u_nu) with u_nu = -u_y
        g[c.normal] -= c.weight * pressure(prob.law, sys.normal_displacement(u, i)) / prob.lambda;
    }
    return g;
}

double energy_constrained(const ConstrainedProblem& prob, const Vec& u) {
    return elastic_friction_energy(*prob.system, prob.rho, u);
}

Vec gradient_constrained(const ConstrainedProblem& prob, const Vec& u) {
    return elastic_friction_gradient(*prob.system, prob.rho, u);
}

double friction_functional(const DiscreteSystem& system, const Vec& u) {
    double phi = 0.0;
    for (const auto& c : system.contact) phi += c.weight * system.friction_bound * std::abs(u[c.tangential]);
    return phi;
}

std::vector<Index> normal_dofs(const DiscreteSystem& system) {
    std::vector<Index> idx;
    idx.reserve(system.contact.size());
    for (const auto& c : system.contact) idx.push_back(c.normal);
    return idx;
}

Vec project_onto_feasible(const DiscreteSystem& system, const Vec& u) {
    check_size(system, u);
    Vec v = u;
    for (const auto& c : system.contact) v[c.normal] = std::max(0.0, v[c.normal]);
    return v;
}

double max_penetration(const DiscreteSystem& system, const Vec& u) {
    double m = 0.0;
    for (std::size_t i = 0; i < system.contact.size(); ++i) m = std::max(m, system.normal_displacement(u, i));
    return m;
}

double vi_residual(const DiscreteSystem& system, const Vec& u, const std::vector<Vec>& probes) {
    check_size(system, u);
    if (probes.empty()) throw std::invalid_argument("vi_residual: empty probe set");
    const Vec r = system.load - system.stiffness * u;
    const double phi_u = friction_functional(system, u);
    double eps = 0.0;
    for (const Vec& v : probes) {
        check_size(system, v);
        const Vec dv = v - u;
        const double bracket = r.dot(dv) - friction_functional(system, v) + phi_u;
        eps = std::max(eps, bracket / (1.0 + system.v_norm(dv)));
    }
    return eps;
}

std::vector<Vec> make_probes(const DiscreteSystem& system, const Vec& u, const std::optional<Vec>& reference,
                             int random_count, std::uint64_t seed) {
    check_size(system, u);
    std::vector<Vec> probes;
    probes.push_back(Vec::Zero(system.size()));
    probes.push_back(project_onto_feasible(system, u));
    if (reference) probes.push_back(project_onto_feasible(system, *reference));

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int k = 0; k < random_count; ++k) {
        const Vec& base = (reference && k % 2 == 0) ? *reference : u;
        const double scale = 0.01 * std::max(base.lpNorm<Eigen::Infinity>(), 1e-6) * unit(rng);
        const double stretch = 2.0 * unit(rng);
        Vec v(system.size());
        for (Index i = 0; i < v.size(); ++i) v[i] = stretch * base[i] + scale * normal(rng);
        probes.push_back(project_onto_feasible(system, v));
    }
    return probes;
}

namespace {

// 0.5 (v - u)^T M (v - u)
class MetricDistance final : public Objective {
public:
    MetricDistance(const DiscreteSystem& sys, const Vec& target) : sys_(sys), target_(target) {}

    Index size() const override { return target_.size(); }
    double value(const Vec& v) const override {
        const Vec d = v - target_;
        return 0.5 * d.dot(sys_.v_metric * d);
    }
    double increment(const Vec& v, const Vec& s) const override {
        return s.dot(sys_.v_metric * (v - target_)) + 0.5 * s.dot(sys_.v_metric * s);
    }
    Vec gradient(const Vec& v) const override { return sys_.v_metric * (v - target_); }
    SpMat curvature(const Vec&, bool) const override { return sys_.v_metric; }

private:
    const DiscreteSystem& sys_;
    const Vec& target_;
};

}  // namespace

DistanceResult distance_to_K(const DiscreteSystem& system, const Vec& u, double tol, int max_iters) {
    check_size(system, u);
    const MetricDistance objective(system, u);
    MinimizeOptions opts;
    opts.grad_tol = tol * (1.0 + (system.v_metric * u).norm());
    opts.max_iters = max_iters;
    const MinimizeResult r = minimize(objective, project_onto_feasible(system, u), normal_dofs(system), opts);
    DistanceResult out;
    out.nearest = r.x;
    out.distance = system.v_norm(r.x - u);
    out.iterations = r.iterations;
    out.converged = r.converged;
    return out;
}

PenaltyEnergy::PenaltyEnergy(PenaltyProblem prob) : prob_(std::move(prob)) { prob_.validate(); }

Index PenaltyEnergy::size() const { return prob_.system->size(); }

double PenaltyEnergy::value(const Vec& u) const { return energy_penalty(prob_, u); }

double PenaltyEnergy::increment(const Vec& u, const Vec& step) const {
    const DiscreteSystem& sys = *prob_.system;
    double de = elastic_friction_increment(sys, prob_.rho, u, step);
    double contact = 0.0;
    for (std::size_t i = 0; i < sys.contact.size(); ++i) {
        contact += sys.contact[i].weight *
                   potential_increment(prob_.law, sys.normal_displacement(u, i), -step[sys.contact[i].normal]);
    }
    return de + contact / prob_.lambda;
}

Vec PenaltyEnergy::gradient(const Vec& u) const { return gradient_penalty(prob_, u); }

SpMat PenaltyEnergy::curvature(const Vec& u, bool clamp) const {
    const DiscreteSystem& sys = *prob_.system;
    SpMat h = elastic_friction_curvature(sys, prob_.rho, u);
    for (std::size_t i = 0; i < sys.contact.size(); ++i) {
        const auto& c = sys.contact[i];
        double slope = pressure_slope(prob_.law, sys.normal_displacement(u, i));
        if (clamp) slope = std::max(0.0, slope);
        h.coeffRef(c.normal, c.normal) += c.weight * slope / prob_.lambda;
    }
    return h;
}

ConstrainedEnergy::ConstrainedEnergy(ConstrainedProblem prob) : prob_(std::move(prob)) { prob_.validate(); }

Index ConstrainedEnergy::size() const { return prob_.system->size(); }

double ConstrainedEnergy::value(const Vec& u) const { return energy_constrained(prob_, u); }

double ConstrainedEnergy::increment(const Vec& u, const Vec& step) const {
    return elastic_friction_increment(*prob_.system, prob_.rho, u, step);
}

Vec ConstrainedEnergy::gradient(const Vec& u) const { return gradient_constrained(prob_, u); }

SpMat ConstrainedEnergy::curvature(const Vec& u, bool) const {
    return elastic_friction_curvature(*prob_.system, prob_.rho, u);
}

}  // namespace contactfem
