#include <doctest.h>

#include <Eigen/Dense>

#include <random>

#include "contactfem/solver.hpp"
#include "toy_system.hpp"

using namespace contactfem;
using contactfem::test::toy_system;

namespace {

std::shared_ptr<const DiscreteSystem> make_system(double h, Vector2 f0, double fb, Vector2 f2 = {0, 0}) {
    const Mesh mesh = tag_boundary(generate_rect_mesh(2, 1, h));
    return std::make_shared<const DiscreteSystem>(assemble(mesh, Material{}, f0, f2, fb));
}

}  // namespace

TEST_CASE("zero load gives the zero solution") {
    const auto sys = make_system(1.0 / 4, {0, 0}, 0.0);
    const SolveReport c = solve_constrained({sys, 1e-8});
    CHECK(c.converged);
    CHECK(c.iterations <= 1);
    CHECK(c.solution.norm() == 0.0);
    const SolveReport p = solve_penalty({sys, SofteningCompliance{}, 1e-3, 1e-8});
    CHECK(p.converged);
    CHECK(p.solution.norm() == 0.0);
}

TEST_CASE("active set oracle on a two-dof toy") {
    const Eigen::MatrixXd k = Eigen::MatrixXd::Identity(2, 2);
    Vec f(2);
    f << 0.0, -1.0;
    const auto sys = toy_system(k, f, {{0, 1}});
    const OracleResult o = active_set_oracle(*sys);
    CHECK(o.solution.norm() == 0.0);
    CHECK(o.multipliers[0] == doctest::Approx(1.0));
    CHECK(o.active[0]);

    const SolveReport r = solve_constrained({sys, 1e-8});
    CHECK(r.converged);
    CHECK(r.solution.norm() <= 1e-12);
    CHECK(normal_reactions(*sys, r.solution)[0] == doctest::Approx(-1.0));
}

TEST_CASE("active set oracle preconditions") {
    CHECK_THROWS(active_set_oracle(*make_system(1.0 / 8, {0, -1}, 0.0)));  // 16 contact nodes
    const Mesh mesh = tag_boundary(generate_rect_mesh(1, 1, 0.25));
    CHECK_THROWS(active_set_oracle(assemble(mesh, Material{}, {0, -1}, {0, 0}, 1.0)));
}

TEST_CASE("downward load closes the whole contact zone") {
    const Mesh mesh = tag_boundary(generate_rect_mesh(2, 1, 1.0));
    const auto sys = std::make_shared<const DiscreteSystem>(assemble(mesh, Material{}, {0, -500}, {0, 0}, 0));
    const OracleResult o = active_set_oracle(*sys);
    const SolveReport r = solve_constrained({sys, 1e-8});
    CHECK(r.converged);
    for (std::size_t c = 0; c < sys->contact.size(); ++c) {
        CHECK(o.active[c]);
        CHECK(sys->normal_displacement(r.solution, c) == 0.0);
    }
    CHECK(sys->v_norm(r.solution - o.solution) <= 1e-8);
}

TEST_CASE("constrained solver agrees with the active set oracle") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> ud(-1000.0, 1000.0);
    for (int trial = 0; trial < 6; ++trial) {
        const Mesh mesh = tag_boundary(generate_rect_mesh(1, 1, 0.25));
        const auto sys = std::make_shared<const DiscreteSystem>(
            assemble(mesh, Material{}, {ud(rng), ud(rng)}, {ud(rng), ud(rng)}, 0));
        const OracleResult o = active_set_oracle(*sys);
        const SolveReport r = solve_constrained({sys, 1e-8});
        CHECK(r.converged);
        CHECK(sys->v_norm(r.solution - o.solution) <= 1e-8);
    }
}

TEST_CASE("accepted steps decrease the energy and iterates stay feasible") {
    const auto sys = make_system(1.0 / 8, {-200, -800}, 10);
    SolveOptions opts;
    opts.record_trace = true;
    const SolveReport c = solve_constrained({sys, 1e-8}, opts);
    CHECK(c.converged);
    CHECK(!c.increments.empty());
    for (double d : c.increments) CHECK(d <= 0.0);
    CHECK(max_penetration(*sys, c.solution) == 0.0);

    const SolveReport p = solve_penalty({sys, SofteningCompliance{0.1, 0.1}, 1e-2, 1e-8}, opts);
    CHECK(p.converged);
    for (double d : p.increments) CHECK(d <= 0.0);
}

TEST_CASE("solves are deterministic") {
    const auto sys = make_system(1.0 / 8, {-200, -800}, 10);
    const SolveReport a = solve_penalty({sys, SofteningCompliance{}, 1e-4, 1e-8});
    const SolveReport b = solve_penalty({sys, SofteningCompliance{}, 1e-4, 1e-8});
    CHECK(a.iterations == b.iterations);
    CHECK((a.solution - b.solution).norm() == 0.0);
}

TEST_CASE("huge lambda recovers the unconstrained elastic solution") {
    const auto sys = make_system(1.0 / 8, {-200, -800}, 0);
    const Vec free = Eigen::MatrixXd(sys->stiffness).ldlt().solve(sys->load);
    const SolveReport r = solve_penalty({sys, LinearCompliance{1.0}, 1e12, 1e-8});
    CHECK(r.converged);
    CHECK(sys->v_norm(r.solution - free) <= 1e-6);
}

TEST_CASE("stiff foundation penetrates far less than a soft one") {
    const auto sys = make_system(1.0 / 8, {-200, -800}, 10);
    const SolveReport soft = solve_penalty({sys, SofteningCompliance{}, 1.0, 1e-8});
    const SolveReport hard = solve_penalty({sys, SofteningCompliance{}, 1e-8, 1e-8});
    CHECK(soft.converged);
    CHECK(hard.converged);
    CHECK(max_penetration(*sys, hard.solution) <= 1e-4 * max_penetration(*sys, soft.solution));
}

TEST_CASE("friction smoothing bias is negligible") {
    const auto sys = make_system(1.0 / 8, {-200, -800}, 10);
    const SolveReport a = solve_constrained({sys, 1e-8});
    const SolveReport b = solve_constrained({sys, 1e-9});
    CHECK(sys->v_norm(a.solution - b.solution) <= 1e-6 * sys->v_norm(a.solution));
}

TEST_CASE("solver option validation") {
    const auto sys = make_system(1.0 / 4, {0, -1}, 0);
    SolveOptions bad;
    bad.backtrack = 1.5;
    CHECK_THROWS(solve_constrained({sys, 1e-8}, bad));
    SolveOptions warm;
    warm.warm_start = Vec::Zero(3);
    CHECK_THROWS(solve_penalty({sys, LinearCompliance{}, 1.0, 1e-8}, warm));
    CHECK_THROWS(solve_penalty({sys, LinearCompliance{}, -1.0, 1e-8}));
}
