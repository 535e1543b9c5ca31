#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "contactfem/fem.hpp"

using namespace contactfem;

namespace {

Tensor2 random_symmetric(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Tensor2 t;
    t(0, 0) = n(rng);
    t(1, 1) = n(rng);
    t(0, 1) = t(1, 0) = n(rng);
    return t;
}

double frob(const Tensor2& t) { return std::sqrt((t.array() * t.array()).sum()); }

double symmetry_defect(const SpMat& m) {
    const Eigen::MatrixXd d(m);
    return (d - d.transpose()).cwiseAbs().maxCoeff() / d.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("elasticity tensor values") {
    const Material mat{12000.0, 0.42};
    CHECK(mat.monotonicity_constant() == doctest::Approx(8450.704225).epsilon(1e-9));
    CHECK(mat.trace_coefficient() == doctest::Approx(22183.098592).epsilon(1e-9));

    const Tensor2 zero = elasticity_apply(mat, Tensor2::Zero());
    CHECK(zero.cwiseAbs().maxCoeff() == 0.0);

    const Tensor2 id = elasticity_apply(mat, Tensor2::Identity());
    CHECK(id(0, 0) == doctest::Approx(52816.90).epsilon(1e-6));
    CHECK(id(1, 1) == doctest::Approx(52816.90).epsilon(1e-6));
    CHECK(id(0, 1) == 0.0);

    Tensor2 dev = Tensor2::Zero();
    dev(0, 0) = 1.0;
    dev(1, 1) = -1.0;
    const Tensor2 s = elasticity_apply(mat, dev);
    CHECK(s(0, 0) == doctest::Approx(8450.70).epsilon(1e-6));
    CHECK(s(1, 1) == doctest::Approx(-8450.70).epsilon(1e-6));
}

TEST_CASE("elasticity tensor is strongly monotone and Lipschitz") {
    const Material mat{12000.0, 0.42};
    const double m = mat.monotonicity_constant();
    const double l = mat.lipschitz_constant();
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        const Tensor2 a = random_symmetric(rng);
        const Tensor2 b = random_symmetric(rng);
        const Tensor2 d = a - b;
        const Tensor2 fd = elasticity_apply(mat, a) - elasticity_apply(mat, b);
        const double inner = (fd.array() * d.array()).sum();
        CHECK(inner >= m * frob(d) * frob(d) * (1 - 1e-12));
        CHECK(frob(fd) <= l * frob(d) * (1 + 1e-12));
        // symmetric stress
        CHECK(std::abs(fd(0, 1) - fd(1, 0)) <= 1e-12 * frob(fd));
    }
}

TEST_CASE("material validation") {
    CHECK_THROWS(Material{-1.0, 0.3}.validate());
    CHECK_THROWS(Material{1.0, 0.5}.validate());
    CHECK_THROWS(Material{1.0, 0.0}.validate());
    CHECK_NOTHROW(Material{1.0, 0.25}.validate());
}

TEST_CASE("stiffness and V metric are symmetric") {
    const Mesh mesh = tag_boundary(generate_rect_mesh(2, 1, 1.0 / 8));
    CHECK(symmetry_defect(assemble_full_stiffness(mesh, Material{})) <= 1e-12);
    CHECK(symmetry_defect(assemble_full_v_metric(mesh)) <= 1e-12);
    const DiscreteSystem sys = assemble(mesh, Material{}, {-200, -800}, {0, 0}, 10);
    CHECK(symmetry_defect(sys.stiffness) <= 1e-12);
    CHECK(symmetry_defect(sys.v_metric) <= 1e-12);
}

TEST_CASE("reduced stiffness is positive definite") {
    const Mesh mesh = tag_boundary(generate_rect_mesh(1, 1, 0.5));
    const Material unit{1.0, 1e-12};
    const SpMat full = assemble_full_stiffness(mesh, unit);
    CHECK(full.rows() == 18);
    const DiscreteSystem sys = assemble(mesh, unit, {0, 0}, {0, 0}, 0);
    CHECK(sys.size() == 12);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig{Eigen::MatrixXd(sys.stiffness)};
    CHECK(eig.eigenvalues().minCoeff() > 1e-6);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_v{Eigen::MatrixXd(sys.v_metric)};
    CHECK(eig_v.eigenvalues().minCoeff() > 1e-6);
}

TEST_CASE("rigid motions are in the kernel of the full stiffness") {
    const Mesh mesh = tag_boundary(generate_rect_mesh(2, 1, 1.0 / 4));
    const SpMat k = assemble_full_stiffness(mesh, Material{});
    const Index n = static_cast<Index>(mesh.nodes.size());
    Vec tx = Vec::Zero(2 * n), ty = Vec::Zero(2 * n), rot = Vec::Zero(2 * n);
    for (Index i = 0; i < n; ++i) {
        const auto& p = mesh.nodes[static_cast<std::size_t>(i)];
        tx[2 * i] = 1.0;
        ty[2 * i + 1] = 1.0;
        rot[2 * i] = -p.y;
        rot[2 * i + 1] = p.x;
    }
    const double scale = Eigen::MatrixXd(k).cwiseAbs().maxCoeff();
    CHECK((k * tx).lpNorm<Eigen::Infinity>() <= 1e-12 * scale);
    CHECK((k * ty).lpNorm<Eigen::Infinity>() <= 1e-12 * scale);
    CHECK((k * rot).lpNorm<Eigen::Infinity>() <= 1e-12 * scale);
}

TEST_CASE("patch test: affine fields have constant strain and balanced interior forces") {
    const Mesh mesh = tag_boundary(generate_rect_mesh(2, 1, 1.0 / 4));
    const Material mat{};
    const SpMat k = assemble_full_stiffness(mesh, mat);
    const double a = 0.3, b = -0.2, c = 0.15, d = 0.7;
    const Index n = static_cast<Index>(mesh.nodes.size());
    Vec u(2 * n);
    for (Index i = 0; i < n; ++i) {
        const auto& p = mesh.nodes[static_cast<std::size_t>(i)];
        u[2 * i] = a * p.x + b * p.y + 0.1;
        u[2 * i + 1] = c * p.x + d * p.y - 0.4;
    }
    Tensor2 expected;
    expected << a, 0.5 * (b + c), 0.5 * (b + c), d;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        CHECK((element_strain(mesh, t, u) - expected).cwiseAbs().maxCoeff() <= 1e-12);
    }
    const Vec r = k * u;
    const double scale = Eigen::MatrixXd(k).cwiseAbs().maxCoeff() * u.lpNorm<Eigen::Infinity>();
    for (Index i = 0; i < n; ++i) {
        const auto& p = mesh.nodes[static_cast<std::size_t>(i)];
        const bool interior = p.x > 0 && p.x < 2 && p.y > 0 && p.y < 1;
        if (!interior) continue;
        CHECK(std::abs(r[2 * i]) <= 1e-12 * scale);
        CHECK(std::abs(r[2 * i + 1]) <= 1e-12 * scale);
    }
    // Energy equals area * sigma : eps
    const double energy = u.dot(k * u);
    const Tensor2 sigma = elasticity_apply(mat, expected);
    CHECK(energy == doctest::Approx(2.0 * (sigma.array() * expected.array()).sum()).epsilon(1e-12));
}

TEST_CASE("load vector") {
    const Mesh mesh = tag_boundary(generate_rect_mesh(2, 1, 1.0 / 4));
    const DiscreteSystem none = assemble(mesh, Material{}, {0, 0}, {0, 0}, 10);
    CHECK(none.load.lpNorm<Eigen::Infinity>() == 0.0);

    // Traction acts on the right and top edges (length 3); the clamped
    // top-left node takes h/2 of it.
    const double h = 0.25;
    const DiscreteSystem top = assemble(mesh, Material{}, {0, 0}, {0, -3}, 0);
    double fy = 0.0;
    for (Index k = 0; k < top.size(); ++k) {
        if (top.free_to_full[static_cast<std::size_t>(k)] % 2 == 1) fy += top.load[k];
    }
    CHECK(fy == doctest::Approx(-3.0 * (3.0 - h / 2)).epsilon(1e-12));
}

TEST_CASE("system bookkeeping") {
    const Mesh mesh = tag_boundary(generate_rect_mesh(2, 1, 1.0 / 4));
    const DiscreteSystem sys = assemble(mesh, Material{}, {-200, -800}, {0, 0}, 10);
    CHECK(sys.dirichlet_dofs.size() == 2 * 5);
    CHECK(sys.size() == static_cast<Index>(2 * mesh.nodes.size() - 10));
    CHECK(sys.contact.size() == 8);  // bottom nodes except the clamped corner
    CHECK(sys.contact_measure == doctest::Approx(2.0));
    Vec u = Vec::LinSpaced(sys.size(), 1.0, 2.0);
    const Vec full = sys.expand(u);
    for (auto d : sys.dirichlet_dofs) CHECK(full[static_cast<Index>(d)] == 0.0);
    CHECK((sys.restrict(full) - u).norm() == 0.0);
    CHECK_THROWS(sys.restrict(u));
}

TEST_CASE("normal and tangential displacement") {
    const Mesh mesh = tag_boundary(generate_rect_mesh(2, 1, 1.0));
    Vec u = Vec::Zero(static_cast<Index>(2 * mesh.nodes.size()));
    // node 1 is (1, 0)
    u[3] = -0.3;
    auto k = normal_tangential(mesh, u, 1);
    CHECK(k.normal == doctest::Approx(0.3));
    CHECK(k.tangential == 0.0);
    u[2] = 0.5;
    u[3] = 0.0;
    k = normal_tangential(mesh, u, 1);
    CHECK(k.normal == 0.0);
    CHECK(std::abs(k.tangential) == doctest::Approx(0.5));
    u.setZero();
    k = normal_tangential(mesh, u, 2);
    CHECK(k.normal == 0.0);
    CHECK(k.tangential == 0.0);
    CHECK_THROWS(normal_tangential(mesh, u, 4));  // top-left node
    CHECK(normal_tangential(mesh, u).size() == 3);
}

TEST_CASE("degenerate triangle is reported") {
    Mesh mesh = tag_boundary(generate_rect_mesh(1, 1, 1));
    mesh.nodes[2] = mesh.nodes[1];
    CHECK_THROWS_WITH(assemble_full_stiffness(mesh, Material{}), doctest::Contains("triangle 1"));
}

TEST_CASE("trace constant against a dense generalized eigensolver") {
    const Mesh mesh = tag_boundary(generate_rect_mesh(2, 1, 1.0 / 4));
    const DiscreteSystem sys = assemble(mesh, Material{}, {0, 0}, {0, 0}, 10);
    const TraceConstantEstimate est = estimate_trace_constant(sys, mesh);
    CHECK(est.converged);

    const Eigen::MatrixXd mb(assemble_boundary_mass(mesh, sys));
    const Eigen::MatrixXd mv(sys.v_metric);
    const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(mb, mv);
    const double lmax = ges.eigenvalues().maxCoeff();
    CHECK(est.eigenvalue == doctest::Approx(lmax).epsilon(1e-6));
    CHECK(est.d0 == doctest::Approx(std::sqrt(lmax)).epsilon(1e-6));
}

TEST_CASE("trace inequality holds for random fields and d0 does not depend on E") {
    const Mesh mesh = tag_boundary(generate_rect_mesh(2, 1, 1.0 / 8));
    const DiscreteSystem sys = assemble(mesh, Material{}, {0, 0}, {0, 0}, 10);
    const DiscreteSystem stiff = assemble(mesh, Material{24000.0, 0.42}, {0, 0}, {0, 0}, 10);
    const TraceConstantEstimate est = estimate_trace_constant(sys, mesh);
    const TraceConstantEstimate est2 = estimate_trace_constant(stiff, mesh);
    CHECK(est2.d0 == doctest::Approx(est.d0).epsilon(1e-6));

    const SpMat mb = assemble_boundary_mass(mesh, sys);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        Vec v(sys.size());
        for (Index k = 0; k < v.size(); ++k) v[k] = n(rng);
        CHECK(v.dot(mb * v) <= est.eigenvalue * v.dot(sys.v_metric * v) * (1 + 1e-8));
    }
}

TEST_CASE("smallness report") {
    const Mesh mesh = tag_boundary(generate_rect_mesh(2, 1, 1.0 / 8));
    const Material mat{12000.0, 0.42};
    const DiscreteSystem sys = assemble(mesh, mat, {-200, -800}, {0, 0}, 10);
    const SmallnessReport rep = check_smallness(sys, 3.0, mat);
    CHECK(std::abs(rep.monotonicity - 12000.0 / 1.42) <= 1e-3);
    CHECK(std::round(rep.monotonicity * 100.0) / 100.0 == doctest::Approx(8450.70).epsilon(1e-15));
    CHECK(rep.friction_l2 == doctest::Approx(10.0 * std::sqrt(2.0)));
    CHECK(rep.lhs == doctest::Approx(9.0 * 10.0 * std::sqrt(2.0)));
    CHECK(rep.pass);

    // threshold d0^2 < 597.55
    CHECK(check_smallness(sys, std::sqrt(597.0), mat).pass);
    CHECK_FALSE(check_smallness(sys, std::sqrt(598.0), mat).pass);

    const DiscreteSystem frictionless = assemble(mesh, mat, {-200, -800}, {0, 0}, 0);
    CHECK(check_smallness(frictionless, 100.0, mat).pass);
}
