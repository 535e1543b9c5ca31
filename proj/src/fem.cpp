#include "contactfem/fem.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace contactfem {

void Material::validate() const {
    if (!(E > 0.0) || !std::isfinite(E)) throw std::invalid_argument("material: E must be positive");
    if (!(kappa > 0.0 && kappa < 0.5)) throw std::invalid_argument("material: kappa must lie in (0, 1/2)");
}

double Material::trace_coefficient() const { return E * kappa / ((1.0 + kappa) * (1.0 - 2.0 * kappa)); }

double Material::monotonicity_constant() const { return E / (1.0 + kappa); }

double Material::lipschitz_constant() const { return monotonicity_constant() + 2.0 * trace_coefficient(); }

Tensor2 elasticity_apply(const Material& material, const Tensor2& strain) {
    return material.trace_coefficient() * strain.trace() * Tensor2::Identity() +
           material.monotonicity_constant() * strain;
}

Vec DiscreteSystem::expand(const Vec& reduced) const {
    if (reduced.size() != size()) throw std::invalid_argument("expand: reduced vector has wrong size");
    Vec full = Vec::Zero(static_cast<Index>(2 * node_count));
    for (Index k = 0; k < reduced.size(); ++k) full[free_to_full[static_cast<std::size_t>(k)]] = reduced[k];
    return full;
}

Vec DiscreteSystem::restrict(const Vec& full) const {
    if (full.size() != static_cast<Index>(2 * node_count)) {
        throw std::invalid_argument("restrict: displacement vector has wrong size");
    }
    Vec reduced(static_cast<Index>(free_to_full.size()));
    for (Index k = 0; k < reduced.size(); ++k) reduced[k] = full[free_to_full[static_cast<std::size_t>(k)]];
    return reduced;
}

double DiscreteSystem::v_norm(const Vec& reduced) const {
    return std::sqrt(std::max(0.0, reduced.dot(v_metric * reduced)));
}

namespace {

struct ElementGeometry {
    double area = 0.0;
    std::array<Vector2, 3> grad;  // gradients of the barycentric hat functions
};

ElementGeometry element_geometry(const Mesh& mesh, std::size_t tri) {
    const auto& t = mesh.triangles[tri];
    const Point2& p0 = mesh.nodes[t[0]];
    const Point2& p1 = mesh.nodes[t[1]];
    const Point2& p2 = mesh.nodes[t[2]];
    ElementGeometry g;
    g.area = mesh.signed_area(tri);
    if (!(g.area > 0.0)) {
        std::ostringstream msg;
        msg << "degenerate or inverted triangle " << tri << " (signed area " << g.area << ")";
        throw std::runtime_error(msg.str());
    }
    const double inv = 1.0 / (2.0 * g.area);
    g.grad[0] = Vector2(p1.y - p2.y, p2.x - p1.x) * inv;
    g.grad[1] = Vector2(p2.y - p0.y, p0.x - p2.x) * inv;
    g.grad[2] = Vector2(p0.y - p1.y, p1.x - p0.x) * inv;
    return g;
}

// Strain of the vector hat function phi_a e_i.
Tensor2 basis_strain(const Vector2& grad, int component) {
    Tensor2 e = Tensor2::Zero();
    e.row(component) += 0.5 * grad.transpose();
    e.col(component) += 0.5 * grad;
    return e;
}

template <typename StressMap>
SpMat assemble_bilinear(const Mesh& mesh, StressMap&& stress_of) {
    const Index ndof = static_cast<Index>(2 * mesh.nodes.size());
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(mesh.triangles.size() * 36 + static_cast<std::size_t>(ndof));
    for (std::size_t tri = 0; tri < mesh.triangles.size(); ++tri) {
        const ElementGeometry g = element_geometry(mesh, tri);
        const auto& t = mesh.triangles[tri];
        std::array<Tensor2, 6> strain;
        std::array<Tensor2, 6> stress;
        for (int a = 0; a < 3; ++a) {
            for (int i = 0; i < 2; ++i) {
                strain[2 * a + i] = basis_strain(g.grad[a], i);
                stress[2 * a + i] = stress_of(strain[2 * a + i]);
            }
        }
        for (int r = 0; r < 6; ++r) {
            const Index row = static_cast<Index>(2 * t[r / 2]) + r % 2;
            for (int c = 0; c < 6; ++c) {
                const Index col = static_cast<Index>(2 * t[c / 2]) + c % 2;
                triplets.emplace_back(row, col, g.area * stress[c].cwiseProduct(strain[r]).sum());
            }
        }
    }
    // Structural diagonal so every row owns a diagonal slot.
    for (Index k = 0; k < ndof; ++k) triplets.emplace_back(k, k, 0.0);
    SpMat m(ndof, ndof);
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
}

SpMat reduce(const SpMat& full, const std::vector<Index>& full_to_free, Index n_free) {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(full.nonZeros()));
    for (Index col = 0; col < full.outerSize(); ++col) {
        const Index c = full_to_free[static_cast<std::size_t>(col)];
        if (c < 0) continue;
        for (SpMat::InnerIterator it(full, col); it; ++it) {
            const Index r = full_to_free[static_cast<std::size_t>(it.row())];
            if (r >= 0) triplets.emplace_back(r, c, it.value());
        }
    }
    SpMat m(n_free, n_free);
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
}

double edge_length(const Mesh& mesh, const BoundaryEdge& e) {
    return std::hypot(mesh.nodes[e.b].x - mesh.nodes[e.a].x, mesh.nodes[e.b].y - mesh.nodes[e.a].y);
}

}  // namespace

Tensor2 element_strain(const Mesh& mesh, std::size_t tri, const Vec& full_displacement) {
    const ElementGeometry g = element_geometry(mesh, tri);
    const auto& t = mesh.triangles[tri];
    Tensor2 grad_u = Tensor2::Zero();
    for (int a = 0; a < 3; ++a) {
        const Vector2 ua(full_displacement[static_cast<Index>(2 * t[a])],
                         full_displacement[static_cast<Index>(2 * t[a] + 1)]);
        grad_u += ua * g.grad[a].transpose();
    }
    return 0.5 * (grad_u + grad_u.transpose());
}

SpMat assemble_full_stiffness(const Mesh& mesh, const Material& material) {
    material.validate();
    return assemble_bilinear(mesh, [&](const Tensor2& e) { return elasticity_apply(material, e); });
}

SpMat assemble_full_v_metric(const Mesh& mesh) {
    return assemble_bilinear(mesh, [](const Tensor2& e) { return e; });
}

DiscreteSystem assemble(const Mesh& mesh, const Material& material, const Vector2& body_force,
                        const Vector2& traction, double friction_bound) {
    if (!(friction_bound >= 0.0)) throw std::invalid_argument("assemble: friction bound must be nonnegative");
    DiscreteSystem sys;
    sys.node_count = mesh.nodes.size();
    sys.friction_bound = friction_bound;
    const std::size_t ndof = 2 * sys.node_count;

    std::vector<bool> fixed(ndof, false);
    for (const auto& e : mesh.boundary_edges) {
        if (e.tag != BoundaryTag::Dirichlet) continue;
        for (std::size_t n : {e.a, e.b}) fixed[2 * n] = fixed[2 * n + 1] = true;
    }
    sys.full_to_free.assign(ndof, -1);
    for (std::size_t d = 0; d < ndof; ++d) {
        if (fixed[d]) {
            sys.dirichlet_dofs.push_back(d);
        } else {
            sys.full_to_free[d] = static_cast<Index>(sys.free_to_full.size());
            sys.free_to_full.push_back(static_cast<Index>(d));
        }
    }
    const Index n_free = static_cast<Index>(sys.free_to_full.size());

    sys.stiffness = reduce(assemble_full_stiffness(mesh, material), sys.full_to_free, n_free);
    sys.v_metric = reduce(assemble_full_v_metric(mesh), sys.full_to_free, n_free);

    // Exact P1 quadrature of constant body force and edge traction.
    Vec full_load = Vec::Zero(static_cast<Index>(ndof));
    for (std::size_t tri = 0; tri < mesh.triangles.size(); ++tri) {
        const double share = mesh.signed_area(tri) / 3.0;
        for (std::size_t n : mesh.triangles[tri]) {
            full_load[static_cast<Index>(2 * n)] += share * body_force.x();
            full_load[static_cast<Index>(2 * n + 1)] += share * body_force.y();
        }
    }
    for (const auto& e : mesh.boundary_edges) {
        if (e.tag != BoundaryTag::Neumann) continue;
        const double share = 0.5 * edge_length(mesh, e);
        for (std::size_t n : {e.a, e.b}) {
            full_load[static_cast<Index>(2 * n)] += share * traction.x();
            full_load[static_cast<Index>(2 * n + 1)] += share * traction.y();
        }
    }
    sys.load = sys.restrict(full_load);

    for (const auto& [node, weight] : contact_weights(mesh)) {
        sys.contact_measure += weight;
        const Index tx = sys.full_to_free[2 * node];
        const Index ty = sys.full_to_free[2 * node + 1];
        if (tx < 0 || ty < 0) continue;  // clamped corner
        sys.contact.push_back({node, tx, ty, weight});
    }
    return sys;
}

NodeKinematics normal_tangential(const Mesh& mesh, const Vec& full_displacement, std::size_t node) {
    if (full_displacement.size() != static_cast<Index>(2 * mesh.nodes.size())) {
        throw std::invalid_argument("normal_tangential: displacement vector has wrong size");
    }
    const bool on_contact = std::any_of(mesh.boundary_edges.begin(), mesh.boundary_edges.end(), [&](const auto& e) {
        return e.tag == BoundaryTag::Contact && (e.a == node || e.b == node);
    });
    if (!on_contact) {
        throw std::invalid_argument("normal_tangential: node " + std::to_string(node) + " is not on the contact boundary");
    }
    const Vector2 u(full_displacement[static_cast<Index>(2 * node)], full_displacement[static_cast<Index>(2 * node + 1)]);
    const Vector2 nu(0.0, -1.0);
    const double un = u.dot(nu);
    const Vector2 ut = u - un * nu;
    return {node, un, ut.x()};
}

std::vector<NodeKinematics> normal_tangential(const Mesh& mesh, const Vec& full_displacement) {
    std::vector<NodeKinematics> out;
    for (const auto& [node, weight] : contact_weights(mesh)) {
        out.push_back(normal_tangential(mesh, full_displacement, node));
    }
    return out;
}

SpMat assemble_boundary_mass(const Mesh& mesh, const DiscreteSystem& system) {
    std::vector<Eigen::Triplet<double>> triplets;
    for (const auto& e : mesh.boundary_edges) {
        const double len = edge_length(mesh, e);
        const std::array<std::size_t, 2> n{e.a, e.b};
        for (int comp = 0; comp < 2; ++comp) {
            for (int p = 0; p < 2; ++p) {
                const Index r = system.full_to_free[2 * n[p] + comp];
                if (r < 0) continue;
                for (int q = 0; q < 2; ++q) {
                    const Index c = system.full_to_free[2 * n[q] + comp];
                    if (c < 0) continue;
                    triplets.emplace_back(r, c, len * (p == q ? 2.0 : 1.0) / 6.0);
                }
            }
        }
    }
    SpMat m(system.size(), system.size());
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
}

TraceConstantEstimate estimate_trace_constant(const DiscreteSystem& system, const Mesh& mesh,
                                              const TraceConstantOptions& opts) {
    const SpMat boundary = assemble_boundary_mass(mesh, system);
    Eigen::SimplicialLDLT<SpMat> metric(system.v_metric);
    if (metric.info() != Eigen::Success) throw std::runtime_error("trace constant: V metric is not factorizable");

    // Deterministic start with a nonzero boundary trace in every component.
    Vec x = Vec::Ones(system.size());
    TraceConstantEstimate est;
    double mu = 0.0;
    for (int it = 1; it <= opts.max_iters; ++it) {
        Vec y = metric.solve(boundary * x);
        const double xm = x.dot(system.v_metric * x);
        mu = x.dot(boundary * x) / xm;
        // M-norm residual of M^{-1} B x - mu x bounds the eigenvalue error.
        const Vec r = y - mu * x;
        const double res = std::sqrt(std::max(0.0, r.dot(system.v_metric * r)) / xm);
        est.iterations = it;
        if (res <= opts.rel_tol * mu) {
            est.converged = true;
            break;
        }
        x = y / std::sqrt(y.dot(system.v_metric * y));
    }
    est.eigenvalue = mu;
    est.d0 = std::sqrt(mu);
    return est;
}

SmallnessReport check_smallness(const DiscreteSystem& system, double d0, const Material& material) {
    SmallnessReport rep;
    rep.d0 = d0;
    rep.friction_l2 = system.friction_bound * std::sqrt(system.contact_measure);
    rep.lhs = d0 * d0 * rep.friction_l2;
    rep.monotonicity = material.monotonicity_constant();
    rep.pass = rep.lhs < rep.monotonicity;
    return rep;
}

void write_triplets(std::ostream& os, const SpMat& matrix) {
    const auto old_precision = os.precision(std::numeric_limits<double>::max_digits10);
    for (Index col = 0; col < matrix.outerSize(); ++col) {
        for (SpMat::InnerIterator it(matrix, col); it; ++it) os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
    os.precision(old_precision);
}

}  // namespace contactfem
