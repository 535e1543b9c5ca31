#pragma once

// P1 finite-element discretization of plane linear elasticity on a tagged
// mesh: stiffness operator, strain-energy (V) metric, load vector and
// contact-boundary kinematics.

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <iosfwd>
#include <vector>

#include "contactfem/mesh.hpp"

namespace contactfem {

using Vec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;
using Index = Eigen::Index;
using Tensor2 = Eigen::Matrix2d;
using Vector2 = Eigen::Vector2d;

/// Isotropic material given by Young modulus E and Poisson ratio kappa.
struct Material {
    double E = 12000.0;
    double kappa = 0.42;

    void validate() const;
    /// Coefficient of the trace term, E kappa / ((1 + kappa)(1 - 2 kappa)).
    double trace_coefficient() const;
    /// Coefficient of the deviatoric term, E / (1 + kappa). Also the strong
    /// monotonicity constant of the operator.
    double monotonicity_constant() const;
    /// Lipschitz constant of the tensor: largest eigenvalue over symmetric tensors.
    double lipschitz_constant() const;
};

/// Stress response of the elasticity tensor to a symmetric strain.
Tensor2 elasticity_apply(const Material& material, const Tensor2& strain);

/// Contact node in reduced (Dirichlet-eliminated) numbering. The normal dof is
/// the y displacement; the outward normal on the bottom edge is (0,-1) so the
/// normal displacement is u_nu = -u[normal].
struct ContactDof {
    std::size_t node = 0;
    Index tangential = 0;
    Index normal = 0;
    double weight = 0.0;
};

struct DiscreteSystem {
    std::size_t node_count = 0;
    SpMat stiffness;  // symmetric, positive definite
    SpMat v_metric;   // integral of eps(u):eps(v)
    Vec load;
    std::vector<Index> free_to_full;
    std::vector<Index> full_to_free;  // -1 for eliminated dofs
    std::vector<std::size_t> dirichlet_dofs;
    std::vector<ContactDof> contact;
    double friction_bound = 0.0;
    double contact_measure = 0.0;  // meas(Gamma_3), including Dirichlet corners
    Vector2 normal{0.0, -1.0};

    Index size() const { return load.size(); }

    /// Reduced vector -> per-node displacement vector (2 dofs per node).
    Vec expand(const Vec& reduced) const;
    /// Per-node displacement vector -> reduced vector (eliminated dofs dropped).
    Vec restrict(const Vec& full) const;

    double v_norm(const Vec& reduced) const;
    double normal_displacement(const Vec& u, std::size_t c) const { return -u[contact[c].normal]; }
    double tangential_displacement(const Vec& u, std::size_t c) const { return u[contact[c].tangential]; }
};

/// Constant strain of triangle `tri` for a per-node displacement vector.
Tensor2 element_strain(const Mesh& mesh, std::size_t tri, const Vec& full_displacement);

/// Unreduced (2 * node count) stiffness operator.
SpMat assemble_full_stiffness(const Mesh& mesh, const Material& material);
/// Unreduced V metric, same pattern as the stiffness.
SpMat assemble_full_v_metric(const Mesh& mesh);

DiscreteSystem assemble(const Mesh& mesh, const Material& material, const Vector2& body_force,
                        const Vector2& traction, double friction_bound);

struct NodeKinematics {
    std::size_t node = 0;
    double normal = 0.0;      // u_nu, positive means penetration
    double tangential = 0.0;  // signed x component; |u_tau| = abs(tangential)
};

/// Normal/tangential split at one node of the contact boundary. Throws if the
/// node does not lie on a contact edge.
NodeKinematics normal_tangential(const Mesh& mesh, const Vec& full_displacement, std::size_t node);
std::vector<NodeKinematics> normal_tangential(const Mesh& mesh, const Vec& full_displacement);

/// Consistent P1 mass of the whole boundary trace, reduced numbering.
SpMat assemble_boundary_mass(const Mesh& mesh, const DiscreteSystem& system);

struct TraceConstantOptions {
    double rel_tol = 1e-8;
    int max_iters = 50000;
};

struct TraceConstantEstimate {
    double d0 = 0.0;
    double eigenvalue = 0.0;  // d0 squared
    int iterations = 0;
    bool converged = false;
};

/// Best discrete trace constant: sqrt of the largest eigenvalue of the pencil
/// (boundary mass, V metric), by power iteration.
TraceConstantEstimate estimate_trace_constant(const DiscreteSystem& system, const Mesh& mesh,
                                              const TraceConstantOptions& opts = {});

struct SmallnessReport {
    double d0 = 0.0;
    double friction_l2 = 0.0;       // ||F_b||_{L2(Gamma_3)}
    double lhs = 0.0;               // d0^2 ||F_b||
    double monotonicity = 0.0;      // m_F
    bool pass = false;
};

SmallnessReport check_smallness(const DiscreteSystem& system, double d0, const Material& material);

/// Debug dump as `i j value` lines.
void write_triplets(std::ostream& os, const SpMat& matrix);

}  // namespace contactfem
