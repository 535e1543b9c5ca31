#pragma once

// Hand-built discrete systems for small analytic checks.

#include <memory>
#include <vector>

#include "contactfem/fem.hpp"

namespace contactfem::test {

/// System with the given dense stiffness, identity V metric, given load and
/// the listed (tangential, normal) dof pairs as contact nodes of weight 1.
inline std::shared_ptr<DiscreteSystem> toy_system(const Eigen::MatrixXd& k, const Vec& f,
                                                  const std::vector<std::pair<Index, Index>>& contact = {},
                                                  double friction_bound = 0.0) {
    auto sys = std::make_shared<DiscreteSystem>();
    const Index n = f.size();
    sys->node_count = static_cast<std::size_t>((n + 1) / 2);
    sys->stiffness = k.sparseView();
    SpMat eye(n, n);
    eye.setIdentity();
    sys->v_metric = eye;
    sys->load = f;
    for (Index i = 0; i < n; ++i) {
        sys->free_to_full.push_back(i);
        sys->full_to_free.push_back(i);
    }
    for (std::size_t c = 0; c < contact.size(); ++c) {
        sys->contact.push_back({c, contact[c].first, contact[c].second, 1.0});
    }
    sys->contact_measure = static_cast<double>(contact.size());
    sys->friction_bound = friction_bound;
    return sys;
}

}  // namespace contactfem::test
