#include "contactfem/minimize.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>

namespace contactfem {

Vec projected_gradient(const Vec& x, const Vec& g, const std::vector<Index>& bounded) {
    Vec pg = g;
    for (Index i : bounded) pg[i] = x[i] - std::max(0.0, x[i] - g[i]);
    return pg;
}

namespace {

void project(Vec& x, const std::vector<Index>& bounded) {
    for (Index i : bounded) x[i] = std::max(0.0, x[i]);
}

// Removes the couplings of active coordinates so that the Newton system
// splits into a free block and a diagonal active block.
void decouple(SpMat& h, const std::vector<char>& active) {
    for (Index col = 0; col < h.outerSize(); ++col) {
        for (SpMat::InnerIterator it(h, col); it; ++it) {
            if (it.row() != col && (active[static_cast<std::size_t>(it.row())] || active[static_cast<std::size_t>(col)])) {
                it.valueRef() = 0.0;
            }
        }
    }
}

}  // namespace

MinimizeResult minimize(const Objective& f, const Vec& x0, const std::vector<Index>& bounded,
                        const MinimizeOptions& opts) {
    const Index n = f.size();
    MinimizeResult res;
    res.x = x0;
    project(res.x, bounded);
    Vec& x = res.x;

    std::vector<char> is_bounded(static_cast<std::size_t>(n), 0);
    for (Index i : bounded) is_bounded[static_cast<std::size_t>(i)] = 1;
    std::vector<char> active(static_cast<std::size_t>(n), 0);

    Eigen::SimplicialLDLT<SpMat> ldlt;
    bool analyzed = false;
    double value = f.value(x);

    for (int iter = 0;; ++iter) {
        const Vec g = f.gradient(x);
        const Vec pg = projected_gradient(x, g, bounded);
        res.projected_gradient_norm = pg.norm();
        res.iterations = iter;
        if (!std::isfinite(res.projected_gradient_norm)) {
            res.message = "non-finite gradient";
            break;
        }
        if (res.projected_gradient_norm <= opts.grad_tol) {
            res.converged = true;
            res.message = "converged";
            break;
        }
        if (iter >= opts.max_iters) {
            res.message = "iteration limit reached";
            break;
        }

        const double eps = std::min(opts.active_eps, res.projected_gradient_norm);
        std::fill(active.begin(), active.end(), 0);
        for (Index i : bounded) {
            if (x[i] <= eps && g[i] > 0.0) active[static_cast<std::size_t>(i)] = 1;
        }

        Vec d;
        for (bool clamp : {false, true}) {
            SpMat h = f.curvature(x, clamp);
            decouple(h, active);
            if (!analyzed) {
                ldlt.analyzePattern(h);
                analyzed = true;
            }
            ldlt.factorize(h);
            if (ldlt.info() == Eigen::Success && ldlt.vectorD().minCoeff() > 0.0) {
                d = -ldlt.solve(g);
                break;
            }
        }
        double free_slope = 0.0;  // sum over free coordinates of g_i d_i
        if (d.size() == n) {
            for (Index i = 0; i < n; ++i) {
                if (!active[static_cast<std::size_t>(i)]) free_slope += g[i] * d[i];
            }
        }
        if (d.size() != n || !d.allFinite() || !(free_slope < 0.0)) {
            d = -g;
            free_slope = 0.0;
            for (Index i = 0; i < n; ++i) {
                if (!active[static_cast<std::size_t>(i)]) free_slope += g[i] * d[i];
            }
        }

        double alpha = 1.0;
        bool accepted = false;
        Vec trial(n);
        while (alpha >= opts.min_step) {
            trial = x + alpha * d;
            project(trial, bounded);
            const Vec step = trial - x;
            double model = -alpha * free_slope;
            for (Index i : bounded) {
                if (active[static_cast<std::size_t>(i)]) model += g[i] * (x[i] - trial[i]);
            }
            const double de = f.increment(x, step);
            if (std::isfinite(de) && de <= -opts.sufficient_decrease * model && de <= 0.0) {
                x = trial;
                value += de;
                if (opts.record_trace) res.increments.push_back(de);
                accepted = true;
                break;
            }
            alpha *= opts.backtrack;
        }
        if (!accepted) {
            res.message = "line search stalled";
            res.iterations = iter + 1;
            res.projected_gradient_norm = projected_gradient(x, f.gradient(x), bounded).norm();
            break;
        }
        if (value < opts.energy_floor) {
            res.message = "energy below floor (divergence)";
            res.iterations = iter + 1;
            break;
        }
    }
    res.value = f.value(x);
    return res;
}

}  // namespace contactfem
