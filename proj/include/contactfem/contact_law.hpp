#pragma once

// Normal-compliance laws p(r) of a deformable foundation, their potentials
// j(r) = int_0^r p(s) ds and generalized directional derivatives.
//
// Three closed-form variants:
//   linear     p(r) = a r_+
//   plastic    p(r) = a r on [0,l], a l beyond l
//   softening  p(r) = (a + e^{-b})/b r on [0,b], e^{-r} + a beyond b
// All of them are continuous and vanish for r < 0, so j is C^1 and regular.

#include <string>
#include <variant>

namespace contactfem {

struct LinearCompliance {
    double a = 1.0;
};

struct PlasticCompliance {
    double a = 1.0;
    double l = 0.5;
};

struct SofteningCompliance {
    double a = 0.1;
    double b = 0.1;
};

using ContactLaw = std::variant<LinearCompliance, PlasticCompliance, SofteningCompliance>;

void validate(const ContactLaw& law);
std::string describe(const ContactLaw& law);

/// Normal pressure before the 1/lambda scaling.
double pressure(const ContactLaw& law, double r);
/// Right derivative of pressure(); used as curvature by the solvers.
double pressure_slope(const ContactLaw& law, double r);
/// Potential, closed-form antiderivative of pressure() from 0.
double potential(const ContactLaw& law, double r);
/// potential(r + dr) - potential(r) without cancellation.
double potential_increment(const ContactLaw& law, double r, double dr);
/// Directional derivative j0(r; s) = p(r) s.
double directional_derivative(const ContactLaw& law, double r, double s);

struct ConditionGrid {
    double radius = 5.0;  // r in [-R, R], s in [-R, 0]
    double step = 1e-3;
};

struct ConditionReport {
    // max over grid of j0(r; s - r); must be <= 0
    double one_sided_margin = 0.0;
    bool one_sided_holds = false;
    // number of grid r > 0 at which j0(r; s - r) >= 0 for all grid s <= 0
    long implication_violations = 0;
    bool implication_holds = false;
    // |p(r)| <= c0 + c1 |r|
    double growth_c0 = 0.0;
    double growth_c1 = 0.0;
    double growth_margin = 0.0;
    // j0(r; -r) <= d (1 + |r|)
    double dissipation_d = 0.0;
    double dissipation_margin = 0.0;

    bool all_hold() const {
        return one_sided_holds && implication_holds && growth_margin <= 0.0 && dissipation_margin <= 0.0;
    }
};

ConditionReport verify_conditions(const ContactLaw& law, const ConditionGrid& grid = {});

}  // namespace contactfem
