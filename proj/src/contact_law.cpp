#include "contactfem/contact_law.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace contactfem {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// One smooth piece of a law on an interval [x1, x2] of known width.
enum class Piece { Zero, Linear, Constant, ExpTail };

struct PieceSpec {
    Piece kind = Piece::Zero;
    double coeff = 0.0;  // slope for Linear, level for Constant, a for ExpTail
};

PieceSpec piece_at(const ContactLaw& law, double r) {
    if (r < 0.0) return {Piece::Zero, 0.0};
    return std::visit(overloaded{
                          [](const LinearCompliance& l) { return PieceSpec{Piece::Linear, l.a}; },
                          [r](const PlasticCompliance& l) {
                              return r <= l.l ? PieceSpec{Piece::Linear, l.a} : PieceSpec{Piece::Constant, l.a * l.l};
                          },
                          [r](const SofteningCompliance& l) {
                              return r <= l.b ? PieceSpec{Piece::Linear, (l.a + std::exp(-l.b)) / l.b}
                                              : PieceSpec{Piece::ExpTail, l.a};
                          },
                      },
                      law);
}

// Break points of the piecewise definition, ascending.
std::array<double, 2> break_points(const ContactLaw& law) {
    const double none = std::numeric_limits<double>::infinity();
    return std::visit(overloaded{
                          [none](const LinearCompliance&) { return std::array<double, 2>{0.0, none}; },
                          [](const PlasticCompliance& l) { return std::array<double, 2>{0.0, l.l}; },
                          [](const SofteningCompliance& l) { return std::array<double, 2>{0.0, l.b}; },
                      },
                      law);
}

double piece_integral(const PieceSpec& p, double x1, double x2, double width) {
    switch (p.kind) {
        case Piece::Zero: return 0.0;
        case Piece::Linear: return p.coeff * width * 0.5 * (x1 + x2);
        case Piece::Constant: return p.coeff * width;
        case Piece::ExpTail: return p.coeff * width - std::exp(-x1) * std::expm1(-width);
    }
    return 0.0;
}

}  // namespace

void validate(const ContactLaw& law) {
    std::visit(overloaded{
                   [](const LinearCompliance& l) {
                       if (!(l.a >= 0.0)) throw std::invalid_argument("linear law: a must be nonnegative");
                   },
                   [](const PlasticCompliance& l) {
                       if (!(l.a >= 0.0)) throw std::invalid_argument("plastic law: a must be nonnegative");
                       if (!(l.l > 0.0)) throw std::invalid_argument("plastic law: l must be positive");
                   },
                   [](const SofteningCompliance& l) {
                       if (!(l.a >= 0.0)) throw std::invalid_argument("softening law: a must be nonnegative");
                       if (!(l.b > 0.0)) throw std::invalid_argument("softening law: b must be positive");
                   },
               },
               law);
}

std::string describe(const ContactLaw& law) {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const LinearCompliance& l) { os << "linear(a=" << l.a << ")"; },
                   [&](const PlasticCompliance& l) { os << "plastic(a=" << l.a << ", l=" << l.l << ")"; },
                   [&](const SofteningCompliance& l) { os << "softening(a=" << l.a << ", b=" << l.b << ")"; },
               },
               law);
    return os.str();
}

double pressure(const ContactLaw& law, double r) {
    const PieceSpec p = piece_at(law, r);
    switch (p.kind) {
        case Piece::Zero: return 0.0;
        case Piece::Linear: return p.coeff * r;
        case Piece::Constant: return p.coeff;
        case Piece::ExpTail: return std::exp(-r) + p.coeff;
    }
    return 0.0;
}

double pressure_slope(const ContactLaw& law, double r) {
    const PieceSpec p = piece_at(law, r);
    switch (p.kind) {
        case Piece::Zero: return 0.0;
        case Piece::Linear: return p.coeff;
        case Piece::Constant: return 0.0;
        case Piece::ExpTail: return -std::exp(-r);
    }
    return 0.0;
}

double potential(const ContactLaw& law, double r) {
    if (r <= 0.0) return 0.0;
    return std::visit(overloaded{
                          [r](const LinearCompliance& l) { return 0.5 * l.a * r * r; },
                          [r](const PlasticCompliance& l) {
                              return r <= l.l ? 0.5 * l.a * r * r : l.a * l.l * r - 0.5 * l.a * l.l * l.l;
                          },
                          [r](const SofteningCompliance& l) {
                              const double eb = std::exp(-l.b);
                              if (r <= l.b) return (l.a + eb) / (2.0 * l.b) * r * r;
                              return l.a * r - std::exp(-r) + 0.5 * ((l.b + 2.0) * eb - l.a * l.b);
                          },
                      },
                      law);
}

double potential_increment(const ContactLaw& law, double r, double dr) {
    if (dr == 0.0) return 0.0;
    const double lo = dr > 0.0 ? r : r + dr;
    const double hi = dr > 0.0 ? r + dr : r;
    const double sign = dr > 0.0 ? 1.0 : -1.0;

    std::array<double, 4> cuts{};
    std::size_t n = 0;
    cuts[n++] = lo;
    for (double bp : break_points(law)) {
        if (bp > lo && bp < hi) cuts[n++] = bp;
    }
    cuts[n++] = hi;

    if (n == 2) {
        const PieceSpec p = piece_at(law, lo + 0.5 * std::abs(dr));
        return sign * piece_integral(p, lo, hi, std::abs(dr));
    }
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double x1 = cuts[k], x2 = cuts[k + 1];
        total += piece_integral(piece_at(law, 0.5 * (x1 + x2)), x1, x2, x2 - x1);
    }
    return sign * total;
}

double directional_derivative(const ContactLaw& law, double r, double s) { return pressure(law, r) * s; }

ConditionReport verify_conditions(const ContactLaw& law, const ConditionGrid& grid) {
    validate(law);
    if (!(grid.radius >= 0.0) || !(grid.step > 0.0)) throw std::invalid_argument("verify_conditions: bad grid");
    const long nr = static_cast<long>(std::llround(2.0 * grid.radius / grid.step));
    const long ns = static_cast<long>(std::llround(grid.radius / grid.step));
    auto r_at = [&](long i) { return -grid.radius + static_cast<double>(i) * grid.step; };
    auto s_at = [&](long k) { return -grid.radius + static_cast<double>(k) * grid.step; };

    ConditionReport rep;
    rep.one_sided_margin = -std::numeric_limits<double>::infinity();
    for (long i = 0; i <= nr; ++i) {
        const double r = nr == 0 ? 0.0 : r_at(i);
        double min_over_s = std::numeric_limits<double>::infinity();
        for (long k = 0; k <= ns; ++k) {
            const double s = ns == 0 ? 0.0 : s_at(k);
            const double v = directional_derivative(law, r, s - r);
            rep.one_sided_margin = std::max(rep.one_sided_margin, v);
            min_over_s = std::min(min_over_s, v);
        }
        if (min_over_s >= 0.0 && r > 0.0) ++rep.implication_violations;
    }
    rep.one_sided_holds = rep.one_sided_margin <= 0.0;
    rep.implication_holds = rep.implication_violations == 0;

    // Growth: asymptotic slope from the outer half of each tail, then the
    // smallest intercept covering the whole grid.
    const double R = grid.radius;
    double c1 = 0.0;
    if (R > 0.0) {
        c1 = std::max({0.0, (std::abs(pressure(law, R)) - std::abs(pressure(law, 0.5 * R))) / (0.5 * R),
                       (std::abs(pressure(law, -R)) - std::abs(pressure(law, -0.5 * R))) / (0.5 * R)});
    }
    double c0 = 0.0;
    double d = 0.0;
    for (long i = 0; i <= nr; ++i) {
        const double r = nr == 0 ? 0.0 : r_at(i);
        c0 = std::max(c0, std::abs(pressure(law, r)) - c1 * std::abs(r));
        d = std::max(d, directional_derivative(law, r, -r) / (1.0 + std::abs(r)));
    }
    rep.growth_c0 = c0;
    rep.growth_c1 = c1;
    rep.dissipation_d = d;
    rep.growth_margin = -std::numeric_limits<double>::infinity();
    rep.dissipation_margin = -std::numeric_limits<double>::infinity();
    for (long i = 0; i <= nr; ++i) {
        const double r = nr == 0 ? 0.0 : r_at(i);
        rep.growth_margin = std::max(rep.growth_margin, std::abs(pressure(law, r)) - (c0 + c1 * std::abs(r)));
        rep.dissipation_margin =
            std::max(rep.dissipation_margin, directional_derivative(law, r, -r) - d * (1.0 + std::abs(r)));
    }
    return rep;
}

}  // namespace contactfem
