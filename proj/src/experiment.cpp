#include "contactfem/experiment.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace contactfem {

std::vector<double> default_lambda_grid() {
    std::vector<double> grid;
    for (int k = 0; k <= 16; ++k) grid.push_back(std::pow(10.0, -0.5 * k));
    return grid;
}

void ExperimentConfig::validate() const {
    if (!(width > 0.0 && height > 0.0 && h > 0.0)) throw std::invalid_argument("config: geometry must be positive");
    material.validate();
    contactfem::validate(law);
    if (!(friction_bound >= 0.0)) throw std::invalid_argument("config: friction bound must be nonnegative");
    if (lambdas.empty()) throw std::invalid_argument("config: lambda grid is empty");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > 0.0) || !std::isfinite(lambdas[i])) throw std::invalid_argument("config: lambdas must be positive");
        if (i > 0 && !(lambdas[i] < lambdas[i - 1])) {
            throw std::invalid_argument("config: lambda grid must be strictly decreasing");
        }
    }
    if (!(rho > 0.0)) throw std::invalid_argument("config: rho must be positive");
    solver.validate();
    if (random_probes < 0) throw std::invalid_argument("config: probe count must be nonnegative");
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& key, const std::string& text) {
    // Accepts plain reals and simple fractions such as 1/32.
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        return parse_number(key, trim(text.substr(0, slash))) / parse_number(key, trim(text.substr(slash + 1)));
    }
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
        throw std::invalid_argument("config: key '" + key + "' expects a number, got '" + text + "'");
    }
    return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::string normalized = text;
    std::replace(normalized.begin(), normalized.end(), ',', ' ');
    std::istringstream is(normalized);
    std::vector<double> out;
    std::string tok;
    while (is >> tok) out.push_back(parse_number(key, tok));
    return out;
}

Vector2 parse_vector2(const std::string& key, const std::string& text) {
    const auto v = parse_list(key, text);
    if (v.size() != 2) throw std::invalid_argument("config: key '" + key + "' expects two numbers");
    return {v[0], v[1]};
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw std::invalid_argument("config: key '" + key + "' expects true/false");
}

int parse_int(const std::string& key, const std::string& text) {
    const double v = parse_number(key, text);
    if (v != std::floor(v) || std::abs(v) > std::numeric_limits<int>::max()) {
        throw std::invalid_argument("config: key '" + key + "' expects an integer");
    }
    return static_cast<int>(v);
}

}  // namespace

ExperimentConfig parse_config(std::istream& is) {
    ExperimentConfig cfg;
    std::string law_kind = "softening";
    std::optional<double> law_a, law_b, law_l;

    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Setter> setters{
        {"geometry.width", [&](auto& k, auto& v) { cfg.width = parse_number(k, v); }},
        {"geometry.height", [&](auto& k, auto& v) { cfg.height = parse_number(k, v); }},
        {"geometry.h", [&](auto& k, auto& v) { cfg.h = parse_number(k, v); }},
        {"material.E", [&](auto& k, auto& v) { cfg.material.E = parse_number(k, v); }},
        {"material.kappa", [&](auto& k, auto& v) { cfg.material.kappa = parse_number(k, v); }},
        {"loads.f0", [&](auto& k, auto& v) { cfg.body_force = parse_vector2(k, v); }},
        {"loads.f2", [&](auto& k, auto& v) { cfg.traction = parse_vector2(k, v); }},
        {"friction.Fb", [&](auto& k, auto& v) { cfg.friction_bound = parse_number(k, v); }},
        {"law", [&](auto&, auto& v) { law_kind = v; }},
        {"law.a", [&](auto& k, auto& v) { law_a = parse_number(k, v); }},
        {"law.b", [&](auto& k, auto& v) { law_b = parse_number(k, v); }},
        {"law.l", [&](auto& k, auto& v) { law_l = parse_number(k, v); }},
        {"sweep.lambdas", [&](auto& k, auto& v) { cfg.lambdas = parse_list(k, v); }},
        {"sweep.continuation", [&](auto& k, auto& v) { cfg.continuation = parse_bool(k, v); }},
        {"solver.rho", [&](auto& k, auto& v) { cfg.rho = parse_number(k, v); }},
        {"solver.grad_tol", [&](auto& k, auto& v) { cfg.solver.grad_tol = parse_number(k, v); }},
        {"solver.max_iters", [&](auto& k, auto& v) { cfg.solver.max_iters = parse_int(k, v); }},
        {"criterion.probes", [&](auto& k, auto& v) { cfg.random_probes = parse_int(k, v); }},
        {"seed", [&](auto& k, auto& v) { cfg.seed = static_cast<std::uint64_t>(parse_int(k, v)); }},
        {"output.dir", [&](auto&, auto& v) { cfg.output_dir = v; }},
    };

    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
        it->second(key, value);
    }

    if (law_kind == "linear") {
        cfg.law = LinearCompliance{law_a.value_or(1.0)};
    } else if (law_kind == "plastic") {
        cfg.law = PlasticCompliance{law_a.value_or(1.0), law_l.value_or(0.5)};
    } else if (law_kind == "softening") {
        cfg.law = SofteningCompliance{law_a.value_or(0.1), law_b.value_or(0.1)};
    } else {
        throw std::invalid_argument("config: law must be linear, plastic or softening, got '" + law_kind + "'");
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    return parse_config(in);
}

ProblemSetup build_problem(const ExperimentConfig& config) {
    config.validate();
    ProblemSetup setup;
    setup.mesh = tag_boundary(generate_rect_mesh(config.width, config.height, config.h));
    setup.system = std::make_shared<const DiscreteSystem>(
        assemble(setup.mesh, config.material, config.body_force, config.traction, config.friction_bound));
    return setup;
}

ComplementarityReport check_complementarity(const DiscreteSystem& system, const Vec& u) {
    ComplementarityReport rep;
    rep.load_norm = system.load.norm();
    rep.max_normal_displacement = -std::numeric_limits<double>::infinity();
    rep.max_normal_reaction = -std::numeric_limits<double>::infinity();
    const auto reactions = normal_reactions(system, u);
    for (std::size_t i = 0; i < system.contact.size(); ++i) {
        const double un = system.normal_displacement(u, i) + 0.0;  // drop the sign of zero
        rep.max_normal_displacement = std::max(rep.max_normal_displacement, un);
        rep.max_normal_reaction = std::max(rep.max_normal_reaction, reactions[i]);
        rep.max_abs_product = std::max(rep.max_abs_product, std::abs(reactions[i] * un));
        if (un == 0.0) ++rep.active_nodes;
    }
    if (system.contact.empty()) rep.max_normal_displacement = rep.max_normal_reaction = 0.0;
    rep.pass = rep.max_normal_displacement <= 1e-12 && rep.max_normal_reaction <= 1e-6 * rep.load_norm &&
               rep.max_abs_product <= 1e-8 * rep.load_norm;
    return rep;
}

SignoriniResult run_signorini(const ExperimentConfig& config) {
    SignoriniResult out;
    out.setup = build_problem(config);
    out.report = solve_constrained({out.setup.system, config.rho}, config.solver);
    out.complementarity = check_complementarity(*out.setup.system, out.report.solution);
    return out;
}

SolveReport run_penalty(const ExperimentConfig& config, const ProblemSetup& setup, double lambda) {
    return solve_penalty({setup.system, config.law, lambda, config.rho}, config.solver);
}

SweepResult run_sweep(const ExperimentConfig& config) {
    const ProblemSetup setup = build_problem(config);
    const DiscreteSystem& sys = *setup.system;

    SweepResult res;
    res.solver_tolerance = config.solver.tolerance(sys);
    res.trace = estimate_trace_constant(sys, setup.mesh);
    res.smallness = check_smallness(sys, res.trace.d0, config.material);

    const SolveReport ref = solve_constrained({setup.system, config.rho}, config.solver);
    res.reference_iterations = ref.iterations;
    res.reference_energy = ref.energy;
    res.reference_converged = ref.converged;
    res.reference_v_norm = sys.v_norm(ref.solution);
    res.complementarity = check_complementarity(sys, ref.solution);
    res.reference_eps_residual =
        vi_residual(sys, ref.solution, make_probes(sys, ref.solution, ref.solution, config.random_probes, config.seed));
    res.reference_dist_to_k = distance_to_K(sys, ref.solution).distance;

    Vec previous = Vec::Zero(sys.size());
    for (std::size_t k = 0; k < config.lambdas.size(); ++k) {
        const double lambda = config.lambdas[k];
        SolveOptions opts = config.solver;
        if (config.continuation) opts.warm_start = previous;
        const SolveReport r = solve_penalty({setup.system, config.law, lambda, config.rho}, opts);
        previous = r.solution;

        SweepRow row;
        row.lambda = lambda;
        row.converged = r.converged;
        row.iterations = r.iterations;
        row.energy = r.energy;
        row.error_v_abs = sys.v_norm(r.solution - ref.solution);
        row.error_v_rel = res.reference_v_norm > 0.0 ? row.error_v_abs / res.reference_v_norm : row.error_v_abs;
        row.max_penetration = max_penetration(sys, r.solution);
        row.eps_residual = vi_residual(
            sys, r.solution, make_probes(sys, r.solution, ref.solution, config.random_probes, config.seed + k + 1));
        row.dist_to_k = distance_to_K(sys, r.solution).distance;
        res.max_solution_v_norm = std::max(res.max_solution_v_norm, sys.v_norm(r.solution));
        res.rows.push_back(row);
    }
    return res;
}

std::optional<double> knee_lambda(const std::vector<SweepRow>& rows) {
    if (rows.empty()) return std::nullopt;
    const double half = 0.5 * rows.front().error_v_rel;
    for (const auto& r : rows) {
        if (r.error_v_rel < half) return r.lambda;
    }
    return std::nullopt;
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << kSweepCsvHeader << '\n';
    for (const auto& r : rows) {
        os << fmt_double(r.lambda) << ',' << (r.converged ? 1 : 0) << ',' << r.iterations << ',' << fmt_double(r.energy)
           << ',' << fmt_double(r.error_v_abs) << ',' << fmt_double(r.error_v_rel) << ','
           << fmt_double(r.max_penetration) << ',' << fmt_double(r.eps_residual) << ',' << fmt_double(r.dist_to_k)
           << '\n';
    }
}

std::vector<SweepRow> read_sweep_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || trim(line) != kSweepCsvHeader) throw std::runtime_error("sweep csv: bad header");
    std::vector<SweepRow> rows;
    while (std::getline(is, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> f;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) f.push_back(trim(cell));
        if (f.size() != 9) throw std::runtime_error("sweep csv: expected 9 fields, got " + std::to_string(f.size()));
        SweepRow r;
        r.lambda = parse_number("lambda", f[0]);
        r.converged = parse_bool("converged", f[1]);
        r.iterations = parse_int("iterations", f[2]);
        r.energy = parse_number("energy", f[3]);
        r.error_v_abs = parse_number("error_V_abs", f[4]);
        r.error_v_rel = parse_number("error_V_rel", f[5]);
        r.max_penetration = parse_number("max_penetration", f[6]);
        r.eps_residual = parse_number("eps_residual", f[7]);
        r.dist_to_k = parse_number("dist_to_K", f[8]);
        rows.push_back(r);
    }
    return rows;
}

void write_sweep_summary(std::ostream& os, const ExperimentConfig& config, const SweepResult& result) {
    const auto knee = knee_lambda(result.rows);
    os << "law: " << describe(config.law) << '\n';
    os << "h: " << fmt_double(config.h) << '\n';
    os << "solver_tolerance: " << fmt_double(result.solver_tolerance) << '\n';
    os << "reference_converged: " << (result.reference_converged ? "true" : "false") << '\n';
    os << "reference_iterations: " << result.reference_iterations << '\n';
    os << "reference_energy: " << fmt_double(result.reference_energy) << '\n';
    os << "reference_v_norm: " << fmt_double(result.reference_v_norm) << '\n';
    os << "reference_eps_residual: " << fmt_double(result.reference_eps_residual) << '\n';
    os << "reference_dist_to_K: " << fmt_double(result.reference_dist_to_k) << '\n';
    os << "complementarity_max_u_nu: " << fmt_double(result.complementarity.max_normal_displacement) << '\n';
    os << "complementarity_max_product: " << fmt_double(result.complementarity.max_abs_product) << '\n';
    os << "complementarity: " << (result.complementarity.pass ? "pass" : "fail") << '\n';
    os << "trace_constant_d0: " << fmt_double(result.trace.d0) << '\n';
    os << "trace_constant_converged: " << (result.trace.converged ? "true" : "false") << '\n';
    os << "smallness_lhs: " << fmt_double(result.smallness.lhs) << '\n';
    os << "smallness_m_F: " << fmt_double(result.smallness.monotonicity) << '\n';
    os << "smallness: " << (result.smallness.pass ? "pass" : "fail") << '\n';
    os << "max_solution_v_norm: " << fmt_double(result.max_solution_v_norm) << '\n';
    os << "knee_lambda: " << (knee ? fmt_double(*knee) : std::string("none")) << '\n';
}

void write_displacement(std::ostream& os, const Vec& full_displacement) {
    if (full_displacement.size() % 2 != 0) throw std::invalid_argument("displacement: odd dof count");
    const Index n = full_displacement.size() / 2;
    os << "displacement v1\n";
    os << "nodes " << n << '\n';
    for (Index i = 0; i < n; ++i) os << fmt_double(full_displacement[2 * i]) << ' ' << fmt_double(full_displacement[2 * i + 1]) << '\n';
}

Vec read_displacement(std::istream& is) {
    std::string line;
    while (std::getline(is, line) && trim(line).empty()) {
    }
    if (trim(line) != "displacement v1") throw std::runtime_error("displacement file: bad header");
    std::string word;
    long n = 0;
    if (!(is >> word >> n) || word != "nodes" || n < 0) throw std::runtime_error("displacement file: expected 'nodes N'");
    Vec u(2 * n);
    for (long i = 0; i < 2 * n; ++i) {
        if (!(is >> u[i])) throw std::runtime_error("displacement file: truncated");
    }
    return u;
}

CriterionReport check_criterion(const ExperimentConfig& config, const Vec& full_displacement, int probe_count) {
    const ProblemSetup setup = build_problem(config);
    const DiscreteSystem& sys = *setup.system;
    if (full_displacement.size() != static_cast<Index>(2 * sys.node_count)) {
        throw std::invalid_argument("criterion: displacement has " + std::to_string(full_displacement.size() / 2) +
                                    " nodes, mesh has " + std::to_string(sys.node_count));
    }
    const Vec u = sys.restrict(full_displacement);
    const SolveReport ref = solve_constrained({setup.system, config.rho}, config.solver);

    CriterionReport rep;
    rep.solver_tolerance = config.solver.tolerance(sys);
    rep.eps_residual = vi_residual(sys, u, make_probes(sys, u, ref.solution, probe_count, config.seed));
    const DistanceResult d = distance_to_K(sys, u);
    rep.dist_to_k = d.distance;
    rep.dist_converged = d.converged;
    return rep;
}

}  // namespace contactfem
