#include "contactfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace contactfem {

std::string_view to_string(BoundaryTag tag) {
    switch (tag) {
        case BoundaryTag::Dirichlet: return "dirichlet";
        case BoundaryTag::Neumann: return "neumann";
        case BoundaryTag::Contact: return "contact";
    }
    return "neumann";
}

BoundaryTag parse_boundary_tag(std::string_view text) {
    if (text == "dirichlet") return BoundaryTag::Dirichlet;
    if (text == "neumann") return BoundaryTag::Neumann;
    if (text == "contact") return BoundaryTag::Contact;
    throw std::invalid_argument("unknown boundary tag '" + std::string(text) + "'");
}

double Mesh::signed_area(std::size_t tri) const {
    const auto& t = triangles.at(tri);
    const Point2& p0 = nodes[t[0]];
    const Point2& p1 = nodes[t[1]];
    const Point2& p2 = nodes[t[2]];
    return 0.5 * ((p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y));
}

std::size_t Mesh::count_edges(BoundaryTag tag) const {
    return static_cast<std::size_t>(std::count_if(boundary_edges.begin(), boundary_edges.end(),
                                                  [tag](const BoundaryEdge& e) { return e.tag == tag; }));
}

namespace {

std::size_t cells_along(double length, double h, const char* axis) {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw std::invalid_argument(std::string("mesh ") + axis + " extent must be positive");
    }
    const double ratio = length / h;
    const double n = std::round(ratio);
    if (n < 1.0 || std::abs(ratio - n) > 1e-9 * std::max(1.0, n)) {
        std::ostringstream msg;
        msg << "mesh " << axis << " extent " << length << " is not an integer multiple of h = " << h;
        throw std::invalid_argument(msg.str());
    }
    return static_cast<std::size_t>(n);
}

}  // namespace

Mesh generate_rect_mesh(double width, double height, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("mesh step h must be positive");
    const std::size_t nx = cells_along(width, h, "width (x axis)");
    const std::size_t ny = cells_along(height, h, "height (y axis)");

    Mesh mesh;
    mesh.h = h;
    mesh.width = width;
    mesh.height = height;
    mesh.nodes.reserve((nx + 1) * (ny + 1));
    for (std::size_t j = 0; j <= ny; ++j) {
        for (std::size_t i = 0; i <= nx; ++i) {
            mesh.nodes.push_back({width * static_cast<double>(i) / static_cast<double>(nx),
                                  height * static_cast<double>(j) / static_cast<double>(ny)});
        }
    }
    auto id = [nx](std::size_t i, std::size_t j) { return i + j * (nx + 1); };

    mesh.triangles.reserve(2 * nx * ny);
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t n0 = id(i, j), n1 = id(i + 1, j), n2 = id(i + 1, j + 1), n3 = id(i, j + 1);
            mesh.triangles.push_back({n0, n1, n2});
            mesh.triangles.push_back({n0, n2, n3});
        }
    }

    // Boundary walked counterclockwise: bottom, right, top, left.
    for (std::size_t i = 0; i < nx; ++i) mesh.boundary_edges.push_back({id(i, 0), id(i + 1, 0)});
    for (std::size_t j = 0; j < ny; ++j) mesh.boundary_edges.push_back({id(nx, j), id(nx, j + 1)});
    for (std::size_t i = nx; i > 0; --i) mesh.boundary_edges.push_back({id(i, ny), id(i - 1, ny)});
    for (std::size_t j = ny; j > 0; --j) mesh.boundary_edges.push_back({id(0, j), id(0, j - 1)});
    return mesh;
}

Mesh tag_boundary(Mesh mesh) {
    const double tol = 1e-12 * std::max(1.0, mesh.h);
    for (auto& e : mesh.boundary_edges) {
        const Point2& a = mesh.nodes[e.a];
        const Point2& b = mesh.nodes[e.b];
        if (std::abs(a.x) <= tol && std::abs(b.x) <= tol) {
            e.tag = BoundaryTag::Dirichlet;
        } else if (std::abs(a.y) <= tol && std::abs(b.y) <= tol) {
            e.tag = BoundaryTag::Contact;
        } else {
            e.tag = BoundaryTag::Neumann;
        }
    }
    return mesh;
}

std::map<std::size_t, double> contact_weights(const Mesh& mesh) {
    std::map<std::size_t, double> weights;
    for (const auto& e : mesh.boundary_edges) {
        if (e.tag != BoundaryTag::Contact) continue;
        const double len = std::hypot(mesh.nodes[e.b].x - mesh.nodes[e.a].x, mesh.nodes[e.b].y - mesh.nodes[e.a].y);
        weights[e.a] += 0.5 * len;
        weights[e.b] += 0.5 * len;
    }
    return weights;
}

double shape_ratio(const Mesh& mesh, std::size_t tri) {
    const auto& t = mesh.triangles.at(tri);
    auto dist = [&](std::size_t p, std::size_t q) {
        return std::hypot(mesh.nodes[p].x - mesh.nodes[q].x, mesh.nodes[p].y - mesh.nodes[q].y);
    };
    const double a = dist(t[1], t[2]), b = dist(t[0], t[2]), c = dist(t[0], t[1]);
    const double area = std::abs(mesh.signed_area(tri));
    const double circumradius = a * b * c / (4.0 * area);
    const double inradius = 2.0 * area / (a + b + c);
    return circumradius / inradius;
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
    const auto old_precision = os.precision(std::numeric_limits<double>::max_digits10);
    os << "mesh 2d v1\n";
    os << "nodes " << mesh.nodes.size() << '\n';
    for (const auto& p : mesh.nodes) os << p.x << ' ' << p.y << '\n';
    os << "triangles " << mesh.triangles.size() << '\n';
    for (const auto& t : mesh.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    os << "edges " << mesh.boundary_edges.size() << '\n';
    for (const auto& e : mesh.boundary_edges) os << e.a << ' ' << e.b << ' ' << to_string(e.tag) << '\n';
    os.precision(old_precision);
}

namespace {

std::size_t read_section(std::istream& is, const std::string& keyword) {
    std::string word;
    std::size_t count = 0;
    if (!(is >> word >> count) || word != keyword) {
        throw std::runtime_error("mesh file: expected '" + keyword + " <count>'");
    }
    return count;
}

}  // namespace

Mesh read_mesh(std::istream& is) {
    std::string line;
    while (std::getline(is, line) && line.empty()) {
    }
    if (line != "mesh 2d v1") throw std::runtime_error("mesh file: bad header '" + line + "'");

    Mesh mesh;
    const std::size_t n_nodes = read_section(is, "nodes");
    mesh.nodes.resize(n_nodes);
    for (auto& p : mesh.nodes) {
        if (!(is >> p.x >> p.y)) throw std::runtime_error("mesh file: truncated node list");
    }
    const std::size_t n_tris = read_section(is, "triangles");
    mesh.triangles.resize(n_tris);
    for (auto& t : mesh.triangles) {
        if (!(is >> t[0] >> t[1] >> t[2])) throw std::runtime_error("mesh file: truncated triangle list");
        for (std::size_t k : t) {
            if (k >= n_nodes) throw std::runtime_error("mesh file: triangle references missing node");
        }
    }
    const std::size_t n_edges = read_section(is, "edges");
    mesh.boundary_edges.resize(n_edges);
    for (auto& e : mesh.boundary_edges) {
        std::string tag;
        if (!(is >> e.a >> e.b >> tag)) throw std::runtime_error("mesh file: truncated edge list");
        if (e.a >= n_nodes || e.b >= n_nodes) throw std::runtime_error("mesh file: edge references missing node");
        e.tag = parse_boundary_tag(tag);
    }

    double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
    if (!mesh.nodes.empty()) {
        min_x = max_x = mesh.nodes[0].x;
        min_y = max_y = mesh.nodes[0].y;
    }
    for (const auto& p : mesh.nodes) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    mesh.width = max_x - min_x;
    mesh.height = max_y - min_y;
    double h = 0.0;
    for (const auto& e : mesh.boundary_edges) {
        h = std::max(h, std::hypot(mesh.nodes[e.b].x - mesh.nodes[e.a].x, mesh.nodes[e.b].y - mesh.nodes[e.a].y));
    }
    mesh.h = h;
    return mesh;
}

}  // namespace contactfem
