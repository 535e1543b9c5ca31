#pragma once

// Structured triangulations of an axis-aligned rectangle with tagged
// boundary segments (Dirichlet / Neumann / Contact).

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace contactfem {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

enum class BoundaryTag { Dirichlet, Neumann, Contact };

std::string_view to_string(BoundaryTag tag);
BoundaryTag parse_boundary_tag(std::string_view text);

struct BoundaryEdge {
    std::size_t a = 0;
    std::size_t b = 0;
    BoundaryTag tag = BoundaryTag::Neumann;
};

struct Mesh {
    std::vector<Point2> nodes;
    std::vector<std::array<std::size_t, 3>> triangles;  // counterclockwise
    std::vector<BoundaryEdge> boundary_edges;
    double h = 0.0;

    // Extents of the rectangle.
    double width = 0.0;
    double height = 0.0;

    double signed_area(std::size_t tri) const;
    std::size_t count_edges(BoundaryTag tag) const;
};

/// Structured right-triangle mesh of [0,width] x [0,height] with step h.
/// Each grid cell is split along its (i,j)-(i+1,j+1) diagonal. Boundary edges
/// are produced untagged (Neumann); call tag_boundary() to assign tags.
Mesh generate_rect_mesh(double width, double height, double h);

/// Left edge (x = 0) -> Dirichlet, bottom edge (y = 0) -> Contact, rest Neumann.
Mesh tag_boundary(Mesh mesh);

/// Lumped (trapezoid) quadrature weights of the contact boundary: half the
/// total length of contact edges adjacent to each node.
std::map<std::size_t, double> contact_weights(const Mesh& mesh);

/// Ratio circumradius / inradius of a triangle.
double shape_ratio(const Mesh& mesh, std::size_t tri);

void write_mesh(std::ostream& os, const Mesh& mesh);
Mesh read_mesh(std::istream& is);

}  // namespace contactfem
