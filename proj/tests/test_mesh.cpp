#include <doctest.h>

#include <cmath>
#include <sstream>

#include "contactfem/mesh.hpp"

using namespace contactfem;

TEST_CASE("rectangle mesh counts") {
    const Mesh one = generate_rect_mesh(1, 1, 1);
    CHECK(one.nodes.size() == 4);
    CHECK(one.triangles.size() == 2);

    const Mesh half = generate_rect_mesh(1, 1, 0.5);
    CHECK(half.nodes.size() == 9);
    CHECK(half.triangles.size() == 8);

    const Mesh wide = generate_rect_mesh(2, 1, 0.5);
    CHECK(wide.nodes.size() == 15);
    CHECK(wide.triangles.size() == 16);

    const Mesh fine = generate_rect_mesh(2, 1, 1.0 / 32);
    CHECK(fine.nodes.size() == 65 * 33);
    CHECK(fine.triangles.size() == 2 * 64 * 32);
    CHECK(fine.boundary_edges.size() == 2 * (64 + 32));
}

TEST_CASE("mesh rejects bad arguments") {
    CHECK_THROWS_AS(generate_rect_mesh(1, 1, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(generate_rect_mesh(-1, 1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(generate_rect_mesh(1, 1, 0), std::invalid_argument);
    CHECK_NOTHROW(generate_rect_mesh(2, 1, 1.0 / 3));
}

TEST_CASE("triangles are counterclockwise and tile the rectangle") {
    const Mesh m = generate_rect_mesh(2, 1, 1.0 / 8);
    double total = 0.0;
    for (std::size_t t = 0; t < m.triangles.size(); ++t) {
        CHECK(m.signed_area(t) > 0.0);
        total += m.signed_area(t);
    }
    CHECK(total == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("shape ratio is uniform for right isosceles triangles") {
    const Mesh m = generate_rect_mesh(2, 1, 1.0 / 4);
    // circumradius sqrt(2)/2 h, inradius (2 - sqrt(2))/2 h
    const double expected = std::sqrt(2.0) / (2.0 - std::sqrt(2.0));
    for (std::size_t t = 0; t < m.triangles.size(); ++t) CHECK(shape_ratio(m, t) == doctest::Approx(expected));
}

TEST_CASE("boundary tags") {
    const Mesh sq = tag_boundary(generate_rect_mesh(1, 1, 0.5));
    CHECK(sq.count_edges(BoundaryTag::Dirichlet) == 2);
    CHECK(sq.count_edges(BoundaryTag::Contact) == 2);
    CHECK(sq.count_edges(BoundaryTag::Neumann) == 4);

    const Mesh wide = tag_boundary(generate_rect_mesh(2, 1, 1));
    CHECK(wide.count_edges(BoundaryTag::Dirichlet) == 1);
    CHECK(wide.count_edges(BoundaryTag::Contact) == 2);
    CHECK(wide.count_edges(BoundaryTag::Neumann) == 3);

    const Mesh fine = tag_boundary(generate_rect_mesh(2, 1, 1.0 / 16));
    CHECK(fine.count_edges(BoundaryTag::Dirichlet) + fine.count_edges(BoundaryTag::Contact) +
              fine.count_edges(BoundaryTag::Neumann) ==
          fine.boundary_edges.size());
    for (const auto& e : fine.boundary_edges) {
        const auto& a = fine.nodes[e.a];
        const auto& b = fine.nodes[e.b];
        if (e.tag == BoundaryTag::Contact) {
            CHECK(a.y == 0.0);
            CHECK(b.y == 0.0);
        }
        if (e.tag == BoundaryTag::Dirichlet) {
            CHECK(a.x == 0.0);
            CHECK(b.x == 0.0);
        }
    }
}

TEST_CASE("boundary tag names round-trip") {
    for (auto tag : {BoundaryTag::Dirichlet, BoundaryTag::Neumann, BoundaryTag::Contact}) {
        CHECK(parse_boundary_tag(to_string(tag)) == tag);
    }
    CHECK_THROWS(parse_boundary_tag("slip"));
}

TEST_CASE("contact weights") {
    const double h = 1.0 / 16;
    const Mesh m = tag_boundary(generate_rect_mesh(2, 1, h));
    const auto w = contact_weights(m);
    CHECK(w.size() == 33);
    double sum = 0.0;
    for (const auto& [node, weight] : w) {
        sum += weight;
        const double x = m.nodes[node].x;
        if (x == 0.0 || x == 2.0) {
            CHECK(weight == doctest::Approx(h / 2));
        } else {
            CHECK(weight == doctest::Approx(h));
        }
    }
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("mesh file round-trip") {
    const Mesh m = tag_boundary(generate_rect_mesh(2, 1, 1.0 / 3));
    std::stringstream ss;
    write_mesh(ss, m);
    const Mesh r = read_mesh(ss);
    REQUIRE(r.nodes.size() == m.nodes.size());
    REQUIRE(r.triangles.size() == m.triangles.size());
    REQUIRE(r.boundary_edges.size() == m.boundary_edges.size());
    for (std::size_t i = 0; i < m.nodes.size(); ++i) {
        CHECK(r.nodes[i].x == m.nodes[i].x);
        CHECK(r.nodes[i].y == m.nodes[i].y);
    }
    CHECK(r.triangles == m.triangles);
    for (std::size_t i = 0; i < m.boundary_edges.size(); ++i) CHECK(r.boundary_edges[i].tag == m.boundary_edges[i].tag);
    CHECK(r.width == m.width);
    CHECK(r.height == m.height);
    CHECK(r.h == doctest::Approx(m.h));

    std::stringstream bad("mesh 3d v1\n");
    CHECK_THROWS(read_mesh(bad));
}
