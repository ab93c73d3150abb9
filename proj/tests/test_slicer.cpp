#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "slice4d/slicer.hpp"
#include "test_support.hpp"

using namespace slice4d;
using namespace slice4d::oracle;

namespace {

constexpr double kEps = 1e-9;

// Faces of p whose boundary contains the given edge.
bool face_has_edge(const Polychoron& p, std::size_t face, std::size_t edge) {
    const auto& loop = p.faces[face];
    const Edge e = p.edges[edge];
    for (std::size_t k = 0; k < loop.size(); ++k) {
        const std::size_t a = loop[k];
        const std::size_t b = loop[(k + 1) % loop.size()];
        if ((a == e[0] && b == e[1]) || (a == e[1] && b == e[0])) return true;
    }
    return false;
}

// Structural checks that hold for every nonempty, nondegenerate section.
void check_section(const Polychoron& p, double c0, const SliceMesh& m) {
    const double a = p.edge_length_nominal;
    ASSERT_FALSE(m.empty());
    EXPECT_EQ(euler_characteristic(m), 2);

    for (const auto& v : m.vertices) {
        ASSERT_LT(v.source_edge, p.edges.size());
        const Point4& p0 = p.vertices[p.edges[v.source_edge][0]];
        const Point4& p1 = p.vertices[p.edges[v.source_edge][1]];
        EXPECT_LT((p0.w - c0) * (p1.w - c0), 0.0) << "vertex source edge does not straddle";
        EXPECT_GE(v.t, 0.0);
        EXPECT_LE(v.t, 1.0);
    }
    for (const auto& e : m.edges) {
        ASSERT_LT(e.source_face, p.faces.size());
        EXPECT_TRUE(face_has_edge(p, e.source_face, m.vertices[e.vertices[0]].source_edge));
        EXPECT_TRUE(face_has_edge(p, e.source_face, m.vertices[e.vertices[1]].source_edge));
    }

    const Point3 centroid = mesh_centroid(m);
    std::set<std::pair<std::size_t, std::size_t>> edge_set;
    for (const auto& e : m.edges)
        edge_set.insert(std::minmax(e.vertices[0], e.vertices[1]));
    for (const auto& f : m.faces) {
        ASSERT_LT(f.source_cell, p.cells.size());
        ASSERT_TRUE(f.loop.size() == 3 || f.loop.size() == 4) << f.loop.size();
        EXPECT_LE(planarity_error(m, f), 1e-9 * a);
        EXPECT_TRUE(is_convex(m, f));
        // Consecutive loop vertices share a mesh edge cut from a face of this cell.
        const auto& cell_faces = p.cells[f.source_cell];
        for (std::size_t k = 0; k < f.loop.size(); ++k) {
            const std::size_t u = f.loop[k];
            const std::size_t w = f.loop[(k + 1) % f.loop.size()];
            EXPECT_TRUE(edge_set.contains(std::minmax(u, w)));
            const bool shared = std::any_of(cell_faces.begin(), cell_faces.end(), [&](std::size_t face) {
                return face_has_edge(p, face, m.vertices[u].source_edge) &&
                       face_has_edge(p, face, m.vertices[w].source_edge);
            });
            EXPECT_TRUE(shared);
        }
        // Outward winding.
        const Point3& v0 = m.vertices[f.loop[0]].position;
        const Point3& v1 = m.vertices[f.loop[1]].position;
        const Point3& v2 = m.vertices[f.loop[2]].position;
        Point3 fc;
        for (std::size_t v : f.loop) fc = fc + m.vertices[v].position;
        fc = (1.0 / static_cast<double>(f.loop.size())) * fc;
        EXPECT_GT(dot(cross(v1 - v0, v2 - v1), fc - centroid), 0.0);
    }

    // Each tetrahedral cell is cut along 0, 3 or 4 of its edges.
    std::vector<bool> cut(p.edges.size(), false);
    for (const auto& v : m.vertices) cut[v.source_edge] = true;
    const auto lookup = edge_lookup(p);
    for (const auto& cell : p.cells) {
        std::set<std::size_t> cell_edges;
        for (std::size_t face : cell) {
            const auto& loop = p.faces[face];
            for (std::size_t k = 0; k < loop.size(); ++k)
                cell_edges.insert(lookup.at(detail::edge_key(loop[k], loop[(k + 1) % loop.size()])));
        }
        const auto n = std::count_if(cell_edges.begin(), cell_edges.end(),
                                     [&](std::size_t e) { return cut[e]; });
        EXPECT_TRUE(n == 0 || n == 3 || n == 4) << n;
    }
}

}  // namespace

TEST(ClassifyVertex, Examples) {
    EXPECT_EQ(classify_vertex(0.0, 0.0, 1e-9), VertexSign::On);
    EXPECT_EQ(classify_vertex(-1.0 / std::sqrt(10.0), 0.0, 1e-9), VertexSign::Below);
    EXPECT_EQ(classify_vertex(4.0 / std::sqrt(10.0), 0.0, 1e-9), VertexSign::Above);
    EXPECT_EQ(classify_vertex(1e-9, 0.0, 1e-9), VertexSign::On);
    EXPECT_EQ(classify_vertex(2e-9, 0.0, 1e-9), VertexSign::Above);
}

TEST(IntersectEdge, SymmetricEdge) {
    const EdgeCut cut = intersect_edge({0, 0, 0, -1}, {0, 0, 0, 1}, 0.0);
    EXPECT_EQ(cut.t, 0.5);
    EXPECT_EQ(cut.point, (Point3{0, 0, 0}));
}

TEST(IntersectEdge, PentachoronApexToP0) {
    const Polychoron p = regular_pentachoron(2.0);
    const EdgeCut cut = intersect_edge(p.vertices[4], p.vertices[0], 0.0);
    // Direct substitution: t = (0 - 4/sqrt10) / (-1/sqrt10 - 4/sqrt10) = 4/5.
    EXPECT_NEAR(cut.t, 0.8, 1e-15);
    EXPECT_NEAR(cut.point.x, -0.8, 1e-15);
    EXPECT_NEAR(cut.point.y, -0.8 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(cut.point.z, -0.8 / std::sqrt(6.0), 1e-15);
}

TEST(IntersectEdge, ResultLiesOnHyperplane) {
    std::mt19937_64 rng(37);
    for (int k = 0; k < 1000; ++k) {
        Point4 p = random_point(rng, 5.0);
        Point4 q = random_point(rng, 5.0);
        const double c0 = uniform(rng, -1.0, 1.0);
        p.w = c0 - uniform(rng, 0.01, 5.0);
        q.w = c0 + uniform(rng, 0.01, 5.0);
        const EdgeCut cut = intersect_edge(p, q, c0);
        EXPECT_GT(cut.t, 0.0);
        EXPECT_LT(cut.t, 1.0);
        EXPECT_LE(std::abs(p.w + cut.t * (q.w - p.w) - c0), 1e-12);
    }
}

TEST(IntersectEdge, ParallelEdgeThrows) {
    EXPECT_THROW(intersect_edge({0, 0, 0, 1}, {1, 1, 1, 1}, 0.0), ParallelEdge);
}

TEST(Slice, UnrotatedPentachoronGivesRegularTetrahedron) {
    const Polychoron p = regular_pentachoron(2.0);
    const SliceMesh m = slice(p, Hyperplane{0.0}, kEps * 2.0);
    ASSERT_EQ(m.vertices.size(), 4u);
    ASSERT_EQ(m.edges.size(), 6u);
    ASSERT_EQ(m.faces.size(), 4u);

    // Edge length from the t = 0.8 oracle: cut points are 0.8 of the way from
    // P4 to each base vertex, so the base edge a shrinks to 0.8 a.
    std::vector<Point3> oracle_points;
    for (std::size_t i = 0; i < 4; ++i) {
        const Point4& base = p.vertices[i];
        const Point4& apex = p.vertices[4];
        const double t = (0.0 - apex.w) / (base.w - apex.w);
        oracle_points.push_back({apex.x + t * (base.x - apex.x), apex.y + t * (base.y - apex.y),
                                 apex.z + t * (base.z - apex.z)});
    }
    const double expected = distance(oracle_points[0], oracle_points[1]);
    EXPECT_NEAR(expected, 1.6, 1e-15);
    for (const auto& e : m.edges)
        EXPECT_NEAR(distance(m.vertices[e.vertices[0]].position, m.vertices[e.vertices[1]].position),
                    expected, 1e-12);
    EXPECT_TRUE(same_point_set(positions(m), oracle_points, 1e-12));
    for (const auto& f : m.faces) EXPECT_EQ(f.loop.size(), 3u);
    EXPECT_EQ(euler_characteristic(m), 2);
    check_section(p, 0.0, m);
}

TEST(Slice, HyperplaneMissesPolytope) {
    const SliceMesh m = slice(regular_pentachoron(2.0), Hyperplane{2.0}, kEps * 2.0);
    EXPECT_TRUE(m.empty());
    EXPECT_TRUE(m.edges.empty());
    EXPECT_TRUE(m.faces.empty());
    EXPECT_EQ(euler_characteristic(m), 0);
    EXPECT_TRUE(slice(regular_pentachoron(2.0), Hyperplane{-2.0}, kEps * 2.0).empty());
}

TEST(Slice, RotatedByXwSixteenth) {
    const Polychoron p =
        transform(regular_pentachoron(2.0), simple_rotation(Plane::XW, Angle(std::numbers::pi / 16)));
    const SliceMesh m = slice(p, Hyperplane{0.0}, kEps * 2.0);
    check_section(p, 0.0, m);
    EXPECT_TRUE(same_point_set(positions(m), brute_force_section(p, 0.0), 1e-9));
}

TEST(Slice, VertexOnHyperplaneIsDegenerate) {
    const Polychoron p = regular_pentachoron(2.0);
    EXPECT_THROW(slice(p, Hyperplane{p.vertices[4].w}, kEps * 2.0), DegenerateSlice);
    EXPECT_THROW(slice(p, Hyperplane{p.vertices[0].w + 1e-10}, kEps * 2.0), DegenerateSlice);
}

TEST(Slice, RejectsInvalidInput) {
    Polychoron p = regular_pentachoron(1.0);
    EXPECT_THROW(slice(p, Hyperplane{0.0}, 0.0), Error);
    p.edges.pop_back();
    EXPECT_THROW(slice(p, Hyperplane{0.0}, kEps), InvalidPolytope);
}

TEST(Slice, MatchesBruteForceOracleAndTopology) {
    std::mt19937_64 rng(41);
    const double a = 2.0;
    const double w0 = std::sqrt(2.0 / 5.0) * a;
    const Polychoron base = regular_pentachoron(a);
    int quads = 0;
    int nonempty = 0;
    for (int k = 0; k < 500; ++k) {
        const Polychoron p = transform(base, random_rotation(rng));
        const double c0 = uniform(rng, -w0, w0);
        SliceMesh m;
        try {
            m = slice(p, Hyperplane{c0}, kEps * a);
        } catch (const DegenerateSlice&) {
            continue;
        }
        EXPECT_TRUE(same_point_set(positions(m), brute_force_section(p, c0), 1e-9));
        if (m.empty()) continue;
        ++nonempty;
        check_section(p, c0, m);
        for (const auto& f : m.faces) quads += f.loop.size() == 4;
    }
    EXPECT_GT(nonempty, 250);
    EXPECT_GT(quads, 0) << "the 2-vs-2 split was never exercised";
}

TEST(Slice, ContinuousInC0) {
    std::mt19937_64 rng(43);
    const double a = 2.0;
    const Polychoron base = regular_pentachoron(a);
    int compared = 0;
    for (int k = 0; k < 200; ++k) {
        const Polychoron p = transform(base, random_rotation(rng));
        const double c0 = uniform(rng, -0.5, 0.5);
        try {
            const SliceMesh m0 = slice(p, Hyperplane{c0}, kEps * a);
            const SliceMesh m1 = slice(p, Hyperplane{c0 + 1e-9}, kEps * a);
            if (m0.vertices.size() != m1.vertices.size()) continue;
            ++compared;
            EXPECT_TRUE(same_point_set(positions(m0), positions(m1), 1e-6 * a));
        } catch (const DegenerateSlice&) {
        }
    }
    EXPECT_GT(compared, 150);
}

TEST(Slice, DeterministicOutput) {
    std::mt19937_64 rng(47);
    const Polychoron p = transform(regular_pentachoron(2.0), random_rotation(rng));
    EXPECT_EQ(slice(p, Hyperplane{0.1}, kEps), slice(p, Hyperplane{0.1}, kEps));
}

TEST(EulerCharacteristic, CountsElements) {
    SliceMesh m;
    EXPECT_EQ(euler_characteristic(m), 0);
    m = slice(regular_pentachoron(2.0), Hyperplane{0.0}, kEps);
    EXPECT_EQ(euler_characteristic(m), 4 - 6 + 4);
}
