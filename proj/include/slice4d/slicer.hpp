#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slice4d/errors.hpp"
#include "slice4d/polytope4.hpp"
#include "slice4d/rotation4.hpp"

namespace slice4d {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend constexpr Point3 operator+(const Point3& a, const Point3& b) {
        return {a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend constexpr Point3 operator-(const Point3& a, const Point3& b) {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend constexpr Point3 operator*(double s, const Point3& p) {
        return {s * p.x, s * p.y, s * p.z};
    }
    friend bool operator==(const Point3&, const Point3&) = default;
};

inline double dot(const Point3& a, const Point3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Point3 cross(const Point3& a, const Point3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Point3& p) { return std::sqrt(dot(p, p)); }

inline double distance(const Point3& a, const Point3& b) { return norm(a - b); }

/// The hyperplane w = c0.
struct Hyperplane {
    double c0 = 0.0;
};

enum class VertexSign { Below, On, Above };

/// Mesh vertex cut from 4-D edge `source_edge` at p0 + t (p1 - p0), where
/// p0 and p1 are the edge's endpoints in stored order.
struct MeshVertex {
    Point3 position;
    std::size_t source_edge = 0;
    double t = 0.0;

    friend bool operator==(const MeshVertex&, const MeshVertex&) = default;
};

struct MeshEdge {
    std::array<std::size_t, 2> vertices{};
    std::size_t source_face = 0;

    friend bool operator==(const MeshEdge&, const MeshEdge&) = default;
};

struct MeshFace {
    std::vector<std::size_t> loop;
    std::size_t source_cell = 0;

    friend bool operator==(const MeshFace&, const MeshFace&) = default;
};

/// 3-D cross-section with 4-D provenance: vertices come from 4-D edges,
/// edges from 4-D faces, faces from 4-D cells.
struct SliceMesh {
    std::vector<MeshVertex> vertices;
    std::vector<MeshEdge> edges;
    std::vector<MeshFace> faces;

    bool empty() const noexcept { return vertices.empty(); }

    friend bool operator==(const SliceMesh&, const SliceMesh&) = default;
};

struct EdgeCut {
    Point3 point;
    double t = 0.0;
};

inline VertexSign classify_vertex(double w, double c0, double eps) {
    if (std::abs(w - c0) <= eps) return VertexSign::On;
    if (w < c0 - eps) return VertexSign::Below;
    return VertexSign::Above;
}

/// Intersection of segment pq with w = c0. Expects p and q on strictly
/// opposite sides; the result is then interior (0 < t < 1).
inline EdgeCut intersect_edge(const Point4& p, const Point4& q, double c0) {
    if (p.w == q.w) throw ParallelEdge("edge is parallel to the slicing hyperplane");
    const double t = (c0 - p.w) / (q.w - p.w);
    return {{p.x + t * (q.x - p.x), p.y + t * (q.y - p.y), p.z + t * (q.z - p.z)}, t};
}

inline int euler_characteristic(const SliceMesh& m) {
    return static_cast<int>(m.vertices.size()) - static_cast<int>(m.edges.size()) +
           static_cast<int>(m.faces.size());
}

namespace detail {

// Newell normal; robust for any planar polygon regardless of convexity.
inline Point3 polygon_normal(const SliceMesh& mesh, const std::vector<std::size_t>& loop) {
    Point3 n;
    for (std::size_t i = 0; i < loop.size(); ++i) {
        const Point3& a = mesh.vertices[loop[i]].position;
        const Point3& b = mesh.vertices[loop[(i + 1) % loop.size()]].position;
        n.x += (a.y - b.y) * (a.z + b.z);
        n.y += (a.z - b.z) * (a.x + b.x);
        n.z += (a.x - b.x) * (a.y + b.y);
    }
    return n;
}

// Orders the cell's mesh edges into a single cycle of mesh vertices.
inline std::vector<std::size_t> walk_cycle(const std::vector<MeshEdge>& edges,
                                           const std::vector<std::size_t>& cell_edges,
                                           std::size_t cell) {
    std::map<std::size_t, std::vector<std::size_t>> adjacent;
    for (std::size_t e : cell_edges) {
        adjacent[edges[e].vertices[0]].push_back(edges[e].vertices[1]);
        adjacent[edges[e].vertices[1]].push_back(edges[e].vertices[0]);
    }
    for (const auto& [v, nbrs] : adjacent)
        if (nbrs.size() != 2)
            throw InvalidPolytope("cross-section of cell " + std::to_string(cell) +
                                  " is not a simple polygon");

    std::vector<std::size_t> loop;
    const std::size_t start = adjacent.begin()->first;
    std::size_t prev = start;
    std::size_t cur = adjacent.begin()->second.front();
    loop.push_back(start);
    while (cur != start) {
        loop.push_back(cur);
        const auto& nbrs = adjacent[cur];
        const std::size_t next = nbrs[0] == prev ? nbrs[1] : nbrs[0];
        prev = cur;
        cur = next;
        if (loop.size() > adjacent.size())
            throw InvalidPolytope("cross-section of cell " + std::to_string(cell) +
                                  " does not close");
    }
    if (loop.size() != adjacent.size())
        throw InvalidPolytope("cross-section of cell " + std::to_string(cell) +
                              " has more than one loop");
    return loop;
}

}  // namespace detail

/// Cross-section of p by w = h.c0.
///
/// Every straddling edge contributes one vertex, every 4-D face with two cut
/// edges one mesh edge, and every cut cell one polygon whose loop follows
/// the cell's faces. Loops wind counter-clockwise seen from outside the
/// section. Throws DegenerateSlice when a vertex is within eps of the
/// hyperplane.
inline SliceMesh slice(const Polychoron& p, const Hyperplane& h, double eps) {
    if (!(eps > 0.0)) throw Error("slice tolerance must be positive");
    if (const auto violations = validate_incidence(p); !violations.empty())
        throw InvalidPolytope("polytope fails incidence validation: " + violations.front().detail);

    std::vector<VertexSign> signs;
    signs.reserve(p.vertices.size());
    for (std::size_t i = 0; i < p.vertices.size(); ++i) {
        signs.push_back(classify_vertex(p.vertices[i].w, h.c0, eps));
        if (signs.back() == VertexSign::On)
            throw DegenerateSlice("vertex " + std::to_string(i) + " lies on the hyperplane w = " +
                                  std::to_string(h.c0));
    }

    SliceMesh mesh;
    std::vector<std::optional<std::size_t>> cut_of_edge(p.edges.size());
    for (std::size_t e = 0; e < p.edges.size(); ++e) {
        const auto [a, b] = p.edges[e];
        if (signs[a] == signs[b]) continue;
        const EdgeCut cut = intersect_edge(p.vertices[a], p.vertices[b], h.c0);
        cut_of_edge[e] = mesh.vertices.size();
        mesh.vertices.push_back({cut.point, e, cut.t});
    }
    if (mesh.vertices.empty()) return mesh;

    const auto lookup = edge_lookup(p);
    std::vector<std::optional<std::size_t>> segment_of_face(p.faces.size());
    for (std::size_t f = 0; f < p.faces.size(); ++f) {
        const auto& loop = p.faces[f];
        std::vector<std::size_t> cuts;
        for (std::size_t k = 0; k < loop.size(); ++k) {
            const std::size_t e = lookup.at(detail::edge_key(loop[k], loop[(k + 1) % loop.size()]));
            if (cut_of_edge[e]) cuts.push_back(*cut_of_edge[e]);
        }
        if (cuts.empty()) continue;
        if (cuts.size() != 2)
            throw InvalidPolytope("face " + std::to_string(f) + " is cut " +
                                  std::to_string(cuts.size()) + " times; faces must be convex");
        segment_of_face[f] = mesh.edges.size();
        mesh.edges.push_back({{cuts[0], cuts[1]}, f});
    }

    Point3 centroid;
    for (const auto& v : mesh.vertices) centroid = centroid + v.position;
    centroid = (1.0 / static_cast<double>(mesh.vertices.size())) * centroid;

    for (std::size_t c = 0; c < p.cells.size(); ++c) {
        std::vector<std::size_t> cell_edges;
        for (std::size_t f : p.cells[c])
            if (segment_of_face[f]) cell_edges.push_back(*segment_of_face[f]);
        if (cell_edges.empty()) continue;

        std::vector<std::size_t> loop = detail::walk_cycle(mesh.edges, cell_edges, c);
        Point3 face_centroid;
        for (std::size_t v : loop) face_centroid = face_centroid + mesh.vertices[v].position;
        face_centroid = (1.0 / static_cast<double>(loop.size())) * face_centroid;
        if (dot(detail::polygon_normal(mesh, loop), face_centroid - centroid) < 0.0)
            std::reverse(loop.begin() + 1, loop.end());
        mesh.faces.push_back({std::move(loop), c});
    }
    return mesh;
}

}  // namespace slice4d
