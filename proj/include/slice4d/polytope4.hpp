#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "slice4d/errors.hpp"
#include "slice4d/rotation4.hpp"

namespace slice4d {

using Edge = std::array<std::size_t, 2>;

/// A convex 4-polytope with explicit incidence. Faces are vertex loops whose
/// consecutive pairs are edges; cells are sets of face indices.
struct Polychoron {
    std::vector<Point4> vertices;
    std::vector<Edge> edges;
    std::vector<std::vector<std::size_t>> faces;
    std::vector<std::vector<std::size_t>> cells;
    double edge_length_nominal = 0.0;

    friend bool operator==(const Polychoron&, const Polychoron&) = default;
};

struct GeometryReport {
    std::vector<double> edge_lengths;
    Point4 centroid;
    double circumradius = 0.0;
};

/// Regular 5-cell with edge length a, centred on the origin with P4 on +w.
///
/// The construction lifts a segment to a triangle, then a tetrahedron, then
/// the pentachoron. Each step shifts the k existing points down the new axis
/// by r/k and adds an apex at +r, where r is the circumradius of the new
/// simplex: a/sqrt(3), sqrt(3/8) a and sqrt(2/5) a respectively.
///
/// Edges are all vertex pairs (i < j) in lexicographic order, faces all
/// triples (i < j < k) as loops (i, j, k), and cell c is the tetrahedron
/// opposite vertex c.
inline Polychoron regular_pentachoron(double a) {
    if (!(a > 0.0) || !std::isfinite(a))
        throw InvalidEdgeLength("pentachoron edge length must be positive and finite");

    const double s3 = std::sqrt(3.0);
    const double s6 = std::sqrt(6.0);
    const double s10 = std::sqrt(10.0);
    const double s2 = std::sqrt(2.0);

    Polychoron p;
    p.edge_length_nominal = a;
    p.vertices = {
        {-a / 2.0, -a / (2.0 * s3), -a / (2.0 * s6), -a / (2.0 * s10)},
        {a / 2.0, -a / (2.0 * s3), -a / (2.0 * s6), -a / (2.0 * s10)},
        {0.0, a / s3, -a / (2.0 * s6), -a / (2.0 * s10)},
        {0.0, 0.0, a * s3 / (2.0 * s2), -a / (2.0 * s10)},
        {0.0, 0.0, 0.0, 2.0 * a / s10},
    };

    constexpr std::size_t n = 5;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) p.edges.push_back({i, j});

    std::map<std::array<std::size_t, 3>, std::size_t> face_index;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                face_index[{i, j, k}] = p.faces.size();
                p.faces.push_back({i, j, k});
            }

    for (std::size_t c = 0; c < n; ++c) {
        std::vector<std::size_t> cell;
        for (const auto& [tri, idx] : face_index)
            if (tri[0] != c && tri[1] != c && tri[2] != c) cell.push_back(idx);
        p.cells.push_back(std::move(cell));
    }
    return p;
}

/// Applies r to every vertex; incidence is shared unchanged.
inline Polychoron transform(const Polychoron& p, const Rotation4& r) {
    Polychoron out = p;
    for (auto& v : out.vertices) v = apply_point(r, v);
    return out;
}

inline GeometryReport geometry_report(const Polychoron& p) {
    GeometryReport report;
    report.edge_lengths.reserve(p.edges.size());
    for (const auto& e : p.edges)
        report.edge_lengths.push_back(distance(p.vertices[e[0]], p.vertices[e[1]]));

    if (p.vertices.empty()) return report;
    Point4 sum;
    for (const auto& v : p.vertices) sum = sum + v;
    report.centroid = (1.0 / static_cast<double>(p.vertices.size())) * sum;
    for (const auto& v : p.vertices)
        report.circumradius = std::max(report.circumradius, distance(v, report.centroid));
    return report;
}

struct IncidenceViolation {
    enum class Kind {
        EdgeEndpointOutOfRange,
        DegenerateEdge,
        DuplicateEdge,
        FaceTooSmall,
        FaceVertexOutOfRange,
        FaceEdgeMissing,
        CellFaceOutOfRange,
        CellNotClosed,
    };

    Kind kind;
    std::size_t element;  // index of the offending edge, face or cell
    std::string detail;
};

inline std::string to_string(IncidenceViolation::Kind kind) {
    switch (kind) {
        case IncidenceViolation::Kind::EdgeEndpointOutOfRange: return "edge_endpoint_out_of_range";
        case IncidenceViolation::Kind::DegenerateEdge: return "degenerate_edge";
        case IncidenceViolation::Kind::DuplicateEdge: return "duplicate_edge";
        case IncidenceViolation::Kind::FaceTooSmall: return "face_too_small";
        case IncidenceViolation::Kind::FaceVertexOutOfRange: return "face_vertex_out_of_range";
        case IncidenceViolation::Kind::FaceEdgeMissing: return "face_edge_missing";
        case IncidenceViolation::Kind::CellFaceOutOfRange: return "cell_face_out_of_range";
        case IncidenceViolation::Kind::CellNotClosed: return "cell_not_closed";
    }
    return "unknown";
}

namespace detail {

inline Edge edge_key(std::size_t a, std::size_t b) { return a < b ? Edge{a, b} : Edge{b, a}; }

}  // namespace detail

/// Lookup from an unordered vertex pair to its edge index.
inline std::map<Edge, std::size_t> edge_lookup(const Polychoron& p) {
    std::map<Edge, std::size_t> lookup;
    for (std::size_t i = 0; i < p.edges.size(); ++i)
        lookup.emplace(detail::edge_key(p.edges[i][0], p.edges[i][1]), i);
    return lookup;
}

/// Every incidence defect found; empty when the complex is well formed.
inline std::vector<IncidenceViolation> validate_incidence(const Polychoron& p) {
    using Kind = IncidenceViolation::Kind;
    std::vector<IncidenceViolation> out;
    const std::size_t nv = p.vertices.size();

    std::map<Edge, std::size_t> seen;
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
        const auto [a, b] = p.edges[i];
        if (a >= nv || b >= nv) {
            out.push_back({Kind::EdgeEndpointOutOfRange, i,
                           "edge " + std::to_string(i) + " references a missing vertex"});
            continue;
        }
        if (a == b) {
            out.push_back({Kind::DegenerateEdge, i,
                           "edge " + std::to_string(i) + " joins vertex " + std::to_string(a) +
                               " to itself"});
            continue;
        }
        auto [it, inserted] = seen.emplace(detail::edge_key(a, b), i);
        if (!inserted)
            out.push_back({Kind::DuplicateEdge, i,
                           "edge " + std::to_string(i) + " duplicates edge " +
                               std::to_string(it->second)});
    }

    // (face, edge) pairs resolved for the cell check below.
    std::vector<std::vector<Edge>> face_edges(p.faces.size());
    for (std::size_t f = 0; f < p.faces.size(); ++f) {
        const auto& loop = p.faces[f];
        if (loop.size() < 3) {
            out.push_back({Kind::FaceTooSmall, f,
                           "face " + std::to_string(f) + " has fewer than 3 vertices"});
            continue;
        }
        bool in_range = true;
        for (std::size_t v : loop)
            if (v >= nv) in_range = false;
        if (!in_range) {
            out.push_back({Kind::FaceVertexOutOfRange, f,
                           "face " + std::to_string(f) + " references a missing vertex"});
            continue;
        }
        for (std::size_t k = 0; k < loop.size(); ++k) {
            const Edge key = detail::edge_key(loop[k], loop[(k + 1) % loop.size()]);
            face_edges[f].push_back(key);
            if (!seen.contains(key))
                out.push_back({Kind::FaceEdgeMissing, f,
                               "face " + std::to_string(f) + " uses missing edge (" +
                                   std::to_string(key[0]) + ", " + std::to_string(key[1]) + ")"});
        }
    }

    for (std::size_t c = 0; c < p.cells.size(); ++c) {
        std::map<Edge, int> uses;
        bool in_range = true;
        for (std::size_t f : p.cells[c]) {
            if (f >= p.faces.size()) {
                in_range = false;
                break;
            }
            for (const auto& e : face_edges[f]) ++uses[e];
        }
        if (!in_range) {
            out.push_back({Kind::CellFaceOutOfRange, c,
                           "cell " + std::to_string(c) + " references a missing face"});
            continue;
        }
        if (p.cells[c].size() < 4) {
            out.push_back({Kind::CellNotClosed, c,
                           "cell " + std::to_string(c) + " has fewer than 4 faces"});
            continue;
        }
        for (const auto& [e, count] : uses)
            if (count != 2) {
                out.push_back({Kind::CellNotClosed, c,
                               "cell " + std::to_string(c) + " uses edge (" +
                                   std::to_string(e[0]) + ", " + std::to_string(e[1]) + ") " +
                                   std::to_string(count) + " times"});
                break;
            }
    }
    return out;
}

}  // namespace slice4d
