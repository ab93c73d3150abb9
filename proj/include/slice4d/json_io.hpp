#pragma once

// JSON encodings shared by the frame exporter, the --dump-polytope flag and
// the wire protocol. Doubles go through nlohmann's shortest round-trip
// formatter, so decode(encode(x)) is bit-exact.

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include <nlohmann/json.hpp>

#include "slice4d/controller.hpp"
#include "slice4d/polytope4.hpp"
#include "slice4d/rotation4.hpp"
#include "slice4d/slicer.hpp"

namespace slice4d {

using json = nlohmann::json;

inline json to_json(const Point4& p) { return json::array({p.x, p.y, p.z, p.w}); }

inline Point4 point4_from_json(const json& j) {
    if (!j.is_array() || j.size() != 4) throw json::type_error::create(302, "expected 4 numbers", &j);
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

inline json to_json(const Rotation4& r) { return json(r.row_major()); }

inline Rotation4 rotation_from_json(const json& j) {
    return Rotation4::from_row_major(j.get<std::array<double, 16>>());
}

inline json to_json(const Polychoron& p) {
    json vertices = json::array();
    for (const auto& v : p.vertices) vertices.push_back(to_json(v));
    return {{"vertices", std::move(vertices)},
            {"edges", p.edges},
            {"faces", p.faces},
            {"cells", p.cells},
            {"edge_length", p.edge_length_nominal}};
}

inline Polychoron polychoron_from_json(const json& j) {
    Polychoron p;
    for (const auto& v : j.at("vertices")) p.vertices.push_back(point4_from_json(v));
    p.edges = j.at("edges").get<std::vector<Edge>>();
    p.faces = j.at("faces").get<std::vector<std::vector<std::size_t>>>();
    p.cells = j.at("cells").get<std::vector<std::vector<std::size_t>>>();
    p.edge_length_nominal = j.at("edge_length").get<double>();
    return p;
}

/// Parallel arrays: geometry first, provenance alongside.
inline json to_json(const SliceMesh& m) {
    json vertices = json::array();
    json source_edges = json::array();
    json ts = json::array();
    for (const auto& v : m.vertices) {
        vertices.push_back({v.position.x, v.position.y, v.position.z});
        source_edges.push_back(v.source_edge);
        ts.push_back(v.t);
    }
    json edges = json::array();
    json source_faces = json::array();
    for (const auto& e : m.edges) {
        edges.push_back(e.vertices);
        source_faces.push_back(e.source_face);
    }
    json faces = json::array();
    json source_cells = json::array();
    for (const auto& f : m.faces) {
        faces.push_back(f.loop);
        source_cells.push_back(f.source_cell);
    }
    return {{"vertices", std::move(vertices)},
            {"vertex_source_edges", std::move(source_edges)},
            {"vertex_t", std::move(ts)},
            {"edges", std::move(edges)},
            {"edge_source_faces", std::move(source_faces)},
            {"faces", std::move(faces)},
            {"face_source_cells", std::move(source_cells)}};
}

inline SliceMesh slice_mesh_from_json(const json& j) {
    SliceMesh m;
    const auto& vertices = j.at("vertices");
    const auto& source_edges = j.at("vertex_source_edges");
    const auto& ts = j.at("vertex_t");
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const auto xyz = vertices[i].get<std::array<double, 3>>();
        m.vertices.push_back({{xyz[0], xyz[1], xyz[2]},
                              source_edges.at(i).get<std::size_t>(),
                              ts.at(i).get<double>()});
    }
    const auto& edges = j.at("edges");
    const auto& source_faces = j.at("edge_source_faces");
    for (std::size_t i = 0; i < edges.size(); ++i)
        m.edges.push_back({edges[i].get<std::array<std::size_t, 2>>(),
                           source_faces.at(i).get<std::size_t>()});
    const auto& faces = j.at("faces");
    const auto& source_cells = j.at("face_source_cells");
    for (std::size_t i = 0; i < faces.size(); ++i)
        m.faces.push_back({faces[i].get<std::vector<std::size_t>>(),
                           source_cells.at(i).get<std::size_t>()});
    return m;
}

inline json to_json(const SessionState& s) {
    return {{"orientation", to_json(s.orientation)},
            {"theta0", s.theta0.radians()},
            {"alpha", s.alpha.radians()},
            {"beta", s.beta().radians()},
            {"c0", s.c0},
            {"step_alpha", s.step_alpha.radians()},
            {"step_c0", s.step_c0},
            {"base", to_json(*s.base)}};
}

// "beta" is informational; it is re-derived from theta0 and alpha.
inline SessionState session_from_json(const json& j) {
    SessionState s;
    s.orientation = rotation_from_json(j.at("orientation"));
    s.theta0 = Angle(j.at("theta0").get<double>());
    s.alpha = Angle(j.at("alpha").get<double>());
    s.c0 = require_finite(j.at("c0").get<double>(), "c0");
    s.step_alpha = Angle(j.at("step_alpha").get<double>());
    s.step_c0 = require_finite(j.at("step_c0").get<double>(), "step_c0");
    s.base = std::make_shared<const Polychoron>(polychoron_from_json(j.at("base")));
    return s;
}

}  // namespace slice4d
