#pragma once

#include <charconv>
#include <ostream>
#include <string>
#include <system_error>

#include "slice4d/slicer.hpp"

namespace slice4d {

namespace detail {

inline std::string shortest(double v) {
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return ec == std::errc() ? std::string(buf, end) : std::to_string(v);
}

}  // namespace detail

/// Wavefront OBJ: `v` per vertex, `l` per mesh edge, `f` per face (1-based).
inline void write_obj(std::ostream& out, const SliceMesh& mesh, const std::string& comment = {}) {
    if (!comment.empty()) out << "# " << comment << '\n';
    for (const auto& v : mesh.vertices)
        out << "v " << detail::shortest(v.position.x) << ' ' << detail::shortest(v.position.y)
            << ' ' << detail::shortest(v.position.z) << '\n';
    for (const auto& e : mesh.edges)
        out << "l " << e.vertices[0] + 1 << ' ' << e.vertices[1] + 1 << '\n';
    for (const auto& f : mesh.faces) {
        out << 'f';
        for (std::size_t v : f.loop) out << ' ' << v + 1;
        out << '\n';
    }
}

}  // namespace slice4d
