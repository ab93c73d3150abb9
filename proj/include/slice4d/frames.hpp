#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "slice4d/controller.hpp"
#include "slice4d/errors.hpp"
#include "slice4d/json_io.hpp"
#include "slice4d/obj_writer.hpp"
#include "slice4d/slicer.hpp"

namespace slice4d {

struct FrameExport {
    std::size_t frame_index = 0;
    std::array<double, 16> orientation{};
    double alpha = 0.0;
    double c0 = 0.0;
    SliceMesh mesh;

    friend bool operator==(const FrameExport&, const FrameExport&) = default;
};

enum class ExportFormat { Obj, Json };

class IoError : public Error {
public:
    using Error::Error;
};

inline FrameExport make_frame(std::size_t index, const SessionState& s) {
    return {index, s.orientation.row_major(), s.alpha.radians(), s.c0, current_slice(s)};
}

/// Frame 0 is the initial state; frame i follows event i - 1.
inline std::vector<FrameExport> build_frames(const SessionConfig& config,
                                             const std::vector<KeyEvent>& events) {
    const SessionState initial = make_session(config);
    const std::vector<SessionState> states = replay(initial, events);
    std::vector<FrameExport> frames;
    frames.reserve(states.size() + 1);
    frames.push_back(make_frame(0, initial));
    for (std::size_t i = 0; i < states.size(); ++i) frames.push_back(make_frame(i + 1, states[i]));
    return frames;
}

inline json to_json(const FrameExport& f) {
    return {{"frame_index", f.frame_index},
            {"state", {{"orientation", f.orientation}, {"alpha", f.alpha}, {"c0", f.c0}}},
            {"mesh", to_json(f.mesh)}};
}

inline FrameExport frame_from_json(const json& j) {
    FrameExport f;
    f.frame_index = j.at("frame_index").get<std::size_t>();
    const auto& state = j.at("state");
    f.orientation = state.at("orientation").get<std::array<double, 16>>();
    f.alpha = state.at("alpha").get<double>();
    f.c0 = state.at("c0").get<double>();
    f.mesh = slice_mesh_from_json(j.at("mesh"));
    return f;
}

inline std::string frame_stem(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%04zu", index);
    return buf;
}

/// Writes frame_NNNN.{obj,json} into dir (created if missing) and returns
/// the file names written.
inline std::vector<std::string> write_frames(const std::vector<FrameExport>& frames,
                                             const std::filesystem::path& dir,
                                             const std::set<ExportFormat>& formats) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

    std::vector<std::string> written;
    auto open = [&](const std::string& name) {
        std::ofstream out(dir / name);
        if (!out) throw IoError("cannot open " + (dir / name).string() + " for writing");
        written.push_back(name);
        return out;
    };
    for (const auto& frame : frames) {
        const std::string stem = frame_stem(frame.frame_index);
        if (formats.contains(ExportFormat::Obj)) {
            auto out = open(stem + ".obj");
            write_obj(out, frame.mesh, "frame " + std::to_string(frame.frame_index));
            if (!out) throw IoError("write failed for " + stem + ".obj");
        }
        if (formats.contains(ExportFormat::Json)) {
            auto out = open(stem + ".json");
            out << to_json(frame).dump() << '\n';
            if (!out) throw IoError("write failed for " + stem + ".json");
        }
    }
    return written;
}

enum class Figure { Fig3, Fig4 };

struct FigureSetup {
    std::string name;
    std::string script;
    SessionConfig config;
};

/// fig3: 32 steps of R_xw(pi/16), a full turn. fig4: 15 steps of the x-z/y-w
/// double rotation with alpha = pi sqrt(2) / (8 sqrt(3)) and beta = 1 - alpha,
/// run with theta0 = 1 so alpha + beta = theta0 holds.
inline FigureSetup figure_setup(Figure figure) {
    FigureSetup setup;
    setup.config.edge_length = 2.0;
    setup.config.c0 = 0.0;
    if (figure == Figure::Fig3) {
        setup.name = "fig3";
        setup.script = "4*32";
        setup.config.theta0 = std::numbers::pi / 16.0;
    } else {
        setup.name = "fig4";
        setup.script = "z*15";
        setup.config.theta0 = 1.0;
        setup.config.alpha = std::numbers::pi * std::sqrt(2.0) / (8.0 * std::sqrt(3.0));
    }
    return setup;
}

inline json manifest(const std::string& name, const std::string& script,
                     const SessionConfig& config, const std::vector<std::string>& files,
                     std::size_t frame_count) {
    const SessionState s = make_session(config);
    return {{"name", name},
            {"script", script},
            {"edge_length", config.edge_length},
            {"theta0", s.theta0.radians()},
            {"alpha", s.alpha.radians()},
            {"beta", s.beta().radians()},
            {"c0", s.c0},
            {"step_alpha", s.step_alpha.radians()},
            {"step_c0", s.step_c0},
            {"frames", frame_count},
            {"files", files}};
}

inline void write_manifest(const std::filesystem::path& dir, const json& m) {
    std::ofstream out(dir / "manifest.json");
    out << m.dump(2) << '\n';
    if (!out) throw IoError("cannot write " + (dir / "manifest.json").string());
}

}  // namespace slice4d
