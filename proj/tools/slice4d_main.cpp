#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slice4d/net/server.hpp"
#include "slice4d/slice4d.hpp"

namespace {

using namespace slice4d;

struct SessionFlags {
    double edge_length = 2.0;
    double theta0 = std::numbers::pi / 16.0;
    double c0 = 0.0;
    std::optional<double> alpha;
    std::optional<double> step_alpha;
    std::optional<double> step_c0;

    void attach(CLI::App& app) {
        app.add_option("--edge-length", edge_length, "Pentachoron edge length a")
            ->check(CLI::PositiveNumber);
        app.add_option("--theta0", theta0, "Per-step rotation angle (radians)");
        app.add_option("--c0", c0, "Initial slicing hyperplane w = c0");
        app.add_option("--alpha", alpha, "Double-rotation angle alpha (default theta0/2)");
        app.add_option("--step-alpha", step_alpha, "k/j increment (default theta0/16)");
        app.add_option("--step-c0", step_c0, "l/h increment (default 0.05*a)");
    }

    SessionConfig config() const {
        return {edge_length, theta0, alpha, step_alpha, step_c0, c0};
    }
};

std::set<ExportFormat> parse_formats(const std::vector<std::string>& names) {
    std::set<ExportFormat> out;
    for (const auto& n : names) {
        if (n == "obj") out.insert(ExportFormat::Obj);
        else if (n == "json") out.insert(ExportFormat::Json);
        else throw CLI::ValidationError("--format", "unknown format '" + n + "'");
    }
    return out;
}

int export_frames(const std::string& name, const std::string& script, const SessionConfig& config,
                  const std::filesystem::path& out_dir, const std::set<ExportFormat>& formats) {
    const auto frames = build_frames(config, parse_script(script));
    const auto files = write_frames(frames, out_dir, formats);
    write_manifest(out_dir, manifest(name, script, config, files, frames.size()));
    std::cout << "wrote " << frames.size() << " frames to " << out_dir.string() << '\n';
    return 0;
}

std::string read_all(std::istream& in) {
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

net::Server* g_server = nullptr;

extern "C" void on_signal(int) {
    if (g_server) g_server->request_stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"4-D rotation and hyperplane slicing of the regular pentachoron"};
    app.require_subcommand(0, 1);

    bool dump_polytope = false;
    double dump_edge_length = 2.0;
    app.add_flag("--dump-polytope", dump_polytope, "Print the pentachoron as JSON and exit");
    app.add_option("--edge-length", dump_edge_length, "Edge length for --dump-polytope")
        ->check(CLI::PositiveNumber);

    // slice
    auto* slice_cmd = app.add_subcommand("slice", "Replay a key script and export one frame per event");
    SessionFlags slice_flags;
    slice_flags.attach(*slice_cmd);
    std::string script;
    std::string script_file;
    std::string slice_out = "frames";
    std::vector<std::string> slice_formats{"obj", "json"};
    slice_cmd->add_option("script", script, "Key script, e.g. \"4*32\" or \"C*3 l\"");
    slice_cmd->add_option("--script-file", script_file, "Read the script from a file ('-' for stdin)");
    slice_cmd->add_option("--out", slice_out, "Output directory");
    slice_cmd->add_option("--format", slice_formats, "Comma-separated: obj,json")->delimiter(',');

    // serve
    auto* serve_cmd = app.add_subcommand("serve", "Run the interactive session server");
    SessionFlags serve_flags;
    serve_flags.attach(*serve_cmd);
    std::string bind = "127.0.0.1:8765";
    serve_cmd->add_option("--bind", bind, "host:port to listen on");

    // replay-figures
    auto* figures_cmd = app.add_subcommand("replay-figures", "Export the fig3 / fig4 frame sequences");
    std::string figure_name;
    std::string figures_out = "figures";
    std::vector<std::string> figure_formats{"obj", "json"};
    figures_cmd->add_option("figure", figure_name, "fig3 or fig4")
        ->required()
        ->check(CLI::IsMember({"fig3", "fig4"}));
    figures_cmd->add_option("--out", figures_out, "Output directory");
    figures_cmd->add_option("--format", figure_formats, "Comma-separated: obj,json")->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (dump_polytope) {
            std::cout << to_json(regular_pentachoron(dump_edge_length)).dump(2) << '\n';
            return 0;
        }
        if (*slice_cmd) {
            if (!script_file.empty()) {
                if (script_file == "-") {
                    script = read_all(std::cin);
                } else {
                    std::ifstream in(script_file);
                    if (!in) throw IoError("cannot read " + script_file);
                    script = read_all(in);
                }
            }
            return export_frames("slice", script, slice_flags.config(), slice_out,
                                 parse_formats(slice_formats));
        }
        if (*figures_cmd) {
            const FigureSetup setup = figure_setup(figure_name == "fig3" ? Figure::Fig3 : Figure::Fig4);
            return export_frames(setup.name, setup.script, setup.config,
                                 std::filesystem::path(figures_out), parse_formats(figure_formats));
        }
        if (*serve_cmd) {
            const SessionConfig config = serve_flags.config();
            make_session(config);  // reject bad defaults before binding
            net::Server server(config, bind);
            g_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cerr << "listening on port " << server.port() << '\n';
            server.run();
            g_server = nullptr;
            return 0;
        }
        std::cout << app.help();
        return 0;
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        if (const auto* replay_error = dynamic_cast<const ReplayError*>(&e)) {
            try {
                std::rethrow_if_nested(*replay_error);
            } catch (const std::exception& inner) {
                std::cerr << "  caused by: " << inner.what() << '\n';
            }
        }
        return 1;
    }
}
