// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "net_client.hpp"
#include "test_support.hpp"

using namespace slice4d;
using namespace slice4d::oracle;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

Outcome periodicity() {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    SessionConfig config;
    config.edge_length = 2.0;
    config.theta0 = std::numbers::pi / 16;
    const auto events = parse_script("4*32");
    const auto states = replay(make_session(config), events);
    const auto frames = build_frames(config, events);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const double d = frobenius_distance(states.back().orientation, Rotation4::identity());
    o.require(d <= 1e-9, "orientation distance " + fmt(d));
    o.require(frames.size() == 33, "frame count " + std::to_string(frames.size()));
    const auto& m0 = frames.front().mesh;
    const auto& m32 = frames.back().mesh;
    o.require(m0.vertices.size() == m32.vertices.size(), "vertex count changed");
    double worst = 0.0;
    for (std::size_t k = 0; k < std::min(m0.vertices.size(), m32.vertices.size()); ++k)
        worst = std::max(worst, distance(m0.vertices[k].position, m32.vertices[k].position));
    o.require(worst <= 1e-9, "frame 32 vertex offset " + fmt(worst));
    o.require(elapsed < 1.0, "runtime " + fmt(elapsed) + " s");
    if (o.pass) o.detail = "distance " + fmt(d) + ", vertex offset " + fmt(worst);
    return o;
}

Outcome initial_slice() {
    Outcome o;
    const Polychoron p = regular_pentachoron(2.0);
    const SliceMesh m = slice(p, Hyperplane{0.0}, 1e-9 * 2.0);
    o.require(m.vertices.size() == 4 && m.edges.size() == 6 && m.faces.size() == 4,
              "counts " + std::to_string(m.vertices.size()) + "/" + std::to_string(m.edges.size()) +
                  "/" + std::to_string(m.faces.size()));
    // Independent oracle: interpolate P4 -> P0 and P4 -> P1 directly.
    const auto cut = [&](std::size_t i) {
        const Point4& a = p.vertices[4];
        const Point4& b = p.vertices[i];
        const double t = (0.0 - a.w) / (b.w - a.w);
        return Point3{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y), a.z + t * (b.z - a.z)};
    };
    const double expected = distance(cut(0), cut(1));
    o.require(std::abs(expected - 1.6) <= 1e-12, "oracle edge " + fmt(expected));
    double worst = 0.0;
    for (const auto& e : m.edges) {
        const double len = distance(m.vertices[e.vertices[0]].position, m.vertices[e.vertices[1]].position);
        worst = std::max(worst, std::abs(len - expected));
    }
    o.require(worst <= 1e-12, "edge length deviation " + fmt(worst));
    if (o.pass) o.detail = "edge 1.6, max deviation " + fmt(worst);
    return o;
}

Outcome pentachoron_exactness() {
    Outcome o;
    for (double a : {0.5, 1.0, 2.0, 10.0}) {
        const Polychoron p = regular_pentachoron(a);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = i + 1; j < 5; ++j) {
                const double rel = std::abs(distance(p.vertices[i], p.vertices[j]) - a) / a;
                o.require(rel <= 1e-12, "a=" + fmt(a) + " edge rel error " + fmt(rel));
            }
        const GeometryReport r = geometry_report(p);
        o.require(norm(r.centroid) < 1e-12 * a, "a=" + fmt(a) + " centroid " + fmt(norm(r.centroid)));
        const double w0 = std::sqrt(2.0 / 5.0) * a;
        o.require(std::abs(r.circumradius - w0) <= 1e-12 * w0, "a=" + fmt(a) + " circumradius");
        for (const auto& v : p.vertices)
            o.require(std::abs(norm(v) - w0) <= 1e-12 * w0, "a=" + fmt(a) + " vertex radius");
    }
    return o;
}

Outcome commutativity() {
    Outcome o;
    std::mt19937_64 rng(1001);
    double worst_commute = 0.0;
    double worst_factor = 0.0;
    for (DoublePlane pair : kAllDoublePlanes) {
        const auto [pa, pb] = planes(pair);
        for (int i = 0; i < 100; ++i) {
            const Angle alpha(uniform(rng, -std::numbers::pi, std::numbers::pi));
            const Angle beta(uniform(rng, -std::numbers::pi, std::numbers::pi));
            const Matrix4 ra = simple_rotation(pa, alpha).matrix();
            const Matrix4 rb = simple_rotation(pb, beta).matrix();
            const Matrix4 ab = naive_product(ra, rb);
            const Matrix4 ba = naive_product(rb, ra);
            worst_commute = std::max(worst_commute, frobenius_distance(ab, ba));
            worst_factor =
                std::max(worst_factor, frobenius_distance(double_rotation(pair, alpha, beta).matrix(), ab));
        }
    }
    o.require(worst_commute < 1e-12, "commutator " + fmt(worst_commute));
    o.require(worst_factor < 1e-14, "factorization " + fmt(worst_factor));
    if (o.pass) o.detail = "commutator " + fmt(worst_commute) + ", factorization " + fmt(worst_factor);
    return o;
}

Outcome slicer_oracle() {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1003);
    const double a = 2.0;
    const double w0 = std::sqrt(2.0 / 5.0) * a;
    const Polychoron base = regular_pentachoron(a);
    int nonempty = 0;
    int degenerate = 0;
    for (int i = 0; i < 1000; ++i) {
        const Polychoron p = transform(base, random_rotation(rng));
        double c0 = uniform(rng, -w0, w0);
        while (c0 == -w0) c0 = uniform(rng, -w0, w0);
        SliceMesh m;
        try {
            m = slice(p, Hyperplane{c0}, 1e-9 * a);
        } catch (const DegenerateSlice&) {
            ++degenerate;
            continue;
        }
        if (!same_point_set(positions(m), brute_force_section(p, c0), 1e-9)) {
            o.require(false, "case " + std::to_string(i) + " differs from oracle");
            break;
        }
        if (!m.empty()) {
            ++nonempty;
            const long chi = euler_characteristic(m);
            o.require(chi == 2, "case " + std::to_string(i) + " V-E+F=" + std::to_string(chi));
        }
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(elapsed < 10.0, "runtime " + fmt(elapsed) + " s");
    if (o.pass)
        o.detail = std::to_string(nonempty) + " nonempty, " + std::to_string(degenerate) + " degenerate";
    return o;
}

Outcome aperiodicity() {
    // Brute-force minimum of ||R^N - I||_F over N in [1, 1000], pinned.
    constexpr double kPinnedMinimum = 0.0754451740528;
    constexpr int kPinnedN = 333;
    Outcome o;
    const double alpha = fig4_alpha();
    const double beta = 1.0 - alpha;
    const Rotation4 step = double_rotation(DoublePlane::XZ_YW, Angle(alpha), Angle(beta));
    Rotation4 r;
    double best = std::numeric_limits<double>::infinity();
    int best_n = 0;
    for (int n = 1; n <= 1000; ++n) {
        r = compose(step, r);
        const double d = frobenius_distance(r, Rotation4::identity());
        o.require(d > 1e-9, "returned at N=" + std::to_string(n));
        if (d < best) {
            best = d;
            best_n = n;
        }
    }
    o.require(best_n == kPinnedN, "minimum moved to N=" + std::to_string(best_n));
    o.require(std::abs(best - kPinnedMinimum) <= 1e-12, "minimum " + fmt(best));
    if (o.pass) o.detail = "min " + fmt(best) + " at N=" + std::to_string(best_n);
    return o;
}

Outcome drift() {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1007);
    static constexpr char kKeys[] = "23468cyzw";
    SessionState s = make_session();
    for (int i = 0; i < 100000; ++i) s = handle_key(s, {kKeys[rng() % 9], rng() % 2 == 0});
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double err = orthonormality_error(s.orientation.matrix());
    o.require(err < 1e-9, "||Q^T Q - I|| = " + fmt(err));
    o.require(elapsed < 5.0, "runtime " + fmt(elapsed) + " s");
    if (o.pass) o.detail = "||Q^T Q - I|| = " + fmt(err);
    return o;
}

Outcome inverse_pairs() {
    Outcome o;
    std::mt19937_64 rng(1009);
    double worst = 0.0;
    std::vector<SessionState> starts{make_session()};
    for (int i = 0; i < 10; ++i) {
        SessionConfig config;
        config.alpha = uniform(rng, -1.0, 1.0);
        SessionState s = make_session(config);
        s.orientation = random_rotation(rng);
        starts.push_back(s);
    }
    for (const auto& s : starts)
        for (const char* k = "23468cyzw"; *k; ++k) {
            const SessionState back = handle_key(handle_key(s, {*k, false}), {*k, true});
            worst = std::max(worst, frobenius_distance(back.orientation, s.orientation));
        }
    o.require(worst <= 1e-12, "worst " + fmt(worst));
    if (o.pass) o.detail = "worst " + fmt(worst);
    return o;
}

Outcome protocol_determinism() {
    Outcome o;
    std::mt19937_64 rng(1013);
    const auto log = client_message_log(rng, 500);

    const auto record = [&](std::vector<std::string>& states) {
        RunningServer server;
        TestClient client(server.port());
        ProtocolSession shape;  // tells how many replies each message gets
        for (const auto& msg : log) {
            client.send(msg);
            const std::size_t n = shape.handle(msg).size();
            for (std::size_t k = 0; k < n; ++k) {
                const auto reply = client.receive();
                if (!reply) throw std::runtime_error("server closed the connection");
                if (reply->rfind(R"({"alpha":)", 0) == 0) states.push_back(*reply);
            }
        }
    };
    std::vector<std::string> recorded;
    std::vector<std::string> replayed;
    try {
        record(recorded);
        record(replayed);
    } catch (const std::exception& e) {
        o.require(false, e.what());
        return o;
    }
    o.require(recorded.size() == replayed.size(), "state reply counts differ");
    for (std::size_t i = 0; i < std::min(recorded.size(), replayed.size()); ++i)
        o.require(recorded[i] == replayed[i], "state reply " + std::to_string(i) + " differs");
    if (o.pass) o.detail = std::to_string(recorded.size()) + " state replies identical";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"Periodicity", periodicity},
        {"Initial slice", initial_slice},
        {"Pentachoron exactness", pentachoron_exactness},
        {"Commutativity and factorization", commutativity},
        {"Slicer oracle", slicer_oracle},
        {"Aperiodicity", aperiodicity},
        {"Drift", drift},
        {"Inverse pairs", inverse_pairs},
        {"Protocol determinism", protocol_determinism},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %s (%.1f ms)%s%s\n", o.pass ? "PASS" : "FAIL", name.c_str(), ms,
                    o.detail.empty() ? "" : ": ", o.detail.c_str());
        failures += !o.pass;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
