#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <exception>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "slice4d/errors.hpp"
#include "slice4d/polytope4.hpp"
#include "slice4d/rotation4.hpp"
#include "slice4d/slicer.hpp"

namespace slice4d {

/// One keyboard command. `shifted` selects the inverse rotation and is
/// ignored by the parameter keys k, j, l, h.
struct KeyEvent {
    char symbol = '\0';
    bool shifted = false;

    friend bool operator==(const KeyEvent&, const KeyEvent&) = default;
};

using RotationGenerator = std::variant<Plane, DoublePlane>;

/// Simple-rotation key: the hex digit of the plane's axis product.
constexpr char key_symbol(Plane plane) { return "0123456789abcdef"[axis_product(plane)]; }

/// Double-rotation key: the axis paired with x in the first plane.
constexpr char key_symbol(DoublePlane pair) {
    return "xyzw"[axes(planes(pair).first).second];
}

constexpr std::optional<RotationGenerator> rotation_binding(char symbol) {
    for (Plane plane : kAllPlanes)
        if (key_symbol(plane) == symbol) return RotationGenerator{plane};
    for (DoublePlane pair : kAllDoublePlanes)
        if (key_symbol(pair) == symbol) return RotationGenerator{pair};
    return std::nullopt;
}

constexpr bool is_parameter_key(char symbol) {
    return symbol == 'k' || symbol == 'j' || symbol == 'l' || symbol == 'h';
}

constexpr bool is_known_key(char symbol) {
    return is_parameter_key(symbol) || rotation_binding(symbol).has_value();
}

/// Start-up parameters. Unset optionals derive from theta0 and the edge length.
struct SessionConfig {
    double edge_length = 2.0;
    double theta0 = std::numbers::pi / 16.0;
    std::optional<double> alpha;       // default theta0 / 2
    std::optional<double> step_alpha;  // default theta0 / 16
    std::optional<double> step_c0;     // default 0.05 * edge_length
    double c0 = 0.0;
};

struct SessionState {
    Rotation4 orientation;
    Angle theta0;
    Angle alpha;
    double c0 = 0.0;
    std::shared_ptr<const Polychoron> base;
    Angle step_alpha;
    double step_c0 = 0.0;

    // Never stored, so alpha + beta tracks theta0 through any k/j sequence.
    Angle beta() const { return theta0 - alpha; }

    double edge_length() const { return base->edge_length_nominal; }

    friend bool operator==(const SessionState& a, const SessionState& b) {
        return a.orientation == b.orientation && a.theta0 == b.theta0 && a.alpha == b.alpha &&
               a.c0 == b.c0 && a.step_alpha == b.step_alpha && a.step_c0 == b.step_c0 &&
               (a.base == b.base || (a.base && b.base && *a.base == *b.base));
    }
};

inline double require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw NonFiniteValue(std::string(what) + " must be finite");
    return v;
}

inline SessionState make_session(const SessionConfig& config = {}) {
    SessionState s;
    s.base = std::make_shared<const Polychoron>(regular_pentachoron(config.edge_length));
    s.theta0 = Angle(config.theta0);
    s.alpha = Angle(config.alpha.value_or(config.theta0 / 2.0));
    s.step_alpha = Angle(config.step_alpha.value_or(config.theta0 / 16.0));
    s.step_c0 = require_finite(config.step_c0.value_or(0.05 * config.edge_length), "step_c0");
    s.c0 = require_finite(config.c0, "c0");
    return s;
}

/// The rotation a key applies, before it is composed onto the orientation.
inline Rotation4 step_rotation(const SessionState& s, RotationGenerator generator, bool shifted) {
    const double sign = shifted ? -1.0 : 1.0;
    if (const auto* plane = std::get_if<Plane>(&generator))
        return simple_rotation(*plane, Angle(sign * s.theta0.radians()));
    return double_rotation(std::get<DoublePlane>(generator), Angle(sign * s.alpha.radians()),
                           Angle(sign * s.beta().radians()));
}

/// Rotation keys left-multiply a step onto the orientation (fixed world
/// frame); k/j move alpha and l/h move c0.
inline SessionState handle_key(const SessionState& s, const KeyEvent& e) {
    SessionState next = s;
    if (const auto generator = rotation_binding(e.symbol)) {
        next.orientation = compose(step_rotation(s, *generator, e.shifted), s.orientation);
        return next;
    }
    switch (e.symbol) {
        case 'k': next.alpha = s.alpha + s.step_alpha; break;
        case 'j': next.alpha = s.alpha - s.step_alpha; break;
        case 'l': next.c0 = require_finite(s.c0 + s.step_c0, "c0"); break;
        case 'h': next.c0 = require_finite(s.c0 - s.step_c0, "c0"); break;
        default: throw UnknownKey(e.symbol);
    }
    return next;
}

inline constexpr double kSliceEpsilonScale = 1e-9;
inline constexpr double kSliceNudgeScale = 1e-7;

/// Section of the rotated base by w = c0. A vertex-touching slice is retried
/// once at c0 + 1e-7 a; the state itself keeps the requested c0.
inline SliceMesh current_slice(const SessionState& s) {
    const double a = s.edge_length();
    const Polychoron rotated = transform(*s.base, s.orientation);
    try {
        return slice(rotated, Hyperplane{s.c0}, kSliceEpsilonScale * a);
    } catch (const DegenerateSlice&) {
        return slice(rotated, Hyperplane{s.c0 + kSliceNudgeScale * a}, kSliceEpsilonScale * a);
    }
}

inline constexpr std::size_t kMaxRepeatCount = 10'000'000;

/// Parses whitespace-separated key tokens: `4`, `4*32`, `C` (shifted c),
/// `S2` (shifted 2), `Z*15`.
inline std::vector<KeyEvent> parse_script(std::string_view text) {
    std::vector<KeyEvent> events;
    std::size_t pos = 0;
    std::size_t token_index = 0;
    auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };

    while (pos < text.size()) {
        while (pos < text.size() && is_space(text[pos])) ++pos;
        if (pos >= text.size()) break;
        const std::size_t begin = pos;
        while (pos < text.size() && !is_space(text[pos])) ++pos;
        std::string_view token = text.substr(begin, pos - begin);
        const auto fail = [&](const std::string& why) -> ParseError {
            return ParseError(why + " in '" + std::string(token) + "'", token_index, begin);
        };

        bool shifted = false;
        std::size_t i = 0;
        if (token.size() >= 2 && token[0] == 'S' && token[1] != '*') {
            shifted = true;
            i = 1;
        }
        char symbol = token[i];
        if (std::isupper(static_cast<unsigned char>(symbol))) {
            shifted = true;
            symbol = static_cast<char>(std::tolower(static_cast<unsigned char>(symbol)));
        }
        if (!is_known_key(symbol)) throw fail("unknown key symbol");
        ++i;

        std::size_t repeat = 1;
        if (i < token.size()) {
            if (token[i] != '*') throw fail("expected '*' after key symbol");
            const std::string_view digits = token.substr(i + 1);
            if (digits.empty()) throw fail("missing repeat count");
            const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), repeat);
            if (ec != std::errc() || end != digits.data() + digits.size())
                throw fail("malformed repeat count");
            if (repeat == 0) throw fail("repeat count must be at least 1");
            if (repeat > kMaxRepeatCount) throw fail("repeat count too large");
        }
        events.insert(events.end(), repeat, KeyEvent{symbol, shifted});
        ++token_index;
    }
    return events;
}

/// Every intermediate state, one per event. Errors are rethrown as
/// ReplayError with the original nested.
inline std::vector<SessionState> replay(const SessionState& s, const std::vector<KeyEvent>& events) {
    std::vector<SessionState> states;
    states.reserve(events.size());
    const SessionState* current = &s;
    for (std::size_t i = 0; i < events.size(); ++i) {
        try {
            states.push_back(handle_key(*current, events[i]));
        } catch (const Error& e) {
            std::throw_with_nested(ReplayError(e.what(), i));
        }
        current = &states.back();
    }
    return states;
}

}  // namespace slice4d
