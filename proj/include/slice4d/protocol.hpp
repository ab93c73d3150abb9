#pragma once

// Session protocol. Each client message is one JSON object with a "type":
//
//   {"type":"key","symbol":"4","shifted":false}
//   {"type":"set_param","name":"c0","value":0.5}   theta0|alpha|c0|step_alpha|step_c0
//   {"type":"get_state"}
//   {"type":"reset"}
//
// and is answered by a "state" message then a "mesh" message, or by a single
// {"type":"error","code":...,"detail":...}.

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "slice4d/controller.hpp"
#include "slice4d/errors.hpp"
#include "slice4d/json_io.hpp"

namespace slice4d {

inline json state_message(const SessionState& s) {
    return {{"type", "state"},
            {"orientation", to_json(s.orientation)},
            {"alpha", s.alpha.radians()},
            {"beta", s.beta().radians()},
            {"c0", s.c0},
            {"theta0", s.theta0.radians()}};
}

inline json mesh_message(const SliceMesh& mesh) {
    json j = to_json(mesh);
    j["type"] = "mesh";
    return j;
}

inline json error_message(std::string_view code, std::string_view detail) {
    return {{"type", "error"}, {"code", code}, {"detail", detail}};
}

namespace detail {

struct ProtocolViolation {
    std::string code;
    std::string detail;
};

inline double finite_value(const json& msg) {
    const auto it = msg.find("value");
    if (it == msg.end() || !it->is_number())
        throw ProtocolViolation{"bad_message", "set_param needs a numeric 'value'"};
    const double v = it->get<double>();
    if (!std::isfinite(v)) throw ProtocolViolation{"invalid_value", "value must be finite"};
    return v;
}

}  // namespace detail

/// One connection's session. Not thread-safe; the host feeds it messages in
/// arrival order.
class ProtocolSession {
public:
    explicit ProtocolSession(SessionConfig defaults = {})
        : defaults_(defaults), state_(make_session(defaults_)) {}

    const SessionState& state() const noexcept { return state_; }

    /// Replies to one message, serialized compactly.
    std::vector<std::string> handle(std::string_view text) {
        std::vector<std::string> out;
        for (const auto& reply : handle_json(text)) out.push_back(reply.dump());
        return out;
    }

    std::vector<json> handle_json(std::string_view text) {
        json msg;
        try {
            msg = json::parse(text);
        } catch (const json::exception& e) {
            return {error_message("bad_json", e.what())};
        }
        try {
            if (!msg.is_object()) return {error_message("bad_message", "message must be an object")};
            apply(msg);
            // State goes first; a degenerate slice turns the pair into one error.
            json state = state_message(state_);
            json mesh = mesh_message(current_slice(state_));
            return {std::move(state), std::move(mesh)};
        } catch (const detail::ProtocolViolation& v) {
            return {error_message(v.code, v.detail)};
        } catch (const UnknownKey& e) {
            return {error_message("unknown_key", e.what())};
        } catch (const DegenerateSlice& e) {
            return {error_message("degenerate_slice", e.what())};
        } catch (const Error& e) {
            return {error_message("invalid_value", e.what())};
        } catch (const json::exception& e) {
            return {error_message("bad_message", e.what())};
        }
    }

private:
    void apply(const json& msg) {
        const auto type_it = msg.find("type");
        if (type_it == msg.end() || !type_it->is_string())
            throw detail::ProtocolViolation{"bad_message", "missing string field 'type'"};
        const std::string& type = type_it->get_ref<const std::string&>();

        if (type == "key") {
            const auto sym = msg.find("symbol");
            if (sym == msg.end() || !sym->is_string() || sym->get_ref<const std::string&>().size() != 1)
                throw detail::ProtocolViolation{"bad_message", "key needs a one-character 'symbol'"};
            bool shifted = false;
            if (const auto sh = msg.find("shifted"); sh != msg.end()) {
                if (!sh->is_boolean())
                    throw detail::ProtocolViolation{"bad_message", "'shifted' must be a boolean"};
                shifted = sh->get<bool>();
            }
            state_ = handle_key(state_, KeyEvent{sym->get_ref<const std::string&>()[0], shifted});
        } else if (type == "set_param") {
            const auto name_it = msg.find("name");
            if (name_it == msg.end() || !name_it->is_string())
                throw detail::ProtocolViolation{"bad_message", "set_param needs a string 'name'"};
            const std::string& name = name_it->get_ref<const std::string&>();
            const double v = detail::finite_value(msg);
            SessionState next = state_;
            if (name == "theta0") next.theta0 = Angle(v);
            else if (name == "alpha") next.alpha = Angle(v);
            else if (name == "c0") next.c0 = v;
            else if (name == "step_alpha") next.step_alpha = Angle(v);
            else if (name == "step_c0") next.step_c0 = v;
            else throw detail::ProtocolViolation{"unknown_param", "unknown parameter '" + name + "'"};
            state_ = std::move(next);
        } else if (type == "get_state") {
            // read-only
        } else if (type == "reset") {
            state_ = make_session(defaults_);
        } else {
            throw detail::ProtocolViolation{"bad_message", "unknown message type '" + type + "'"};
        }
    }

    SessionConfig defaults_;
    SessionState state_;
};

}  // namespace slice4d
