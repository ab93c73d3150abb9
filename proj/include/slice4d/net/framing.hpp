#pragma once

// Message framing for the session server. Two transports share one port:
//
//   raw:       [u32 big-endian length][JSON bytes] in both directions
//   websocket: RFC 6455 text frames, one JSON message per message
//
// A connection whose first bytes are "GET " is treated as a websocket
// upgrade; anything else is raw.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <openssl/evp.h>

#include "slice4d/errors.hpp"

namespace slice4d::net {

inline constexpr std::size_t kMaxMessageBytes = 1u << 20;

/// Unrecoverable stream corruption; the connection must be closed.
class FramingError : public Error {
public:
    using Error::Error;
};

inline std::string encode_frame(std::string_view payload) {
    if (payload.size() > kMaxMessageBytes) throw FramingError("message too large");
    const auto n = static_cast<std::uint32_t>(payload.size());
    std::string out;
    out.reserve(4 + payload.size());
    out.push_back(static_cast<char>((n >> 24) & 0xff));
    out.push_back(static_cast<char>((n >> 16) & 0xff));
    out.push_back(static_cast<char>((n >> 8) & 0xff));
    out.push_back(static_cast<char>(n & 0xff));
    out.append(payload);
    return out;
}

/// Incremental decoder for length-prefixed frames.
class FrameDecoder {
public:
    void feed(std::string_view bytes) { buffer_.append(bytes); }

    std::optional<std::string> next() {
        if (buffer_.size() < 4) return std::nullopt;
        std::uint32_t n = 0;
        for (int i = 0; i < 4; ++i) n = (n << 8) | static_cast<unsigned char>(buffer_[i]);
        if (n > kMaxMessageBytes) throw FramingError("declared frame length exceeds limit");
        if (buffer_.size() < 4 + std::size_t{n}) return std::nullopt;
        std::string payload = buffer_.substr(4, n);
        buffer_.erase(0, 4 + std::size_t{n});
        return payload;
    }

    std::size_t buffered() const noexcept { return buffer_.size(); }

private:
    std::string buffer_;
};

enum class WsOpcode : std::uint8_t {
    Continuation = 0x0,
    Text = 0x1,
    Binary = 0x2,
    Close = 0x8,
    Ping = 0x9,
    Pong = 0xA,
};

struct WsMessage {
    WsOpcode opcode = WsOpcode::Text;
    std::string payload;
};

/// base64(SHA-1(key + GUID)), the Sec-WebSocket-Accept value.
inline std::string websocket_accept_key(std::string_view client_key) {
    static constexpr std::string_view kGuid = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";
    std::string input(client_key);
    input.append(kGuid);
    constexpr int kSha1Bytes = 20;
    std::array<unsigned char, kSha1Bytes> digest{};
    unsigned int digest_len = 0;
    if (EVP_Digest(input.data(), input.size(), digest.data(), &digest_len, EVP_sha1(), nullptr) != 1 ||
        digest_len != kSha1Bytes)
        throw Error("SHA-1 digest failed");
    std::array<unsigned char, 4 * ((kSha1Bytes + 2) / 3) + 1> encoded{};
    const int len = EVP_EncodeBlock(encoded.data(), digest.data(), kSha1Bytes);
    return std::string(reinterpret_cast<const char*>(encoded.data()), static_cast<std::size_t>(len));
}

/// Value of an HTTP header (case-insensitive name), trimmed.
inline std::optional<std::string> header_value(std::string_view request, std::string_view name) {
    auto lower = [](std::string_view s) {
        std::string out(s);
        std::transform(out.begin(), out.end(), out.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        return out;
    };
    const std::string wanted = lower(name);
    std::size_t pos = request.find("\r\n");
    while (pos != std::string_view::npos && pos + 2 < request.size()) {
        const std::size_t begin = pos + 2;
        const std::size_t end = request.find("\r\n", begin);
        const std::string_view line =
            request.substr(begin, (end == std::string_view::npos ? request.size() : end) - begin);
        const std::size_t colon = line.find(':');
        if (colon != std::string_view::npos && lower(line.substr(0, colon)) == wanted) {
            std::string_view v = line.substr(colon + 1);
            while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
            while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.remove_suffix(1);
            return std::string(v);
        }
        pos = end;
    }
    return std::nullopt;
}

/// 101 response for a websocket upgrade request; throws FramingError if the
/// request is not one.
inline std::string websocket_handshake_response(std::string_view request) {
    if (request.substr(0, 4) != "GET ") throw FramingError("not an HTTP GET");
    const auto key = header_value(request, "Sec-WebSocket-Key");
    if (!key) throw FramingError("missing Sec-WebSocket-Key");
    return "HTTP/1.1 101 Switching Protocols\r\n"
           "Upgrade: websocket\r\n"
           "Connection: Upgrade\r\n"
           "Sec-WebSocket-Accept: " +
           websocket_accept_key(*key) + "\r\n\r\n";
}

/// Server-to-client frame (FIN set, unmasked).
inline std::string encode_ws_frame(WsOpcode opcode, std::string_view payload) {
    std::string out;
    out.push_back(static_cast<char>(0x80 | static_cast<std::uint8_t>(opcode)));
    const std::size_t n = payload.size();
    if (n < 126) {
        out.push_back(static_cast<char>(n));
    } else if (n <= 0xffff) {
        out.push_back(static_cast<char>(126));
        out.push_back(static_cast<char>((n >> 8) & 0xff));
        out.push_back(static_cast<char>(n & 0xff));
    } else {
        out.push_back(static_cast<char>(127));
        for (int shift = 56; shift >= 0; shift -= 8)
            out.push_back(static_cast<char>((static_cast<std::uint64_t>(n) >> shift) & 0xff));
    }
    out.append(payload);
    return out;
}

/// Client-to-server frame with the given mask; used by tests and clients.
inline std::string encode_masked_ws_frame(WsOpcode opcode, std::string_view payload,
                                          std::array<unsigned char, 4> mask, bool fin = true) {
    std::string out = encode_ws_frame(opcode, payload);
    if (!fin) out[0] = static_cast<char>(static_cast<unsigned char>(out[0]) & 0x7f);
    const std::size_t header = out.size() - payload.size();
    out[1] = static_cast<char>(static_cast<unsigned char>(out[1]) | 0x80);
    std::string masked = out.substr(0, header);
    masked.append(reinterpret_cast<const char*>(mask.data()), 4);
    for (std::size_t i = 0; i < payload.size(); ++i)
        masked.push_back(static_cast<char>(static_cast<unsigned char>(payload[i]) ^ mask[i % 4]));
    return masked;
}

/// Incremental decoder for client frames. Reassembles fragmented data
/// messages; control frames are returned as they arrive.
class WsDecoder {
public:
    void feed(std::string_view bytes) { buffer_.append(bytes); }

    std::optional<WsMessage> next() {
        while (true) {
            if (buffer_.size() < 2) return std::nullopt;
            const auto b0 = static_cast<unsigned char>(buffer_[0]);
            const auto b1 = static_cast<unsigned char>(buffer_[1]);
            const bool fin = (b0 & 0x80) != 0;
            const auto opcode = static_cast<WsOpcode>(b0 & 0x0f);
            if ((b0 & 0x70) != 0) throw FramingError("reserved bits set");
            if ((b1 & 0x80) == 0) throw FramingError("client frame not masked");

            std::size_t header = 2;
            std::uint64_t n = b1 & 0x7f;
            if (n == 126) {
                if (buffer_.size() < 4) return std::nullopt;
                n = (std::uint64_t{static_cast<unsigned char>(buffer_[2])} << 8) |
                    static_cast<unsigned char>(buffer_[3]);
                header = 4;
            } else if (n == 127) {
                if (buffer_.size() < 10) return std::nullopt;
                n = 0;
                for (int i = 2; i < 10; ++i) n = (n << 8) | static_cast<unsigned char>(buffer_[i]);
                header = 10;
            }
            if (n > kMaxMessageBytes) throw FramingError("frame too large");
            if (buffer_.size() < header + 4 + n) return std::nullopt;

            const auto* mask = reinterpret_cast<const unsigned char*>(buffer_.data() + header);
            std::string payload(n, '\0');
            for (std::size_t i = 0; i < n; ++i)
                payload[i] = static_cast<char>(
                    static_cast<unsigned char>(buffer_[header + 4 + i]) ^ mask[i % 4]);
            buffer_.erase(0, header + 4 + n);

            const bool control = (static_cast<std::uint8_t>(opcode) & 0x08) != 0;
            if (control) {
                if (!fin || n > 125) throw FramingError("malformed control frame");
                return WsMessage{opcode, std::move(payload)};
            }
            if (opcode == WsOpcode::Continuation) {
                if (!partial_) throw FramingError("continuation without a started message");
            } else {
                if (partial_) throw FramingError("new message before previous one finished");
                partial_ = WsMessage{opcode, {}};
            }
            if (partial_->payload.size() + payload.size() > kMaxMessageBytes)
                throw FramingError("message too large");
            partial_->payload.append(payload);
            if (fin) {
                WsMessage done = std::move(*partial_);
                partial_.reset();
                return done;
            }
        }
    }

private:
    std::string buffer_;
    std::optional<WsMessage> partial_;
};

}  // namespace slice4d::net
