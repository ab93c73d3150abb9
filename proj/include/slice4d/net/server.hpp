#pragma once

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstdint>
#include <cstring>
#include <list>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "slice4d/controller.hpp"
#include "slice4d/errors.hpp"
#include "slice4d/net/framing.hpp"
#include "slice4d/protocol.hpp"

namespace slice4d::net {

class SocketError : public Error {
public:
    using Error::Error;
};

/// Owns a file descriptor.
class Socket {
public:
    Socket() = default;
    explicit Socket(int fd) : fd_(fd) {}
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;
    Socket(Socket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
    Socket& operator=(Socket&& other) noexcept {
        if (this != &other) {
            reset();
            fd_ = std::exchange(other.fd_, -1);
        }
        return *this;
    }
    ~Socket() { reset(); }

    int fd() const noexcept { return fd_; }
    explicit operator bool() const noexcept { return fd_ >= 0; }

    void reset() {
        if (fd_ >= 0) ::close(fd_);
        fd_ = -1;
    }

private:
    int fd_ = -1;
};

inline void send_all(int fd, std::string_view bytes) {
    while (!bytes.empty()) {
        const ssize_t n = ::send(fd, bytes.data(), bytes.size(), MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw SocketError(std::string("send failed: ") + std::strerror(errno));
        }
        bytes.remove_prefix(static_cast<std::size_t>(n));
    }
}

/// Reads what is available; empty string on orderly shutdown.
inline std::string recv_some(int fd) {
    char buf[8192];
    while (true) {
        const ssize_t n = ::recv(fd, buf, sizeof(buf), 0);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw SocketError(std::string("recv failed: ") + std::strerror(errno));
        }
        return std::string(buf, static_cast<std::size_t>(n));
    }
}

struct BindAddress {
    std::string host;
    std::uint16_t port = 0;
};

/// "host:port"; a bare port binds to 127.0.0.1.
inline BindAddress parse_bind_address(std::string_view text) {
    BindAddress out{"127.0.0.1", 0};
    std::string_view port = text;
    if (const auto colon = text.rfind(':'); colon != std::string_view::npos) {
        out.host = std::string(text.substr(0, colon));
        port = text.substr(colon + 1);
    }
    if (port.empty()) throw SocketError("missing port in bind address");
    unsigned value = 0;
    for (char c : port) {
        if (c < '0' || c > '9') throw SocketError("bad port in bind address");
        value = value * 10 + static_cast<unsigned>(c - '0');
        if (value > 65535) throw SocketError("port out of range");
    }
    out.port = static_cast<std::uint16_t>(value);
    return out;
}

inline Socket listen_on(const BindAddress& address) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    hints.ai_flags = AI_PASSIVE;
    addrinfo* result = nullptr;
    const std::string port = std::to_string(address.port);
    if (const int rc = ::getaddrinfo(address.host.c_str(), port.c_str(), &hints, &result); rc != 0)
        throw SocketError("cannot resolve " + address.host + ": " + ::gai_strerror(rc));

    Socket sock(::socket(result->ai_family, result->ai_socktype, result->ai_protocol));
    if (!sock) {
        ::freeaddrinfo(result);
        throw SocketError(std::string("socket failed: ") + std::strerror(errno));
    }
    const int yes = 1;
    ::setsockopt(sock.fd(), SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    const int rc = ::bind(sock.fd(), result->ai_addr, result->ai_addrlen);
    ::freeaddrinfo(result);
    if (rc != 0) throw SocketError(std::string("bind failed: ") + std::strerror(errno));
    if (::listen(sock.fd(), 16) != 0)
        throw SocketError(std::string("listen failed: ") + std::strerror(errno));
    return sock;
}

inline std::uint16_t local_port(const Socket& sock) {
    sockaddr_in addr{};
    socklen_t len = sizeof(addr);
    if (::getsockname(sock.fd(), reinterpret_cast<sockaddr*>(&addr), &len) != 0)
        throw SocketError("getsockname failed");
    return ntohs(addr.sin_port);
}

/// Serves one connection to completion: one ProtocolSession per connection,
/// messages handled strictly in arrival order.
inline void serve_connection(int fd, const SessionConfig& defaults) {
    ProtocolSession session(defaults);
    std::string pending;
    while (pending.size() < 4) {
        std::string chunk = recv_some(fd);
        if (chunk.empty()) return;
        pending += chunk;
    }

    if (pending.compare(0, 4, "GET ") != 0) {
        FrameDecoder decoder;
        decoder.feed(pending);
        while (true) {
            while (auto msg = decoder.next()) {
                std::string out;
                for (const auto& reply : session.handle(*msg)) out += encode_frame(reply);
                send_all(fd, out);
            }
            std::string chunk = recv_some(fd);
            if (chunk.empty()) return;
            decoder.feed(chunk);
        }
    }

    constexpr std::size_t kMaxHandshakeBytes = 16 * 1024;
    std::size_t end;
    while ((end = pending.find("\r\n\r\n")) == std::string::npos) {
        if (pending.size() > kMaxHandshakeBytes) throw FramingError("handshake too long");
        std::string chunk = recv_some(fd);
        if (chunk.empty()) return;
        pending += chunk;
    }
    send_all(fd, websocket_handshake_response(std::string_view(pending).substr(0, end + 4)));

    WsDecoder decoder;
    decoder.feed(std::string_view(pending).substr(end + 4));
    while (true) {
        while (auto msg = decoder.next()) {
            switch (msg->opcode) {
                case WsOpcode::Text:
                case WsOpcode::Binary: {
                    std::string out;
                    for (const auto& reply : session.handle(msg->payload))
                        out += encode_ws_frame(WsOpcode::Text, reply);
                    send_all(fd, out);
                    break;
                }
                case WsOpcode::Ping:
                    send_all(fd, encode_ws_frame(WsOpcode::Pong, msg->payload));
                    break;
                case WsOpcode::Close:
                    send_all(fd, encode_ws_frame(WsOpcode::Close, msg->payload.substr(0, 2)));
                    return;
                default:
                    break;
            }
        }
        std::string chunk = recv_some(fd);
        if (chunk.empty()) return;
        decoder.feed(chunk);
    }
}

/// Accept loop; each connection runs on its own thread with its own session.
class Server {
public:
    Server(SessionConfig defaults, std::string_view bind_address)
        : defaults_(defaults), listener_(listen_on(parse_bind_address(bind_address))) {}

    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    ~Server() {
        stop();
        for (auto& w : workers_)
            if (w.thread.joinable()) w.thread.join();
    }

    std::uint16_t port() const { return local_port(listener_); }

    /// Blocks until stop() is called.
    void run() {
        while (!stopping_) {
            const int fd = ::accept(listener_.fd(), nullptr, nullptr);
            if (fd < 0) {
                if (errno == EINTR || errno == ECONNABORTED) continue;
                if (stopping_) break;
                throw SocketError(std::string("accept failed: ") + std::strerror(errno));
            }
            std::lock_guard lock(mutex_);
            reap_finished();
            if (stopping_) {
                ::close(fd);
                break;
            }
            const int yes = 1;
            ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &yes, sizeof(yes));
            open_fds_.insert(fd);
            auto done = std::make_shared<std::atomic<bool>>(false);
            workers_.push_back({std::thread([this, fd, done] {
                                    try {
                                        serve_connection(fd, defaults_);
                                    } catch (const std::exception&) {
                                        // framing or socket failure: drop this connection only
                                    }
                                    {
                                        std::lock_guard inner(mutex_);
                                        open_fds_.erase(fd);
                                        ::close(fd);
                                    }
                                    *done = true;
                                }),
                                done});
        }
    }

    std::size_t open_connections() const {
        std::lock_guard lock(mutex_);
        return open_fds_.size();
    }

    /// Async-signal-safe: ends run(); open connections are closed on destruction.
    void request_stop() noexcept {
        stopping_ = true;
        ::shutdown(listener_.fd(), SHUT_RDWR);
    }

    void stop() {
        stopping_ = true;
        ::shutdown(listener_.fd(), SHUT_RDWR);
        std::lock_guard lock(mutex_);
        for (int fd : open_fds_) ::shutdown(fd, SHUT_RDWR);
    }

private:
    struct Worker {
        std::thread thread;
        std::shared_ptr<std::atomic<bool>> done;
    };

    // Caller holds mutex_.
    void reap_finished() {
        for (auto it = workers_.begin(); it != workers_.end();) {
            if (*it->done) {
                it->thread.join();
                it = workers_.erase(it);
            } else {
                ++it;
            }
        }
    }

    SessionConfig defaults_;
    Socket listener_;
    std::atomic<bool> stopping_{false};
    mutable std::mutex mutex_;
    std::set<int> open_fds_;
    std::list<Worker> workers_;
};

}  // namespace slice4d::net
