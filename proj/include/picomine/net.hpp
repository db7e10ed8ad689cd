// Thin POSIX TCP wrappers: client stream, ephemeral-port listener, and a
// line splitter with a hard cap on buffered bytes.
#pragma once

#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "picomine/stratum.hpp"  // kMaxLineBytes, FramingError

namespace picomine {

struct NetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TimeoutError : NetError {
    using NetError::NetError;
};

namespace detail {

[[noreturn]] inline void throw_errno(const std::string& what) {
    throw NetError(what + ": " + std::strerror(errno));
}

// poll() one fd for the given events; false on timeout. timeout_ms < 0 waits forever.
inline bool wait_for(int fd, short events, int timeout_ms) {
    pollfd p{fd, events, 0};
    for (;;) {
        int rc = ::poll(&p, 1, timeout_ms);
        if (rc > 0) return true;
        if (rc == 0) return false;
        if (errno != EINTR) throw_errno("poll");
    }
}

}  // namespace detail

// Move-only owner of a connected socket.
class TcpStream {
public:
    TcpStream() = default;
    explicit TcpStream(int fd) : fd_(fd) {}
    TcpStream(TcpStream&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
    TcpStream& operator=(TcpStream&& other) noexcept {
        if (this != &other) {
            close();
            fd_ = std::exchange(other.fd_, -1);
        }
        return *this;
    }
    TcpStream(const TcpStream&) = delete;
    TcpStream& operator=(const TcpStream&) = delete;
    ~TcpStream() { close(); }

    static TcpStream connect(const std::string& host, uint16_t port, int timeout_ms = 10000) {
        addrinfo hints{};
        hints.ai_family = AF_UNSPEC;
        hints.ai_socktype = SOCK_STREAM;
        addrinfo* results = nullptr;
        std::string port_str = std::to_string(port);
        int rc = ::getaddrinfo(host.c_str(), port_str.c_str(), &hints, &results);
        if (rc != 0)
            throw NetError("resolve " + host + ": " + gai_strerror(rc));
        std::string last_error = "no addresses";
        for (addrinfo* ai = results; ai != nullptr; ai = ai->ai_next) {
            int fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_NONBLOCK, ai->ai_protocol);
            if (fd < 0) {
                last_error = std::string("socket: ") + std::strerror(errno);
                continue;
            }
            rc = ::connect(fd, ai->ai_addr, ai->ai_addrlen);
            if (rc != 0 && errno == EINPROGRESS) {
                if (!detail::wait_for(fd, POLLOUT, timeout_ms)) {
                    ::close(fd);
                    ::freeaddrinfo(results);
                    throw TimeoutError("connect to " + host + ":" + port_str + " timed out");
                }
                int err = 0;
                socklen_t len = sizeof err;
                ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
                rc = err == 0 ? 0 : -1;
                errno = err;
            }
            if (rc != 0) {
                last_error = std::string("connect: ") + std::strerror(errno);
                ::close(fd);
                continue;
            }
            int one = 1;
            ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
            ::freeaddrinfo(results);
            return TcpStream(fd);
        }
        ::freeaddrinfo(results);
        throw NetError("connect to " + host + ":" + port_str + " failed: " + last_error);
    }

    bool is_open() const { return fd_ >= 0; }
    int fd() const { return fd_; }

    void send_all(std::string_view data, int timeout_ms = 10000) {
        size_t sent = 0;
        while (sent < data.size()) {
            if (!detail::wait_for(fd_, POLLOUT, timeout_ms))
                throw TimeoutError("send timed out");
            ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
            if (n < 0) {
                if (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR) continue;
                detail::throw_errno("send");
            }
            sent += static_cast<size_t>(n);
        }
    }

    // Returns bytes read; 0 means the peer closed. Throws TimeoutError on timeout.
    size_t recv_some(char* buf, size_t cap, int timeout_ms) {
        using clock = std::chrono::steady_clock;
        auto deadline = clock::now() + std::chrono::milliseconds(timeout_ms);
        for (;;) {
            int remaining = static_cast<int>(
                std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now())
                    .count());
            if (remaining < 0 || !detail::wait_for(fd_, POLLIN, remaining))
                throw TimeoutError("recv timed out");
            ssize_t n = ::recv(fd_, buf, cap, 0);
            if (n >= 0) return static_cast<size_t>(n);
            if (errno == EINTR || errno == EAGAIN || errno == EWOULDBLOCK) continue;
            detail::throw_errno("recv");
        }
    }

    // Wake any blocked reader on this socket (used for shutdown).
    void shutdown_both() {
        if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
    }

    void close() {
        if (fd_ >= 0) {
            ::close(fd_);
            fd_ = -1;
        }
    }

private:
    int fd_ = -1;
};

// Splits a TcpStream into LF-terminated lines, enforcing the codec's line cap.
class LineReader {
public:
    explicit LineReader(TcpStream& stream) : stream_(&stream) {}

    // One line without its trailing LF. nullopt when the peer closed and the
    // buffer drained. TimeoutError if no complete line arrives in time.
    std::optional<std::string> read_line(int timeout_ms) {
        using clock = std::chrono::steady_clock;
        auto deadline = clock::now() + std::chrono::milliseconds(timeout_ms);
        for (;;) {
            size_t nl = buffer_.find('\n');
            if (nl != std::string::npos) {
                std::string line = buffer_.substr(0, nl);
                buffer_.erase(0, nl + 1);
                return line;
            }
            if (buffer_.size() > kMaxLineBytes)
                throw FramingError("line exceeds 64 KiB cap");
            if (eof_) {
                if (buffer_.empty()) return std::nullopt;
                std::string line = std::move(buffer_);
                buffer_.clear();
                return line;
            }
            int remaining = static_cast<int>(
                std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now())
                    .count());
            if (remaining <= 0) throw TimeoutError("no complete line before deadline");
            char chunk[4096];
            size_t n = stream_->recv_some(chunk, sizeof chunk, remaining);
            if (n == 0)
                eof_ = true;
            else
                buffer_.append(chunk, n);
        }
    }

    bool at_eof() const { return eof_ && buffer_.empty(); }

private:
    TcpStream* stream_;
    std::string buffer_;
    bool eof_ = false;
};

// Accepting socket; port 0 binds an ephemeral port (read back via port()).
class TcpListener {
public:
    TcpListener() = default;
    TcpListener(TcpListener&& other) noexcept
        : fd_(std::exchange(other.fd_, -1)), port_(other.port_) {}
    TcpListener& operator=(TcpListener&& other) noexcept {
        if (this != &other) {
            close();
            fd_ = std::exchange(other.fd_, -1);
            port_ = other.port_;
        }
        return *this;
    }
    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;
    ~TcpListener() { close(); }

    static TcpListener bind_and_listen(uint16_t port) {
        int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_NONBLOCK, 0);
        if (fd < 0) detail::throw_errno("socket");
        int one = 1;
        ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
        addr.sin_port = htons(port);
        if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
            int saved = errno;
            ::close(fd);
            errno = saved;
            detail::throw_errno("bind");
        }
        if (::listen(fd, 16) != 0) {
            int saved = errno;
            ::close(fd);
            errno = saved;
            detail::throw_errno("listen");
        }
        socklen_t len = sizeof addr;
        ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
        TcpListener listener;
        listener.fd_ = fd;
        listener.port_ = ntohs(addr.sin_port);
        return listener;
    }

    uint16_t port() const { return port_; }
    bool is_open() const { return fd_ >= 0; }

    // nullopt on timeout or if the listener was closed concurrently.
    std::optional<TcpStream> accept(int timeout_ms) {
        if (fd_ < 0) return std::nullopt;
        if (!detail::wait_for(fd_, POLLIN, timeout_ms)) return std::nullopt;
        int client = ::accept(fd_, nullptr, nullptr);
        if (client < 0) {
            if (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR ||
                errno == ECONNABORTED || errno == EBADF || errno == EINVAL)
                return std::nullopt;
            detail::throw_errno("accept");
        }
        ::fcntl(client, F_SETFL, ::fcntl(client, F_GETFL, 0) | O_NONBLOCK);
        int one = 1;
        ::setsockopt(client, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
        return TcpStream(client);
    }

    void close() {
        if (fd_ >= 0) {
            ::close(fd_);
            fd_ = -1;
        }
    }

private:
    int fd_ = -1;
    uint16_t port_ = 0;
};

}  // namespace picomine
