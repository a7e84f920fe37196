#include "marf/net/tcp.hpp"

#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <system_error>

#include <fmt/format.h>

#include "sockaddr.hpp"

namespace marf::net {

namespace {

bool poll_one(int fd, short events, std::chrono::milliseconds timeout)
{
    auto deadline = std::chrono::steady_clock::now() + timeout;
    while (true) {
        auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
        pollfd p{fd, events, 0};
        int rc = ::poll(&p, 1, static_cast<int>(std::max<std::int64_t>(left.count(), 0)));
        if (rc < 0 && errno == EINTR) continue;
        if (rc < 0) throw std::system_error(errno, std::generic_category(), "poll");
        return rc > 0;
    }
}

}  // namespace

TcpStream::~TcpStream() { close(); }

TcpStream::TcpStream(TcpStream&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }

TcpStream& TcpStream::operator=(TcpStream&& other) noexcept
{
    if (this != &other) {
        close();
        fd_ = other.fd_;
        other.fd_ = -1;
    }
    return *this;
}

void TcpStream::close()
{
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

TcpStream TcpStream::connect(const Endpoint& to, std::chrono::milliseconds timeout)
{
    auto sa = to_sockaddr(to);
    TcpStream s(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC | SOCK_NONBLOCK, 0));
    if (s.fd_ < 0) throw std::system_error(errno, std::generic_category(), "socket");
    int rc = ::connect(s.fd_, reinterpret_cast<const sockaddr*>(&sa), sizeof sa);
    if (rc != 0 && errno != EINPROGRESS) {
        throw ConnectionClosed(fmt::format("connect {}: {}", to.str(), std::strerror(errno)));
    }
    if (rc != 0) {
        if (!poll_one(s.fd_, POLLOUT, timeout)) throw ConnectionClosed(fmt::format("connect {}: timed out", to.str()));
        int err = 0;
        socklen_t len = sizeof err;
        ::getsockopt(s.fd_, SOL_SOCKET, SO_ERROR, &err, &len);
        if (err != 0) throw ConnectionClosed(fmt::format("connect {}: {}", to.str(), std::strerror(err)));
    }
    int one = 1;
    ::setsockopt(s.fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return s;
}

void TcpStream::write_frame(snmp::ByteView body)
{
    if (body.size() > kMaxFrame) throw std::length_error("frame too large");
    auto n = static_cast<std::uint32_t>(body.size());
    snmp::Bytes buf{static_cast<std::uint8_t>(n >> 24), static_cast<std::uint8_t>(n >> 16),
                    static_cast<std::uint8_t>(n >> 8), static_cast<std::uint8_t>(n)};
    buf.insert(buf.end(), body.begin(), body.end());
    std::size_t off = 0;
    while (off < buf.size()) {
        auto w = ::send(fd_, buf.data() + off, buf.size() - off, MSG_NOSIGNAL);
        if (w < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) {
            if (!poll_one(fd_, POLLOUT, std::chrono::seconds(10))) throw ConnectionClosed("send stalled");
            continue;
        }
        if (w < 0 && errno == EINTR) continue;
        if (w <= 0) throw ConnectionClosed(fmt::format("send: {}", std::strerror(errno)));
        off += static_cast<std::size_t>(w);
    }
}

bool TcpStream::wait_readable(std::chrono::milliseconds timeout) { return poll_one(fd_, POLLIN, timeout); }

void TcpStream::read_exact(std::uint8_t* dst, std::size_t n, std::chrono::milliseconds timeout)
{
    std::size_t got = 0;
    while (got < n) {
        if (!wait_readable(timeout)) throw ConnectionClosed("peer stalled mid-frame");
        auto r = ::recv(fd_, dst + got, n - got, 0);
        if (r < 0 && (errno == EINTR || errno == EAGAIN || errno == EWOULDBLOCK)) continue;
        if (r <= 0) throw ConnectionClosed(r == 0 ? "connection closed by peer" : std::strerror(errno));
        got += static_cast<std::size_t>(r);
    }
}

std::optional<snmp::Bytes> TcpStream::read_frame(std::chrono::milliseconds timeout)
{
    if (!wait_readable(timeout)) return std::nullopt;
    std::uint8_t hdr[4];
    read_exact(hdr, 4, timeout);
    std::uint32_t n = (std::uint32_t{hdr[0]} << 24) | (std::uint32_t{hdr[1]} << 16) | (std::uint32_t{hdr[2]} << 8) | hdr[3];
    if (n > kMaxFrame) throw ConnectionClosed(fmt::format("frame of {} bytes exceeds limit", n));
    snmp::Bytes body(n);
    read_exact(body.data(), n, timeout);
    return body;
}

TcpListener::TcpListener(const Endpoint& local)
{
    fd_ = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC | SOCK_NONBLOCK, 0);
    if (fd_ < 0) throw std::system_error(errno, std::generic_category(), "socket");
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    auto sa = to_sockaddr(local);
    if (::bind(fd_, reinterpret_cast<const sockaddr*>(&sa), sizeof sa) != 0 || ::listen(fd_, 16) != 0) {
        auto msg = fmt::format("cannot bind TCP {}: {}", local.str(), std::strerror(errno));
        ::close(fd_);
        throw BindFailure(msg);
    }
    sockaddr_in bound{};
    socklen_t len = sizeof bound;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len);
    port_ = ntohs(bound.sin_port);
}

TcpListener::~TcpListener()
{
    if (fd_ >= 0) ::close(fd_);
}

std::optional<TcpStream> TcpListener::accept(std::chrono::milliseconds timeout)
{
    if (!poll_one(fd_, POLLIN, timeout)) return std::nullopt;
    int fd = ::accept4(fd_, nullptr, nullptr, SOCK_CLOEXEC | SOCK_NONBLOCK);
    if (fd < 0) return std::nullopt;
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return TcpStream(fd);
}

}  // namespace marf::net
