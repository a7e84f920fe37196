#include "marf/net/udp.hpp"
#include "sockaddr.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <system_error>

#include <fmt/format.h>

namespace marf::net {

sockaddr_in to_sockaddr(const Endpoint& ep)
{
    sockaddr_in sa{};
    sa.sin_family = AF_INET;
    sa.sin_port = htons(ep.port);
    if (ep.host.empty() || ep.host == "0.0.0.0" || ep.host == "*") {
        sa.sin_addr.s_addr = htonl(INADDR_ANY);
        return sa;
    }
    if (inet_pton(AF_INET, ep.host.c_str(), &sa.sin_addr) == 1) {
        return sa;
    }
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_DGRAM;
    addrinfo* res = nullptr;
    if (getaddrinfo(ep.host.c_str(), nullptr, &hints, &res) != 0 || !res) {
        throw std::invalid_argument(fmt::format("cannot resolve host '{}'", ep.host));
    }
    sa.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
    freeaddrinfo(res);
    return sa;
}

namespace {

[[noreturn]] void sys_fail(const char* what)
{
    throw std::system_error(errno, std::generic_category(), what);
}

}  // namespace

Endpoint Endpoint::parse(std::string_view text, std::uint16_t default_port)
{
    Endpoint ep;
    ep.port = default_port;
    auto colon = text.rfind(':');
    std::string_view host = text;
    if (colon != std::string_view::npos) {
        host = text.substr(0, colon);
        auto port = text.substr(colon + 1);
        unsigned value = 0;
        auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
        if (ec != std::errc{} || ptr != port.data() + port.size() || value > 65535) {
            throw std::invalid_argument(fmt::format("bad port in '{}'", text));
        }
        ep.port = static_cast<std::uint16_t>(value);
    }
    if (!host.empty()) {
        ep.host = std::string(host);
    }
    return ep;
}

std::string Endpoint::str() const { return fmt::format("{}:{}", host, port); }

UdpSocket::UdpSocket()
{
    fd_ = ::socket(AF_INET, SOCK_DGRAM | SOCK_CLOEXEC, 0);
    if (fd_ < 0) {
        sys_fail("socket");
    }
}

UdpSocket::~UdpSocket()
{
    if (fd_ >= 0) {
        ::close(fd_);
    }
}

UdpSocket::UdpSocket(UdpSocket&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }

UdpSocket& UdpSocket::operator=(UdpSocket&& other) noexcept
{
    if (this != &other) {
        if (fd_ >= 0) {
            ::close(fd_);
        }
        fd_ = other.fd_;
        other.fd_ = -1;
    }
    return *this;
}

void UdpSocket::bind(const Endpoint& local)
{
    auto sa = to_sockaddr(local);
    if (::bind(fd_, reinterpret_cast<const sockaddr*>(&sa), sizeof sa) != 0) {
        throw BindFailure(fmt::format("cannot bind UDP {}: {}", local.str(), std::strerror(errno)));
    }
}

std::uint16_t UdpSocket::local_port() const
{
    sockaddr_in sa{};
    socklen_t len = sizeof sa;
    if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&sa), &len) != 0) {
        sys_fail("getsockname");
    }
    return ntohs(sa.sin_port);
}

void UdpSocket::send_to(snmp::ByteView data, const Endpoint& to)
{
    auto sa = to_sockaddr(to);
    // UDP is best effort; a refused or dropped datagram is not an error here.
    (void)::sendto(fd_, data.data(), data.size(), 0, reinterpret_cast<const sockaddr*>(&sa), sizeof sa);
}

std::optional<Datagram> UdpSocket::receive(std::chrono::milliseconds timeout)
{
    auto deadline = std::chrono::steady_clock::now() + timeout;
    while (true) {
        auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
        if (left.count() < 0) {
            return std::nullopt;
        }
        pollfd p{fd_, POLLIN, 0};
        int rc = ::poll(&p, 1, static_cast<int>(left.count()));
        if (rc < 0) {
            if (errno == EINTR) continue;
            sys_fail("poll");
        }
        if (rc == 0) {
            return std::nullopt;
        }
        Datagram d;
        d.data.resize(65536);
        sockaddr_in from{};
        socklen_t len = sizeof from;
        auto n = ::recvfrom(fd_, d.data.data(), d.data.size(), 0, reinterpret_cast<sockaddr*>(&from), &len);
        if (n < 0) {
            // ICMP port unreachable from an earlier send surfaces here on Linux.
            if (errno == ECONNREFUSED || errno == EINTR) continue;
            sys_fail("recvfrom");
        }
        d.data.resize(static_cast<std::size_t>(n));
        char buf[INET_ADDRSTRLEN] = {};
        inet_ntop(AF_INET, &from.sin_addr, buf, sizeof buf);
        d.from = Endpoint{buf, ntohs(from.sin_port)};
        return d;
    }
}

}  // namespace marf::net
