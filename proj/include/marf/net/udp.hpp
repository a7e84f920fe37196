#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "marf/snmp/ber.hpp"

namespace marf::net {

struct Endpoint {
    std::string host = "127.0.0.1";
    std::uint16_t port = 161;

    /// "host:port", "host" or ":port". Throws std::invalid_argument.
    static Endpoint parse(std::string_view text, std::uint16_t default_port = 161);
    std::string str() const;

    friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

class BindFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Datagram {
    snmp::Bytes data;
    Endpoint from;
};

/// IPv4 UDP socket. Move-only.
class UdpSocket {
public:
    UdpSocket();
    ~UdpSocket();
    UdpSocket(UdpSocket&& other) noexcept;
    UdpSocket& operator=(UdpSocket&& other) noexcept;
    UdpSocket(const UdpSocket&) = delete;
    UdpSocket& operator=(const UdpSocket&) = delete;

    /// Port 0 picks an ephemeral port. Throws BindFailure.
    void bind(const Endpoint& local);
    std::uint16_t local_port() const;

    void send_to(snmp::ByteView data, const Endpoint& to);
    /// Waits up to `timeout` for one datagram.
    std::optional<Datagram> receive(std::chrono::milliseconds timeout);

private:
    int fd_ = -1;
};

}  // namespace marf::net
