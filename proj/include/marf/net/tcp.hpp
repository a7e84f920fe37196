#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "marf/net/udp.hpp"

namespace marf::net {

class ConnectionClosed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Connected IPv4 TCP stream carrying length-prefixed frames. Move-only.
class TcpStream {
public:
    TcpStream() = default;
    explicit TcpStream(int fd) : fd_(fd) {}
    ~TcpStream();
    TcpStream(TcpStream&& other) noexcept;
    TcpStream& operator=(TcpStream&& other) noexcept;
    TcpStream(const TcpStream&) = delete;
    TcpStream& operator=(const TcpStream&) = delete;

    /// Throws ConnectionClosed when the peer refuses or the timeout passes.
    static TcpStream connect(const Endpoint& to, std::chrono::milliseconds timeout);

    bool is_open() const { return fd_ >= 0; }
    void close();

    /// u32 big-endian body length, then the body.
    void write_frame(snmp::ByteView body);
    /// nullopt on timeout before any byte of the frame arrived. Throws
    /// ConnectionClosed on EOF or a stall mid-frame.
    std::optional<snmp::Bytes> read_frame(std::chrono::milliseconds timeout);

    static constexpr std::uint32_t kMaxFrame = 64u << 20;

private:
    bool wait_readable(std::chrono::milliseconds timeout);
    void read_exact(std::uint8_t* dst, std::size_t n, std::chrono::milliseconds timeout);

    int fd_ = -1;
};

class TcpListener {
public:
    /// Port 0 picks an ephemeral port. Throws BindFailure.
    explicit TcpListener(const Endpoint& local);
    ~TcpListener();
    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;

    std::uint16_t port() const { return port_; }
    std::optional<TcpStream> accept(std::chrono::milliseconds timeout);

private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

}  // namespace marf::net
