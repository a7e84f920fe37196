#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <thread>

#include "marf/net/udp.hpp"
#include "marf/snmp/message.hpp"

namespace marf::manager {

struct TrapRecord {
    std::chrono::system_clock::time_point received;
    net::Endpoint from;
    std::string community;
    snmp::TimeTicks uptime;
    Oid notification;
    /// Varbinds after sysUpTime.0 and snmpTrapOID.0.
    std::vector<snmp::Varbind> varbinds;
};

/// Decodes an snmpV2-trap; nullopt unless the PDU is a trap whose first two
/// varbinds are sysUpTime.0 and snmpTrapOID.0.
std::optional<TrapRecord> parse_trap(snmp::ByteView datagram);

/// Receives traps on a UDP port into a bounded ring of the most recent events.
class TrapListener {
public:
    /// Binds immediately; throws net::BindFailure.
    explicit TrapListener(const net::Endpoint& bind, std::size_t capacity = 1000);
    ~TrapListener();
    TrapListener(const TrapListener&) = delete;
    TrapListener& operator=(const TrapListener&) = delete;

    void start();
    void stop();
    std::uint16_t port() const { return port_; }

    /// Oldest first.
    std::vector<TrapRecord> snapshot() const;
    std::uint64_t received() const { return received_.load(); }
    std::uint64_t malformed() const { return malformed_.load(); }
    /// Waits until at least `count` traps have been received in total.
    bool wait_for(std::uint64_t count, std::chrono::milliseconds timeout) const;

    /// Feeds one datagram as if it had arrived on the socket.
    void accept(snmp::ByteView datagram, const net::Endpoint& from);

private:
    void loop(std::stop_token st);

    net::UdpSocket socket_;
    std::uint16_t port_;
    std::size_t capacity_;
    mutable std::mutex mutex_;
    mutable std::condition_variable cv_;
    std::deque<TrapRecord> log_;
    std::atomic<std::uint64_t> received_{0};
    std::atomic<std::uint64_t> malformed_{0};
    std::jthread thread_;
};

}  // namespace marf::manager
