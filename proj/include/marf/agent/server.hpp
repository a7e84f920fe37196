#pragma once

#include <atomic>
#include <cstdint>
#include <thread>

#include "marf/agent/agent.hpp"
#include "marf/net/udp.hpp"

namespace marf::agent {

/// Receive loop that feeds datagrams to Agent::route_or_serve and sends the answers back.
class AgentServer {
public:
    /// Binds immediately; throws net::BindFailure.
    AgentServer(Agent& agent, const net::Endpoint& listen);
    ~AgentServer();
    AgentServer(const AgentServer&) = delete;
    AgentServer& operator=(const AgentServer&) = delete;

    void start();
    void stop();

    std::uint16_t port() const { return port_; }
    std::uint64_t packets_in() const { return packets_in_.load(); }
    std::uint64_t parse_errors() const { return parse_errors_.load(); }

private:
    void loop(std::stop_token st);

    Agent& agent_;
    net::UdpSocket socket_;
    std::uint16_t port_ = 0;
    std::atomic<std::uint64_t> packets_in_{0};
    std::atomic<std::uint64_t> parse_errors_{0};
    std::jthread thread_;
};

}  // namespace marf::agent
