#pragma once

#include <memory>
#include <thread>

#include "marf/manager/client.hpp"
#include "marf/manager/poller.hpp"
#include "marf/manager/traps.hpp"
#include "marf/smi/augments.hpp"

namespace httplib {
class Server;
}

namespace marf::manager {

inline constexpr int kGatewaySchemaVersion = 1;

struct GatewayConfig {
    net::Endpoint listen{"127.0.0.1", 0};
    /// Counters per service are polled this often for /stats; 0 disables polling.
    std::chrono::milliseconds stats_interval{1000};
    std::size_t stats_keep = 300;
};

/// JSON facade over one master agent. Every value it serves comes from an
/// SNMP request issued while handling the HTTP request (stats excepted,
/// which come from the poller).
class HttpGateway {
public:
    /// `traps` may be null, in which case /api/traps serves an empty log.
    HttpGateway(const smi::MibRegistry& registry, std::shared_ptr<SnmpClient> agent, GatewayConfig config,
                std::shared_ptr<TrapListener> traps = nullptr);
    ~HttpGateway();
    HttpGateway(const HttpGateway&) = delete;
    HttpGateway& operator=(const HttpGateway&) = delete;

    /// Binds and serves in the background. Throws net::BindFailure.
    void start();
    void stop();
    std::uint16_t port() const { return port_; }

    /// The handlers, callable without HTTP. Return (status code, JSON body).
    std::pair<int, std::string> services();
    std::pair<int, std::string> stats(std::uint32_t index);
    std::pair<int, std::string> configure(std::uint32_t index, std::string_view body);
    std::pair<int, std::string> traps();

private:
    const smi::MibRegistry& registry_;
    std::vector<smi::ResolvedTable> tables_;
    std::shared_ptr<SnmpClient> agent_;
    GatewayConfig config_;
    std::shared_ptr<TrapListener> traps_;
    std::unique_ptr<StatPoller> poller_;
    std::unique_ptr<httplib::Server> server_;
    std::uint16_t port_ = 0;
    std::jthread thread_;
};

}  // namespace marf::manager
