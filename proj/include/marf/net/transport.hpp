#pragma once

#include <chrono>
#include <mutex>
#include <optional>
#include <string>

#include "marf/net/udp.hpp"
#include "marf/snmp/message.hpp"

namespace marf::net {

/// Request/response exchange with one SNMP entity.
class Transport {
public:
    virtual ~Transport() = default;
    /// The matching response, or nullopt once the timeout and retries are used up.
    virtual std::optional<snmp::SnmpMessage> exchange(const snmp::SnmpMessage& request) = 0;
    virtual std::string describe() const = 0;
};

struct RetryPolicy {
    std::chrono::milliseconds timeout{2000};
    int retries = 1;
};

/// SNMP over UDP. Responses are matched on request-id; stray or malformed
/// datagrams are discarded. Safe to share between threads (exchanges are serialized).
class UdpTransport : public Transport {
public:
    explicit UdpTransport(Endpoint target, RetryPolicy policy = {});

    std::optional<snmp::SnmpMessage> exchange(const snmp::SnmpMessage& request) override;
    std::string describe() const override { return "udp:" + target_.str(); }

    const Endpoint& target() const { return target_; }
    const RetryPolicy& policy() const { return policy_; }

private:
    Endpoint target_;
    RetryPolicy policy_;
    std::mutex mutex_;
    UdpSocket socket_;
};

}  // namespace marf::net
