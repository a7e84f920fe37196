#include "marf/net/transport.hpp"

namespace marf::net {

UdpTransport::UdpTransport(Endpoint target, RetryPolicy policy) : target_(std::move(target)), policy_(policy)
{
    socket_.bind(Endpoint{"0.0.0.0", 0});
}

std::optional<snmp::SnmpMessage> UdpTransport::exchange(const snmp::SnmpMessage& request)
{
    std::lock_guard lock(mutex_);
    auto bytes = snmp::encode_message(request);
    for (int attempt = 0; attempt <= policy_.retries; ++attempt) {
        socket_.send_to(bytes, target_);
        auto deadline = std::chrono::steady_clock::now() + policy_.timeout;
        while (true) {
            auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
            if (left.count() <= 0) break;
            auto d = socket_.receive(left);
            if (!d) break;
            try {
                auto m = snmp::decode_message(d->data);
                if (m.pdu.kind == snmp::PduKind::Response && m.pdu.request_id == request.pdu.request_id) {
                    return m;
                }
            } catch (const snmp::DecodeError&) {
            }
        }
    }
    return std::nullopt;
}

}  // namespace marf::net
