#include "marf/manager/client.hpp"

#include <random>

#include <fmt/format.h>

namespace marf::manager {

void TargetSpec::validate() const
{
    if (timeout.count() <= 0) throw std::invalid_argument("timeout must be positive");
    if (retries < 0) throw std::invalid_argument("retries must not be negative");
}

Timeout::Timeout(const std::string& target) : std::runtime_error(fmt::format("no response from {}", target)) {}

ErrorResponse::ErrorResponse(ErrorStatus status, std::int32_t index, std::vector<Varbind> varbinds)
    : std::runtime_error(fmt::format("{} at varbind {}", snmp::to_string(status), index)), status_(status),
      index_(index), varbinds_(std::move(varbinds))
{
}

LoopDetected::LoopDetected(const Oid& previous, const Oid& returned)
    : std::runtime_error(fmt::format("agent returned {} after {}; walk would not terminate", returned.str(),
                                     previous.str())),
      previous_(previous), returned_(returned)
{
}

SnmpClient::SnmpClient(TargetSpec target)
    : SnmpClient(target, std::make_shared<net::UdpTransport>(target.endpoint,
                                                             net::RetryPolicy{target.timeout, target.retries}))
{
}

SnmpClient::SnmpClient(TargetSpec target, std::shared_ptr<net::Transport> transport)
    : target_(std::move(target)), transport_(std::move(transport))
{
    target_.validate();
    std::random_device rd;
    next_id_ = static_cast<std::int32_t>(rd() & 0x3fffffff);
}

std::vector<Varbind> SnmpClient::exchange(snmp::PduKind kind, std::vector<Varbind> vbs, const std::string& community,
                                          std::int32_t non_repeaters, std::int32_t max_repetitions)
{
    snmp::SnmpMessage m;
    m.community = community;
    m.pdu.kind = kind;
    m.pdu.request_id = next_id_.fetch_add(1) & 0x7fffffff;
    m.pdu.error_status = non_repeaters;
    m.pdu.error_index = max_repetitions;
    m.pdu.varbinds = std::move(vbs);
    auto resp = transport_->exchange(m);
    if (!resp) throw Timeout(transport_->describe());
    if (resp->pdu.error_status != 0) {
        throw ErrorResponse(static_cast<ErrorStatus>(resp->pdu.error_status), resp->pdu.error_index,
                            std::move(resp->pdu.varbinds));
    }
    return std::move(resp->pdu.varbinds);
}

namespace {

std::vector<Varbind> nulls(const std::vector<Oid>& oids)
{
    std::vector<Varbind> vbs;
    for (const auto& o : oids) vbs.push_back({o, snmp::Null{}});
    return vbs;
}

}  // namespace

std::vector<Varbind> SnmpClient::get(const std::vector<Oid>& oids)
{
    return exchange(snmp::PduKind::Get, nulls(oids), target_.read_community);
}

std::vector<Varbind> SnmpClient::getnext(const std::vector<Oid>& oids)
{
    return exchange(snmp::PduKind::GetNext, nulls(oids), target_.read_community);
}

std::vector<Varbind> SnmpClient::getbulk(const std::vector<Oid>& oids, std::int32_t non_repeaters,
                                         std::int32_t max_repetitions)
{
    return exchange(snmp::PduKind::GetBulk, nulls(oids), target_.read_community, non_repeaters, max_repetitions);
}

std::vector<Varbind> SnmpClient::set(const std::vector<Varbind>& varbinds)
{
    return exchange(snmp::PduKind::Set, varbinds, target_.write_community);
}

std::vector<Varbind> SnmpClient::walk(const Oid& root)
{
    std::vector<Varbind> out;
    Oid cur = root;
    while (true) {
        auto vbs = getnext({cur});
        if (vbs.size() != 1) throw ErrorResponse(ErrorStatus::GenErr, 0, std::move(vbs));
        auto& vb = vbs[0];
        if (std::holds_alternative<snmp::EndOfMibView>(vb.value)) break;
        if (!(cur < vb.oid)) throw LoopDetected(cur, vb.oid);
        if (!root.is_strict_prefix_of(vb.oid)) break;
        cur = vb.oid;
        out.push_back(std::move(vb));
    }
    return out;
}

}  // namespace marf::manager
