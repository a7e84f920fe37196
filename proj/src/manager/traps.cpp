#include "marf/manager/traps.hpp"

#include "marf/agent/agent.hpp"

namespace marf::manager {

std::optional<TrapRecord> parse_trap(snmp::ByteView datagram)
{
    snmp::SnmpMessage m;
    try {
        m = snmp::decode_message(datagram);
    } catch (const std::exception&) {
        return std::nullopt;
    }
    const auto& vbs = m.pdu.varbinds;
    if (m.pdu.kind != snmp::PduKind::Trap || vbs.size() < 2) return std::nullopt;
    const auto* up = std::get_if<snmp::TimeTicks>(&vbs[0].value);
    const auto* id = std::get_if<Oid>(&vbs[1].value);
    if (vbs[0].oid != agent::kSysUpTime0 || vbs[1].oid != agent::kSnmpTrapOid0 || !up || !id) return std::nullopt;
    TrapRecord r;
    r.received = std::chrono::system_clock::now();
    r.community = m.community;
    r.uptime = *up;
    r.notification = *id;
    r.varbinds.assign(vbs.begin() + 2, vbs.end());
    return r;
}

TrapListener::TrapListener(const net::Endpoint& bind, std::size_t capacity) : capacity_(capacity ? capacity : 1)
{
    socket_.bind(bind);
    port_ = socket_.local_port();
}

TrapListener::~TrapListener() { stop(); }

void TrapListener::start()
{
    if (!thread_.joinable()) thread_ = std::jthread([this](std::stop_token st) { loop(st); });
}

void TrapListener::stop()
{
    thread_.request_stop();
    if (thread_.joinable()) thread_.join();
}

void TrapListener::loop(std::stop_token st)
{
    while (!st.stop_requested()) {
        if (auto d = socket_.receive(std::chrono::milliseconds(50))) accept(d->data, d->from);
    }
}

void TrapListener::accept(snmp::ByteView datagram, const net::Endpoint& from)
{
    auto r = parse_trap(datagram);
    if (!r) {
        ++malformed_;
        return;
    }
    r->from = from;
    {
        std::lock_guard lock(mutex_);
        log_.push_back(std::move(*r));
        while (log_.size() > capacity_) log_.pop_front();
        ++received_;
    }
    cv_.notify_all();
}

std::vector<TrapRecord> TrapListener::snapshot() const
{
    std::lock_guard lock(mutex_);
    return {log_.begin(), log_.end()};
}

bool TrapListener::wait_for(std::uint64_t count, std::chrono::milliseconds timeout) const
{
    std::unique_lock lock(mutex_);
    return cv_.wait_for(lock, timeout, [&] { return received_.load() >= count; });
}

}  // namespace marf::manager
