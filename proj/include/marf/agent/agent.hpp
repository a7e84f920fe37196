#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "marf/net/transport.hpp"
#include "marf/smi/augments.hpp"
#include "marf/snmp/message.hpp"

namespace marf::agent {

using snmp::BerValue;
using snmp::ErrorStatus;
using snmp::SnmpMessage;
using snmp::Varbind;

class DuplicateRegistration : public std::runtime_error {
public:
    explicit DuplicateRegistration(const Oid& oid);
    const Oid& oid() const { return oid_; }

private:
    Oid oid_;
};

/// Raised by delegates that proxy to another agent when it does not answer.
class SubAgentTimeout : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The varbinds of the SET under validation, so a delegate can check a value
/// against another one written in the same request.
class PendingSet {
public:
    explicit PendingSet(const std::vector<Varbind>& vbs) : vbs_(vbs) {}
    const BerValue* find(const Oid& oid) const;

private:
    const std::vector<Varbind>& vbs_;
};

using Validator = std::function<ErrorStatus(const BerValue&, const PendingSet&)>;

struct ManagedObject {
    /// Full instance OID (scalars end in .0 by convention).
    Oid oid;
    smi::Access access = smi::Access::ReadOnly;
    std::function<BerValue()> read;

    struct Writer {
        /// Must not change state.
        Validator validate;
        /// Must not fail.
        std::function<void(const BerValue&)> commit;
    };
    /// Present iff access is read-write.
    std::optional<Writer> write;
    /// Enables generic type and range checks on SET.
    std::optional<smi::Syntax> syntax;
};

/// Instrumentation behind a conceptual table; rows are keyed by a single integer index.
class RowSource {
public:
    virtual ~RowSource() = default;
    virtual std::vector<std::uint32_t> rows() const = 0;
    virtual BerValue read(const smi::ColumnDef& column, std::uint32_t row) const = 0;
    /// Called after generic type/range checks pass, for read-write columns only.
    virtual ErrorStatus validate(const smi::ColumnDef& column, std::uint32_t row, const BerValue& value,
                                 const PendingSet& pending) const;
    virtual void commit(const smi::ColumnDef& column, std::uint32_t row, const BerValue& value);
};

struct AgentConfig {
    std::string read_community = "public";
    std::string write_community = "private";
    /// Answer get-class requests carrying an unknown community with noAccess instead of dropping them.
    bool respond_to_bad_community = false;
    /// Drop SETs with a non-write community instead of answering noAccess.
    bool drop_bad_set_community = false;
    std::size_t max_message_size = snmp::kMaxDatagram;
    std::vector<net::Endpoint> trap_sinks;
    std::string trap_community = "public";
};

struct TrapEvent {
    Oid notification;
    std::vector<Varbind> varbinds;
    /// Agent uptime when the event was raised.
    snmp::TimeTicks timestamp;
};

inline const Oid kSysUpTime0{1, 3, 6, 1, 2, 1, 1, 3, 0};
inline const Oid kSnmpTrapOid0{1, 3, 6, 1, 6, 3, 1, 1, 4, 1, 0};

/// snmpV2-trap PDU: sysUpTime.0, snmpTrapOID.0, then the event's varbinds.
SnmpMessage trap_message(const TrapEvent& event, std::string community, std::int32_t request_id = 0);

/// Generic type and range check of a SET value against a column syntax.
ErrorStatus check_syntax(const smi::Syntax& syntax, const BerValue& value);

class Agent {
public:
    explicit Agent(AgentConfig config = {});
    ~Agent();
    Agent(const Agent&) = delete;
    Agent& operator=(const Agent&) = delete;

    void register_object(ManagedObject object);
    /// Registers the columns the table defines itself (columns inherited
    /// through AUGMENTS live under the base table and are registered with it).
    void register_table(const smi::ResolvedTable& table, std::shared_ptr<RowSource> rows);
    /// Forwards the subtree to another agent. Longest prefix wins.
    void add_route(const Oid& subtree, std::shared_ptr<net::Transport> target);

    /// Evaluates a request against local objects only. nullopt means "drop".
    std::optional<SnmpMessage> handle_pdu(const SnmpMessage& request);
    /// As handle_pdu, but varbinds under a routed subtree go to the sub-agent.
    std::optional<SnmpMessage> route_or_serve(const SnmpMessage& request);

    /// Every local instance with its current value, in OID order.
    std::vector<Varbind> dump();

    snmp::TimeTicks uptime() const;
    TrapEvent make_trap(const Oid& notification, std::vector<Varbind> varbinds) const;
    /// Sends one snmpV2-trap per sink (the configured sinks when `sinks` is null).
    void emit_trap(const TrapEvent& event, const std::vector<net::Endpoint>* sinks = nullptr);
    std::uint64_t traps_sent() const { return traps_sent_.load(); }
    void set_trap_sinks(std::vector<net::Endpoint> sinks);

    const AgentConfig& config() const { return config_; }

    struct Impl;

private:
    std::optional<SnmpMessage> admit(const SnmpMessage& request, bool routed);

    AgentConfig config_;
    std::unique_ptr<Impl> impl_;
    std::atomic<std::uint64_t> traps_sent_{0};
    std::chrono::steady_clock::time_point started_;
};

/// Transport that hands requests straight to an in-process agent.
class LoopbackTransport : public net::Transport {
public:
    explicit LoopbackTransport(Agent& agent) : agent_(agent) {}
    std::optional<SnmpMessage> exchange(const SnmpMessage& request) override { return agent_.route_or_serve(request); }
    std::string describe() const override { return "loopback"; }

private:
    Agent& agent_;
};

}  // namespace marf::agent
