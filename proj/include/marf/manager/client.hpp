#pragma once

#include <atomic>
#include <chrono>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "marf/net/transport.hpp"
#include "marf/snmp/message.hpp"

namespace marf::manager {

using snmp::BerValue;
using snmp::ErrorStatus;
using snmp::Varbind;

struct TargetSpec {
    net::Endpoint endpoint{"127.0.0.1", 161};
    std::string read_community = "public";
    std::string write_community = "private";
    std::chrono::milliseconds timeout{2000};
    int retries = 1;

    /// Throws std::invalid_argument unless timeout > 0 and retries >= 0.
    void validate() const;
};

class Timeout : public std::runtime_error {
public:
    explicit Timeout(const std::string& target);
};

/// A response carrying a non-zero error-status.
class ErrorResponse : public std::runtime_error {
public:
    ErrorResponse(ErrorStatus status, std::int32_t index, std::vector<Varbind> varbinds);
    ErrorStatus status() const { return status_; }
    /// 1-based position of the offending varbind; 0 when not tied to one.
    std::int32_t index() const { return index_; }
    const std::vector<Varbind>& varbinds() const { return varbinds_; }

private:
    ErrorStatus status_;
    std::int32_t index_;
    std::vector<Varbind> varbinds_;
};

/// A walk step that did not move strictly forward.
class LoopDetected : public std::runtime_error {
public:
    LoopDetected(const Oid& previous, const Oid& returned);
    const Oid& previous() const { return previous_; }
    const Oid& returned() const { return returned_; }

private:
    Oid previous_;
    Oid returned_;
};

/// Request/response operations against one agent. Exception values
/// (noSuchObject, endOfMibView, ...) come back in-band in the varbinds;
/// a non-zero error-status raises ErrorResponse.
class SnmpClient {
public:
    explicit SnmpClient(TargetSpec target);
    /// Uses `transport` instead of UDP; the spec still supplies the communities.
    SnmpClient(TargetSpec target, std::shared_ptr<net::Transport> transport);

    std::vector<Varbind> get(const std::vector<Oid>& oids);
    std::vector<Varbind> getnext(const std::vector<Oid>& oids);
    std::vector<Varbind> getbulk(const std::vector<Oid>& oids, std::int32_t non_repeaters,
                                 std::int32_t max_repetitions);
    /// Sent with the write community.
    std::vector<Varbind> set(const std::vector<Varbind>& varbinds);

    /// Chained GETNEXT until the first OID outside `root` or endOfMibView.
    std::vector<Varbind> walk(const Oid& root);

    const TargetSpec& target() const { return target_; }

private:
    std::vector<Varbind> exchange(snmp::PduKind kind, std::vector<Varbind> vbs, const std::string& community,
                                  std::int32_t non_repeaters = 0, std::int32_t max_repetitions = 0);

    TargetSpec target_;
    std::shared_ptr<net::Transport> transport_;
    std::atomic<std::int32_t> next_id_;
};

}  // namespace marf::manager
