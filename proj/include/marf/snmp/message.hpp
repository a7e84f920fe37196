#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "marf/snmp/ber.hpp"

namespace marf::snmp {

/// Largest UDP payload over IPv4.
inline constexpr std::size_t kMaxDatagram = 65507;
inline constexpr std::int64_t kVersion2c = 1;

enum class PduKind : std::uint8_t {
    Get = 0xA0,
    GetNext = 0xA1,
    Response = 0xA2,
    Set = 0xA3,
    GetBulk = 0xA5,
    Trap = 0xA7,
};

std::string_view to_string(PduKind kind);

enum class ErrorStatus : std::int32_t {
    NoError = 0,
    TooBig = 1,
    NoSuchName = 2,
    BadValue = 3,
    ReadOnly = 4,
    GenErr = 5,
    NoAccess = 6,
    WrongType = 7,
    WrongLength = 8,
    WrongEncoding = 9,
    WrongValue = 10,
    NoCreation = 11,
    InconsistentValue = 12,
    ResourceUnavailable = 13,
    CommitFailed = 14,
    UndoFailed = 15,
    AuthorizationError = 16,
    NotWritable = 17,
    InconsistentName = 18,
};

/// RFC 3416 names ("noError", "notWritable", ...). Unknown codes render as "error(N)".
std::string to_string(ErrorStatus status);
std::optional<ErrorStatus> error_status_from_name(std::string_view name);

struct Varbind {
    Oid oid;
    BerValue value = Null{};
    friend bool operator==(const Varbind&, const Varbind&) = default;
};

struct Pdu {
    PduKind kind = PduKind::Get;
    std::int32_t request_id = 0;
    /// non-repeaters for get-bulk
    std::int32_t error_status = 0;
    /// max-repetitions for get-bulk
    std::int32_t error_index = 0;
    std::vector<Varbind> varbinds;

    friend bool operator==(const Pdu&, const Pdu&) = default;
};

struct SnmpMessage {
    std::int64_t version = kVersion2c;
    std::string community;
    Pdu pdu;

    friend bool operator==(const SnmpMessage&, const SnmpMessage&) = default;
};

Bytes encode_message(const SnmpMessage& m);
/// Strict canonical decode: rejects non-v2c versions, trailing bytes and non-minimal forms.
SnmpMessage decode_message(ByteView in);

void encode_varbinds(const std::vector<Varbind>& vbs, Bytes& out);

/// Counter32 arithmetic: (c + delta) mod 2^32.
constexpr std::uint32_t counter_inc(std::uint32_t c, std::uint64_t delta)
{
    return static_cast<std::uint32_t>((std::uint64_t{c} + delta) & 0xFFFFFFFFull);
}

/// Forward distance from `before` to `after` on the 2^32 ring.
constexpr std::uint32_t counter_delta(std::uint32_t before, std::uint32_t after)
{
    return after - before;
}

}  // namespace marf::snmp
