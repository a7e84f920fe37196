#include "marf/snmp/message.hpp"

#include <array>

#include <fmt/format.h>

namespace marf::snmp {

namespace {

constexpr std::array<std::string_view, 19> kErrorNames = {
    "noError",      "tooBig",           "noSuchName",        "badValue",      "readOnly",
    "genErr",       "noAccess",         "wrongType",         "wrongLength",   "wrongEncoding",
    "wrongValue",   "noCreation",       "inconsistentValue", "resourceUnavailable",
    "commitFailed", "undoFailed",       "authorizationError", "notWritable",  "inconsistentName",
};

bool known_pdu_tag(std::uint8_t t)
{
    switch (static_cast<PduKind>(t)) {
    case PduKind::Get:
    case PduKind::GetNext:
    case PduKind::Response:
    case PduKind::Set:
    case PduKind::GetBulk:
    case PduKind::Trap: return true;
    }
    return false;
}

}  // namespace

std::string_view to_string(PduKind kind)
{
    switch (kind) {
    case PduKind::Get: return "get";
    case PduKind::GetNext: return "get-next";
    case PduKind::Response: return "response";
    case PduKind::Set: return "set";
    case PduKind::GetBulk: return "get-bulk";
    case PduKind::Trap: return "snmpv2-trap";
    }
    return "?";
}

std::string to_string(ErrorStatus status)
{
    auto code = static_cast<std::int32_t>(status);
    if (code >= 0 && code < static_cast<std::int32_t>(kErrorNames.size())) {
        return std::string(kErrorNames[static_cast<std::size_t>(code)]);
    }
    return fmt::format("error({})", code);
}

std::optional<ErrorStatus> error_status_from_name(std::string_view name)
{
    for (std::size_t i = 0; i < kErrorNames.size(); ++i) {
        if (kErrorNames[i] == name) {
            return static_cast<ErrorStatus>(i);
        }
    }
    return std::nullopt;
}

void encode_varbinds(const std::vector<Varbind>& vbs, Bytes& out)
{
    Bytes list;
    for (const auto& vb : vbs) {
        Bytes one;
        ber::put_oid(vb.oid, one);
        encode_value(vb.value, one);
        ber::put_tlv(tag::Sequence, one, list);
    }
    ber::put_tlv(tag::Sequence, list, out);
}

Bytes encode_message(const SnmpMessage& m)
{
    Bytes pdu;
    ber::put_signed(tag::Integer, m.pdu.request_id, pdu);
    ber::put_signed(tag::Integer, m.pdu.error_status, pdu);
    ber::put_signed(tag::Integer, m.pdu.error_index, pdu);
    encode_varbinds(m.pdu.varbinds, pdu);

    Bytes body;
    ber::put_signed(tag::Integer, m.version, body);
    ber::put_tlv(tag::OctetString,
                 ByteView(reinterpret_cast<const std::uint8_t*>(m.community.data()), m.community.size()),
                 body);
    ber::put_tlv(static_cast<std::uint8_t>(m.pdu.kind), pdu, body);

    Bytes out;
    out.reserve(body.size() + 6);
    ber::put_tlv(tag::Sequence, body, out);
    return out;
}

SnmpMessage decode_message(ByteView in)
{
    ber::Reader top(in);
    ber::Reader msg = top.expect(tag::Sequence);
    if (!top.empty()) {
        top.fail(DecodeErrorKind::TrailingData, "bytes after message");
    }

    SnmpMessage m;
    ber::Reader version = msg.expect(tag::Integer);
    m.version = version.read_signed(8);
    if (m.version != kVersion2c) {
        throw DecodeError(DecodeErrorKind::VersionMismatch, 0,
                          fmt::format("version {} is not SNMPv2c", m.version));
    }
    m.community = msg.expect(tag::OctetString).read_rest();

    std::uint8_t pdu_tag = msg.peek();
    if (!known_pdu_tag(pdu_tag)) {
        msg.fail(DecodeErrorKind::UnknownTag, fmt::format("PDU tag 0x{:02X}", pdu_tag));
    }
    ber::Reader pdu = msg.any().second;
    if (!msg.empty()) {
        msg.fail(DecodeErrorKind::TrailingData, "bytes after PDU");
    }
    m.pdu.kind = static_cast<PduKind>(pdu_tag);
    m.pdu.request_id = static_cast<std::int32_t>(pdu.expect(tag::Integer).read_signed(4));
    m.pdu.error_status = static_cast<std::int32_t>(pdu.expect(tag::Integer).read_signed(4));
    m.pdu.error_index = static_cast<std::int32_t>(pdu.expect(tag::Integer).read_signed(4));

    ber::Reader list = pdu.expect(tag::Sequence);
    if (!pdu.empty()) {
        pdu.fail(DecodeErrorKind::TrailingData, "bytes after varbind list");
    }
    while (!list.empty()) {
        ber::Reader vb = list.expect(tag::Sequence);
        Varbind v;
        v.oid = vb.expect(tag::ObjectId).read_oid();
        v.value = ber::read_value(vb);
        if (!vb.empty()) {
            vb.fail(DecodeErrorKind::TrailingData, "bytes after varbind value");
        }
        m.pdu.varbinds.push_back(std::move(v));
    }
    return m;
}

}  // namespace marf::snmp
