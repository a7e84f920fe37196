#pragma once

// Hand-rolled random generators for property tests.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "marf/oid.hpp"
#include "marf/snmp/message.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline std::uint32_t arc(Rng& rng)
{
    // Mix small arcs (common) with full-range ones (multi-octet base-128).
    switch (rng() % 4) {
    case 0: return static_cast<std::uint32_t>(rng());
    case 1: return static_cast<std::uint32_t>(rng() % 20000);
    default: return static_cast<std::uint32_t>(rng() % 10);
    }
}

inline marf::Oid oid(Rng& rng, std::size_t max_len = 12)
{
    std::vector<std::uint32_t> arcs;
    std::uint32_t first = static_cast<std::uint32_t>(rng() % 3);
    arcs.push_back(first);
    arcs.push_back(first < 2 ? static_cast<std::uint32_t>(rng() % 40) : arc(rng));
    std::size_t extra = rng() % (max_len - 1);
    for (std::size_t i = 0; i < extra; ++i) arcs.push_back(arc(rng));
    return marf::Oid(std::move(arcs));
}

/// OIDs that share prefixes heavily, so ordering tests hit the interesting cases.
inline marf::Oid clustered_oid(Rng& rng)
{
    std::vector<std::uint32_t> arcs{1, 3};
    std::size_t extra = rng() % 6;
    for (std::size_t i = 0; i < extra; ++i) arcs.push_back(static_cast<std::uint32_t>(rng() % 3));
    return marf::Oid(std::move(arcs));
}

inline std::string bytes(Rng& rng, std::size_t max_len)
{
    std::string s(rng() % (max_len + 1), '\0');
    for (auto& c : s) c = static_cast<char>(rng() & 0xFF);
    return s;
}

inline std::int64_t integer(Rng& rng)
{
    switch (rng() % 5) {
    case 0: return static_cast<std::int64_t>(rng());
    case 1: return -static_cast<std::int64_t>(rng() % 300);
    case 2: return static_cast<std::int32_t>(rng());
    default: return static_cast<std::int64_t>(rng() % 300);
    }
}

inline marf::snmp::BerValue value(Rng& rng, int variant)
{
    using namespace marf::snmp;
    switch (variant) {
    case 0: return Integer{integer(rng)};
    case 1: return Counter32{static_cast<std::uint32_t>(rng())};
    case 2: return TimeTicks{static_cast<std::uint32_t>(rng() % 2 ? rng() : rng() % 200)};
    case 3: return OctetString{bytes(rng, rng() % 8 == 0 ? 300 : 24)};
    case 4: return oid(rng);
    case 5: return Null{};
    case 6: return NoSuchObject{};
    case 7: return NoSuchInstance{};
    default: return EndOfMibView{};
    }
}

inline marf::snmp::BerValue value(Rng& rng) { return value(rng, static_cast<int>(rng() % 9)); }

inline constexpr marf::snmp::PduKind kAllKinds[] = {
    marf::snmp::PduKind::Get,     marf::snmp::PduKind::GetNext, marf::snmp::PduKind::Response,
    marf::snmp::PduKind::Set,     marf::snmp::PduKind::GetBulk, marf::snmp::PduKind::Trap,
};

inline marf::snmp::SnmpMessage message(Rng& rng, marf::snmp::PduKind kind)
{
    using namespace marf::snmp;
    SnmpMessage m;
    m.community = rng() % 3 == 0 ? bytes(rng, 12) : (rng() % 2 ? "public" : "private");
    m.pdu.kind = kind;
    m.pdu.request_id = static_cast<std::int32_t>(rng());
    m.pdu.error_status = static_cast<std::int32_t>(rng() % 4 == 0 ? rng() : rng() % 19);
    m.pdu.error_index = static_cast<std::int32_t>(rng() % 4 == 0 ? rng() : rng() % 10);
    std::size_t n = rng() % 12;
    for (std::size_t i = 0; i < n; ++i) m.pdu.varbinds.push_back({oid(rng), value(rng)});
    return m;
}

inline marf::snmp::SnmpMessage message(Rng& rng) { return message(rng, kAllKinds[rng() % 6]); }

}  // namespace gen
