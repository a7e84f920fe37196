#pragma once

// Test-only BER reference. Written independently of src/snmp: arithmetic
// digit expansion instead of shifts, and a generic TLV tree walk instead of a
// typed decoder. Only used to cross-check the production codec.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

using Bytes = std::vector<std::uint8_t>;

inline Bytes base128(std::uint64_t v)
{
    std::vector<std::uint8_t> digits;
    do {
        digits.insert(digits.begin(), static_cast<std::uint8_t>(v % 128));
        v /= 128;
    } while (v > 0);
    for (std::size_t i = 0; i + 1 < digits.size(); ++i) {
        digits[i] = static_cast<std::uint8_t>(digits[i] + 128);
    }
    return digits;
}

inline Bytes length_octets(std::size_t n)
{
    if (n < 128) {
        return {static_cast<std::uint8_t>(n)};
    }
    Bytes digits;
    while (n > 0) {
        digits.insert(digits.begin(), static_cast<std::uint8_t>(n % 256));
        n /= 256;
    }
    digits.insert(digits.begin(), static_cast<std::uint8_t>(128 + digits.size()));
    return digits;
}

inline Bytes encode_oid(const std::vector<std::uint32_t>& arcs)
{
    Bytes content = base128(std::uint64_t{arcs[0]} * 40 + arcs[1]);
    for (std::size_t i = 2; i < arcs.size(); ++i) {
        auto d = base128(arcs[i]);
        content.insert(content.end(), d.begin(), d.end());
    }
    Bytes out{0x06};
    auto len = length_octets(content.size());
    out.insert(out.end(), len.begin(), len.end());
    out.insert(out.end(), content.begin(), content.end());
    return out;
}

/// Generic TLV tree walk that accepts exactly the canonical SNMPv2c message
/// grammar. Returns a short structural summary on success.
struct Summary {
    std::int64_t version = 0;
    std::string community;
    std::uint8_t pdu_tag = 0;
    std::int64_t request_id = 0;
    std::size_t varbinds = 0;
};

class Walker {
public:
    explicit Walker(const Bytes& b) : b_(b) {}

    std::optional<Summary> message()
    {
        Summary s;
        std::size_t end = 0;
        if (!header(0x30, end) || end != b_.size()) return std::nullopt;
        auto version = integer(64);
        if (!version || *version != 1) return std::nullopt;
        s.version = *version;
        std::size_t cend = 0;
        if (!header(0x04, cend)) return std::nullopt;
        s.community.assign(b_.begin() + static_cast<long>(pos_), b_.begin() + static_cast<long>(cend));
        pos_ = cend;
        if (pos_ >= b_.size()) return std::nullopt;
        s.pdu_tag = b_[pos_];
        if (s.pdu_tag != 0xA0 && s.pdu_tag != 0xA1 && s.pdu_tag != 0xA2 && s.pdu_tag != 0xA3 &&
            s.pdu_tag != 0xA5 && s.pdu_tag != 0xA7)
            return std::nullopt;
        std::size_t pend = 0;
        if (!header(s.pdu_tag, pend) || pend != b_.size()) return std::nullopt;
        auto rid = integer(32);
        auto es = integer(32);
        auto ei = integer(32);
        if (!rid || !es || !ei) return std::nullopt;
        s.request_id = *rid;
        std::size_t lend = 0;
        if (!header(0x30, lend) || lend != pend) return std::nullopt;
        while (pos_ < lend) {
            std::size_t vend = 0;
            if (!header(0x30, vend)) return std::nullopt;
            if (!oid()) return std::nullopt;
            if (!value()) return std::nullopt;
            if (pos_ != vend) return std::nullopt;
            ++s.varbinds;
        }
        if (pos_ != b_.size()) return std::nullopt;
        return s;
    }

private:
    bool header(std::uint8_t tag, std::size_t& end)
    {
        if (pos_ >= b_.size() || b_[pos_] != tag) return false;
        ++pos_;
        if (pos_ >= b_.size()) return false;
        std::size_t first = b_[pos_++];
        std::size_t len = 0;
        if (first < 128) {
            len = first;
        } else {
            std::size_t count = first - 128;
            if (count == 0 || count > 4 || pos_ + count > b_.size()) return false;
            if (b_[pos_] == 0) return false;
            for (std::size_t i = 0; i < count; ++i) len = len * 256 + b_[pos_++];
            if (len < 128) return false;
        }
        if (len > b_.size() - pos_) return false;
        end = pos_ + len;
        return true;
    }

    std::optional<std::int64_t> integer(int bits)
    {
        std::size_t end = 0;
        if (!header(0x02, end)) return std::nullopt;
        return signed_content(end, bits);
    }

    std::optional<std::int64_t> signed_content(std::size_t end, int bits)
    {
        std::size_t n = end - pos_;
        if (n == 0 || n > static_cast<std::size_t>(bits / 8)) return std::nullopt;
        if (n > 1) {
            if (b_[pos_] == 0x00 && b_[pos_ + 1] < 0x80) return std::nullopt;
            if (b_[pos_] == 0xFF && b_[pos_ + 1] >= 0x80) return std::nullopt;
        }
        // Accumulate as a two's complement value via big-integer style arithmetic.
        long double acc = 0;
        for (std::size_t i = pos_; i < end; ++i) acc = acc * 256 + b_[i];
        if (b_[pos_] >= 0x80) {
            long double span = 1;
            for (std::size_t i = 0; i < n; ++i) span *= 256;
            acc -= span;
        }
        pos_ = end;
        return static_cast<std::int64_t>(acc);
    }

    bool unsigned_content(std::size_t end)
    {
        std::size_t n = end - pos_;
        if (n == 0 || n > 5) return false;
        if (b_[pos_] >= 0x80) return false;
        if (n > 1 && b_[pos_] == 0x00 && b_[pos_ + 1] < 0x80) return false;
        if (n == 5 && b_[pos_] != 0x00) return false;
        pos_ = end;
        return true;
    }

    bool oid()
    {
        std::size_t end = 0;
        if (!header(0x06, end)) return false;
        return oid_content(end);
    }

    bool oid_content(std::size_t end)
    {
        if (end == pos_) return false;
        std::size_t arcs = 0;
        while (pos_ < end) {
            if (b_[pos_] == 0x80) return false;
            std::uint64_t v = 0;
            std::size_t digits = 0;
            while (true) {
                if (pos_ >= end) return false;
                std::uint8_t d = b_[pos_++];
                v = v * 128 + (d % 128);
                ++digits;
                if (d < 128) break;
            }
            if (digits > 5) return false;
            if (arcs == 0) {
                // first sub-identifier packs two arcs; the second arc of 2.x is unbounded
                if (v >= 80 && v - 80 > 0xFFFFFFFFull) return false;
                arcs += 2;
            } else {
                if (v > 0xFFFFFFFFull) return false;
                ++arcs;
            }
        }
        return arcs >= 2;
    }

    bool value()
    {
        if (pos_ >= b_.size()) return false;
        std::uint8_t tag = b_[pos_];
        std::size_t end = 0;
        if (!header(tag, end)) return false;
        switch (tag) {
        case 0x02: return signed_content(end, 64).has_value();
        case 0x04: pos_ = end; return true;
        case 0x05:
        case 0x80:
        case 0x81:
        case 0x82: return end == pos_;
        case 0x06: return oid_content(end);
        case 0x41:
        case 0x43: return unsigned_content(end);
        default: return false;
        }
    }

    const Bytes& b_;
    std::size_t pos_ = 0;
};

}  // namespace oracle
