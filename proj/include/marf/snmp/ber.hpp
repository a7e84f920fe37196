#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "marf/oid.hpp"

namespace marf::snmp {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

namespace tag {
inline constexpr std::uint8_t Integer = 0x02;
inline constexpr std::uint8_t OctetString = 0x04;
inline constexpr std::uint8_t Null = 0x05;
inline constexpr std::uint8_t ObjectId = 0x06;
inline constexpr std::uint8_t Sequence = 0x30;
inline constexpr std::uint8_t Counter32 = 0x41;
inline constexpr std::uint8_t TimeTicks = 0x43;
inline constexpr std::uint8_t NoSuchObject = 0x80;
inline constexpr std::uint8_t NoSuchInstance = 0x81;
inline constexpr std::uint8_t EndOfMibView = 0x82;
}  // namespace tag

struct Integer {
    std::int64_t value = 0;
    friend bool operator==(const Integer&, const Integer&) = default;
};
struct Counter32 {
    std::uint32_t value = 0;
    friend bool operator==(const Counter32&, const Counter32&) = default;
};
struct TimeTicks {
    std::uint32_t value = 0;
    friend bool operator==(const TimeTicks&, const TimeTicks&) = default;
};
struct OctetString {
    std::string bytes;
    friend bool operator==(const OctetString&, const OctetString&) = default;
};
struct Null {
    friend bool operator==(const Null&, const Null&) = default;
};
struct NoSuchObject {
    friend bool operator==(const NoSuchObject&, const NoSuchObject&) = default;
};
struct NoSuchInstance {
    friend bool operator==(const NoSuchInstance&, const NoSuchInstance&) = default;
};
struct EndOfMibView {
    friend bool operator==(const EndOfMibView&, const EndOfMibView&) = default;
};

using BerValue = std::variant<Integer, Counter32, TimeTicks, OctetString, Oid, Null, NoSuchObject,
                              NoSuchInstance, EndOfMibView>;

/// True for the SNMPv2 in-band exception values.
bool is_exception(const BerValue& v);
/// Short type label ("INTEGER", "Counter32", ...).
std::string type_name(const BerValue& v);
/// Human readable rendering; exceptions render distinctly from data.
std::string render(const BerValue& v);

enum class DecodeErrorKind {
    TruncatedInput,
    UnknownTag,
    UnexpectedTag,
    NonMinimalLength,
    NonMinimalEncoding,
    ValueOutOfRange,
    LengthMismatch,
    VersionMismatch,
    TrailingData,
};

std::string_view to_string(DecodeErrorKind kind);

class DecodeError : public std::runtime_error {
public:
    DecodeError(DecodeErrorKind kind, std::size_t offset, const std::string& detail = {});
    DecodeErrorKind kind() const { return kind_; }
    std::size_t offset() const { return offset_; }

private:
    DecodeErrorKind kind_;
    std::size_t offset_;
};

Bytes encode_value(const BerValue& v);
void encode_value(const BerValue& v, Bytes& out);

/// Decodes one value from the front of `in`; trailing bytes are not inspected.
std::pair<BerValue, std::size_t> decode_value(ByteView in);

namespace ber {

void put_length(std::size_t n, Bytes& out);
void put_tlv(std::uint8_t tag, ByteView content, Bytes& out);
void put_signed(std::uint8_t tag, std::int64_t v, Bytes& out);
void put_unsigned(std::uint8_t tag, std::uint32_t v, Bytes& out);
void put_oid(const Oid& oid, Bytes& out);

/// Cursor over a byte span; all reads bounds-checked and minimal-form checked.
class Reader {
public:
    explicit Reader(ByteView in, std::size_t base_offset = 0) : in_(in), base_(base_offset) {}

    bool empty() const { return pos_ >= in_.size(); }
    std::size_t position() const { return pos_; }
    std::size_t offset() const { return base_ + pos_; }
    std::uint8_t peek() const;

    /// Reads tag + length; returns a sub-reader over the content and advances past it.
    Reader expect(std::uint8_t tag);
    std::pair<std::uint8_t, Reader> any();

    std::int64_t read_signed(std::size_t max_octets);
    std::uint32_t read_unsigned();
    Oid read_oid();
    std::string read_rest();

    [[noreturn]] void fail(DecodeErrorKind kind, const std::string& detail = {}) const;

private:
    std::size_t read_length();

    ByteView in_;
    std::size_t base_;
    std::size_t pos_ = 0;
};

BerValue read_value(Reader& r);

}  // namespace ber

}  // namespace marf::snmp
