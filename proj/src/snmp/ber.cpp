#include "marf/snmp/ber.hpp"

#include <fmt/format.h>

namespace marf::snmp {

namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

}  // namespace

bool is_exception(const BerValue& v)
{
    return std::holds_alternative<NoSuchObject>(v) || std::holds_alternative<NoSuchInstance>(v) ||
           std::holds_alternative<EndOfMibView>(v);
}

std::string type_name(const BerValue& v)
{
    return std::visit(overloaded{
                          [](const Integer&) { return std::string("INTEGER"); },
                          [](const Counter32&) { return std::string("Counter32"); },
                          [](const TimeTicks&) { return std::string("Timeticks"); },
                          [](const OctetString&) { return std::string("STRING"); },
                          [](const Oid&) { return std::string("OID"); },
                          [](const Null&) { return std::string("NULL"); },
                          [](const NoSuchObject&) { return std::string("noSuchObject"); },
                          [](const NoSuchInstance&) { return std::string("noSuchInstance"); },
                          [](const EndOfMibView&) { return std::string("endOfMibView"); },
                      },
                      v);
}

std::string render(const BerValue& v)
{
    return std::visit(overloaded{
                          [](const Integer& x) { return fmt::format("INTEGER: {}", x.value); },
                          [](const Counter32& x) { return fmt::format("Counter32: {}", x.value); },
                          [](const TimeTicks& x) { return fmt::format("Timeticks: ({})", x.value); },
                          [](const OctetString& x) { return fmt::format("STRING: \"{}\"", x.bytes); },
                          [](const Oid& x) { return fmt::format("OID: {}", x.str()); },
                          [](const Null&) { return std::string("NULL"); },
                          [](const NoSuchObject&) {
                              return std::string("No Such Object available on this agent at this OID");
                          },
                          [](const NoSuchInstance&) {
                              return std::string("No Such Instance currently exists at this OID");
                          },
                          [](const EndOfMibView&) {
                              return std::string("No more variables left in this MIB View");
                          },
                      },
                      v);
}

std::string_view to_string(DecodeErrorKind kind)
{
    switch (kind) {
    case DecodeErrorKind::TruncatedInput: return "TruncatedInput";
    case DecodeErrorKind::UnknownTag: return "UnknownTag";
    case DecodeErrorKind::UnexpectedTag: return "UnexpectedTag";
    case DecodeErrorKind::NonMinimalLength: return "NonMinimalLength";
    case DecodeErrorKind::NonMinimalEncoding: return "NonMinimalEncoding";
    case DecodeErrorKind::ValueOutOfRange: return "ValueOutOfRange";
    case DecodeErrorKind::LengthMismatch: return "LengthMismatch";
    case DecodeErrorKind::VersionMismatch: return "VersionMismatch";
    case DecodeErrorKind::TrailingData: return "TrailingData";
    }
    return "?";
}

DecodeError::DecodeError(DecodeErrorKind kind, std::size_t offset, const std::string& detail)
    : std::runtime_error(fmt::format("{} at offset {}{}{}", to_string(kind), offset,
                                     detail.empty() ? "" : ": ", detail)),
      kind_(kind),
      offset_(offset)
{
}

namespace ber {

void put_length(std::size_t n, Bytes& out)
{
    if (n < 0x80) {
        out.push_back(static_cast<std::uint8_t>(n));
        return;
    }
    std::uint8_t tmp[sizeof(std::size_t)];
    std::size_t count = 0;
    while (n) {
        tmp[count++] = static_cast<std::uint8_t>(n & 0xFF);
        n >>= 8;
    }
    out.push_back(static_cast<std::uint8_t>(0x80 | count));
    while (count) {
        out.push_back(tmp[--count]);
    }
}

void put_tlv(std::uint8_t tag, ByteView content, Bytes& out)
{
    out.push_back(tag);
    put_length(content.size(), out);
    out.insert(out.end(), content.begin(), content.end());
}

void put_signed(std::uint8_t tag, std::int64_t v, Bytes& out)
{
    std::uint8_t buf[8];
    for (int i = 7; i >= 0; --i) {
        buf[i] = static_cast<std::uint8_t>(static_cast<std::uint64_t>(v) & 0xFF);
        v >>= 8;  // arithmetic shift keeps the sign
    }
    std::size_t start = 0;
    while (start < 7 && ((buf[start] == 0x00 && !(buf[start + 1] & 0x80)) ||
                         (buf[start] == 0xFF && (buf[start + 1] & 0x80)))) {
        ++start;
    }
    put_tlv(tag, ByteView(buf + start, 8 - start), out);
}

void put_unsigned(std::uint8_t tag, std::uint32_t v, Bytes& out)
{
    std::uint8_t buf[5] = {0, static_cast<std::uint8_t>(v >> 24), static_cast<std::uint8_t>(v >> 16),
                           static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)};
    std::size_t start = 0;
    while (start < 4 && buf[start] == 0x00 && !(buf[start + 1] & 0x80)) {
        ++start;
    }
    put_tlv(tag, ByteView(buf + start, 5 - start), out);
}

namespace {

void put_base128(std::uint64_t v, Bytes& out)
{
    std::uint8_t tmp[10];
    std::size_t count = 0;
    do {
        tmp[count++] = static_cast<std::uint8_t>(v & 0x7F);
        v >>= 7;
    } while (v);
    while (count > 1) {
        out.push_back(static_cast<std::uint8_t>(tmp[--count] | 0x80));
    }
    out.push_back(tmp[0]);
}

}  // namespace

void put_oid(const Oid& oid, Bytes& out)
{
    Bytes content;
    auto arcs = oid.arcs();
    put_base128(std::uint64_t{arcs[0]} * 40 + arcs[1], content);
    for (std::size_t i = 2; i < arcs.size(); ++i) {
        put_base128(arcs[i], content);
    }
    put_tlv(tag::ObjectId, content, out);
}

std::uint8_t Reader::peek() const
{
    if (empty()) {
        fail(DecodeErrorKind::TruncatedInput, "expected tag");
    }
    return in_[pos_];
}

void Reader::fail(DecodeErrorKind kind, const std::string& detail) const
{
    throw DecodeError(kind, offset(), detail);
}

std::size_t Reader::read_length()
{
    if (empty()) {
        fail(DecodeErrorKind::TruncatedInput, "expected length");
    }
    std::uint8_t first = in_[pos_++];
    if (!(first & 0x80)) {
        return first;
    }
    std::size_t count = first & 0x7F;
    if (count == 0) {
        fail(DecodeErrorKind::NonMinimalLength, "indefinite length not supported");
    }
    if (count > 4) {
        fail(DecodeErrorKind::ValueOutOfRange, "length too large");
    }
    if (in_.size() - pos_ < count) {
        fail(DecodeErrorKind::TruncatedInput, "length octets");
    }
    if (in_[pos_] == 0) {
        fail(DecodeErrorKind::NonMinimalLength, "leading zero length octet");
    }
    std::size_t len = 0;
    for (std::size_t i = 0; i < count; ++i) {
        len = (len << 8) | in_[pos_++];
    }
    if (len < 0x80) {
        fail(DecodeErrorKind::NonMinimalLength, "long form for short length");
    }
    return len;
}

std::pair<std::uint8_t, Reader> Reader::any()
{
    std::uint8_t t = peek();
    ++pos_;
    std::size_t len = read_length();
    if (in_.size() - pos_ < len) {
        fail(DecodeErrorKind::TruncatedInput, fmt::format("content of {} bytes", len));
    }
    Reader sub(in_.subspan(pos_, len), base_ + pos_);
    pos_ += len;
    return {t, sub};
}

Reader Reader::expect(std::uint8_t t)
{
    std::uint8_t got = peek();
    if (got != t) {
        fail(DecodeErrorKind::UnexpectedTag, fmt::format("expected 0x{:02X}, got 0x{:02X}", t, got));
    }
    return any().second;
}

std::int64_t Reader::read_signed(std::size_t max_octets)
{
    std::size_t n = in_.size() - pos_;
    if (n == 0) {
        fail(DecodeErrorKind::TruncatedInput, "empty integer");
    }
    if (n > max_octets) {
        fail(DecodeErrorKind::ValueOutOfRange, "integer too wide");
    }
    if (n > 1 && ((in_[pos_] == 0x00 && !(in_[pos_ + 1] & 0x80)) ||
                  (in_[pos_] == 0xFF && (in_[pos_ + 1] & 0x80)))) {
        fail(DecodeErrorKind::NonMinimalEncoding, "redundant leading integer octet");
    }
    std::uint64_t v = (in_[pos_] & 0x80) ? ~std::uint64_t{0} : 0;
    for (; pos_ < in_.size(); ++pos_) {
        v = (v << 8) | in_[pos_];
    }
    return static_cast<std::int64_t>(v);
}

std::uint32_t Reader::read_unsigned()
{
    std::size_t n = in_.size() - pos_;
    if (n == 0) {
        fail(DecodeErrorKind::TruncatedInput, "empty integer");
    }
    if (in_[pos_] & 0x80) {
        fail(DecodeErrorKind::ValueOutOfRange, "negative unsigned value");
    }
    if (n > 1 && in_[pos_] == 0x00 && !(in_[pos_ + 1] & 0x80)) {
        fail(DecodeErrorKind::NonMinimalEncoding, "redundant leading integer octet");
    }
    if (n > 5 || (n == 5 && in_[pos_] != 0)) {
        fail(DecodeErrorKind::ValueOutOfRange, "unsigned value exceeds 32 bits");
    }
    std::uint64_t v = 0;
    for (; pos_ < in_.size(); ++pos_) {
        v = (v << 8) | in_[pos_];
    }
    return static_cast<std::uint32_t>(v);
}

Oid Reader::read_oid()
{
    if (empty()) {
        fail(DecodeErrorKind::TruncatedInput, "empty OID");
    }
    std::vector<Oid::value_type> arcs;
    bool first = true;
    while (!empty()) {
        if (in_[pos_] == 0x80) {
            fail(DecodeErrorKind::NonMinimalEncoding, "leading 0x80 in sub-identifier");
        }
        std::uint64_t v = 0;
        std::size_t digits = 0;
        while (true) {
            if (empty()) {
                fail(DecodeErrorKind::TruncatedInput, "unterminated sub-identifier");
            }
            std::uint8_t b = in_[pos_++];
            v = (v << 7) | (b & 0x7F);
            if (++digits > 5) {
                fail(DecodeErrorKind::ValueOutOfRange, "sub-identifier too long");
            }
            if (!(b & 0x80)) {
                break;
            }
        }
        if (first) {
            first = false;
            std::uint64_t a = v < 40 ? 0 : v < 80 ? 1 : 2;
            std::uint64_t b = v - a * 40;
            if (b > 0xFFFFFFFFull) {
                fail(DecodeErrorKind::ValueOutOfRange, "sub-identifier exceeds 32 bits");
            }
            arcs.push_back(static_cast<Oid::value_type>(a));
            arcs.push_back(static_cast<Oid::value_type>(b));
        } else {
            if (v > 0xFFFFFFFFull) {
                fail(DecodeErrorKind::ValueOutOfRange, "sub-identifier exceeds 32 bits");
            }
            arcs.push_back(static_cast<Oid::value_type>(v));
        }
    }
    return Oid(std::move(arcs));
}

std::string Reader::read_rest()
{
    std::string s(in_.begin() + static_cast<std::ptrdiff_t>(pos_), in_.end());
    pos_ = in_.size();
    return s;
}

}  // namespace ber

void encode_value(const BerValue& v, Bytes& out)
{
    std::visit(overloaded{
                   [&](const Integer& x) { ber::put_signed(tag::Integer, x.value, out); },
                   [&](const Counter32& x) { ber::put_unsigned(tag::Counter32, x.value, out); },
                   [&](const TimeTicks& x) { ber::put_unsigned(tag::TimeTicks, x.value, out); },
                   [&](const OctetString& x) {
                       ber::put_tlv(tag::OctetString,
                                    ByteView(reinterpret_cast<const std::uint8_t*>(x.bytes.data()),
                                             x.bytes.size()),
                                    out);
                   },
                   [&](const Oid& x) { ber::put_oid(x, out); },
                   [&](const Null&) { ber::put_tlv(tag::Null, {}, out); },
                   [&](const NoSuchObject&) { ber::put_tlv(tag::NoSuchObject, {}, out); },
                   [&](const NoSuchInstance&) { ber::put_tlv(tag::NoSuchInstance, {}, out); },
                   [&](const EndOfMibView&) { ber::put_tlv(tag::EndOfMibView, {}, out); },
               },
               v);
}

Bytes encode_value(const BerValue& v)
{
    Bytes out;
    encode_value(v, out);
    return out;
}

namespace {

template <class T>
BerValue empty_value(ber::Reader& content, T value)
{
    if (!content.empty()) {
        content.fail(DecodeErrorKind::LengthMismatch, "non-empty NULL-like value");
    }
    return value;
}

}  // namespace

namespace ber {

BerValue read_value(Reader& r)
{
    std::uint8_t t = r.peek();
    switch (t) {
    case tag::Integer:
    case tag::OctetString:
    case tag::Null:
    case tag::ObjectId:
    case tag::Counter32:
    case tag::TimeTicks:
    case tag::NoSuchObject:
    case tag::NoSuchInstance:
    case tag::EndOfMibView: break;
    default: r.fail(DecodeErrorKind::UnknownTag, fmt::format("0x{:02X}", t));
    }
    auto [got, content] = r.any();
    switch (got) {
    case tag::Integer: return Integer{content.read_signed(8)};
    case tag::OctetString: return OctetString{content.read_rest()};
    case tag::Null: return empty_value(content, Null{});
    case tag::ObjectId: return content.read_oid();
    case tag::Counter32: return Counter32{content.read_unsigned()};
    case tag::TimeTicks: return TimeTicks{content.read_unsigned()};
    case tag::NoSuchObject: return empty_value(content, NoSuchObject{});
    case tag::NoSuchInstance: return empty_value(content, NoSuchInstance{});
    default: return empty_value(content, EndOfMibView{});
    }
}

}  // namespace ber

std::pair<BerValue, std::size_t> decode_value(ByteView in)
{
    ber::Reader r(in);
    auto value = ber::read_value(r);
    return {std::move(value), r.position()};
}

}  // namespace marf::snmp
