#include "marf/manager/values.hpp"

#include <charconv>

#include <fmt/format.h>

namespace marf::manager {

namespace {

template <typename T>
T number(std::string_view text)
{
    T v{};
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        throw std::invalid_argument(fmt::format("'{}' is not a valid number", text));
    }
    return v;
}

void check_range(const smi::Syntax& s, std::int64_t v)
{
    if (s.range && (v < s.range->first || v > s.range->second)) {
        throw std::invalid_argument(fmt::format("{} is outside {}..{}", v, s.range->first, s.range->second));
    }
}

}  // namespace

snmp::BerValue parse_value(const smi::Syntax& syntax, std::string_view text)
{
    switch (syntax.kind) {
    case smi::SyntaxKind::IntegerEnum: {
        for (const auto& [label, n] : syntax.labels) {
            if (label == text) return snmp::Integer{n};
        }
        auto n = number<std::int64_t>(text);
        return snmp::Integer{n};
    }
    case smi::SyntaxKind::Integer: {
        auto n = number<std::int64_t>(text);
        check_range(syntax, n);
        return snmp::Integer{n};
    }
    case smi::SyntaxKind::Counter32: return snmp::Counter32{number<std::uint32_t>(text)};
    case smi::SyntaxKind::TimeTicks: return snmp::TimeTicks{number<std::uint32_t>(text)};
    case smi::SyntaxKind::OctetString:
    case smi::SyntaxKind::DisplayString:
        if (syntax.range) check_range(syntax, static_cast<std::int64_t>(text.size()));
        return snmp::OctetString{std::string(text)};
    case smi::SyntaxKind::ObjectId: return Oid::parse(text);
    default: break;
    }
    throw std::invalid_argument("object has no settable syntax");
}

std::string format_value(const smi::Syntax* syntax, const snmp::BerValue& value)
{
    const auto* i = std::get_if<snmp::Integer>(&value);
    if (syntax && i && syntax->kind == smi::SyntaxKind::IntegerEnum) {
        for (const auto& [label, n] : syntax->labels) {
            if (n == i->value) return fmt::format("{}({})", label, n);
        }
    }
    return snmp::render(value);
}

const smi::Syntax* syntax_of(const smi::MibRegistry& registry, const Oid& instance)
{
    const auto* n = registry.longest_prefix(instance);
    if (!n || !n->object || n->oid == instance) return nullptr;
    return &n->syntax;
}

}  // namespace marf::manager
