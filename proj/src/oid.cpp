#include "marf/oid.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace marf {

Oid::Oid() : arcs_{0, 0} {}

Oid::Oid(std::initializer_list<value_type> arcs) : Oid(std::vector<value_type>(arcs)) {}

Oid::Oid(std::vector<value_type> arcs) : arcs_(std::move(arcs))
{
    if (!is_valid(arcs_)) {
        throw std::invalid_argument("invalid OID arcs");
    }
}

bool Oid::is_valid(std::span<const value_type> arcs)
{
    if (arcs.size() < 2 || arcs[0] > 2) {
        return false;
    }
    return arcs[0] == 2 || arcs[1] < 40;
}

std::optional<Oid> Oid::try_parse(std::string_view dotted)
{
    if (!dotted.empty() && dotted.front() == '.') {
        dotted.remove_prefix(1);
    }
    std::vector<value_type> arcs;
    while (!dotted.empty()) {
        auto dot = dotted.find('.');
        auto part = dotted.substr(0, dot);
        value_type v = 0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size()) {
            return std::nullopt;
        }
        arcs.push_back(v);
        if (dot == std::string_view::npos) {
            break;
        }
        dotted.remove_prefix(dot + 1);
        if (dotted.empty()) {
            return std::nullopt;
        }
    }
    if (!is_valid(arcs)) {
        return std::nullopt;
    }
    return Oid(std::move(arcs));
}

Oid Oid::parse(std::string_view dotted)
{
    auto oid = try_parse(dotted);
    if (!oid) {
        throw std::invalid_argument("malformed OID: " + std::string(dotted));
    }
    return *oid;
}

bool Oid::is_prefix_of(const Oid& other) const
{
    return arcs_.size() <= other.arcs_.size() &&
           std::equal(arcs_.begin(), arcs_.end(), other.arcs_.begin());
}

bool Oid::is_strict_prefix_of(const Oid& other) const
{
    return arcs_.size() < other.arcs_.size() && is_prefix_of(other);
}

Oid Oid::child(value_type arc) const
{
    Oid out = *this;
    out.arcs_.push_back(arc);
    return out;
}

Oid Oid::concat(std::span<const value_type> suffix) const
{
    Oid out = *this;
    out.arcs_.insert(out.arcs_.end(), suffix.begin(), suffix.end());
    return out;
}

std::vector<Oid::value_type> Oid::suffix_of(const Oid& other) const
{
    return {other.arcs_.begin() + static_cast<std::ptrdiff_t>(arcs_.size()), other.arcs_.end()};
}

std::string Oid::str() const
{
    std::string out;
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
        if (i) {
            out += '.';
        }
        out += std::to_string(arcs_[i]);
    }
    return out;
}

std::string to_string(const Oid& oid) { return oid.str(); }

}  // namespace marf

std::size_t std::hash<marf::Oid>::operator()(const marf::Oid& oid) const noexcept
{
    std::size_t h = 1469598103934665603ull;
    for (auto arc : oid.arcs()) {
        h = (h ^ arc) * 1099511628211ull;
    }
    return h;
}
