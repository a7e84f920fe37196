#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace marf {

/// Object identifier: an ordered path of 32-bit sub-identifiers.
///
/// A valid Oid has at least two arcs, the first in {0,1,2} and, when the first
/// arc is 0 or 1, a second arc below 40 (the constraint that lets BER pack the
/// first two arcs into one octet). Ordering is lexicographic on the arcs, so a
/// strict prefix sorts before any of its extensions.
class Oid {
public:
    using value_type = std::uint32_t;

    /// 0.0 (zeroDotZero).
    Oid();
    Oid(std::initializer_list<value_type> arcs);
    explicit Oid(std::vector<value_type> arcs);

    /// Parses "1.3.6.1" (a leading dot is tolerated). Throws std::invalid_argument.
    static Oid parse(std::string_view dotted);
    static std::optional<Oid> try_parse(std::string_view dotted);
    static bool is_valid(std::span<const value_type> arcs);

    std::span<const value_type> arcs() const { return arcs_; }
    std::size_t size() const { return arcs_.size(); }
    value_type operator[](std::size_t i) const { return arcs_[i]; }
    value_type back() const { return arcs_.back(); }

    /// True when *this is a prefix of other (including equality).
    bool is_prefix_of(const Oid& other) const;
    bool is_strict_prefix_of(const Oid& other) const;

    Oid child(value_type arc) const;
    Oid concat(std::span<const value_type> suffix) const;
    /// Arcs of other following this prefix. Precondition: is_prefix_of(other).
    std::vector<value_type> suffix_of(const Oid& other) const;

    std::string str() const;

    friend bool operator==(const Oid&, const Oid&) = default;
    friend std::strong_ordering operator<=>(const Oid& a, const Oid& b) { return a.arcs_ <=> b.arcs_; }

private:
    std::vector<value_type> arcs_;
};

std::string to_string(const Oid& oid);

}  // namespace marf

template <>
struct std::hash<marf::Oid> {
    std::size_t operator()(const marf::Oid& oid) const noexcept;
};
