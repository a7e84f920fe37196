#include <doctest.h>

#include <algorithm>
#include <set>

#include "marf/oid.hpp"
#include "support/gen.hpp"

using marf::Oid;

namespace {

// Reference ordering written out longhand.
int naive_compare(const Oid& a, const Oid& b)
{
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    if (a.size() == b.size()) return 0;
    return a.size() < b.size() ? -1 : 1;
}

}  // namespace

TEST_CASE("parse and print dotted OIDs")
{
    CHECK(Oid::parse("1.3.6.1.4.1.28218").str() == "1.3.6.1.4.1.28218");
    CHECK(Oid::parse(".1.3.6").str() == "1.3.6");
    CHECK(Oid::parse("2.999.4294967295").back() == 4294967295u);
    CHECK_FALSE(Oid::try_parse("1"));
    CHECK_FALSE(Oid::try_parse("3.1"));
    CHECK_FALSE(Oid::try_parse("1.40"));
    CHECK_FALSE(Oid::try_parse("1..3"));
    CHECK_FALSE(Oid::try_parse("1.3."));
    CHECK_FALSE(Oid::try_parse("1.3.4294967296"));
    CHECK_FALSE(Oid::try_parse("1.3.x"));
    CHECK_THROWS_AS(Oid::parse(""), std::invalid_argument);
    CHECK(Oid().str() == "0.0");
}

TEST_CASE("prefix relations")
{
    auto marf = Oid::parse("1.3.6.1.4.1.28218");
    auto row = Oid::parse("1.3.6.1.4.1.28218.3.1.1.2.1");
    CHECK(marf.is_prefix_of(row));
    CHECK(marf.is_strict_prefix_of(row));
    CHECK(marf.is_prefix_of(marf));
    CHECK_FALSE(marf.is_strict_prefix_of(marf));
    CHECK_FALSE(row.is_prefix_of(marf));
    CHECK(marf.suffix_of(row) == std::vector<std::uint32_t>{3, 1, 1, 2, 1});
    CHECK(marf.child(3).concat(std::vector<std::uint32_t>{1, 1, 2, 1}) == row);
    CHECK(marf < row);
    CHECK(Oid::parse("1.3.6.1.4.1.28218.2.9") < Oid::parse("1.3.6.1.4.1.28218.3"));
}

TEST_CASE("ordering is a strict total order matching the longhand comparison")
{
    gen::Rng rng(7);
    std::vector<Oid> pool;
    for (int i = 0; i < 300; ++i) pool.push_back(i % 2 ? gen::clustered_oid(rng) : gen::oid(rng, 6));

    for (const auto& a : pool) {
        CHECK_FALSE(a < a);
        for (const auto& b : pool) {
            int ref = naive_compare(a, b);
            REQUIRE((a < b) == (ref < 0));
            REQUIRE((a == b) == (ref == 0));
            // totality and antisymmetry
            REQUIRE(int(a < b) + int(b < a) + int(a == b) == 1);
        }
    }
    // transitivity on sampled triples
    for (int i = 0; i < 20000; ++i) {
        const auto& a = pool[rng() % pool.size()];
        const auto& b = pool[rng() % pool.size()];
        const auto& c = pool[rng() % pool.size()];
        if (a < b && b < c) REQUIRE(a < c);
    }
}

TEST_CASE("hash agrees with equality")
{
    gen::Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        auto a = gen::oid(rng);
        Oid b = Oid::parse(a.str());
        CHECK(std::hash<Oid>{}(a) == std::hash<Oid>{}(b));
    }
}
