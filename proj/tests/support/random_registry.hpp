#pragma once

// Random agent registries of scalars and sparse tables, with the sorted
// instance list as a brute-force oracle.

#include <memory>
#include <set>

#include <fmt/format.h>

#include "marf/agent/agent.hpp"
#include "support/agent_util.hpp"
#include "support/gen.hpp"

namespace randreg {

using namespace marf;
using namespace marf::snmp;
using agent::Agent;

inline const Oid kBase = Oid::parse("1.3.6.1.4.1.99");

inline agent::ManagedObject scalar(const Oid& oid, std::shared_ptr<BerValue> cell, bool writable = false)
{
    agent::ManagedObject o;
    o.oid = oid;
    o.read = [cell] { return *cell; };
    if (writable) {
        o.access = smi::Access::ReadWrite;
        o.syntax = smi::Syntax{smi::SyntaxKind::Integer, {}, {}, std::pair<std::int64_t, std::int64_t>{0, 100}};
        o.write = agent::ManagedObject::Writer{nullptr, [cell](const BerValue& v) { *cell = v; }};
    }
    return o;
}

inline smi::ResolvedTable synthetic_table(const Oid& table_oid, const std::vector<smi::Access>& access)
{
    smi::ResolvedTable t;
    t.table_name = "t" + table_oid.str();
    t.entry_name = t.table_name + "Entry";
    t.table_oid = table_oid;
    t.entry_oid = table_oid.child(1);
    t.chain = {t.entry_name};
    for (std::size_t i = 0; i < access.size(); ++i) {
        smi::ColumnDef c;
        c.name = fmt::format("c{}", i + 1);
        c.access = access[i];
        c.oid = t.entry_oid.child(static_cast<std::uint32_t>(i + 1));
        c.sub_id = static_cast<std::uint32_t>(i + 1);
        c.syntax = smi::Syntax{smi::SyntaxKind::Integer, {}, {}, std::pair<std::int64_t, std::int64_t>{0, 1000}};
        t.own_columns.push_back(c);
    }
    t.effective_columns = t.own_columns;
    t.index_columns = {t.own_columns.front()};
    return t;
}

struct RandomRegistry {
    std::unique_ptr<Agent> agent = std::make_unique<Agent>();
    std::vector<Oid> instances;  // brute-force oracle, sorted
    std::vector<Oid> writable;
    std::vector<Oid> readonly;
};

inline RandomRegistry random_registry(gen::Rng& rng, std::size_t max_instances = 500)
{
    RandomRegistry r;
    std::set<std::uint32_t> used;
    std::set<Oid> all;
    while (all.size() < max_instances) {
        std::uint32_t top = static_cast<std::uint32_t>(rng() % 400);
        if (!used.insert(top).second) {
            if (used.size() >= 400) break;
            continue;
        }
        if (rng() % 3 == 0) {
            // a table with a few columns and sparse rows
            std::size_t ncols = 1 + rng() % 4;
            std::vector<smi::Access> acc;
            for (std::size_t i = 0; i < ncols; ++i) acc.push_back(i == 0 || rng() % 2 ? smi::Access::ReadOnly : smi::Access::ReadWrite);
            auto t = synthetic_table(kBase.child(top), acc);
            auto rows = std::make_shared<util::MapRows>();
            std::size_t nrows = rng() % 6;
            for (std::size_t k = 0; k < nrows; ++k) rows->data[static_cast<std::uint32_t>(rng() % 50 + 1)];
            for (const auto& [row, _] : rows->data) {
                for (const auto& c : t.own_columns) {
                    auto inst = c.oid->child(row);
                    all.insert(inst);
                    (c.access == smi::Access::ReadWrite ? r.writable : r.readonly).push_back(inst);
                }
            }
            r.agent->register_table(t, rows);
        } else {
            // scalar, sometimes nested a level deeper
            Oid obj = kBase.child(top);
            if (rng() % 2) obj = obj.child(static_cast<std::uint32_t>(rng() % 5));
            auto inst = obj.child(0);
            bool w = rng() % 2;
            r.agent->register_object(scalar(inst, std::make_shared<BerValue>(Integer{static_cast<std::int64_t>(rng() % 100)}), w));
            all.insert(inst);
            (w ? r.writable : r.readonly).push_back(inst);
        }
    }
    r.instances.assign(all.begin(), all.end());
    return r;
}

}  // namespace randreg
