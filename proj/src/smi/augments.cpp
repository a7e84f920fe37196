#include "marf/smi/augments.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

namespace marf::smi {

namespace {

const MibNode& entry_node(const MibRegistry& reg, std::string_view entry)
{
    const auto& n = reg.at(entry);
    if (!n.object || n.syntax.kind != SyntaxKind::Entry) {
        throw MibError(MibErrorKind::AugmentsNonEntry, fmt::format("'{}' is not a conceptual row", entry),
                       {std::string(entry)});
    }
    return n;
}

/// Parent table node of an entry.
const MibNode* table_of(const MibRegistry& reg, const MibNode& entry)
{
    return reg.find(entry.object->assignment.parent);
}

/// Entry object directly under a table.
const MibNode* entry_under(const MibRegistry& reg, const MibNode& table)
{
    for (const auto* child : reg.children(table.name)) {
        if (child->object && child->syntax.kind == SyntaxKind::Entry) {
            return child;
        }
    }
    return nullptr;
}

ColumnDef column_for(const MibRegistry& reg, const MibNode& entry, const SequenceField& field)
{
    ColumnDef c;
    c.name = field.name;
    c.syntax = reg.resolve_syntax(field.syntax);
    if (const auto* n = reg.find(field.name); n && n->object && entry.oid.is_strict_prefix_of(n->oid)) {
        c.access = n->object->max_access;
        c.oid = n->oid;
        c.sub_id = n->oid.back();
        c.syntax = n->syntax;
    }
    return c;
}

}  // namespace

const ColumnDef* ResolvedTable::column(std::string_view name) const
{
    for (const auto& c : effective_columns) {
        if (c.name == name) {
            return &c;
        }
    }
    for (const auto& c : index_columns) {
        if (c.name == name) {
            return &c;
        }
    }
    return nullptr;
}

ResolvedTable resolve_standalone(const MibRegistry& reg, std::string_view entry)
{
    const auto& e = entry_node(reg, entry);
    const auto* table = table_of(reg, e);
    if (!table || !table->object || table->object->syntax.kind != SyntaxKind::SequenceOf) {
        throw MibError(MibErrorKind::AugmentsNonEntry,
                       fmt::format("'{}' is not registered under a SEQUENCE OF table", entry),
                       {std::string(entry)});
    }
    ResolvedTable t;
    t.table_name = table->name;
    t.entry_name = e.name;
    t.table_oid = table->oid;
    t.entry_oid = e.oid;
    t.chain = {e.name};
    const auto* seq = reg.sequence(e.syntax.ref);
    if (seq) {
        for (const auto& f : seq->fields) {
            t.own_columns.push_back(column_for(reg, e, f));
        }
    }
    t.effective_columns = t.own_columns;
    for (const auto& idx : e.object->index) {
        auto it = std::find_if(t.own_columns.begin(), t.own_columns.end(),
                               [&](const ColumnDef& c) { return c.name == idx; });
        if (it != t.own_columns.end()) {
            t.index_columns.push_back(*it);
            continue;
        }
        // Index object defined outside this entry (e.g. an external index).
        const auto& n = reg.at(idx);
        ColumnDef c;
        c.name = n.name;
        c.syntax = n.syntax;
        c.access = n.object ? n.object->max_access : Access::NotAccessible;
        c.oid = n.oid;
        c.sub_id = n.oid.back();
        t.index_columns.push_back(std::move(c));
    }
    return t;
}

ResolvedTable flatten(const ResolvedTable& base, const ResolvedTable& ext)
{
    ResolvedTable t = ext;
    t.index_columns = base.index_columns;
    t.chain = base.chain;
    t.chain.insert(t.chain.end(), ext.chain.begin(), ext.chain.end());
    t.effective_columns = base.effective_columns;
    std::set<std::string> seen;
    for (const auto& c : t.effective_columns) {
        seen.insert(c.name);
    }
    for (const auto& c : ext.effective_columns) {
        if (!seen.insert(c.name).second) {
            throw MibError(MibErrorKind::DuplicateName,
                           fmt::format("column '{}' of '{}' repeats a column of augmented '{}'", c.name,
                                       ext.entry_name, base.entry_name),
                           {c.name, ext.entry_name, base.entry_name});
        }
        t.effective_columns.push_back(c);
    }
    return t;
}

std::optional<std::string> augments_target(const MibRegistry& reg, std::string_view entry,
                                           std::vector<Diagnostic>* warnings)
{
    const auto& e = entry_node(reg, entry);
    const auto* table = table_of(reg, e);

    std::optional<std::string> target;
    if (e.object->augments) {
        const auto* t = reg.find(*e.object->augments);
        if (!t) {
            throw MibError(MibErrorKind::DanglingAugments,
                           fmt::format("'{}' AUGMENTS unknown '{}'", e.name, *e.object->augments),
                           {e.name, *e.object->augments}, e.object->line);
        }
        if (!t->object || t->syntax.kind != SyntaxKind::Entry) {
            throw MibError(MibErrorKind::AugmentsNonEntry,
                           fmt::format("'{}' AUGMENTS '{}', which is not a conceptual row", e.name, t->name),
                           {e.name, t->name}, e.object->line);
        }
        target = t->name;
    }

    if (table && table->object && table->object->augments) {
        const auto& written = *table->object->augments;
        const auto* t = reg.find(written);
        if (!t) {
            throw MibError(MibErrorKind::DanglingAugments,
                           fmt::format("table '{}' AUGMENTS unknown '{}'", table->name, written),
                           {table->name, written}, table->object->line);
        }
        const MibNode* as_entry = nullptr;
        if (t->object && t->syntax.kind == SyntaxKind::SequenceOf) {
            as_entry = entry_under(reg, *t);
        } else if (t->object && t->syntax.kind == SyntaxKind::Entry) {
            as_entry = t;
        }
        if (!as_entry) {
            throw MibError(MibErrorKind::AugmentsNonEntry,
                           fmt::format("table '{}' AUGMENTS '{}', which is neither a table nor a row",
                                       table->name, written),
                           {table->name, written}, table->object->line);
        }
        if (warnings) {
            warnings->push_back({fmt::format("AUGMENTS written on table object '{}'; treated as '{}' AUGMENTS '{}'",
                                             table->name, e.name, as_entry->name),
                                 {table->name, e.name, as_entry->name}});
        }
        if (target && *target != as_entry->name) {
            if (warnings) {
                warnings->push_back(
                    {fmt::format("table-level AUGMENTS of '{}' disagrees with entry-level AUGMENTS of '{}'; "
                                 "using '{}'",
                                 table->name, e.name, *target),
                     {table->name, e.name}});
            }
        } else if (!target) {
            target = as_entry->name;
        }
    }
    return target;
}

std::vector<ResolvedTable> resolve_augments(const MibRegistry& reg, Profile profile,
                                            std::vector<Diagnostic>* warnings)
{
    std::vector<std::string> entries;
    for (const auto* n : reg.nodes()) {
        if (n->object && n->syntax.kind == SyntaxKind::Entry) {
            entries.push_back(n->name);
        }
    }

    std::map<std::string, std::optional<std::string>> targets;
    for (const auto& e : entries) {
        targets[e] = augments_target(reg, e, warnings);
    }

    std::map<std::string, ResolvedTable> done;
    std::vector<ResolvedTable> out;
    for (const auto& e : entries) {
        // Walk to the base, detecting cycles.
        std::vector<std::string> chain{e};
        while (auto next = targets[chain.back()]) {
            if (std::find(chain.begin(), chain.end(), *next) != chain.end()) {
                std::vector<std::string> cycle(std::find(chain.begin(), chain.end(), *next), chain.end());
                std::string joined;
                for (const auto& c : cycle) joined += c + " <- ";
                throw MibError(MibErrorKind::AugmentsCycle, fmt::format("AUGMENTS cycle: {}{}", joined, *next),
                               cycle);
            }
            chain.push_back(*next);
        }
        if (profile == Profile::Strict && chain.size() > 2) {
            throw MibError(MibErrorKind::ChainedAugments,
                           fmt::format("'{}' AUGMENTS '{}', which itself AUGMENTS '{}'; chained AUGMENTS are "
                                       "rejected by the strict profile",
                                       chain[0], chain[1], chain[2]),
                           {chain[0], chain[1], chain[2]});
        }
        std::reverse(chain.begin(), chain.end());
        std::optional<ResolvedTable> acc;
        for (const auto& link : chain) {
            if (auto it = done.find(link); it != done.end()) {
                acc = it->second;
                continue;
            }
            auto own = resolve_standalone(reg, link);
            acc = acc ? flatten(*acc, own) : own;
            done.emplace(link, *acc);
        }
        out.push_back(*acc);
    }
    return out;
}

const ResolvedTable* find_table(const std::vector<ResolvedTable>& tables, std::string_view name)
{
    for (const auto& t : tables) {
        if (t.table_name == name || t.entry_name == name) {
            return &t;
        }
    }
    return nullptr;
}

}  // namespace marf::smi
