#pragma once

#include <optional>
#include <string>
#include <vector>

#include "marf/oid.hpp"
#include "marf/smi/registry.hpp"

namespace marf::smi {

/// How AUGMENTS chains are treated.
///  - Lenient accepts chains of any depth (AdventNet-style tooling).
///  - Strict rejects an AUGMENTS whose target itself augments another entry
///    (SimpleWeb-style validation).
enum class Profile { Lenient, Strict };

struct ColumnDef {
    std::string name;
    Syntax syntax;
    Access access = Access::NotAccessible;
    /// Absent when the SEQUENCE names a field that has no OBJECT-TYPE.
    std::optional<Oid> oid;
    std::uint32_t sub_id = 0;

    friend bool operator==(const ColumnDef&, const ColumnDef&) = default;
};

struct ResolvedTable {
    std::string table_name;
    std::string entry_name;
    Oid table_oid;
    Oid entry_oid;
    /// Entry names from the ultimate base to this table.
    std::vector<std::string> chain;
    /// Index columns of the chain's base entry.
    std::vector<ColumnDef> index_columns;
    std::vector<ColumnDef> own_columns;
    /// Base chain columns followed by own columns.
    std::vector<ColumnDef> effective_columns;

    const ColumnDef* column(std::string_view name) const;
    bool augments() const { return chain.size() > 1; }

    friend bool operator==(const ResolvedTable&, const ResolvedTable&) = default;
};

struct Diagnostic {
    std::string message;
    std::vector<std::string> subjects;
};

/// The table described by `entry` alone, without following AUGMENTS.
ResolvedTable resolve_standalone(const MibRegistry& registry, std::string_view entry);

/// Appends `ext` onto `base`: identity from ext, index from base, columns concatenated.
ResolvedTable flatten(const ResolvedTable& base, const ResolvedTable& ext);

/// The entry `entry` augments after folding table-level clauses onto entries,
/// or nullopt for a base table. Table-level clauses produce a warning.
std::optional<std::string> augments_target(const MibRegistry& registry, std::string_view entry,
                                           std::vector<Diagnostic>* warnings = nullptr);

/// Flattens every conceptual table in the registry, in OID order.
std::vector<ResolvedTable> resolve_augments(const MibRegistry& registry, Profile profile = Profile::Lenient,
                                            std::vector<Diagnostic>* warnings = nullptr);

const ResolvedTable* find_table(const std::vector<ResolvedTable>& tables, std::string_view table_or_entry);

}  // namespace marf::smi
