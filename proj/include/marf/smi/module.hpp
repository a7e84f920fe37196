#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace marf::smi {

enum class MibErrorKind {
    SyntaxError,
    UnsupportedConstruct,
    UnresolvedImport,
    UndefinedSymbol,
    DuplicateOid,
    DuplicateName,
    CycleDetected,
    DanglingAugments,
    AugmentsCycle,
    AugmentsNonEntry,
    ChainedAugments,
    UnknownName,
};

std::string_view to_string(MibErrorKind kind);

/// Every parse, link, and resolution failure. `subjects` holds the names (or
/// dotted OIDs) the diagnostic is about, in the order the message mentions them.
class MibError : public std::runtime_error {
public:
    MibError(MibErrorKind kind, std::string message, std::vector<std::string> subjects = {},
             int line = 0);

    MibErrorKind kind() const { return kind_; }
    const std::vector<std::string>& subjects() const { return subjects_; }
    int line() const { return line_; }

private:
    MibErrorKind kind_;
    std::vector<std::string> subjects_;
    int line_;
};

enum class SyntaxKind {
    Integer,
    IntegerEnum,
    Counter32,
    TimeTicks,
    OctetString,
    DisplayString,
    ObjectId,
    SequenceOf,
    /// A reference to a SEQUENCE type, i.e. the syntax of a conceptual row.
    Entry,
    /// Unresolved reference to a textual convention or SEQUENCE type name.
    Named,
};

std::string_view to_string(SyntaxKind kind);

struct Syntax {
    SyntaxKind kind = SyntaxKind::Integer;
    /// Enumeration labels for IntegerEnum.
    std::vector<std::pair<std::string, std::int64_t>> labels;
    /// Entry type for SequenceOf / Entry, type name for Named.
    std::string ref;
    /// Optional value range (INTEGER) or SIZE range (OCTET STRING).
    std::optional<std::pair<std::int64_t, std::int64_t>> range;

    friend bool operator==(const Syntax&, const Syntax&) = default;
};

enum class Access { NotAccessible, ReadOnly, ReadWrite };

std::string_view to_string(Access access);

/// `{ parent subId }` as written in the source.
struct OidAssignment {
    std::string parent;
    std::uint32_t sub_id = 0;
    friend bool operator==(const OidAssignment&, const OidAssignment&) = default;
};

struct ObjectTypeDef {
    std::string name;
    Syntax syntax;
    Access max_access = Access::NotAccessible;
    std::string status;
    std::string description;
    std::vector<std::string> index;
    /// Target named in an AUGMENTS clause, unresolved.
    std::optional<std::string> augments;
    OidAssignment assignment;
    int line = 0;

    bool is_table() const { return syntax.kind == SyntaxKind::SequenceOf; }

    /// Structural equality; source line numbers are not compared.
    friend bool operator==(const ObjectTypeDef& a, const ObjectTypeDef& b);
};

enum class NodeKind { ModuleIdentity, ObjectIdentity, ObjectType, Notification };

/// Any named OID assignment other than OBJECT-TYPE.
struct NamedAssignment {
    std::string name;
    NodeKind kind = NodeKind::ObjectIdentity;
    OidAssignment assignment;
    /// OBJECTS clause of a NOTIFICATION-TYPE.
    std::vector<std::string> objects;
    std::string status;
    std::string description;
    int line = 0;

    friend bool operator==(const NamedAssignment& a, const NamedAssignment& b);
};

struct TextualConvention {
    std::string name;
    Syntax base;
    std::string description;
    std::optional<std::string> display_hint;
    friend bool operator==(const TextualConvention&, const TextualConvention&) = default;
};

struct SequenceField {
    std::string name;
    Syntax syntax;
    friend bool operator==(const SequenceField&, const SequenceField&) = default;
};

struct SequenceType {
    std::string name;
    std::vector<SequenceField> fields;
    friend bool operator==(const SequenceType&, const SequenceType&) = default;
};

struct Import {
    std::string symbol;
    std::string module;
    friend bool operator==(const Import&, const Import&) = default;
};

struct MibModule {
    std::string name;
    std::vector<Import> imports;
    std::vector<NamedAssignment> assignments;
    std::vector<ObjectTypeDef> object_types;
    std::vector<TextualConvention> textual_conventions;
    std::vector<SequenceType> sequences;

    const ObjectTypeDef* find_object(std::string_view n) const;
    const SequenceType* find_sequence(std::string_view n) const;

    friend bool operator==(const MibModule&, const MibModule&) = default;
};

/// An AUGMENTS relationship as written in one module, with the table-level and
/// entry-level clauses of one augmenting table folded into a single link.
/// Targets that live in other modules stay as written.
struct AugmentsLink {
    std::string table;
    std::string entry;
    std::optional<std::string> target_table;
    std::optional<std::string> target_entry;
};

std::vector<AugmentsLink> augments_links(const MibModule& module);

MibModule parse_mib(std::string_view source);

/// Pretty-prints a module in the accepted subset; parse_mib(print_mib(m)) == m.
std::string print_mib(const MibModule& module);

}  // namespace marf::smi
