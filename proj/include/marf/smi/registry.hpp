#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "marf/oid.hpp"
#include "marf/smi/module.hpp"

namespace marf::smi {

/// One named node of the linked OID tree.
struct MibNode {
    std::string name;
    std::string module;
    NodeKind kind = NodeKind::ObjectIdentity;
    Oid oid;
    /// Present for OBJECT-TYPE nodes.
    std::optional<ObjectTypeDef> object;
    /// Object syntax with textual conventions and SEQUENCE references resolved.
    Syntax syntax;
    /// OBJECTS of a NOTIFICATION-TYPE.
    std::vector<std::string> notification_objects;
};

/// Linked, immutable view over a set of MIB modules. Built once by
/// link_modules(); safe to share between threads afterwards.
class MibRegistry {
public:
    const MibNode* find(std::string_view name) const;
    const MibNode& at(std::string_view name) const;

    /// Throws MibError(UnknownName).
    Oid oid_of(std::string_view name) const;

    /// Registered name for an exact match, otherwise the longest registered
    /// prefix plus the dotted residue ("serviceName.1"). Falls back to the
    /// dotted OID when no prefix is registered.
    std::string name_of(const Oid& oid) const;

    /// Longest registered prefix of `oid`.
    const MibNode* longest_prefix(const Oid& oid) const;

    /// Accepts dotted OIDs, bare names, and name.suffix forms.
    Oid resolve(std::string_view text) const;

    /// Nodes in OID order.
    std::vector<const MibNode*> nodes() const;
    std::vector<const MibNode*> children(std::string_view parent) const;

    const SequenceType* sequence(std::string_view name) const;
    /// Resolves Named syntaxes through textual conventions; SEQUENCE refs become Entry.
    Syntax resolve_syntax(const Syntax& s) const;

    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    friend MibRegistry link_modules(std::vector<MibModule> modules);

    std::vector<MibNode> nodes_;
    std::unordered_map<std::string, std::size_t> by_name_;
    std::map<Oid, std::size_t> by_oid_;
    std::unordered_map<std::string, SequenceType> sequences_;
    std::unordered_map<std::string, TextualConvention> conventions_;
    std::vector<std::string> warnings_;
};

/// Links modules against each other and a built-in core (SNMPv2-SMI,
/// SNMPv2-TC, SNMPv2-MIB). AUGMENTS targets are not checked here.
MibRegistry link_modules(std::vector<MibModule> modules);

/// Parses every *.mib / *.txt / *.my file in `dir`, in file name order.
std::vector<MibModule> parse_mib_dir(const std::filesystem::path& dir);

/// parse_mib_dir() followed by link_modules().
MibRegistry load_mib_dir(const std::filesystem::path& dir);

/// $MARFMAN_MIB_DIR when set, otherwise the directory the bundled MIBs were installed to.
std::filesystem::path default_mib_dir();

}  // namespace marf::smi
