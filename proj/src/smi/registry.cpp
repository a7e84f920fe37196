#include "marf/smi/registry.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <fmt/format.h>

#ifndef MARF_MIB_DIR
#define MARF_MIB_DIR "mibs"
#endif

namespace marf::smi {

namespace {

struct BuiltinNode {
    const char* name;
    const char* module;
    const char* oid;
};

constexpr BuiltinNode kBuiltinNodes[] = {
    {"org", "SNMPv2-SMI", "1.3"},
    {"dod", "SNMPv2-SMI", "1.3.6"},
    {"internet", "SNMPv2-SMI", "1.3.6.1"},
    {"mgmt", "SNMPv2-SMI", "1.3.6.1.2"},
    {"mib-2", "SNMPv2-SMI", "1.3.6.1.2.1"},
    {"private", "SNMPv2-SMI", "1.3.6.1.4"},
    {"enterprises", "SNMPv2-SMI", "1.3.6.1.4.1"},
    {"snmpV2", "SNMPv2-SMI", "1.3.6.1.6"},
    {"snmpModules", "SNMPv2-SMI", "1.3.6.1.6.3"},
    {"system", "SNMPv2-MIB", "1.3.6.1.2.1.1"},
    {"sysUpTime", "SNMPv2-MIB", "1.3.6.1.2.1.1.3"},
    {"snmpTrapOID", "SNMPv2-MIB", "1.3.6.1.6.3.1.1.4.1"},
};

/// Type and macro names each core module exports in addition to its nodes.
const std::map<std::string, std::set<std::string>>& builtin_exports()
{
    static const std::map<std::string, std::set<std::string>> exports = {
        {"SNMPv2-SMI",
         {"MODULE-IDENTITY", "OBJECT-TYPE", "NOTIFICATION-TYPE", "OBJECT-IDENTITY", "Integer32", "Counter32",
          "TimeTicks"}},
        {"SNMPv2-TC", {"TEXTUAL-CONVENTION", "DisplayString", "TruthValue"}},
        {"SNMPv2-MIB", {}},
    };
    return exports;
}

Syntax builtin_type(std::string_view name)
{
    Syntax s;
    if (name == "DisplayString") {
        s.kind = SyntaxKind::DisplayString;
        s.range = std::pair<std::int64_t, std::int64_t>{0, 255};
    } else if (name == "TruthValue") {
        s.kind = SyntaxKind::IntegerEnum;
        s.labels = {{"true", 1}, {"false", 2}};
    } else if (name == "Integer32") {
        s.kind = SyntaxKind::Integer;
    } else {
        s.kind = SyntaxKind::Named;
        s.ref = std::string(name);
    }
    return s;
}

struct Pending {
    std::string name;
    std::string module;
    NodeKind kind;
    OidAssignment assignment;
    const ObjectTypeDef* object = nullptr;
    const NamedAssignment* named = nullptr;
    int line = 0;
};

}  // namespace

const MibNode* MibRegistry::find(std::string_view name) const
{
    auto it = by_name_.find(std::string(name));
    return it == by_name_.end() ? nullptr : &nodes_[it->second];
}

const MibNode& MibRegistry::at(std::string_view name) const
{
    const auto* n = find(name);
    if (!n) {
        throw MibError(MibErrorKind::UnknownName, fmt::format("unknown name '{}'", name), {std::string(name)});
    }
    return *n;
}

Oid MibRegistry::oid_of(std::string_view name) const { return at(name).oid; }

const MibNode* MibRegistry::longest_prefix(const Oid& oid) const
{
    // Walk up the OID one arc at a time; OIDs are short so this stays cheap.
    std::vector<Oid::value_type> arcs(oid.arcs().begin(), oid.arcs().end());
    while (arcs.size() >= 2) {
        auto it = by_oid_.find(Oid(arcs));
        if (it != by_oid_.end()) {
            return &nodes_[it->second];
        }
        arcs.pop_back();
    }
    return nullptr;
}

std::string MibRegistry::name_of(const Oid& oid) const
{
    const auto* node = longest_prefix(oid);
    if (!node) {
        return oid.str();
    }
    std::string out = node->name;
    for (auto arc : node->oid.suffix_of(oid)) {
        out += '.';
        out += std::to_string(arc);
    }
    return out;
}

Oid MibRegistry::resolve(std::string_view text) const
{
    if (auto dotted = Oid::try_parse(text)) {
        return *dotted;
    }
    auto dot = text.find('.');
    auto name = text.substr(0, dot);
    Oid base = oid_of(name);
    if (dot == std::string_view::npos) {
        return base;
    }
    std::vector<Oid::value_type> suffix;
    auto rest = text.substr(dot + 1);
    std::string probe = "1.3." + std::string(rest);
    auto parsed = Oid::try_parse(probe);
    if (!parsed) {
        throw MibError(MibErrorKind::UnknownName, fmt::format("malformed instance suffix in '{}'", text),
                       {std::string(text)});
    }
    auto arcs = parsed->arcs();
    suffix.assign(arcs.begin() + 2, arcs.end());
    return base.concat(suffix);
}

std::vector<const MibNode*> MibRegistry::nodes() const
{
    std::vector<const MibNode*> out;
    out.reserve(by_oid_.size());
    for (const auto& [oid, idx] : by_oid_) {
        out.push_back(&nodes_[idx]);
    }
    return out;
}

std::vector<const MibNode*> MibRegistry::children(std::string_view parent) const
{
    std::vector<const MibNode*> out;
    const auto* p = find(parent);
    if (!p) {
        return out;
    }
    for (auto it = by_oid_.upper_bound(p->oid); it != by_oid_.end() && p->oid.is_prefix_of(it->first); ++it) {
        if (it->first.size() == p->oid.size() + 1) {
            out.push_back(&nodes_[it->second]);
        }
    }
    return out;
}

const SequenceType* MibRegistry::sequence(std::string_view name) const
{
    auto it = sequences_.find(std::string(name));
    return it == sequences_.end() ? nullptr : &it->second;
}

Syntax MibRegistry::resolve_syntax(const Syntax& s) const
{
    Syntax cur = s;
    for (int depth = 0; cur.kind == SyntaxKind::Named; ++depth) {
        if (depth > 16) {
            throw MibError(MibErrorKind::CycleDetected, fmt::format("textual convention loop at '{}'", s.ref),
                           {s.ref});
        }
        if (sequences_.count(cur.ref)) {
            Syntax entry;
            entry.kind = SyntaxKind::Entry;
            entry.ref = cur.ref;
            return entry;
        }
        auto tc = conventions_.find(cur.ref);
        if (tc != conventions_.end()) {
            auto range = cur.range;
            cur = tc->second.base;
            if (range) {
                cur.range = range;
            }
            continue;
        }
        Syntax b = builtin_type(cur.ref);
        if (b.kind == SyntaxKind::Named) {
            throw MibError(MibErrorKind::UndefinedSymbol, fmt::format("unknown type '{}'", cur.ref), {cur.ref});
        }
        if (cur.range) {
            b.range = cur.range;
        }
        cur = b;
    }
    return cur;
}

MibRegistry link_modules(std::vector<MibModule> modules)
{
    MibRegistry reg;

    // Module names and the symbols each defines.
    std::map<std::string, std::set<std::string>> exports;
    for (const auto& [mod, syms] : builtin_exports()) {
        exports[mod] = syms;
    }
    for (const auto& b : kBuiltinNodes) {
        exports[b.module].insert(b.name);
    }
    std::map<std::string, std::string> defined_in;  // value or type name -> module
    for (const auto& b : kBuiltinNodes) {
        defined_in[b.name] = b.module;
    }

    auto define = [&](const std::string& name, const std::string& module) {
        auto [it, inserted] = defined_in.emplace(name, module);
        if (!inserted) {
            throw MibError(MibErrorKind::DuplicateName,
                           fmt::format("'{}' defined in both {} and {}", name, it->second, module),
                           {name, it->second, module});
        }
        exports[module].insert(name);
    };

    for (const auto& m : modules) {
        if (exports.count(m.name)) {
            throw MibError(MibErrorKind::DuplicateName, fmt::format("module '{}' loaded twice", m.name), {m.name});
        }
        exports[m.name];
    }
    for (const auto& m : modules) {
        for (const auto& a : m.assignments) define(a.name, m.name);
        for (const auto& o : m.object_types) define(o.name, m.name);
        for (const auto& tc : m.textual_conventions) {
            define(tc.name, m.name);
            reg.conventions_.emplace(tc.name, tc);
        }
        for (const auto& s : m.sequences) {
            define(s.name, m.name);
            reg.sequences_.emplace(s.name, s);
        }
    }

    // Imports must name a known module that defines the symbol.
    for (const auto& m : modules) {
        for (const auto& imp : m.imports) {
            auto it = exports.find(imp.module);
            if (it == exports.end() || !it->second.count(imp.symbol)) {
                throw MibError(MibErrorKind::UnresolvedImport,
                               fmt::format("{} imports '{}' from {}, which does not define it", m.name,
                                           imp.symbol, imp.module),
                               {imp.symbol, imp.module});
            }
        }
    }

    auto visible = [&](const MibModule& m, const std::string& name) {
        auto it = defined_in.find(name);
        if (it == defined_in.end()) {
            return false;
        }
        if (it->second == m.name) {
            return true;
        }
        return std::any_of(m.imports.begin(), m.imports.end(),
                           [&](const Import& imp) { return imp.symbol == name && imp.module == it->second; });
    };
    auto require_visible = [&](const MibModule& m, const std::string& name, int line) {
        if (!visible(m, name)) {
            throw MibError(MibErrorKind::UndefinedSymbol,
                           fmt::format("'{}' is neither defined in nor imported into {}", name, m.name),
                           {name, m.name}, line);
        }
    };

    std::map<std::string, Pending> pending;
    for (const auto& m : modules) {
        for (const auto& a : m.assignments) {
            require_visible(m, a.assignment.parent, a.line);
            for (const auto& obj : a.objects) require_visible(m, obj, a.line);
            pending.emplace(a.name, Pending{a.name, m.name, a.kind, a.assignment, nullptr, &a, a.line});
        }
        for (const auto& o : m.object_types) {
            require_visible(m, o.assignment.parent, o.line);
            for (const auto& idx : o.index) require_visible(m, idx, o.line);
            if (o.syntax.kind == SyntaxKind::Named || o.syntax.kind == SyntaxKind::SequenceOf) {
                if (builtin_type(o.syntax.ref).kind == SyntaxKind::Named) {
                    require_visible(m, o.syntax.ref, o.line);
                }
            }
            pending.emplace(o.name, Pending{o.name, m.name, NodeKind::ObjectType, o.assignment, &o, nullptr, o.line});
        }
    }

    // Resolve OIDs depth-first; an assignment reached again while on the stack is a cycle.
    std::map<std::string, Oid> resolved;
    for (const auto& b : kBuiltinNodes) {
        resolved.emplace(b.name, Oid::parse(b.oid));
    }
    std::vector<std::string> stack;
    std::function<Oid(const std::string&)> resolve_oid = [&](const std::string& name) -> Oid {
        if (auto it = resolved.find(name); it != resolved.end()) {
            return it->second;
        }
        auto st = std::find(stack.begin(), stack.end(), name);
        if (st != stack.end()) {
            std::vector<std::string> cycle(st, stack.end());
            std::string joined;
            for (const auto& c : cycle) joined += c + " -> ";
            throw MibError(MibErrorKind::CycleDetected, fmt::format("OID assignment cycle: {}{}", joined, name),
                           cycle);
        }
        auto p = pending.find(name);
        if (p == pending.end()) {
            throw MibError(MibErrorKind::UndefinedSymbol, fmt::format("'{}' has no OID assignment", name), {name});
        }
        stack.push_back(name);
        Oid oid = resolve_oid(p->second.assignment.parent).child(p->second.assignment.sub_id);
        stack.pop_back();
        resolved.emplace(name, oid);
        return oid;
    };

    for (const auto& b : kBuiltinNodes) {
        MibNode n;
        n.name = b.name;
        n.module = b.module;
        n.kind = NodeKind::ObjectIdentity;
        n.oid = Oid::parse(b.oid);
        reg.nodes_.push_back(std::move(n));
    }
    for (const auto& [name, p] : pending) {
        MibNode n;
        n.name = name;
        n.module = p.module;
        n.kind = p.kind;
        n.oid = resolve_oid(name);
        if (p.object) {
            n.object = *p.object;
        }
        if (p.named) {
            n.notification_objects = p.named->objects;
        }
        reg.nodes_.push_back(std::move(n));
    }

    for (std::size_t i = 0; i < reg.nodes_.size(); ++i) {
        const auto& n = reg.nodes_[i];
        auto [it, inserted] = reg.by_oid_.emplace(n.oid, i);
        if (!inserted) {
            const auto& other = reg.nodes_[it->second].name;
            throw MibError(MibErrorKind::DuplicateOid,
                           fmt::format("{} assigned to both '{}' and '{}'", n.oid.str(), other, n.name),
                           {n.oid.str(), other, n.name});
        }
        reg.by_name_.emplace(n.name, i);
    }

    for (auto& n : reg.nodes_) {
        if (!n.object) {
            continue;
        }
        const auto& s = n.object->syntax;
        if (s.kind == SyntaxKind::SequenceOf) {
            n.syntax = s;
        } else {
            try {
                n.syntax = reg.resolve_syntax(s);
            } catch (const MibError& e) {
                throw MibError(e.kind(), fmt::format("{} in SYNTAX of '{}'", e.what(), n.name), {n.name},
                               n.object->line);
            }
        }
    }

    for (const auto& [name, seq] : reg.sequences_) {
        for (const auto& f : seq.fields) {
            reg.resolve_syntax(f.syntax);
        }
    }
    return reg;
}

std::vector<MibModule> parse_mib_dir(const std::filesystem::path& dir)
{
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        auto ext = entry.path().extension();
        if (entry.is_regular_file() && (ext == ".mib" || ext == ".txt" || ext == ".my")) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<MibModule> modules;
    for (const auto& f : files) {
        std::ifstream in(f);
        std::stringstream ss;
        ss << in.rdbuf();
        try {
            modules.push_back(parse_mib(ss.str()));
        } catch (const MibError& e) {
            throw MibError(e.kind(), fmt::format("{}: {}", f.filename().string(), e.what()), e.subjects(),
                           e.line());
        }
    }
    return modules;
}

MibRegistry load_mib_dir(const std::filesystem::path& dir) { return link_modules(parse_mib_dir(dir)); }

std::filesystem::path default_mib_dir()
{
    if (const char* env = std::getenv("MARFMAN_MIB_DIR"); env && *env) {
        return env;
    }
    return MARF_MIB_DIR;
}

}  // namespace marf::smi
