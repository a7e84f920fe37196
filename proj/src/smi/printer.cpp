#include <fmt/format.h>

#include "marf/smi/module.hpp"

namespace marf::smi {

namespace {

std::string syntax_text(const Syntax& s)
{
    auto range = [&](bool size) -> std::string {
        if (!s.range) {
            return "";
        }
        auto body = s.range->first == s.range->second ? fmt::format("{}", s.range->first)
                                                      : fmt::format("{}..{}", s.range->first, s.range->second);
        return size ? fmt::format(" (SIZE ({}))", body) : fmt::format(" ({})", body);
    };
    switch (s.kind) {
    case SyntaxKind::Integer: return "INTEGER" + range(false);
    case SyntaxKind::IntegerEnum: {
        std::string out = "INTEGER { ";
        for (std::size_t i = 0; i < s.labels.size(); ++i) {
            out += fmt::format("{}{}({})", i ? ", " : "", s.labels[i].first, s.labels[i].second);
        }
        return out + " }";
    }
    case SyntaxKind::Counter32: return "Counter32";
    case SyntaxKind::TimeTicks: return "TimeTicks";
    case SyntaxKind::OctetString: return "OCTET STRING" + range(true);
    case SyntaxKind::DisplayString: return "DisplayString" + range(true);
    case SyntaxKind::ObjectId: return "OBJECT IDENTIFIER";
    case SyntaxKind::SequenceOf: return "SEQUENCE OF " + s.ref;
    case SyntaxKind::Entry: return s.ref;
    case SyntaxKind::Named: return s.ref;
    }
    return "";
}

std::string named_with_range(const Syntax& s)
{
    if (s.kind != SyntaxKind::Named || !s.range) {
        return syntax_text(s);
    }
    // A constraint on a named type prints as a value range; SIZE and value
    // ranges are stored identically so either spelling reparses equal.
    auto body = s.range->first == s.range->second ? fmt::format("{}", s.range->first)
                                                  : fmt::format("{}..{}", s.range->first, s.range->second);
    return fmt::format("{} ({})", s.ref, body);
}

std::string oid_text(const OidAssignment& a) { return fmt::format("{{ {} {} }}", a.parent, a.sub_id); }

}  // namespace

std::string print_mib(const MibModule& m)
{
    std::string out = fmt::format("{} DEFINITIONS ::= BEGIN\n\n", m.name);
    if (!m.imports.empty()) {
        out += "IMPORTS\n";
        std::size_t i = 0;
        while (i < m.imports.size()) {
            const auto& from = m.imports[i].module;
            std::string line = "    ";
            bool first = true;
            while (i < m.imports.size() && m.imports[i].module == from) {
                line += (first ? "" : ", ") + m.imports[i].symbol;
                first = false;
                ++i;
            }
            out += line + "\n        FROM " + from + "\n";
        }
        out += "    ;\n\n";
    }
    for (const auto& tc : m.textual_conventions) {
        out += fmt::format("{} ::= TEXTUAL-CONVENTION\n", tc.name);
        if (tc.display_hint) {
            out += fmt::format("    DISPLAY-HINT \"{}\"\n", *tc.display_hint);
        }
        out += fmt::format("    STATUS current\n    DESCRIPTION \"{}\"\n    SYNTAX {}\n\n", tc.description,
                           named_with_range(tc.base));
    }
    for (const auto& a : m.assignments) {
        switch (a.kind) {
        case NodeKind::ModuleIdentity:
            out += fmt::format(
                "{} MODULE-IDENTITY\n    LAST-UPDATED \"200704010000Z\"\n    ORGANIZATION \"\"\n"
                "    CONTACT-INFO \"\"\n    DESCRIPTION \"{}\"\n    ::= {}\n\n",
                a.name, a.description, oid_text(a.assignment));
            break;
        case NodeKind::ObjectIdentity:
            out += fmt::format("{} OBJECT IDENTIFIER ::= {}\n\n", a.name, oid_text(a.assignment));
            break;
        case NodeKind::Notification: {
            out += fmt::format("{} NOTIFICATION-TYPE\n", a.name);
            if (!a.objects.empty()) {
                out += "    OBJECTS { ";
                for (std::size_t i = 0; i < a.objects.size(); ++i) {
                    out += (i ? ", " : "") + a.objects[i];
                }
                out += " }\n";
            }
            if (!a.status.empty()) {
                out += fmt::format("    STATUS {}\n", a.status);
            }
            out += fmt::format("    DESCRIPTION \"{}\"\n    ::= {}\n\n", a.description, oid_text(a.assignment));
            break;
        }
        case NodeKind::ObjectType: break;
        }
    }
    for (const auto& o : m.object_types) {
        out += fmt::format("{} OBJECT-TYPE\n    SYNTAX {}\n    MAX-ACCESS {}\n", o.name, named_with_range(o.syntax),
                           to_string(o.max_access));
        if (!o.status.empty()) {
            out += fmt::format("    STATUS {}\n", o.status);
        }
        out += fmt::format("    DESCRIPTION \"{}\"\n", o.description);
        if (!o.index.empty()) {
            out += "    INDEX { ";
            for (std::size_t i = 0; i < o.index.size(); ++i) {
                out += (i ? ", " : "") + o.index[i];
            }
            out += " }\n";
        }
        if (o.augments) {
            out += fmt::format("    AUGMENTS {{ {} }}\n", *o.augments);
        }
        out += fmt::format("    ::= {}\n\n", oid_text(o.assignment));
    }
    for (const auto& s : m.sequences) {
        out += fmt::format("{} ::= SEQUENCE {{\n", s.name);
        for (std::size_t i = 0; i < s.fields.size(); ++i) {
            out += fmt::format("    {} {}{}\n", s.fields[i].name, named_with_range(s.fields[i].syntax),
                               i + 1 < s.fields.size() ? "," : "");
        }
        out += "}\n\n";
    }
    out += "END\n";
    return out;
}

}  // namespace marf::smi
