#include <cctype>
#include <charconv>

#include <fmt/format.h>

#include "marf/smi/module.hpp"

namespace marf::smi {

std::string_view to_string(MibErrorKind kind)
{
    switch (kind) {
    case MibErrorKind::SyntaxError: return "SyntaxError";
    case MibErrorKind::UnsupportedConstruct: return "UnsupportedConstruct";
    case MibErrorKind::UnresolvedImport: return "UnresolvedImport";
    case MibErrorKind::UndefinedSymbol: return "UndefinedSymbol";
    case MibErrorKind::DuplicateOid: return "DuplicateOid";
    case MibErrorKind::DuplicateName: return "DuplicateName";
    case MibErrorKind::CycleDetected: return "CycleDetected";
    case MibErrorKind::DanglingAugments: return "DanglingAugments";
    case MibErrorKind::AugmentsCycle: return "AugmentsCycle";
    case MibErrorKind::AugmentsNonEntry: return "AugmentsNonEntry";
    case MibErrorKind::ChainedAugments: return "ChainedAugments";
    case MibErrorKind::UnknownName: return "UnknownName";
    }
    return "?";
}

MibError::MibError(MibErrorKind kind, std::string message, std::vector<std::string> subjects, int line)
    : std::runtime_error(line > 0 ? fmt::format("{} (line {}): {}", to_string(kind), line, message)
                                  : fmt::format("{}: {}", to_string(kind), message)),
      kind_(kind),
      subjects_(std::move(subjects)),
      line_(line)
{
}

std::string_view to_string(SyntaxKind kind)
{
    switch (kind) {
    case SyntaxKind::Integer: return "integer";
    case SyntaxKind::IntegerEnum: return "integer-enum";
    case SyntaxKind::Counter32: return "counter32";
    case SyntaxKind::TimeTicks: return "timeticks";
    case SyntaxKind::OctetString: return "octet-string";
    case SyntaxKind::DisplayString: return "display-string";
    case SyntaxKind::ObjectId: return "oid";
    case SyntaxKind::SequenceOf: return "sequence-of";
    case SyntaxKind::Entry: return "entry";
    case SyntaxKind::Named: return "named";
    }
    return "?";
}

std::string_view to_string(Access access)
{
    switch (access) {
    case Access::NotAccessible: return "not-accessible";
    case Access::ReadOnly: return "read-only";
    case Access::ReadWrite: return "read-write";
    }
    return "?";
}

bool operator==(const ObjectTypeDef& a, const ObjectTypeDef& b)
{
    return a.name == b.name && a.syntax == b.syntax && a.max_access == b.max_access &&
           a.status == b.status && a.description == b.description && a.index == b.index &&
           a.augments == b.augments && a.assignment == b.assignment;
}

bool operator==(const NamedAssignment& a, const NamedAssignment& b)
{
    return a.name == b.name && a.kind == b.kind && a.assignment == b.assignment &&
           a.objects == b.objects && a.status == b.status && a.description == b.description;
}

const ObjectTypeDef* MibModule::find_object(std::string_view n) const
{
    for (const auto& o : object_types) {
        if (o.name == n) {
            return &o;
        }
    }
    return nullptr;
}

const SequenceType* MibModule::find_sequence(std::string_view n) const
{
    for (const auto& s : sequences) {
        if (s.name == n) {
            return &s;
        }
    }
    return nullptr;
}

std::vector<AugmentsLink> augments_links(const MibModule& module)
{
    std::vector<AugmentsLink> links;
    auto entry_of = [&](const std::string& table) -> std::optional<std::string> {
        for (const auto& o : module.object_types) {
            if (o.assignment.parent == table && !o.is_table()) {
                return o.name;
            }
        }
        return std::nullopt;
    };
    for (const auto& table : module.object_types) {
        if (!table.is_table()) {
            continue;
        }
        auto entry_name = entry_of(table.name);
        const ObjectTypeDef* entry = entry_name ? module.find_object(*entry_name) : nullptr;
        bool entry_level = entry && entry->augments;
        if (!entry_level && !table.augments) {
            continue;
        }
        AugmentsLink link;
        link.table = table.name;
        link.entry = entry_name.value_or("");
        if (table.augments) {
            link.target_table = table.augments;
        }
        if (entry_level) {
            link.target_entry = entry->augments;
        } else if (table.augments) {
            link.target_entry = entry_of(*table.augments);
        }
        links.push_back(std::move(link));
    }
    return links;
}

namespace {

enum class Tok { Ident, Number, String, Assign, LBrace, RBrace, LParen, RParen, Comma, Semi, Range, Bar, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    int line = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        while (true) {
            skip_space();
            if (pos_ >= src_.size()) {
                out.push_back({Tok::End, "end of input", line_});
                return out;
            }
            out.push_back(next());
        }
    }

private:
    void skip_space()
    {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
                // comment runs to end of line or to the next "--"
                pos_ += 2;
                while (pos_ < src_.size() && src_[pos_] != '\n') {
                    if (src_[pos_] == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
                        pos_ += 2;
                        break;
                    }
                    ++pos_;
                }
            } else {
                break;
            }
        }
    }

    Token next()
    {
        int line = line_;
        char c = src_[pos_];
        auto single = [&](Tok k) {
            ++pos_;
            return Token{k, std::string(1, c), line};
        };
        switch (c) {
        case '{': return single(Tok::LBrace);
        case '}': return single(Tok::RBrace);
        case '(': return single(Tok::LParen);
        case ')': return single(Tok::RParen);
        case ',': return single(Tok::Comma);
        case ';': return single(Tok::Semi);
        case '|': return single(Tok::Bar);
        default: break;
        }
        if (src_.compare(pos_, 3, "::=") == 0) {
            pos_ += 3;
            return {Tok::Assign, "::=", line};
        }
        if (src_.compare(pos_, 2, "..") == 0) {
            pos_ += 2;
            return {Tok::Range, "..", line};
        }
        if (c == '"') {
            std::size_t end = src_.find('"', pos_ + 1);
            if (end == std::string_view::npos) {
                throw MibError(MibErrorKind::SyntaxError, "unterminated string", {}, line);
            }
            std::string text(src_.substr(pos_ + 1, end - pos_ - 1));
            for (char ch : text) {
                if (ch == '\n') {
                    ++line_;
                }
            }
            pos_ = end + 1;
            return {Tok::String, std::move(text), line};
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '-' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            std::size_t start = pos_++;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
            }
            return {Tok::Number, std::string(src_.substr(start, pos_ - start)), line};
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_++;
            while (pos_ < src_.size()) {
                char d = src_[pos_];
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '_') {
                    ++pos_;
                } else if (d == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] != '-') {
                    ++pos_;
                } else {
                    break;
                }
            }
            return {Tok::Ident, std::string(src_.substr(start, pos_ - start)), line};
        }
        throw MibError(MibErrorKind::SyntaxError, fmt::format("unexpected character '{}'", c), {}, line);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

bool is_unsupported_macro(std::string_view kw)
{
    return kw == "OBJECT-GROUP" || kw == "NOTIFICATION-GROUP" || kw == "MODULE-COMPLIANCE" ||
           kw == "AGENT-CAPABILITIES" || kw == "OBJECT-IDENTITY" || kw == "TRAP-TYPE" || kw == "MACRO";
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    MibModule module()
    {
        MibModule m;
        m.name = ident("module name");
        keyword("DEFINITIONS");
        expect(Tok::Assign, "'::='");
        keyword("BEGIN");
        if (peek_ident("IMPORTS")) {
            ++pos_;
            imports(m);
        }
        while (!peek_ident("END")) {
            if (peek().kind == Tok::End) {
                fail("END");
            }
            item(m);
        }
        ++pos_;
        if (peek().kind != Tok::End) {
            fail("end of input after END");
        }
        return m;
    }

private:
    const Token& peek(std::size_t ahead = 0) const
    {
        std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
        return toks_[i];
    }

    bool peek_ident(std::string_view text, std::size_t ahead = 0) const
    {
        const auto& t = peek(ahead);
        return t.kind == Tok::Ident && t.text == text;
    }

    [[noreturn]] void fail(std::string_view expected) const
    {
        const auto& t = peek();
        throw MibError(MibErrorKind::SyntaxError,
                       fmt::format("expected {}, found '{}'", expected, t.text), {std::string(expected)},
                       t.line);
    }

    const Token& expect(Tok kind, std::string_view what)
    {
        if (peek().kind != kind) {
            fail(what);
        }
        return toks_[pos_++];
    }

    std::string ident(std::string_view what) { return expect(Tok::Ident, what).text; }

    void keyword(std::string_view kw)
    {
        if (!peek_ident(kw)) {
            fail(kw);
        }
        ++pos_;
    }

    std::string string_lit() { return expect(Tok::String, "quoted string").text; }

    std::int64_t number()
    {
        const auto& t = expect(Tok::Number, "number");
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc{}) {
            throw MibError(MibErrorKind::SyntaxError, "number out of range: " + t.text, {}, t.line);
        }
        return v;
    }

    void imports(MibModule& m)
    {
        while (peek().kind != Tok::Semi) {
            std::vector<std::string> symbols;
            symbols.push_back(ident("imported symbol"));
            while (peek().kind == Tok::Comma) {
                ++pos_;
                symbols.push_back(ident("imported symbol"));
            }
            keyword("FROM");
            std::string from = ident("module name");
            for (auto& s : symbols) {
                m.imports.push_back({std::move(s), from});
            }
        }
        ++pos_;
    }

    OidAssignment oid_value()
    {
        expect(Tok::LBrace, "'{'");
        OidAssignment a;
        a.parent = ident("parent name");
        auto v = number();
        if (v < 0 || v > 0xFFFFFFFFll) {
            throw MibError(MibErrorKind::SyntaxError, "sub-identifier out of range", {}, toks_[pos_ - 1].line);
        }
        a.sub_id = static_cast<std::uint32_t>(v);
        expect(Tok::RBrace, "'}'");
        return a;
    }

    std::pair<std::int64_t, std::int64_t> range_body()
    {
        auto lo = number();
        auto hi = lo;
        if (peek().kind == Tok::Range) {
            ++pos_;
            hi = number();
        }
        while (peek().kind == Tok::Bar) {
            // further alternatives widen the range
            ++pos_;
            auto lo2 = number();
            auto hi2 = lo2;
            if (peek().kind == Tok::Range) {
                ++pos_;
                hi2 = number();
            }
            lo = std::min(lo, lo2);
            hi = std::max(hi, hi2);
        }
        return {lo, hi};
    }

    std::optional<std::pair<std::int64_t, std::int64_t>> size_constraint()
    {
        if (peek().kind != Tok::LParen) {
            return std::nullopt;
        }
        ++pos_;
        keyword("SIZE");
        expect(Tok::LParen, "'('");
        auto r = range_body();
        expect(Tok::RParen, "')'");
        expect(Tok::RParen, "')'");
        return r;
    }

    std::optional<std::pair<std::int64_t, std::int64_t>> value_constraint()
    {
        if (peek().kind != Tok::LParen) {
            return std::nullopt;
        }
        ++pos_;
        auto r = range_body();
        expect(Tok::RParen, "')'");
        return r;
    }

    Syntax syntax()
    {
        Syntax s;
        const auto& t = peek();
        if (t.kind != Tok::Ident) {
            fail("syntax");
        }
        std::string word = t.text;
        ++pos_;
        if (word == "INTEGER" || word == "Integer32") {
            if (word == "INTEGER" && peek().kind == Tok::LBrace) {
                ++pos_;
                s.kind = SyntaxKind::IntegerEnum;
                while (true) {
                    std::string label = ident("enumeration label");
                    expect(Tok::LParen, "'('");
                    auto v = number();
                    expect(Tok::RParen, "')'");
                    s.labels.emplace_back(std::move(label), v);
                    if (peek().kind == Tok::Comma) {
                        ++pos_;
                        continue;
                    }
                    expect(Tok::RBrace, "'}'");
                    break;
                }
            } else {
                s.kind = SyntaxKind::Integer;
                s.range = value_constraint();
            }
        } else if (word == "Counter32") {
            s.kind = SyntaxKind::Counter32;
        } else if (word == "TimeTicks") {
            s.kind = SyntaxKind::TimeTicks;
        } else if (word == "OCTET") {
            keyword("STRING");
            s.kind = SyntaxKind::OctetString;
            s.range = size_constraint();
        } else if (word == "OBJECT") {
            keyword("IDENTIFIER");
            s.kind = SyntaxKind::ObjectId;
        } else if (word == "SEQUENCE") {
            keyword("OF");
            s.kind = SyntaxKind::SequenceOf;
            s.ref = ident("entry type name");
        } else if (std::isupper(static_cast<unsigned char>(word[0]))) {
            s.kind = SyntaxKind::Named;
            s.ref = word;
            if (peek().kind == Tok::LParen) {
                s.range = peek_ident("SIZE", 1) ? size_constraint() : value_constraint();
            }
        } else {
            --pos_;
            fail("syntax");
        }
        return s;
    }

    Access access()
    {
        const auto& t = peek();
        std::string word = ident("access value");
        if (word == "not-accessible") return Access::NotAccessible;
        if (word == "read-only") return Access::ReadOnly;
        if (word == "read-write") return Access::ReadWrite;
        throw MibError(MibErrorKind::UnsupportedConstruct, fmt::format("MAX-ACCESS {}", word), {word}, t.line);
    }

    std::vector<std::string> name_list()
    {
        expect(Tok::LBrace, "'{'");
        std::vector<std::string> names;
        if (peek().kind == Tok::RBrace) {
            ++pos_;
            return names;
        }
        while (true) {
            if (peek_ident("IMPLIED")) {
                ++pos_;
            }
            names.push_back(ident("name"));
            if (peek().kind == Tok::Comma) {
                ++pos_;
                continue;
            }
            expect(Tok::RBrace, "'}'");
            return names;
        }
    }

    void skip_braced()
    {
        expect(Tok::LBrace, "'{'");
        int depth = 1;
        while (depth > 0) {
            auto k = peek().kind;
            if (k == Tok::End) {
                fail("'}'");
            }
            if (k == Tok::LBrace) ++depth;
            if (k == Tok::RBrace) --depth;
            ++pos_;
        }
    }

    void item(MibModule& m)
    {
        const Token& head = peek();
        if (head.kind != Tok::Ident) {
            fail("definition");
        }
        std::string name = head.text;
        int line = head.line;
        ++pos_;

        if (peek().kind == Tok::Assign) {
            ++pos_;
            type_assignment(m, name, line);
            return;
        }
        const Token& kw = peek();
        if (kw.kind != Tok::Ident) {
            fail("MODULE-IDENTITY, OBJECT IDENTIFIER, OBJECT-TYPE or NOTIFICATION-TYPE");
        }
        if (kw.text == "MODULE-IDENTITY") {
            ++pos_;
            module_identity(m, name, line);
        } else if (kw.text == "OBJECT" && peek_ident("IDENTIFIER", 1)) {
            pos_ += 2;
            expect(Tok::Assign, "'::='");
            NamedAssignment a;
            a.name = name;
            a.kind = NodeKind::ObjectIdentity;
            a.assignment = oid_value();
            a.line = line;
            m.assignments.push_back(std::move(a));
        } else if (kw.text == "OBJECT-TYPE") {
            ++pos_;
            object_type(m, name, line);
        } else if (kw.text == "NOTIFICATION-TYPE") {
            ++pos_;
            notification(m, name, line);
        } else if (is_unsupported_macro(kw.text)) {
            throw MibError(MibErrorKind::UnsupportedConstruct,
                           fmt::format("{} '{}' is outside the supported SMI subset", kw.text, name),
                           {kw.text, name}, kw.line);
        } else {
            fail("MODULE-IDENTITY, OBJECT IDENTIFIER, OBJECT-TYPE or NOTIFICATION-TYPE");
        }
    }

    void type_assignment(MibModule& m, const std::string& name, int line)
    {
        if (peek_ident("TEXTUAL-CONVENTION")) {
            ++pos_;
            TextualConvention tc;
            tc.name = name;
            while (!peek_ident("SYNTAX")) {
                if (peek_ident("DISPLAY-HINT")) {
                    ++pos_;
                    tc.display_hint = string_lit();
                } else if (peek_ident("STATUS")) {
                    ++pos_;
                    ident("status value");
                } else if (peek_ident("DESCRIPTION")) {
                    ++pos_;
                    tc.description = string_lit();
                } else if (peek_ident("REFERENCE")) {
                    ++pos_;
                    string_lit();
                } else {
                    fail("TEXTUAL-CONVENTION clause");
                }
            }
            ++pos_;
            tc.base = syntax();
            m.textual_conventions.push_back(std::move(tc));
            return;
        }
        if (peek_ident("SEQUENCE") && peek(1).kind == Tok::LBrace) {
            pos_ += 2;
            SequenceType seq;
            seq.name = name;
            while (peek().kind != Tok::RBrace) {
                SequenceField f;
                f.name = ident("field name");
                f.syntax = syntax();
                seq.fields.push_back(std::move(f));
                if (peek().kind == Tok::Comma) {
                    ++pos_;
                } else if (peek().kind != Tok::RBrace) {
                    fail("',' or '}'");
                }
            }
            ++pos_;
            m.sequences.push_back(std::move(seq));
            return;
        }
        if (peek_ident("MACRO")) {
            throw MibError(MibErrorKind::UnsupportedConstruct, fmt::format("MACRO '{}'", name), {"MACRO", name},
                           line);
        }
        throw MibError(MibErrorKind::UnsupportedConstruct,
                       fmt::format("type assignment '{}' is outside the supported SMI subset", name),
                       {"type assignment", name}, line);
    }

    void module_identity(MibModule& m, const std::string& name, int line)
    {
        NamedAssignment a;
        a.name = name;
        a.kind = NodeKind::ModuleIdentity;
        a.line = line;
        while (peek().kind != Tok::Assign) {
            if (peek_ident("LAST-UPDATED") || peek_ident("ORGANIZATION") || peek_ident("CONTACT-INFO")) {
                ++pos_;
                string_lit();
            } else if (peek_ident("DESCRIPTION")) {
                ++pos_;
                a.description = string_lit();
            } else if (peek_ident("REVISION")) {
                ++pos_;
                string_lit();
                keyword("DESCRIPTION");
                string_lit();
            } else {
                fail("MODULE-IDENTITY clause");
            }
        }
        ++pos_;
        a.assignment = oid_value();
        m.assignments.push_back(std::move(a));
    }

    void object_type(MibModule& m, const std::string& name, int line)
    {
        ObjectTypeDef o;
        o.name = name;
        o.line = line;
        bool have_syntax = false;
        bool have_access = false;
        while (peek().kind != Tok::Assign) {
            const Token& clause = peek();
            if (clause.kind != Tok::Ident) {
                fail("OBJECT-TYPE clause");
            }
            ++pos_;
            if (clause.text == "SYNTAX") {
                o.syntax = syntax();
                have_syntax = true;
            } else if (clause.text == "UNITS" || clause.text == "REFERENCE") {
                string_lit();
            } else if (clause.text == "MAX-ACCESS") {
                o.max_access = access();
                have_access = true;
            } else if (clause.text == "ACCESS") {
                throw MibError(MibErrorKind::UnsupportedConstruct, "SMIv1 ACCESS clause", {"ACCESS", name},
                               clause.line);
            } else if (clause.text == "STATUS") {
                o.status = ident("status value");
            } else if (clause.text == "DESCRIPTION") {
                o.description = string_lit();
            } else if (clause.text == "INDEX") {
                o.index = name_list();
            } else if (clause.text == "AUGMENTS") {
                auto targets = name_list();
                if (targets.size() != 1) {
                    throw MibError(MibErrorKind::SyntaxError, "AUGMENTS takes exactly one name", {name},
                                   clause.line);
                }
                o.augments = targets.front();
            } else if (clause.text == "DEFVAL") {
                skip_braced();
            } else {
                --pos_;
                fail("OBJECT-TYPE clause");
            }
        }
        if (!have_syntax) {
            fail("SYNTAX clause");
        }
        if (!have_access) {
            fail("MAX-ACCESS clause");
        }
        ++pos_;
        o.assignment = oid_value();
        m.object_types.push_back(std::move(o));
    }

    void notification(MibModule& m, const std::string& name, int line)
    {
        NamedAssignment a;
        a.name = name;
        a.kind = NodeKind::Notification;
        a.line = line;
        while (peek().kind != Tok::Assign) {
            if (peek_ident("OBJECTS")) {
                ++pos_;
                a.objects = name_list();
            } else if (peek_ident("STATUS")) {
                ++pos_;
                a.status = ident("status value");
            } else if (peek_ident("DESCRIPTION")) {
                ++pos_;
                a.description = string_lit();
            } else if (peek_ident("REFERENCE")) {
                ++pos_;
                string_lit();
            } else {
                fail("NOTIFICATION-TYPE clause");
            }
        }
        ++pos_;
        a.assignment = oid_value();
        m.assignments.push_back(std::move(a));
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

MibModule parse_mib(std::string_view source)
{
    return Parser(Lexer(source).run()).module();
}

}  // namespace marf::smi
