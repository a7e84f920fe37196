#include <doctest.h>

#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "marf/smi/augments.hpp"
#include "marf/smi/registry.hpp"
#include "support/files.hpp"
#include "support/gen.hpp"

using namespace marf;
using namespace marf::smi;

namespace {

MibErrorKind link_error(std::vector<std::string> sources)
{
    std::vector<MibModule> mods;
    for (const auto& s : sources) mods.push_back(parse_mib(s));
    try {
        auto reg = link_modules(std::move(mods));
        resolve_augments(reg);
    } catch (const MibError& e) {
        return e.kind();
    }
    FAIL("link unexpectedly succeeded");
    return MibErrorKind::UnknownName;
}

MibErrorKind parse_error(std::string_view src, int* line = nullptr)
{
    try {
        parse_mib(src);
    } catch (const MibError& e) {
        if (line) *line = e.line();
        return e.kind();
    }
    FAIL("parse unexpectedly succeeded");
    return MibErrorKind::UnknownName;
}

std::vector<std::string> names(const std::vector<ColumnDef>& cols)
{
    std::vector<std::string> out;
    for (const auto& c : cols) out.push_back(c.name);
    return out;
}

/// Bundled modules with the feature-extraction module replaced by the verbatim listing.
std::vector<MibModule> listing_set()
{
    auto mods = parse_mib_dir(default_mib_dir());
    std::erase_if(mods, [](const MibModule& m) { return m.name == "MARF-feature-extraction"; });
    mods.push_back(parse_mib(files::read(files::fixture("fe_listing.mib"))));
    return mods;
}

const char* kTableHead = R"(T DEFINITIONS ::= BEGIN
IMPORTS OBJECT-TYPE, enterprises FROM SNMPv2-SMI;
root OBJECT IDENTIFIER ::= { enterprises 99 }
)";

std::string table_src(const std::string& stem, std::uint32_t sub, const std::string& clause,
                      const std::vector<std::string>& cols)
{
    std::string Entry = stem + "Entry";
    Entry[0] = static_cast<char>(std::toupper(Entry[0]));
    std::string s = fmt::format(R"(
{0}Table OBJECT-TYPE SYNTAX SEQUENCE OF {1} MAX-ACCESS not-accessible STATUS current DESCRIPTION "" ::= {{ root {2} }}
{0}Entry OBJECT-TYPE SYNTAX {1} MAX-ACCESS not-accessible STATUS current DESCRIPTION "" {3} ::= {{ {0}Table 1 }}
{1} ::= SEQUENCE {{ )",
                                stem, Entry, sub, clause);
    for (std::size_t i = 0; i < cols.size(); ++i) s += (i ? ", " : "") + cols[i] + " INTEGER";
    s += " }\n";
    for (std::size_t i = 0; i < cols.size(); ++i) {
        s += fmt::format(R"({} OBJECT-TYPE SYNTAX INTEGER MAX-ACCESS read-only STATUS current DESCRIPTION "" ::= {{ {}Entry {} }}
)",
                         cols[i], stem, i + 1);
    }
    return s;
}

}  // namespace

TEST_CASE("bundled MIB set links and exposes the canonical layout")
{
    auto reg = load_mib_dir(default_mib_dir());
    const std::map<std::string, std::string> layout = {
        {"marf", "1.3.6.1.4.1.28218"},
        {"marfTypes", "1.3.6.1.4.1.28218.1"},
        {"marfStorage", "1.3.6.1.4.1.28218.2"},
        {"storageTable", "1.3.6.1.4.1.28218.2.1"},
        {"storageRecordCount", "1.3.6.1.4.1.28218.2.1.1.4"},
        {"marfServices", "1.3.6.1.4.1.28218.3"},
        {"serviceNotifications", "1.3.6.1.4.1.28218.3.0"},
        {"serviceStatusChange", "1.3.6.1.4.1.28218.3.0.1"},
        {"serviceTable", "1.3.6.1.4.1.28218.3.1"},
        {"serviceEntry", "1.3.6.1.4.1.28218.3.1.1"},
        {"serviceIndex", "1.3.6.1.4.1.28218.3.1.1.1"},
        {"serviceName", "1.3.6.1.4.1.28218.3.1.1.2"},
        {"serviceType", "1.3.6.1.4.1.28218.3.1.1.3"},
        {"serviceStatus", "1.3.6.1.4.1.28218.3.1.1.4"},
        {"serviceUptime", "1.3.6.1.4.1.28218.3.1.1.5"},
        {"serviceInRequests", "1.3.6.1.4.1.28218.3.1.1.6"},
        {"serviceOutErrors", "1.3.6.1.4.1.28218.3.1.1.7"},
        {"sampleLoadingServiceTable", "1.3.6.1.4.1.28218.4.1"},
        {"iFormat", "1.3.6.1.4.1.28218.4.1.1.1"},
        {"adSampleLength", "1.3.6.1.4.1.28218.4.1.1.2"},
        {"preprocessingServiceTable", "1.3.6.1.4.1.28218.5.1"},
        {"dSilenceThresholdMicro", "1.3.6.1.4.1.28218.5.1.1.1"},
        {"bRemoveNoise", "1.3.6.1.4.1.28218.5.1.1.2"},
        {"bRemoveSilence", "1.3.6.1.4.1.28218.5.1.1.3"},
        {"featureextractionServiceTable", "1.3.6.1.4.1.28218.6.1"},
        {"adFeaturesLength", "1.3.6.1.4.1.28218.6.1.1.1"},
        {"oFeatureSetSize", "1.3.6.1.4.1.28218.6.1.1.2"},
        {"lpcServiceTable", "1.3.6.1.4.1.28218.6.2"},
        {"iPoles", "1.3.6.1.4.1.28218.6.2.1.1"},
        {"iWindowLen", "1.3.6.1.4.1.28218.6.2.1.2"},
        {"classificationServiceTable", "1.3.6.1.4.1.28218.7.1"},
        {"oResultSetSize", "1.3.6.1.4.1.28218.7.1.1.2"},
        {"oResultSetTopId", "1.3.6.1.4.1.28218.7.1.1.3"},
        {"marfApps", "1.3.6.1.4.1.28218.8"},
        {"speakerIdentApp", "1.3.6.1.4.1.28218.8.1"},
        {"appTable", "1.3.6.1.4.1.28218.8.1.1"},
        {"appRequests", "1.3.6.1.4.1.28218.8.1.1.1.1"},
        {"appLastSpeakerId", "1.3.6.1.4.1.28218.8.1.1.1.2"},
        {"appLastDistanceMicro", "1.3.6.1.4.1.28218.8.1.1.1.3"},
    };
    for (const auto& [name, dotted] : layout) {
        CAPTURE(name);
        CHECK(reg.oid_of(name) == Oid::parse(dotted));
    }
    CHECK(reg.at("serviceStatus").syntax.kind == SyntaxKind::IntegerEnum);
    CHECK(reg.at("serviceStatus").object->max_access == Access::ReadWrite);
    CHECK(reg.at("dSilenceThresholdMicro").syntax.range == std::pair<std::int64_t, std::int64_t>{0, 999999});
    CHECK(reg.at("serviceStatusChange").notification_objects ==
          std::vector<std::string>{"serviceIndex", "serviceStatus"});
}

TEST_CASE("oid_of and name_of")
{
    auto reg = load_mib_dir(default_mib_dir());
    CHECK(reg.oid_of("marf") == Oid::parse("1.3.6.1.4.1.28218"));
    CHECK(reg.name_of(Oid::parse("1.3.6.1.4.1.28218.3.1.1.2.1")) == "serviceName.1");
    CHECK(reg.name_of(Oid::parse("1.3.6.1.4.1.28218")) == "marf");
    CHECK(reg.name_of(Oid::parse("1.3.6.1.4.1.28218.6.2.1.1.3")) == "iPoles.3");
    CHECK(reg.resolve("iPoles.3") == Oid::parse("1.3.6.1.4.1.28218.6.2.1.1.3"));
    CHECK(reg.resolve(".1.3.6.1.4.1.28218.3") == Oid::parse("1.3.6.1.4.1.28218.3"));
    CHECK(reg.name_of(Oid::parse("0.1.2")) == "0.1.2");
    try {
        reg.oid_of("noSuchSymbol");
        FAIL("expected UnknownName");
    } catch (const MibError& e) {
        CHECK(e.kind() == MibErrorKind::UnknownName);
    }
    // oid_of . name_of is the identity on registered OIDs
    for (const auto* n : reg.nodes()) {
        CAPTURE(n->name);
        CHECK(reg.oid_of(reg.name_of(n->oid)) == n->oid);
        CHECK(reg.name_of(n->oid) == n->name);
    }
}

TEST_CASE("verbatim feature-extraction listing parses into four object types and two AUGMENTS links")
{
    auto m = parse_mib(files::read(files::fixture("fe_listing.mib")));
    CHECK(m.object_types.size() == 4);
    REQUIRE(m.sequences.size() == 2);
    CHECK(m.sequences[1].name == "LPCServiceEntry");
    REQUIRE(m.sequences[1].fields.size() == 2);
    CHECK(m.sequences[1].fields[0].name == "iPoles");
    CHECK(m.sequences[1].fields[1].name == "iWindowLen");

    auto links = augments_links(m);
    REQUIRE(links.size() == 2);
    CHECK(links[0].table == "featureextractionServiceTable");
    CHECK(links[0].entry == "featureextractionServiceEntry");
    CHECK(links[0].target_table == "serviceTable");
    CHECK(links[0].target_entry == "serviceEntry");
    CHECK(links[1].table == "lpcServiceTable");
    CHECK(links[1].entry == "lpcServiceEntry");
    CHECK(links[1].target_table == "featureextractionServiceTable");
    CHECK(links[1].target_entry == "featureextractionServiceEntry");
}

TEST_CASE("verbatim listing resolves leniently with table-level AUGMENTS warnings")
{
    auto reg = link_modules(listing_set());
    std::vector<Diagnostic> warnings;
    auto tables = resolve_augments(reg, Profile::Lenient, &warnings);
    const auto* lpc = find_table(tables, "lpcServiceTable");
    REQUIRE(lpc);
    CHECK(lpc->chain == std::vector<std::string>{"serviceEntry", "featureextractionServiceEntry", "lpcServiceEntry"});
    CHECK(names(lpc->index_columns) == std::vector<std::string>{"serviceIndex"});
    CHECK(names(lpc->effective_columns) ==
          std::vector<std::string>{"serviceIndex", "serviceName", "serviceType", "serviceStatus", "serviceUptime",
                                   "serviceInRequests", "serviceOutErrors", "oFeatureSet", "adFeatures", "iPoles",
                                   "iWindowLen"});
    CHECK(names(lpc->own_columns) == std::vector<std::string>{"iPoles", "iWindowLen"});
    // columns in the listing have no OBJECT-TYPE, hence no OID
    CHECK_FALSE(lpc->column("iPoles")->oid);
    CHECK(lpc->column("serviceName")->oid);
    auto mentions = [&](const std::string& table) {
        return std::any_of(warnings.begin(), warnings.end(), [&](const Diagnostic& d) {
            return std::find(d.subjects.begin(), d.subjects.end(), table) != d.subjects.end();
        });
    };
    CHECK(mentions("featureextractionServiceTable"));
    CHECK(mentions("lpcServiceTable"));
}

TEST_CASE("strict profile rejects the double AUGMENTS chain with a specific diagnostic")
{
    for (auto mods : {listing_set(), parse_mib_dir(default_mib_dir())}) {
        auto reg = link_modules(std::move(mods));
        try {
            resolve_augments(reg, Profile::Strict);
            FAIL("strict profile accepted a chained AUGMENTS");
        } catch (const MibError& e) {
            CHECK(e.kind() == MibErrorKind::ChainedAugments);
            CHECK(e.subjects() ==
                  std::vector<std::string>{"lpcServiceEntry", "featureextractionServiceEntry", "serviceEntry"});
            CHECK(std::string(e.what()).find("featureextractionServiceEntry") != std::string::npos);
        }
    }
}

TEST_CASE("every bundled table shares the index of its chain base")
{
    auto reg = load_mib_dir(default_mib_dir());
    auto tables = resolve_augments(reg);
    CHECK(tables.size() == 8);
    for (const auto& t : tables) {
        CAPTURE(t.table_name);
        const auto* base = find_table(tables, t.chain.front());
        REQUIRE(base);
        CHECK_FALSE(base->augments());
        CHECK(t.index_columns == base->index_columns);
        CHECK(t.index_columns.size() == 1);
        // effective = concatenation over the chain, no duplicates
        std::vector<std::string> expected;
        for (const auto& link : t.chain) {
            for (const auto& c : resolve_standalone(reg, link).own_columns) expected.push_back(c.name);
        }
        CHECK(names(t.effective_columns) == expected);
    }
    const auto* app = find_table(tables, "appTable");
    REQUIRE(app);
    CHECK(names(app->index_columns) == std::vector<std::string>{"appIndex"});
    const auto* svc = find_table(tables, "serviceTable");
    CHECK(svc->effective_columns == svc->own_columns);
}

TEST_CASE("module with only MODULE-IDENTITY")
{
    auto m = parse_mib(R"(EMPTY-MIB DEFINITIONS ::= BEGIN
IMPORTS MODULE-IDENTITY, enterprises FROM SNMPv2-SMI;
e MODULE-IDENTITY LAST-UPDATED "200701010000Z" ORGANIZATION "x" CONTACT-INFO "y" DESCRIPTION "z"
  ::= { enterprises 4242 }
END)");
    CHECK(m.object_types.empty());
    REQUIRE(m.assignments.size() == 1);
    CHECK(m.assignments[0].kind == NodeKind::ModuleIdentity);
    auto reg = link_modules({m});
    CHECK(reg.oid_of("e") == Oid::parse("1.3.6.1.4.1.4242"));
}

TEST_CASE("dangling AUGMENTS parses, then fails at resolution")
{
    std::string src = std::string(kTableHead) + table_src("a", 1, "AUGMENTS { missingEntry }", {"colA"}) + "END";
    auto m = parse_mib(src);
    REQUIRE(m.find_object("aEntry"));
    CHECK(m.find_object("aEntry")->augments == "missingEntry");
    auto reg = link_modules({m});
    try {
        resolve_augments(reg);
        FAIL("expected DanglingAugments");
    } catch (const MibError& e) {
        CHECK(e.kind() == MibErrorKind::DanglingAugments);
        CHECK(e.subjects() == std::vector<std::string>{"aEntry", "missingEntry"});
    }
}

TEST_CASE("link errors")
{
    CHECK(link_error({R"(D DEFINITIONS ::= BEGIN
IMPORTS enterprises FROM SNMPv2-SMI;
a OBJECT IDENTIFIER ::= { enterprises 7 }
b OBJECT IDENTIFIER ::= { enterprises 7 }
END)"}) == MibErrorKind::DuplicateOid);
    CHECK(link_error({R"(C DEFINITIONS ::= BEGIN
a OBJECT IDENTIFIER ::= { a 1 }
END)"}) == MibErrorKind::CycleDetected);
    CHECK(link_error({R"(C DEFINITIONS ::= BEGIN
a OBJECT IDENTIFIER ::= { b 1 }
b OBJECT IDENTIFIER ::= { a 1 }
END)"}) == MibErrorKind::CycleDetected);
    CHECK(link_error({R"(U DEFINITIONS ::= BEGIN
IMPORTS nothingHere FROM SNMPv2-SMI;
END)"}) == MibErrorKind::UnresolvedImport);
    CHECK(link_error({R"(U DEFINITIONS ::= BEGIN
IMPORTS x FROM NO-SUCH-MIB;
END)"}) == MibErrorKind::UnresolvedImport);
    CHECK(link_error({R"(U DEFINITIONS ::= BEGIN
a OBJECT IDENTIFIER ::= { notImported 1 }
END)"}) == MibErrorKind::UndefinedSymbol);

    std::string two_cycle = std::string(kTableHead) + table_src("a", 1, "AUGMENTS { bEntry }", {"colA"}) +
                            table_src("b", 2, "AUGMENTS { aEntry }", {"colB"}) + "END";
    CHECK(link_error({two_cycle}) == MibErrorKind::AugmentsCycle);

    std::string non_entry = std::string(kTableHead) + table_src("a", 1, "AUGMENTS { root }", {"colA"}) + "END";
    CHECK(link_error({non_entry}) == MibErrorKind::AugmentsNonEntry);
}

TEST_CASE("parse errors name the line and construct")
{
    int line = 0;
    CHECK(parse_error("M DEFINITIONS ::= BEGIN\na OBJECT IDENTIFIER ::= { b }\nEND", &line) ==
          MibErrorKind::SyntaxError);
    CHECK(line == 2);
    CHECK(parse_error("M DEFINITIONS ::= BEGIN\n\nx OBJECT-TYPE SYNTAX INTEGER ACCESS read-only STATUS "
                      "mandatory ::= { a 1 }\nEND",
                      &line) == MibErrorKind::UnsupportedConstruct);
    CHECK(line == 3);
    CHECK(parse_error("M DEFINITIONS ::= BEGIN\ng OBJECT-GROUP OBJECTS { a } STATUS current DESCRIPTION \"\" ::= "
                      "{ a 1 }\nEND") == MibErrorKind::UnsupportedConstruct);
    CHECK(parse_error("M DEFINITIONS ::= BEGIN\nFOO MACRO ::= BEGIN END\nEND") ==
          MibErrorKind::UnsupportedConstruct);
    CHECK(parse_error("M DEFINITIONS ::= BEGIN\na OBJECT IDENTIFIER ::= { b 1 }\n") == MibErrorKind::SyntaxError);
    CHECK(parse_error("") == MibErrorKind::SyntaxError);
}

namespace {

std::string ident(gen::Rng& rng, const char* prefix, int i) { return fmt::format("{}{}x{}", prefix, i, rng() % 1000); }

Syntax random_syntax(gen::Rng& rng, const std::vector<std::string>& tcs)
{
    Syntax s;
    switch (rng() % 8) {
    case 0: s.kind = SyntaxKind::Integer; break;
    case 1:
        s.kind = SyntaxKind::Integer;
        s.range = std::pair<std::int64_t, std::int64_t>{-static_cast<std::int64_t>(rng() % 50), rng() % 5000};
        break;
    case 2:
        s.kind = SyntaxKind::IntegerEnum;
        for (int i = 0, n = 1 + static_cast<int>(rng() % 4); i < n; ++i) {
            s.labels.emplace_back(fmt::format("v{}", i), i + 1);
        }
        break;
    case 3: s.kind = SyntaxKind::Counter32; break;
    case 4: s.kind = SyntaxKind::TimeTicks; break;
    case 5:
        s.kind = SyntaxKind::OctetString;
        if (rng() % 2) s.range = std::pair<std::int64_t, std::int64_t>{0, rng() % 255};
        break;
    case 6: s.kind = SyntaxKind::ObjectId; break;
    default:
        if (tcs.empty()) return random_syntax(rng, tcs);
        s.kind = SyntaxKind::Named;
        s.ref = tcs[rng() % tcs.size()];
        if (rng() % 2) s.range = std::pair<std::int64_t, std::int64_t>{1, 1 + rng() % 100};
    }
    return s;
}

/// A random module in the supported subset, with descriptions and ranges
/// exercising the printer.
MibModule random_module(gen::Rng& rng)
{
    MibModule m;
    m.name = fmt::format("GEN-MIB-{}", rng() % 100);
    m.imports = {{"MODULE-IDENTITY", "SNMPv2-SMI"}, {"OBJECT-TYPE", "SNMPv2-SMI"}, {"enterprises", "SNMPv2-SMI"},
                 {"DisplayString", "SNMPv2-TC"}};
    m.assignments.push_back({.name = "genRoot",
                             .kind = NodeKind::ModuleIdentity,
                             .assignment = {"enterprises", 555},
                             .description = "generated module"});
    std::vector<std::string> tcs;
    for (int i = 0, n = static_cast<int>(rng() % 3); i < n; ++i) {
        TextualConvention tc{fmt::format("GenTc{}", i), random_syntax(rng, {}), "tc text", std::nullopt};
        if (rng() % 2) tc.display_hint = "d-2";
        tcs.push_back(tc.name);
        m.textual_conventions.push_back(tc);
    }
    for (int i = 0, n = static_cast<int>(rng() % 4); i < n; ++i) {
        NamedAssignment a{.name = ident(rng, "node", i), .assignment = {"genRoot", static_cast<std::uint32_t>(i + 1)}};
        m.assignments.push_back(a);
    }
    for (int t = 0, n = 1 + static_cast<int>(rng() % 3); t < n; ++t) {
        std::string stem = fmt::format("gen{}", t);
        std::string entry_type = fmt::format("Gen{}Entry", t);
        SequenceType seq{entry_type, {}};
        ObjectTypeDef table{.name = stem + "Table",
                            .syntax = {SyntaxKind::SequenceOf, {}, entry_type, std::nullopt},
                            .status = "current",
                            .description = "line one\n   line two",
                            .assignment = {"genRoot", static_cast<std::uint32_t>(100 + t)}};
        ObjectTypeDef entry{.name = stem + "Entry",
                            .syntax = {SyntaxKind::Named, {}, entry_type, std::nullopt},
                            .status = "current",
                            .assignment = {stem + "Table", 1}};
        if (t > 0 && rng() % 2) {
            entry.augments = fmt::format("gen{}Entry", rng() % t);
        } else {
            entry.index = {stem + "Col0"};
        }
        m.object_types.push_back(table);
        m.object_types.push_back(entry);
        for (int c = 0, cn = 1 + static_cast<int>(rng() % 4); c < cn; ++c) {
            auto syn = random_syntax(rng, tcs);
            std::string col = fmt::format("{}Col{}", stem, c);
            seq.fields.push_back({col, syn});
            ObjectTypeDef o{.name = col,
                            .syntax = syn,
                            .max_access = static_cast<Access>(rng() % 3),
                            .status = rng() % 5 ? "current" : "",
                            .description = rng() % 3 ? "" : "described -- not a comment",
                            .assignment = {stem + "Entry", static_cast<std::uint32_t>(c + 1)}};
            m.object_types.push_back(o);
        }
        m.sequences.push_back(seq);
    }
    if (rng() % 2) {
        m.assignments.push_back({.name = "genTrap",
                                 .kind = NodeKind::Notification,
                                 .assignment = {"genRoot", 0},
                                 .objects = {"gen0Col0"},
                                 .status = "current",
                                 .description = "trap"});
    }
    return m;
}

}  // namespace

TEST_CASE("parse, print, parse is a fixpoint")
{
    std::vector<MibModule> mods = parse_mib_dir(default_mib_dir());
    mods.push_back(parse_mib(files::read(files::fixture("fe_listing.mib"))));
    for (const auto& m : mods) {
        CAPTURE(m.name);
        auto printed = print_mib(m);
        auto again = parse_mib(printed);
        CHECK(again == m);
        CHECK(print_mib(again) == printed);
    }
    gen::Rng rng(5);
    for (int i = 0; i < 300; ++i) {
        auto m = random_module(rng);
        auto printed = print_mib(m);
        CAPTURE(printed);
        auto again = parse_mib(printed);
        REQUIRE(again == m);
        auto reg = link_modules({again});
        CHECK_NOTHROW(resolve_augments(reg));
    }
}

TEST_CASE("flattening is associative")
{
    auto reg = load_mib_dir(default_mib_dir());
    auto a = resolve_standalone(reg, "serviceEntry");
    auto b = resolve_standalone(reg, "featureextractionServiceEntry");
    auto c = resolve_standalone(reg, "lpcServiceEntry");
    auto left = flatten(flatten(a, b), c);
    auto right = flatten(a, flatten(b, c));
    CHECK(left == right);
    auto tables = resolve_augments(reg);
    CHECK(*find_table(tables, "lpcServiceEntry") == left);

    // random column lists, including a repeated name
    gen::Rng rng(17);
    for (int i = 0; i < 200; ++i) {
        std::vector<ResolvedTable> ts(3);
        int col = 0;
        for (int k = 0; k < 3; ++k) {
            ts[k].entry_name = fmt::format("e{}", k);
            ts[k].chain = {ts[k].entry_name};
            ts[k].index_columns = {{.name = fmt::format("idx{}", k)}};
            for (int j = 0, n = static_cast<int>(rng() % 4); j < n; ++j) {
                ts[k].own_columns.push_back({.name = fmt::format("c{}", col++)});
            }
            ts[k].effective_columns = ts[k].own_columns;
        }
        bool dup = rng() % 5 == 0 && !ts[0].own_columns.empty();
        if (dup) {
            ts[2].own_columns.push_back(ts[0].own_columns.front());
            ts[2].effective_columns = ts[2].own_columns;
            CHECK_THROWS_AS(flatten(flatten(ts[0], ts[1]), ts[2]), MibError);
            CHECK_THROWS_AS(flatten(ts[0], flatten(ts[1], ts[2])), MibError);
            continue;
        }
        auto l = flatten(flatten(ts[0], ts[1]), ts[2]);
        auto r = flatten(ts[0], flatten(ts[1], ts[2]));
        REQUIRE(l == r);
        CHECK(names(l.index_columns) == std::vector<std::string>{"idx0"});
    }
}
