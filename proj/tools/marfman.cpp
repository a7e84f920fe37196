// SNMP manager for MARF agents.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "marf/manager/client.hpp"
#include "marf/manager/gateway.hpp"
#include "marf/manager/poller.hpp"
#include "marf/manager/table.hpp"
#include "marf/manager/traps.hpp"
#include "marf/manager/values.hpp"
#include "signals.hpp"

using namespace marf;
using namespace marf::manager;

namespace {

struct Globals {
    std::vector<std::string> targets{"127.0.0.1:161"};
    std::string community = "public";
    std::string write_community = "private";
    int timeout_ms = 2000;
    int retries = 1;
    std::string mib_dir;
    std::string csv;
    std::string listen;
};

TargetSpec spec(const Globals& g, const std::string& target)
{
    TargetSpec t;
    t.endpoint = net::Endpoint::parse(target, 161);
    t.read_community = g.community;
    t.write_community = g.write_community;
    t.timeout = std::chrono::milliseconds(g.timeout_ms);
    t.retries = g.retries;
    t.validate();
    return t;
}

std::filesystem::path mib_dir(const Globals& g)
{
    return g.mib_dir.empty() ? smi::default_mib_dir() : std::filesystem::path(g.mib_dir);
}

void print(const smi::MibRegistry& reg, const std::vector<Varbind>& vbs)
{
    for (const auto& vb : vbs) {
        auto plain = snmp::render(vb.value);
        auto text = format_value(syntax_of(reg, vb.oid), vb.value);
        // render() already carries the type; enum labels need it added back.
        fmt::print("{} = {}\n", reg.name_of(vb.oid), text == plain ? plain : snmp::type_name(vb.value) + ": " + text);
    }
}

std::vector<Oid> resolve_all(const smi::MibRegistry& reg, const std::vector<std::string>& names)
{
    std::vector<Oid> out;
    for (const auto& n : names) out.push_back(reg.resolve(n));
    return out;
}

/// name=value, typed from the MIB. Objects the MIB does not know take an explicit
/// prefix: int:5, uint:5 (Counter32), ticks:5, str:text, oid:1.3.6.
Varbind parse_assignment(const smi::MibRegistry& reg, const std::string& text)
{
    auto eq = text.find('=');
    if (eq == std::string::npos) throw std::invalid_argument(fmt::format("expected name=value, got '{}'", text));
    auto oid = reg.resolve(text.substr(0, eq));
    auto value = std::string_view(text).substr(eq + 1);
    static const std::pair<std::string_view, smi::SyntaxKind> prefixes[] = {
        {"int:", smi::SyntaxKind::Integer},     {"uint:", smi::SyntaxKind::Counter32},
        {"ticks:", smi::SyntaxKind::TimeTicks}, {"str:", smi::SyntaxKind::OctetString},
        {"oid:", smi::SyntaxKind::ObjectId},
    };
    for (const auto& [prefix, kind] : prefixes) {
        if (value.starts_with(prefix)) {
            smi::Syntax s;
            s.kind = kind;
            return {oid, parse_value(s, value.substr(prefix.size()))};
        }
    }
    const auto* syntax = syntax_of(reg, oid);
    if (!syntax) {
        throw std::invalid_argument(
            fmt::format("{} is not a MIB object instance; give the type as int:, uint:, ticks:, str: or oid:", text));
    }
    return {oid, parse_value(*syntax, value)};
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App cli{"SNMP manager for MARF agents"};
    cli.require_subcommand(1);
    Globals g;
    cli.add_option("--target", g.targets, "agent host:port (poll accepts several)")->take_all()->capture_default_str();
    cli.add_option("--community", g.community, "read community")->capture_default_str();
    cli.add_option("--write-community", g.write_community, "write community for set")->capture_default_str();
    cli.add_option("--timeout", g.timeout_ms, "milliseconds per attempt")->check(CLI::PositiveNumber)->capture_default_str();
    cli.add_option("--retries", g.retries, "retransmissions after a timeout")->check(CLI::NonNegativeNumber)->capture_default_str();
    cli.add_option("--mib-dir", g.mib_dir, "MIB directory (default: $MARFMAN_MIB_DIR or the bundled set)");
    cli.add_option("--csv", g.csv, "poll: write the series to this CSV file");
    cli.add_option("--listen", g.listen, "traps / serve: address:port to bind");

    std::vector<std::string> oids;
    auto* get = cli.add_subcommand("get", "GET instances");
    get->add_option("oid", oids, "names or dotted OIDs")->required();
    auto* getnext = cli.add_subcommand("getnext", "GETNEXT successors");
    getnext->add_option("oid", oids)->required();
    int non_repeaters = 0;
    int max_repetitions = 10;
    auto* getbulk = cli.add_subcommand("getbulk", "GETBULK");
    getbulk->add_option("oid", oids)->required();
    getbulk->add_option("-n,--non-repeaters", non_repeaters)->capture_default_str();
    getbulk->add_option("-r,--max-repetitions", max_repetitions)->capture_default_str();
    std::vector<std::string> assignments;
    auto* set = cli.add_subcommand("set", "SET name=value ... in one PDU");
    set->add_option("assignment", assignments, "name=value; enum labels accepted")->required();
    std::string root = "marf";
    auto* walk = cli.add_subcommand("walk", "walk a subtree");
    walk->add_option("root", root)->capture_default_str();
    std::string table_name;
    auto* table = cli.add_subcommand("table", "walk and lay out a conceptual table");
    table->add_option("table", table_name, "table or entry name")->required();
    int count = 0;
    int duration_ms = 0;
    auto* traps = cli.add_subcommand("traps", "print traps as they arrive");
    traps->add_option("--count", count, "exit after this many traps");
    traps->add_option("--duration", duration_ms, "exit after this many milliseconds");
    int interval_ms = 1000;
    auto* poll = cli.add_subcommand("poll", "sample instances periodically");
    poll->add_option("oid", oids)->required();
    poll->add_option("--interval", interval_ms, "milliseconds, at least 100")->capture_default_str();
    poll->add_option("--duration", duration_ms, "milliseconds")->required();
    int stats_ms = 1000;
    std::string trap_listen;
    auto* serve = cli.add_subcommand("serve", "HTTP/JSON gateway in front of the target");
    serve->add_option("--trap-listen", trap_listen, "also collect traps on this address:port for /api/traps");
    serve->add_option("--stats-interval", stats_ms, "milliseconds between counter polls, 0 disables")->capture_default_str();
    serve->add_option("--duration", duration_ms, "exit after this many milliseconds");

    CLI11_PARSE(cli, argc, argv);
    auto signals = tools::block_termination();

    try {
        auto reg = smi::load_mib_dir(mib_dir(g));
        auto client = [&] { return std::make_shared<SnmpClient>(spec(g, g.targets.at(0))); };

        if (get->parsed()) print(reg, client()->get(resolve_all(reg, oids)));
        if (getnext->parsed()) print(reg, client()->getnext(resolve_all(reg, oids)));
        if (getbulk->parsed()) print(reg, client()->getbulk(resolve_all(reg, oids), non_repeaters, max_repetitions));
        if (set->parsed()) {
            std::vector<Varbind> vbs;
            for (const auto& a : assignments) vbs.push_back(parse_assignment(reg, a));
            print(reg, client()->set(vbs));
        }
        if (walk->parsed()) print(reg, client()->walk(reg.resolve(root)));
        if (table->parsed()) {
            auto tables = smi::resolve_augments(reg, smi::Profile::Lenient);
            const auto* t = smi::find_table(tables, table_name);
            if (!t) throw std::invalid_argument(fmt::format("'{}' is not a table", table_name));
            auto c = client();
            std::vector<Varbind> all;
            // Inherited columns live in the base tables' subtrees.
            for (const auto& entry : t->chain) {
                auto part = c->walk(reg.oid_of(entry));
                all.insert(all.end(), part.begin(), part.end());
            }
            fmt::print("{}", table_render(all, *t).to_text());
        }
        if (traps->parsed()) {
            TrapListener listener(net::Endpoint::parse(g.listen.empty() ? "0.0.0.0:162" : g.listen, 162));
            listener.start();
            fmt::print(stderr, "listening on port {}\n", listener.port());
            auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(duration_ms);
            std::uint64_t shown = 0;
            while (!count || shown < static_cast<std::uint64_t>(count)) {
                if (duration_ms && std::chrono::steady_clock::now() >= deadline) break;
                if (tools::wait_for_signal(signals, std::chrono::milliseconds(100))) break;
                auto log = listener.snapshot();
                auto total = listener.received();
                // The ring may have dropped events we never printed.
                auto fresh = std::min<std::uint64_t>(total - shown, log.size());
                for (auto it = log.end() - static_cast<std::ptrdiff_t>(fresh); it != log.end(); ++it) {
                    auto t = std::chrono::time_point_cast<std::chrono::microseconds>(it->received);
                    fmt::print("{} from {} {} uptime={}\n", iso_time(t), it->from.str(), reg.name_of(it->notification),
                               it->uptime.value);
                    for (const auto& vb : it->varbinds) {
                        fmt::print("  {} = {}\n", reg.name_of(vb.oid), format_value(syntax_of(reg, vb.oid), vb.value));
                    }
                }
                std::fflush(stdout);
                shown = total;
            }
            if (listener.malformed()) fmt::print(stderr, "{} malformed datagrams skipped\n", listener.malformed());
        }
        if (poll->parsed()) {
            std::vector<StatPoller::Item> items;
            for (const auto& target : g.targets) {
                auto c = std::make_shared<SnmpClient>(spec(g, target));
                for (const auto& name : oids) {
                    auto oid = reg.resolve(name);
                    items.push_back({c, oid, reg.name_of(oid)});
                }
            }
            StatPoller poller(std::move(items), std::chrono::milliseconds(interval_ms));
            poller.run_for(std::chrono::milliseconds(duration_ms));
            auto csv = to_csv(poller.snapshot());
            if (g.csv.empty()) {
                fmt::print("{}", csv);
            } else {
                std::ofstream(g.csv) << csv;
            }
        }
        if (serve->parsed()) {
            std::shared_ptr<TrapListener> listener;
            if (!trap_listen.empty()) {
                listener = std::make_shared<TrapListener>(net::Endpoint::parse(trap_listen, 162));
                listener->start();
            }
            GatewayConfig cfg;
            cfg.listen = net::Endpoint::parse(g.listen.empty() ? "127.0.0.1:8080" : g.listen, 8080);
            cfg.stats_interval = std::chrono::milliseconds(stats_ms);
            HttpGateway gateway(reg, client(), cfg, listener);
            gateway.start();
            fmt::print(stderr, "gateway on http://{}:{}/api/services\n", cfg.listen.host, gateway.port());
            tools::wait_for_signal(signals, std::chrono::milliseconds(duration_ms));
            gateway.stop();
        }
    } catch (const ErrorResponse& e) {
        fmt::print(stderr, "error: {} (index {})\n", snmp::to_string(e.status()), e.index());
        return 2;
    } catch (const Timeout& e) {
        fmt::print(stderr, "timeout: {}\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        fmt::print(stderr, "marfman: {}\n", e.what());
        return 1;
    }
    return 0;
}
