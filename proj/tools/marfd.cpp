// Demo daemon: hosts the speaker identification pipeline, or one service of it.

#include <fstream>
#include <iostream>
#include <iterator>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "marf/pipeline/topology.hpp"
#include "signals.hpp"

using namespace marf;
using namespace marf::pipeline;

namespace {

snmp::Bytes read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(fmt::format("cannot read {}", path));
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const std::map<std::string, std::uint32_t> kRoles{
    {"sample-loading", index::SampleLoading},
    {"preprocessing", index::Preprocessing},
    {"feature-extraction", index::FeatureExtraction},
    {"classification", index::Classification},
    {"app", index::App},
};

}  // namespace

int main(int argc, char** argv)
{
    CLI::App cli{"MARF pipeline demo daemon"};
    std::string role = "all";
    std::string host = "127.0.0.1";
    std::uint16_t agent_base = 16101;
    std::uint16_t stage_base = 17101;
    std::uint16_t lpc_port = 16111;
    std::string store = "marf-training.bin";
    std::vector<std::string> sinks;
    std::string community = "public";
    std::string write_community = "private";
    std::string mib_dir;
    std::vector<std::string> enroll;
    std::vector<std::string> identify;
    int duration_ms = 0;

    cli.add_option("--role", role, "all, app, or one stage service")
        ->check(CLI::IsMember({"all", "sample-loading", "preprocessing", "feature-extraction", "classification", "app"}));
    cli.add_option("--host", host, "address every socket binds to");
    cli.add_option("--agent-port-base", agent_base, "service i's agent listens on base + i - 1");
    cli.add_option("--stage-port-base", stage_base, "stage i's TCP server listens on base + i - 1");
    cli.add_option("--lpc-port", lpc_port, "LPC sub-agent behind the feature-extraction agent");
    cli.add_option("--store", store, "training set file of the classification service");
    cli.add_option("--trap-sink", sinks, "host:port receiving serviceStatusChange traps (repeatable)");
    cli.add_option("--community", community, "read community");
    cli.add_option("--write-community", write_community, "write community");
    cli.add_option("--mib-dir", mib_dir, "MIB directory (default: $MARFMAN_MIB_DIR or the bundled set)");
    cli.add_option("--enroll", enroll, "subject:file.wav to train before serving (repeatable)");
    cli.add_option("--identify", identify, "file.wav to identify after enrolling; exits afterwards (repeatable)");
    cli.add_option("--duration", duration_ms, "exit after this many milliseconds (0: until SIGINT/SIGTERM)");
    CLI11_PARSE(cli, argc, argv);

    auto signals = tools::block_termination();
    try {
        auto registry = smi::load_mib_dir(mib_dir.empty() ? smi::default_mib_dir() : std::filesystem::path(mib_dir));

        TopologyOptions opts;
        opts.host = host;
        opts.agent_base_port = agent_base;
        opts.stage_base_port = stage_base;
        opts.lpc_port = lpc_port;
        opts.store_path = store;
        opts.agent.read_community = community;
        opts.agent.write_community = write_community;
        for (const auto& s : sinks) opts.agent.trap_sinks.push_back(net::Endpoint::parse(s, 162));

        Schema schema(registry);
        std::unique_ptr<Topology> all;
        std::unique_ptr<StageHost> stage;
        std::unique_ptr<AppHost> app_host;
        SpeakerIdentApp* app = nullptr;

        if (role == "all") {
            all = std::make_unique<Topology>(registry, opts);
            app = &all->app();
            for (std::uint32_t i = 1; i <= 5; ++i) {
                fmt::print("{} agent on {}\n", all->service(i).name(), all->agent_endpoint(i)->str());
            }
            fmt::print("lpc sub-agent on {}\n", all->lpc_endpoint()->str());
        } else if (role == "app") {
            std::map<std::uint32_t, std::shared_ptr<net::Transport>> agents;
            for (std::uint32_t i = 1; i <= 4; ++i) {
                agents[i] = std::make_shared<net::UdpTransport>(opts.agent_endpoint(i), opts.snmp_policy);
            }
            auto links = remote_links({opts.stage_endpoint(1), opts.stage_endpoint(2), opts.stage_endpoint(3),
                                       opts.stage_endpoint(4)},
                                      opts.stage_timeout);
            app_host = std::make_unique<AppHost>(schema, opts, std::move(agents), std::move(links));
            app = &app_host->app();
            fmt::print("{} agent on {}\n", app->name(), app_host->agent_endpoint()->str());
        } else {
            stage = std::make_unique<StageHost>(schema, kRoles.at(role), opts);
            fmt::print("{} agent on {}, stage on {}\n", stage->service().name(), stage->agent_endpoint()->str(),
                       stage->stage_endpoint()->str());
            if (auto lpc = stage->lpc_endpoint()) fmt::print("lpc sub-agent on {}\n", lpc->str());
        }
        std::fflush(stdout);

        if ((!enroll.empty() || !identify.empty()) && !app) {
            throw std::runtime_error("--enroll and --identify need --role all or app");
        }
        for (const auto& e : enroll) {
            auto colon = e.find(':');
            if (colon == std::string::npos) throw std::runtime_error(fmt::format("--enroll wants subject:file, got '{}'", e));
            app->enroll(std::stoi(e.substr(0, colon)), read_file(e.substr(colon + 1)));
        }
        if (!identify.empty()) {
            for (const auto& f : identify) {
                auto r = app->identify(read_file(f));
                fmt::print("{}: subject {} distance {:.6f}\n", f, r.subject, r.distance);
            }
            return 0;
        }
        tools::wait_for_signal(signals, std::chrono::milliseconds(duration_ms));
    } catch (const std::exception& e) {
        fmt::print(stderr, "marfd: {}\n", e.what());
        return 1;
    }
    return 0;
}
