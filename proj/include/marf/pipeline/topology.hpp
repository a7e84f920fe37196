#pragma once

#include <filesystem>
#include <map>
#include <memory>

#include "marf/agent/server.hpp"
#include "marf/pipeline/orchestrator.hpp"
#include "marf/pipeline/stage_wire.hpp"

namespace marf::pipeline {

struct TopologyOptions {
    /// false keeps everything in-process: loopback agents and direct calls.
    bool networked = true;
    std::string host = "127.0.0.1";
    /// Service i's agent listens on agent_base_port + i - 1. 0 picks ephemeral ports.
    std::uint16_t agent_base_port = 16101;
    /// Stage i's TCP server listens on stage_base_port + i - 1. 0 picks ephemeral ports.
    std::uint16_t stage_base_port = 0;
    /// The LPC sub-agent behind the feature-extraction agent. 0 picks an ephemeral port.
    std::uint16_t lpc_port = 0;
    std::filesystem::path store_path;
    agent::AgentConfig agent;
    net::RetryPolicy snmp_policy{std::chrono::milliseconds(1000), 1};
    std::chrono::milliseconds stage_timeout{10000};
    PreprocessingConfig preprocessing;
    FeatureConfig features;

    net::Endpoint agent_endpoint(std::uint32_t index) const;
    net::Endpoint stage_endpoint(std::uint32_t index) const;
};

/// One stage service plus whatever serves it: its agent over UDP, the LPC
/// sub-agent for feature extraction, and its stage over TCP.
class StageHost {
public:
    StageHost(const Schema& schema, std::uint32_t index, const TopologyOptions& options);
    ~StageHost();

    Service& service() { return *service_; }
    /// Only the handler of this host's stage is set.
    PipelineLinks links();
    /// How other components reach this service's agent.
    std::shared_ptr<net::Transport> agent_transport() const;

    std::optional<net::Endpoint> agent_endpoint() const;
    std::optional<net::Endpoint> stage_endpoint() const;
    std::optional<net::Endpoint> lpc_endpoint() const;

    void stop();

private:
    TopologyOptions options_;
    std::unique_ptr<Service> service_;
    std::unique_ptr<agent::AgentServer> agent_server_;
    std::unique_ptr<agent::AgentServer> lpc_server_;
    std::unique_ptr<StageServer> stage_server_;
};

/// The application service and its master agent.
class AppHost {
public:
    AppHost(const Schema& schema, const TopologyOptions& options,
            std::map<std::uint32_t, std::shared_ptr<net::Transport>> stage_agents, PipelineLinks links);
    ~AppHost();

    SpeakerIdentApp& app() { return *app_; }
    std::optional<net::Endpoint> agent_endpoint() const;
    void stop();

private:
    std::unique_ptr<SpeakerIdentApp> app_;
    std::unique_ptr<agent::AgentServer> server_;
    net::Endpoint listen_;
};

/// The whole pipeline in one process: four stage hosts and the app host.
class Topology {
public:
    explicit Topology(const smi::MibRegistry& registry, TopologyOptions options = {});
    ~Topology();

    const Schema& schema() const { return schema_; }
    const TopologyOptions& options() const { return options_; }

    SampleLoadingService& sample_loading();
    PreprocessingService& preprocessing();
    FeatureExtractionService& feature_extraction();
    ClassificationService& classification();
    SpeakerIdentApp& app() { return app_->app(); }
    Service& service(std::uint32_t index);

    /// UDP endpoint of service `index`'s agent; nullopt in-process.
    std::optional<net::Endpoint> agent_endpoint(std::uint32_t index) const;
    std::optional<net::Endpoint> lpc_endpoint() const;
    /// A transport to service `index`'s agent (UDP when networked, loopback otherwise).
    std::shared_ptr<net::Transport> agent_transport(std::uint32_t index) const;

    void stop();

private:
    TopologyOptions options_;
    Schema schema_;
    std::map<std::uint32_t, std::unique_ptr<StageHost>> stages_;
    std::unique_ptr<AppHost> app_;
};

}  // namespace marf::pipeline
