#include "marf/pipeline/topology.hpp"

namespace marf::pipeline {

net::Endpoint TopologyOptions::agent_endpoint(std::uint32_t index) const
{
    return {host, static_cast<std::uint16_t>(agent_base_port ? agent_base_port + index - 1 : 0)};
}

net::Endpoint TopologyOptions::stage_endpoint(std::uint32_t index) const
{
    return {host, static_cast<std::uint16_t>(stage_base_port ? stage_base_port + index - 1 : 0)};
}

StageHost::StageHost(const Schema& schema, std::uint32_t index, const TopologyOptions& options) : options_(options)
{
    switch (index) {
    case index::SampleLoading: service_ = std::make_unique<SampleLoadingService>(schema, options.agent); break;
    case index::Preprocessing:
        service_ = std::make_unique<PreprocessingService>(schema, options.agent, options.preprocessing);
        break;
    case index::FeatureExtraction:
        service_ = std::make_unique<FeatureExtractionService>(schema, options.agent, options.features,
                                                              options.networked);
        break;
    case index::Classification:
        service_ = std::make_unique<ClassificationService>(schema, options.agent, options.store_path);
        break;
    default: throw std::invalid_argument(fmt::format("no stage service has index {}", index));
    }
    if (!options.networked) return;

    if (auto* fe = dynamic_cast<FeatureExtractionService*>(service_.get())) {
        lpc_server_ = std::make_unique<agent::AgentServer>(fe->lpc_agent(), net::Endpoint{options.host, options.lpc_port});
        lpc_server_->start();
        fe->route_lpc(std::make_shared<net::UdpTransport>(net::Endpoint{options.host, lpc_server_->port()},
                                                          options.snmp_policy));
    }
    agent_server_ = std::make_unique<agent::AgentServer>(service_->agent(), options.agent_endpoint(index));
    agent_server_->start();
    stage_server_ = std::make_unique<StageServer>(links(), options.stage_endpoint(index));
}

StageHost::~StageHost() { stop(); }

void StageHost::stop()
{
    if (stage_server_) stage_server_->stop();
    if (agent_server_) agent_server_->stop();
    if (lpc_server_) lpc_server_->stop();
}

PipelineLinks StageHost::links()
{
    PipelineLinks l;
    auto* s = service_.get();
    if (auto* x = dynamic_cast<SampleLoadingService*>(s)) l.load = [x](snmp::ByteView b) { return x->load(b); };
    if (auto* x = dynamic_cast<PreprocessingService*>(s)) {
        l.preprocess = [x](const Sample& v) { return x->preprocess(v); };
    }
    if (auto* x = dynamic_cast<FeatureExtractionService*>(s)) {
        l.extract = [x](const Sample& v) { return x->extract(v); };
    }
    if (auto* x = dynamic_cast<ClassificationService*>(s)) {
        l.classify = [x](const FeatureVector& fv) { return x->classify(fv); };
        l.train = [x](std::int32_t id, const FeatureVector& fv) { x->train(id, fv); };
    }
    return l;
}

std::shared_ptr<net::Transport> StageHost::agent_transport() const
{
    if (agent_server_) {
        return std::make_shared<net::UdpTransport>(*agent_endpoint(), options_.snmp_policy);
    }
    return std::make_shared<agent::LoopbackTransport>(service_->agent());
}

std::optional<net::Endpoint> StageHost::agent_endpoint() const
{
    if (!agent_server_) return std::nullopt;
    return net::Endpoint{options_.host, agent_server_->port()};
}

std::optional<net::Endpoint> StageHost::stage_endpoint() const
{
    if (!stage_server_) return std::nullopt;
    return net::Endpoint{options_.host, stage_server_->port()};
}

std::optional<net::Endpoint> StageHost::lpc_endpoint() const
{
    if (!lpc_server_) return std::nullopt;
    return net::Endpoint{options_.host, lpc_server_->port()};
}

AppHost::AppHost(const Schema& schema, const TopologyOptions& options,
                 std::map<std::uint32_t, std::shared_ptr<net::Transport>> stage_agents, PipelineLinks links)
    : app_(std::make_unique<SpeakerIdentApp>(schema, options.agent, std::move(links))),
      listen_(options.agent_endpoint(index::App))
{
    // Extension subtrees live on the agent of the service that owns them.
    static const std::pair<const char*, std::uint32_t> kRoutes[] = {
        {"marfStorage", index::Classification},
        {"sampleLoading", index::SampleLoading},
        {"preprocessing", index::Preprocessing},
        {"featureExtraction", index::FeatureExtraction},
        {"classification", index::Classification},
    };
    for (auto& [idx, t] : stage_agents) app_->connect(idx, t);
    for (const auto& [node, idx] : kRoutes) {
        if (auto it = stage_agents.find(idx); it != stage_agents.end()) app_->route(schema.oid(node), it->second);
    }
    if (options.networked) {
        server_ = std::make_unique<agent::AgentServer>(app_->agent(), listen_);
        server_->start();
        listen_.port = server_->port();
    }
}

AppHost::~AppHost() { stop(); }

void AppHost::stop()
{
    if (server_) server_->stop();
}

std::optional<net::Endpoint> AppHost::agent_endpoint() const
{
    if (!server_) return std::nullopt;
    return listen_;
}

Topology::Topology(const smi::MibRegistry& registry, TopologyOptions options)
    : options_(std::move(options)), schema_(registry)
{
    std::map<std::uint32_t, std::shared_ptr<net::Transport>> agents;
    for (std::uint32_t i = index::SampleLoading; i <= index::Classification; ++i) {
        stages_[i] = std::make_unique<StageHost>(schema_, i, options_);
        agents[i] = stages_[i]->agent_transport();
    }
    PipelineLinks links;
    if (options_.networked) {
        links = remote_links({*stages_[1]->stage_endpoint(), *stages_[2]->stage_endpoint(),
                              *stages_[3]->stage_endpoint(), *stages_[4]->stage_endpoint()},
                             options_.stage_timeout);
    } else {
        links = in_process_links(sample_loading(), preprocessing(), feature_extraction(), classification());
    }
    app_ = std::make_unique<AppHost>(schema_, options_, std::move(agents), std::move(links));
}

Topology::~Topology() { stop(); }

void Topology::stop()
{
    if (app_) app_->stop();
    for (auto& [_, s] : stages_) s->stop();
}

Service& Topology::service(std::uint32_t index)
{
    if (index == index::App) return app();
    auto it = stages_.find(index);
    if (it == stages_.end()) throw std::out_of_range(fmt::format("no service with index {}", index));
    return it->second->service();
}

SampleLoadingService& Topology::sample_loading()
{
    return dynamic_cast<SampleLoadingService&>(service(index::SampleLoading));
}

PreprocessingService& Topology::preprocessing()
{
    return dynamic_cast<PreprocessingService&>(service(index::Preprocessing));
}

FeatureExtractionService& Topology::feature_extraction()
{
    return dynamic_cast<FeatureExtractionService&>(service(index::FeatureExtraction));
}

ClassificationService& Topology::classification()
{
    return dynamic_cast<ClassificationService&>(service(index::Classification));
}

std::optional<net::Endpoint> Topology::agent_endpoint(std::uint32_t index) const
{
    if (index == index::App) return app_->agent_endpoint();
    auto it = stages_.find(index);
    return it == stages_.end() ? std::nullopt : it->second->agent_endpoint();
}

std::optional<net::Endpoint> Topology::lpc_endpoint() const
{
    return stages_.at(index::FeatureExtraction)->lpc_endpoint();
}

std::shared_ptr<net::Transport> Topology::agent_transport(std::uint32_t index) const
{
    if (index == index::App) {
        if (auto ep = app_->agent_endpoint()) return std::make_shared<net::UdpTransport>(*ep, options_.snmp_policy);
        return std::make_shared<agent::LoopbackTransport>(app_->app().agent());
    }
    return stages_.at(index)->agent_transport();
}

}  // namespace marf::pipeline
