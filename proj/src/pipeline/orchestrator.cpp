#include "marf/pipeline/orchestrator.hpp"

#include <cmath>

namespace marf::pipeline {

SpeakerIdentApp::SpeakerIdentApp(const Schema& schema, agent::AgentConfig config, PipelineLinks links)
    : Service(schema, index::App, "speaker-ident-app", ServiceType::Application, std::move(config)),
      links_(std::move(links))
{
    using snmp::Integer;
    auto row = std::make_shared<FieldRow>(1);
    row->add("appRequests", {[this] { return BerValue{snmp::Counter32{app_requests()}}; }, {}, {}})
        .add("appLastSpeakerId", {[this] { return BerValue{Integer{last_subject()}}; }, {}, {}})
        .add("appLastDistanceMicro", {[this] { return BerValue{Integer{last_distance_micro()}}; }, {}, {}});
    register_row("appTable", row);
}

void SpeakerIdentApp::set_links(PipelineLinks links)
{
    std::lock_guard lock(links_mutex_);
    links_ = std::move(links);
}

void SpeakerIdentApp::connect(std::uint32_t index, std::shared_ptr<net::Transport> agent)
{
    {
        std::lock_guard lock(links_mutex_);
        stages_[index] = agent;
    }
    proxy_service_row(index, std::move(agent));
}

void SpeakerIdentApp::check_stages()
{
    std::map<std::uint32_t, std::shared_ptr<net::Transport>> stages;
    {
        std::lock_guard lock(links_mutex_);
        stages = stages_;
    }
    const auto status_col = schema_.table("serviceTable").column("serviceStatus")->oid;
    for (const auto& [idx, transport] : stages) {
        snmp::SnmpMessage m;
        m.community = agent().config().read_community;
        m.pdu.kind = snmp::PduKind::Get;
        m.pdu.request_id = next_request_id_++;
        m.pdu.varbinds.push_back({status_col->child(idx), snmp::Null{}});
        std::optional<snmp::SnmpMessage> resp;
        try {
            resp = transport->exchange(m);
        } catch (const std::exception&) {
        }
        if (!resp) throw ServiceDown(idx, fmt::format("service {} agent ({}) did not answer", idx, transport->describe()));
        const auto* v = resp->pdu.varbinds.size() == 1 ? std::get_if<snmp::Integer>(&resp->pdu.varbinds[0].value)
                                                        : nullptr;
        if (resp->pdu.error_status != 0 || !v) {
            throw ServiceDown(idx, fmt::format("service {} did not report a serviceStatus", idx));
        }
        if (v->value != static_cast<std::int32_t>(ServiceStatus::Up)) {
            throw ServiceDown(idx, fmt::format("service {} is {}", idx,
                                               to_string(static_cast<ServiceStatus>(v->value))));
        }
    }
}

Identification SpeakerIdentApp::identify(snmp::ByteView wav)
{
    return serve([&] {
        ++app_requests_;
        check_stages();
        PipelineLinks l;
        {
            std::lock_guard lock(links_mutex_);
            l = links_;
        }
        if (!l.load || !l.classify) throw StageUnavailable("pipeline links are not configured");
        auto r = l.classify(l.extract(l.preprocess(l.load(wav))));
        if (r.ranked.empty()) throw EmptyTrainingSet("classification returned no candidates");
        Identification id{r.ranked.front().subject, r.ranked.front().distance};
        last_subject_ = id.subject;
        last_distance_micro_ = static_cast<std::int32_t>(std::min(std::llround(id.distance * 1e6), 0x7fffffffLL));
        return id;
    });
}

void SpeakerIdentApp::enroll(std::int32_t subject, snmp::ByteView wav)
{
    serve([&] {
        check_stages();
        PipelineLinks l;
        {
            std::lock_guard lock(links_mutex_);
            l = links_;
        }
        if (!l.load || !l.train) throw StageUnavailable("pipeline links are not configured");
        l.train(subject, l.extract(l.preprocess(l.load(wav))));
    });
}

}  // namespace marf::pipeline
