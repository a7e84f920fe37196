#pragma once

#include <map>

#include "marf/pipeline/services.hpp"

namespace marf::pipeline {

struct Identification {
    std::int32_t subject = 0;
    double distance = 0;
};

/// The speaker-identification application. It drives the four stage services
/// through PipelineLinks and, acting as their manager, asks each one's agent
/// for serviceStatus before dispatching. Its agent is the master agent of the
/// pipeline: it publishes the other services' serviceTable rows and forwards
/// their extension subtrees to them.
class SpeakerIdentApp : public Service {
public:
    SpeakerIdentApp(const Schema& schema, agent::AgentConfig config = {}, PipelineLinks links = {});

    void set_links(PipelineLinks links);

    /// The agent of stage service `index`: polled for serviceStatus and
    /// published as serviceTable row `index`.
    void connect(std::uint32_t index, std::shared_ptr<net::Transport> agent);
    /// Forwards a MIB subtree of the master agent to another agent.
    void route(const Oid& subtree, std::shared_ptr<net::Transport> agent) { this->agent().add_route(subtree, agent); }

    /// load, preprocess, extract, classify. Throws ServiceDown or the stage's error.
    Identification identify(snmp::ByteView wav);
    /// load, preprocess, extract, train.
    void enroll(std::int32_t subject, snmp::ByteView wav);

    std::uint32_t app_requests() const { return app_requests_.load(); }
    std::int32_t last_subject() const { return last_subject_.load(); }
    std::int32_t last_distance_micro() const { return last_distance_micro_.load(); }

private:
    void check_stages();

    std::mutex links_mutex_;
    PipelineLinks links_;
    std::map<std::uint32_t, std::shared_ptr<net::Transport>> stages_;
    std::atomic<std::uint32_t> app_requests_{0};
    std::atomic<std::int32_t> last_subject_{0};
    std::atomic<std::int32_t> last_distance_micro_{0};
    std::atomic<std::int32_t> next_request_id_{0x6000};
};

}  // namespace marf::pipeline
