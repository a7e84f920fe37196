#include "marf/agent/server.hpp"

namespace marf::agent {

AgentServer::AgentServer(Agent& agent, const net::Endpoint& listen) : agent_(agent)
{
    socket_.bind(listen);
    port_ = socket_.local_port();
}

AgentServer::~AgentServer() { stop(); }

void AgentServer::start()
{
    if (!thread_.joinable()) {
        thread_ = std::jthread([this](std::stop_token st) { loop(st); });
    }
}

void AgentServer::stop()
{
    if (thread_.joinable()) {
        thread_.request_stop();
        thread_.join();
    }
}

void AgentServer::loop(std::stop_token st)
{
    while (!st.stop_requested()) {
        auto d = socket_.receive(std::chrono::milliseconds(50));
        if (!d) continue;
        ++packets_in_;
        snmp::SnmpMessage req;
        try {
            req = snmp::decode_message(d->data);
        } catch (const snmp::DecodeError&) {
            ++parse_errors_;
            continue;
        }
        if (auto resp = agent_.route_or_serve(req)) {
            socket_.send_to(snmp::encode_message(*resp), d->from);
        }
    }
}

}  // namespace marf::agent
