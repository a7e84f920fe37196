#include "marf/manager/gateway.hpp"

#include <httplib.h>
#include <json.hpp>

#include <fmt/format.h>

#include "marf/manager/table.hpp"
#include "marf/manager/values.hpp"

namespace marf::manager {

using nlohmann::json;

namespace {

json to_json(const snmp::BerValue& v)
{
    return std::visit(
        [](const auto& x) -> json {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, snmp::Integer>) return x.value;
            else if constexpr (std::is_same_v<T, snmp::Counter32> || std::is_same_v<T, snmp::TimeTicks>) return x.value;
            else if constexpr (std::is_same_v<T, snmp::OctetString>) return x.bytes;
            else if constexpr (std::is_same_v<T, Oid>) return x.str();
            else return nullptr;
        },
        v);
}

json envelope() { return json{{"schemaVersion", kGatewaySchemaVersion}}; }

std::pair<int, std::string> reply(int code, json body) { return {code, body.dump()}; }

std::pair<int, std::string> failure(int code, std::string_view error, json extra = json::object())
{
    auto body = envelope();
    body["error"] = error;
    body.update(extra);
    return reply(code, std::move(body));
}

std::string label(const smi::ColumnDef* col, const std::optional<snmp::BerValue>& v)
{
    if (!v) return "";
    const auto* i = std::get_if<snmp::Integer>(&*v);
    if (!i) return snmp::render(*v);
    if (col) {
        for (const auto& [name, n] : col->syntax.labels) {
            if (n == i->value) return name;
        }
    }
    return std::to_string(i->value);
}

}  // namespace

HttpGateway::HttpGateway(const smi::MibRegistry& registry, std::shared_ptr<SnmpClient> agent, GatewayConfig config,
                         std::shared_ptr<TrapListener> traps)
    : registry_(registry), tables_(smi::resolve_augments(registry, smi::Profile::Lenient)), agent_(std::move(agent)),
      config_(std::move(config)), traps_(std::move(traps))
{
    if (!smi::find_table(tables_, "serviceTable")) throw std::invalid_argument("MIB set has no serviceTable");
}

HttpGateway::~HttpGateway() { stop(); }

void HttpGateway::start()
{
    if (config_.stats_interval.count() > 0 && !poller_) {
        std::vector<StatPoller::Item> items;
        try {
            auto idx = registry_.oid_of("serviceIndex");
            for (const auto& vb : agent_->walk(idx)) {
                const auto* i = std::get_if<snmp::Integer>(&vb.value);
                if (!i) continue;
                for (const char* name : {"serviceInRequests", "serviceOutErrors"}) {
                    auto oid = registry_.oid_of(name).child(static_cast<std::uint32_t>(i->value));
                    items.push_back({agent_, oid, registry_.name_of(oid)});
                }
            }
        } catch (const std::exception&) {
            // Agent not reachable yet; /stats stays empty.
        }
        if (!items.empty()) {
            poller_ = std::make_unique<StatPoller>(std::move(items), config_.stats_interval, config_.stats_keep);
            poller_->start();
        }
    }

    server_ = std::make_unique<httplib::Server>();
    auto send = [](httplib::Response& res, std::pair<int, std::string> r) {
        res.status = r.first;
        res.set_content(r.second, "application/json");
    };
    auto index_of = [](const httplib::Request& req) -> std::optional<std::uint32_t> {
        try {
            auto v = std::stoull(req.matches[1].str());
            if (v > 0x7fffffffULL) return std::nullopt;
            return static_cast<std::uint32_t>(v);
        } catch (const std::exception&) {
            return std::nullopt;
        }
    };
    server_->Get("/api/services", [this, send](const httplib::Request&, httplib::Response& res) { send(res, services()); });
    server_->Get(R"(/api/services/(\d+)/stats)", [this, send, index_of](const httplib::Request& req, httplib::Response& res) {
        auto i = index_of(req);
        send(res, i ? stats(*i) : failure(404, "unknown service index"));
    });
    server_->Post(R"(/api/services/(\d+)/config)",
                  [this, send, index_of](const httplib::Request& req, httplib::Response& res) {
                      auto i = index_of(req);
                      send(res, i ? configure(*i, req.body) : failure(404, "unknown service index"));
                  });
    server_->Get("/api/traps", [this, send](const httplib::Request&, httplib::Response& res) { send(res, traps()); });
    server_->set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.body.empty()) {
            auto body = envelope();
            body["error"] = httplib::status_message(res.status);
            res.set_content(body.dump(), "application/json");
        }
    });

    int port = config_.listen.port == 0 ? server_->bind_to_any_port(config_.listen.host)
                                        : (server_->bind_to_port(config_.listen.host, config_.listen.port)
                                               ? config_.listen.port
                                               : -1);
    if (port <= 0) throw net::BindFailure(fmt::format("cannot listen on {}", config_.listen.str()));
    port_ = static_cast<std::uint16_t>(port);
    thread_ = std::jthread([this] { server_->listen_after_bind(); });
}

void HttpGateway::stop()
{
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
    if (poller_) poller_->stop();
}

std::pair<int, std::string> HttpGateway::services()
{
    const auto& base = *smi::find_table(tables_, "serviceTable");
    auto body = envelope();
    try {
        auto rendered = table_render(agent_->walk(base.entry_oid), base);
        std::map<std::string, RenderedTable> extensions;
        json others = json::object();
        for (const auto& t : tables_) {
            if (t.entry_name == base.entry_name) continue;
            auto r = table_render(agent_->walk(t.entry_oid), t);
            if (t.augments() && t.chain.front() == base.entry_name) {
                extensions.emplace(t.table_name, std::move(r));
                continue;
            }
            json rows = json::array();
            for (const auto& [idx, cells] : r.rows) {
                json row{{"index", to_string(idx)}};
                for (const auto& [c, v] : cells) row[c] = to_json(v);
                rows.push_back(std::move(row));
            }
            others[t.table_name] = std::move(rows);
        }

        json list = json::array();
        bool all_up = !rendered.rows.empty();
        for (const auto& [idx, cells] : rendered.rows) {
            auto cell = [&](const char* name) { return rendered.cell(idx, name); };
            json s;
            s["index"] = idx.size() == 1 ? json(idx[0]) : json(to_string(idx));
            auto name = cell("serviceName");
            s["name"] = name ? to_json(*name) : json(nullptr);
            s["type"] = label(base.column("serviceType"), cell("serviceType"));
            s["status"] = label(base.column("serviceStatus"), cell("serviceStatus"));
            for (auto [key, col] : {std::pair{"uptime", "serviceUptime"}, std::pair{"inRequests", "serviceInRequests"},
                                    std::pair{"outErrors", "serviceOutErrors"}}) {
                auto v = cell(col);
                s[key] = v ? to_json(*v) : json(nullptr);
            }
            json columns = json::object();
            for (const auto& [c, v] : cells) columns[c] = to_json(v);
            s["columns"] = std::move(columns);
            json ext = json::object();
            for (const auto& [tname, t] : extensions) {
                auto row = t.rows.find(idx);
                if (row == t.rows.end()) continue;
                json cols = json::object();
                for (const auto& [c, v] : row->second) cols[c] = to_json(v);
                ext[tname] = std::move(cols);
            }
            s["extensions"] = std::move(ext);
            auto st = cell("serviceStatus");
            const auto* si = st ? std::get_if<snmp::Integer>(&*st) : nullptr;
            if (!si || si->value != 1) all_up = false;
            list.push_back(std::move(s));
        }
        body["pipelineStatus"] = all_up ? "up" : "down";
        body["services"] = std::move(list);
        body["tables"] = std::move(others);
    } catch (const Timeout& e) {
        return failure(503, e.what());
    } catch (const ErrorResponse& e) {
        return failure(502, snmp::to_string(e.status()));
    }
    return reply(200, std::move(body));
}

std::pair<int, std::string> HttpGateway::stats(std::uint32_t index)
{
    try {
        auto vbs = agent_->get({registry_.oid_of("serviceStatus").child(index)});
        if (vbs.size() != 1 || snmp::is_exception(vbs[0].value)) return failure(404, "unknown service index");
    } catch (const Timeout& e) {
        return failure(503, e.what());
    }
    auto body = envelope();
    body["index"] = index;
    json list = json::array();
    if (poller_) {
        for (const auto& s : poller_->snapshot()) {
            if (s.oid.back() != index) continue;
            json samples = json::array();
            for (const auto& p : s.samples) {
                samples.push_back({{"time", iso_time(p.time)},
                                   {"value", p.value ? json(*p.value) : json(nullptr)},
                                   {"rate", p.rate ? json(*p.rate) : json(nullptr)}});
            }
            list.push_back({{"target", s.target}, {"oid", s.oid.str()}, {"name", s.name}, {"samples", samples}});
        }
    }
    body["series"] = std::move(list);
    return reply(200, std::move(body));
}

std::pair<int, std::string> HttpGateway::configure(std::uint32_t index, std::string_view text)
{
    json req = json::parse(text, nullptr, false);
    if (req.is_discarded() || !req.is_object()) return failure(400, "body must be a JSON object of column: value");
    try {
        auto vbs = agent_->get({registry_.oid_of("serviceStatus").child(index)});
        if (vbs.size() != 1 || snmp::is_exception(vbs[0].value)) return failure(404, "unknown service index");
    } catch (const Timeout& e) {
        return failure(503, e.what());
    }

    std::vector<Varbind> set;
    std::vector<std::string> names;
    for (const auto& [column, value] : req.items()) {
        const smi::ColumnDef* col = nullptr;
        for (const auto& t : tables_) {
            if (t.chain.front() != "serviceEntry") continue;
            const auto* c = t.column(column);
            if (c && c->oid) {
                col = c;
                break;
            }
        }
        if (!col) return failure(400, fmt::format("unknown column '{}'", column), {{"column", column}});
        std::string as_text;
        if (value.is_string()) as_text = value.get<std::string>();
        else if (value.is_boolean()) as_text = value.get<bool>() ? "true" : "false";
        else if (value.is_number_integer()) as_text = value.dump();
        else return failure(400, fmt::format("value of '{}' must be a string or integer", column), {{"column", column}});
        try {
            set.push_back({col->oid->child(index), parse_value(col->syntax, as_text)});
        } catch (const std::invalid_argument& e) {
            return failure(400, fmt::format("{}: {}", column, e.what()), {{"column", column}});
        }
        names.push_back(column);
    }
    if (set.empty()) return failure(400, "no columns given");

    try {
        auto out = agent_->set(set);
        auto body = envelope();
        body["index"] = index;
        json applied = json::object();
        for (std::size_t i = 0; i < out.size() && i < names.size(); ++i) applied[names[i]] = to_json(out[i].value);
        body["applied"] = std::move(applied);
        return reply(200, std::move(body));
    } catch (const ErrorResponse& e) {
        json extra{{"errorIndex", e.index()}};
        if (e.index() >= 1 && static_cast<std::size_t>(e.index()) <= names.size()) {
            extra["column"] = names[static_cast<std::size_t>(e.index() - 1)];
        }
        return failure(409, snmp::to_string(e.status()), extra);
    } catch (const Timeout& e) {
        return failure(503, e.what());
    }
}

std::pair<int, std::string> HttpGateway::traps()
{
    auto body = envelope();
    json list = json::array();
    if (traps_) {
        auto log = traps_->snapshot();
        for (auto it = log.rbegin(); it != log.rend(); ++it) {
            json vbs = json::array();
            for (const auto& vb : it->varbinds) {
                vbs.push_back({{"oid", vb.oid.str()}, {"name", registry_.name_of(vb.oid)},
                               {"value", to_json(vb.value)},
                               {"text", format_value(syntax_of(registry_, vb.oid), vb.value)}});
            }
            auto t = std::chrono::time_point_cast<std::chrono::microseconds>(it->received);
            list.push_back({{"time", iso_time(t)},
                            {"from", it->from.str()},
                            {"community", it->community},
                            {"uptime", it->uptime.value},
                            {"notification", registry_.name_of(it->notification)},
                            {"varbinds", std::move(vbs)}});
        }
        body["received"] = traps_->received();
        body["malformed"] = traps_->malformed();
    } else {
        body["received"] = 0;
        body["malformed"] = 0;
    }
    body["traps"] = std::move(list);
    return reply(200, std::move(body));
}

}  // namespace marf::manager
