#include "marf/pipeline/services.hpp"

#include <algorithm>
#include <bit>

namespace marf::pipeline {

using agent::ErrorStatus;
using agent::PendingSet;
using snmp::Counter32;
using snmp::Integer;
using snmp::OctetString;

namespace {

constexpr std::int32_t kTrue = 1;
constexpr std::int32_t kFalse = 2;

std::int64_t as_int(const BerValue& v) { return std::get<Integer>(v).value; }

Integer int_of(std::int64_t v) { return Integer{v}; }

std::uint32_t saturate(std::size_t n) { return static_cast<std::uint32_t>(std::min<std::size_t>(n, 0x7fffffff)); }

}  // namespace

/// serviceTable rows: the owning service's own row plus rows read through to other agents.
class ServiceRows : public agent::RowSource {
public:
    ServiceRows(std::uint32_t index, std::shared_ptr<FieldRow> local, const agent::AgentConfig& config)
        : index_(index), local_(std::move(local)), read_community_(config.read_community),
          write_community_(config.write_community)
    {
    }

    void add_remote(std::uint32_t index, std::shared_ptr<net::Transport> t)
    {
        std::lock_guard lock(mutex_);
        remote_[index] = std::move(t);
    }

    std::vector<std::uint32_t> rows() const override
    {
        std::lock_guard lock(mutex_);
        std::vector<std::uint32_t> out{index_};
        for (const auto& [k, _] : remote_) {
            if (k != index_) out.push_back(k);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    BerValue read(const smi::ColumnDef& c, std::uint32_t row) const override
    {
        if (row == index_) return local_->read(c, row);
        auto resp = exchange(row, snmp::PduKind::Get, {{c.oid->child(row), snmp::Null{}}}, read_community_);
        if (!resp || resp->pdu.error_status != 0 || resp->pdu.varbinds.size() != 1) {
            throw agent::SubAgentTimeout(fmt::format("no usable answer for row {}", row));
        }
        return resp->pdu.varbinds[0].value;
    }

    ErrorStatus validate(const smi::ColumnDef& c, std::uint32_t row, const BerValue& v,
                         const PendingSet& p) const override
    {
        if (row == index_) return local_->validate(c, row, v, p);
        if (c.name != "serviceStatus") return ErrorStatus::NotWritable;
        auto s = as_int(v);
        return s == 1 || s == 2 ? ErrorStatus::NoError : ErrorStatus::WrongValue;
    }

    void commit(const smi::ColumnDef& c, std::uint32_t row, const BerValue& v) override
    {
        if (row == index_) return local_->commit(c, row, v);
        (void)exchange(row, snmp::PduKind::Set, {{c.oid->child(row), v}}, write_community_);
    }

private:
    std::optional<snmp::SnmpMessage> exchange(std::uint32_t row, snmp::PduKind kind, std::vector<snmp::Varbind> vbs,
                                              const std::string& community) const
    {
        std::shared_ptr<net::Transport> t;
        {
            std::lock_guard lock(mutex_);
            auto it = remote_.find(row);
            if (it == remote_.end()) return std::nullopt;
            t = it->second;
        }
        snmp::SnmpMessage m;
        m.community = community;
        m.pdu.kind = kind;
        m.pdu.request_id = static_cast<std::int32_t>(++next_id_ & 0x7fffffff);
        m.pdu.varbinds = std::move(vbs);
        try {
            return t->exchange(m);
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }

    std::uint32_t index_;
    std::shared_ptr<FieldRow> local_;
    std::string read_community_;
    std::string write_community_;
    mutable std::mutex mutex_;
    std::map<std::uint32_t, std::shared_ptr<net::Transport>> remote_;
    mutable std::atomic<std::uint32_t> next_id_{0x5000};
};

std::string_view to_string(ServiceStatus s)
{
    switch (s) {
    case ServiceStatus::Up: return "up";
    case ServiceStatus::Down: return "down";
    case ServiceStatus::Starting: return "starting";
    case ServiceStatus::Stopping: return "stopping";
    }
    return "unknown";
}

Schema::Schema(const smi::MibRegistry& registry)
    : reg_(registry), tables_(smi::resolve_augments(registry, smi::Profile::Lenient))
{
}

const smi::ResolvedTable& Schema::table(std::string_view name) const
{
    const auto* t = smi::find_table(tables_, name);
    if (!t) throw std::out_of_range(fmt::format("table '{}' is not defined by the loaded MIBs", name));
    return *t;
}

FieldRow& FieldRow::add(std::string column, Field f)
{
    fields_.insert_or_assign(std::move(column), std::move(f));
    return *this;
}

BerValue FieldRow::read(const smi::ColumnDef& column, std::uint32_t) const
{
    auto it = fields_.find(column.name);
    if (it == fields_.end()) return snmp::NoSuchInstance{};
    return it->second.get();
}

ErrorStatus FieldRow::validate(const smi::ColumnDef& column, std::uint32_t, const BerValue& value,
                               const PendingSet& pending) const
{
    auto it = fields_.find(column.name);
    if (it == fields_.end() || !it->second.set) return ErrorStatus::NotWritable;
    return it->second.validate ? it->second.validate(value, pending) : ErrorStatus::NoError;
}

void FieldRow::commit(const smi::ColumnDef& column, std::uint32_t, const BerValue& value)
{
    auto it = fields_.find(column.name);
    if (it != fields_.end() && it->second.set) it->second.set(value);
}

Service::Service(const Schema& schema, std::uint32_t index, std::string name, ServiceType type,
                 agent::AgentConfig config)
    : schema_(schema), index_(index), name_(std::move(name)), type_(type), agent_(std::move(config)),
      up_since_(std::chrono::steady_clock::now().time_since_epoch().count())
{
    auto row = std::make_shared<FieldRow>(index_);
    row->add("serviceIndex", {[this] { return BerValue{int_of(index_)}; }, {}, {}})
        .add("serviceName", {[this] { return BerValue{OctetString{name_}}; }, {}, {}})
        .add("serviceType", {[this] { return BerValue{int_of(static_cast<std::int32_t>(type_))}; }, {}, {}})
        .add("serviceStatus",
             {[this] { return BerValue{int_of(static_cast<std::int32_t>(status()))}; },
              [](const BerValue& v, const PendingSet&) {
                  // Only the stable states can be requested.
                  auto s = as_int(v);
                  return s == 1 || s == 2 ? ErrorStatus::NoError : ErrorStatus::WrongValue;
              },
              [this](const BerValue& v) { as_int(v) == 1 ? start() : stop(); }})
        .add("serviceUptime", {[this] { return BerValue{uptime()}; }, {}, {}})
        .add("serviceInRequests", {[this] { return BerValue{Counter32{in_requests()}}; }, {}, {}})
        .add("serviceOutErrors", {[this] { return BerValue{Counter32{out_errors()}}; }, {}, {}});
    rows_ = std::make_shared<ServiceRows>(index_, row, agent_.config());
    agent_.register_table(schema_.table("serviceTable"), rows_);
}

void Service::proxy_service_row(std::uint32_t index, std::shared_ptr<net::Transport> agent)
{
    rows_->add_remote(index, std::move(agent));
}

void Service::register_row(agent::Agent& on, std::string_view table, std::shared_ptr<FieldRow> row)
{
    on.register_table(schema_.table(table), std::move(row));
}

snmp::TimeTicks Service::uptime() const
{
    if (status() != ServiceStatus::Up) return {0};
    auto since = std::chrono::steady_clock::time_point(std::chrono::steady_clock::duration(up_since_.load()));
    auto cs = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - since).count() / 10;
    return {static_cast<std::uint32_t>(cs)};
}

void Service::start() { transition(ServiceStatus::Starting, ServiceStatus::Up); }

void Service::stop() { transition(ServiceStatus::Stopping, ServiceStatus::Down); }

void Service::transition(ServiceStatus via, ServiceStatus to)
{
    {
        std::lock_guard lock(lifecycle_mutex_);
        if (status_.load() == to) return;
        status_ = via;
        if (to == ServiceStatus::Up) up_since_ = std::chrono::steady_clock::now().time_since_epoch().count();
        status_ = to;
    }
    auto& entry = schema_.table("serviceTable").entry_oid;
    auto trap = agent_.make_trap(schema_.oid("serviceStatusChange"),
                                 {{entry.child(1).child(index_), int_of(index_)},
                                  {entry.child(4).child(index_), int_of(static_cast<std::int32_t>(to))}});
    agent_.emit_trap(trap);
}

SampleLoadingService::SampleLoadingService(const Schema& schema, agent::AgentConfig config)
    : Service(schema, index::SampleLoading, "sample-loading", ServiceType::SampleLoading, std::move(config))
{
    auto row = std::make_shared<FieldRow>(index());
    row->add("iFormat", {[this] { return BerValue{int_of(format.load())}; }, {},
                         [this](const BerValue& v) { format = static_cast<std::int32_t>(as_int(v)); }})
        .add("adSampleLength", {[this] { return BerValue{int_of(last_length())}; }, {}, {}});
    register_row("sampleLoadingServiceTable", row);
}

Sample SampleLoadingService::load(snmp::ByteView bytes)
{
    return serve([&] {
        auto s = load_sample(bytes, format.load());
        last_length_ = saturate(s.amplitudes.size());
        return s;
    });
}

PreprocessingService::PreprocessingService(const Schema& schema, agent::AgentConfig config,
                                           PreprocessingConfig defaults)
    : Service(schema, index::Preprocessing, "preprocessing", ServiceType::Preprocessing, std::move(config)),
      silence_threshold_micro(defaults.silence_threshold_micro), remove_noise(defaults.remove_noise),
      remove_silence(defaults.remove_silence)
{
    auto flag = [](std::atomic<bool>& f) {
        return FieldRow::Field{[&f] { return BerValue{int_of(f.load() ? kTrue : kFalse)}; }, {},
                               [&f](const BerValue& v) { f = as_int(v) == kTrue; }};
    };
    auto row = std::make_shared<FieldRow>(index());
    row->add("dSilenceThresholdMicro",
             {[this] { return BerValue{int_of(silence_threshold_micro.load())}; }, {},
              [this](const BerValue& v) { silence_threshold_micro = static_cast<std::int32_t>(as_int(v)); }})
        .add("bRemoveNoise", flag(remove_noise))
        .add("bRemoveSilence", flag(remove_silence));
    register_row("preprocessingServiceTable", row);
}

Sample PreprocessingService::preprocess(const Sample& in)
{
    return serve([&] {
        // Config is read once so a concurrent SET cannot tear a run.
        const double threshold = silence_threshold_micro.load() / 1e6;
        const bool noise = remove_noise.load();
        const bool silence = remove_silence.load();
        Sample s = in;
        if (s.amplitudes.empty()) throw DegenerateSignal("empty sample");
        if (noise) s = pipeline::remove_noise(s);
        if (silence) {
            auto r = pipeline::remove_silence(s, threshold);
            silence_removed_ = saturate(r.removed);
            s = std::move(r.sample);
        }
        if (s.amplitudes.empty()) {
            throw DegenerateSignal(fmt::format("silence removal at threshold {} left no samples", threshold));
        }
        return normalize(s);
    });
}

FeatureExtractionService::FeatureExtractionService(const Schema& schema, agent::AgentConfig config,
                                                   FeatureConfig defaults, bool external_lpc)
    : Service(schema, index::FeatureExtraction, "feature-extraction", ServiceType::FeatureExtraction, config),
      algorithm(defaults.algorithm), poles(defaults.poles), window_len(defaults.window_len),
      lpc_agent_([&] {
          auto c = config;
          c.trap_sinks.clear();
          return c;
      }())
{
    auto row = std::make_shared<FieldRow>(index());
    row->add("adFeaturesLength", {[this] { return BerValue{int_of(features_length())}; }, {}, {}})
        .add("oFeatureSetSize", {[this] { return BerValue{int_of(vectors_produced())}; }, {}, {}});
    register_row("featureextractionServiceTable", row);

    const auto& lpc = schema_.table("lpcServiceTable");
    const Oid poles_oid = lpc.column("iPoles")->oid->child(index());
    const Oid window_oid = lpc.column("iWindowLen")->oid->child(index());
    auto pending_or = [](const PendingSet& p, const Oid& oid, std::uint32_t current) -> std::int64_t {
        const auto* v = p.find(oid);
        return v ? as_int(*v) : current;
    };
    auto lrow = std::make_shared<FieldRow>(index());
    lrow->add("iPoles", {[this] { return BerValue{int_of(poles.load())}; },
                         [this, window_oid, pending_or](const BerValue& v, const PendingSet& p) {
                             return as_int(v) < pending_or(p, window_oid, window_len.load())
                                        ? ErrorStatus::NoError
                                        : ErrorStatus::InconsistentValue;
                         },
                         [this](const BerValue& v) { poles = static_cast<std::uint32_t>(as_int(v)); }})
        .add("iWindowLen", {[this] { return BerValue{int_of(window_len.load())}; },
                            [this, poles_oid, pending_or](const BerValue& v, const PendingSet& p) {
                                return pending_or(p, poles_oid, poles.load()) < as_int(v)
                                           ? ErrorStatus::NoError
                                           : ErrorStatus::InconsistentValue;
                            },
                            [this](const BerValue& v) { window_len = static_cast<std::uint32_t>(as_int(v)); }});
    register_row(lpc_agent_, "lpcServiceTable", lrow);
    if (!external_lpc) route_lpc(std::make_shared<agent::LoopbackTransport>(lpc_agent_));
}

void FeatureExtractionService::route_lpc(std::shared_ptr<net::Transport> transport)
{
    agent().add_route(schema_.table("lpcServiceTable").table_oid, std::move(transport));
}

FeatureVector FeatureExtractionService::extract(const Sample& s)
{
    return serve([&] {
        const auto alg = algorithm.load();
        const auto p = poles.load();
        const auto w = window_len.load();
        FeatureVector fv;
        switch (alg) {
        case Algorithm::Lpc: fv = lpc_features(s, p, w); break;
        case Algorithm::Fft: fv = fft_features(s, w); break;
        case Algorithm::MinMax: fv = minmax_features(s); break;
        }
        features_length_ = saturate(fv.values.size());
        ++produced_;
        return fv;
    });
}

ClassificationService::ClassificationService(const Schema& schema, agent::AgentConfig config,
                                             std::filesystem::path store_path)
    : Service(schema, index::Classification, "classification", ServiceType::Classification, std::move(config)),
      path_(std::move(store_path))
{
    if (!path_.empty() && std::filesystem::exists(path_)) {
        store_ = TrainingSet::load(path_);
        store_bytes_ = saturate(std::filesystem::file_size(path_));
        record_count_ = saturate(store_.record_count());
    }
    auto row = std::make_shared<FieldRow>(index());
    row->add("classificationFeaturesLength", {[this] { return BerValue{int_of(features_length_.load())}; }, {}, {}})
        .add("oResultSetSize", {[this] { return BerValue{int_of(result_size_.load())}; }, {}, {}})
        .add("oResultSetTopId", {[this] { return BerValue{int_of(top_id_.load())}; }, {}, {}});
    register_row("classificationServiceTable", row);

    auto storage = std::make_shared<FieldRow>(1);
    storage->add("storageIndex", {[] { return BerValue{int_of(1)}; }, {}, {}})
        .add("storagePath", {[this] { return BerValue{OctetString{path_.string()}}; }, {}, {}})
        .add("storageSizeBytes", {[this] { return BerValue{int_of(store_bytes_.load())}; }, {}, {}})
        .add("storageRecordCount", {[this] { return BerValue{int_of(record_count_.load())}; }, {}, {}});
    register_row("storageTable", storage);
}

TrainingSet ClassificationService::store() const
{
    std::lock_guard lock(store_mutex_);
    return store_;
}

void ClassificationService::train(std::int32_t subject, const FeatureVector& fv)
{
    serve([&] {
        std::lock_guard lock(store_mutex_);
        // Persist first so a failed write leaves memory and disk in agreement.
        auto next = store_;
        next.train(subject, fv);
        if (!path_.empty()) {
            next.save(path_);
            store_bytes_ = saturate(std::filesystem::file_size(path_));
        } else {
            store_bytes_ = saturate(next.serialize().size());
        }
        store_ = std::move(next);
        record_count_ = saturate(store_.record_count());
        features_length_ = saturate(fv.values.size());
    });
}

ResultSet ClassificationService::classify(const FeatureVector& fv)
{
    return serve([&] {
        std::lock_guard lock(store_mutex_);
        features_length_ = saturate(fv.values.size());
        auto r = store_.classify(fv);
        result_size_ = saturate(r.ranked.size());
        top_id_ = r.ranked.front().subject;
        return r;
    });
}

PipelineLinks in_process_links(SampleLoadingService& loader, PreprocessingService& pre,
                               FeatureExtractionService& fe, ClassificationService& cls)
{
    PipelineLinks l;
    l.load = [&loader](snmp::ByteView b) { return loader.load(b); };
    l.preprocess = [&pre](const Sample& s) { return pre.preprocess(s); };
    l.extract = [&fe](const Sample& s) { return fe.extract(s); };
    l.classify = [&cls](const FeatureVector& fv) { return cls.classify(fv); };
    l.train = [&cls](std::int32_t id, const FeatureVector& fv) { cls.train(id, fv); };
    return l;
}

}  // namespace marf::pipeline
