#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <fmt/format.h>

#include "marf/agent/agent.hpp"
#include "marf/pipeline/dsp.hpp"
#include "marf/pipeline/errors.hpp"
#include "marf/pipeline/training.hpp"

namespace marf::pipeline {

using snmp::BerValue;

enum class ServiceType : std::int32_t {
    Application = 1,
    Marf = 2,
    SampleLoading = 3,
    Preprocessing = 4,
    FeatureExtraction = 5,
    Classification = 6,
};

enum class ServiceStatus : std::int32_t { Up = 1, Down = 2, Starting = 3, Stopping = 4 };
std::string_view to_string(ServiceStatus s);

/// Service indices of the demo pipeline; they double as serviceTable row indices.
namespace index {
inline constexpr std::uint32_t SampleLoading = 1;
inline constexpr std::uint32_t Preprocessing = 2;
inline constexpr std::uint32_t FeatureExtraction = 3;
inline constexpr std::uint32_t Classification = 4;
inline constexpr std::uint32_t App = 5;
}  // namespace index

/// The linked MARF MIB with every table flattened, shared by all services.
class Schema {
public:
    explicit Schema(const smi::MibRegistry& registry);
    const smi::MibRegistry& registry() const { return reg_; }
    const smi::ResolvedTable& table(std::string_view name) const;
    Oid oid(std::string_view name) const { return reg_.oid_of(name); }

private:
    const smi::MibRegistry& reg_;
    std::vector<smi::ResolvedTable> tables_;
};

/// One row of a table backed by accessor functions, keyed by column name.
class FieldRow : public agent::RowSource {
public:
    struct Field {
        std::function<BerValue()> get;
        /// Extra check after the generic syntax check; null accepts.
        agent::Validator validate;
        std::function<void(const BerValue&)> set;
    };

    explicit FieldRow(std::uint32_t row) : row_(row) {}
    FieldRow& add(std::string column, Field f);

    std::vector<std::uint32_t> rows() const override { return {row_}; }
    BerValue read(const smi::ColumnDef& column, std::uint32_t row) const override;
    agent::ErrorStatus validate(const smi::ColumnDef& column, std::uint32_t row, const BerValue& value,
                                const agent::PendingSet& pending) const override;
    void commit(const smi::ColumnDef& column, std::uint32_t row, const BerValue& value) override;

private:
    std::uint32_t row_;
    std::map<std::string, Field, std::less<>> fields_;
};

/// State every MARF service shares: identity, lifecycle, request counters and
/// the embedded agent that publishes its serviceTable row.
class Service {
public:
    Service(const Schema& schema, std::uint32_t index, std::string name, ServiceType type,
            agent::AgentConfig config);
    virtual ~Service() = default;
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    std::uint32_t index() const { return index_; }
    const std::string& name() const { return name_; }
    ServiceType type() const { return type_; }
    ServiceStatus status() const { return status_.load(); }

    /// Both emit serviceStatusChange when the status actually changes.
    void start();
    void stop();

    agent::Agent& agent() { return agent_; }
    std::uint32_t in_requests() const { return in_requests_.load(); }
    std::uint32_t out_errors() const { return out_errors_.load(); }
    /// Centiseconds since the service last came up; 0 while not up.
    snmp::TimeTicks uptime() const;

protected:
    /// Runs one stage request: serial, counted, refused unless up.
    template <class F>
    auto serve(F&& f) -> decltype(f())
    {
        std::lock_guard lock(stage_mutex_);
        if (status() != ServiceStatus::Up) {
            throw ServiceDown(index_, fmt::format("service {} ({}) is {}", index_, name_, to_string(status())));
        }
        ++in_requests_;
        try {
            return f();
        } catch (...) {
            ++out_errors_;
            throw;
        }
    }

    /// Publishes row `index` of another service's agent in this agent's serviceTable.
    void proxy_service_row(std::uint32_t index, std::shared_ptr<net::Transport> agent);

    void register_row(std::string_view table, std::shared_ptr<FieldRow> row) { register_row(agent_, table, row); }
    void register_row(agent::Agent& on, std::string_view table, std::shared_ptr<FieldRow> row);

    const Schema& schema_;

private:
    void transition(ServiceStatus via, ServiceStatus to);

    std::uint32_t index_;
    std::string name_;
    ServiceType type_;
    agent::Agent agent_;
    std::atomic<ServiceStatus> status_{ServiceStatus::Up};
    std::atomic<std::uint32_t> in_requests_{0};
    std::atomic<std::uint32_t> out_errors_{0};
    std::atomic<std::chrono::steady_clock::rep> up_since_;
    std::mutex stage_mutex_;
    std::mutex lifecycle_mutex_;
    std::shared_ptr<class ServiceRows> rows_;
};

class SampleLoadingService : public Service {
public:
    SampleLoadingService(const Schema& schema, agent::AgentConfig config = {});

    Sample load(snmp::ByteView bytes);

    std::atomic<std::int32_t> format{kFormatWavPcm16Mono};
    std::uint32_t last_length() const { return last_length_.load(); }

private:
    std::atomic<std::uint32_t> last_length_{0};
};

struct PreprocessingConfig {
    std::int32_t silence_threshold_micro = 10000;
    bool remove_noise = false;
    bool remove_silence = false;
};

class PreprocessingService : public Service {
public:
    PreprocessingService(const Schema& schema, agent::AgentConfig config = {}, PreprocessingConfig defaults = {});

    /// Noise removal, then silence removal, then normalization.
    Sample preprocess(const Sample& s);

    std::atomic<std::int32_t> silence_threshold_micro;
    std::atomic<bool> remove_noise;
    std::atomic<bool> remove_silence;
    std::uint32_t silence_removed() const { return silence_removed_.load(); }

private:
    std::atomic<std::uint32_t> silence_removed_{0};
};

struct FeatureConfig {
    Algorithm algorithm = Algorithm::Lpc;
    std::uint32_t poles = 8;
    std::uint32_t window_len = 256;
};

class FeatureExtractionService : public Service {
public:
    /// The LPC parameter table lives on a separate sub-agent (lpc_agent()).
    /// Unless `external_lpc` is set it is reached through an in-process route;
    /// otherwise the caller serves it and calls route_lpc().
    FeatureExtractionService(const Schema& schema, agent::AgentConfig config = {}, FeatureConfig defaults = {},
                             bool external_lpc = false);

    FeatureVector extract(const Sample& s);

    agent::Agent& lpc_agent() { return lpc_agent_; }
    void route_lpc(std::shared_ptr<net::Transport> transport);

    std::atomic<Algorithm> algorithm;
    std::atomic<std::uint32_t> poles;
    std::atomic<std::uint32_t> window_len;
    std::uint32_t features_length() const { return features_length_.load(); }
    std::uint32_t vectors_produced() const { return produced_.load(); }

private:
    agent::Agent lpc_agent_;
    std::atomic<std::uint32_t> features_length_{0};
    std::atomic<std::uint32_t> produced_{0};
};

class ClassificationService : public Service {
public:
    /// An empty path keeps the store in memory only. An existing file is loaded.
    ClassificationService(const Schema& schema, agent::AgentConfig config = {},
                          std::filesystem::path store_path = {});

    void train(std::int32_t subject, const FeatureVector& fv);
    ResultSet classify(const FeatureVector& fv);

    TrainingSet store() const;
    const std::filesystem::path& store_path() const { return path_; }

private:
    mutable std::mutex store_mutex_;
    TrainingSet store_;
    std::filesystem::path path_;
    std::atomic<std::uint32_t> store_bytes_{0};
    std::atomic<std::uint32_t> record_count_{0};
    std::atomic<std::uint32_t> features_length_{0};
    std::atomic<std::uint32_t> result_size_{0};
    std::atomic<std::int32_t> top_id_{0};
};

/// The calls the orchestrator makes into the four stage services.
struct PipelineLinks {
    std::function<Sample(snmp::ByteView)> load;
    std::function<Sample(const Sample&)> preprocess;
    std::function<FeatureVector(const Sample&)> extract;
    std::function<ResultSet(const FeatureVector&)> classify;
    std::function<void(std::int32_t, const FeatureVector&)> train;
};

PipelineLinks in_process_links(SampleLoadingService& loader, PreprocessingService& pre,
                               FeatureExtractionService& fe, ClassificationService& cls);

}  // namespace marf::pipeline
