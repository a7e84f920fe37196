#pragma once

#include <chrono>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "marf/manager/client.hpp"
#include "marf/smi/registry.hpp"

namespace marf::manager {

using WallTime = std::chrono::time_point<std::chrono::system_clock, std::chrono::microseconds>;

struct StatSample {
    WallTime time;
    /// Absent when the poll timed out or the instance did not answer.
    std::optional<double> value;
    /// Per second, against the previous sample that has a value.
    std::optional<double> rate;
    friend bool operator==(const StatSample&, const StatSample&) = default;
};

struct StatSeries {
    std::string target;
    Oid oid;
    std::string name;
    std::vector<StatSample> samples;

    /// Appends with a strictly later timestamp (bumped by 1 us if needed).
    /// Counter32 deltas are taken modulo 2^32; other values that go down get no rate.
    void append(WallTime t, std::optional<BerValue> value);

    friend bool operator==(const StatSeries&, const StatSeries&) = default;
};

/// ISO 8601 UTC with microseconds: 2026-10-19T08:30:00.123456Z
std::string iso_time(WallTime t);
WallTime parse_iso_time(std::string_view text);

/// Columns: iso-time, target, oid-name, value, rate. Gaps leave value and rate empty.
std::string to_csv(const std::vector<StatSeries>& series);
/// Inverse of to_csv. oid-name is resolved through `registry` when given,
/// otherwise it must be a dotted OID.
std::vector<StatSeries> from_csv(std::string_view csv, const smi::MibRegistry* registry = nullptr);

/// Periodic GETs of (target, oid) pairs.
class StatPoller {
public:
    struct Item {
        std::shared_ptr<SnmpClient> client;
        Oid oid;
        std::string name;
    };

    /// Throws std::invalid_argument when interval < 100 ms. keep = 0 keeps every sample.
    StatPoller(std::vector<Item> items, std::chrono::milliseconds interval, std::size_t keep = 0);
    ~StatPoller();

    /// One round over every item. Timeouts become gaps.
    void poll_once();
    /// Polls every interval until `duration` has elapsed (at least one round).
    void run_for(std::chrono::milliseconds duration);
    void start();
    void stop();

    std::vector<StatSeries> snapshot() const;
    std::chrono::milliseconds interval() const { return interval_; }

private:
    /// Stops early, between items, once `st` is signalled.
    void poll_round(std::stop_token st);

    std::vector<Item> items_;
    std::chrono::milliseconds interval_;
    std::size_t keep_;
    mutable std::mutex mutex_;
    std::vector<StatSeries> series_;
    std::jthread thread_;
};

}  // namespace marf::manager
