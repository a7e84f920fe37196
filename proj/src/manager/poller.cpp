#include "marf/manager/poller.hpp"

#include <charconv>
#include <cmath>
#include <condition_variable>
#include <ctime>
#include <map>
#include <sstream>

#include <fmt/format.h>

namespace marf::manager {

void StatSeries::append(WallTime t, std::optional<BerValue> value)
{
    if (!samples.empty() && t <= samples.back().time) t = samples.back().time + std::chrono::microseconds(1);
    StatSample s{t, std::nullopt, std::nullopt};
    std::optional<std::uint32_t> counter;
    if (value) {
        if (const auto* i = std::get_if<snmp::Integer>(&*value)) s.value = static_cast<double>(i->value);
        if (const auto* c = std::get_if<snmp::Counter32>(&*value)) {
            s.value = c->value;
            counter = c->value;
        }
        if (const auto* k = std::get_if<snmp::TimeTicks>(&*value)) s.value = k->value;
    }
    if (s.value) {
        for (auto it = samples.rbegin(); it != samples.rend(); ++it) {
            if (!it->value) continue;
            double dt = std::chrono::duration<double>(t - it->time).count();
            double delta = counter ? static_cast<double>(snmp::counter_delta(static_cast<std::uint32_t>(*it->value), *counter))
                                   : *s.value - *it->value;
            if (delta >= 0 && dt > 0) s.rate = delta / dt;
            break;
        }
    }
    samples.push_back(s);
}

std::string iso_time(WallTime t)
{
    auto secs = std::chrono::floor<std::chrono::seconds>(t);
    auto micros = (t - secs).count();
    std::time_t tt = std::chrono::system_clock::to_time_t(secs);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}.{:06}Z", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                       tm.tm_hour, tm.tm_min, tm.tm_sec, micros);
}

WallTime parse_iso_time(std::string_view text)
{
    std::tm tm{};
    int micros = 0;
    std::string s(text);
    if (std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d.%6dZ", &tm.tm_year, &tm.tm_mon, &tm.tm_mday, &tm.tm_hour,
                    &tm.tm_min, &tm.tm_sec, &micros) != 7) {
        throw std::invalid_argument(fmt::format("bad timestamp '{}'", text));
    }
    tm.tm_year -= 1900;
    tm.tm_mon -= 1;
    auto secs = std::chrono::system_clock::from_time_t(timegm(&tm));
    return std::chrono::time_point_cast<std::chrono::microseconds>(secs) + std::chrono::microseconds(micros);
}

namespace {

std::string real(double d) { return fmt::format("{:.17g}", d); }

std::optional<double> parse_real(std::string_view f)
{
    if (f.empty()) return std::nullopt;
    std::string s(f);
    std::size_t used = 0;
    double d = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(fmt::format("bad number '{}'", f));
    return d;
}

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

std::string to_csv(const std::vector<StatSeries>& series)
{
    std::string out = "iso-time,target,oid-name,value,rate\n";
    for (const auto& s : series) {
        for (const auto& p : s.samples) {
            out += fmt::format("{},{},{},{},{}\n", iso_time(p.time), s.target, s.name, p.value ? real(*p.value) : "",
                               p.rate ? real(*p.rate) : "");
        }
    }
    return out;
}

std::vector<StatSeries> from_csv(std::string_view csv, const smi::MibRegistry* registry)
{
    std::vector<StatSeries> out;
    std::map<std::pair<std::string, std::string>, std::size_t> where;
    std::size_t pos = 0;
    bool header = true;
    while (pos < csv.size()) {
        auto nl = csv.find('\n', pos);
        auto line = csv.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? csv.size() : nl + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line.starts_with("iso-time")) continue;
        }
        auto f = split(line);
        if (f.size() != 5) throw std::invalid_argument(fmt::format("expected 5 CSV fields in '{}'", line));
        auto key = std::make_pair(std::string(f[1]), std::string(f[2]));
        auto it = where.find(key);
        if (it == where.end()) {
            StatSeries s;
            s.target = key.first;
            s.name = key.second;
            s.oid = registry ? registry->resolve(s.name) : Oid::parse(s.name);
            it = where.emplace(key, out.size()).first;
            out.push_back(std::move(s));
        }
        out[it->second].samples.push_back({parse_iso_time(f[0]), parse_real(f[3]), parse_real(f[4])});
    }
    return out;
}

StatPoller::StatPoller(std::vector<Item> items, std::chrono::milliseconds interval, std::size_t keep)
    : items_(std::move(items)), interval_(interval), keep_(keep)
{
    if (interval_ < std::chrono::milliseconds(100)) throw std::invalid_argument("poll interval must be at least 100 ms");
    for (const auto& i : items_) series_.push_back({i.client->target().endpoint.str(), i.oid, i.name, {}});
}

StatPoller::~StatPoller() { stop(); }

void StatPoller::poll_once() { poll_round({}); }

void StatPoller::poll_round(std::stop_token st)
{
    for (std::size_t i = 0; i < items_.size() && !st.stop_requested(); ++i) {
        std::optional<BerValue> v;
        try {
            auto vbs = items_[i].client->get({items_[i].oid});
            if (vbs.size() == 1 && !snmp::is_exception(vbs[0].value)) v = vbs[0].value;
        } catch (const std::exception&) {
            // Timeouts and error responses are recorded as gaps.
        }
        auto now = std::chrono::time_point_cast<std::chrono::microseconds>(std::chrono::system_clock::now());
        std::lock_guard lock(mutex_);
        auto& s = series_[i];
        s.append(now, v);
        if (keep_ && s.samples.size() > keep_) s.samples.erase(s.samples.begin());
    }
}

void StatPoller::run_for(std::chrono::milliseconds duration)
{
    auto start = std::chrono::steady_clock::now();
    auto next = start;
    do {
        poll_once();
        next += interval_;
        std::this_thread::sleep_until(next);
    } while (std::chrono::steady_clock::now() - start < duration);
}

void StatPoller::start()
{
    if (thread_.joinable()) return;
    thread_ = std::jthread([this](std::stop_token st) {
        auto next = std::chrono::steady_clock::now();
        std::mutex m;
        std::condition_variable_any cv;
        while (!st.stop_requested()) {
            poll_round(st);
            next += interval_;
            std::unique_lock lock(m);
            cv.wait_until(lock, st, next, [] { return false; });
        }
    });
}

void StatPoller::stop()
{
    thread_.request_stop();
    if (thread_.joinable()) thread_.join();
}

std::vector<StatSeries> StatPoller::snapshot() const
{
    std::lock_guard lock(mutex_);
    return series_;
}

}  // namespace marf::manager
