#include "marf/pipeline/training.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include <fmt/format.h>

namespace marf::pipeline {

namespace {

constexpr char kMagic[8] = {'M', 'A', 'R', 'F', 'T', 'S', 'v', '1'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double d)
{
    auto v = std::bit_cast<std::uint64_t>(d);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class In {
public:
    explicit In(snmp::ByteView b) : b_(b) {}
    std::uint32_t u32()
    {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t{b_[pos_++]} << (8 * i);
        return v;
    }
    double f64()
    {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t{b_[pos_++]} << (8 * i);
        return std::bit_cast<double>(v);
    }
    void magic()
    {
        need(8);
        if (std::memcmp(b_.data(), kMagic, 8) != 0) throw std::runtime_error("not a MARFTSv1 training set");
        pos_ += 8;
    }
    bool done() const { return pos_ == b_.size(); }

private:
    void need(std::size_t n) const
    {
        if (b_.size() - pos_ < n) throw std::runtime_error("truncated training set file");
    }
    snmp::ByteView b_;
    std::size_t pos_ = 0;
};

double distance(const std::vector<double>& a, const std::vector<double>& b)
{
    double acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(acc);
}

}  // namespace

std::size_t TrainingSet::record_count() const
{
    std::size_t n = 0;
    for (const auto& [_, v] : entries_) n += v.size();
    return n;
}

void TrainingSet::check(const FeatureVector& fv) const
{
    if (!meta_) return;
    Metadata got{fv.algorithm, fv.poles, fv.window_len, fv.values.size()};
    if (!(got == *meta_)) {
        throw IncompatibleFeatures(fmt::format("store holds {}(poles={}, window={}, len={}), got {}(poles={}, window={}, len={})",
                                               to_string(meta_->algorithm), meta_->poles, meta_->window_len,
                                               meta_->length, to_string(got.algorithm), got.poles, got.window_len,
                                               got.length));
    }
}

void TrainingSet::train(std::int32_t subject, const FeatureVector& fv)
{
    check(fv);
    if (fv.values.empty()) throw IncompatibleFeatures("empty feature vector");
    if (!meta_) meta_ = Metadata{fv.algorithm, fv.poles, fv.window_len, fv.values.size()};
    entries_[subject].push_back(fv.values);
}

ResultSet TrainingSet::classify(const FeatureVector& fv) const
{
    if (entries_.empty()) throw EmptyTrainingSet("no subjects have been trained");
    check(fv);
    ResultSet r;
    for (const auto& [subject, vectors] : entries_) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& v : vectors) best = std::min(best, distance(v, fv.values));
        r.ranked.push_back({subject, best});
    }
    std::stable_sort(r.ranked.begin(), r.ranked.end(),
                     [](const Ranked& a, const Ranked& b) { return a.distance < b.distance; });
    return r;
}

std::vector<std::uint8_t> TrainingSet::serialize() const
{
    std::vector<std::uint8_t> out(kMagic, kMagic + 8);
    put_u32(out, meta_ ? static_cast<std::uint32_t>(meta_->algorithm) : 0);
    put_u32(out, meta_ ? meta_->poles : 0);
    put_u32(out, meta_ ? meta_->window_len : 0);
    put_u32(out, meta_ ? static_cast<std::uint32_t>(meta_->length) : 0);
    put_u32(out, static_cast<std::uint32_t>(entries_.size()));
    for (const auto& [subject, vectors] : entries_) {
        put_u32(out, static_cast<std::uint32_t>(subject));
        put_u32(out, static_cast<std::uint32_t>(vectors.size()));
        for (const auto& v : vectors) {
            for (double d : v) put_f64(out, d);
        }
    }
    return out;
}

TrainingSet TrainingSet::parse(snmp::ByteView bytes)
{
    In in(bytes);
    in.magic();
    auto alg = in.u32();
    auto poles = in.u32();
    auto window = in.u32();
    auto len = in.u32();
    auto subjects = in.u32();
    TrainingSet ts;
    if (subjects > 0) {
        if (alg < 1 || alg > 3) throw std::runtime_error(fmt::format("unknown algorithm code {}", alg));
        ts.meta_ = Metadata{static_cast<Algorithm>(alg), poles, window, len};
    }
    for (std::uint32_t s = 0; s < subjects; ++s) {
        auto id = static_cast<std::int32_t>(in.u32());
        auto count = in.u32();
        auto& vectors = ts.entries_[id];
        for (std::uint32_t c = 0; c < count; ++c) {
            std::vector<double> v(len);
            for (auto& d : v) d = in.f64();
            vectors.push_back(std::move(v));
        }
    }
    if (!in.done()) throw std::runtime_error("trailing bytes after training set");
    return ts;
}

void TrainingSet::save(const std::filesystem::path& path) const
{
    auto bytes = serialize();
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error(fmt::format("cannot write {}", tmp.string()));
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw std::runtime_error(fmt::format("short write to {}", tmp.string()));
    }
    std::filesystem::rename(tmp, path);
}

TrainingSet TrainingSet::load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(fmt::format("cannot read {}", path.string()));
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse(bytes);
}

}  // namespace marf::pipeline
