#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <vector>

#include "marf/pipeline/dsp.hpp"

namespace marf::pipeline {

struct Ranked {
    std::int32_t subject = 0;
    double distance = 0;
    friend bool operator==(const Ranked&, const Ranked&) = default;
};

/// Ascending by distance; ties broken by subject id.
struct ResultSet {
    std::vector<Ranked> ranked;
    friend bool operator==(const ResultSet&, const ResultSet&) = default;
};

/// Feature vectors per subject, all produced by one algorithm with one parameter set.
class TrainingSet {
public:
    struct Metadata {
        Algorithm algorithm = Algorithm::Lpc;
        std::uint32_t poles = 0;
        std::uint32_t window_len = 0;
        std::size_t length = 0;
        friend bool operator==(const Metadata&, const Metadata&) = default;
    };

    bool empty() const { return entries_.empty(); }
    const std::optional<Metadata>& metadata() const { return meta_; }
    const std::map<std::int32_t, std::vector<std::vector<double>>>& entries() const { return entries_; }
    std::size_t subject_count() const { return entries_.size(); }
    std::size_t record_count() const;

    /// Throws IncompatibleFeatures when fv does not match the stored metadata.
    void train(std::int32_t subject, const FeatureVector& fv);
    /// Per subject, the smallest Euclidean distance to any of its vectors.
    ResultSet classify(const FeatureVector& fv) const;

    /// MARFTSv1 little-endian image.
    std::vector<std::uint8_t> serialize() const;
    static TrainingSet parse(snmp::ByteView bytes);

    /// Writes to a sibling temporary file and renames it over `path`.
    void save(const std::filesystem::path& path) const;
    static TrainingSet load(const std::filesystem::path& path);

    friend bool operator==(const TrainingSet&, const TrainingSet&) = default;

private:
    void check(const FeatureVector& fv) const;

    std::optional<Metadata> meta_;
    std::map<std::int32_t, std::vector<std::vector<double>>> entries_;
};

}  // namespace marf::pipeline
