#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <cstring>
#include <map>

#include <fmt/format.h>
#include <unistd.h>

#include "marf/pipeline/dsp.hpp"
#include "marf/pipeline/errors.hpp"
#include "marf/pipeline/training.hpp"
#include "oracles/linalg.hpp"
#include "support/signals.hpp"

using namespace marf;
using namespace marf::pipeline;

namespace {

// A WAV writer independent of encode_wav: header fields as parameters, samples verbatim.
snmp::Bytes wav(const std::vector<std::int16_t>& pcm, std::uint16_t channels = 1, std::uint16_t bits = 16,
                std::uint16_t format = 1, std::uint32_t rate = 8000)
{
    snmp::Bytes out;
    auto u32 = [&](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    };
    auto u16 = [&](std::uint16_t v) {
        out.push_back(static_cast<std::uint8_t>(v));
        out.push_back(static_cast<std::uint8_t>(v >> 8));
    };
    auto tag = [&](const char* t) { out.insert(out.end(), t, t + 4); };
    std::uint32_t data = static_cast<std::uint32_t>(pcm.size() * 2);
    tag("RIFF");
    u32(36 + data);
    tag("WAVE");
    tag("fmt ");
    u32(16);
    u16(format);
    u16(channels);
    u32(rate);
    u32(rate * channels * bits / 8);
    u16(static_cast<std::uint16_t>(channels * bits / 8));
    u16(bits);
    tag("data");
    u32(data);
    for (auto v : pcm) u16(static_cast<std::uint16_t>(v));
    return out;
}

Sample of(std::vector<double> v)
{
    Sample s;
    s.amplitudes = std::move(v);
    return s;
}

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1, double hi = 1)
{
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

FeatureVector fv(std::vector<double> values, Algorithm a = Algorithm::Lpc, std::uint32_t poles = 2,
                 std::uint32_t window = 16)
{
    return FeatureVector{a, poles, window, std::move(values)};
}

}  // namespace

TEST_CASE("WAV PCM16 mono loads with 1/32768 scaling")
{
    auto s = load_sample(wav({0, 16384, -32768, 32767, -16384, 8192, 0, 1}));
    REQUIRE(s.amplitudes.size() == 8);
    CHECK(s.amplitudes[0] == 0.0);
    CHECK(s.amplitudes[1] == 0.5);
    CHECK(s.amplitudes[2] == -1.0);
    CHECK(s.amplitudes[3] == 32767.0 / 32768.0);
    CHECK(s.amplitudes[4] == -0.5);
    CHECK(s.amplitudes[7] == 1.0 / 32768.0);
    CHECK(s.sample_rate_hz == 8000);
    CHECK(s.format == kFormatWavPcm16Mono);
}

TEST_CASE("WAV rejections")
{
    auto good = wav({1, 2, 3, 4});
    CHECK_THROWS_AS(load_sample(snmp::ByteView(good).first(20)), MalformedWav);
    CHECK_THROWS_AS(load_sample(snmp::ByteView(good).first(good.size() - 1)), MalformedWav);
    CHECK_THROWS_AS(load_sample(snmp::Bytes{}), MalformedWav);
    CHECK_THROWS_AS(load_sample(wav({1, 2, 3, 4}, 2)), UnsupportedFormat);
    CHECK_THROWS_AS(load_sample(wav({1, 2, 3, 4}, 1, 8)), UnsupportedFormat);
    CHECK_THROWS_AS(load_sample(wav({1, 2, 3, 4}, 1, 16, 3)), UnsupportedFormat);
    CHECK_THROWS_AS(load_sample(good, 2), UnsupportedFormat);
    auto bad_magic = good;
    bad_magic[0] = 'X';
    CHECK_THROWS_AS(load_sample(bad_magic), MalformedWav);
}

TEST_CASE("generated 440 Hz second loads as 8000 amplitudes within [-1, 1]")
{
    auto gen = signals::sine(440, 8000, 8000, 0.9);
    auto s = load_sample(encode_wav(gen));
    REQUIRE(s.amplitudes.size() == 8000);
    double peak = 0;
    for (std::size_t i = 0; i < s.amplitudes.size(); ++i) {
        peak = std::max(peak, std::abs(s.amplitudes[i]));
        CHECK(std::abs(s.amplitudes[i] - gen.amplitudes[i]) <= 0.5 / 32768.0 + 1e-15);
    }
    CHECK(peak <= 1.0);
}

TEST_CASE("normalize")
{
    CHECK(normalize(of({0, 0.25, -0.5})).amplitudes == std::vector<double>{0, 0.5, -1.0});
    auto once = normalize(of({0.1, -0.3, 0.2}));
    CHECK(normalize(once) == once);
    CHECK_THROWS_AS(normalize(of({0, 0, 0})), DegenerateSignal);
    CHECK_THROWS_AS(normalize(of({})), DegenerateSignal);
    // Samples before the start index keep their values.
    CHECK(normalize(of({4, 0.25, -0.5}), 1).amplitudes == std::vector<double>{4, 0.5, -1.0});

    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        auto v = random_vector(rng, 1 + rng() % 300);
        double peak = 0;
        for (double x : v) peak = std::max(peak, std::abs(x));
        auto n = normalize(of(v)).amplitudes;
        double out_peak = 0;
        for (std::size_t k = 0; k < v.size(); ++k) {
            CHECK(n[k] == v[k] / peak);
            out_peak = std::max(out_peak, std::abs(n[k]));
        }
        CHECK(out_peak == 1.0);
    }
}

TEST_CASE("remove_silence")
{
    auto r = remove_silence(of({0.0, 0.5, 0.01, -0.3}), 0.1);
    CHECK(r.sample.amplitudes == std::vector<double>{0.5, -0.3});
    CHECK(r.removed == 2);
    auto id = remove_silence(of({0.0, -0.0, 1e-300, 0.2}), 0);
    CHECK(id.sample.amplitudes.size() == 4);
    CHECK(id.removed == 0);
    CHECK(remove_silence(of({0.01}), 0.5).sample.amplitudes.empty());

    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        auto v = random_vector(rng, rng() % 200);
        double th = std::uniform_real_distribution<double>(0, 1)(rng);
        std::vector<double> expect;
        std::copy_if(v.begin(), v.end(), std::back_inserter(expect), [&](double x) { return !(std::abs(x) < th); });
        auto got = remove_silence(of(v), th);
        CHECK(got.sample.amplitudes == expect);
        CHECK(got.removed == v.size() - expect.size());
    }
}

TEST_CASE("remove_noise is a window-3 moving average with short ends")
{
    auto c = remove_noise(of({0.25, 0.25, 0.25, 0.25, 0.25}));
    for (double x : c.amplitudes) CHECK(x == doctest::Approx(0.25).epsilon(1e-15));
    auto alt = remove_noise(of({1, -1, 1, -1})).amplitudes;
    REQUIRE(alt.size() == 4);
    CHECK(alt[0] == doctest::Approx(0.0));
    CHECK(alt[1] == doctest::Approx(1.0 / 3));
    CHECK(alt[2] == doctest::Approx(-1.0 / 3));
    CHECK(alt[3] == doctest::Approx(0.0));
    CHECK(remove_noise(of({0.7})).amplitudes == std::vector<double>{0.7});

    std::mt19937_64 rng(13);
    for (int i = 0; i < 100; ++i) {
        auto v = random_vector(rng, 2 + rng() % 100);
        auto got = remove_noise(of(v)).amplitudes;
        REQUIRE(got.size() == v.size());
        const auto n = v.size();
        for (std::size_t k = 0; k < n; ++k) {
            double sum = v[k];
            int count = 1;
            if (k > 0) sum += v[k - 1], ++count;
            if (k + 1 < n) sum += v[k + 1], ++count;
            CHECK(got[k] == doctest::Approx(sum / count).epsilon(1e-12));
        }
    }
}

TEST_CASE("Hamming window coefficients")
{
    auto w = window_coefficients(Window::Hamming, 5);
    CHECK(w[0] == doctest::Approx(0.08));
    CHECK(w[2] == doctest::Approx(1.0));
    CHECK(w[4] == doctest::Approx(0.08));
    CHECK(w[1] == doctest::Approx(0.54));
    for (double x : window_coefficients(Window::Rectangular, 9)) CHECK(x == 1.0);
}

TEST_CASE("Levinson-Durbin equals a direct Toeplitz solve")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        // Autocorrelations of real signals are positive definite, hence stable.
        auto x = random_vector(rng, 32 + rng() % 200);
        std::size_t p = 1 + rng() % 12;
        auto r = oracle::autocorr(x, p);
        auto got = autocorrelation(x, p);
        for (std::size_t k = 0; k <= p; ++k) CHECK(got[k] == doctest::Approx(r[k]).epsilon(1e-12));
        auto a = levinson_durbin(r, p);
        auto expect = oracle::toeplitz_lpc(r, p);
        REQUIRE(a.size() == p);
        for (std::size_t k = 0; k < p; ++k) CHECK(std::abs(a[k] - expect[k]) <= 1e-9);
    }
}

TEST_CASE("LPC recovers AR(2) coefficients")
{
    std::mt19937_64 rng(20070401);
    std::normal_distribution<double> e(0.0, 0.1);
    const std::size_t n = 4096;
    Sample s;
    s.amplitudes.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double x1 = i >= 1 ? s.amplitudes[i - 1] : 0;
        double x2 = i >= 2 ? s.amplitudes[i - 2] : 0;
        s.amplitudes[i] = 0.75 * x1 - 0.5 * x2 + e(rng);
    }
    auto f = lpc_features(s, 2, n, Window::Rectangular);
    REQUIRE(f.values.size() == 2);
    CHECK(std::abs(f.values[0] - 0.75) <= 0.05 * 0.75);
    CHECK(std::abs(f.values[1] + 0.5) <= 0.05 * 0.5);
    auto expect = oracle::toeplitz_lpc(oracle::autocorr(s.amplitudes, 2), 2);
    CHECK(std::abs(f.values[0] - expect[0]) <= 1e-9);
    CHECK(std::abs(f.values[1] - expect[1]) <= 1e-9);
}

TEST_CASE("LPC errors and shape")
{
    CHECK_THROWS_AS(lpc_features(of(std::vector<double>(64, 0.0)), 4, 32), DegenerateSignal);
    auto s = signals::clip(1, 0, 512);
    CHECK_THROWS_AS(lpc_features(s, 32, 32), InvalidParams);
    CHECK_THROWS_AS(lpc_features(s, 0, 32), InvalidParams);
    CHECK_THROWS_AS(lpc_features(s, 8, 1024), InvalidParams);
    auto f = lpc_features(s, 8, 256);
    CHECK(f.values.size() == 8);
    CHECK(f.poles == 8);
    CHECK(f.window_len == 256);
    for (double v : f.values) CHECK(std::isfinite(v));
}

TEST_CASE("FFT matches a naive DFT and satisfies Parseval")
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> d(-1, 1);
    for (std::size_t n : {1u, 2u, 4u, 8u, 64u, 256u, 1024u}) {
        std::vector<std::complex<double>> x(n);
        for (auto& c : x) c = {d(rng), d(rng)};
        auto expect = oracle::dft(x);
        auto got = x;
        fft(got);
        double time_energy = 0, freq_energy = 0;
        for (std::size_t k = 0; k < n; ++k) {
            CHECK(std::abs(got[k] - expect[k]) <= 1e-9 * static_cast<double>(n));
            time_energy += std::norm(x[k]);
            freq_energy += std::norm(got[k]);
        }
        CHECK(std::abs(time_energy - freq_energy / static_cast<double>(n)) <= 1e-9 * time_energy);
    }
    std::vector<std::complex<double>> odd(12);
    CHECK_THROWS_AS(fft(odd), InvalidParams);
}

TEST_CASE("FFT features")
{
    const std::uint32_t n = 64;
    Sample c;
    for (std::uint32_t i = 0; i < n; ++i) c.amplitudes.push_back(std::cos(2 * std::numbers::pi * 4 * i / n));
    auto f = fft_features(c, n, Window::Rectangular);
    REQUIRE(f.values.size() == n / 2);
    auto peak = std::max_element(f.values.begin(), f.values.end()) - f.values.begin();
    CHECK(peak == 4);
    // Naive DFT magnitude of the same frame.
    std::vector<std::complex<double>> x(c.amplitudes.begin(), c.amplitudes.end());
    auto X = oracle::dft(x);
    for (std::uint32_t k = 0; k < n / 2; ++k) CHECK(std::abs(f.values[k] - std::abs(X[k])) <= 1e-9);

    auto z = fft_features(of(std::vector<double>(128, 0.0)), 128);
    for (double v : z.values) CHECK(v == 0.0);
    CHECK_THROWS_AS(fft_features(c, 48), InvalidParams);
    CHECK_THROWS_AS(fft_features(c, 128), InvalidParams);
}

TEST_CASE("minmax features")
{
    CHECK(minmax_features(of({0, 0.5, -1})).values == std::vector<double>{-1, 0.5});
    CHECK(minmax_features(of({0.3, 0.3})).values == std::vector<double>{0.3, 0.3});
    std::mt19937_64 rng(29);
    for (int i = 0; i < 100; ++i) {
        auto v = random_vector(rng, 1 + rng() % 100);
        double lo = v[0], hi = v[0];
        for (double x : v) lo = x < lo ? x : lo, hi = x > hi ? x : hi;
        CHECK(minmax_features(of(v)).values == std::vector<double>{lo, hi});
    }
}

TEST_CASE("feature extraction is deterministic")
{
    auto bytes = signals::clip_wav(2, 3);
    auto a = lpc_features(normalize(load_sample(bytes)), 8, 256);
    auto b = lpc_features(normalize(load_sample(bytes)), 8, 256);
    CHECK(a == b);
    auto fa = fft_features(load_sample(bytes), 256);
    CHECK(fa == fft_features(load_sample(bytes), 256));
}

TEST_CASE("training set train and classify")
{
    TrainingSet ts;
    ts.train(1, fv({0, 0}));
    CHECK(ts.subject_count() == 1);
    CHECK(ts.record_count() == 1);
    CHECK_THROWS_AS(ts.train(2, fv({1, 2}, Algorithm::Fft)), IncompatibleFeatures);
    CHECK_THROWS_AS(ts.train(2, fv({1, 2, 3})), IncompatibleFeatures);
    CHECK_THROWS_AS(ts.train(2, fv({1, 2}, Algorithm::Lpc, 3)), IncompatibleFeatures);
    ts.train(2, fv({10, 10}));
    auto r = ts.classify(fv({1, 1}));
    REQUIRE(r.ranked.size() == 2);
    CHECK(r.ranked[0].subject == 1);
    CHECK(r.ranked[0].distance == doctest::Approx(std::sqrt(2.0)));
    CHECK(ts.classify(fv({10, 10})).ranked[0] == Ranked{2, 0.0});
    CHECK_THROWS_AS(TrainingSet{}.classify(fv({0, 0})), EmptyTrainingSet);
    CHECK_THROWS_AS(ts.classify(fv({0, 0}, Algorithm::MinMax)), IncompatibleFeatures);

    TrainingSet six;
    for (int s = 1; s <= 3; ++s) {
        for (int k = 0; k < 2; ++k) six.train(s, fv({double(s), double(k)}));
    }
    CHECK(six.record_count() == 6);
    CHECK(six.subject_count() == 3);
}

TEST_CASE("classification ranking equals brute force; scale keeps the ranking")
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t dim = 1 + rng() % 6;
        TrainingSet ts;
        std::vector<std::pair<int, std::vector<double>>> all;
        int subjects = 1 + static_cast<int>(rng() % 6);
        for (int s = 1; s <= subjects; ++s) {
            int count = 1 + static_cast<int>(rng() % 4);
            for (int k = 0; k < count; ++k) {
                auto v = random_vector(rng, dim, -5, 5);
                ts.train(s * 7, fv(v, Algorithm::Lpc, static_cast<std::uint32_t>(dim), 64));
                all.push_back({s * 7, v});
            }
        }
        auto q = random_vector(rng, dim, -5, 5);
        std::map<int, double> best;
        for (const auto& [id, v] : all) {
            double acc = 0;
            for (std::size_t i = 0; i < dim; ++i) acc += (v[i] - q[i]) * (v[i] - q[i]);
            double d = std::sqrt(acc);
            auto it = best.find(id);
            if (it == best.end() || d < it->second) best[id] = d;
        }
        auto r = ts.classify(fv(q, Algorithm::Lpc, static_cast<std::uint32_t>(dim), 64));
        REQUIRE(r.ranked.size() == best.size());
        for (std::size_t i = 0; i < r.ranked.size(); ++i) {
            CHECK(r.ranked[i].distance == doctest::Approx(best[r.ranked[i].subject]).epsilon(1e-12));
            if (i) CHECK(r.ranked[i - 1].distance <= r.ranked[i].distance);
        }

        double c = std::uniform_real_distribution<double>(0.01, 100)(rng);
        TrainingSet scaled;
        for (auto [id, v] : all) {
            for (auto& x : v) x *= c;
            scaled.train(id, fv(v, Algorithm::Lpc, static_cast<std::uint32_t>(dim), 64));
        }
        for (auto& x : q) x *= c;
        auto rs = scaled.classify(fv(q, Algorithm::Lpc, static_cast<std::uint32_t>(dim), 64));
        // Exact distance ties may reorder after rounding; compare the argmin distance instead.
        CHECK(best[rs.ranked[0].subject] == doctest::Approx(r.ranked[0].distance).epsilon(1e-9));
    }
}

TEST_CASE("MARFTSv1 layout and persistence")
{
    TrainingSet ts;
    ts.train(-3, FeatureVector{Algorithm::Fft, 0, 4, {1.5, -2.0}});
    auto bytes = ts.serialize();
    snmp::Bytes expect{'M', 'A', 'R', 'F', 'T', 'S', 'v', '1', 2, 0, 0, 0, 0, 0, 0, 0, 4, 0, 0, 0,
                       2,   0,   0,   0,   1,   0,   0,   0,   0xfd, 0xff, 0xff, 0xff, 1, 0, 0, 0};
    for (double d : {1.5, -2.0}) {
        std::uint64_t v;
        std::memcpy(&v, &d, 8);
        for (int i = 0; i < 8; ++i) expect.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    CHECK(bytes == expect);
    CHECK(TrainingSet::parse(bytes) == ts);
    CHECK(TrainingSet::parse(TrainingSet{}.serialize()) == TrainingSet{});
    CHECK_THROWS(TrainingSet::parse(snmp::ByteView(bytes).first(bytes.size() - 1)));
    auto junk = bytes;
    junk.push_back(0);
    CHECK_THROWS(TrainingSet::parse(junk));

    auto dir = std::filesystem::temp_directory_path() / fmt::format("marf-ts-{}", ::getpid());
    std::filesystem::create_directories(dir);
    auto path = dir / "store.bin";
    std::mt19937_64 rng(37);
    TrainingSet big;
    for (int s = 1; s <= 5; ++s) {
        for (int k = 0; k < 3; ++k) big.train(s, fv(random_vector(rng, 8), Algorithm::Lpc, 8, 256));
    }
    big.save(path);
    CHECK(std::filesystem::file_size(path) == big.serialize().size());
    CHECK_FALSE(std::filesystem::exists(dir / "store.bin.tmp"));
    CHECK(TrainingSet::load(path) == big);
    std::filesystem::remove_all(dir);
}
