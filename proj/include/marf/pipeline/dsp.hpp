#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "marf/pipeline/errors.hpp"
#include "marf/snmp/ber.hpp"

namespace marf::pipeline {

inline constexpr int kFormatWavPcm16Mono = 1;

struct Sample {
    int format = kFormatWavPcm16Mono;
    int sample_rate_hz = 8000;
    std::vector<double> amplitudes;
    friend bool operator==(const Sample&, const Sample&) = default;
};

/// Parses RIFF/WAVE PCM 16-bit mono; amplitudes are scaled by 1/32768.
Sample load_sample(snmp::ByteView bytes, int declared_format = kFormatWavPcm16Mono);
/// Writes RIFF/WAVE PCM 16-bit mono, clamping and rounding amplitudes.
snmp::Bytes encode_wav(const Sample& s);

/// Scales samples from `start_index` on so their peak magnitude is 1.
Sample normalize(const Sample& s, std::size_t start_index = 0);

struct SilenceResult {
    Sample sample;
    std::size_t removed = 0;
};
/// Drops samples whose magnitude is strictly below `threshold`.
SilenceResult remove_silence(const Sample& s, double threshold);

/// Moving average over a window of 3; the two ends average what they have.
Sample remove_noise(const Sample& s);

enum class Window { Hamming, Rectangular };
std::vector<double> window_coefficients(Window w, std::size_t n);

enum class Algorithm : std::uint8_t { Lpc = 1, Fft = 2, MinMax = 3 };
std::string_view to_string(Algorithm a);

struct FeatureVector {
    Algorithm algorithm = Algorithm::Lpc;
    std::uint32_t poles = 0;
    std::uint32_t window_len = 0;
    std::vector<double> values;
    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Biased autocorrelation r[0..lags].
std::vector<double> autocorrelation(std::span<const double> x, std::size_t lags);

/// Solves the order-p normal equations for predictor coefficients a[1..p]
/// with x[n] ~ sum a_k x[n-k]. Throws DegenerateSignal when r[0] is zero.
std::vector<double> levinson_durbin(std::span<const double> r, std::size_t p);

FeatureVector lpc_features(const Sample& s, std::uint32_t poles, std::uint32_t window_len,
                           Window window = Window::Hamming);

/// In-place radix-2 FFT. Size must be a power of two.
void fft(std::vector<std::complex<double>>& data);

FeatureVector fft_features(const Sample& s, std::uint32_t window_len, Window window = Window::Hamming);

FeatureVector minmax_features(const Sample& s);

}  // namespace marf::pipeline
