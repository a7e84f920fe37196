#include "marf/pipeline/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>

#include <fmt/format.h>

namespace marf::pipeline {

namespace {

std::uint32_t le32(snmp::ByteView b, std::size_t at)
{
    return std::uint32_t{b[at]} | std::uint32_t{b[at + 1]} << 8 | std::uint32_t{b[at + 2]} << 16 |
           std::uint32_t{b[at + 3]} << 24;
}

std::uint16_t le16(snmp::ByteView b, std::size_t at)
{
    return static_cast<std::uint16_t>(b[at] | b[at + 1] << 8);
}

void put32(snmp::Bytes& out, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put16(snmp::Bytes& out, std::uint16_t v)
{
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

bool is_pow2(std::uint32_t n) { return n && !(n & (n - 1)); }

}  // namespace

Sample load_sample(snmp::ByteView b, int declared_format)
{
    if (declared_format != kFormatWavPcm16Mono) {
        throw UnsupportedFormat(fmt::format("sample format {} is not supported", declared_format));
    }
    if (b.size() < 12) throw MalformedWav("truncated RIFF header");
    if (std::memcmp(b.data(), "RIFF", 4) != 0 || std::memcmp(b.data() + 8, "WAVE", 4) != 0) {
        throw MalformedWav("missing RIFF/WAVE signature");
    }
    bool have_fmt = false;
    Sample s;
    std::size_t pos = 12;
    while (pos + 8 <= b.size()) {
        auto id = std::string(reinterpret_cast<const char*>(b.data() + pos), 4);
        std::size_t len = le32(b, pos + 4);
        std::size_t body = pos + 8;
        if (len > b.size() - body) throw MalformedWav(fmt::format("chunk '{}' runs past end of file", id));
        if (id == "fmt ") {
            if (len < 16) throw MalformedWav("fmt chunk too short");
            auto audio_format = le16(b, body);
            auto channels = le16(b, body + 2);
            s.sample_rate_hz = static_cast<int>(le32(b, body + 4));
            auto bits = le16(b, body + 14);
            if (audio_format != 1) throw UnsupportedFormat(fmt::format("WAVE encoding {} is not PCM", audio_format));
            if (channels != 1) throw UnsupportedFormat(fmt::format("{} channels; only mono is supported", channels));
            if (bits != 16) throw UnsupportedFormat(fmt::format("{}-bit samples; only 16-bit is supported", bits));
            have_fmt = true;
        } else if (id == "data") {
            if (!have_fmt) throw MalformedWav("data chunk before fmt chunk");
            if (len % 2) throw MalformedWav("odd data chunk length");
            s.amplitudes.reserve(len / 2);
            for (std::size_t i = 0; i < len; i += 2) {
                auto v = static_cast<std::int16_t>(le16(b, body + i));
                s.amplitudes.push_back(v / 32768.0);
            }
            if (s.amplitudes.empty()) throw MalformedWav("no samples");
            s.format = declared_format;
            return s;
        }
        pos = body + len + (len & 1);
    }
    throw MalformedWav(have_fmt ? "missing data chunk" : "missing fmt chunk");
}

snmp::Bytes encode_wav(const Sample& s)
{
    snmp::Bytes out;
    auto data_len = static_cast<std::uint32_t>(s.amplitudes.size() * 2);
    out.insert(out.end(), {'R', 'I', 'F', 'F'});
    put32(out, 36 + data_len);
    out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
    put32(out, 16);
    put16(out, 1);
    put16(out, 1);
    put32(out, static_cast<std::uint32_t>(s.sample_rate_hz));
    put32(out, static_cast<std::uint32_t>(s.sample_rate_hz) * 2);
    put16(out, 2);
    put16(out, 16);
    out.insert(out.end(), {'d', 'a', 't', 'a'});
    put32(out, data_len);
    for (double a : s.amplitudes) {
        auto v = static_cast<std::int32_t>(std::lround(a * 32768.0));
        put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(std::clamp(v, -32768, 32767))));
    }
    return out;
}

Sample normalize(const Sample& s, std::size_t start_index)
{
    if (s.amplitudes.empty()) throw DegenerateSignal("cannot normalize an empty sample");
    if (start_index >= s.amplitudes.size()) {
        throw InvalidParams(fmt::format("start index {} beyond sample of {}", start_index, s.amplitudes.size()));
    }
    double peak = 0;
    for (std::size_t i = start_index; i < s.amplitudes.size(); ++i) peak = std::max(peak, std::abs(s.amplitudes[i]));
    if (peak == 0) throw DegenerateSignal("cannot normalize a silent sample");
    Sample out = s;
    for (std::size_t i = start_index; i < out.amplitudes.size(); ++i) out.amplitudes[i] /= peak;
    return out;
}

SilenceResult remove_silence(const Sample& s, double threshold)
{
    if (!(threshold >= 0)) throw InvalidParams("silence threshold must be non-negative");
    SilenceResult r;
    r.sample = s;
    r.sample.amplitudes.clear();
    for (double a : s.amplitudes) {
        if (std::abs(a) < threshold) {
            ++r.removed;
        } else {
            r.sample.amplitudes.push_back(a);
        }
    }
    return r;
}

Sample remove_noise(const Sample& s)
{
    Sample out = s;
    const auto& x = s.amplitudes;
    auto n = x.size();
    if (n < 2) return out;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t lo = i == 0 ? 0 : i - 1;
        std::size_t hi = std::min(n - 1, i + 1);
        double sum = 0;
        for (std::size_t k = lo; k <= hi; ++k) sum += x[k];
        out.amplitudes[i] = sum / static_cast<double>(hi - lo + 1);
    }
    return out;
}

std::vector<double> window_coefficients(Window w, std::size_t n)
{
    std::vector<double> c(n, 1.0);
    if (w == Window::Hamming && n > 1) {
        for (std::size_t i = 0; i < n; ++i) {
            c[i] = 0.54 - 0.46 * std::cos(2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1));
        }
    }
    return c;
}

std::string_view to_string(Algorithm a)
{
    switch (a) {
    case Algorithm::Lpc: return "lpc";
    case Algorithm::Fft: return "fft";
    case Algorithm::MinMax: return "minmax";
    }
    return "?";
}

std::vector<double> autocorrelation(std::span<const double> x, std::size_t lags)
{
    std::vector<double> r(lags + 1, 0.0);
    for (std::size_t k = 0; k <= lags && k < x.size(); ++k) {
        double acc = 0;
        for (std::size_t n = k; n < x.size(); ++n) acc += x[n] * x[n - k];
        r[k] = acc;
    }
    return r;
}

std::vector<double> levinson_durbin(std::span<const double> r, std::size_t p)
{
    if (r.size() < p + 1) throw InvalidParams("autocorrelation shorter than the model order");
    if (r[0] == 0) throw DegenerateSignal("zero-energy signal");
    std::vector<double> a(p + 1, 0.0), prev(p + 1, 0.0);
    double err = r[0];
    for (std::size_t i = 1; i <= p; ++i) {
        if (err <= 0) break;  // perfectly predicted; higher-order terms stay zero
        double acc = r[i];
        for (std::size_t j = 1; j < i; ++j) acc -= a[j] * r[i - j];
        double k = acc / err;
        prev = a;
        a[i] = k;
        for (std::size_t j = 1; j < i; ++j) a[j] = prev[j] - k * prev[i - j];
        err *= 1 - k * k;
    }
    return {a.begin() + 1, a.end()};
}

FeatureVector lpc_features(const Sample& s, std::uint32_t poles, std::uint32_t window_len, Window window)
{
    if (poles < 1 || poles >= window_len) {
        throw InvalidParams(fmt::format("need 1 <= iPoles < iWindowLen, got {} and {}", poles, window_len));
    }
    if (window_len > s.amplitudes.size()) {
        throw InvalidParams(fmt::format("iWindowLen {} exceeds sample length {}", window_len, s.amplitudes.size()));
    }
    auto w = window_coefficients(window, window_len);
    std::vector<double> frame(window_len);
    for (std::size_t i = 0; i < window_len; ++i) frame[i] = s.amplitudes[i] * w[i];
    auto r = autocorrelation(frame, poles);
    FeatureVector fv;
    fv.algorithm = Algorithm::Lpc;
    fv.poles = poles;
    fv.window_len = window_len;
    fv.values = levinson_durbin(r, poles);
    return fv;
}

void fft(std::vector<std::complex<double>>& a)
{
    auto n = a.size();
    if (!is_pow2(static_cast<std::uint32_t>(n)) || n > (1u << 30)) throw InvalidParams("FFT size must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = -2 * std::numbers::pi / static_cast<double>(len);
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                // Twiddles computed directly rather than by repeated multiplication, to keep error at rounding level.
                std::complex<double> w = std::polar(1.0, ang * static_cast<double>(k));
                auto u = a[i + k];
                auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

FeatureVector fft_features(const Sample& s, std::uint32_t window_len, Window window)
{
    if (!is_pow2(window_len) || window_len < 2) {
        throw InvalidParams(fmt::format("iWindowLen {} is not a power of two", window_len));
    }
    if (window_len > s.amplitudes.size()) {
        throw InvalidParams(fmt::format("iWindowLen {} exceeds sample length {}", window_len, s.amplitudes.size()));
    }
    auto w = window_coefficients(window, window_len);
    std::vector<std::complex<double>> data(window_len);
    for (std::size_t i = 0; i < window_len; ++i) data[i] = s.amplitudes[i] * w[i];
    fft(data);
    FeatureVector fv;
    fv.algorithm = Algorithm::Fft;
    fv.window_len = window_len;
    fv.values.resize(window_len / 2);
    for (std::size_t i = 0; i < window_len / 2; ++i) fv.values[i] = std::abs(data[i]);
    return fv;
}

FeatureVector minmax_features(const Sample& s)
{
    if (s.amplitudes.empty()) throw DegenerateSignal("empty sample");
    auto [lo, hi] = std::minmax_element(s.amplitudes.begin(), s.amplitudes.end());
    FeatureVector fv;
    fv.algorithm = Algorithm::MinMax;
    fv.values = {*lo, *hi};
    return fv;
}

}  // namespace marf::pipeline
