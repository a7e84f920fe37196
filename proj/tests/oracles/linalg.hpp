#pragma once

// Independent numerical oracles: dense Gaussian elimination and a naive DFT.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

/// Solves A x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> solve(std::vector<std::vector<double>> a, std::vector<double> b)
{
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        }
        if (a[piv][col] == 0) throw std::runtime_error("singular system");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t c = i + 1; c < n; ++c) acc -= a[i][c] * x[c];
        x[i] = acc / a[i][i];
    }
    return x;
}

/// Predictor coefficients from the symmetric Toeplitz normal equations R a = r[1..p].
inline std::vector<double> toeplitz_lpc(const std::vector<double>& r, std::size_t p)
{
    std::vector<std::vector<double>> m(p, std::vector<double>(p));
    std::vector<double> rhs(p);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) m[i][j] = r[i > j ? i - j : j - i];
        rhs[i] = r[i + 1];
    }
    return solve(m, rhs);
}

inline std::vector<double> autocorr(const std::vector<double>& x, std::size_t lags)
{
    std::vector<double> r(lags + 1, 0.0);
    for (std::size_t k = 0; k <= lags; ++k) {
        for (std::size_t n = k; n < x.size(); ++n) r[k] += x[n] * x[n - k];
    }
    return r;
}

inline std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x)
{
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc = 0;
        for (std::size_t t = 0; t < n; ++t) {
            double ang = -2 * std::numbers::pi * static_cast<double>((k * t) % n) / static_cast<double>(n);
            acc += x[t] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

}  // namespace oracle
