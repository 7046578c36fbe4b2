#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "scslab/eigenform.hpp"
#include "scslab/fft.hpp"
#include "scslab/transition.hpp"

namespace scslab {

struct SCSQuery {
    double X = 1.0;
    double Y = 0.0;
    double eps_trunc = 1e-6;
    // optional smoothed-h mode: extra weight on each shift h (default sharp cutoff)
    std::function<double(double)> h_weight;
};

// Truncation point of the n-sum: the summand envelope is (m/X)^{k-1} e^{-m/X},
// so the tail is < eps once m/X - (k-1) ln(m/X) exceeds ln(1/eps) with margin;
// solve t = ln(1/eps) + (k+2) ln t by fixed point.
inline std::size_t scs_trunc_length(int k, double X, double eps_trunc) {
    if (!(eps_trunc > 0.0) || !(eps_trunc <= 1e-6))
        throw std::invalid_argument("scs: eps_trunc must lie in (0, 1e-6]");
    double t = 60.0;
    for (int i = 0; i < 80; ++i) t = std::log(1.0 / eps_trunc) + (k + 2) * std::log(t);
    return static_cast<std::size_t>(std::ceil(t * X));
}

namespace scs_detail {

inline void require_len(const Eigenform& f, std::size_t need, const char* who) {
    if (f.N < need)
        throw std::runtime_error(std::string(who) + ": insufficient coefficients, need N >= " +
                                 std::to_string(need) + " (have " + std::to_string(f.N) + ")");
}

inline void check_query(const SCSQuery& q) {
    if (!(q.X >= 1.0)) throw std::invalid_argument("scs: X >= 1 required");
    if (q.Y < 0.0) throw std::invalid_argument("scs: Y >= 0 required");
}

}  // namespace scs_detail

// Corollary 1 LHS: sum_{h<=Y} sum_n lambda(n) lambda(n+h)
// (n(n+h)/X^2)^{(k-1)/2} e^{-(n+h)/X}; anti-overflow split
// A(n) = lambda(n)(n/X)^{(k-1)/2}, B(m) = A(m) e^{-m/X}; Kahan accumulation,
// optionally parallel over h with a fixed-order reduction.
inline double scs_direct(const Eigenform& f, const SCSQuery& q, int threads = 1) {
    scs_detail::check_query(q);
    const std::size_t H = static_cast<std::size_t>(std::floor(q.Y));
    if (H == 0) return 0.0;
    const std::size_t N = scs_trunc_length(f.weight, q.X, q.eps_trunc);
    scs_detail::require_len(f, N, "scs_direct");
    const double p = (f.weight - 1) / 2.0;
    std::vector<double> A(N + 1), B(N + 1);
    for (std::size_t n = 1; n <= N; ++n) {
        A[n] = f.lambda[n] * std::exp(p * std::log(n / q.X));
        B[n] = A[n] * std::exp(-static_cast<double>(n) / q.X);
    }
    std::vector<double> per_h(H + 1, 0.0);
    auto work = [&](std::size_t h0, std::size_t stride) {
        for (std::size_t h = h0; h <= H; h += stride) {
            KahanSum acc;
            for (std::size_t n = 1; n + h <= N; ++n) acc.add(A[n] * B[n + h]);
            per_h[h] = acc.value();
        }
    };
    if (threads > 1) {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(work, t + 1, threads);
        for (auto& t : pool) t.join();
    } else {
        work(1, 1);
    }
    KahanSum total;
    for (std::size_t h = 1; h <= H; ++h)
        total.add(q.h_weight ? per_h[h] * q.h_weight(static_cast<double>(h)) : per_h[h]);
    return total.value();
}

// Same sum as one FFT autocorrelation: with the symmetric split
// As(n) = lambda(n)(n/X)^{(k-1)/2} e^{-n/(2X)} the h-term is
// e^{-h/(2X)} sum_n As(n) As(n+h), identically equal to the direct summand.
inline double scs_fast(const Eigenform& f, const SCSQuery& q) {
    scs_detail::check_query(q);
    const std::size_t H = static_cast<std::size_t>(std::floor(q.Y));
    if (H == 0) return 0.0;
    const std::size_t N = scs_trunc_length(f.weight, q.X, q.eps_trunc);
    scs_detail::require_len(f, N, "scs_fast");
    if (H >= N) throw std::invalid_argument("scs_fast: Y must be below the truncation length");
    const double p = (f.weight - 1) / 2.0;
    std::vector<double> As(N);  // As[i] = value at n = i+1
    for (std::size_t n = 1; n <= N; ++n)
        As[n - 1] = f.lambda[n] * std::exp(p * std::log(n / q.X) - n / (2.0 * q.X));
    const std::vector<double> C = autocorrelation(As);
    KahanSum total;
    for (std::size_t h = 1; h <= H; ++h) {
        const double w = q.h_weight ? q.h_weight(static_cast<double>(h)) : 1.0;
        total.add(C[h] * std::exp(-static_cast<double>(h) / (2.0 * q.X)) * w);
    }
    return total.value();
}

// Corollary 2 LHS: the Corollary 1 structure with the exponential replaced by
// the regularized incomplete-gamma weight Gamma(k-1,(k-1)m/X)/Gamma(k-1).
inline double corollary2_lhs(const Eigenform& f, double X, double Y, int threads = 1) {
    if (!(X >= 1.0) || !(Y >= 0.0)) throw std::invalid_argument("corollary2_lhs: X >= 1, Y >= 0");
    const std::size_t H = static_cast<std::size_t>(std::floor(Y));
    if (H == 0) return 0.0;
    const int k = f.weight;
    // Q(k-1, (k-1)m/X) < 1e-16 once m/X - (k-2) ln(m/X) is large enough
    double t = 60.0;
    for (int i = 0; i < 80; ++i) t = std::log(1e18) + (k + 1) * std::log(t);
    const std::size_t N = static_cast<std::size_t>(std::ceil(t * X / (k - 1)));
    scs_detail::require_len(f, N, "corollary2_lhs");
    const double p = (k - 1) / 2.0;
    std::vector<double> A(N + 1), B(N + 1);
    for (std::size_t n = 1; n <= N; ++n) {
        const double lpn = p * std::log(static_cast<double>(n));
        A[n] = f.lambda[n] * std::exp(lpn);
        B[n] = f.lambda[n] * std::exp(-lpn) * gamma_q(k - 1.0, (k - 1.0) * n / X);
    }
    std::vector<double> per_h(H + 1, 0.0);
    auto work = [&](std::size_t h0, std::size_t stride) {
        for (std::size_t h = h0; h <= H; h += stride) {
            KahanSum acc;
            for (std::size_t n = 1; n + h <= N; ++n) acc.add(A[n] * B[n + h]);
            per_h[h] = acc.value();
        }
    };
    if (threads > 1) {
        std::vector<std::thread> pool;
        for (int tt = 0; tt < threads; ++tt) pool.emplace_back(work, tt + 1, threads);
        for (auto& tt : pool) tt.join();
    } else {
        work(1, 1);
    }
    KahanSum total;
    for (std::size_t h = 1; h <= H; ++h) total.add(per_h[h]);
    return total.value();
}

// Main Theorem LHS S_f(psi, Y): per-m weight w(m) = int psi(y) e^{-4 pi m y} y^{k-2} dy,
// closed form for the canonical kernels, sample-grid trapezoid otherwise.
inline double scs_weighted(const Eigenform& f, const SmoothingKernel& psi, double Y,
                           double eps_trunc = 1e-6, int threads = 1) {
    const std::size_t H = static_cast<std::size_t>(std::floor(Y));
    if (H == 0) return 0.0;
    const int k = f.weight;
    const double fourpi = 4.0 * M_PI;

    // effective exponential scale of the weight, for truncation
    double Xeff = 0.0;
    switch (psi.kind) {
        case SmoothingKernel::Kind::point_mass:
            Xeff = psi.X;
            break;
        case SmoothingKernel::Kind::gamma_cutoff:
            Xeff = psi.X;
            break;
        case SmoothingKernel::Kind::sampled: {
            if (psi.y.front() <= 0.0)
                throw std::invalid_argument("scs_weighted: kernel support reaches y = 0");
            bool allzero = true;
            for (double v : psi.psi) allzero = allzero && v == 0.0;
            if (allzero) return 0.0;
            Xeff = 1.0 / (fourpi * psi.y.front());
            break;
        }
    }
    const std::size_t N = scs_trunc_length(k, Xeff, eps_trunc);
    scs_detail::require_len(f, N, "scs_weighted");

    // w(m), in the unnormalized (n(n+h))^{(k-1)/2} convention
    std::vector<double> w(N + 1, 0.0);
    switch (psi.kind) {
        case SmoothingKernel::Kind::point_mass: {
            const double y0 = 1.0 / (fourpi * psi.X);
            const double ly0 = std::log(y0);
            for (std::size_t m = 1; m <= N; ++m)
                w[m] = std::exp(-static_cast<double>(m) / psi.X + (k - 2.0) * ly0);
            break;
        }
        case SmoothingKernel::Kind::gamma_cutoff: {
            // psi = (4 pi Gamma(k-1))^{-1} 1_{y > (k-1)/(4 pi X)}:
            // w(m) = (4 pi m)^{1-k} Gamma(k-1, (k-1)m/X) / (4 pi Gamma(k-1))
            for (std::size_t m = 1; m <= N; ++m)
                w[m] = std::exp((1.0 - k) * std::log(fourpi * m)) *
                       gamma_q(k - 1.0, (k - 1.0) * m / psi.X) / fourpi;
            break;
        }
        case SmoothingKernel::Kind::sampled: {
            for (std::size_t m = 1; m <= N; ++m) {
                double acc = 0.0;
                for (std::size_t i = 0; i + 1 < psi.y.size(); ++i) {
                    const double f0 = psi.psi[i] * std::exp(-fourpi * m * psi.y[i] +
                                                            (k - 2.0) * std::log(psi.y[i]));
                    const double f1 = psi.psi[i + 1] * std::exp(-fourpi * m * psi.y[i + 1] +
                                                                (k - 2.0) * std::log(psi.y[i + 1]));
                    acc += 0.5 * (f0 + f1) * (psi.y[i + 1] - psi.y[i]);
                }
                w[m] = acc;
            }
            break;
        }
    }

    const double p = (k - 1) / 2.0;
    std::vector<double> A(N + 1), B(N + 1);
    for (std::size_t n = 1; n <= N; ++n) {
        A[n] = f.lambda[n] * std::exp(p * std::log(static_cast<double>(n)));
        B[n] = A[n] * w[n];
    }
    std::vector<double> per_h(H + 1, 0.0);
    auto work = [&](std::size_t h0, std::size_t stride) {
        for (std::size_t h = h0; h <= H; h += stride) {
            KahanSum acc;
            for (std::size_t n = 1; n + h <= N; ++n) acc.add(A[n] * B[n + h]);
            per_h[h] = acc.value();
        }
    };
    if (threads > 1) {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(work, t + 1, threads);
        for (auto& t : pool) t.join();
    } else {
        work(1, 1);
    }
    KahanSum total;
    for (std::size_t h = 1; h <= H; ++h) total.add(per_h[h]);
    return total.value();
}

}  // namespace scslab
