#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

namespace scslab {

// Jacobi symbol (m/n) for odd n >= 1, binary reciprocity algorithm.
inline int jacobi(std::uint64_t m, std::uint64_t n) {
    if (n % 2 == 0) throw std::invalid_argument("jacobi: n must be odd");
    m %= n;
    int t = 1;
    while (m != 0) {
        while (m % 2 == 0) {
            m >>= 1;
            const std::uint64_t r = n & 7;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(m, n);
        if ((m & 3) == 3 && (n & 3) == 3) t = -t;
        m %= n;
    }
    return n == 1 ? t : 0;
}

struct CfsQuery {
    std::uint64_t X = 1, Y = 1;
    int kmax = 10000;
    double quad_tol = 1e-10;
};

// S(X,Y) = sum over odd m <= X, odd n <= Y of (m/n); exact, parallel over m
// with fixed-order reduction of integer partials.
inline std::int64_t cfs_sum(const CfsQuery& q, int threads = 1) {
    const std::uint64_t X = q.X, Y = q.Y;
    const std::size_t blocks = threads > 1 ? 64 : 1;
    std::vector<std::int64_t> partial(blocks, 0);
    auto work = [&](std::size_t b0, std::size_t stride) {
        for (std::size_t b = b0; b < blocks; b += stride) {
            const std::uint64_t lo = 1 + (X / blocks) * b;
            const std::uint64_t hi = b + 1 == blocks ? X : (X / blocks) * (b + 1);
            std::int64_t acc = 0;
            for (std::uint64_t m = lo | 1; m <= hi; m += 2)
                for (std::uint64_t n = 1; n <= Y; n += 2) acc += jacobi(m, n);
            partial[b] = acc;
        }
    };
    if (threads > 1) {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
        for (auto& t : pool) t.join();
    } else {
        work(0, 1);
    }
    std::int64_t total = 0;
    for (std::int64_t p : partial) total += p;
    return total;
}

// ---- C(alpha) ----

namespace cfs_detail {

// Gauss-Laguerre nodes/weights by Newton iteration on the recurrence.
struct GaussLaguerre {
    std::vector<double> x, w;
    explicit GaussLaguerre(int n) : x(n), w(n) {
        double z = 0.0;
        for (int i = 0; i < n; ++i) {
            if (i == 0)
                z = 3.0 / (1.0 + 2.4 * n);
            else if (i == 1)
                z += 15.0 / (1.0 + 2.5 * n);
            else
                z += (1.0 + 2.55 * (i - 1)) / (1.9 * (i - 1)) * (z - x[i - 2]);
            for (int it = 0; it < 100; ++it) {
                double p1 = 1.0, p2 = 0.0;
                for (int j = 1; j <= n; ++j) {
                    const double p3 = p2;
                    p2 = p1;
                    p1 = ((2 * j - 1 - z) * p2 - (j - 1) * p3) / j;
                }
                const double pp = n * (p1 - p2) / z;
                const double z1 = z;
                z = z1 - p1 / pp;
                if (std::fabs(z - z1) < 1e-15 * std::max(1.0, z)) break;
            }
            x[i] = z;
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n + 1; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2 * j - 1 - z) * p2 - (j - 1) * p3) / j;
            }
            // w_i = x_i / ((n+1) L_{n+1}(x_i))^2
            w[i] = z / ((n + 1.0) * (n + 1.0) * p1 * p1);
        }
    }
};

inline const GaussLaguerre& gl80() {
    static const GaussLaguerre g(80);
    return g;
}

inline constexpr double kNu = 2.5;       // the integrals are int u^{-5/2} trig(w u) du
inline constexpr double kSeriesEdge = 8.0;

// J(z) = int_z^inf t^{-5/2} e^{it} dt.
// z >= z0: rotate the contour, J = i e^{iz} int_0^inf (z+iy)^{-5/2} e^{-y} dy
// (Gauss-Laguerre); below z0 a Taylor series on [z, z0] plus J(z0).
inline std::complex<double> j_tail(double z) {
    const auto& gl = gl80();
    std::complex<double> v = 0.0;
    for (std::size_t i = 0; i < gl.x.size(); ++i)
        v += gl.w[i] * std::pow(std::complex<double>(z, gl.x[i]), -kNu);
    return std::complex<double>(0.0, 1.0) * std::polar(1.0, z) * v;
}

inline std::complex<double> j_integral(double z) {
    if (z >= kSeriesEdge) return j_tail(z);
    // int_z^{z0} t^{-5/2} e^{it} dt = sum_j i^j/j! (z0^{j-3/2} - z^{j-3/2})/(j-3/2)
    std::complex<double> s = 0.0, ipow = 1.0;
    double fact = 1.0;
    const double lz = std::log(z), lz0 = std::log(kSeriesEdge);
    for (int j = 0; j < 120; ++j) {
        const double e = j - kNu + 1.0;
        const double term = (std::exp(e * lz0) - std::exp(e * lz)) / e;
        s += ipow / fact * term;
        ipow *= std::complex<double>(0.0, 1.0);
        fact *= j + 1;
        if (std::exp((j + 1) * lz0) / fact < 1e-18) break;
    }
    return s + j_tail(kSeriesEdge);
}

// int_a^inf u^{-5/2} cos(w u) du and the sine companion
inline double osc_cos(double a, double w) {
    return std::pow(w, 1.5) * j_integral(w * a).real();
}
inline double osc_sin(double a, double w) {
    return std::pow(w, 1.5) * j_integral(w * a).imag();
}

}  // namespace cfs_detail

struct CAlphaResult {
    double value = 0.0;        // first (theorem) form
    double alternate = 0.0;    // second form
    bool disagree = false;     // beyond tolerance
};

// First form: C(a) = sqrt(a) + (1/2pi) sum_k k^{-2} int_0^a sqrt(y)
// (1 - cos(2 pi k^2/y) + sin(2 pi k^2/y)) dy; substituting u = 1/y turns each
// trig piece into int_{1/a}^inf u^{-5/2} trig(2 pi k^2 u) du.
// Second form: C(a) = a + a^{3/2} (2/pi) sum_k k^{-2} int_a^inf u^{-5/2} sin(pi k^2 u / 2) du.
inline CAlphaResult C_alpha(double alpha, const CfsQuery& q = {}) {
    using namespace cfs_detail;
    if (alpha < 0.0) throw std::domain_error("C_alpha: alpha >= 0 required");
    if (q.kmax < 10) throw std::invalid_argument("C_alpha: kmax >= 10 required");
    if (alpha == 0.0) return {0.0, 0.0, false};

    double form1 = std::sqrt(alpha) + M_PI / 18.0 * std::pow(alpha, 1.5);
    const double inva = 1.0 / alpha;
    for (int kk = 1; kk <= q.kmax; ++kk) {
        const double w = 2.0 * M_PI * kk * kk;
        form1 += (-osc_cos(inva, w) + osc_sin(inva, w)) / (2.0 * M_PI * kk * kk);
        // |J(wa)| <= (w/alpha... )^{-3/2}: envelope of the remaining k-tail
        if (std::pow(alpha, 2.5) / (2.0 * M_PI * w * kk * kk) <
                q.quad_tol * std::max(1.0, form1) &&
            kk > 4)
            break;
    }

    double tot = 0.0;
    for (int kk = 1; kk <= q.kmax; ++kk) {
        const double w = M_PI * kk * kk / 2.0;
        tot += osc_sin(alpha, w) / (kk * kk);
        if (1.0 / (w * kk * kk * std::pow(alpha, 2.5)) < q.quad_tol && kk > 4) break;
    }
    const double form2 = alpha + std::pow(alpha, 1.5) * 2.0 / M_PI * tot;

    CAlphaResult r{form1, form2, false};
    r.disagree = std::fabs(form1 - form2) > 1e-6 * std::max(1.0, std::fabs(form1));
    return r;
}

struct CfsVerification {
    std::uint64_t X = 0, Y = 0;
    double alpha = 0.0;
    std::int64_t S = 0;
    double prediction = 0.0;
    double residual = 0.0;
    double error_scale = 0.0;       // (X Y^{7/16} + Y X^{7/16}) log XY
    double normalized_residual = 0.0;
};

// S(X,Y) vs (2/pi^2) C(Y/X) X^{3/2} with the theorem's error scale.
inline CfsVerification cfs_verify(const CfsQuery& q, int threads = 1) {
    CfsVerification v;
    v.X = q.X;
    v.Y = q.Y;
    v.alpha = static_cast<double>(q.Y) / static_cast<double>(q.X);
    v.S = cfs_sum(q, threads);
    v.prediction = 2.0 / (M_PI * M_PI) * C_alpha(v.alpha, q).value *
                   std::pow(static_cast<double>(q.X), 1.5);
    v.residual = static_cast<double>(v.S) - v.prediction;
    const double X = static_cast<double>(q.X), Y = static_cast<double>(q.Y);
    v.error_scale = (X * std::pow(Y, 7.0 / 16.0) + Y * std::pow(X, 7.0 / 16.0)) * std::log(X * Y);
    v.normalized_residual = v.residual / v.error_scale;
    return v;
}

}  // namespace scslab
