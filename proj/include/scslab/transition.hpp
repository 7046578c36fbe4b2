#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "scslab/eigenform.hpp"
#include "scslab/specfun.hpp"

namespace scslab {

struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double value() const { return s; }
};

struct TransitionSample {
    double alpha = 0.0;
    double value = 0.0;
    double tail_bound = 0.0;
    std::int64_t nterms = 0;
};

namespace transition_detail {

// process-wide W_k evaluator cache keyed by (k, contour parameters)
inline const WkEvaluator& wk_cached(int k, const ContourSpec& spec) {
    using Key = std::tuple<int, double, double, double>;
    static std::map<Key, std::unique_ptr<WkEvaluator>> cache;
    static std::mutex mtx;
    const Key key{k, spec.sigma, spec.step, spec.tmax};
    std::lock_guard<std::mutex> lk(mtx);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<WkEvaluator>(k, spec)).first;
    return *it->second;
}

}  // namespace transition_detail

// c_f(alpha) = (pi^{3/2}/2) alpha sum_n lambda(n)^2 W_k(pi^2 n alpha),
// truncated where the rigorous W-decay tail bound falls below 1e-8.
inline TransitionSample c_f(const Eigenform& f, double alpha, const ContourSpec& spec = {}) {
    if (!(alpha > 0.0)) throw std::domain_error("c_f: alpha > 0 required");
    const WkEvaluator& W = transition_detail::wk_cached(f.weight, spec);
    const double beta = M_PI * M_PI * alpha;
    const double pref = 0.5 * std::pow(M_PI, 1.5) * alpha;
    const double target = 1e-9;  // absolute; invariant needs 1e-8 * max(1,|value|)
    const double want = W.tail_cutoff(beta, target / pref);
    const std::size_t nmax = static_cast<std::size_t>(
        std::min<double>(static_cast<double>(f.N), std::ceil(want)));
    KahanSum acc;
    for (std::size_t n = 1; n <= nmax; ++n) acc.add(f.lambda[n] * f.lambda[n] * W(beta * n));
    const double value = pref * acc.value();
    const double tail = pref * W.lambda_tail_bound(beta, static_cast<double>(nmax));
    if (!(tail < 1e-8 * std::max(1.0, std::fabs(value))))
        throw std::runtime_error("c_f: insufficient coefficients, need N >= " +
                                 std::to_string(static_cast<std::int64_t>(std::ceil(want))) +
                                 " (have " + std::to_string(f.N) + ")");
    return {alpha, value, tail, static_cast<std::int64_t>(nmax)};
}

// ---- L(1, sym^2 f) ----

enum class Sym2Method { dirichlet_smoothed, rankin_slope };

struct Sym2Result {
    double value = 0.0;
    double error = 0.0;
};

namespace transition_detail {

// kappa(y) = (1/2 pi i) int Gamma(s) Gamma(s+k-1) y^{-s} ds, the smoothing
// kernel of the Rankin-Selberg functional equation (the Mellin pair of
// 2 u^{(k-1)/2} K_{k-1}(2 sqrt(u))).
class KappaEvaluator {
  public:
    explicit KappaEvaluator(int k) {
        const double sigma = 1.5, step = 0.05, tmax = 45.0;
        sigma_ = sigma;
        step_ = step;
        const int M = static_cast<int>(std::lround(tmax / step));
        g_.resize(M + 1);
        for (int j = 0; j <= M; ++j) {
            const cplx s(sigma, j * step);
            g_[j] = std::exp(ln_gamma(s) + ln_gamma(s + (k - 1.0))) * (step / (2.0 * M_PI));
        }
        g_[0] *= 0.5;
    }
    double operator()(double y) const {
        const double ly = std::log(y);
        const cplx w = std::polar(1.0, -step_ * ly);
        cplx acc = 0.0, z = 1.0;
        for (std::size_t j = 0; j < g_.size(); ++j) {
            if (j % 256 == 0) z = std::polar(1.0, -(step_ * j) * ly);
            acc += g_[j] * z;
            z *= w;
        }
        return 2.0 * acc.real() * std::exp(-sigma_ * ly);
    }

  private:
    double sigma_ = 1.5, step_ = 0.05;
    std::vector<cplx> g_;
};

// Phi(t) = sum_n c(n) kappa(4 pi^2 n t), c(n) = sum_{d^2 m = n} lambda(m)^2.
inline double phi_sum(const Eigenform& f, const KappaEvaluator& kap, double t, std::size_t nmax) {
    std::vector<double> c(nmax + 1, 0.0);
    for (std::size_t d = 1; d * d <= nmax; ++d)
        for (std::size_t m = 1; m * d * d <= nmax; ++m)
            c[m * d * d] += f.lambda[m] * f.lambda[m];
    KahanSum acc;
    const double base = 4.0 * M_PI * M_PI * t;
    for (std::size_t n = 1; n <= nmax; ++n) acc.add(c[n] * kap(base * n));
    return acc.value();
}

}  // namespace transition_detail

// Smoothed-series evaluation of L(1, sym^2 f): the Dirichlet series of
// L(s, f x f) = zeta(2s) sum lambda(n)^2 n^{-s} smoothed by the exact
// functional-equation kernel kappa, whose Mellin tail correction is the
// reflection Phi(t) = r/t - r + Phi(1/t)/t; then r = Phi(1/2) - 2 Phi(2)
// and L(1, sym^2 f) = 4 pi^2 r / Gamma(k).
inline Sym2Result sym2_L1_dirichlet(const Eigenform& f) {
    const transition_detail::KappaEvaluator kap(f.weight);
    // kappa(u) ~ u^{(2k-3)/4} e^{-2 sqrt(u)}: at u = 2 pi^2 n, n = 400 the
    // envelope is < 1e-20 of Gamma(k) for every supported k
    const std::size_t nmax = std::min<std::size_t>(f.N, 400);
    if (f.N < 400)
        throw std::runtime_error("sym2_L1: need N >= 400 coefficients");
    const double phi_half = transition_detail::phi_sum(f, kap, 0.5, nmax);
    const double phi_two = transition_detail::phi_sum(f, kap, 2.0, nmax);
    const double r = phi_half - 2.0 * phi_two;
    const double L = 4.0 * M_PI * M_PI * r / std::tgamma(static_cast<double>(f.weight));
    return {L, 1e-9 * std::fabs(L) + 1e-12};
}

// Rankin slope: sum_{n<=x} lambda(n)^2 ~ (L / zeta(2)) x, least-squares fit
// through the origin over a dyadic range of x.
inline Sym2Result sym2_L1_rankin(const Eigenform& f) {
    if (f.N < 1024) throw std::runtime_error("sym2_L1: rankin-slope needs N >= 1024");
    std::vector<double> xs, Ss;
    for (std::size_t x = f.N; x >= f.N / 64 && x >= 16; x /= 2) xs.push_back(static_cast<double>(x));
    KahanSum run;
    std::size_t next = xs.size();
    Ss.resize(xs.size());
    for (std::size_t n = 1; n <= static_cast<std::size_t>(xs[0]); ++n) {
        run.add(f.lambda[n] * f.lambda[n]);
        while (next > 0 && n == static_cast<std::size_t>(xs[next - 1])) Ss[--next] = run.value();
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += Ss[i] * xs[i];
        sxx += xs[i] * xs[i];
    }
    const double slope = sxy / sxx;
    double dev = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        dev = std::max(dev, std::fabs(Ss[i] / xs[i] - slope));
    const double z2 = zeta_real(2.0);
    return {z2 * slope, z2 * dev};
}

struct Sym2Checked {
    Sym2Result dirichlet, rankin;
    bool disagree = false;
};

inline Sym2Result sym2_L1(const Eigenform& f, Sym2Method method) {
    return method == Sym2Method::dirichlet_smoothed ? sym2_L1_dirichlet(f) : sym2_L1_rankin(f);
}

inline Sym2Checked sym2_L1_checked(const Eigenform& f) {
    Sym2Checked r{sym2_L1_dirichlet(f), sym2_L1_rankin(f), false};
    r.disagree =
        std::fabs(r.dirichlet.value - r.rankin.value) > r.dirichlet.error + r.rankin.error;
    return r;
}

// Corollary 1 constant Gamma(k) L(1, sym^2 f) / (2 zeta(2))
inline double constant_Ck(const Eigenform& f) {
    return std::tgamma(static_cast<double>(f.weight)) * sym2_L1_dirichlet(f).value /
           (2.0 * zeta_real(2.0));
}

inline constexpr double kThetaKimSarnak = 7.0 / 64.0;

struct RhsResult {
    double value = 0.0;
    double yardstick = 0.0;  // X^{1/2} Y^{(1+theta)/3}
};

inline double residual_yardstick(double X, double Y, double theta = kThetaKimSarnak) {
    return std::sqrt(X) * std::pow(Y, (1.0 + theta) / 3.0);
}

// Corollary 1 RHS main term (c_f(Y^2/X) - C_k) X, plus the error-scale yardstick.
inline RhsResult corollary1_rhs(const Eigenform& f, double X, double Y,
                                const ContourSpec& spec = {}, double theta = kThetaKimSarnak) {
    if (!(X >= 1.0) || !(Y >= 1.0) || !(Y <= X))
        throw std::invalid_argument("corollary1_rhs: hypothesis 1 <= Y <= X violated");
    const double ratio = Y * Y / X;
    const double main = (c_f(f, ratio, spec).value - constant_Ck(f)) * X;
    return {main, residual_yardstick(X, Y, theta)};
}

// ---- cached c_f grid with monotone-cubic (pchip) interpolation ----

class CfGrid {
  public:
    CfGrid(const Eigenform& f, double lo, double hi, std::size_t npts,
           const ContourSpec& spec = {}, int threads = 1) {
        if (npts < 4 || !(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("CfGrid: bad grid");
        u_.resize(npts);
        v_.resize(npts);
        const double lr = std::log(hi / lo);
        for (std::size_t i = 0; i < npts; ++i)
            u_[i] = lo * std::exp(lr * static_cast<double>(i) / (npts - 1));
        auto work = [&](std::size_t i0, std::size_t stride) {
            for (std::size_t i = i0; i < npts; i += stride) v_[i] = c_f(f, u_[i], spec).value;
        };
        if (threads > 1) {
            std::vector<std::thread> pool;
            for (int t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
            for (auto& t : pool) t.join();
        } else {
            work(0, 1);
        }
        build_slopes();
    }

    double lo() const { return u_.front(); }
    double hi() const { return u_.back(); }

    double operator()(double u) const {
        if (u <= u_.front()) return v_.front();
        if (u >= u_.back()) return v_.back();
        std::size_t i = std::upper_bound(u_.begin(), u_.end(), u) - u_.begin() - 1;
        const double h = u_[i + 1] - u_[i], t = (u - u_[i]) / h;
        const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
        const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
        return h00 * v_[i] + h10 * h * m_[i] + h01 * v_[i + 1] + h11 * h * m_[i + 1];
    }

    // integral of interpolated c_f(u)/u^2 over [a, b] within the grid
    double integral_over_u2(double a, double b) const {
        a = std::max(a, u_.front());
        b = std::min(b, u_.back());
        if (!(b > a)) return 0.0;
        // 5-point Gauss-Legendre per grid interval overlap
        static const double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                     0.5384693101056831, 0.9061798459386640};
        static const double gw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                     0.4786286704993665, 0.2369268850561891};
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < u_.size(); ++i) {
            const double s0 = std::max(a, u_[i]), s1 = std::min(b, u_[i + 1]);
            if (!(s1 > s0)) continue;
            const double mid = 0.5 * (s0 + s1), half = 0.5 * (s1 - s0);
            for (int q = 0; q < 5; ++q) {
                const double u = mid + half * gx[q];
                total += gw[q] * half * (*this)(u) / (u * u);
            }
        }
        return total;
    }

  private:
    void build_slopes() {
        const std::size_t n = u_.size();
        std::vector<double> d(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (v_[i + 1] - v_[i]) / (u_[i + 1] - u_[i]);
        m_.assign(n, 0.0);
        m_[0] = d[0];
        m_[n - 1] = d[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] * d[i] <= 0.0) {
                m_[i] = 0.0;
            } else {
                const double w1 = 2.0 * (u_[i + 1] - u_[i]) + (u_[i] - u_[i - 1]);
                const double w2 = (u_[i + 1] - u_[i]) + 2.0 * (u_[i] - u_[i - 1]);
                m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
    }

    std::vector<double> u_, v_, m_;
};

namespace transition_detail {

// pointwise far-field bound on |c_f(u)| from the W_k sigma-ladder
inline double cf_far_bound(const Eigenform& f, double u, const ContourSpec& spec) {
    const WkEvaluator& W = wk_cached(f.weight, spec);
    const double beta = M_PI * M_PI * u;
    return 0.5 * std::pow(M_PI, 1.5) * u *
           (4.0 * W.decay_bound(beta) + W.lambda_tail_bound(beta, 1.0));
}

}  // namespace transition_detail

// Corollary 2 RHS: -L/(2 zeta(2)) X + (Y^2/Gamma(k-1)) int_{(k-1)Y^2/X}^inf c_f(u)/u^2 du.
inline double corollary2_rhs(const Eigenform& f, double X, double Y,
                             const ContourSpec& spec = {}, int threads = 1) {
    if (!(X >= 1.0) || !(Y >= 1.0)) throw std::invalid_argument("corollary2_rhs: X, Y >= 1");
    const int k = f.weight;
    const double L = sym2_L1_dirichlet(f).value;
    const double u0 = (k - 1.0) * Y * Y / X;
    const double uhi = 4000.0;
    double integral = 0.0;
    if (u0 < uhi) {
        const std::size_t npts =
            std::max<std::size_t>(50, static_cast<std::size_t>(40.0 * std::log10(uhi / u0)));
        CfGrid grid(f, u0 * 0.999, uhi, npts, spec, threads);
        integral = grid.integral_over_u2(u0, uhi);
    }
    // dropped tail beyond uhi: |c_f| decreasing there, so it is <= bound(uhi)/uhi
    const double tail =
        Y * Y / std::tgamma(k - 1.0) * transition_detail::cf_far_bound(f, uhi, spec) / uhi;
    if (!(tail < 1e-9 * X))
        throw std::runtime_error("corollary2_rhs: integral tail bound not negligible");
    return -L / (2.0 * zeta_real(2.0)) * X +
           Y * Y / std::tgamma(k - 1.0) * integral;
}

// ---- Main Theorem ----

struct SmoothingKernel {
    enum class Kind { point_mass, gamma_cutoff, sampled };
    Kind kind = Kind::point_mass;
    double X = 1.0;                // scale for the two canonical kernels
    std::vector<double> y, psi;    // sampled kernels

    static SmoothingKernel point_mass(double X) { return {Kind::point_mass, X, {}, {}}; }
    static SmoothingKernel gamma_cutoff(double X) { return {Kind::gamma_cutoff, X, {}, {}}; }
    static SmoothingKernel sampled(std::vector<double> y, std::vector<double> psi) {
        if (y.size() != psi.size() || y.size() < 2)
            throw std::invalid_argument("SmoothingKernel: bad sample grid");
        return {Kind::sampled, 0.0, std::move(y), std::move(psi)};
    }
};

// (4 pi)^{-k} int_0^inf (c_f(4 pi y Y^2) - C_k) psi(y) / y^2 dy.
// point-mass at y0 = 1/(4 pi X) reduces analytically to
// (4 pi)^{2-k} X * corollary1_rhs; gamma-cutoff reduces to (4 pi)^{-k} * corollary2_rhs.
inline double main_theorem_rhs(const Eigenform& f, const SmoothingKernel& psi, double Y,
                               const ContourSpec& spec = {}, int threads = 1) {
    const int k = f.weight;
    const double fourpi = 4.0 * M_PI;
    switch (psi.kind) {
        case SmoothingKernel::Kind::point_mass: {
            const double X = psi.X;
            const double cf = c_f(f, Y * Y / X, spec).value;
            return std::pow(fourpi, -k) * (cf - constant_Ck(f)) * (fourpi * X) * (fourpi * X);
        }
        case SmoothingKernel::Kind::gamma_cutoff:
            return std::pow(fourpi, -k) * corollary2_rhs(f, psi.X, Y, spec, threads);
        case SmoothingKernel::Kind::sampled: {
            if (psi.y.front() <= 0.0)
                throw std::invalid_argument(
                    "main_theorem_rhs: sampled kernel must be supported away from y = 0");
            bool allzero = true;
            for (double p : psi.psi) allzero = allzero && p == 0.0;
            if (allzero) return 0.0;
            const double ck = constant_Ck(f);
            // composite trapezoid on the sample grid (kernel is given by samples)
            std::vector<double> integrand(psi.y.size());
            for (std::size_t i = 0; i < psi.y.size(); ++i) {
                const double u = fourpi * psi.y[i] * Y * Y;
                integrand[i] =
                    (c_f(f, u, spec).value - ck) * psi.psi[i] / (psi.y[i] * psi.y[i]);
            }
            double total = 0.0;
            for (std::size_t i = 0; i + 1 < psi.y.size(); ++i)
                total += 0.5 * (integrand[i] + integrand[i + 1]) * (psi.y[i + 1] - psi.y[i]);
            return std::pow(fourpi, -k) * total;
        }
    }
    throw std::logic_error("main_theorem_rhs: unreachable");
}

}  // namespace scslab
