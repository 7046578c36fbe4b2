#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

namespace scslab {

using cplx = std::complex<double>;

// ---- complex log-gamma (Lanczos, g = 607/128, 15 terms; reflection for Re < 1/2) ----

namespace specfun_detail {

inline constexpr double kLanczosG = 4.7421875;  // 607/128
inline constexpr double kLanczos[15] = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4, 0.15808870322491248884e-3,
    -0.21026444172410488319e-3, 0.21743961811521264320e-3, -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4, 0.36899182659531622704e-5,
};

// log(sin(pi z)) stable for large |Im z|, principal-ish branch adequate for
// exp() consumers and for ln_gamma continuity along vertical lines.
inline cplx log_sin_pi(cplx z) {
    const cplx ipz = cplx(0.0, M_PI) * z;
    if (z.imag() > 0) {
        // sin(pi z) = -e^{-i pi z}/(2i) (1 - e^{2 i pi z})
        return -ipz + std::log(1.0 - std::exp(2.0 * ipz)) - std::log(cplx(0.0, -2.0));
    }
    return ipz + std::log(1.0 - std::exp(-2.0 * ipz)) - std::log(cplx(0.0, 2.0));
}

}  // namespace specfun_detail

inline cplx ln_gamma(cplx z) {
    using namespace specfun_detail;
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        throw std::domain_error("ln_gamma: pole at nonpositive integer");
    if (z.real() < 0.5)
        return std::log(cplx(M_PI)) - log_sin_pi(z) - ln_gamma(1.0 - z);
    cplx a = kLanczos[0];
    for (int i = 1; i < 15; ++i) a += kLanczos[i] / (z + cplx(i));
    const cplx t = z + (kLanczosG + 0.5);
    return 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t + std::log(a) - std::log(z);
}

// sign of Gamma(x) for real non-pole x
inline int gamma_sign(double x) {
    if (x > 0) return 1;
    return static_cast<long long>(std::floor(-x)) % 2 == 0 ? -1 : 1;
}

// ---- Riemann zeta on the real line s > 1 (Euler-Maclaurin) ----

inline double zeta_real(double s) {
    if (!(s > 1.0)) throw std::domain_error("zeta_real: requires s > 1");
    static constexpr double B[10] = {
        1.0 / 6,      -1.0 / 30,     1.0 / 42,      -1.0 / 30,      5.0 / 66,
        -691.0 / 2730, 7.0 / 6,      -3617.0 / 510, 43867.0 / 798, -174611.0 / 330,
    };
    const int M = 20;
    double sum = 0.0;
    for (int n = 1; n <= M; ++n) sum += std::pow(n, -s);
    sum += std::pow(M, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(M, -s);
    double poch = s;          // s(s+1)...(s+2j-2)
    double fact = 2.0;        // (2j)!
    double mpow = std::pow(M, -s - 1.0);
    for (int j = 1; j <= 10; ++j) {
        sum += B[j - 1] / fact * poch * mpow;
        poch *= (s + 2 * j - 1) * (s + 2 * j);
        fact *= (2 * j + 1) * (2 * j + 2);
        mpow /= M * M;
    }
    return sum;
}

// ---- upper incomplete gamma ----

namespace specfun_detail {

// regularized lower P(s,x) by series, x < s+1
inline double gamma_p_series(double s, double x) {
    double ap = s, sum = 1.0 / s, del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// regularized upper Q(s,x) by continued fraction (modified Lentz), x >= s+1
inline double gamma_q_cf(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
}

}  // namespace specfun_detail

// regularized Q(s,x) = Gamma(s,x)/Gamma(s)
inline double gamma_q(double s, double x) {
    if (!(s > 0.0) || x < 0.0) throw std::domain_error("gamma_q: requires s > 0, x >= 0");
    if (x == 0.0) return 1.0;
    if (x < s + 1.0) return 1.0 - specfun_detail::gamma_p_series(s, x);
    return specfun_detail::gamma_q_cf(s, x);
}

inline double upper_incomplete_gamma(double s, double x) {
    return gamma_q(s, x) * std::tgamma(s);
}

// ---- vertical-line contour quadrature ----

struct ContourSpec {
    double sigma = 1.5;
    double step = 0.05;
    double tmax = 60.0;
};

struct QuadResult {
    cplx value;          // (1/2 pi i) integral over the vertical line
    double error;        // step-halving estimate
};

// Trapezoid rule for (1/2 pi i) int_{(sigma)} f(s) ds over t in [-tmax, tmax].
template <class F>
QuadResult contour_quadrature(F&& f, const ContourSpec& spec) {
    if (!(spec.step > 0.0) || !(spec.tmax > 0.0))
        throw std::invalid_argument("contour_quadrature: step, tmax must be positive");
    const int M = static_cast<int>(std::lround(spec.tmax / spec.step));
    std::vector<cplx> vals(2 * M + 1);
    double maxmag = 0.0;
    for (int j = -M; j <= M; ++j) {
        vals[j + M] = f(cplx(spec.sigma, j * spec.step));
        maxmag = std::max(maxmag, std::abs(vals[j + M]));
    }
    const double head = std::max(std::abs(vals[2 * M]), std::abs(vals[0]));
    const double mid = std::max(std::abs(vals[M + M / 2]), std::abs(vals[M / 2]));
    if (maxmag > 0.0 && head > 1e-8 * maxmag && head > mid)
        throw std::runtime_error("contour_quadrature: integrand does not decay on the line");
    cplx fine = 0.5 * (vals[0] + vals[2 * M]);
    for (int j = 1; j < 2 * M; ++j) fine += vals[j];
    cplx coarse = 0.5 * (vals[0] + vals[2 * M]);
    for (int j = 2; j < 2 * M; j += 2) coarse += vals[j];
    const cplx v = fine * (spec.step / (2.0 * M_PI));
    const cplx v2 = coarse * (2.0 * spec.step / (2.0 * M_PI));
    return {v, std::abs(v - v2)};
}

// ---- W_k: inverse-Mellin weight of the shifted convolution main term ----
//
// W_k(x) = (1/2 pi i) int_{(sigma)} Gamma(s+k-1) Gamma(s-1/2) / Gamma(2-s) x^{-s} ds.
// Node products are x-independent, so the line is discretized once; conjugate
// symmetry folds the integral onto t >= 0. Also carries rigorous tail
// constants C(sigma') = (1/2 pi) int |...| dt on right-shifted lines, giving
// |W_k(x)| <= C(sigma') x^{-sigma'} for the superpolynomial-decay bounds.
class WkEvaluator {
  public:
    explicit WkEvaluator(int k, ContourSpec spec = {}) : k_(k), spec_(spec) {
        if (!(spec.sigma > 1.0))
            throw std::invalid_argument("WkEvaluator: sigma must exceed 1 (paper needs a > 0)");
        const int M = static_cast<int>(std::lround(spec.tmax / spec.step));
        g_.resize(M + 1);
        for (int j = 0; j <= M; ++j) {
            const cplx s(spec.sigma, j * spec.step);
            g_[j] = node_product(s) * (spec.step / (2.0 * M_PI));
        }
        g_[0] *= 0.5;
        for (double sb : {3.0, 4.0, 6.0, 8.0, 10.0, 12.0, 16.0, 20.0, 28.0, 40.0}) {
            bound_sigma_.push_back(sb);
            bound_c_.push_back(line_abs_integral(sb));
        }
    }

    int weight() const { return k_; }
    const ContourSpec& spec() const { return spec_; }

    double operator()(double x) const {
        if (!(x > 0.0)) throw std::domain_error("W_k: x > 0 required");
        const double lx = std::log(x);
        const cplx w = std::polar(1.0, -spec_.step * lx);
        cplx acc = 0.0, z = 1.0;
        for (std::size_t j = 0; j < g_.size(); ++j) {
            if (j % 256 == 0) z = std::polar(1.0, -(spec_.step * j) * lx);
            acc += g_[j] * z;
            z *= w;
        }
        return 2.0 * acc.real() * std::exp(-spec_.sigma * lx);
    }

    // rigorous bound |W_k(x)| <= min over the sigma ladder of C(s') x^{-s'}
    double decay_bound(double x) const {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < bound_sigma_.size(); ++i)
            best = std::min(best, bound_c_[i] * std::exp(-bound_sigma_[i] * std::log(x)));
        return best;
    }

    // bound on sum_{n > n0} 4 n |W_k(beta n)| (covers lambda(n)^2 <= d(n)^2 <= 4n):
    // <= min_{s'>2} 4 C(s') beta^{-s'} n0^{2-s'} / (s'-2)
    double lambda_tail_bound(double beta, double n0) const {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < bound_sigma_.size(); ++i) {
            const double s = bound_sigma_[i];
            best = std::min(best, 4.0 * bound_c_[i] / (s - 2.0) *
                                      std::exp(-s * std::log(beta) + (2.0 - s) * std::log(n0)));
        }
        return best;
    }

    // smallest n0 making lambda_tail_bound <= target (over the same ladder)
    double tail_cutoff(double beta, double target) const {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < bound_sigma_.size(); ++i) {
            const double s = bound_sigma_[i];
            const double ln_n0 =
                (std::log(4.0 * bound_c_[i] / ((s - 2.0) * target)) - s * std::log(beta)) /
                (s - 2.0);
            best = std::min(best, std::exp(ln_n0));
        }
        return std::max(best, 1.0);
    }

  private:
    // Gamma(s+k-1) Gamma(s-1/2) / Gamma(2-s); zero at the 1/Gamma trivial zeros
    cplx node_product(cplx s) const {
        const cplx r = 2.0 - s;
        if (r.imag() == 0.0 && r.real() <= 0.0 && r.real() == std::floor(r.real()))
            return 0.0;
        return std::exp(ln_gamma(s + (k_ - 1.0)) + ln_gamma(s - 0.5) - ln_gamma(r));
    }

    double line_abs_integral(double sb) const {
        const double step = 0.05, tmax = 140.0;
        double sum = 0.0;
        for (int j = 0; j * step <= tmax; ++j)
            sum += (j == 0 ? 0.5 : 1.0) * std::abs(node_product(cplx(sb, j * step)));
        return 2.0 * sum * step / (2.0 * M_PI);
    }

    int k_;
    ContourSpec spec_;
    std::vector<cplx> g_;
    std::vector<double> bound_sigma_, bound_c_;
};

inline double W_k(int k, double x, const ContourSpec& spec = {}) { return WkEvaluator(k, spec)(x); }

// ---- residue expansion of W_k (left-shift over both gamma pole families) ----
//
// poles of Gamma(s-1/2) at s = 1/2 - m:   (-1)^m/m! Gamma(k-1/2-m)/Gamma(3/2+m) x^{m-1/2}
// poles of Gamma(s+k-1) at s = 1-k-m:     (-1)^m/m! Gamma(1/2-k-m)/Gamma(k+m+1) x^{k-1+m}
struct WkResidueResult {
    double value;
    double tail_estimate;  // magnitude of the last included terms
    int terms_used;
};

inline WkResidueResult wk_residue_series(int k, double x, int terms) {
    if (!(x > 0.0)) throw std::domain_error("wk_residue_series: x > 0 required");
    const double lx = std::log(x);
    double sum = 0.0, last = 0.0;
    int used = 0;
    for (int m = 0; m < terms; ++m) {
        const double a1 = k - 0.5 - m;
        const double t1 = gamma_sign(a1) * ((m & 1) ? -1 : 1) *
                          std::exp(std::lgamma(a1) -
                                   std::lgamma(m + 1.0) - std::lgamma(1.5 + m) + (m - 0.5) * lx);
        const double a2 = 0.5 - k - m;
        const double t2 = gamma_sign(a2) * ((m & 1) ? -1 : 1) *
                          std::exp(std::lgamma(a2) - std::lgamma(m + 1.0) -
                                   std::lgamma(k + m + 1.0) + (k - 1.0 + m) * lx);
        sum += t1 + t2;
        last = std::fabs(t1) + std::fabs(t2);
        ++used;
        if (last < 1e-18 * std::max(1.0, std::fabs(sum)) && m > 4) break;
    }
    return {sum, last, used};
}

}  // namespace scslab
