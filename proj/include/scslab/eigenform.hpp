#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "scslab/ntt.hpp"

namespace scslab {

inline const std::vector<int>& supported_weights() {
    static const std::vector<int> w = {12, 16, 18, 20, 22, 26};
    return w;
}

// Level-1 Hecke eigenform on a one-dimensional space.
// coeffs[n] = a(n) (arithmetic normalization, a(1)=1), lambda[n] = a(n) n^{-(k-1)/2}.
// Index 0 is unused. Immutable after construction.
struct Eigenform {
    int weight = 0;
    std::size_t N = 0;
    std::vector<bigint> coeffs;   // size N+1
    std::vector<double> lambda;   // size N+1
};

// E_4 = 1 + 240 sum sigma_3(n) q^n ; E_6 = 1 - 504 sum sigma_5(n) q^n.
inline IntegerSeries eisenstein_series(int weight4or6, std::size_t N) {
    if (weight4or6 != 4 && weight4or6 != 6)
        throw std::invalid_argument("eisenstein_series: weight must be 4 or 6");
    if (N < 1) throw std::invalid_argument("eisenstein_series: N >= 1 required");
    const int e = weight4or6 == 4 ? 3 : 5;
    const std::int64_t mult = weight4or6 == 4 ? 240 : -504;
    IntegerSeries s(N);
    s[0] = 1;
    for (std::size_t d = 1; d < N; ++d) {
        bigint dp = d;
        for (int i = 1; i < e; ++i) dp *= d;
        dp *= mult;
        for (std::size_t m = d; m < N; m += d) s[m] += dp;
    }
    return s;
}

// Delta = (E_4^3 - E_6^2)/1728; coefficients are tau(n).
inline IntegerSeries delta_series(std::size_t N, int threads = 1) {
    if (N < 1) throw std::invalid_argument("delta_series: N >= 1 required");
    const std::size_t len = N + 1;
    IntegerSeries e4 = eisenstein_series(4, len);
    IntegerSeries e6 = eisenstein_series(6, len);
    IntegerSeries e4sq = series_multiply(e4, e4, threads);
    IntegerSeries e4cu = series_multiply(e4sq, e4, threads);
    IntegerSeries e6sq = series_multiply(e6, e6, threads);
    return divide_exact(sub(e4cu, e6sq), 1728);
}

namespace eigen_detail {

inline void fill_lambda(Eigenform& f) {
    f.lambda.assign(f.N + 1, 0.0);
    const double p = (f.weight - 1) / 2.0;
    for (std::size_t n = 1; n <= f.N; ++n)
        f.lambda[n] =
            static_cast<double>(f.coeffs[n]) * std::exp(-p * std::log(static_cast<double>(n)));
    if (f.N >= 1) f.lambda[1] = 1.0;
}

}  // namespace eigen_detail

// f = Delta * E_4^a * E_6^b for k = 12 + 4a + 6b; dimension-one weights only.
inline Eigenform build_eigenform(int k, std::size_t N, int threads = 1) {
    int a = 0, b = 0;
    switch (k) {
        case 12: a = 0; b = 0; break;
        case 16: a = 1; b = 0; break;
        case 18: a = 0; b = 1; break;
        case 20: a = 2; b = 0; break;
        case 22: a = 1; b = 1; break;
        case 26: a = 2; b = 1; break;
        default:
            throw std::invalid_argument(
                "build_eigenform: weight " + std::to_string(k) +
                " unsupported (space dimension != 1); supported: 12,16,18,20,22,26");
    }
    if (N < 2) throw std::invalid_argument("build_eigenform: N >= 2 required");
    const std::size_t len = N + 1;
    IntegerSeries s = delta_series(N, threads);
    for (int i = 0; i < a; ++i) s = series_multiply(s, eisenstein_series(4, len), threads);
    for (int i = 0; i < b; ++i) s = series_multiply(s, eisenstein_series(6, len), threads);
    Eigenform f;
    f.weight = k;
    f.N = N;
    f.coeffs = std::move(s.c);
    eigen_detail::fill_lambda(f);
    return f;
}

struct HeckeReport {
    std::size_t multiplicative_checked = 0, multiplicative_failed = 0;
    std::size_t ppower_checked = 0, ppower_failed = 0;
    std::size_t deligne_checked = 0, deligne_failed = 0;
    std::string first_failure;
    bool ok() const { return multiplicative_failed + ppower_failed + deligne_failed == 0; }
};

// Exhaustive integer Hecke identities and the Deligne bound up to f.N.
inline HeckeReport check_hecke_relations(const Eigenform& f) {
    HeckeReport rep;
    const std::size_t N = f.N;
    auto note = [&rep](const std::string& s) {
        if (rep.first_failure.empty()) rep.first_failure = s;
    };

    for (std::size_t m = 2; m * m <= N; ++m) {
        for (std::size_t n = m + 1; m * n <= N; ++n) {
            if (std::gcd(m, n) != 1) continue;
            ++rep.multiplicative_checked;
            if (f.coeffs[m] * f.coeffs[n] != f.coeffs[m * n]) {
                ++rep.multiplicative_failed;
                note("a(" + std::to_string(m) + ")a(" + std::to_string(n) + ") != a(mn)");
            }
        }
    }

    std::vector<bool> composite(N + 1, false);
    for (std::size_t p = 2; p <= N; ++p) {
        if (composite[p]) continue;
        for (std::size_t q = p * p; q <= N; q += p) composite[q] = true;
        bigint pk1 = 1;
        for (int i = 0; i < f.weight - 1; ++i) pk1 *= p;
        std::size_t pr = p;  // p^r
        std::size_t r = 1;
        while (pr <= N / p) {
            ++rep.ppower_checked;
            const bigint lhs = f.coeffs[p] * f.coeffs[pr];
            const bigint rhs = f.coeffs[pr * p] + pk1 * (r >= 2 ? f.coeffs[pr / p] : bigint(1));
            if (lhs != rhs) {
                ++rep.ppower_failed;
                note("p-power recurrence fails at p=" + std::to_string(p) +
                     ", r=" + std::to_string(r));
            }
            pr *= p;
            ++r;
        }
    }

    std::vector<std::uint32_t> d(N + 1, 0);
    for (std::size_t i = 1; i <= N; ++i)
        for (std::size_t m = i; m <= N; m += i) ++d[m];
    for (std::size_t n = 1; n <= N; ++n) {
        ++rep.deligne_checked;
        if (std::fabs(f.lambda[n]) > d[n] * (1.0 + 1e-12)) {
            ++rep.deligne_failed;
            note("Deligne bound fails at n=" + std::to_string(n));
        }
    }
    return rep;
}

// ---- coefficient cache ----
// Text format, line 1: SCSLAB-COEFFS v1 weight=<k> N=<N>, then "<n> <a(n)>".

inline void save_coeffs(const Eigenform& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_coeffs: cannot open " + path);
    out << "SCSLAB-COEFFS v1 weight=" << f.weight << " N=" << f.N << "\n";
    for (std::size_t n = 1; n <= f.N; ++n) out << n << " " << f.coeffs[n] << "\n";
    if (!out) throw std::runtime_error("save_coeffs: write failed for " + path);
}

inline Eigenform load_coeffs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_coeffs: cannot open " + path);
    std::string magic, version, wfield, nfield;
    in >> magic >> version >> wfield >> nfield;
    Eigenform f;
    if (magic != "SCSLAB-COEFFS" || version != "v1" || wfield.rfind("weight=", 0) != 0 ||
        nfield.rfind("N=", 0) != 0)
        throw std::runtime_error("load_coeffs: bad header in " + path);
    f.weight = std::stoi(wfield.substr(7));
    f.N = std::stoull(nfield.substr(2));
    f.coeffs.assign(f.N + 1, 0);
    for (std::size_t n = 1; n <= f.N; ++n) {
        std::size_t idx;
        bigint v;
        if (!(in >> idx >> v) || idx != n)
            throw std::runtime_error("load_coeffs: truncated or corrupt cache " + path);
        f.coeffs[n] = v;
    }
    eigen_detail::fill_lambda(f);
    return f;
}

}  // namespace scslab
