#pragma once

#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "scslab/integer_series.hpp"

namespace scslab {
namespace ntt_detail {

struct NttPrime {
    std::uint64_t p;
    std::uint64_t g;  // primitive root
};

// 62-bit primes with p - 1 divisible by 2^24 (transform lengths to 2^24).
inline constexpr NttPrime kPrimes[] = {
    {4611686018326724609ull, 3}, {4611686018309947393ull, 5},
    {4611686018058289153ull, 5}, {4611686017974403073ull, 3},
    {4611686017773076481ull, 3}, {4611686017554972673ull, 5},
};
inline constexpr int kNumPrimes = 6;
inline constexpr int kMaxLog2Len = 24;

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

// In-place iterative Cooley-Tukey over Z/p, length a power of two.
inline void transform(std::vector<std::uint64_t>& a, const NttPrime& pr, bool inverse) {
    const std::size_t n = a.size();
    const std::uint64_t p = pr.p;
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        std::uint64_t w = powmod(pr.g, (p - 1) / len, p);
        if (inverse) w = powmod(w, p - 2, p);
        for (std::size_t i = 0; i < n; i += len) {
            std::uint64_t wj = 1;
            for (std::size_t j = 0; j < len / 2; ++j) {
                const std::uint64_t u = a[i + j];
                const std::uint64_t v = mulmod(a[i + j + len / 2], wj, p);
                a[i + j] = u + v < p ? u + v : u + v - p;
                a[i + j + len / 2] = u >= v ? u - v : u + p - v;
                wj = mulmod(wj, w, p);
            }
        }
    }
    if (inverse) {
        const std::uint64_t ninv = powmod(n % p, p - 2, p);
        for (auto& x : a) x = mulmod(x, ninv, p);
    }
}

inline std::vector<std::uint64_t> residues(const IntegerSeries& s, std::size_t len, std::uint64_t p) {
    std::vector<std::uint64_t> r(len, 0);
    const bigint bp = p;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i].is_zero()) continue;
        bigint m = s[i] % bp;  // truncated remainder, sign of dividend
        if (m.sign() < 0) m += bp;
        r[i] = static_cast<std::uint64_t>(m);
    }
    return r;
}

inline unsigned bit_length(const IntegerSeries& s) {
    unsigned b = 0;
    for (const auto& c : s.c)
        if (!c.is_zero()) b = std::max(b, msb(abs(c)) + 1u);
    return b;
}

}  // namespace ntt_detail

// Exact product via NTT modulo several word-size primes + CRT, truncated to
// min(|x|,|y|). Prime count chosen from the operands' coefficient magnitudes.
// Residue transforms may run in parallel (one thread per prime).
inline IntegerSeries multiply_ntt(const IntegerSeries& x, const IntegerSeries& y, int threads = 1) {
    using namespace ntt_detail;
    const std::size_t n = std::min(x.size(), y.size());
    IntegerSeries out(n);
    if (n == 0) return out;

    std::size_t len = 1;
    unsigned log2len = 0;
    while (len < 2 * n) len <<= 1, ++log2len;
    if (log2len > kMaxLog2Len)
        throw std::runtime_error("multiply_ntt: transform length exceeds 2^24");

    // signed coefficient bound: |sum| < 2^(bx+by+log2 n); need prod(p) > 2^(bound+1)
    const unsigned bound_bits = bit_length(x) + bit_length(y) + log2len + 1;
    int nprimes = 3;
    while (nprimes < kNumPrimes && 61u * nprimes < bound_bits + 2) ++nprimes;
    if (61u * nprimes < bound_bits + 2)
        throw std::runtime_error(
            "multiply_ntt: CRT modulus capacity exceeded for this length/weight; add primes");

    std::vector<std::vector<std::uint64_t>> res(nprimes);
    auto work = [&](int q) {
        const NttPrime& pr = kPrimes[q];
        auto a = residues(x, len, pr.p);
        auto b = residues(y, len, pr.p);
        transform(a, pr, false);
        transform(b, pr, false);
        for (std::size_t i = 0; i < len; ++i) a[i] = mulmod(a[i], b[i], pr.p);
        transform(a, pr, true);
        res[q] = std::move(a);
    };
    if (threads > 1) {
        std::vector<std::thread> pool;
        for (int q = 0; q < nprimes; ++q) pool.emplace_back(work, q);
        for (auto& t : pool) t.join();
    } else {
        for (int q = 0; q < nprimes; ++q) work(q);
    }

    // CRT (Garner): mixed-radix digits over the prime list, then balanced lift.
    std::vector<std::uint64_t> inv(nprimes * nprimes, 0);
    for (int i = 0; i < nprimes; ++i)
        for (int j = i + 1; j < nprimes; ++j)
            inv[i * nprimes + j] = powmod(kPrimes[i].p % kPrimes[j].p, kPrimes[j].p - 2, kPrimes[j].p);
    bigint modulus = 1;
    std::vector<bigint> premod(nprimes);
    for (int i = 0; i < nprimes; ++i) {
        premod[i] = modulus;
        modulus *= kPrimes[i].p;
    }
    const bigint half = modulus >> 1;
    std::vector<std::uint64_t> digit(nprimes);
    for (std::size_t i = 0; i < n; ++i) {
        for (int j = 0; j < nprimes; ++j) {
            std::uint64_t v = res[j][i] % kPrimes[j].p;
            for (int q = 0; q < j; ++q) {
                const std::uint64_t d = digit[q] % kPrimes[j].p;
                v = v >= d ? v - d : v + kPrimes[j].p - d;
                v = mulmod(v, inv[q * nprimes + j], kPrimes[j].p);
            }
            digit[j] = v;
        }
        bigint val = 0;
        for (int j = nprimes - 1; j >= 0; --j) val += premod[j] * digit[j];
        if (val > half) val -= modulus;
        out[i] = val;
    }
    return out;
}

// Dispatching product: NTT above the crossover, schoolbook below.
inline IntegerSeries series_multiply(const IntegerSeries& x, const IntegerSeries& y, int threads = 1) {
    if (std::min(x.size(), y.size()) < 64) return multiply_schoolbook(x, y);
    return multiply_ntt(x, y, threads);
}

}  // namespace scslab
