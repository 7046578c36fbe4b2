#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace scslab {

using bigint = boost::multiprecision::cpp_int;

// Truncated integer q-expansion: c[i] is the coefficient of q^i.
struct IntegerSeries {
    std::vector<bigint> c;

    IntegerSeries() = default;
    explicit IntegerSeries(std::size_t n) : c(n) {}

    std::size_t size() const { return c.size(); }
    bigint& operator[](std::size_t i) { return c[i]; }
    const bigint& operator[](std::size_t i) const { return c[i]; }
};

// Exact truncated Cauchy product to length min(|x|,|y|).
// Fast path: when every coefficient fits in int64, partial products are
// accumulated in 128-bit arithmetic (exact: 63+63 bit operands).
inline IntegerSeries multiply_schoolbook(const IntegerSeries& x, const IntegerSeries& y) {
    const std::size_t n = std::min(x.size(), y.size());
    IntegerSeries r(n);
    if (n == 0) return r;

    // products < 2^110 summed over <= 2^17 terms stay inside __int128
    bool small = n <= (std::size_t{1} << 17);
    std::vector<std::int64_t> xs(n), ys(n);
    for (std::size_t i = 0; i < n && small; ++i) {
        small = x[i].is_zero() || (msb(abs(x[i])) < 55);
        if (small) small = y[i].is_zero() || (msb(abs(y[i])) < 55);
        if (small) {
            xs[i] = static_cast<std::int64_t>(x[i]);
            ys[i] = static_cast<std::int64_t>(y[i]);
        }
    }
    if (small) {
        std::vector<__int128> acc(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            if (xs[i] == 0) continue;
            for (std::size_t j = 0; j + i < n; ++j)
                acc[i + j] += static_cast<__int128>(xs[i]) * ys[j];
        }
        for (std::size_t i = 0; i < n; ++i) {
            __int128 v = acc[i];
            const bool neg = v < 0;
            if (neg) v = -v;
            bigint t = static_cast<std::uint64_t>(v >> 64);
            t <<= 64;
            t += static_cast<std::uint64_t>(v);
            r[i] = neg ? -t : t;
        }
        return r;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i].is_zero()) continue;
        for (std::size_t j = 0; j + i < n; ++j) {
            if (y[j].is_zero()) continue;
            r[i + j] += x[i] * y[j];
        }
    }
    return r;
}

inline IntegerSeries add(const IntegerSeries& x, const IntegerSeries& y) {
    IntegerSeries r(std::min(x.size(), y.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = x[i] + y[i];
    return r;
}

inline IntegerSeries sub(const IntegerSeries& x, const IntegerSeries& y) {
    IntegerSeries r(std::min(x.size(), y.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = x[i] - y[i];
    return r;
}

// Exact division of every coefficient by d; throws if any remainder is nonzero.
inline IntegerSeries divide_exact(const IntegerSeries& x, std::int64_t d) {
    IntegerSeries r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        bigint q, rem;
        divide_qr(x[i], bigint(d), q, rem);
        if (!rem.is_zero())
            throw std::runtime_error("divide_exact: inexact division (series-arithmetic bug)");
        r[i] = q;
    }
    return r;
}

}  // namespace scslab
