#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "scslab/cfs.hpp"

using namespace scslab;

namespace {

std::uint64_t powmod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = static_cast<unsigned __int128>(r) * b % m;
        b = static_cast<unsigned __int128>(b) * b % m;
        e >>= 1;
    }
    return r;
}

std::int64_t brute_S(std::uint64_t X, std::uint64_t Y) {
    std::int64_t s = 0;
    for (std::uint64_t m = 1; m <= X; m += 2)
        for (std::uint64_t n = 1; n <= Y; n += 2) s += jacobi(m, n);
    return s;
}

}  // namespace

TEST_CASE("jacobi symbol") {
    CHECK(jacobi(1, 1) == 1);
    CHECK(jacobi(0, 3) == 0);
    CHECK(jacobi(2, 3) == -1);
    CHECK(jacobi(2, 15) == 1);
    CHECK(jacobi(3, 9) == 0);
    CHECK(jacobi(5, 9) == 1);
    CHECK(jacobi(1001, 9907) == -1);
    CHECK_THROWS_AS(jacobi(3, 4), std::invalid_argument);

    // Euler's criterion at odd primes
    for (std::uint64_t p : {3ull, 5ull, 7ull, 11ull, 13ull, 31ull, 97ull, 101ull}) {
        for (std::uint64_t a = 0; a < p; ++a) {
            const std::uint64_t e = powmod_u64(a, (p - 1) / 2, p);
            const int legendre = e == 0 ? 0 : (e == 1 ? 1 : -1);
            REQUIRE(jacobi(a, p) == legendre);
        }
    }
    // complete multiplicativity in both arguments, periodicity in the top
    for (std::uint64_t n = 1; n <= 99; n += 2) {
        for (std::uint64_t m = 0; m <= 40; ++m) {
            REQUIRE(jacobi(m * (m + 3), n) == jacobi(m, n) * jacobi(m + 3, n));
            REQUIRE(jacobi(m + n, n) == jacobi(m, n));
        }
        for (std::uint64_t n2 = 1; n2 <= 99; n2 += 2)
            for (std::uint64_t m : {2ull, 7ull, 30ull})
                REQUIRE(jacobi(m, n * n2) == jacobi(m, n) * jacobi(m, n2));
    }
}

TEST_CASE("cfs_sum exact values") {
    CfsQuery q;
    q.X = q.Y = 1;
    CHECK(cfs_sum(q) == 1);
    q.X = q.Y = 3;
    CHECK(cfs_sum(q) == 3);
    q.X = q.Y = 5;
    CHECK(cfs_sum(q) == 3);
    q.X = q.Y = 1000;
    CHECK(cfs_sum(q) == 7961);

    q.X = 37;
    q.Y = 101;
    CHECK(cfs_sum(q) == brute_S(37, 101));
    CHECK(cfs_sum(q, 3) == cfs_sum(q, 1));  // threaded partition is exact
    q.X = 128;
    q.Y = 77;
    CHECK(cfs_sum(q, 4) == brute_S(128, 77));
}

TEST_CASE("oscillatory kernel J(z) against frozen references") {
    using cfs_detail::j_integral;
    struct Ref {
        double z, re, im;
    };
    // J(z) = int_z^inf t^{-5/2} e^{it} dt, 17 significant digits
    const Ref refs[] = {
        {0.01, 665.09558098357962, 18.329025594452349},
        {0.5, 0.91870666778444109, 1.1964156650717171},
        {1.0, -0.020780657851710315, 0.4376803525377999},
        {3.0, -0.031709953465130932, -0.036503326431688941},
        {8.0, -0.0051061903248733549, 0.00069807212856595157},
        {20.0, -0.00047232768492563512, 0.00028488918778186791},
    };
    for (const Ref& r : refs) {
        const std::complex<double> v = j_integral(r.z);
        const double scale = 1.0 + std::hypot(r.re, r.im);
        CHECK_MESSAGE(std::fabs(v.real() - r.re) <= 1e-9 * scale, "z = ", r.z, " re ", v.real());
        CHECK_MESSAGE(std::fabs(v.imag() - r.im) <= 1e-9 * scale, "z = ", r.z, " im ", v.imag());
    }
}

TEST_CASE("Gauss-Laguerre rule sanity") {
    const auto& gl = cfs_detail::gl80();
    double s0 = 0.0, s1 = 0.0, s5 = 0.0;
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
        CHECK(gl.x[i] > 0.0);
        if (i) CHECK(gl.x[i] > gl.x[i - 1]);
        s0 += gl.w[i];
        s1 += gl.w[i] * gl.x[i];
        s5 += gl.w[i] * std::pow(gl.x[i], 5);
    }
    CHECK(s0 == doctest::Approx(1.0).epsilon(1e-13));    // int e^{-x} dx
    CHECK(s1 == doctest::Approx(1.0).epsilon(1e-13));    // int x e^{-x} dx
    CHECK(s5 == doctest::Approx(120.0).epsilon(1e-12));  // 5!
}

TEST_CASE("C(alpha) forms and frozen value") {
    CHECK(C_alpha(0.0).value == 0.0);
    CHECK_THROWS_AS(C_alpha(-0.5), std::domain_error);
    CfsQuery bad;
    bad.kmax = 5;
    CHECK_THROWS_AS(C_alpha(1.0, bad), std::invalid_argument);

    const CAlphaResult c1 = C_alpha(1.0);
    CHECK_FALSE(c1.disagree);
    CHECK(c1.value == doctest::Approx(1.1902654421140906).epsilon(1e-8));

    // both forms on a log grid spanning all three regimes
    for (int i = 0; i < 30; ++i) {
        const double a = 0.01 * std::pow(1e4, i / 29.0);
        const CAlphaResult c = C_alpha(a);
        REQUIRE_MESSAGE(!c.disagree, "alpha = ", a, " form1 ", c.value, " form2 ", c.alternate);
    }
}

TEST_CASE("C(alpha) asymptotic regimes") {
    // C(a) = sqrt(a) + O(a^{3/2}) as a -> 0
    for (double a : {1e-3, 1e-2, 0.1}) {
        const double c = C_alpha(a).value;
        CHECK(std::fabs(c - std::sqrt(a)) <= 1.0 * std::pow(a, 1.5));
    }
    // C(a) - a -> 0 from above as a -> inf, with (C(a) - a) a approaching a constant
    const double c100 = C_alpha(100.0).value;
    CHECK(c100 > 100.0);
    CHECK((c100 - 100.0) * 100.0 == doctest::Approx(0.4386).epsilon(2e-2));
    const double c400 = C_alpha(400.0).value;
    CHECK((c400 - 400.0) * 400.0 == doctest::Approx((c100 - 100.0) * 100.0).epsilon(0.05));
}

TEST_CASE("cfs_verify end to end") {
    CfsQuery q;
    q.X = q.Y = 1000;
    const CfsVerification v = cfs_verify(q);
    CHECK(v.S == 7961);
    CHECK(v.alpha == doctest::Approx(1.0));
    CHECK(v.prediction ==
          doctest::Approx(2.0 / (M_PI * M_PI) * 1.1902654421140906 * std::pow(1000.0, 1.5))
              .epsilon(1e-7));
    CHECK(v.residual == v.S - v.prediction);
    CHECK(v.error_scale > 0.0);
    CHECK(std::fabs(v.normalized_residual) < 0.1);
}
