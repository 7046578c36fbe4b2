#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "scslab/cfs.hpp"
#include "scslab/eigenform.hpp"
#include "scslab/scs.hpp"
#include "scslab/specfun.hpp"
#include "scslab/transition.hpp"

#include <json.hpp>

namespace scslab {

inline constexpr const char* kToolVersion = "scslab 1.0.0";
inline constexpr const char* kReportSchema = "scslab-report-1";

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// fixed, locale-independent float formatting (shortest round-trip)
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

enum class RunMode { corollary1, corollary2, main_theorem, transition_curve, cfs, selftest };

inline const char* mode_name(RunMode m) {
    switch (m) {
        case RunMode::corollary1: return "corollary1";
        case RunMode::corollary2: return "corollary2";
        case RunMode::main_theorem: return "main-theorem";
        case RunMode::transition_curve: return "transition-curve";
        case RunMode::cfs: return "cfs";
        case RunMode::selftest: return "selftest";
    }
    return "?";
}

struct RunConfig {
    RunMode mode = RunMode::selftest;
    int weight = 12;
    std::vector<double> xs = {1000.0};
    std::vector<double> ratios;        // Y^2/X ratio grid (corollary modes)
    std::vector<double> ys;            // fixed-Y alternative
    double eps_trunc = 1e-6;
    ContourSpec contour;
    double theta = kThetaKimSarnak;
    int threads = 1;
    std::string out_csv, out_json;
    std::string cache_dir;             // empty: $SCSLAB_CACHE_DIR or ./cache
    // transition-curve grid
    double alpha_lo = 0.05, alpha_hi = 100.0;
    std::size_t alpha_points = 50;
    // cfs mode
    std::uint64_t cfs_x = 1000, cfs_y = 1000;

    std::string canonical() const {
        std::ostringstream os;
        os << "mode=" << mode_name(mode) << ";k=" << weight << ";eps=" << fmt_double(eps_trunc)
           << ";sigma=" << fmt_double(contour.sigma) << ";step=" << fmt_double(contour.step)
           << ";tmax=" << fmt_double(contour.tmax) << ";theta=" << fmt_double(theta) << ";xs=";
        for (double x : xs) os << fmt_double(x) << ",";
        os << ";ratios=";
        for (double r : ratios) os << fmt_double(r) << ",";
        os << ";ys=";
        for (double y : ys) os << fmt_double(y) << ",";
        os << ";alpha=" << fmt_double(alpha_lo) << ":" << fmt_double(alpha_hi) << ":"
           << alpha_points << ";cfs=" << cfs_x << "x" << cfs_y;
        return os.str();
    }
    std::uint64_t hash() const { return fnv1a64(canonical()); }
};

struct ReportRow {
    int weight = 0;
    double X = 0.0, Y = 0.0, ratio = 0.0;
    double lhs = 0.0, rhs = 0.0, residual = 0.0, yardstick = 0.0, normalized_residual = 0.0;
};

struct VerificationReport {
    std::vector<ReportRow> rows;
    std::vector<TransitionSample> curve;
    std::vector<CfsVerification> cfs_rows;
    std::uint64_t config_hash = 0;
    std::string cache_id;
    bool pass = true;
};

// ---- coefficient cache management ----

inline std::string cache_directory(const RunConfig& cfg) {
    if (!cfg.cache_dir.empty()) return cfg.cache_dir;
    if (const char* env = std::getenv("SCSLAB_CACHE_DIR")) return env;
    return "cache";
}

inline std::string cache_path(const std::string& dir, int k, std::size_t N) {
    return dir + "/coeffs-k" + std::to_string(k) + "-N" + std::to_string(N) + ".txt";
}

inline Eigenform cached_eigenform(int k, std::size_t N, const std::string& dir, int threads = 1) {
    std::filesystem::create_directories(dir);
    const std::string path = cache_path(dir, k, N);
    if (std::filesystem::exists(path)) {
        try {
            Eigenform f = load_coeffs(path);
            if (f.weight == k && f.N == N) return f;
            std::cerr << "cache key mismatch in " << path << ", rebuilding\n";
        } catch (const std::exception& e) {
            std::cerr << "cache corrupt (" << e.what() << "), rebuilding\n";
        }
    }
    Eigenform f = build_eigenform(k, N, threads);
    save_coeffs(f, path);
    return f;
}

// ---- CSV writers ----

inline void write_rows_csv(const std::string& path, const std::vector<ReportRow>& rows) {
    std::ofstream out(path);
    out << "k,X,Y,ratio,lhs,rhs,residual,yardstick\n";
    for (const auto& r : rows)
        out << r.weight << "," << fmt_double(r.X) << "," << fmt_double(r.Y) << ","
            << fmt_double(r.ratio) << "," << fmt_double(r.lhs) << "," << fmt_double(r.rhs) << ","
            << fmt_double(r.residual) << "," << fmt_double(r.yardstick) << "\n";
}

inline void write_curve_csv(const std::string& path, const std::vector<TransitionSample>& curve) {
    std::ofstream out(path);
    out << "alpha,c_f,tail_bound,nterms\n";
    for (const auto& s : curve)
        out << fmt_double(s.alpha) << "," << fmt_double(s.value) << ","
            << fmt_double(s.tail_bound) << "," << s.nterms << "\n";
}

inline void write_cfs_csv(const std::string& path, const std::vector<CfsVerification>& rows) {
    std::ofstream out(path);
    out << "X,Y,alpha,S,prediction,residual,normalized_residual\n";
    for (const auto& r : rows)
        out << r.X << "," << r.Y << "," << fmt_double(r.alpha) << "," << r.S << ","
            << fmt_double(r.prediction) << "," << fmt_double(r.residual) << ","
            << fmt_double(r.normalized_residual) << "\n";
}

inline void write_json_report(const std::string& path, const RunConfig& cfg,
                              const VerificationReport& rep) {
    nlohmann::json j;
    j["schema"] = kReportSchema;
    j["tool"] = kToolVersion;
    j["mode"] = mode_name(cfg.mode);
    j["config"] = cfg.canonical();
    j["config_hash"] = rep.config_hash;
    j["cache_id"] = rep.cache_id;
    j["pass"] = rep.pass;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rep.rows)
        j["rows"].push_back({{"k", r.weight},
                             {"X", r.X},
                             {"Y", r.Y},
                             {"ratio", r.ratio},
                             {"lhs", r.lhs},
                             {"rhs", r.rhs},
                             {"residual", r.residual},
                             {"yardstick", r.yardstick},
                             {"normalized_residual", r.normalized_residual}});
    j["curve"] = nlohmann::json::array();
    for (const auto& s : rep.curve)
        j["curve"].push_back({{"alpha", s.alpha},
                              {"c_f", s.value},
                              {"tail_bound", s.tail_bound},
                              {"nterms", s.nterms}});
    j["cfs"] = nlohmann::json::array();
    for (const auto& r : rep.cfs_rows)
        j["cfs"].push_back({{"X", r.X},
                            {"Y", r.Y},
                            {"alpha", r.alpha},
                            {"S", r.S},
                            {"prediction", r.prediction},
                            {"residual", r.residual},
                            {"normalized_residual", r.normalized_residual}});
    std::ofstream out(path);
    out << j.dump(2) << "\n";
}

// ---- regime summary ----

struct RegimeSummary {
    std::size_t small_ratio = 0, transition = 0, large_ratio = 0;
    bool large_ratio_pass = true;  // LHS/X within 10% of -Gamma(k)L/(2 zeta(2))
};

inline RegimeSummary regime_summary(const std::vector<ReportRow>& rows, double minus_ck) {
    RegimeSummary s;
    for (const auto& r : rows) {
        if (r.ratio < 0.1) {
            ++s.small_ratio;
        } else if (r.ratio <= 10.0) {
            ++s.transition;
        } else {
            ++s.large_ratio;
            if (std::fabs(r.lhs / r.X - minus_ck) > 0.10 * std::fabs(minus_ck))
                s.large_ratio_pass = false;
        }
    }
    return s;
}

// ---- selftest (quick cross-module property sweep) ----

inline bool run_selftest(int threads) {
    bool ok = true;
    auto check = [&ok](bool c, const char* what) {
        std::cout << (c ? "ok   " : "FAIL ") << what << "\n";
        if (!c) ok = false;
    };
    // exact series arithmetic
    {
        IntegerSeries a(512), b(512);
        std::uint64_t state = 88172645463325252ull;
        auto rnd = [&state]() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            return static_cast<std::int64_t>(state % 2000001) - 1000000;
        };
        for (auto& c : a.c) c = rnd();
        for (auto& c : b.c) c = rnd();
        auto p1 = multiply_schoolbook(a, b);
        auto p2 = multiply_ntt(a, b, threads);
        bool eq = true;
        for (std::size_t i = 0; i < p1.size(); ++i) eq = eq && p1[i] == p2[i];
        check(eq, "ntt/crt equals schoolbook (512 random terms)");
    }
    {
        Eigenform f = build_eigenform(12, 2000, threads);
        check(check_hecke_relations(f).ok(), "hecke identities, k=12, N=2000");
        check(f.coeffs[2] == -24 && f.coeffs[3] == 252, "tau(2), tau(3)");
    }
    {
        const double e1 = std::fabs(std::exp(ln_gamma(cplx(5.0, 0.0))).real() - 24.0) / 24.0;
        check(e1 < 1e-13, "ln_gamma at z=5");
        check(std::fabs(zeta_real(2.0) - M_PI * M_PI / 6.0) < 1e-12, "zeta(2)");
        check(std::fabs(upper_incomplete_gamma(1.0, 1.0) - std::exp(-1.0)) < 1e-12, "Gamma(1,1)");
        const double w1 = W_k(12, 1.0, {1.5, 0.05, 60.0});
        const double w2 = W_k(12, 1.0, {2.5, 0.05, 60.0});
        check(std::fabs(w1 - w2) < 1e-8 * std::fabs(w1), "W_12 contour independence at x=1");
        const auto rs = wk_residue_series(12, 0.5, 60);
        const double wq = W_k(12, 0.5);
        check(std::fabs(rs.value - wq) < 1e-8 * std::fabs(wq), "W_12 residue series at x=0.5");
    }
    {
        check(jacobi(2, 15) == 1 && jacobi(3, 3) == 0 && jacobi(1, 1) == 1, "jacobi values");
        CfsQuery q;
        q.X = q.Y = 5;
        check(cfs_sum(q) == 3, "S(5,5) = 3");
        const auto c = C_alpha(1.0);
        check(!c.disagree && std::fabs(c.value - 1.1902654421140906) < 1e-6, "C(1) both forms");
    }
    return ok;
}

// ---- runner ----

inline VerificationReport run(const RunConfig& cfg) {
    VerificationReport rep;
    rep.config_hash = cfg.hash();
    if (cfg.mode == RunMode::selftest) {
        rep.pass = run_selftest(cfg.threads);
        return rep;
    }
    if (cfg.mode == RunMode::cfs) {
        CfsQuery q;
        q.X = cfg.cfs_x;
        q.Y = cfg.cfs_y;
        rep.cfs_rows.push_back(cfs_verify(q, cfg.threads));
        if (!cfg.out_csv.empty()) write_cfs_csv(cfg.out_csv, rep.cfs_rows);
        if (!cfg.out_json.empty()) write_json_report(cfg.out_json, cfg, rep);
        return rep;
    }

    // eigenform-backed modes: size the coefficient need from the largest X
    double xmax = 1.0;
    for (double x : cfg.xs) xmax = std::max(xmax, x);
    std::size_t need = 0;
    if (cfg.mode == RunMode::transition_curve) {
        const WkEvaluator& W = transition_detail::wk_cached(cfg.weight, cfg.contour);
        const double beta = M_PI * M_PI * cfg.alpha_lo;
        const double pref = 0.5 * std::pow(M_PI, 1.5) * cfg.alpha_lo;
        need = static_cast<std::size_t>(std::ceil(W.tail_cutoff(beta, 1e-9 / pref)));
    } else {
        need = scs_trunc_length(cfg.weight, xmax, cfg.eps_trunc);
        // corollary2 cancellation regime may sample c_f down to (k-1) * min ratio
        double rmin = 1e30;
        for (double r : cfg.ratios) rmin = std::min(rmin, r);
        for (double y : cfg.ys) rmin = std::min(rmin, y * y / xmax);
        if (rmin < 1e30) {
            const WkEvaluator& W = transition_detail::wk_cached(cfg.weight, cfg.contour);
            const double a0 = cfg.mode == RunMode::corollary2
                                  ? (cfg.weight - 1) * rmin * 0.999
                                  : rmin;
            const double beta = M_PI * M_PI * a0;
            const double pref = 0.5 * std::pow(M_PI, 1.5) * a0;
            need = std::max(
                need, static_cast<std::size_t>(std::ceil(W.tail_cutoff(beta, 1e-9 / pref))));
        }
    }
    const std::string dir = cache_directory(cfg);
    Eigenform f = cached_eigenform(cfg.weight, need, dir, cfg.threads);
    rep.cache_id = cache_path(dir, cfg.weight, need);

    if (cfg.mode == RunMode::transition_curve) {
        const double lr = std::log(cfg.alpha_hi / cfg.alpha_lo);
        for (std::size_t i = 0; i < cfg.alpha_points; ++i) {
            const double a =
                cfg.alpha_lo * std::exp(lr * static_cast<double>(i) / (cfg.alpha_points - 1));
            rep.curve.push_back(c_f(f, a, cfg.contour));
        }
        if (!cfg.out_csv.empty()) write_curve_csv(cfg.out_csv, rep.curve);
        if (!cfg.out_json.empty()) write_json_report(cfg.out_json, cfg, rep);
        return rep;
    }

    for (double X : cfg.xs) {
        std::vector<double> ys = cfg.ys;
        for (double r : cfg.ratios) ys.push_back(std::sqrt(r * X));
        for (double Y : ys) {
            ReportRow row;
            row.weight = cfg.weight;
            row.X = X;
            row.Y = Y;
            row.ratio = Y * Y / X;
            if (cfg.mode == RunMode::corollary1) {
                SCSQuery q;
                q.X = X;
                q.Y = Y;
                q.eps_trunc = cfg.eps_trunc;
                row.lhs = scs_fast(f, q);
                const RhsResult r1 = corollary1_rhs(f, X, Y, cfg.contour, cfg.theta);
                row.rhs = r1.value;
                row.yardstick = r1.yardstick;
            } else if (cfg.mode == RunMode::corollary2) {
                row.lhs = corollary2_lhs(f, X, Y, cfg.threads);
                row.rhs = corollary2_rhs(f, X, Y, cfg.contour, cfg.threads);
                row.yardstick = residual_yardstick(X, Y, cfg.theta);
            } else {  // main theorem with the point-mass kernel
                row.lhs = scs_weighted(f, SmoothingKernel::point_mass(X), Y, cfg.eps_trunc,
                                       cfg.threads);
                row.rhs = main_theorem_rhs(f, SmoothingKernel::point_mass(X), Y, cfg.contour,
                                           cfg.threads);
                row.yardstick = std::fabs(std::pow(4.0 * M_PI, 2.0 - cfg.weight)) * X *
                                residual_yardstick(X, Y, cfg.theta);
            }
            row.residual = row.lhs - row.rhs;
            row.normalized_residual = row.residual / row.yardstick;
            if (!std::isfinite(row.normalized_residual)) rep.pass = false;
            rep.rows.push_back(row);
        }
    }
    if (!cfg.out_csv.empty()) write_rows_csv(cfg.out_csv, rep.rows);
    if (!cfg.out_json.empty()) write_json_report(cfg.out_json, cfg, rep);
    return rep;
}

}  // namespace scslab
