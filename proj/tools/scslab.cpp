#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scslab/harness.hpp"

using namespace scslab;

int main(int argc, char** argv) {
    CLI::App app{"verification laboratory for averaged shifted convolution sums"};
    app.require_subcommand(1);

    int threads = 1;
    std::string cache_dir;
    app.add_option("--threads", threads, "worker thread count")->capture_default_str();
    app.add_option("--cache-dir", cache_dir, "coefficient cache directory (or $SCSLAB_CACHE_DIR)");

    // build-cache
    auto* sc_build = app.add_subcommand("build-cache", "build and store eigenform coefficients");
    int bc_weight = 12;
    std::size_t bc_n = 0;
    double bc_x = 0.0, bc_eps = 1e-6;
    sc_build->add_option("--weight", bc_weight, "eigenform weight")->capture_default_str();
    sc_build->add_option("--n", bc_n, "coefficient count");
    sc_build->add_option("--x", bc_x, "size the cache for this X scale");
    sc_build->add_option("--eps", bc_eps, "truncation tolerance")->capture_default_str();

    // verify
    auto* sc_verify = app.add_subcommand("verify", "end-to-end LHS vs RHS verification");
    std::string v_mode = "corollary1";
    int v_weight = 12;
    std::vector<double> v_x{1000.0}, v_ratio, v_y;
    double v_eps = 1e-6, v_theta = kThetaKimSarnak, v_sigma = 1.5;
    std::string v_out, v_json;
    sc_verify->add_option("--mode", v_mode, "corollary1|corollary2|main-theorem")
        ->capture_default_str();
    sc_verify->add_option("--weight", v_weight, "eigenform weight")->capture_default_str();
    sc_verify->add_option("--x", v_x, "X grid")->capture_default_str();
    sc_verify->add_option("--ratio", v_ratio, "Y^2/X ratio grid");
    sc_verify->add_option("--y", v_y, "fixed Y values");
    sc_verify->add_option("--eps", v_eps, "truncation tolerance")->capture_default_str();
    sc_verify->add_option("--theta", v_theta, "yardstick exponent (7/64 or 0)")
        ->capture_default_str();
    sc_verify->add_option("--sigma", v_sigma, "contour abscissa")->capture_default_str();
    sc_verify->add_option("--out", v_out, "CSV output path");
    sc_verify->add_option("--json", v_json, "JSON report path");

    // curve
    auto* sc_curve = app.add_subcommand("curve", "transition-curve c_f(alpha) export");
    int c_weight = 12;
    double c_lo = 0.05, c_hi = 100.0;
    std::size_t c_pts = 50;
    std::string c_out, c_json;
    sc_curve->add_option("--weight", c_weight, "eigenform weight")->capture_default_str();
    sc_curve->add_option("--alpha-lo", c_lo, "smallest alpha")->capture_default_str();
    sc_curve->add_option("--alpha-hi", c_hi, "largest alpha")->capture_default_str();
    sc_curve->add_option("--points", c_pts, "grid size")->capture_default_str();
    sc_curve->add_option("--out", c_out, "CSV output path");
    sc_curve->add_option("--json", c_json, "JSON report path");

    // cfs
    auto* sc_cfs = app.add_subcommand("cfs", "Jacobi-symbol sum vs C(Y/X) prediction");
    std::uint64_t f_x = 1000, f_y = 1000;
    std::string f_out, f_json;
    sc_cfs->add_option("--x", f_x, "odd-m limit X")->capture_default_str();
    sc_cfs->add_option("--y", f_y, "odd-n limit Y")->capture_default_str();
    sc_cfs->add_option("--out", f_out, "CSV output path");
    sc_cfs->add_option("--json", f_json, "JSON report path");

    auto* sc_self = app.add_subcommand("selftest", "quick cross-module property sweep");
    (void)sc_self;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        RunConfig cfg;
        cfg.threads = threads;
        cfg.cache_dir = cache_dir;
        if (app.got_subcommand(sc_build)) {
            std::size_t n = bc_n;
            if (n == 0 && bc_x > 0.0) n = scs_trunc_length(bc_weight, bc_x, bc_eps);
            if (n == 0) {
                std::cerr << "build-cache: give --n or --x\n";
                return 2;
            }
            const std::string dir = cache_directory(cfg);
            cached_eigenform(bc_weight, n, dir, threads);
            std::cout << "cached " << cache_path(dir, bc_weight, n) << "\n";
            return 0;
        }
        if (app.got_subcommand(sc_verify)) {
            if (v_mode == "corollary1") cfg.mode = RunMode::corollary1;
            else if (v_mode == "corollary2") cfg.mode = RunMode::corollary2;
            else if (v_mode == "main-theorem") cfg.mode = RunMode::main_theorem;
            else {
                std::cerr << "verify: unknown mode " << v_mode << "\n";
                return 2;
            }
            if (v_ratio.empty() && v_y.empty()) {
                std::cerr << "verify: give --ratio or --y\n";
                return 2;
            }
            cfg.weight = v_weight;
            cfg.xs = v_x;
            cfg.ratios = v_ratio;
            cfg.ys = v_y;
            cfg.eps_trunc = v_eps;
            cfg.theta = v_theta;
            cfg.contour.sigma = v_sigma;
            cfg.out_csv = v_out;
            cfg.out_json = v_json;
            VerificationReport rep = run(cfg);
            for (const auto& r : rep.rows)
                std::printf("k=%d X=%g Y=%g ratio=%g lhs=%.10e rhs=%.10e resid=%.4e norm=%.4e\n",
                            r.weight, r.X, r.Y, r.ratio, r.lhs, r.rhs, r.residual,
                            r.normalized_residual);
            return rep.pass ? 0 : 1;
        }
        if (app.got_subcommand(sc_curve)) {
            cfg.mode = RunMode::transition_curve;
            cfg.weight = c_weight;
            cfg.alpha_lo = c_lo;
            cfg.alpha_hi = c_hi;
            cfg.alpha_points = c_pts;
            cfg.out_csv = c_out;
            cfg.out_json = c_json;
            VerificationReport rep = run(cfg);
            for (const auto& s : rep.curve)
                std::printf("alpha=%-12g c_f=%.10e tail=%.2e nterms=%lld\n", s.alpha, s.value,
                            s.tail_bound, static_cast<long long>(s.nterms));
            return rep.pass ? 0 : 1;
        }
        if (app.got_subcommand(sc_cfs)) {
            cfg.mode = RunMode::cfs;
            cfg.cfs_x = f_x;
            cfg.cfs_y = f_y;
            cfg.out_csv = f_out;
            cfg.out_json = f_json;
            VerificationReport rep = run(cfg);
            for (const auto& r : rep.cfs_rows)
                std::printf("X=%llu Y=%llu S=%lld pred=%.6e resid=%.4e norm=%.4f\n",
                            static_cast<unsigned long long>(r.X),
                            static_cast<unsigned long long>(r.Y), static_cast<long long>(r.S),
                            r.prediction, r.residual, r.normalized_residual);
            return rep.pass ? 0 : 1;
        }
        // selftest
        cfg.mode = RunMode::selftest;
        return run(cfg).pass ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "invariant failure: " << e.what() << "\n";
        return 1;
    }
}
