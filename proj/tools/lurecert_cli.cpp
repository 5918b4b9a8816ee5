// lurecert command-line interface.
//
// Exit codes: 0 success/feasible, 2 infeasible, 3 validation failure,
// 1 runtime error, 64 usage error.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "lurecert/bench_cases.hpp"
#include "lurecert/certify.hpp"

namespace {

using namespace lure;

constexpr int kExitFeasible = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitValidationFailed = 3;
constexpr int kExitUsage = 64;

certify::Method parse_method(const std::string& m) {
    if (m == "lifting") return certify::Method::Lifting;
    if (m == "zf") return certify::Method::Zf;
    throw CLI::ValidationError("--method", "must be 'lifting' or 'zf'");
}

struct CertifyArgs {
    std::string plant_path;
    double alpha = 0.0;
    int ell = 1;
    std::string method = "lifting";
    int nb = -1, nf = -1;
    std::string out_path;
};

int run_certify(const CertifyArgs& a) {
    const auto plant = lti::load_plant(a.plant_path);
    const auto method = parse_method(a.method);
    certify::CertifyOutcome outcome;
    if (method == certify::Method::Zf) {
        const int nb = a.nb >= 0 ? a.nb : a.ell;
        const int nf = a.nf >= 0 ? a.nf : a.ell;
        outcome = certify::certify_alpha_zf(plant, a.alpha, nb, nf);
    } else {
        outcome = certify::certify_alpha(plant, a.alpha, a.ell, method);
    }
    if (!outcome.feasible()) {
        std::cout << "infeasible alpha=" << a.alpha << " method=" << a.method
                  << " status=" << sdp::to_string(outcome.status) << "\n";
        return kExitInfeasible;
    }
    const auto& cert = *outcome.certificate;
    std::cout << "feasible alpha=" << a.alpha << " method=" << a.method
              << " worst_psd_residual=" << cert.worst_psd_residual << "\n";
    if (!a.out_path.empty()) certify::save_certificate(cert, a.out_path);
    return kExitFeasible;
}

struct MaximizeArgs {
    std::string plant_path;
    int ell = 1;
    std::string method = "lifting";
    int nb = -1, nf = -1;
    double tol = 1e-4;
    double lo = 1e-3, hi = 1.0;
    std::string out_path;
};

int run_maximize(const MaximizeArgs& a) {
    const auto plant = lti::load_plant(a.plant_path);
    const auto method = parse_method(a.method);
    certify::BisectOptions b;
    b.lo = a.lo;
    b.hi = a.hi;
    b.tol = a.tol;
    const int nb = a.nb >= 0 ? a.nb : (method == certify::Method::Zf ? a.ell : 0);
    const int nf = a.nf >= 0 ? a.nf : (method == certify::Method::Zf ? a.ell : 0);
    const auto res = certify::maximize_alpha(plant, a.ell, method, b, {}, nb, nf);
    std::cout << std::setprecision(10) << "alpha_star=" << res.value
              << " method=" << a.method << " solves=" << res.solve_count << "\n";
    if (!a.out_path.empty()) certify::save_certificate(res.certificate, a.out_path);
    return kExitFeasible;
}

struct BenchRow {
    int id;
    std::string method;
    double alpha = 0.0;
    double expected = 0.0;
    double tol = 0.0;
    int ell = 0, nb = 0, nf = 0;
    double seconds = 0.0;
    bool pass = false;
    std::string error;
};

BenchRow bench_one(const bench::BenchmarkCase& c, certify::Method method) {
    BenchRow row;
    row.id = c.id;
    row.method = certify::to_string(method);
    row.expected = c.alpha_expected;
    row.tol = c.tol;
    row.ell = c.ell;
    row.nb = c.n_b;
    row.nf = c.n_f;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const auto plant = lti::make_plant(c.g);
        certify::BisectOptions b;
        const auto res = method == certify::Method::Zf
                             ? certify::maximize_alpha(plant, c.ell, method, b, {}, c.n_b, c.n_f)
                             : certify::maximize_alpha(plant, c.ell, method, b, {});
        row.alpha = res.value;
        row.pass = std::abs(row.alpha - row.expected) <= row.tol;
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

struct BenchArgs {
    std::vector<int> examples;
    std::string method = "lifting";
    std::string format = "text";
};

int run_bench(const BenchArgs& a) {
    std::vector<int> ids = a.examples;
    if (ids.empty())
        for (const auto& c : bench::table()) ids.push_back(c.id);

    std::vector<certify::Method> methods;
    if (a.method == "both") {
        methods = {certify::Method::Lifting, certify::Method::Zf};
    } else {
        methods = {parse_method(a.method)};
    }

    // one solver instance per case; results ordered by id regardless of
    // completion order
    std::vector<std::future<BenchRow>> futures;
    for (auto method : methods)
        for (int id : ids)
            futures.push_back(std::async(std::launch::async, [id, method] {
                return bench_one(bench::example(id), method);
            }));
    std::vector<BenchRow> rows;
    for (auto& f : futures) rows.push_back(f.get());
    std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& x, const BenchRow& y) {
        return std::tie(x.id, x.method) < std::tie(y.id, y.method);
    });

    bool all_pass = true;
    for (const auto& r : rows) all_pass = all_pass && r.pass;

    if (a.format == "csv") {
        std::cout << "example,method,alpha,expected,tol,ell,nb,nf,seconds,pass\n";
        for (const auto& r : rows)
            std::cout << r.id << "," << r.method << "," << std::setprecision(10) << r.alpha
                      << "," << r.expected << "," << r.tol << "," << r.ell << "," << r.nb << ","
                      << r.nf << "," << r.seconds << "," << (r.pass ? "true" : "false") << "\n";
    } else if (a.format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::json row;
            row["example"] = r.id;
            row["method"] = r.method;
            row["alpha"] = r.alpha;
            row["expected"] = r.expected;
            row["tol"] = r.tol;
            row["ell"] = r.ell;
            row["nb"] = r.nb;
            row["nf"] = r.nf;
            row["seconds"] = r.seconds;
            row["pass"] = r.pass;
            if (!r.error.empty()) row["error"] = r.error;
            j.push_back(std::move(row));
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << std::left << std::setw(4) << "ex" << std::setw(9) << "method"
                  << std::setw(12) << "alpha" << std::setw(12) << "expected" << std::setw(10)
                  << "|diff|" << std::setw(12) << "sizes" << std::setw(9) << "sec"
                  << "status\n";
        for (const auto& r : rows) {
            std::ostringstream sizes;
            if (r.method == "zf")
                sizes << "(" << r.nb << "," << r.nf << ")";
            else
                sizes << "ell=" << r.ell;
            std::cout << std::left << std::setw(4) << r.id << std::setw(9) << r.method
                      << std::setw(12) << std::setprecision(6) << std::fixed << r.alpha
                      << std::setw(12) << r.expected << std::setw(10)
                      << std::abs(r.alpha - r.expected) << std::setw(12) << sizes.str()
                      << std::setw(9) << std::setprecision(2) << r.seconds
                      << (r.pass ? "pass" : (r.error.empty() ? "FAIL" : r.error)) << "\n";
            std::cout.unsetf(std::ios::fixed);
        }
    }
    return all_pass ? kExitFeasible : kExitError;
}

struct ValidateArgs {
    std::string plant_path;
    std::string cert_path;
    int trajectories = 100;
    double tol = 1e-6;
    double cone_tol = 1e-8;
};

int run_validate(const ValidateArgs& a) {
    const auto plant = lti::load_plant(a.plant_path);
    const auto cert = certify::load_certificate(a.cert_path);
    certify::TrajectoryOptions traj;
    traj.nonlinearities = a.trajectories;
    if (a.trajectories == 0) traj.initial_states = 0;
    certify::ValidationReport rep;
    try {
        rep = certify::validate_certificate(plant, cert, a.tol, a.cone_tol, traj);
    } catch (const certify::FingerprintMismatch& e) {
        std::cout << "validation failed: " << e.what() << "\n";
        return kExitValidationFailed;
    }
    for (const auto& item : rep.items)
        std::cout << (item.pass ? "  ok   " : "  FAIL ") << item.name << "  value=" << item.value
                  << " tol=" << item.tolerance << "\n";
    if (!rep.pass) {
        std::cout << "validation failed at: " << rep.first_failure << "\n";
        return kExitValidationFailed;
    }
    std::cout << "certificate valid (tol=" << a.tol << ")\n";
    return kExitFeasible;
}

struct RateArgs {
    std::string plant_path;
    double alpha = 1.0;
    int ell = 1;
    double rho_tol = 1e-4;
    std::string out_path;
};

int run_rate(const RateArgs& a) {
    const auto plant = lti::load_plant(a.plant_path);
    const auto res = certify::minimize_rate(plant, a.alpha, a.ell, a.rho_tol);
    std::cout << std::setprecision(10) << "rho_star=" << res.value << " alpha=" << a.alpha
              << "\n";
    if (!a.out_path.empty()) certify::save_certificate(res.certificate, a.out_path);
    return kExitFeasible;
}

lmi::PerformancePlant performance_from_plant(const std::string& path) {
    const auto plant = lti::load_plant(path);
    lmi::PerformancePlant pp;
    pp.g = plant.ss;
    // defaults: disturbance at the plant input, performance on the plant output
    pp.Bw = plant.ss.B;
    pp.Cz = plant.ss.C;
    pp.Dzu = plant.ss.D;
    pp.Dzw = 0.0;
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    const auto j = nlohmann::json::parse(buf.str());
    if (j.contains("perf")) {
        const auto& p = j["perf"];
        if (p.contains("Bw")) {
            const auto v = p["Bw"].get<std::vector<double>>();
            pp.Bw = Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
        }
        if (p.contains("Cz")) {
            const auto v = p["Cz"].get<std::vector<double>>();
            pp.Cz = Eigen::Map<const Eigen::RowVectorXd>(v.data(), v.size());
        }
        pp.Dzu = p.value("Dzu", pp.Dzu);
        pp.Dzw = p.value("Dzw", pp.Dzw);
    }
    return pp;
}

struct GainArgs {
    std::string plant_path;
    double alpha = 1.0;
    int ell = 1;
    double lo = 1e-3, hi = 1e4, tol = 1e-3;
    bool no_phi = false;
};

int run_gain(const GainArgs& a) {
    const auto pp = performance_from_plant(a.plant_path);
    certify::PerformanceOptions opts;
    opts.alpha = a.alpha;
    opts.ell = a.ell;
    opts.channel = a.no_phi ? lmi::NonlinChannel::Disabled : lmi::NonlinChannel::Active;
    const double g = certify::minimize_gain(pp, a.lo, a.hi, a.tol, opts);
    std::cout << std::setprecision(10) << "gamma_star=" << g << "\n";
    return kExitFeasible;
}

struct H2Args {
    std::string plant_path;
    double alpha = 1.0;
    int ell = 1;
    double sigma = 1.0;
    double lo = 0.0, hi = 1e4, tol = 1e-3;
    bool no_phi = false;
};

int run_h2(const H2Args& a) {
    const auto pp = performance_from_plant(a.plant_path);
    certify::PerformanceOptions opts;
    opts.alpha = a.alpha;
    opts.ell = a.ell;
    opts.channel = a.no_phi ? lmi::NonlinChannel::Disabled : lmi::NonlinChannel::Active;
    if (a.sigma == 0.0) {
        std::cout << "gamma_star=0\n";
        return kExitFeasible;
    }
    const double g = certify::minimize_h2(pp, a.sigma, std::max(a.lo, 1e-9), a.hi, a.tol, opts);
    std::cout << std::setprecision(10) << "gamma_star=" << g << "\n";
    return kExitFeasible;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"absolute-stability certificates for discrete-time Lur'e systems"};
    app.require_subcommand(1);

    CertifyArgs ca;
    auto* certify_cmd = app.add_subcommand("certify", "feasibility at a fixed sector bound");
    certify_cmd->add_option("--plant", ca.plant_path, "plant JSON file")->required();
    certify_cmd->add_option("--alpha", ca.alpha, "sector bound")->required();
    certify_cmd->add_option("--ell", ca.ell, "lifting dimension");
    certify_cmd->add_option("--method", ca.method, "lifting|zf");
    certify_cmd->add_option("--nb", ca.nb, "causal taps (zf)");
    certify_cmd->add_option("--nf", ca.nf, "anticausal taps (zf)");
    certify_cmd->add_option("--out", ca.out_path, "certificate output path");

    MaximizeArgs ma;
    auto* maximize_cmd = app.add_subcommand("maximize", "bisection for the largest sector bound");
    maximize_cmd->add_option("--plant", ma.plant_path, "plant JSON file")->required();
    maximize_cmd->add_option("--ell", ma.ell, "lifting dimension");
    maximize_cmd->add_option("--method", ma.method, "lifting|zf");
    maximize_cmd->add_option("--nb", ma.nb, "causal taps (zf)");
    maximize_cmd->add_option("--nf", ma.nf, "anticausal taps (zf)");
    maximize_cmd->add_option("--tol", ma.tol, "bisection tolerance");
    maximize_cmd->add_option("--lo", ma.lo, "lower bracket");
    maximize_cmd->add_option("--hi", ma.hi, "initial upper bracket");
    maximize_cmd->add_option("--out", ma.out_path, "certificate output path");

    BenchArgs ba;
    auto* bench_cmd = app.add_subcommand("bench", "reproduce the benchmark table");
    bench_cmd->add_option("--examples", ba.examples, "example ids (default all)");
    bench_cmd->add_option("--method", ba.method, "lifting|zf|both");
    bench_cmd->add_option("--format", ba.format, "text|csv|json");

    ValidateArgs va;
    auto* validate_cmd = app.add_subcommand("validate", "validate a stored certificate");
    validate_cmd->add_option("--plant", va.plant_path, "plant JSON file")->required();
    validate_cmd->add_option("--cert", va.cert_path, "certificate file")->required();
    validate_cmd->add_option("--trajectories", va.trajectories, "random nonlinearity count");
    validate_cmd->add_option("--tol", va.tol, "residual tolerance");
    validate_cmd->add_option("--cone-tol", va.cone_tol, "dual-cone tolerance");

    RateArgs ra;
    auto* rate_cmd = app.add_subcommand("rate", "smallest certifiable exponential rate");
    rate_cmd->add_option("--plant", ra.plant_path, "plant JSON file")->required();
    rate_cmd->add_option("--alpha", ra.alpha, "sector bound")->required();
    rate_cmd->add_option("--ell", ra.ell, "lifting dimension");
    rate_cmd->add_option("--rho-tol", ra.rho_tol, "bisection tolerance");
    rate_cmd->add_option("--out", ra.out_path, "certificate output path");

    GainArgs ga;
    auto* gain_cmd = app.add_subcommand("gain", "robust l2-gain bound via bisection");
    gain_cmd->add_option("--plant", ga.plant_path, "plant JSON file")->required();
    gain_cmd->add_option("--alpha", ga.alpha, "sector bound");
    gain_cmd->add_option("--ell", ga.ell, "lifting dimension");
    gain_cmd->add_option("--gamma-lo", ga.lo, "lower gamma bracket");
    gain_cmd->add_option("--gamma-hi", ga.hi, "upper gamma bracket");
    gain_cmd->add_option("--tol", ga.tol, "bisection tolerance");
    gain_cmd->add_flag("--no-phi", ga.no_phi, "disable the nonlinearity channel");

    H2Args ha;
    auto* h2_cmd = app.add_subcommand("h2", "robust H2 bound via bisection");
    h2_cmd->add_option("--plant", ha.plant_path, "plant JSON file")->required();
    h2_cmd->add_option("--alpha", ha.alpha, "sector bound");
    h2_cmd->add_option("--ell", ha.ell, "lifting dimension");
    h2_cmd->add_option("--sigma", ha.sigma, "noise covariance");
    h2_cmd->add_option("--gamma-lo", ha.lo, "lower gamma bracket");
    h2_cmd->add_option("--gamma-hi", ha.hi, "upper gamma bracket");
    h2_cmd->add_option("--tol", ha.tol, "bisection tolerance");
    h2_cmd->add_flag("--no-phi", ha.no_phi, "disable the nonlinearity channel");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(certify_cmd)) return run_certify(ca);
        if (app.got_subcommand(maximize_cmd)) return run_maximize(ma);
        if (app.got_subcommand(bench_cmd)) return run_bench(ba);
        if (app.got_subcommand(validate_cmd)) return run_validate(va);
        if (app.got_subcommand(rate_cmd)) return run_rate(ra);
        if (app.got_subcommand(gain_cmd)) return run_gain(ga);
        if (app.got_subcommand(h2_cmd)) return run_h2(ha);
    } catch (const certify::NoFeasiblePoint& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitUsage;
}
