// Command-line workbench driver: census, dimension, ensemble and
// exponential-sum subcommands over the header-only library.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zaremba/census.hpp"
#include "zaremba/dimension.hpp"
#include "zaremba/ensemble.hpp"
#include "zaremba/ensemble_io.hpp"
#include "zaremba/expsum.hpp"

namespace {

using namespace zaremba;

// Exit codes: 0 ok, 2 config/precondition, 3 infeasible parameters,
// 4 arithmetic overflow, 5 I/O.
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitOverflow = 4;
constexpr int kExitIo = 5;

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

unsigned default_threads() {
    if (const char* env = std::getenv("ZAREMBA_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return unsigned(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

std::vector<uint64_t> parse_grid(const std::string& spec) {
    std::vector<uint64_t> grid;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v = std::stod(item);  // accepts 1e5 style
        if (v < 1) throw std::domain_error("grid values must be >= 1");
        grid.push_back(uint64_t(v));
    }
    if (grid.empty()) throw std::domain_error("empty grid");
    return grid;
}

struct OutStream {
    std::ofstream file;
    std::ostream* os = &std::cout;
    explicit OutStream(const std::string& path) {
        if (!path.empty()) {
            file.open(path);
            if (!file) throw std::ios_base::failure("cannot open " + path);
            os = &file;
        }
    }
    std::ostream& get() { return *os; }
};

void emit_timestamp(std::ostream& os, bool suppress) {
    if (suppress) return;
    std::time_t t = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    os << "# generated " << buf << "\n";
}

BuildMode parse_mode(const std::string& spec, double& scale) {
    if (spec == "strict") return BuildMode::strict;
    if (spec.rfind("relaxed", 0) == 0) {
        auto colon = spec.find(':');
        scale = colon == std::string::npos ? 1.0 : std::stod(spec.substr(colon + 1));
        return BuildMode::relaxed;
    }
    throw std::domain_error("mode must be 'strict' or 'relaxed[:scale]'");
}

int run(int argc, char** argv) {
    CLI::App app{"Continued-fraction denominator census and ensemble workbench"};
    app.require_subcommand(1);

    std::string alphabet_spec = "1-5";
    unsigned threads = default_threads();
    std::string out_path;
    bool no_timestamp = false;
    app.add_option("--threads", threads, "worker thread count");

    // census ---------------------------------------------------------------
    auto* census = app.add_subcommand("census", "enumerate words and attained denominators");
    double census_limit = 1e5;
    std::string census_grid;
    std::string gaps_path;
    std::string emit = "csv";
    bool check_bounds = false;
    double bounds_delta = 0.8368;
    census->add_option("--alphabet", alphabet_spec, "letters, e.g. 1-5 or 1,2,4");
    census->add_option("--limit", census_limit, "norm bound N")->required(false);
    census->add_option("--grid", census_grid, "comma list of x grid points (default: just N)");
    census->add_option("--emit", emit, "csv or json");
    census->add_option("--out", out_path, "output path (default stdout)");
    census->add_option("--gaps-out", gaps_path, "write missing denominators as CSV");
    census->add_flag("--no-timestamp", no_timestamp, "suppress the timestamp header line");
    census->add_flag("--check-bounds", check_bounds, "evaluate the counting-bound inequalities");
    census->add_option("--delta", bounds_delta, "dimension value for the bound check");

    // zaremba --------------------------------------------------------------
    auto* zar = app.add_subcommand("zaremba", "first missing denominator, if any");
    double zar_limit = 1e5;
    zar->add_option("--alphabet", alphabet_spec);
    zar->add_option("--limit", zar_limit)->required();

    // dimension ------------------------------------------------------------
    auto* dim = app.add_subcommand("dimension", "dimension estimates");
    std::string method = "fit";
    std::string dim_grid = "1e3,1e4,1e5,1e6";
    int hensley_a = 5;
    dim->add_option("--alphabet", alphabet_spec);
    dim->add_option("--method", method, "hensley | fit | reference");
    dim->add_option("--grid", dim_grid, "census grid for the fit");
    dim->add_option("--a", hensley_a, "alphabet top letter for the asymptotic");
    dim->add_option("--out", out_path);
    dim->add_flag("--no-timestamp", no_timestamp);

    // ensemble -------------------------------------------------------------
    auto* ens = app.add_subcommand("ensemble", "build / verify / split ensembles");
    ens->require_subcommand(1);
    auto* ens_build = ens->add_subcommand("build");
    double ens_n = 1e12, ens_eps = 0.05;
    std::string mode_spec = "relaxed:1";
    std::string ens_out = "ensemble.json";
    ens_build->add_option("--n", ens_n, "target scale N")->required();
    ens_build->add_option("--eps", ens_eps, "epsilon_0");
    ens_build->add_option("--mode", mode_spec, "strict | relaxed[:scale]");
    ens_build->add_option("--alphabet", alphabet_spec);
    ens_build->add_option("--out", ens_out, "ensemble JSON path");

    auto* ens_verify = ens->add_subcommand("verify");
    std::string ens_in;
    size_t verify_samples = 1024;
    ens_verify->add_option("--in", ens_in)->required();
    ens_verify->add_option("--samples", verify_samples);

    auto* ens_split = ens->add_subcommand("split");
    double split_m = 0;
    ens_split->add_option("--in", ens_in)->required();
    ens_split->add_option("--m", split_m, "split scale M")->required();

    // expsum ---------------------------------------------------------------
    auto* exp = app.add_subcommand("expsum", "exponential-sum computations");
    exp->require_subcommand(1);
    auto* exp_l2 = exp->add_subcommand("l2");
    std::string exp_ens;
    exp_l2->add_option("--ensemble", exp_ens, "ensemble JSON path")->required();
    exp_l2->add_option("--out", out_path);
    exp_l2->add_flag("--no-timestamp", no_timestamp);

    auto* exp_sweep = exp->add_subcommand("sweep");
    size_t sweep_nodes = 1000;
    exp_sweep->add_option("--ensemble", exp_ens)->required();
    exp_sweep->add_option("--nodes", sweep_nodes);
    exp_sweep->add_option("--out", out_path);
    exp_sweep->add_flag("--no-timestamp", no_timestamp);

    auto* exp_ky = exp->add_subcommand("knuth-yao");
    std::string ky_grid = "1000,10000,100000";
    exp_ky->add_option("--b", ky_grid, "comma list of moduli");
    exp_ky->add_option("--out", out_path);
    exp_ky->add_flag("--no-timestamp", no_timestamp);

    auto* exp_dir = exp->add_subcommand("dirichlet");
    double dir_theta = 0;
    double dir_n = 1e6;
    int dir_a = 2;
    exp_dir->add_option("--theta", dir_theta)->required();
    exp_dir->add_option("--n", dir_n);
    exp_dir->add_option("--a", dir_a, "alphabet top letter A");

    CLI11_PARSE(app, argc, argv);

    if (census->parsed()) {
        Alphabet alphabet = Alphabet::parse(alphabet_spec);
        std::vector<uint64_t> grid =
            census_grid.empty() ? std::vector<uint64_t>{uint64_t(census_limit)}
                                : parse_grid(census_grid);
        CensusScan scan = census_scan(alphabet, grid, threads, true);
        // distinct/missing per grid point from one prefix pass over the bitset
        std::vector<uint64_t> distinct(grid.size(), 0);
        {
            uint64_t acc = 0;
            size_t gi = 0;
            for (uint64_t d = 1; d <= scan.grid.back() && gi < scan.grid.size(); ++d) {
                acc += scan.attained(d) ? 1 : 0;
                while (gi < scan.grid.size() && d == scan.grid[gi]) distinct[gi++] = acc;
            }
        }
        OutStream out(out_path);
        if (emit == "json") {
            nlohmann::json j;
            for (size_t i = 0; i < scan.grid.size(); ++i)
                j["rows"].push_back({{"x", scan.grid[i]},
                                     {"word_count", scan.counts[i]},
                                     {"distinct", distinct[i]},
                                     {"missing_count", scan.grid[i] - distinct[i]}});
            if (check_bounds) {
                for (uint64_t x : scan.grid) {
                    KanHenVerdict v = check_kan_hen(alphabet, x, bounds_delta, threads);
                    j["bounds"].push_back({{"x", x},
                                           {"upper_ok", v.upper_ok},
                                           {"diff_ok", v.diff_ok},
                                           {"lower_ok", v.lower_ok},
                                           {"ratio", v.ratio}});
                }
            }
            out.get() << j.dump(2) << "\n";
        } else {
            emit_timestamp(out.get(), no_timestamp);
            out.get() << "x,word_count,distinct,missing_count\n";
            for (size_t i = 0; i < scan.grid.size(); ++i)
                out.get() << scan.grid[i] << "," << scan.counts[i] << "," << distinct[i] << ","
                          << (scan.grid[i] - distinct[i]) << "\n";
        }
        if (!gaps_path.empty()) {
            std::ofstream gaps(gaps_path);
            if (!gaps) throw std::ios_base::failure("cannot open " + gaps_path);
            gaps << "d\n";
            for (uint64_t d = 1; d <= scan.grid.back(); ++d)
                if (!scan.attained(d)) gaps << d << "\n";
        }
        return 0;
    }

    if (zar->parsed()) {
        Alphabet alphabet = Alphabet::parse(alphabet_spec);
        auto missing = zaremba_verify(alphabet, uint64_t(zar_limit), threads);
        if (missing)
            std::cout << "first_missing," << *missing << "\n";
        else
            std::cout << "first_missing,none\n";
        return 0;
    }

    if (dim->parsed()) {
        if (method != "hensley" && method != "reference" && method != "fit")
            throw std::domain_error("unknown dimension method: " + method);
        OutStream out(out_path);
        emit_timestamp(out.get(), no_timestamp);
        out.get() << "A,method,estimate,residual\n";
        if (method == "hensley") {
            DimensionEstimate est = hensley_estimate(hensley_a);
            out.get() << hensley_a << "," << est.method << "," << fmt12(est.value) << ",0\n";
        } else if (method == "reference") {
            Alphabet alphabet = Alphabet::parse(alphabet_spec);
            auto est = reference_dimension(alphabet);
            if (!est) throw std::domain_error("no tabulated dimension for this alphabet");
            out.get() << alphabet.max_letter() << "," << est->method << ","
                      << fmt12(est->value) << ",0\n";
        } else if (method == "fit") {
            Alphabet alphabet = Alphabet::parse(alphabet_spec);
            DimensionEstimate est = fit_dimension(alphabet, parse_grid(dim_grid), threads);
            out.get() << alphabet.max_letter() << "," << est.method << "," << fmt12(est.value)
                      << "," << fmt12(est.residual) << "\n";
        } else {
            throw std::domain_error("unknown dimension method: " + method);
        }
        return 0;
    }

    if (ens_build->parsed()) {
        Alphabet alphabet = Alphabet::parse(alphabet_spec);
        double scale = 1.0;
        BuildMode mode = parse_mode(mode_spec, scale);
        Ensemble e = build_ensemble(ens_n, ens_eps, alphabet, mode, scale);
        save_ensemble(e, ens_out);
        std::cout << "factors," << e.factor_count() << "\n";
        std::cout << "J," << e.params.J << "\n";
        for (size_t i = 0; i < e.factors.size(); ++i)
            std::cout << "factor_size," << (i + 1) << "," << e.factors[i].size() << "\n";
        return 0;
    }

    if (ens_verify->parsed()) {
        Ensemble e = load_ensemble(ens_in);
        bool all_ok = true;
        for (size_t i = 0; i < e.factors.size(); ++i) {
            PreEnsembleCheck c = verify_pre_ensemble(e.factors[i]);
            GoldenRatioReport g = verify_golden_ratio(e.factors[i]);
            all_ok = all_ok && c.ok() && g.ok();
            std::cout << "factor," << (i + 1) << ",structure," << (c.ok() ? "ok" : "FAIL")
                      << ",golden," << (g.ok() ? "ok" : "FAIL") << ",max_dev,"
                      << fmt12(std::max(g.max_dev_b, g.max_dev_c)) << "\n";
        }
        NormCheckReport nr = verify_ensemble_norms(e, verify_samples);
        UniqueExpansionReport ur = verify_unique_expansion(e, verify_samples);
        all_ok = all_ok && nr.ok() && ur.ok();
        std::cout << "norms," << (nr.ok() ? "ok" : "FAIL") << "\n";
        std::cout << "unique_expansion," << (ur.ok() ? "ok" : "FAIL") << "\n";
        return all_ok ? 0 : kExitConfig;
    }

    if (ens_split->parsed()) {
        Ensemble e = load_ensemble(ens_in);
        EnsembleSplit s = split_at(e, split_m);
        std::cout << "j_hat," << s.j_hat << "\n";
        std::cout << "h_hat," << s.h_hat << "\n";
        std::cout << "prefix,1.." << s.prefix_last << "\n";
        std::cout << "suffix," << s.suffix_first << ".." << s.suffix_last << "\n";
        return 0;
    }

    if (exp_l2->parsed()) {
        Ensemble e = load_ensemble(exp_ens);
        NormHistogram h = ensemble_histogram(e);
        OutStream out(out_path);
        emit_timestamp(out.get(), no_timestamp);
        out.get() << "N,total,l2,ratio\n";
        out.get() << fmt12(e.params.n) << "," << h.total << "," << to_string(l2_integral(h))
                  << "," << fmt12(l2_ratio(h, e.params.n)) << "\n";
        return 0;
    }

    if (exp_sweep->parsed()) {
        Ensemble e = load_ensemble(exp_ens);
        NormHistogram h = ensemble_histogram(e);
        OutStream out(out_path);
        emit_timestamp(out.get(), no_timestamp);
        out.get() << "theta,re,im,abs\n";
        for (size_t i = 0; i < sweep_nodes; ++i) {
            double theta = double(i) / double(sweep_nodes);
            std::complex<double> v = s_theta(h, theta);
            out.get() << fmt12(theta) << "," << fmt12(v.real()) << "," << fmt12(v.imag()) << ","
                      << fmt12(std::abs(v)) << "\n";
        }
        return 0;
    }

    if (exp_ky->parsed()) {
        OutStream out(out_path);
        emit_timestamp(out.get(), no_timestamp);
        out.get() << "b,sum,ratio\n";
        for (uint64_t b : parse_grid(ky_grid)) {
            KnuthYaoReport r = knuth_yao_check(b);
            out.get() << r.b << "," << to_string(r.sum) << "," << fmt12(r.ratio) << "\n";
        }
        return 0;
    }

    if (exp_dir->parsed()) {
        ThetaDecomposition d = dirichlet_decompose(dir_theta, uint64_t(dir_n), dir_a);
        std::cout << "a," << d.a << "\nq," << d.q << "\nK," << fmt12(d.big_k) << "\n";
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const zaremba::infeasible_parameters& e) {
        std::cerr << "infeasible parameters: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const zaremba::construction_empty& e) {
        std::cerr << "construction empty: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const zaremba::overflow_error& e) {
        std::cerr << "overflow: " << e.what() << "\n";
        return kExitOverflow;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}
