#include "riskchain/errors.hpp"
#include "riskchain/metrics.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace riskchain;
using nlohmann::json;
namespace fs = std::filesystem;

struct Cell {
    std::string scenario;
    std::uint64_t seed = 0;
    bool ok = false;
    MetricsReport metrics;
};

struct Aggregate {
    double mean = 0.0;
    double stdev = 0.0;
};

Aggregate aggregate(const std::vector<double>& xs) {
    Aggregate a;
    if (xs.empty()) return a;
    double sum = 0.0;
    for (double x : xs) sum += x;
    a.mean = sum / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - a.mean) * (x - a.mean);
    a.stdev = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
    return a;
}

struct Thresholds {
    double min_accuracy = 0.0;
    double min_precision = 0.0;
    double max_tc_mean_ms = 1e18;
    double max_db_ms = 1e18;
};

Thresholds load_thresholds(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open thresholds file '" + path + "'");
    json j = json::parse(in);
    Thresholds t;
    t.min_accuracy = j.value("min_accuracy", 0.0);
    t.min_precision = j.value("min_precision", 0.0);
    t.max_tc_mean_ms = j.value("max_tc_mean_ms", 1e18);
    t.max_db_ms = j.value("max_db_ms", 1e18);
    return t;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scenario suite harness: runs the CLI per cell and aggregates metrics"};

    std::string cli_path = "./riskchain";
    std::string out_dir = "bench_out";
    std::string thresholds_path;
    std::vector<std::string> scenarios{"S1", "S2", "S3"};
    std::vector<std::uint64_t> seeds{1, 2, 3};
    std::size_t n_tx = 10000;
    double warm = 0.2;

    app.add_option("--cli", cli_path, "Path to the simulator CLI binary");
    app.add_option("--out", out_dir, "Suite working directory");
    app.add_option("--thresholds", thresholds_path, "JSON thresholds file");
    app.add_option("--scenarios", scenarios, "Scenario presets to run");
    app.add_option("--seeds", seeds, "Seeds per scenario (>= 3 for variance reporting)");
    app.add_option("--n-tx", n_tx, "Transactions per cell");
    app.add_option("--warm-start", warm, "Warm-up fraction per cell");

    CLI11_PARSE(app, argc, argv);

    if (seeds.size() < 3) {
        std::cerr << "config error: at least 3 seeds are required for variance reporting\n";
        return 1;
    }

    Thresholds thresholds;
    if (!thresholds_path.empty()) {
        try {
            thresholds = load_thresholds(thresholds_path);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    }

    fs::create_directories(out_dir);
    std::vector<Cell> cells;
    bool any_cell_failed = false;

    for (const std::string& scenario : scenarios) {
        for (std::uint64_t seed : seeds) {
            Cell cell;
            cell.scenario = scenario;
            cell.seed = seed;
            fs::path cell_dir = fs::path(out_dir) / (scenario + "_seed" + std::to_string(seed));
            std::ostringstream cmd;
            cmd << '"' << cli_path << '"' << " run --scenario " << scenario << " --n-tx "
                << n_tx << " --seed " << seed << " --warm-start " << warm << " --out "
                << '"' << cell_dir.string() << '"' << " > "
                << '"' << (cell_dir.string() + ".log") << '"' << " 2>&1";
            int rc = std::system(cmd.str().c_str());
            if (rc == 0) {
                try {
                    std::ifstream in(cell_dir / "metrics.json");
                    std::string text((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
                    cell.metrics = metrics_from_json(text);
                    cell.ok = true;
                } catch (const std::exception& e) {
                    std::cerr << scenario << " seed " << seed
                              << ": cannot read metrics: " << e.what() << "\n";
                }
            } else {
                std::cerr << scenario << " seed " << seed << ": run failed (rc " << rc
                          << ")\n";
            }
            if (!cell.ok) any_cell_failed = true;
            cells.push_back(std::move(cell));
        }
    }

    // Per-scenario aggregation (mean +- stdev over seeds) and threshold checks.
    std::ofstream csv(fs::path(out_dir) / "suite.csv");
    csv << "scenario,n_seeds,accuracy_mean,accuracy_stdev,precision_mean,precision_stdev,"
           "tc_mean_ms,tc_stdev_ms,db_mean_ms,db_max_ms,l_total_mean_ms,pass\n";

    std::printf("%-8s %5s  %-19s %-19s %-16s %-10s %s\n", "scenario", "runs",
                "accuracy", "precision", "mean T_c (ms)", "max D_b", "verdict");
    bool all_pass = true;
    for (const std::string& scenario : scenarios) {
        std::vector<double> acc, prec, tc, db_mean, l_total;
        double db_max = 0.0;
        std::size_t n_ok = 0;
        for (const Cell& c : cells) {
            if (c.scenario != scenario || !c.ok) continue;
            n_ok += 1;
            if (c.metrics.accuracy) acc.push_back(*c.metrics.accuracy);
            if (c.metrics.precision) prec.push_back(*c.metrics.precision);
            tc.push_back(c.metrics.tc.mean);
            db_mean.push_back(c.metrics.db.mean);
            db_max = std::max(db_max, static_cast<double>(c.metrics.db.max));
            l_total.push_back(c.metrics.latency.total_mean);
        }
        Aggregate a_acc = aggregate(acc), a_prec = aggregate(prec), a_tc = aggregate(tc),
                  a_db = aggregate(db_mean), a_lt = aggregate(l_total);
        bool pass = n_ok == seeds.size() && a_acc.mean >= thresholds.min_accuracy &&
                    a_prec.mean >= thresholds.min_precision &&
                    a_tc.mean <= thresholds.max_tc_mean_ms && db_max <= thresholds.max_db_ms;
        all_pass = all_pass && pass;

        std::printf("%-8s %5zu  %8.4f +- %-8.4f %8.4f +- %-8.4f %9.1f +- %-5.1f %7.0f    %s\n",
                    scenario.c_str(), n_ok, a_acc.mean, a_acc.stdev, a_prec.mean,
                    a_prec.stdev, a_tc.mean, a_tc.stdev, db_max,
                    pass ? "PASS" : "FAIL");
        csv << scenario << ',' << n_ok << ',' << a_acc.mean << ',' << a_acc.stdev << ','
            << a_prec.mean << ',' << a_prec.stdev << ',' << a_tc.mean << ','
            << a_tc.stdev << ',' << a_db.mean << ',' << db_max << ',' << a_lt.mean << ','
            << (pass ? 1 : 0) << '\n';
    }

    if (any_cell_failed) {
        std::cout << "suite FAILED: one or more cells did not complete\n";
        return 1;
    }
    std::cout << (all_pass ? "suite PASS" : "suite FAIL") << "\n";
    return all_pass ? 0 : 1;
}
