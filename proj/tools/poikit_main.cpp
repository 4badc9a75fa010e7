// poikit: extract points of interest from GPS trajectory CSVs and validate
// them against annotated ground truth.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "poikit/clustering.hpp"
#include "poikit/io.hpp"
#include "poikit/parallel.hpp"
#include "poikit/synth.hpp"
#include "poikit/validation.hpp"

namespace {

using namespace poikit;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string format_value(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// ---- algorithm parameter vocabulary -----------------------------------------

struct ParamSpec {
    std::string name;
    std::string unit;
    bool integer = false;
    double min_value = 0.0;
    bool min_exclusive = false;
    double default_value = 0.0;
};

const std::map<std::string, std::vector<ParamSpec>>& algorithm_vocabulary() {
    static const std::map<std::string, std::vector<ParamSpec>> vocab = {
        {"kmeans",
         {{"k", "count", true, 1.0, false, 100.0},
          {"max_iterations", "count", true, 1.0, false, 100.0}}},
        {"dbscan",
         {{"eps", "degrees", false, 0.0, true, 0.001},
          {"min_pts", "count", true, 1.0, false, 30.0}}},
        {"djcluster",
         {{"r", "meters", false, 0.0, true, 60.0},
          {"min_pts", "count", true, 1.0, false, 20.0},
          {"speed_threshold", "km/h", false, 0.0, false, 1.5}}},
        {"dtcluster",
         {{"d", "meters", false, 0.0, true, 60.0},
          {"t", "seconds", false, 0.0, true, 900.0}}},
        {"gtgen",
         {{"d", "meters", false, 0.0, true, 60.0},
          {"t", "seconds", false, 0.0, true, 900.0},
          {"min_visits", "count", true, 1.0, false, 3.0}}},
    };
    return vocab;
}

std::string vocabulary_summary() {
    std::ostringstream os;
    for (const auto& [algo, specs] : algorithm_vocabulary()) {
        os << "  " << algo << ":";
        for (const ParamSpec& s : specs) {
            os << " " << s.name << " (" << s.unit << ", default " << format_value(s.default_value)
               << ")";
        }
        os << "\n";
    }
    return os.str();
}

const std::vector<ParamSpec>& specs_for(const std::string& algo) {
    const auto& vocab = algorithm_vocabulary();
    auto it = vocab.find(algo);
    if (it == vocab.end()) {
        throw UsageError("unknown algorithm '" + algo + "'; accepted algorithms and parameters:\n" +
                         vocabulary_summary());
    }
    return it->second;
}

const ParamSpec& spec_for(const std::string& algo, const std::string& name) {
    for (const ParamSpec& s : specs_for(algo)) {
        if (s.name == name) {
            return s;
        }
    }
    std::ostringstream os;
    os << "unknown parameter '" << name << "' for " << algo << "; accepted:";
    for (const ParamSpec& s : specs_for(algo)) {
        os << " " << s.name << " (" << s.unit << ")";
    }
    throw UsageError(os.str());
}

double check_value(const ParamSpec& spec, const std::string& token) {
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(v)) {
        throw UsageError("parameter '" + spec.name + "': cannot parse value '" + token + "'");
    }
    if (spec.integer && v != std::floor(v)) {
        throw UsageError("parameter '" + spec.name + "' must be an integer (" + spec.unit + ")");
    }
    const bool ok = spec.min_exclusive ? v > spec.min_value : v >= spec.min_value;
    if (!ok) {
        throw UsageError("parameter '" + spec.name + "' must be " +
                         (spec.min_exclusive ? "> " : ">= ") + format_value(spec.min_value) + " " +
                         spec.unit);
    }
    return v;
}

// Parsed --param assignments: each name maps to one or more values.
std::map<std::string, std::vector<double>> parse_assignments(
    const std::string& algo, const std::vector<std::string>& raw) {
    std::map<std::string, std::vector<double>> values;
    for (const std::string& assignment : raw) {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == assignment.size()) {
            throw UsageError("--param expects name=value, got '" + assignment + "'");
        }
        const std::string name = assignment.substr(0, eq);
        const ParamSpec& spec = spec_for(algo, name);
        if (values.contains(name)) {
            throw UsageError("parameter '" + name + "' given twice");
        }
        std::vector<double>& list = values[name];
        std::stringstream ss(assignment.substr(eq + 1));
        std::string token;
        while (std::getline(ss, token, ',')) {
            list.push_back(check_value(spec, token));
        }
        if (list.empty()) {
            throw UsageError("parameter '" + name + "' has no values");
        }
    }
    return values;
}

AlgoParams build_params(const std::string& algo, const std::map<std::string, double>& kv,
                        std::uint64_t seed) {
    auto get = [&](const char* name) { return kv.at(name); };
    if (algo == "kmeans") {
        return KMeansParams{static_cast<int>(get("k")), static_cast<int>(get("max_iterations")),
                            seed};
    }
    if (algo == "dbscan") {
        return DbscanParams{get("eps"), static_cast<int>(get("min_pts"))};
    }
    if (algo == "djcluster") {
        return DjParams{get("r"), static_cast<int>(get("min_pts")), get("speed_threshold")};
    }
    if (algo == "dtcluster") {
        return DtParams{get("d"), get("t")};
    }
    return GtGenParams{get("d"), get("t"), static_cast<int>(get("min_visits"))};
}

// Resolves assignments against defaults. Multi-valued assignments are only
// legal when `sweepable`, and only for one parameter: the sweep axis.
std::vector<SweepCell> build_cells(const std::string& algo,
                                   const std::map<std::string, std::vector<double>>& assignments,
                                   std::uint64_t seed, bool sweepable) {
    std::map<std::string, double> fixed;
    for (const ParamSpec& s : specs_for(algo)) {
        fixed[s.name] = s.default_value;
    }
    std::string axis;
    std::vector<double> axis_values;
    for (const auto& [name, list] : assignments) {
        if (list.size() == 1) {
            fixed[name] = list.front();
        } else if (!sweepable) {
            throw UsageError("parameter '" + name + "' takes a single value here");
        } else if (!axis.empty()) {
            throw UsageError("only one parameter may carry a value list (axis already '" + axis +
                             "')");
        } else {
            axis = name;
            axis_values = list;
        }
    }

    std::vector<SweepCell> cells;
    if (axis.empty()) {
        std::string label;
        for (const auto& [name, value] : fixed) {
            label += (label.empty() ? "" : ";") + name + "=" + format_value(value);
        }
        cells.push_back({label, build_params(algo, fixed, seed)});
    } else {
        for (double v : axis_values) {
            auto kv = fixed;
            kv[axis] = v;
            cells.push_back({axis + "=" + format_value(v), build_params(algo, kv, seed)});
        }
    }
    return cells;
}

AlgoParams single_cell(const std::string& algo, const std::vector<std::string>& raw,
                       std::uint64_t seed) {
    return build_cells(algo, parse_assignments(algo, raw), seed, false).front().params;
}

// ---- subcommand bodies -------------------------------------------------------

std::map<std::string, std::vector<Cluster>> cluster_all(
    const std::map<std::string, Trajectory>& trajectories, const AlgoParams& params) {
    std::vector<const std::pair<const std::string, Trajectory>*> users;
    users.reserve(trajectories.size());
    for (const auto& entry : trajectories) {
        users.push_back(&entry);
    }
    std::vector<std::vector<Cluster>> slots(users.size());
    parallel_for(users.size(), [&](std::size_t i) {
        try {
            slots[i] = run_algorithm(users[i]->second, params);
        } catch (const std::exception& e) {
            throw std::runtime_error("user '" + users[i]->first + "': " + e.what());
        }
    });
    std::map<std::string, std::vector<Cluster>> out;
    for (std::size_t i = 0; i < users.size(); ++i) {
        out.emplace(users[i]->first, std::move(slots[i]));
    }
    return out;
}

int run_cluster(const std::string& input, const std::string& output, const std::string& algo,
                const std::vector<std::string>& raw_params, std::uint64_t seed) {
    const AlgoParams params = single_cell(algo, raw_params, seed);
    const auto trajectories = read_trajectories(input);
    const auto clusters = cluster_all(trajectories, params);
    std::size_t total = 0;
    for (const auto& [user, list] : clusters) {
        total += list.size();
    }
    write_clusters(clusters, output);
    std::cout << algo << ": " << total << " clusters across " << clusters.size()
              << " users -> " << output << "\n";
    return kExitOk;
}

int run_count(const std::string& input, const std::string& output, const std::string& algo,
              const std::vector<std::string>& raw_params, std::uint64_t seed) {
    const AlgoParams params = single_cell(algo, raw_params, seed);
    const auto trajectories = read_trajectories(input);
    const auto clusters = cluster_all(trajectories, params);
    std::ostringstream table;
    table << "user_id,clusters\n";
    for (const auto& [user, list] : clusters) {
        table << user << "," << list.size() << "\n";
    }
    std::cout << table.str();
    if (!output.empty()) {
        std::ofstream out(output, std::ios::binary);
        if (!out) {
            throw IoError("cannot write " + output);
        }
        out << table.str();
    }
    return kExitOk;
}

int run_validate(const std::string& clusters_path, const std::string& gt_path, double d_m,
                 const std::string& output) {
    if (d_m <= 0.0) {
        throw UsageError("--d-meters must be positive");
    }
    const auto clusters = read_clusters(clusters_path);
    const auto ground_truth = read_ground_truth(gt_path);

    ConfusionCounts total;
    for (const auto& [user, gt] : ground_truth) {
        static const std::vector<ClusterRecord> kNone;
        auto it = clusters.find(user);
        const auto refs = cluster_refs(it != clusters.end() ? it->second : kNone);
        const auto links = link_ground_truth(gt, refs);
        total += classify(links, gt, d_m);
    }
    const RocRates rates = roc_rates(total);
    std::cout << "tp=" << total.tp << " fp=" << total.fp << " tn=" << total.tn
              << " fn=" << total.fn << "\n";
    std::cout << "tpr=" << format_value(rates.tpr) << " fpr=" << format_value(rates.fpr) << "\n";
    if (!rates.tpr_defined) {
        std::cout << "warning: no validated-yes points, tpr reported as 0\n";
    }
    if (!rates.fpr_defined) {
        std::cout << "warning: no validated-no points, fpr reported as 0\n";
    }
    if (!output.empty()) {
        const RocPoint point{"d=" + format_value(d_m), rates.fpr, rates.tpr};
        write_roc({&point, 1}, output);
    }
    return kExitOk;
}

int run_sweep(const std::string& input, const std::string& gt_path, const std::string& algo,
              const std::vector<std::string>& raw_params, double d_m, const std::string& output,
              std::uint64_t seed) {
    if (d_m <= 0.0) {
        throw UsageError("--d-meters must be positive");
    }
    const auto cells = build_cells(algo, parse_assignments(algo, raw_params), seed, true);
    const auto trajectories = read_trajectories(input);
    const auto ground_truth = read_ground_truth(gt_path);

    std::vector<ConfusionCounts> counts;
    const auto points = sweep(trajectories, ground_truth, cells, d_m, &counts);
    write_roc(points, output);
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::cout << points[i].parameter_label << ": tpr=" << format_value(points[i].tpr)
                  << " fpr=" << format_value(points[i].fpr) << " (tp=" << counts[i].tp
                  << " fp=" << counts[i].fp << " tn=" << counts[i].tn << " fn=" << counts[i].fn
                  << ")\n";
    }
    std::cout << points.size() << " roc points -> " << output << "\n";
    return kExitOk;
}

int run_synth(const SynthScenario& scenario, const std::string& out_traj,
              const std::string& out_gt, const std::string& out_pois) {
    const SynthOutput result = generate(scenario);
    write_trajectories(result.trajectories, out_traj);
    write_ground_truth(result.ground_truth, out_gt);
    if (!out_pois.empty()) {
        std::ofstream out(out_pois, std::ios::binary);
        if (!out) {
            throw IoError("cannot write " + out_pois);
        }
        out << "user_id,poi_id,lat,lon\n";
        for (const auto& [user, pois] : result.true_pois) {
            for (std::size_t i = 0; i < pois.size(); ++i) {
                out << user << "," << i << "," << format_value(pois[i].lat) << ","
                    << format_value(pois[i].lon) << "\n";
            }
        }
    }
    std::size_t fixes = 0;
    for (const auto& [user, traj] : result.trajectories) {
        fixes += traj.size();
    }
    std::cout << result.trajectories.size() << " users, " << fixes << " fixes -> " << out_traj
              << ", " << out_gt << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"poikit: POI extraction from GPS trajectories with ROC validation"};
    app.require_subcommand(1);

    const std::string algo_help =
        "clustering algorithm; accepted algorithms and parameters:\n" + vocabulary_summary();
    const std::string param_help =
        "algorithm parameter as name=value (repeatable); units are listed under --algo";

    std::string input, output, clusters_path, gt_path, algo, out_pois;
    std::vector<std::string> raw_params;
    std::uint64_t seed = 1;
    double d_m = 100.0;

    auto* cmd_cluster = app.add_subcommand("cluster", "extract clusters from a trajectory CSV");
    cmd_cluster->add_option("--input", input, "trajectory CSV path")->required();
    cmd_cluster->add_option("--output", output, "cluster document path (JSON)")->required();
    cmd_cluster->add_option("--algo", algo, algo_help)->required();
    cmd_cluster->add_option("--param", raw_params, param_help);
    cmd_cluster->add_option("--seed", seed, "RNG seed (k-means initialization)");

    auto* cmd_count = app.add_subcommand("count", "per-user cluster counts");
    cmd_count->add_option("--input", input, "trajectory CSV path")->required();
    cmd_count->add_option("--output", output, "optional CSV output path (user_id,clusters)");
    cmd_count->add_option("--algo", algo, algo_help)->required();
    cmd_count->add_option("--param", raw_params, param_help);
    cmd_count->add_option("--seed", seed, "RNG seed (k-means initialization)");

    auto* cmd_validate =
        app.add_subcommand("validate", "confusion counts and rates for clusters vs ground truth");
    cmd_validate->add_option("--clusters", clusters_path, "cluster document path (JSON)")
        ->required();
    cmd_validate->add_option("--ground-truth", gt_path, "ground-truth CSV path")->required();
    cmd_validate->add_option("--d-meters", d_m, "validation zone radius in meters (default 100)");
    cmd_validate->add_option("--output", output, "optional single-row ROC CSV path");

    auto* cmd_sweep = app.add_subcommand(
        "sweep", "run a parameter grid and write a ROC CSV (one point per grid cell)");
    cmd_sweep->add_option("--input", input, "trajectory CSV path")->required();
    cmd_sweep->add_option("--ground-truth", gt_path, "ground-truth CSV path")->required();
    cmd_sweep->add_option("--algo", algo, algo_help)->required();
    cmd_sweep->add_option("--param", raw_params,
                          std::string(param_help) +
                              "; exactly one parameter may carry a comma-separated value list "
                              "(the sweep axis)");
    cmd_sweep->add_option("--d-meters", d_m, "validation zone radius in meters (default 100)");
    cmd_sweep->add_option("--output", output, "ROC CSV output path")->required();
    cmd_sweep->add_option("--seed", seed, "RNG seed (k-means initialization)");

    SynthScenario scenario;
    std::string out_traj, out_gt;
    auto* cmd_synth =
        app.add_subcommand("synth", "generate a synthetic trajectory/ground-truth CSV pair");
    cmd_synth->add_option("--out-trajectories", out_traj, "trajectory CSV output path")
        ->required();
    cmd_synth->add_option("--out-ground-truth", out_gt, "ground-truth CSV output path")
        ->required();
    cmd_synth->add_option("--out-pois", out_pois, "optional true-POI CSV output path");
    cmd_synth->add_option("--seed", scenario.seed, "scenario seed (default 42)");
    cmd_synth->add_option("--users", scenario.n_users, "number of users (default 5)");
    cmd_synth->add_option("--pois", scenario.n_pois_per_user, "true POIs per user (default 8)");
    cmd_synth->add_option("--days", scenario.n_days, "days of data per user (default 14)");
    cmd_synth->add_option("--sample-interval", scenario.sample_interval_s,
                          "seconds between fixes (default 60; 50 is the common alternative)");
    cmd_synth->add_option("--dwell-min", scenario.dwell_minutes_range.first,
                          "minimum dwell duration in minutes (default 20)");
    cmd_synth->add_option("--dwell-max", scenario.dwell_minutes_range.second,
                          "maximum dwell duration in minutes (default 120)");
    cmd_synth->add_option("--travel-speed", scenario.travel_speed_kmh,
                          "transition speed in km/h (default 20)");
    cmd_synth->add_option("--noise-sigma", scenario.gps_noise_sigma_m,
                          "GPS noise sigma in meters (default 12)");
    cmd_synth->add_option("--decoy-fraction", scenario.decoy_fraction,
                          "fraction of ground-truth points annotated no (default 0.5)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*cmd_cluster) {
            return run_cluster(input, output, algo, raw_params, seed);
        }
        if (*cmd_count) {
            return run_count(input, output, algo, raw_params, seed);
        }
        if (*cmd_validate) {
            return run_validate(clusters_path, gt_path, d_m, output);
        }
        if (*cmd_sweep) {
            return run_sweep(input, gt_path, algo, raw_params, d_m, output, seed);
        }
        return run_synth(scenario, out_traj, out_gt, out_pois);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
