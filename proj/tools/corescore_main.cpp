// corescore: core-periphery structure analysis for weighted networks.
//
// Subcommands: score, bench, votes, baselines, centrality, synth.
// Exit codes: 0 success, 1 input/data error, 2 invalid configuration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "corescore/corescore.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace corescore;

namespace {

struct ScheduleOptions {
    double t0 = 1.0;
    double t_stop = 1e-8;
    double cooling = 0.8;
    int max_rejections = 1000;
    int max_tries = 300;
    int max_successes = 20;
    int restarts = 1;

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--t0", t0, "Initial annealing temperature");
        cmd->add_option("--t-stop", t_stop, "Stop temperature");
        cmd->add_option("--cooling", cooling, "Geometric cooling factor in (0,1)");
        cmd->add_option("--max-rejections", max_rejections, "Max consecutive rejections");
        cmd->add_option("--max-tries", max_tries, "Max tries per temperature");
        cmd->add_option("--max-successes", max_successes, "Max successes per temperature");
        cmd->add_option("--restarts", restarts, "Independent annealing restarts");
    }

    AnnealSchedule resolve(std::uint64_t seed) const {
        AnnealSchedule schedule;
        schedule.initial_temperature = t0;
        schedule.stop_temperature = t_stop;
        schedule.cooling_factor = cooling;
        schedule.max_consecutive_rejections = max_rejections;
        schedule.max_tries_per_temperature = max_tries;
        schedule.max_successes_per_temperature = max_successes;
        schedule.restarts = restarts;
        schedule.seed = seed;
        schedule.validate();
        return schedule;
    }

    json to_json() const {
        return json{{"initial_temperature", t0},
                    {"stop_temperature", t_stop},
                    {"cooling_factor", cooling},
                    {"max_consecutive_rejections", max_rejections},
                    {"max_tries_per_temperature", max_tries},
                    {"max_successes_per_temperature", max_successes},
                    {"restarts", restarts}};
    }
};

struct GridOptions {
    std::string grid_spec = "100x100";
    std::vector<double> alphas;
    std::vector<double> betas;

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--grid", grid_spec, "Midpoint grid size as AxB (default 100x100)");
        cmd->add_option("--alpha", alphas, "Explicit alpha value(s), overrides the grid rows")
            ->delimiter(',');
        cmd->add_option("--beta", betas, "Explicit beta value(s), overrides the grid columns")
            ->delimiter(',');
    }

    ParameterGrid resolve() const {
        int n_alpha = 0;
        int n_beta = 0;
        char sep = 0;
        std::istringstream in(grid_spec);
        if (!(in >> n_alpha >> sep >> n_beta) || sep != 'x' || n_alpha < 1 || n_beta < 1 ||
            !in.eof()) {
            throw std::invalid_argument("bad --grid '" + grid_spec + "', expected AxB");
        }
        ParameterGrid grid = ParameterGrid::midpoints(n_alpha, n_beta);
        if (!alphas.empty()) {
            grid.alphas = alphas;
            std::sort(grid.alphas.begin(), grid.alphas.end());
        }
        if (!betas.empty()) {
            grid.betas = betas;
            std::sort(grid.betas.begin(), grid.betas.end());
        }
        grid.validate();
        return grid;
    }
};

struct MethodFlags {
    bool minres = false;
    bool strength = false;
    bool closeness = false;
    bool betweenness = false;
    bool eigenvector = false;
    bool all = false;

    void add_flags(CLI::App* cmd) {
        cmd->add_flag("--with-minres", minres, "Also report minres coreness");
        cmd->add_flag("--with-strength", strength, "Also report strength");
        cmd->add_flag("--with-closeness", closeness, "Also report closeness");
        cmd->add_flag("--with-betweenness", betweenness, "Also report betweenness");
        cmd->add_flag("--with-eigenvector", eigenvector, "Also report eigenvector centrality");
        cmd->add_flag("--all-methods", all, "Report every comparator column");
    }
};

PathMode parse_path_mode(const std::string& mode) {
    if (mode == "hop") return PathMode::HopCount;
    if (mode == "weight") return PathMode::WeightSum;
    throw std::invalid_argument("bad --closeness-mode '" + mode + "', expected hop|weight");
}

WeightedGraph load_graph(const std::string& path) {
    return parse_edge_list(read_file(path));
}

void ensure_output_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory: " + dir);
}

void write_metadata(const std::string& dir, const std::string& command, std::uint64_t seed,
                    const json& config) {
    json meta{{"tool", "corescore"},
              {"version", kVersion},
              {"command", command},
              {"seed", seed},
              {"config", config}};
    write_file(dir + "/metadata.json", meta.dump(2) + "\n");
}

json grid_to_json(const ParameterGrid& grid) {
    return json{{"alphas", grid.alphas}, {"betas", grid.betas}};
}

/// Options shared by `score` and `votes --score`.
struct ScoreOptions {
    GridOptions grid;
    ScheduleOptions schedule;
    MethodFlags methods;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string closeness_mode = "weight";
    double betweenness_threshold = -1.0;  // < 0: use the graph as-is
    bool warm_start = false;
    bool weighted_neighbor_sum = false;

    void add_flags(CLI::App* cmd) {
        grid.add_flags(cmd);
        schedule.add_flags(cmd);
        methods.add_flags(cmd);
        cmd->add_option("--seed", seed, "RNG seed; recorded in metadata");
        cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
        cmd->add_option("--closeness-mode", closeness_mode,
                        "Distance mode for closeness: hop|weight (default weight)");
        cmd->add_option("--betweenness-threshold", betweenness_threshold,
                        "Binarize at this threshold before betweenness");
        cmd->add_flag("--warm-start", warm_start,
                      "Start the first restart from a strength-descending placement");
        cmd->add_flag("--weighted-neighbor-sum", weighted_neighbor_sum,
                      "Weight the aggregation neighbor sum by edge weight (off per definition)");
    }

    json to_json(const ParameterGrid& resolved_grid) const {
        return json{{"grid", grid_to_json(resolved_grid)},
                    {"schedule", schedule.to_json()},
                    {"closeness_mode", closeness_mode},
                    {"betweenness_threshold", betweenness_threshold},
                    {"warm_start", warm_start},
                    {"weighted_neighbor_sum", weighted_neighbor_sum}};
    }
};

/// Sweep + aggregation + requested comparator columns; writes the score CSVs.
void run_score_pipeline(const WeightedGraph& g, const ScoreOptions& options,
                        const std::vector<MetaColumn>& meta_columns, const std::string& outdir) {
    const ParameterGrid grid = options.grid.resolve();
    AnnealSchedule schedule = options.schedule.resolve(options.seed);
    std::cerr << "sweeping " << grid.cell_count() << " grid cells over " << g.node_count()
              << " nodes...\n";
    AnnealOptions anneal_options;
    anneal_options.warm_start_by_strength = options.warm_start;
    const SweepResult sweep = sweep_grid(g, grid, schedule, options.threads, anneal_options);
    const CoreScoreResult result = aggregate_core_scores(sweep, g, options.weighted_neighbor_sum);

    std::vector<ScoreColumn> columns{{"core_score", result.scores}};
    const MethodFlags& m = options.methods;
    if (m.all || m.minres) columns.push_back({"minres", minres_coreness(g).values});
    if (m.all || m.strength) columns.push_back({"strength", strength_centrality(g).values});
    if (m.all || m.closeness) {
        columns.push_back({"closeness", closeness(g, parse_path_mode(options.closeness_mode)).values});
    }
    if (m.all || m.betweenness) {
        const WeightedGraph b = options.betweenness_threshold >= 0.0
                                    ? threshold_binarize(g, options.betweenness_threshold)
                                    : g;
        columns.push_back({"betweenness", betweenness(b).values});
    }
    if (m.all || m.eigenvector) {
        columns.push_back({"eigenvector", eigenvector_centrality(g).values});
    }

    write_file(outdir + "/scores.csv", render_scores_csv(g.labels(), columns, meta_columns));
    write_file(outdir + "/r_landscape.csv", render_landscape_csv(grid, result.r_landscape));
    write_file(outdir + "/top_nodes.csv", render_top_node_csv(grid, result.top_node, g));
    write_file(outdir + "/top_fractions.csv",
               render_scores_csv(g.labels(), {{"top_fraction", result.top_fractions}}));
    std::cerr << "wrote " << outdir << "/scores.csv\n";
}

int cmd_score(const ScoreOptions& options, const std::string& input, const std::string& outdir) {
    // config validation happens before the input is touched
    options.grid.resolve();
    options.schedule.resolve(options.seed);
    parse_path_mode(options.closeness_mode);
    try {
        const WeightedGraph g = load_graph(input);
        ensure_output_dir(outdir);
        run_score_pipeline(g, options, {}, outdir);
        write_metadata(outdir, "score", options.seed,
                       json{{"input", input}, {"options", options.to_json(options.grid.resolve())}});
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

struct BenchOptions {
    int n = 100;
    double d = 0.5;
    double p = 0.25;
    double k_min = 1.0;
    double k_max = 2.0;
    double k_step = 0.1;
    int replicates = 100;
    std::string methods = "core_score,minres,strength,closeness,betweenness,eigenvector";
    GridOptions grid;
    ScheduleOptions schedule;
    std::uint64_t seed = 0;
    int threads = 0;
};

std::vector<BenchMethod> parse_bench_methods(const std::string& list) {
    const std::map<std::string, BenchMethod> by_name{
        {"core_score", BenchMethod::CoreScore},    {"minres", BenchMethod::Minres},
        {"strength", BenchMethod::Strength},       {"closeness", BenchMethod::Closeness},
        {"betweenness", BenchMethod::Betweenness}, {"eigenvector", BenchMethod::Eigenvector}};
    std::vector<BenchMethod> methods;
    std::string token;
    std::istringstream in(list);
    while (std::getline(in, token, ',')) {
        const auto it = by_name.find(token);
        if (it == by_name.end()) throw std::invalid_argument("unknown method '" + token + "'");
        methods.push_back(it->second);
    }
    if (methods.empty()) throw std::invalid_argument("no methods selected");
    return methods;
}

int cmd_bench(const BenchOptions& options, const std::string& outdir) {
    BenchmarkConfig config;
    config.n = options.n;
    config.d = options.d;
    config.p = options.p;
    config.k_values.clear();
    for (int i = 0;; ++i) {
        const double k = options.k_min + i * options.k_step;
        if (k > options.k_max + 1e-9) break;
        config.k_values.push_back(k);
    }
    config.replicates = options.replicates;
    config.methods = parse_bench_methods(options.methods);
    config.grid = options.grid.resolve();
    config.schedule = options.schedule.resolve(options.seed);
    config.seed = options.seed;
    config.threads = options.threads;
    if (config.k_values.empty()) throw std::invalid_argument("empty k range");
    for (const double k : config.k_values) {
        CPEnsembleParams{config.n, config.d, config.p, k}.validate();
    }
    try {
        ensure_output_dir(outdir);
        std::cerr << "benchmark: " << config.k_values.size() << " k-values x "
                  << config.replicates << " replicates x " << config.methods.size()
                  << " methods...\n";
        const BenchmarkReport report = run_benchmark(config);
        std::string csv = "method,k,mean_recovery,std_recovery,replicates\n";
        for (std::size_t m = 0; m < report.methods.size(); ++m) {
            for (std::size_t ki = 0; ki < report.k_values.size(); ++ki) {
                csv += report.methods[m];
                csv += ',';
                csv += detail::format_double(report.k_values[ki]);
                csv += ',';
                csv += detail::format_double(report.mean[m][ki]);
                csv += ',';
                csv += detail::format_double(report.stddev[m][ki]);
                csv += ',';
                csv += std::to_string(report.replicates);
                csv += '\n';
            }
        }
        write_file(outdir + "/benchmark.csv", csv);
        write_metadata(outdir, "bench", options.seed,
                       json{{"n", config.n},
                            {"d", config.d},
                            {"p", config.p},
                            {"k_values", config.k_values},
                            {"replicates", config.replicates},
                            {"methods", report.methods},
                            {"grid", grid_to_json(config.grid)},
                            {"schedule", options.schedule.to_json()}});
        std::cerr << "wrote " << outdir << "/benchmark.csv\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

std::map<std::string, Vote> load_code_map(const std::string& path) {
    const json parsed = json::parse(read_file(path));
    if (!parsed.is_object()) throw ParseError("mapping file must be a JSON object");
    std::map<std::string, Vote> codes;
    for (const auto& [key, value] : parsed.items()) {
        const std::string v = value.get<std::string>();
        if (v == "yea") {
            codes[key] = Vote::Yea;
        } else if (v == "nay") {
            codes[key] = Vote::Nay;
        } else if (v == "absent") {
            codes[key] = Vote::Absent;
        } else {
            throw ParseError("mapping value for '" + key + "' must be yea|nay|absent");
        }
    }
    if (codes.empty()) throw ParseError("mapping file declares no codes");
    return codes;
}

int cmd_votes(const std::string& input, const std::string& mapping, const std::string& outdir,
              double threshold, bool binarize, bool score, const ScoreOptions& score_options) {
    if (mapping.empty() || !fs::exists(mapping)) {
        throw std::invalid_argument("missing vote code mapping file (--mapping)");
    }
    if (binarize && threshold < 0.0) {
        throw std::invalid_argument("--binarize requires --threshold");
    }
    if (score) {
        score_options.grid.resolve();
        score_options.schedule.resolve(score_options.seed);
    }
    try {
        const auto codes = load_code_map(mapping);
        const VoteMatrix matrix = parse_vote_matrix(read_file(input), codes);
        WeightedGraph g = votes_to_similarity(matrix);
        if (binarize) {
            g = threshold_binarize(g, threshold);
        } else if (threshold >= 0.0) {
            std::vector<std::tuple<NodeId, NodeId, double>> kept;
            for (const auto& [u, v, w] : g.edges()) {
                if (w >= threshold) kept.emplace_back(u, v, w);
            }
            g = WeightedGraph::from_index_edges(g.labels(), kept);
        }
        ensure_output_dir(outdir);
        write_file(outdir + "/similarity.tsv", serialize_edge_list(g));
        std::cerr << "wrote " << outdir << "/similarity.tsv (" << g.node_count() << " nodes, "
                  << g.edge_count() << " edges)\n";
        if (score) {
            std::vector<MetaColumn> meta{{"party", {}}, {"state", {}}};
            for (const auto& leg : matrix.legislators) {
                meta[0].values.push_back(leg.party);
                meta[1].values.push_back(leg.state);
            }
            run_score_pipeline(g, score_options, meta, outdir);
        }
        json config{{"input", input},
                    {"mapping", mapping},
                    {"threshold", threshold},
                    {"binarize", binarize},
                    {"score", score}};
        if (score) config["options"] = score_options.to_json(score_options.grid.resolve());
        write_metadata(outdir, "votes", score_options.seed, config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

struct BaselineFlags {
    bool be = false;
    bool holme = false;
    bool capacity_flag = false;
    bool minres = false;
    int shuffles = 1000;
    int ensemble = 100;
    int swaps_per_edge = 10;
    ScheduleOptions schedule;
    std::uint64_t seed = 0;
};

int cmd_baselines(const BaselineFlags& options, const std::string& input,
                  const std::string& outdir) {
    const bool all = !options.be && !options.holme && !options.capacity_flag && !options.minres;
    options.schedule.resolve(options.seed);
    if (options.shuffles < 2) throw std::invalid_argument("--shuffles must be >= 2");
    if (options.ensemble < 1) throw std::invalid_argument("--ensemble must be >= 1");
    if (options.swaps_per_edge < 0) throw std::invalid_argument("--swaps-per-edge must be >= 0");
    try {
        const WeightedGraph g = load_graph(input);
        ensure_output_dir(outdir);
        json report{{"labels", g.labels()}};
        if (all || options.be) {
            std::cerr << "borgatti-everett discrete search...\n";
            const DiscretePartition part =
                be_discrete(g, options.shuffles, options.schedule.resolve(options.seed));
            std::vector<std::string> core;
            for (NodeId i = 0; i < g.node_count(); ++i) {
                if (part.core_mask[static_cast<std::size_t>(i)]) core.push_back(g.label(i));
            }
            report["borgatti_everett"] =
                json{{"core", core}, {"rho", part.rho}, {"z_score", part.z_score}};
        }
        if (all || options.minres) {
            const MinresCoreness m = minres_coreness(g);
            report["minres"] = json{{"values", m.values},
                                    {"residual", m.residual},
                                    {"iterations", m.iterations},
                                    {"converged", m.converged}};
        }
        if (all || options.holme) {
            std::cerr << "holme coefficient over " << options.ensemble << " null samples...\n";
            const HolmeResult h = holme_coefficient(g, options.ensemble, options.swaps_per_edge,
                                                    mix_seed(options.seed, 0x401ULL));
            std::vector<std::string> core;
            for (const NodeId i : h.core_nodes) core.push_back(g.label(i));
            report["holme"] = json{{"coefficient", h.coefficient},
                                   {"best_k", h.best_k},
                                   {"core", core},
                                   {"observed_ratio", h.observed_ratio},
                                   {"null_samples", h.null_samples}};
        }
        if (all || options.capacity_flag) {
            const CapacityResult c = core_coefficient(g);
            std::vector<std::string> order;
            for (const NodeId i : c.removal_order) order.push_back(g.label(i));
            report["capacity"] = json{{"capacity", c.capacity},
                                      {"core_coefficient", c.core_coefficient},
                                      {"removal_order", order},
                                      {"capacity_trace", c.capacity_trace}};
        }
        write_file(outdir + "/baselines.json", report.dump(2) + "\n");
        write_metadata(outdir, "baselines", options.seed,
                       json{{"input", input},
                            {"shuffles", options.shuffles},
                            {"ensemble", options.ensemble},
                            {"swaps_per_edge", options.swaps_per_edge},
                            {"schedule", options.schedule.to_json()}});
        std::cerr << "wrote " << outdir << "/baselines.json\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

int cmd_centrality(const std::string& input, const std::string& outdir,
                   const std::string& measures, const std::string& closeness_mode,
                   double betweenness_threshold) {
    const PathMode mode = parse_path_mode(closeness_mode);
    std::vector<std::string> selected;
    {
        std::istringstream in(measures);
        std::string token;
        while (std::getline(in, token, ',')) {
            if (token != "strength" && token != "closeness" && token != "betweenness" &&
                token != "eigenvector") {
                throw std::invalid_argument("unknown measure '" + token + "'");
            }
            selected.push_back(token);
        }
    }
    if (selected.empty()) throw std::invalid_argument("no measures selected");
    try {
        const WeightedGraph g = load_graph(input);
        ensure_output_dir(outdir);
        std::vector<ScoreColumn> columns;
        for (const std::string& name : selected) {
            if (name == "strength") {
                columns.push_back({"strength", strength_centrality(g).values});
            } else if (name == "closeness") {
                columns.push_back({"closeness", closeness(g, mode).values});
            } else if (name == "betweenness") {
                const WeightedGraph b = betweenness_threshold >= 0.0
                                            ? threshold_binarize(g, betweenness_threshold)
                                            : g;
                columns.push_back({"betweenness", betweenness(b).values});
            } else {
                columns.push_back({"eigenvector", eigenvector_centrality(g).values});
            }
        }
        write_file(outdir + "/centrality.csv", render_scores_csv(g.labels(), columns));
        write_metadata(outdir, "centrality", 0,
                       json{{"input", input},
                            {"measures", selected},
                            {"closeness_mode", closeness_mode},
                            {"betweenness_threshold", betweenness_threshold}});
        std::cerr << "wrote " << outdir << "/centrality.csv\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

struct SynthOptions {
    std::string cp;  // "N,d,p,k"
    std::string preset;
    std::vector<int> sizes{10, 40};
    double p_in = 0.9;
    double p_out = 0.05;
    double p_cp = 0.5;
    double p_pp = 0.05;
    bool shuffle = false;
    std::uint64_t seed = 0;
};

int cmd_synth(const SynthOptions& options, const std::string& outdir) {
    PlantedGraph planted;
    json config;
    if (!options.cp.empty()) {
        CPEnsembleParams params;
        char c1 = 0;
        char c2 = 0;
        char c3 = 0;
        std::istringstream in(options.cp);
        if (!(in >> params.n >> c1 >> params.d >> c2 >> params.p >> c3 >> params.k) || c1 != ',' ||
            c2 != ',' || c3 != ',' || !in.eof()) {
            throw std::invalid_argument("bad --cp '" + options.cp + "', expected N,d,p,k");
        }
        params.validate();
        planted = generate_cp(params, options.seed, options.shuffle);
        config = json{{"cp", {{"n", params.n}, {"d", params.d}, {"p", params.p}, {"k", params.k}}},
                      {"shuffle", options.shuffle}};
    } else if (!options.preset.empty()) {
        if (options.sizes.size() != 2 || options.sizes[0] < 1 || options.sizes[1] < 1) {
            throw std::invalid_argument("--sizes needs two positive block sizes");
        }
        BlockSpec spec;
        if (options.preset == "a") {
            spec = preset_community(options.sizes[0], options.sizes[1], options.p_in, options.p_out);
        } else if (options.preset == "b") {
            spec = preset_core_periphery(options.sizes[0], options.sizes[1], options.p_in,
                                         options.p_cp, options.p_pp);
        } else if (options.preset == "c") {
            spec = preset_global_cp_local_communities(options.sizes[0], options.sizes[1],
                                                      options.p_in, options.p_cp, options.p_pp,
                                                      options.p_out);
        } else if (options.preset == "d") {
            spec = preset_global_communities_local_cp(options.sizes[0], options.sizes[1],
                                                      options.p_in, options.p_cp, options.p_pp,
                                                      options.p_out);
        } else {
            throw std::invalid_argument("bad --preset '" + options.preset + "', expected a|b|c|d");
        }
        planted = block_model(spec, options.seed);
        config = json{{"preset", options.preset},
                      {"sizes", options.sizes},
                      {"p_in", options.p_in},
                      {"p_out", options.p_out},
                      {"p_cp", options.p_cp},
                      {"p_pp", options.p_pp}};
    } else {
        throw std::invalid_argument("need --cp N,d,p,k or --preset a|b|c|d");
    }
    try {
        ensure_output_dir(outdir);
        write_file(outdir + "/graph.tsv", serialize_edge_list(planted.graph));
        std::string truth;
        for (const NodeId i : planted.true_core) {
            truth += planted.graph.label(i);
            truth += '\n';
        }
        write_file(outdir + "/true_core.txt", truth);
        write_metadata(outdir, "synth", options.seed, config);
        std::cerr << "wrote " << outdir << "/graph.tsv (" << planted.graph.node_count()
                  << " nodes, " << planted.graph.edge_count() << " edges)\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"core-periphery structure analysis for weighted networks"};
    app.require_subcommand(1);

    auto* score = app.add_subcommand("score", "Core Score sweep over an (alpha, beta) grid");
    std::string score_input;
    std::string score_output = ".";
    ScoreOptions score_options;
    score->add_option("--input", score_input, "Edge list file")->required();
    score->add_option("--output,-o", score_output, "Output directory");
    score_options.add_flags(score);

    auto* bench = app.add_subcommand("bench", "Recovery benchmark on CP(N,d,p,k) ensembles");
    BenchOptions bench_options;
    std::string bench_output = ".";
    bench->add_option("--n", bench_options.n, "Nodes per graph");
    bench->add_option("--d", bench_options.d, "Core fraction");
    bench->add_option("--p", bench_options.p, "Base edge probability");
    bench->add_option("--k-min", bench_options.k_min, "Smallest density ratio k");
    bench->add_option("--k-max", bench_options.k_max, "Largest density ratio k");
    bench->add_option("--k-step", bench_options.k_step, "k increment");
    bench->add_option("--replicates", bench_options.replicates, "Graphs per k");
    bench->add_option("--methods", bench_options.methods, "Comma list of scoring methods");
    bench->add_option("--seed", bench_options.seed, "RNG seed");
    bench->add_option("--threads", bench_options.threads, "Worker threads (0 = all cores)");
    bench->add_option("--output,-o", bench_output, "Output directory");
    bench_options.grid.add_flags(bench);
    bench_options.schedule.add_flags(bench);

    auto* votes = app.add_subcommand("votes", "Roll-call matrix to similarity network");
    std::string votes_input;
    std::string votes_mapping;
    std::string votes_output = ".";
    double votes_threshold = -1.0;
    bool votes_binarize = false;
    bool votes_score = false;
    ScoreOptions votes_score_options;
    votes->add_option("--input", votes_input, "Vote matrix file")->required();
    votes->add_option("--mapping", votes_mapping, "JSON file mapping codes to yea|nay|absent");
    votes->add_option("--output,-o", votes_output, "Output directory");
    votes->add_option("--threshold", votes_threshold, "Drop edges below this similarity");
    votes->add_flag("--binarize", votes_binarize, "Binarize at the threshold");
    votes->add_flag("--score", votes_score, "Chain into the scoring pipeline");
    votes_score_options.add_flags(votes);

    auto* baselines = app.add_subcommand("baselines", "Prior core-periphery methods");
    BaselineFlags baseline_options;
    std::string baselines_input;
    std::string baselines_output = ".";
    baselines->add_option("--input", baselines_input, "Edge list file")->required();
    baselines->add_option("--output,-o", baselines_output, "Output directory");
    baselines->add_flag("--be", baseline_options.be, "Borgatti-Everett discrete partition");
    baselines->add_flag("--holme", baseline_options.holme, "Holme coefficient");
    baselines->add_flag("--capacity", baseline_options.capacity_flag, "Da Silva capacity and cc");
    baselines->add_flag("--minres", baseline_options.minres, "Minres coreness");
    baselines->add_option("--shuffles", baseline_options.shuffles, "Shuffles for the BE z-score");
    baselines->add_option("--ensemble", baseline_options.ensemble, "Holme null ensemble size");
    baselines->add_option("--swaps-per-edge", baseline_options.swaps_per_edge,
                          "Accepted double-edge swaps per edge in null samples");
    baselines->add_option("--seed", baseline_options.seed, "RNG seed");
    baseline_options.schedule.add_flags(baselines);

    auto* centrality_cmd = app.add_subcommand("centrality", "Comparator centralities");
    std::string centrality_input;
    std::string centrality_output = ".";
    std::string centrality_measures = "strength,closeness,betweenness,eigenvector";
    std::string centrality_closeness_mode = "weight";
    double centrality_threshold = -1.0;
    centrality_cmd->add_option("--input", centrality_input, "Edge list file")->required();
    centrality_cmd->add_option("--output,-o", centrality_output, "Output directory");
    centrality_cmd->add_option("--measures", centrality_measures, "Comma list of measures");
    centrality_cmd->add_option("--closeness-mode", centrality_closeness_mode,
                               "Distance mode for closeness: hop|weight");
    centrality_cmd->add_option("--betweenness-threshold", centrality_threshold,
                               "Binarize at this threshold before betweenness");

    auto* synth = app.add_subcommand("synth", "Generate planted benchmark graphs");
    SynthOptions synth_options;
    std::string synth_output = ".";
    synth->add_option("--cp", synth_options.cp, "CP ensemble parameters N,d,p,k");
    synth->add_option("--preset", synth_options.preset, "Block-model archetype a|b|c|d");
    synth->add_option("--sizes", synth_options.sizes, "Two block sizes")->delimiter(',');
    synth->add_option("--p-in", synth_options.p_in, "Within-block density");
    synth->add_option("--p-out", synth_options.p_out, "Across-group density");
    synth->add_option("--p-cp", synth_options.p_cp, "Core-periphery density");
    synth->add_option("--p-pp", synth_options.p_pp, "Periphery-periphery density");
    synth->add_flag("--shuffle", synth_options.shuffle, "Scatter planted nodes over random indices");
    synth->add_option("--seed", synth_options.seed, "RNG seed");
    synth->add_option("--output,-o", synth_output, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (score->parsed()) return cmd_score(score_options, score_input, score_output);
        if (bench->parsed()) return cmd_bench(bench_options, bench_output);
        if (votes->parsed()) {
            return cmd_votes(votes_input, votes_mapping, votes_output, votes_threshold,
                             votes_binarize, votes_score, votes_score_options);
        }
        if (baselines->parsed()) {
            return cmd_baselines(baseline_options, baselines_input, baselines_output);
        }
        if (centrality_cmd->parsed()) {
            return cmd_centrality(centrality_input, centrality_output, centrality_measures,
                                  centrality_closeness_mode, centrality_threshold);
        }
        if (synth->parsed()) return cmd_synth(synth_options, synth_output);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
