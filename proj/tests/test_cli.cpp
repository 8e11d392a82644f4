#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "corescore/ingest.hpp"

namespace fs = std::filesystem;
using corescore::read_file;
using corescore::WeightedGraph;
using corescore::write_file;

namespace {

const std::string kCli = CORESCORE_CLI_PATH;
const std::string kData = CORESCORE_DATA_DIR;

int run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

fs::path work_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "corescore_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

const std::string kVotesFixture =
    "name\tparty\tstate\tb1\tb2\tb3\tb4\n"
    "Alpha\tR\tTX\t1\t1\t6\t1\n"
    "Bravo\tR\tUT\t1\t1\t6\t6\n"
    "Carol\tD\tCA\t6\t6\t1\t9\n"
    "Dave\tD\tWA\t6\t6\t1\t6\n";

const std::string kMapping = R"({"1": "yea", "6": "nay", "9": "absent"})";

}  // namespace

TEST_CASE("score runs a single-cell sweep and writes all outputs") {
    const fs::path dir = work_dir("score_single");
    write_file((dir / "k2.tsv").string(), "a\tb\t1\n");
    const int code = run("score --input " + (dir / "k2.tsv").string() +
                         " --grid 1x1 --alpha 0.5 --beta 0.5 --seed 3 -o " + (dir / "out").string());
    REQUIRE(code == 0);
    for (const char* name :
         {"scores.csv", "r_landscape.csv", "top_nodes.csv", "top_fractions.csv", "metadata.json"}) {
        REQUIRE(fs::exists(dir / "out" / name));
    }
    const std::string scores = read_file((dir / "out" / "scores.csv").string());
    REQUIRE(scores == "label,core_score\na,1.0000\nb,1.0000\n");
    const std::string meta = read_file((dir / "out" / "metadata.json").string());
    REQUIRE(meta.find("\"command\": \"score\"") != std::string::npos);
    REQUIRE(meta.find("\"seed\": 3") != std::string::npos);
}

TEST_CASE("score exits 1 on a missing input file") {
    const fs::path dir = work_dir("score_missing");
    REQUIRE(run("score --input " + (dir / "missing.tsv").string() + " -o " + dir.string()) == 1);
}

TEST_CASE("score exits 1 on malformed input") {
    const fs::path dir = work_dir("score_malformed");
    write_file((dir / "bad.tsv").string(), "a\tb\t-3\n");
    REQUIRE(run("score --input " + (dir / "bad.tsv").string() + " -o " + dir.string()) == 1);
}

TEST_CASE("score exits 2 on bad configuration") {
    const fs::path dir = work_dir("score_badcfg");
    write_file((dir / "g.tsv").string(), "a\tb\t1\n");
    REQUIRE(run("score --input " + (dir / "g.tsv").string() + " --grid nonsense") == 2);
    REQUIRE(run("score --input " + (dir / "g.tsv").string() + " --alpha 1.5 --grid 1x1") == 2);
    REQUIRE(run("score --no-such-flag") == 2);
}

TEST_CASE("score with all methods emits the full column set") {
    const fs::path dir = work_dir("score_methods");
    const int code = run("score --input " + kData + "/zachary.tsv --grid 2x2 --seed 1 --all-methods -o " +
                         (dir / "out").string());
    REQUIRE(code == 0);
    std::istringstream in(read_file((dir / "out" / "scores.csv").string()));
    std::string header;
    std::getline(in, header);
    REQUIRE(header == "label,core_score,minres,strength,closeness,betweenness,eigenvector");
}

TEST_CASE("bench validates the k range against p") {
    REQUIRE(run("bench --k-max 3 --p 0.25 --replicates 2") == 2);
}

TEST_CASE("bench writes a row per method and k") {
    const fs::path dir = work_dir("bench_rows");
    const int code = run("bench --n 30 --d 0.5 --p 0.25 --k-min 1 --k-max 2 --k-step 0.5 "
                         "--replicates 2 --methods strength,minres --seed 9 -o " + dir.string());
    REQUIRE(code == 0);
    std::istringstream in(read_file((dir / "benchmark.csv").string()));
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    REQUIRE(rows == 1 + 2 * 3);  // header + methods x k
}

TEST_CASE("votes builds the similarity network") {
    const fs::path dir = work_dir("votes_basic");
    write_file((dir / "votes.tsv").string(), kVotesFixture);
    write_file((dir / "map.json").string(), kMapping);
    const int code = run("votes --input " + (dir / "votes.tsv").string() + " --mapping " +
                         (dir / "map.json").string() + " -o " + (dir / "out").string());
    REQUIRE(code == 0);
    const WeightedGraph g =
        corescore::parse_edge_list(read_file((dir / "out" / "similarity.tsv").string()));
    REQUIRE(g.node_count() == 4);
    const auto a = g.index_of("Alpha").value();
    const auto b = g.index_of("Bravo").value();
    const auto c = g.index_of("Carol").value();
    REQUIRE(g.weight(a, b) == 0.75);
    REQUIRE_FALSE(g.has_edge(a, c));  // opposite on every shared bill
}

TEST_CASE("votes binarizes at the threshold when asked") {
    const fs::path dir = work_dir("votes_binarize");
    write_file((dir / "votes.tsv").string(), kVotesFixture);
    write_file((dir / "map.json").string(), kMapping);
    const int code = run("votes --input " + (dir / "votes.tsv").string() + " --mapping " +
                         (dir / "map.json").string() + " --threshold 0.6 --binarize -o " +
                         (dir / "out").string());
    REQUIRE(code == 0);
    const WeightedGraph g =
        corescore::parse_edge_list(read_file((dir / "out" / "similarity.tsv").string()));
    for (const auto& [u, v, w] : g.edges()) {
        (void)u;
        (void)v;
        REQUIRE(w == 1.0);
    }
    REQUIRE(g.weight(*g.index_of("Alpha"), *g.index_of("Bravo")) == 1.0);
}

TEST_CASE("votes without a mapping file exits 2") {
    const fs::path dir = work_dir("votes_nomap");
    write_file((dir / "votes.tsv").string(), kVotesFixture);
    REQUIRE(run("votes --input " + (dir / "votes.tsv").string() + " -o " + dir.string()) == 2);
    REQUIRE(run("votes --input " + (dir / "votes.tsv").string() + " --mapping " +
                (dir / "nope.json").string() + " -o " + dir.string()) == 2);
}

TEST_CASE("votes with a malformed matrix exits 1") {
    const fs::path dir = work_dir("votes_badmatrix");
    write_file((dir / "votes.tsv").string(), "name\tparty\tstate\tb1\nX\tR\tTX\t7\n");
    write_file((dir / "map.json").string(), kMapping);
    REQUIRE(run("votes --input " + (dir / "votes.tsv").string() + " --mapping " +
                (dir / "map.json").string() + " -o " + dir.string()) == 1);
}

TEST_CASE("votes can chain into scoring with metadata columns") {
    const fs::path dir = work_dir("votes_score");
    write_file((dir / "votes.tsv").string(), kVotesFixture);
    write_file((dir / "map.json").string(), kMapping);
    const int code = run("votes --input " + (dir / "votes.tsv").string() + " --mapping " +
                         (dir / "map.json").string() + " --score --grid 2x2 --seed 4 -o " +
                         (dir / "out").string());
    REQUIRE(code == 0);
    std::istringstream in(read_file((dir / "out" / "scores.csv").string()));
    std::string header;
    std::getline(in, header);
    REQUIRE(header == "label,core_score,party,state");
}

TEST_CASE("baselines writes the methods-comparison report") {
    const fs::path dir = work_dir("baselines_report");
    const int code = run("baselines --input " + kData +
                         "/zachary.tsv --minres --capacity --seed 2 -o " + (dir / "out").string());
    REQUIRE(code == 0);
    const std::string report = read_file((dir / "out" / "baselines.json").string());
    REQUIRE(report.find("\"minres\"") != std::string::npos);
    REQUIRE(report.find("\"capacity\"") != std::string::npos);
    REQUIRE(report.find("\"core_coefficient\"") != std::string::npos);
}

TEST_CASE("centrality emits the selected measures") {
    const fs::path dir = work_dir("centrality_cols");
    const int code = run("centrality --input " + kData +
                         "/zachary.tsv --measures strength,betweenness -o " + (dir / "out").string());
    REQUIRE(code == 0);
    std::istringstream in(read_file((dir / "out" / "centrality.csv").string()));
    std::string header;
    std::getline(in, header);
    REQUIRE(header == "label,strength,betweenness");
    REQUIRE(run("centrality --input " + kData + "/zachary.tsv --measures bogus -o " + dir.string()) == 2);
}

TEST_CASE("synth generates planted graphs with truth files") {
    const fs::path dir = work_dir("synth_cp");
    REQUIRE(run("synth --cp 40,0.5,0.25,2 --seed 6 -o " + (dir / "cp").string()) == 0);
    const WeightedGraph g = corescore::parse_edge_list(read_file((dir / "cp" / "graph.tsv").string()));
    REQUIRE(g.node_count() == 40);
    std::istringstream truth(read_file((dir / "cp" / "true_core.txt").string()));
    std::string label;
    int core = 0;
    while (std::getline(truth, label)) ++core;
    REQUIRE(core == 20);

    REQUIRE(run("synth --preset b --sizes 4,8 --p-in 1 --p-cp 1 --p-pp 0 --seed 1 -o " +
                (dir / "ideal").string()) == 0);
    const WeightedGraph ideal =
        corescore::parse_edge_list(read_file((dir / "ideal" / "graph.tsv").string()));
    REQUIRE(ideal.edge_count() == 6 + 32);  // complete core + complete core-periphery
    REQUIRE(run("synth --preset z -o " + dir.string()) == 2);
    REQUIRE(run("synth -o " + dir.string()) == 2);
}

TEST_CASE("identical configs and seeds give byte-identical outputs") {
    const fs::path dir = work_dir("determinism");
    const std::string base = "score --input " + kData + "/zachary.tsv --grid 6x6 --seed 11 --all-methods";
    REQUIRE(run(base + " --threads 1 -o " + (dir / "a").string()) == 0);
    REQUIRE(run(base + " --threads 2 -o " + (dir / "b").string()) == 0);
    for (const char* name :
         {"scores.csv", "r_landscape.csv", "top_nodes.csv", "top_fractions.csv", "metadata.json"}) {
        REQUIRE(read_file((dir / "a" / name).string()) == read_file((dir / "b" / name).string()));
    }
}
