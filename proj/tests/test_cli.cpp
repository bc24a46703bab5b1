#include "cli.hpp"
#include "fixtures.hpp"

#include "coinflow/dump_io.hpp"
#include "coinflow/synth.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out, err;
};

Run coinflow_run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    Run r;
    r.code = coinflow::cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path workdir(const std::string &name)
{
    const fs::path dir = fs::current_path() / "cli-work" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::vector<std::string> lines_of(const std::string &text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        out.push_back(line);
    return out;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors name the flag")
{
    const auto dir = workdir("usage");
    auto r = coinflow_run({"build-net", "--input", "x.jsonl", "--bogus", "1"});
    CHECK(r.code == 1);
    CHECK(r.err.find("--bogus") != std::string::npos);

    r = coinflow_run({"compare", "--net-a", "a"});
    CHECK(r.code == 1);
    CHECK(r.err.find("--net-b") != std::string::npos);

    r = coinflow_run({"stats", "--net", "n", "--format", "xml"});
    CHECK(r.code == 1);
    CHECK(r.err.find("--format") != std::string::npos);

    r = coinflow_run({"identify-miners", "--net-a", "a", "--net-b", "b", "--cutoff", "soon",
                      "--output-dir", (dir / "o").string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("--cutoff") != std::string::npos);

    CHECK(coinflow_run({}).code == 1);
    CHECK(coinflow_run({"--help"}).code == 0);
    CHECK(coinflow_run({"--version"}).out.find("coinflow") != std::string::npos);
}

TEST_CASE("input errors exit 1")
{
    const auto dir = workdir("input-errors");
    auto r = coinflow_run({"ingest", "--input", (dir / "missing.jsonl").string(), "--output-dir", dir.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("IOFailure") != std::string::npos);

    {
        std::ofstream bad(dir / "bad.jsonl");
        bad << "{\"txid\": 1}\n";
    }
    r = coinflow_run({"ingest", "--input", (dir / "bad.jsonl").string(), "--output-dir", dir.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("MalformedLine") != std::string::npos);
    CHECK(r.err.find("line 1") != std::string::npos);
}

TEST_CASE("build-net on the reference links fixture")
{
    const auto dir = workdir("fixture");
    const auto store = coinflow::ChainStore::from_transactions(fixture::reference_links());
    coinflow::export_dump(dir / "dump.jsonl.gz", store, true);

    const auto out = dir / "net";
    auto r = coinflow_run({"build-net", "--input", (dir / "dump.jsonl.gz").string(), "--coinbase",
                           fixture::id("coinbase").hex(), "--horizon", "7d", "--output-dir", out.string()});
    REQUIRE(r.code == 0);
    CHECK(slurp(out / "nodes.tsv") == "a\t1\nb\t1\nd\t2\ne\t2\ns\t0\n");
    CHECK(slurp(out / "edges.tsv") == "a\td\na\te\ns\ta\ns\tb\n");
    const auto meta = json::parse(slurp(out / "network.json"));
    CHECK(meta["tx_count"] == 3);
    CHECK(meta["horizon"] == "7d");

    const auto manifest = json::parse(slurp(out / "manifest.json"));
    CHECK(manifest["command"] == "build-net");
    CHECK(manifest["parameters"]["horizon_seconds"] == 7 * 86400);
    CHECK(manifest["inputs"].size() == 1);
    CHECK(manifest["outputs"].size() == 3);

    // Self-comparison: nothing is distinct.
    r = coinflow_run({"compare", "--net-a", out.string(), "--net-b", out.string(), "--output-dir",
                      (dir / "self").string()});
    REQUIRE(r.code == 0);
    const auto rows = lines_of(slurp(dir / "self" / "profile.csv"));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "i,N_i_a,D_i_a,r_i_a,N_i_b,D_i_b,r_i_b");
    CHECK(rows[1] == "0,1,0,0.000000,1,0,0.000000");
    CHECK(rows[3] == "2,2,0,0.000000,2,0,0.000000");
    CHECK(json::parse(slurp(dir / "self" / "verdict.json"))["verdict"] == "same-pool");

    r = coinflow_run({"identify-miners", "--net-a", out.string(), "--net-b", out.string(), "--output-dir",
                      (dir / "im").string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("SamePoolPair") != std::string::npos);

    r = coinflow_run({"stats", "--net", out.string(), "--format", "csv", "--output-dir", (dir / "stats").string()});
    REQUIRE(r.code == 0);
    CHECK(slurp(dir / "stats" / "distance.csv") == "distance,count\n0,1\n1,2\n2,2\n");
    CHECK(slurp(dir / "stats" / "degree_out.csv") == "degree,count\n0,3\n2,2\n");
    CHECK(lines_of(slurp(dir / "stats" / "summary.csv")).size() == 2);
}

TEST_CASE("simulate then classify every block")
{
    const auto dir = workdir("simulate");
    auto r = coinflow_run({"simulate", "--seed", "7", "--blocks", "100", "--gzip", "--output-dir", (dir / "sim").string()});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "sim" / "dump.jsonl.gz"));
    const auto cfg = json::parse(slurp(dir / "sim" / "sim_config.json"));
    CHECK(cfg["seed"] == 7);
    CHECK(cfg["blocks"] == 100);

    r = coinflow_run({"classify-pattern", "--input", (dir / "sim" / "dump.jsonl.gz").string(), "--output-dir",
                      (dir / "cp").string()});
    REQUIRE(r.code == 0);
    const auto truth = coinflow::ground_truth_from_json(slurp(dir / "sim" / "ground_truth.json"));
    const auto doc = json::parse(slurp(dir / "cp" / "patterns.json"));
    REQUIRE(doc["patterns"].size() == 100);
    std::size_t agree = 0;
    for (const auto &p : doc["patterns"]) {
        const auto &b = truth.blocks.at(p["height"].get<std::size_t>());
        agree += p["label"] == std::string(coinflow::to_string(b.label));
        CHECK(p["sensitivity"].contains("50"));
    }
    CHECK(agree == 100);

    r = coinflow_run({"classify-pattern", "--input", (dir / "sim" / "dump.jsonl.gz").string(), "--height", "3",
                      "--height", "4", "--format", "csv", "--output-dir", (dir / "cp2").string()});
    REQUIRE(r.code == 0);
    CHECK(lines_of(slurp(dir / "cp2" / "patterns.csv")).size() == 3);
}

TEST_CASE("miner-trend from a periods file")
{
    const auto dir = workdir("trend");
    REQUIRE(coinflow_run({"simulate", "--blocks", "60", "--output-dir", dir.string()}).code == 0);
    const auto truth = coinflow::ground_truth_from_json(slurp(dir / "ground_truth.json"));
    json periods;
    json p = {{"label", "early"}, {"pool", "C"}, {"coinbases", json::array()}, {"references", json::array()}};
    for (const auto &b : truth.blocks) {
        if (b.height >= 40)
            break;
        const bool ours = truth.pools[b.pool].name == "C";
        if (ours && p["coinbases"].size() % 2 == 0)
            p["coinbases"].push_back(b.height);
        else if (ours)
            p["coinbases"].push_back(b.coinbase.hex());
        else
            p["references"].push_back(b.height);
    }
    periods["periods"] = json::array({p});
    std::ofstream(dir / "periods.json") << periods.dump();

    auto r = coinflow_run({"miner-trend", "--input", (dir / "dump.jsonl").string(), "--periods",
                           (dir / "periods.json").string(), "--output-dir", (dir / "out").string()});
    REQUIRE(r.code == 0);
    CHECK(lines_of(slurp(dir / "out" / "trend.csv")) ==
          std::vector<std::string>{"period,pool,miner_count,blocks", "early,C,200," + std::to_string(p["coinbases"].size())});

    r = coinflow_run({"miner-trend", "--input", (dir / "dump.jsonl").string(), "--output-dir", (dir / "o2").string()});
    CHECK(r.code == 1);
}

} // TEST_SUITE
