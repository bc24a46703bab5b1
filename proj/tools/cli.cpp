#include "cli.hpp"
#include "manifest.hpp"

#include "coinflow/circulation.hpp"
#include "coinflow/dump_io.hpp"
#include "coinflow/error.hpp"
#include "coinflow/metrics.hpp"
#include "coinflow/minerid.hpp"
#include "coinflow/network_io.hpp"
#include "coinflow/payout.hpp"
#include "coinflow/synth.hpp"
#include "coinflow/util.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace coinflow::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

constexpr std::size_t sensitivity_thresholds[] = {5, 10, 50};

struct Common {
    std::string output_dir = "coinflow-out";
    std::string format; // empty: per-command default
};

struct Outputs {
    fs::path dir;
    RunManifest &manifest;

    fs::path write(const std::string &name, const std::string &content)
    {
        const fs::path path = dir / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out || !(out << content))
            throw error(errc::io_failure, "cannot write " + path.string());
        out.close();
        manifest.add_output(path);
        return path;
    }

    void record(const std::string &name) { manifest.add_output(dir / name); }
};

std::string fmt_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::optional<std::uint32_t> parse_cutoff(const std::string &text)
{
    if (text == "auto")
        return std::nullopt;
    try {
        std::size_t pos = 0;
        const long v = std::stol(text, &pos);
        if (pos == text.size() && v >= 0)
            return static_cast<std::uint32_t>(v);
    } catch (const std::exception &) {
    }
    throw error(errc::invalid_argument, "--cutoff: expected 'auto' or a non-negative integer, got '" + text + "'");
}

struct LoadedChain {
    ChainStore store;
    SpendIndex index;
};

LoadedChain load_chain(const std::string &input, bool strict, RunManifest &manifest)
{
    manifest.add_input(input);
    LoadedChain chain;
    chain.store = read_dump(input);
    chain.index = build_spend_index(chain.store, strict ? DanglingPolicy::strict : DanglingPolicy::skip);
    return chain;
}

Txid resolve_coinbase(const ChainStore &store, const std::string &txid, std::optional<std::uint64_t> height)
{
    if (!txid.empty()) {
        const auto id = Txid::parse_hex(txid);
        if (!id)
            throw error(errc::invalid_argument, "--coinbase: not a 64-digit hex txid");
        return *id;
    }
    if (height)
        return store.coinbase_of(*height).txid;
    throw error(errc::invalid_argument, "one of --coinbase or --height is required");
}

std::string histogram_csv(const char *key, const std::map<std::uint64_t, std::uint64_t> &h)
{
    std::string out = std::string(key) + ",count\n";
    for (const auto &[k, v] : h)
        out += std::to_string(k) + "," + std::to_string(v) + "\n";
    return out;
}

std::string distance_csv(const DistanceHistogram &h)
{
    std::map<std::uint64_t, std::uint64_t> wide(h.begin(), h.end());
    return histogram_csv("distance", wide);
}

std::string profile_csv(const OverlapProfile &p)
{
    std::string out = "i,N_i_a,D_i_a,r_i_a,N_i_b,D_i_b,r_i_b\n";
    const std::size_t bins = std::max(p.a.nodes_at.size(), p.b.nodes_at.size());
    auto cell = [](const OverlapSide &s, std::size_t i) {
        if (i >= s.nodes_at.size())
            return std::string("0,0,") + fmt_double(0.0);
        return std::to_string(s.nodes_at[i]) + "," + std::to_string(s.distinct_at[i]) + "," + fmt_double(s.ratio_at[i]);
    };
    for (std::size_t i = 0; i < bins; ++i)
        out += std::to_string(i) + "," + cell(p.a, i) + "," + cell(p.b, i) + "\n";
    return out;
}

ojson verdict_json(const OverlapProfile &p, const PoolVerdict &v)
{
    ojson j;
    j["nodes_a"] = p.a.node_count;
    j["nodes_b"] = p.b.node_count;
    j["overlap_count"] = p.overlap_count;
    j["overlap_ratio_a"] = p.a.overlap_ratio;
    j["overlap_ratio_b"] = p.b.overlap_ratio;
    j["overlap_ratio_min"] = v.overlap_ratio_min;
    j["threshold"] = v.threshold;
    j["verdict"] = to_string(v.relation);
    return j;
}

ojson pattern_json(const PayoutPattern &p)
{
    ojson j;
    j["label"] = to_string(p.label);
    j["fanout_hop"] = p.fanout_hop ? ojson(*p.fanout_hop) : ojson(nullptr);
    j["fanout_size"] = p.fanout_size;
    j["fanout_txid"] = p.fanout_txid ? ojson(p.fanout_txid->hex()) : ojson(nullptr);
    return j;
}

std::vector<Txid> txid_list(const ChainStore &store, const nlohmann::json &arr, const std::string &what)
{
    std::vector<Txid> out;
    for (const auto &item : arr) {
        if (item.is_number_unsigned() || item.is_number_integer())
            out.push_back(store.coinbase_of(item.get<std::uint64_t>()).txid);
        else if (item.is_string())
            out.push_back(Txid::from_hex(item.get<std::string>()));
        else
            throw error(errc::invalid_argument, what + ": entries must be heights or txids");
    }
    return out;
}

std::string slurp(const fs::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw error(errc::io_failure, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"coinflow: fresh coin circulation networks, miner identification and payout patterns", "coinflow"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("coinflow ") + COINFLOW_VERSION);

    Common common;
    auto add_common = [&](CLI::App *sub, bool with_format) {
        sub->add_option("--output-dir", common.output_dir, "Directory for output files")->capture_default_str();
        if (with_format)
            sub->add_option("--format", common.format, "Output format: json or csv")
                ->check(CLI::IsMember({"json", "csv"}));
    };

    std::string input;
    bool strict = false;
    std::string horizon_text = "7d";
    std::string coinbase_text;
    std::optional<std::uint64_t> height;
    double threshold = default_same_pool_threshold;
    double band = default_cutoff_band;
    std::size_t fanout_threshold = default_fanout_threshold;
    std::string cutoff_text = "auto";
    std::string net_a, net_b, net_dir, subset_file;
    bool force = false;
    bool no_relay_skip = false;
    std::optional<std::uint32_t> max_distance;

    // ingest
    auto *ingest = app.add_subcommand("ingest", "Parse and validate a transaction dump, build the spend index");
    ingest->add_option("--input", input, "Transaction dump (.jsonl or gzip)")->required();
    ingest->add_flag("--strict", strict, "Fail on references to transactions outside the dump");
    add_common(ingest, false);

    // build-net
    auto *build_net = app.add_subcommand("build-net", "Build the circulation network of one coinbase");
    build_net->add_option("--input", input, "Transaction dump")->required();
    build_net->add_option("--coinbase", coinbase_text, "Coinbase txid");
    build_net->add_option("--height", height, "Block height (alternative to --coinbase)");
    build_net->add_option("--horizon", horizon_text, "Trace horizon, e.g. 7d, 4d, 36h")->capture_default_str();
    build_net->add_option("--max-distance", max_distance, "Keep only nodes within this distance");
    build_net->add_flag("--strict", strict, "Fail on dangling references");
    add_common(build_net, false);

    // stats
    auto *stats = app.add_subcommand("stats", "Summary statistics and degree/distance histograms");
    stats->add_option("--net", net_dir, "Network directory (nodes.tsv, edges.tsv)")->required();
    stats->add_option("--subset", subset_file, "Address list for a restricted distance histogram");
    add_common(stats, true);

    // compare
    auto *compare = app.add_subcommand("compare", "Per-distance overlap profile of two networks");
    compare->add_option("--net-a", net_a, "First network directory")->required();
    compare->add_option("--net-b", net_b, "Second network directory")->required();
    compare->add_option("--threshold", threshold, "Same-pool threshold on the minimum overlap ratio")
        ->check(CLI::Range(1e-9, 1.0))
        ->capture_default_str();
    add_common(compare, true);

    // identify-miners
    auto *identify = app.add_subcommand("identify-miners", "Extract miner candidates from a different-pool pair");
    identify->add_option("--net-a", net_a, "First network directory")->required();
    identify->add_option("--net-b", net_b, "Second network directory")->required();
    identify->add_option("--cutoff", cutoff_text, "Distance cutoff: auto or N")->capture_default_str();
    identify->add_option("--threshold", threshold, "Same-pool threshold")
        ->check(CLI::Range(1e-9, 1.0))
        ->capture_default_str();
    identify->add_option("--band", band, "Auto-cutoff stabilization band")->capture_default_str();
    identify->add_flag("--force", force, "Run even when the pair looks like the same pool");
    identify->add_flag("--no-relay-skip", no_relay_skip, "Keep single-address leading levels as candidates");
    add_common(identify, false);

    // classify-pattern
    std::vector<std::string> coinbase_list;
    std::vector<std::uint64_t> height_list;
    std::string walk = "largest";
    auto *classify = app.add_subcommand("classify-pattern", "Classify pool payout patterns per coinbase");
    classify->add_option("--input", input, "Transaction dump")->required();
    classify->add_option("--coinbase", coinbase_list, "Coinbase txid (repeatable; default all)");
    classify->add_option("--height", height_list, "Block height (repeatable; default all)");
    classify->add_option("--fanout-threshold", fanout_threshold, "Outputs that make a fan-out transaction")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 30))
        ->capture_default_str();
    classify->add_option("--horizon", horizon_text, "Trace horizon")->capture_default_str();
    classify->add_option("--walk", walk, "Walk policy")->check(CLI::IsMember({"largest", "all"}))->capture_default_str();
    classify->add_flag("--strict", strict, "Fail on dangling references");
    add_common(classify, true);

    // miner-trend
    std::string periods_file, truth_file, pool_name;
    std::uint64_t period_blocks = 0;
    std::size_t max_pairs = 20;
    std::uint64_t seed = 0;
    auto *trend = app.add_subcommand("miner-trend", "Miner-group size per period");
    trend->add_option("--input", input, "Transaction dump")->required();
    trend->add_option("--periods", periods_file, "Periods JSON file");
    trend->add_option("--ground-truth", truth_file, "Derive periods from a simulator ground-truth file");
    trend->add_option("--pool", pool_name, "Pool to follow (with --ground-truth)");
    trend->add_option("--period-blocks", period_blocks, "Period length in blocks (with --ground-truth)");
    trend->add_option("--cutoff", cutoff_text, "Distance cutoff: auto or N")->capture_default_str();
    trend->add_option("--threshold", threshold, "Same-pool threshold")
        ->check(CLI::Range(1e-9, 1.0))
        ->capture_default_str();
    trend->add_option("--horizon", horizon_text, "Trace horizon")->capture_default_str();
    trend->add_option("--max-pairs", max_pairs, "Pairs sampled per period")->capture_default_str();
    trend->add_option("--seed", seed, "Pair sampling seed")->capture_default_str();
    trend->add_flag("--strict", strict, "Fail on dangling references");
    add_common(trend, true);

    // simulate
    std::string config_file;
    std::optional<std::uint64_t> sim_seed, sim_blocks;
    std::optional<double> churn;
    bool gzip = false;
    auto *simulate = app.add_subcommand("simulate", "Generate a synthetic chain with planted ground truth");
    simulate->add_option("--config", config_file, "Simulation config JSON (defaults otherwise)");
    simulate->add_option("--seed", sim_seed, "Override the config seed");
    simulate->add_option("--blocks", sim_blocks, "Override the number of blocks");
    simulate->add_option("--churn", churn, "Override the miner churn rate");
    simulate->add_flag("--gzip", gzip, "Write the dump gzip-compressed");
    add_common(simulate, false);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::CallForVersion &) {
        out << app.version() << '\n';
        return exit_ok;
    } catch (const CLI::ParseError &e) {
        err << "coinflow: " << e.what() << '\n';
        return exit_input_error;
    }

    CLI::App *sub = app.get_subcommands().front();
    if (common.format.empty())
        common.format = sub == trend ? "csv" : "json";

    try {
        const fs::path dir = common.output_dir;
        fs::create_directories(dir);
        RunManifest manifest(sub->get_name(), args);
        Outputs outputs{dir, manifest};
        auto &params = manifest.parameters();
        const std::int64_t horizon = parse_duration(horizon_text);

        if (sub == ingest) {
            params["strict"] = strict;
            const auto chain = load_chain(input, strict, manifest);
            const auto heights = chain.store.heights();
            std::size_t inputs = 0;
            for (const auto &tx : chain.store.transactions())
                inputs += tx.inputs.size();
            ojson j;
            j["transactions"] = chain.store.size();
            j["blocks"] = heights.size();
            j["first_height"] = heights.empty() ? ojson(nullptr) : ojson(heights.front());
            j["last_height"] = heights.empty() ? ojson(nullptr) : ojson(heights.back());
            j["inputs"] = inputs;
            j["spent_outpoints"] = chain.index.size();
            j["dangling_skipped"] = chain.index.dangling_skipped();
            j["timestamp_regressions"] = chain.store.timestamp_regressions();
            outputs.write("ingest.json", j.dump(2) + "\n");
            out << "ingested " << chain.store.size() << " transactions in " << heights.size() << " blocks\n";
            if (chain.store.timestamp_regressions() > 0)
                err << "warning: " << chain.store.timestamp_regressions() << " block timestamps go backwards\n";
        } else if (sub == build_net) {
            params["horizon"] = horizon_text;
            params["horizon_seconds"] = horizon;
            params["strict"] = strict;
            const auto chain = load_chain(input, strict, manifest);
            const Txid cb = resolve_coinbase(chain.store, coinbase_text, height);
            auto net = build_circulation_network(chain.store, chain.index, cb, horizon);
            if (max_distance) {
                params["max_distance"] = *max_distance;
                net = restrict_to_distance(net, *max_distance);
            }
            params["coinbase"] = cb.hex();
            write_network(dir, net);
            outputs.record(nodes_file_name);
            outputs.record(edges_file_name);
            std::uint64_t spends = 0;
            for (const auto &e : net.edges)
                spends += e.multiplicity;
            ojson j;
            j["coinbase"] = cb.hex();
            j["height"] = chain.store.get(cb).height;
            j["horizon"] = format_duration(horizon);
            j["horizon_seconds"] = horizon;
            j["tx_count"] = net.tx_count;
            j["node_count"] = net.node_count();
            j["edge_count"] = net.edge_count();
            j["edge_multiplicity_total"] = spends;
            j["max_distance"] = net.max_distance();
            j["sources"] = net.source_addresses();
            outputs.write("network.json", j.dump(2) + "\n");
            out << "network: " << net.node_count() << " nodes, " << net.edge_count() << " edges, "
                << net.tx_count << " transactions\n";
        } else if (sub == stats) {
            manifest.add_input(fs::path(net_dir) / nodes_file_name);
            manifest.add_input(fs::path(net_dir) / edges_file_name);
            const auto net = read_network(fs::path(net_dir));
            const auto s = summarize(net);
            if (common.format == "json") {
                ojson j;
                j["node_count"] = s.node_count;
                j["edge_count"] = s.edge_count;
                j["density"] = s.density;
                j["avg_degree_undirected"] = s.avg_degree_undirected;
                j["clustering"] = s.clustering;
                j["max_distance"] = s.max_distance;
                outputs.write("summary.json", j.dump(2) + "\n");
            } else {
                outputs.write("summary.csv",
                              "node_count,edge_count,density,avg_degree_undirected,clustering,max_distance\n" +
                                  std::to_string(s.node_count) + "," + std::to_string(s.edge_count) + "," +
                                  fmt_double(s.density) + "," + fmt_double(s.avg_degree_undirected) + "," +
                                  fmt_double(s.clustering) + "," + std::to_string(s.max_distance) + "\n");
            }
            outputs.write("degree_in.csv", histogram_csv("degree", degree_distribution(net, DegreeDirection::in).counts));
            outputs.write("degree_out.csv", histogram_csv("degree", degree_distribution(net, DegreeDirection::out).counts));
            outputs.write("distance.csv", distance_csv(distance_distribution(net)));
            if (!subset_file.empty()) {
                manifest.add_input(subset_file);
                const auto subset = read_address_list(subset_file);
                outputs.write("distance_subset.csv", distance_csv(distance_distribution(net, subset)));
            }
            out << "nodes " << s.node_count << ", edges " << s.edge_count << ", clustering " << fmt_double(s.clustering) << "\n";
        } else if (sub == compare) {
            params["threshold"] = threshold;
            for (const auto &d : {net_a, net_b}) {
                manifest.add_input(fs::path(d) / nodes_file_name);
                manifest.add_input(fs::path(d) / edges_file_name);
            }
            const auto a = read_network(fs::path(net_a));
            const auto b = read_network(fs::path(net_b));
            const auto profile = overlap_profile(a, b);
            const auto verdict = classify_pair(profile, threshold);
            outputs.write("profile.csv", profile_csv(profile));
            if (common.format == "json") {
                outputs.write("verdict.json", verdict_json(profile, verdict).dump(2) + "\n");
            } else {
                outputs.write("verdict.csv",
                              "nodes_a,nodes_b,overlap_count,overlap_ratio_a,overlap_ratio_b,threshold,verdict\n" +
                                  std::to_string(profile.a.node_count) + "," + std::to_string(profile.b.node_count) +
                                  "," + std::to_string(profile.overlap_count) + "," +
                                  fmt_double(profile.a.overlap_ratio) + "," + fmt_double(profile.b.overlap_ratio) +
                                  "," + fmt_double(threshold) + "," + std::string(to_string(verdict.relation)) + "\n");
            }
            out << to_string(verdict.relation) << " (overlap " << fmt_double(profile.a.overlap_ratio) << " / "
                << fmt_double(profile.b.overlap_ratio) << ")\n";
        } else if (sub == identify) {
            MinerIdOptions opts;
            opts.cutoff = parse_cutoff(cutoff_text);
            opts.threshold = threshold;
            opts.band = band;
            opts.force = force;
            opts.skip_relay_prefix = !no_relay_skip;
            params["cutoff"] = cutoff_text;
            params["threshold"] = threshold;
            params["band"] = band;
            params["force"] = force;
            params["relay_skip"] = opts.skip_relay_prefix;
            for (const auto &d : {net_a, net_b}) {
                manifest.add_input(fs::path(d) / nodes_file_name);
                manifest.add_input(fs::path(d) / edges_file_name);
            }
            const auto result = identify_miners(read_network(fs::path(net_a)), read_network(fs::path(net_b)), opts);
            write_address_list(dir / "miners_a.txt", result.a.addresses);
            outputs.record("miners_a.txt");
            write_address_list(dir / "miners_b.txt", result.b.addresses);
            outputs.record("miners_b.txt");
            ojson j = verdict_json(result.profile, result.verdict);
            for (const auto *set : {&result.a, &result.b}) {
                ojson s;
                s["cutoff"] = set->cutoff;
                s["relay_prefix"] = set->relay_prefix;
                s["miner_count"] = set->addresses.size();
                j["side_" + set->label] = s;
            }
            outputs.write("miners.json", j.dump(2) + "\n");
            out << "miners: " << result.a.addresses.size() << " (a), " << result.b.addresses.size() << " (b)\n";
        } else if (sub == classify) {
            params["fanout_threshold"] = fanout_threshold;
            params["horizon"] = horizon_text;
            params["walk"] = walk;
            const auto chain = load_chain(input, strict, manifest);
            std::vector<Txid> targets;
            for (const auto &c : coinbase_list)
                targets.push_back(resolve_coinbase(chain.store, c, std::nullopt));
            for (auto h : height_list)
                targets.push_back(chain.store.coinbase_of(h).txid);
            if (targets.empty())
                for (auto h : chain.store.heights())
                    targets.push_back(chain.store.coinbase_of(h).txid);

            PatternOptions popts;
            popts.horizon_seconds = horizon;
            popts.walk = walk == "all" ? WalkPolicy::all_branches : WalkPolicy::largest_value;
            struct Row {
                PayoutPattern main;
                std::vector<PayoutPattern> sensitivity;
            };
            std::vector<Row> rows(targets.size());
            parallel_for(targets.size(), [&](std::size_t i) {
                auto o = popts;
                o.fanout_threshold = fanout_threshold;
                rows[i].main = classify_pattern(chain.store, chain.index, targets[i], o);
                for (auto t : sensitivity_thresholds) {
                    o.fanout_threshold = t;
                    rows[i].sensitivity.push_back(classify_pattern(chain.store, chain.index, targets[i], o));
                }
            });

            std::map<std::string, std::size_t> tally;
            if (common.format == "json") {
                ojson arr = ojson::array();
                for (std::size_t i = 0; i < targets.size(); ++i) {
                    ojson j;
                    j["height"] = chain.store.get(targets[i]).height;
                    j["coinbase"] = targets[i].hex();
                    const ojson pj = pattern_json(rows[i].main);
                    for (const auto &[k, v] : pj.items())
                        j[k] = v;
                    ojson sens;
                    for (std::size_t t = 0; t < std::size(sensitivity_thresholds); ++t)
                        sens[std::to_string(sensitivity_thresholds[t])] = to_string(rows[i].sensitivity[t].label);
                    j["sensitivity"] = sens;
                    arr.push_back(j);
                    ++tally[std::string(to_string(rows[i].main.label))];
                }
                ojson doc;
                doc["fanout_threshold"] = fanout_threshold;
                doc["patterns"] = arr;
                outputs.write("patterns.json", doc.dump(2) + "\n");
            } else {
                std::string csv = "height,coinbase,label,fanout_hop,fanout_size,label_t5,label_t10,label_t50\n";
                for (std::size_t i = 0; i < targets.size(); ++i) {
                    const auto &m = rows[i].main;
                    csv += std::to_string(chain.store.get(targets[i]).height) + "," + targets[i].hex() + "," +
                           std::string(to_string(m.label)) + "," +
                           (m.fanout_hop ? std::to_string(*m.fanout_hop) : std::string()) + "," +
                           std::to_string(m.fanout_size);
                    for (const auto &s : rows[i].sensitivity)
                        csv += "," + std::string(to_string(s.label));
                    csv += "\n";
                    ++tally[std::string(to_string(m.label))];
                }
                outputs.write("patterns.csv", csv);
            }
            out << "classified " << targets.size() << " coinbases:";
            for (const auto &[label, n] : tally)
                out << ' ' << label << '=' << n;
            out << '\n';
        } else if (sub == trend) {
            TrendOptions topts;
            topts.horizon_seconds = horizon;
            topts.cutoff = parse_cutoff(cutoff_text);
            topts.threshold = threshold;
            topts.max_pairs = max_pairs;
            topts.seed = seed;
            params["cutoff"] = cutoff_text;
            params["threshold"] = threshold;
            params["horizon"] = horizon_text;
            params["max_pairs"] = max_pairs;
            params["seed"] = seed;
            const auto chain = load_chain(input, strict, manifest);

            std::vector<TrendPeriod> periods;
            if (!periods_file.empty()) {
                manifest.add_input(periods_file);
                try {
                    const auto j = nlohmann::json::parse(slurp(periods_file));
                    for (const auto &pj : j.at("periods")) {
                        TrendPeriod p;
                        p.label = pj.at("label").get<std::string>();
                        p.pool = pj.value("pool", "");
                        p.coinbases = txid_list(chain.store, pj.at("coinbases"), "coinbases");
                        p.references = txid_list(chain.store, pj.at("references"), "references");
                        periods.push_back(std::move(p));
                    }
                } catch (const nlohmann::json::exception &e) {
                    throw error(errc::invalid_argument, std::string("bad periods file: ") + e.what());
                }
            } else if (!truth_file.empty()) {
                if (pool_name.empty() || period_blocks == 0)
                    throw error(errc::invalid_argument, "--ground-truth needs --pool and --period-blocks");
                manifest.add_input(truth_file);
                params["pool"] = pool_name;
                params["period_blocks"] = period_blocks;
                const auto truth = ground_truth_from_json(slurp(truth_file));
                std::map<std::uint64_t, TrendPeriod> by_period;
                for (const auto &b : truth.blocks) {
                    const std::uint64_t k = b.height / period_blocks;
                    auto &p = by_period[k];
                    p.label = std::to_string(k * period_blocks) + "-" + std::to_string((k + 1) * period_blocks - 1);
                    p.pool = pool_name;
                    (truth.pools.at(b.pool).name == pool_name ? p.coinbases : p.references).push_back(b.coinbase);
                }
                for (auto &[k, p] : by_period)
                    periods.push_back(std::move(p));
            } else {
                throw error(errc::invalid_argument, "one of --periods or --ground-truth is required");
            }

            const auto points = miner_trend(chain.store, chain.index, periods, topts);
            if (common.format == "csv") {
                std::string csv = "period,pool,miner_count,blocks\n";
                for (const auto &p : points)
                    csv += p.period + "," + p.pool + "," + std::to_string(p.miner_count) + "," + std::to_string(p.blocks) + "\n";
                outputs.write("trend.csv", csv);
            } else {
                ojson arr = ojson::array();
                for (const auto &p : points)
                    arr.push_back({{"period", p.period}, {"pool", p.pool}, {"miner_count", p.miner_count}, {"blocks", p.blocks}});
                outputs.write("trend.json", arr.dump(2) + "\n");
            }
            for (const auto &p : points)
                out << p.period << ' ' << p.pool << ' ' << p.miner_count << '\n';
        } else if (sub == simulate) {
            SimConfig config = default_sim_config();
            if (!config_file.empty()) {
                manifest.add_input(config_file);
                config = sim_config_from_json(slurp(config_file));
            }
            if (sim_seed)
                config.seed = *sim_seed;
            if (sim_blocks)
                config.blocks = *sim_blocks;
            if (churn)
                config.miner_churn_rate = *churn;
            validate(config);
            const auto sim = generate_chain(config);
            const std::string dump_name = gzip ? "dump.jsonl.gz" : "dump.jsonl";
            export_dump(dir / dump_name, sim.store, gzip);
            outputs.record(dump_name);
            outputs.write("ground_truth.json", to_json(sim.truth) + "\n");
            outputs.write("sim_config.json", to_json(config) + "\n");
            params["seed"] = config.seed;
            params["blocks"] = config.blocks;
            params["gzip"] = gzip;
            out << "simulated " << sim.store.size() << " transactions in " << config.blocks << " blocks\n";
        }

        manifest.write(dir);
        return exit_ok;
    } catch (const error &e) {
        err << "coinflow " << sub->get_name() << ": " << to_string(e.code()) << ": " << e.what() << '\n';
        return exit_input_error;
    } catch (const std::exception &e) {
        err << "coinflow " << sub->get_name() << ": internal error: " << e.what() << '\n';
        return exit_internal_error;
    }
}

} // namespace coinflow::cli
