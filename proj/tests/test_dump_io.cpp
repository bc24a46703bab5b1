#include "fixtures.hpp"
#include "random_store.hpp"

#include "coinflow/dump_io.hpp"
#include "coinflow/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace coinflow;
namespace fs = std::filesystem;

namespace {

std::size_t malformed_line_of(const std::string &text)
{
    std::istringstream in(text);
    try {
        parse_transactions(in);
    } catch (const malformed_line_error &e) {
        return e.line();
    }
    return 0;
}

std::vector<Transaction> sorted(std::span<const Transaction> txs)
{
    std::vector<Transaction> out(txs.begin(), txs.end());
    std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) { return a.txid < b.txid; });
    return out;
}

fs::path scratch(const std::string &name)
{
    const auto dir = fs::temp_directory_path() / "coinflow-unit";
    fs::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_SUITE("dump_io") {

TEST_CASE("line format")
{
    const auto tx = fixture::reference_links()[4];
    const std::string line = format_transaction_line(tx);
    CHECK(line.rfind("{\"txid\":\"" + tx.txid.hex() + "\",\"height\":1,\"time\":", 0) == 0);
    CHECK(line.find("\"vin\":[{\"txid\":") != std::string::npos);
    CHECK(line.find("\"vout\":[{\"addr\":\"d\",\"value\":60}") != std::string::npos);
    CHECK(parse_transaction_line(line, 1) == tx);
}

TEST_CASE("malformed input reports the line")
{
    const std::string good = format_transaction_line(fixture::reference_links()[0]) + "\n";
    CHECK(malformed_line_of(good + "not json\n") == 2);
    CHECK(malformed_line_of(good + "\n" + R"({"txid":"ab","height":1,"time":0,"coinbase":true,"vin":[],"vout":[{"addr":"x","value":1}]})" + "\n") == 3);
    CHECK(malformed_line_of(R"({"height":1,"time":0,"coinbase":true,"vin":[],"vout":[{"addr":"x","value":1}]})") == 1);
    CHECK(malformed_line_of(good + R"({"txid":")" + std::string(64, 'a') +
                            R"(","height":1,"time":0,"coinbase":true,"vin":[],"vout":[]})") == 2);
    CHECK(malformed_line_of(good + R"({"txid":")" + std::string(64, 'a') +
                            R"(","height":-1,"time":0,"coinbase":true,"vin":[],"vout":[{"addr":"x","value":1}]})") == 2);
}

TEST_CASE("coinbase with inputs is rejected")
{
    std::istringstream in(R"({"txid":")" + std::string(64, 'a') +
                          R"(","height":0,"time":0,"coinbase":true,"vin":[{"txid":")" + std::string(64, 'b') +
                          R"(","vout":0}],"vout":[{"addr":"x","value":1}]})");
    try {
        parse_transactions(in);
        FAIL("expected error");
    } catch (const error &e) {
        CHECK(e.code() == errc::coinbase_input_mismatch);
    }
}

TEST_CASE("duplicate txid in a file")
{
    const std::string line = format_transaction_line(fixture::reference_links()[0]) + "\n";
    std::istringstream in(line + line);
    try {
        parse_transactions(in);
        FAIL("expected error");
    } catch (const error &e) {
        CHECK(e.code() == errc::duplicate_txid);
    }
}

TEST_CASE("empty store writes an empty file")
{
    std::ostringstream out;
    write_dump(out, ChainStore{});
    CHECK(out.str().empty());
    std::istringstream in("\n\n");
    CHECK(parse_transactions(in).empty());
}

TEST_CASE("round trip through text, files and gzip")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto store = ChainStore::from_transactions(testgen::random_transactions(seed));
        std::ostringstream out;
        write_dump(out, store);
        std::istringstream in(out.str());
        const auto back = parse_transactions(in);
        CHECK(sorted(back.transactions()) == sorted(store.transactions()));
    }

    const auto store = ChainStore::from_transactions(testgen::random_transactions(99));
    const auto plain = scratch("rt.jsonl");
    const auto packed = scratch("rt.jsonl.gz");
    export_dump(plain, store, false);
    export_dump(packed, store, true);
    std::ifstream raw(packed, std::ios::binary);
    CHECK(raw.get() == 0x1f);
    CHECK(sorted(read_dump(plain).transactions()) == sorted(store.transactions()));
    CHECK(sorted(read_dump(packed).transactions()) == sorted(store.transactions()));
}

TEST_CASE("line reader strips CR and reports missing files")
{
    const auto path = scratch("crlf.txt");
    {
        std::ofstream out(path, std::ios::binary);
        out << "one\r\ntwo\nthree";
    }
    LineReader reader(path);
    std::string line;
    std::vector<std::string> lines;
    while (reader.next(line))
        lines.push_back(line);
    CHECK(lines == std::vector<std::string>{"one", "two", "three"});

    try {
        read_dump(scratch("does-not-exist.jsonl"));
        FAIL("expected error");
    } catch (const error &e) {
        CHECK(e.code() == errc::io_failure);
    }
}

} // TEST_SUITE
