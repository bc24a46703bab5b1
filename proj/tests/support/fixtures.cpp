#include "fixtures.hpp"

#include "coinflow/util.hpp"

namespace fixture {

using namespace coinflow;

Txid id(std::string_view tag)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag)
        h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
    Txid out;
    for (std::size_t i = 0; i < 4; ++i) {
        h = splitmix64(h + i);
        for (std::size_t b = 0; b < 8; ++b)
            out.bytes[i * 8 + b] = static_cast<std::uint8_t>(h >> (8 * b));
    }
    return out;
}

Transaction coinbase(std::string_view tag, std::uint64_t height, std::int64_t time, std::vector<TxOutput> outputs)
{
    return {id(tag), height, time, true, {}, std::move(outputs)};
}

Transaction spend(std::string_view tag, std::uint64_t height, std::int64_t time, std::vector<Outpoint> inputs,
                  std::vector<TxOutput> outputs)
{
    return {id(tag), height, time, false, std::move(inputs), std::move(outputs)};
}

std::vector<Transaction> reference_links()
{
    return {
        coinbase("coinbase0", 0, t0, {{"p", 50}}),
        coinbase("coinbase", 1, t0 + 600, {{"s", 50}}),
        spend("tx1", 1, t0 + 700, {{id("coinbase"), 0}}, {{"a", 30}, {"b", 20}}),
        spend("txn", 1, t0 + 700, {{id("coinbase0"), 0}}, {{"c", 50}}),
        spend("tx2", 1, t0 + 900, {{id("tx1"), 0}, {id("txn"), 0}}, {{"d", 60}, {"e", 20}}),
    };
}

std::vector<Transaction> two_sources()
{
    return {
        coinbase("cb1", 0, t0, {{"s1", 40}}),
        coinbase("cb2", 1, t0 + 600, {{"s2", 40}}),
        spend("pay1", 0, t0 + 100, {{id("cb1"), 0}}, {{"a", 20}, {"b", 20}}),
        spend("pay2", 1, t0 + 700, {{id("cb2"), 0}}, {{"c", 20}, {"d", 20}}),
        spend("a-out", 1, t0 + 800, {{id("pay1"), 0}}, {{"x", 10}, {"y", 10}}),
        spend("b-out", 1, t0 + 800, {{id("pay1"), 1}}, {{"y", 10}, {"z", 10}}),
        spend("c-out", 1, t0 + 800, {{id("pay2"), 0}}, {{"x", 10}, {"y", 10}}),
        spend("d-out", 1, t0 + 800, {{id("pay2"), 1}}, {{"z", 20}}),
    };
}

} // namespace fixture
