#pragma once

#include "coinflow/chain.hpp"

#include <string_view>
#include <vector>

namespace fixture {

inline constexpr std::int64_t t0 = 1'500'000'000;

// Deterministic txid for a readable tag.
coinflow::Txid id(std::string_view tag);

coinflow::Transaction coinbase(std::string_view tag, std::uint64_t height, std::int64_t time,
                               std::vector<coinflow::TxOutput> outputs);
coinflow::Transaction spend(std::string_view tag, std::uint64_t height, std::int64_t time,
                            std::vector<coinflow::Outpoint> inputs, std::vector<coinflow::TxOutput> outputs);

// Two blocks. "coinbase" (height 1) pays s; tx1 spends it and pays a, b;
// txn spends the older coinbase0 and pays c; tx2 spends a and c, pays d, e.
std::vector<coinflow::Transaction> reference_links();

// Coinbases s1 (height 0) and s2 (height 1). s1 pays a, b and s2 pays c, d;
// all four then pay into the shared addresses x, y, z.
std::vector<coinflow::Transaction> two_sources();

} // namespace fixture
