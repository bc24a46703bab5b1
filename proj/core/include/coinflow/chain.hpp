#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace coinflow {

// 32-byte transaction identifier. Hex text keeps the byte order as written
// in the dump; no endianness games.
struct Txid {
    std::array<std::uint8_t, 32> bytes{};

    static Txid from_hex(std::string_view hex);
    static std::optional<Txid> parse_hex(std::string_view hex) noexcept;
    std::string hex() const;

    auto operator<=>(const Txid &) const = default;
    bool operator==(const Txid &) const = default;
};

struct TxidHash {
    std::size_t operator()(const Txid &id) const noexcept;
};

struct Outpoint {
    Txid txid;
    std::uint32_t vout = 0;

    auto operator<=>(const Outpoint &) const = default;
    bool operator==(const Outpoint &) const = default;
};

struct OutpointHash {
    std::size_t operator()(const Outpoint &op) const noexcept;
};

struct TxOutput {
    std::string address;
    std::uint64_t value = 0;

    bool operator==(const TxOutput &) const = default;
};

struct Transaction {
    Txid txid;
    std::uint64_t height = 0;
    std::int64_t time = 0;
    bool coinbase = false;
    std::vector<Outpoint> inputs;
    std::vector<TxOutput> outputs;

    bool operator==(const Transaction &) const = default;
};

// Position of a transaction inside a ChainStore.
using TxIndex = std::uint32_t;
inline constexpr TxIndex no_tx = static_cast<TxIndex>(-1);

// Validated, immutable set of transactions. Build it once through
// from_transactions() (or parse_transactions()) and share it read-only.
class ChainStore {
public:
    ChainStore() = default;

    // Validates uniqueness of txids, the coinbase/input relation, non-empty
    // outputs and exactly one coinbase per present height.
    static ChainStore from_transactions(std::vector<Transaction> txs);

    std::size_t size() const noexcept { return txs_.size(); }
    bool empty() const noexcept { return txs_.empty(); }

    std::span<const Transaction> transactions() const noexcept { return txs_; }
    const Transaction &at(TxIndex idx) const { return txs_.at(idx); }

    std::optional<TxIndex> find(const Txid &id) const;
    const Transaction &get(const Txid &id) const;

    const Transaction &coinbase_of(std::uint64_t height) const;
    std::optional<TxIndex> coinbase_index(std::uint64_t height) const;

    // Heights present in the store, ascending.
    std::vector<std::uint64_t> heights() const;
    std::span<const TxIndex> at_height(std::uint64_t height) const;

    // Number of height steps where the coinbase timestamp went backwards.
    std::size_t timestamp_regressions() const noexcept { return timestamp_regressions_; }

private:
    std::vector<Transaction> txs_;
    std::unordered_map<Txid, TxIndex, TxidHash> by_id_;
    std::map<std::uint64_t, std::vector<TxIndex>> by_height_;
    std::map<std::uint64_t, TxIndex> coinbases_;
    std::size_t timestamp_regressions_ = 0;
};

enum class DanglingPolicy { skip, strict };

// Outpoint -> spending transaction. Kept as a flat array parallel to the
// store's outputs so traversal is a couple of indexed loads.
class SpendIndex {
public:
    SpendIndex() = default;

    std::optional<TxIndex> spender(TxIndex tx, std::uint32_t vout) const;
    std::optional<Txid> spender(const ChainStore &store, const Outpoint &op) const;

    // Number of outpoints that have a spender.
    std::size_t size() const noexcept { return spent_count_; }
    std::size_t dangling_skipped() const noexcept { return dangling_skipped_; }

    // All (outpoint, spender) pairs ordered by outpoint position in the store.
    std::vector<std::pair<Outpoint, Txid>> entries(const ChainStore &store) const;

private:
    friend SpendIndex build_spend_index(const ChainStore &, DanglingPolicy);

    std::vector<std::size_t> offsets_;
    std::vector<TxIndex> spenders_;
    std::size_t spent_count_ = 0;
    std::size_t dangling_skipped_ = 0;
};

SpendIndex build_spend_index(const ChainStore &store,
                             DanglingPolicy policy = DanglingPolicy::skip);

const Transaction &coinbase_of(const ChainStore &store, std::uint64_t height);

} // namespace coinflow
