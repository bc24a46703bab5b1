#include "coinflow/chain.hpp"
#include "coinflow/error.hpp"
#include "coinflow/util.hpp"

#include <algorithm>
#include <cstring>

namespace coinflow {

std::string_view to_string(errc code) noexcept
{
    switch (code) {
    case errc::malformed_line: return "MalformedLine";
    case errc::duplicate_txid: return "DuplicateTxid";
    case errc::coinbase_input_mismatch: return "CoinbaseWithInputs";
    case errc::missing_coinbase: return "MissingCoinbase";
    case errc::duplicate_coinbase: return "DuplicateCoinbase";
    case errc::double_spend: return "DoubleSpend";
    case errc::dangling_reference: return "DanglingReference";
    case errc::invalid_outpoint: return "InvalidOutpoint";
    case errc::unknown_height: return "UnknownHeight";
    case errc::unknown_txid: return "UnknownTxid";
    case errc::not_a_coinbase: return "NotACoinbase";
    case errc::subset_not_in_network: return "SubsetNotInNetwork";
    case errc::same_pool_pair: return "SamePoolPair";
    case errc::insufficient_coinbases: return "InsufficientCoinbases";
    case errc::invalid_config: return "InvalidConfig";
    case errc::invalid_argument: return "InvalidArgument";
    case errc::io_failure: return "IOFailure";
    }
    return "Unknown";
}

namespace {

int hex_value(char c) noexcept
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

std::optional<Txid> Txid::parse_hex(std::string_view hex) noexcept
{
    Txid id;
    if (hex.size() != id.bytes.size() * 2)
        return std::nullopt;
    for (std::size_t i = 0; i < id.bytes.size(); ++i) {
        const int hi = hex_value(hex[2 * i]);
        const int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0)
            return std::nullopt;
        id.bytes[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return id;
}

Txid Txid::from_hex(std::string_view hex)
{
    if (auto id = parse_hex(hex))
        return *id;
    throw error(errc::invalid_argument, "not a 64-digit hex txid: '" + std::string(hex) + "'");
}

std::string Txid::hex() const
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(bytes.size() * 2, '0');
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        out[2 * i] = digits[bytes[i] >> 4];
        out[2 * i + 1] = digits[bytes[i] & 0xf];
    }
    return out;
}

std::size_t TxidHash::operator()(const Txid &id) const noexcept
{
    std::uint64_t words[4];
    std::memcpy(words, id.bytes.data(), sizeof(words));
    return static_cast<std::size_t>(splitmix64(words[0] ^ splitmix64(words[1] ^ splitmix64(words[2] ^ words[3]))));
}

std::size_t OutpointHash::operator()(const Outpoint &op) const noexcept
{
    return TxidHash{}(op.txid) ^ static_cast<std::size_t>(splitmix64(op.vout));
}

ChainStore ChainStore::from_transactions(std::vector<Transaction> txs)
{
    if (txs.size() >= static_cast<std::size_t>(no_tx))
        throw error(errc::invalid_argument, "too many transactions for one store");

    ChainStore store;
    store.by_id_.reserve(txs.size());
    for (std::size_t i = 0; i < txs.size(); ++i) {
        const Transaction &tx = txs[i];
        const auto idx = static_cast<TxIndex>(i);
        if (tx.coinbase != tx.inputs.empty())
            throw error(errc::coinbase_input_mismatch,
                        "transaction " + tx.txid.hex() +
                            (tx.coinbase ? " is a coinbase with inputs" : " has no inputs but is not a coinbase"));
        if (tx.outputs.empty())
            throw error(errc::invalid_argument, "transaction " + tx.txid.hex() + " has no outputs");
        for (const auto &out : tx.outputs)
            if (out.address.empty())
                throw error(errc::invalid_argument, "transaction " + tx.txid.hex() + " pays an empty address");
        if (!store.by_id_.emplace(tx.txid, idx).second)
            throw error(errc::duplicate_txid, "duplicate txid " + tx.txid.hex());
        store.by_height_[tx.height].push_back(idx);
        if (tx.coinbase && !store.coinbases_.emplace(tx.height, idx).second)
            throw error(errc::duplicate_coinbase, "second coinbase at height " + std::to_string(tx.height));
    }
    for (const auto &[height, members] : store.by_height_) {
        if (!store.coinbases_.contains(height))
            throw error(errc::missing_coinbase, "no coinbase at height " + std::to_string(height));
    }

    std::optional<std::int64_t> prev_time;
    for (const auto &[height, idx] : store.coinbases_) {
        const std::int64_t t = txs[idx].time;
        if (prev_time && t < *prev_time)
            ++store.timestamp_regressions_;
        prev_time = t;
    }

    store.txs_ = std::move(txs);
    return store;
}

std::optional<TxIndex> ChainStore::find(const Txid &id) const
{
    auto it = by_id_.find(id);
    if (it == by_id_.end())
        return std::nullopt;
    return it->second;
}

const Transaction &ChainStore::get(const Txid &id) const
{
    if (auto idx = find(id))
        return txs_[*idx];
    throw error(errc::unknown_txid, "unknown txid " + id.hex());
}

std::optional<TxIndex> ChainStore::coinbase_index(std::uint64_t height) const
{
    auto it = coinbases_.find(height);
    if (it == coinbases_.end())
        return std::nullopt;
    return it->second;
}

const Transaction &ChainStore::coinbase_of(std::uint64_t height) const
{
    if (auto idx = coinbase_index(height))
        return txs_[*idx];
    throw error(errc::unknown_height, "no block at height " + std::to_string(height));
}

std::vector<std::uint64_t> ChainStore::heights() const
{
    std::vector<std::uint64_t> out;
    out.reserve(by_height_.size());
    for (const auto &[height, members] : by_height_)
        out.push_back(height);
    return out;
}

std::span<const TxIndex> ChainStore::at_height(std::uint64_t height) const
{
    auto it = by_height_.find(height);
    if (it == by_height_.end())
        return {};
    return it->second;
}

const Transaction &coinbase_of(const ChainStore &store, std::uint64_t height)
{
    return store.coinbase_of(height);
}

SpendIndex build_spend_index(const ChainStore &store, DanglingPolicy policy)
{
    SpendIndex index;
    const auto txs = store.transactions();
    index.offsets_.resize(txs.size() + 1, 0);
    for (std::size_t i = 0; i < txs.size(); ++i)
        index.offsets_[i + 1] = index.offsets_[i] + txs[i].outputs.size();
    index.spenders_.assign(index.offsets_.back(), no_tx);

    for (std::size_t i = 0; i < txs.size(); ++i) {
        const Transaction &tx = txs[i];
        for (const Outpoint &op : tx.inputs) {
            const auto prev = store.find(op.txid);
            if (!prev) {
                if (policy == DanglingPolicy::strict)
                    throw error(errc::dangling_reference,
                                "input " + op.txid.hex() + ":" + std::to_string(op.vout) + " of " +
                                    tx.txid.hex() + " references a transaction outside the store");
                ++index.dangling_skipped_;
                continue;
            }
            if (op.vout >= txs[*prev].outputs.size())
                throw error(errc::invalid_outpoint,
                            "input " + op.txid.hex() + ":" + std::to_string(op.vout) + " of " + tx.txid.hex() +
                                " exceeds the referenced output count " +
                                std::to_string(txs[*prev].outputs.size()));
            TxIndex &slot = index.spenders_[index.offsets_[*prev] + op.vout];
            if (slot != no_tx)
                throw error(errc::double_spend,
                            "outpoint " + op.txid.hex() + ":" + std::to_string(op.vout) + " spent by both " +
                                txs[slot].txid.hex() + " and " + tx.txid.hex());
            slot = static_cast<TxIndex>(i);
            ++index.spent_count_;
        }
    }
    return index;
}

std::optional<TxIndex> SpendIndex::spender(TxIndex tx, std::uint32_t vout) const
{
    if (static_cast<std::size_t>(tx) + 1 >= offsets_.size())
        return std::nullopt;
    const std::size_t pos = offsets_[tx] + vout;
    if (pos >= offsets_[tx + 1])
        return std::nullopt;
    const TxIndex s = spenders_[pos];
    if (s == no_tx)
        return std::nullopt;
    return s;
}

std::optional<Txid> SpendIndex::spender(const ChainStore &store, const Outpoint &op) const
{
    const auto tx = store.find(op.txid);
    if (!tx)
        return std::nullopt;
    const auto s = spender(*tx, op.vout);
    if (!s)
        return std::nullopt;
    return store.at(*s).txid;
}

std::vector<std::pair<Outpoint, Txid>> SpendIndex::entries(const ChainStore &store) const
{
    std::vector<std::pair<Outpoint, Txid>> out;
    out.reserve(spent_count_);
    for (std::size_t tx = 0; tx + 1 < offsets_.size(); ++tx) {
        for (std::size_t pos = offsets_[tx]; pos < offsets_[tx + 1]; ++pos) {
            if (spenders_[pos] == no_tx)
                continue;
            const auto &prev = store.at(static_cast<TxIndex>(tx));
            out.push_back({Outpoint{prev.txid, static_cast<std::uint32_t>(pos - offsets_[tx])},
                           store.at(spenders_[pos]).txid});
        }
    }
    return out;
}

} // namespace coinflow
