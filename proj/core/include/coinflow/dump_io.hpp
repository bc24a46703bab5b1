#pragma once

#include "coinflow/chain.hpp"

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>

namespace coinflow {

// Line source over a plain or gzip-compressed file. Compression is detected
// from the magic bytes, not the extension.
class LineReader {
public:
    explicit LineReader(const std::filesystem::path &path);
    ~LineReader();
    LineReader(LineReader &&) noexcept;
    LineReader &operator=(LineReader &&) noexcept;

    bool next(std::string &line);

private:
    struct impl;
    std::unique_ptr<impl> impl_;
};

// One JSON object per line:
//   {"txid":hex,"height":n,"time":n,"coinbase":b,"vin":[{"txid","vout"}],"vout":[{"addr","value"}]}
// Blank lines are ignored. Errors carry the 1-based line number.
Transaction parse_transaction_line(std::string_view line, std::size_t line_no);
std::string format_transaction_line(const Transaction &tx);

ChainStore parse_transactions(std::istream &in);
ChainStore read_dump(const std::filesystem::path &path);

// Writes transactions in store order, one line each.
void write_dump(std::ostream &out, const ChainStore &store);
void export_dump(const std::filesystem::path &path, const ChainStore &store, bool gzip = false);

} // namespace coinflow
