#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace coinflow {

enum class errc {
    malformed_line,
    duplicate_txid,
    coinbase_input_mismatch,
    missing_coinbase,
    duplicate_coinbase,
    double_spend,
    dangling_reference,
    invalid_outpoint,
    unknown_height,
    unknown_txid,
    not_a_coinbase,
    subset_not_in_network,
    same_pool_pair,
    insufficient_coinbases,
    invalid_config,
    invalid_argument,
    io_failure,
};

std::string_view to_string(errc code) noexcept;

// All library failures surface as coinflow::error; code() tells callers
// which contract was violated.
class error : public std::runtime_error {
public:
    error(errc code, const std::string &what)
        : std::runtime_error(what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

class malformed_line_error : public error {
public:
    malformed_line_error(std::size_t line, const std::string &why)
        : error(errc::malformed_line, "line " + std::to_string(line) + ": " + why), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace coinflow
