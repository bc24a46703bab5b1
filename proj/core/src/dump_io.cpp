#include "coinflow/dump_io.hpp"
#include "coinflow/error.hpp"

#include <json.hpp>
#include <zlib.h>

#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace coinflow {

namespace {

using nlohmann::json;

constexpr std::size_t gz_chunk = 1 << 16;

const json &field(const json &obj, const char *name, std::size_t line_no)
{
    auto it = obj.find(name);
    if (it == obj.end())
        throw malformed_line_error(line_no, std::string("missing field '") + name + "'");
    return *it;
}

std::uint64_t unsigned_field(const json &obj, const char *name, std::size_t line_no)
{
    const json &v = field(obj, name, line_no);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
        throw malformed_line_error(line_no, std::string("field '") + name + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
}

Txid txid_field(const json &obj, std::size_t line_no)
{
    const json &v = field(obj, "txid", line_no);
    if (!v.is_string())
        throw malformed_line_error(line_no, "txid must be a string");
    auto id = Txid::parse_hex(v.get_ref<const std::string &>());
    if (!id)
        throw malformed_line_error(line_no, "txid must be 64 hex digits");
    return *id;
}

} // namespace

struct LineReader::impl {
    gzFile file = nullptr;
    std::array<char, gz_chunk> buf{};
    std::size_t pos = 0;
    std::size_t len = 0;
    bool eof = false;

    ~impl()
    {
        if (file)
            gzclose(file);
    }

    bool fill()
    {
        if (eof)
            return false;
        const int n = gzread(file, buf.data(), static_cast<unsigned>(buf.size()));
        if (n < 0) {
            int code = 0;
            throw error(errc::io_failure, std::string("read failed: ") + gzerror(file, &code));
        }
        if (n == 0) {
            eof = true;
            return false;
        }
        pos = 0;
        len = static_cast<std::size_t>(n);
        return true;
    }
};

LineReader::LineReader(const std::filesystem::path &path) : impl_(std::make_unique<impl>())
{
    // gzopen reads uncompressed files transparently.
    impl_->file = gzopen(path.c_str(), "rb");
    if (!impl_->file)
        throw error(errc::io_failure, "cannot open " + path.string());
    gzbuffer(impl_->file, gz_chunk);
}

LineReader::~LineReader() = default;
LineReader::LineReader(LineReader &&) noexcept = default;
LineReader &LineReader::operator=(LineReader &&) noexcept = default;

bool LineReader::next(std::string &line)
{
    line.clear();
    bool any = false;
    for (;;) {
        if (impl_->pos == impl_->len && !impl_->fill())
            return any;
        any = true;
        const char *begin = impl_->buf.data() + impl_->pos;
        const char *end = impl_->buf.data() + impl_->len;
        const char *nl = static_cast<const char *>(std::memchr(begin, '\n', static_cast<std::size_t>(end - begin)));
        if (nl) {
            line.append(begin, nl);
            impl_->pos += static_cast<std::size_t>(nl - begin) + 1;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            return true;
        }
        line.append(begin, end);
        impl_->pos = impl_->len;
    }
}

Transaction parse_transaction_line(std::string_view line, std::size_t line_no)
{
    json obj;
    try {
        obj = json::parse(line);
    } catch (const json::parse_error &e) {
        throw malformed_line_error(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object())
        throw malformed_line_error(line_no, "expected a JSON object");

    Transaction tx;
    tx.txid = txid_field(obj, line_no);
    tx.height = unsigned_field(obj, "height", line_no);

    const json &time = field(obj, "time", line_no);
    if (!time.is_number_integer())
        throw malformed_line_error(line_no, "field 'time' must be an integer");
    tx.time = time.get<std::int64_t>();

    const json &cb = field(obj, "coinbase", line_no);
    if (!cb.is_boolean())
        throw malformed_line_error(line_no, "field 'coinbase' must be a boolean");
    tx.coinbase = cb.get<bool>();

    const json &vin = field(obj, "vin", line_no);
    if (!vin.is_array())
        throw malformed_line_error(line_no, "field 'vin' must be an array");
    tx.inputs.reserve(vin.size());
    for (const json &in : vin) {
        if (!in.is_object())
            throw malformed_line_error(line_no, "vin entries must be objects");
        Outpoint op;
        op.txid = txid_field(in, line_no);
        const std::uint64_t vout = unsigned_field(in, "vout", line_no);
        if (vout > std::numeric_limits<std::uint32_t>::max())
            throw malformed_line_error(line_no, "vout out of range");
        op.vout = static_cast<std::uint32_t>(vout);
        tx.inputs.push_back(op);
    }

    const json &vout = field(obj, "vout", line_no);
    if (!vout.is_array() || vout.empty())
        throw malformed_line_error(line_no, "field 'vout' must be a non-empty array");
    tx.outputs.reserve(vout.size());
    for (const json &out : vout) {
        if (!out.is_object())
            throw malformed_line_error(line_no, "vout entries must be objects");
        const json &addr = field(out, "addr", line_no);
        if (!addr.is_string() || addr.get_ref<const std::string &>().empty())
            throw malformed_line_error(line_no, "addr must be a non-empty string");
        tx.outputs.push_back({addr.get<std::string>(), unsigned_field(out, "value", line_no)});
    }

    if (tx.coinbase && !tx.inputs.empty())
        throw error(errc::coinbase_input_mismatch, "line " + std::to_string(line_no) + ": coinbase with inputs");
    if (!tx.coinbase && tx.inputs.empty())
        throw error(errc::coinbase_input_mismatch,
                    "line " + std::to_string(line_no) + ": non-coinbase without inputs");
    return tx;
}

std::string format_transaction_line(const Transaction &tx)
{
    nlohmann::ordered_json obj;
    obj["txid"] = tx.txid.hex();
    obj["height"] = tx.height;
    obj["time"] = tx.time;
    obj["coinbase"] = tx.coinbase;
    auto vin = nlohmann::ordered_json::array();
    for (const auto &op : tx.inputs)
        vin.push_back({{"txid", op.txid.hex()}, {"vout", op.vout}});
    obj["vin"] = std::move(vin);
    auto vout = nlohmann::ordered_json::array();
    for (const auto &out : tx.outputs)
        vout.push_back({{"addr", out.address}, {"value", out.value}});
    obj["vout"] = std::move(vout);
    return obj.dump();
}

namespace {

template <typename NextLine>
ChainStore parse_lines(NextLine &&next)
{
    std::vector<Transaction> txs;
    std::string line;
    std::size_t line_no = 0;
    while (next(line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        txs.push_back(parse_transaction_line(line, line_no));
    }
    return ChainStore::from_transactions(std::move(txs));
}

} // namespace

ChainStore parse_transactions(std::istream &in)
{
    return parse_lines([&](std::string &line) { return static_cast<bool>(std::getline(in, line)); });
}

ChainStore read_dump(const std::filesystem::path &path)
{
    LineReader reader(path);
    return parse_lines([&](std::string &line) { return reader.next(line); });
}

void write_dump(std::ostream &out, const ChainStore &store)
{
    for (const auto &tx : store.transactions())
        out << format_transaction_line(tx) << '\n';
}

void export_dump(const std::filesystem::path &path, const ChainStore &store, bool gzip)
{
    if (!gzip) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw error(errc::io_failure, "cannot write " + path.string());
        write_dump(out, store);
        if (!out)
            throw error(errc::io_failure, "write failed for " + path.string());
        return;
    }
    gzFile file = gzopen(path.c_str(), "wb9");
    if (!file)
        throw error(errc::io_failure, "cannot write " + path.string());
    for (const auto &tx : store.transactions()) {
        std::string line = format_transaction_line(tx);
        line.push_back('\n');
        if (gzwrite(file, line.data(), static_cast<unsigned>(line.size())) != static_cast<int>(line.size())) {
            gzclose(file);
            throw error(errc::io_failure, "write failed for " + path.string());
        }
    }
    if (gzclose(file) != Z_OK)
        throw error(errc::io_failure, "close failed for " + path.string());
}

} // namespace coinflow
