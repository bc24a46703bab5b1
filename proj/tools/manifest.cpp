#include "manifest.hpp"

#include "coinflow/error.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <memory>

namespace coinflow::cli {

std::string sha256_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw error(errc::io_failure, "cannot open " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 init failed");
    std::array<char, 1 << 16> buf;
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0)
            EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
    std::string hex;
    char byte[3];
    for (unsigned i = 0; i < len; ++i) {
        std::snprintf(byte, sizeof(byte), "%02x", md[i]);
        hex += byte;
    }
    return hex;
}

RunManifest::RunManifest(std::string command, std::vector<std::string> argv)
    : command_(std::move(command)), argv_(std::move(argv))
{
}

void RunManifest::add_input(const std::filesystem::path &path)
{
    const std::string digest = sha256_file(path);
    inputs_.push_back({{"path", path.string()}, {"sha256", digest}});
}

void RunManifest::add_output(const std::filesystem::path &path)
{
    const std::string digest = sha256_file(path);
    outputs_.push_back({{"file", path.filename().string()}, {"sha256", digest}});
}

void RunManifest::write(const std::filesystem::path &output_dir) const
{
    nlohmann::ordered_json j;
    j["command"] = command_;
    j["argv"] = argv_;
    j["parameters"] = parameters_;
    j["inputs"] = inputs_;
    j["outputs"] = outputs_;
    j["tool_version"] = std::string("coinflow ") + COINFLOW_VERSION;
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &utc);
    j["timestamp"] = stamp;

    std::ofstream out(output_dir / "manifest.json", std::ios::binary | std::ios::trunc);
    if (!out)
        throw error(errc::io_failure, "cannot write manifest under " + output_dir.string());
    out << j.dump(2) << '\n';
}

} // namespace coinflow::cli
