#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace coinflow::cli {

std::string sha256_file(const std::filesystem::path &path);

// Written as manifest.json next to a command's outputs. Holds enough to
// re-run the command: argv, effective parameters and input digests. The
// timestamp is the only field that differs between identical runs.
class RunManifest {
public:
    RunManifest(std::string command, std::vector<std::string> argv);

    nlohmann::ordered_json &parameters() { return parameters_; }
    void add_input(const std::filesystem::path &path);
    void add_output(const std::filesystem::path &path);

    void write(const std::filesystem::path &output_dir) const;

private:
    std::string command_;
    std::vector<std::string> argv_;
    nlohmann::ordered_json parameters_ = nlohmann::ordered_json::object();
    nlohmann::ordered_json inputs_ = nlohmann::ordered_json::array();
    nlohmann::ordered_json outputs_ = nlohmann::ordered_json::array();
};

} // namespace coinflow::cli
