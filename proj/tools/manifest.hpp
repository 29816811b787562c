#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace wavesel::cli {

std::string sha256_hex(std::string_view bytes);

/// Records what a command read and wrote; written last as manifest.json.
class Manifest {
public:
    Manifest(std::string command, std::filesystem::path out_dir);

    nlohmann::json& config() { return config_; }
    nlohmann::json& extra() { return extra_; }

    void input(const std::filesystem::path& path, std::string_view bytes);
    /// Writes `bytes` atomically into the output directory and records its digest.
    void output(const std::string& name, std::string_view bytes);

    void write() const;

private:
    std::string command_;
    std::filesystem::path out_dir_;
    nlohmann::json config_ = nlohmann::json::object();
    nlohmann::json extra_ = nlohmann::json::object();
    nlohmann::json inputs_ = nlohmann::json::array();
    nlohmann::json outputs_ = nlohmann::json::array();
    std::chrono::steady_clock::time_point start_;
};

} // namespace wavesel::cli
