#include "manifest.hpp"

#include <array>
#include <cstdio>

#include <openssl/evp.h>

#include "wavesel/error.hpp"
#include "wavesel/io.hpp"
#include "wavesel/rng.hpp"
#include "wavesel/version.hpp"

namespace wavesel::cli {

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int size = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &size, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 failed");
    }
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < size; ++i) {
        std::snprintf(buf, sizeof(buf), "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

Manifest::Manifest(std::string command, std::filesystem::path out_dir)
    : command_(std::move(command)), out_dir_(std::move(out_dir)), start_(std::chrono::steady_clock::now()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir_, ec);
    if (ec) {
        throw Error("cannot create output directory '" + out_dir_.string() + "'");
    }
}

void Manifest::input(const std::filesystem::path& path, std::string_view bytes) {
    inputs_.push_back({{"path", path.string()}, {"sha256", sha256_hex(bytes)}, {"bytes", bytes.size()}});
}

void Manifest::output(const std::string& name, std::string_view bytes) {
    write_file_atomic(out_dir_ / name, bytes);
    outputs_.push_back({{"file", name}, {"sha256", sha256_hex(bytes)}, {"bytes", bytes.size()}});
}

void Manifest::write() const {
    nlohmann::json doc;
    doc["command"] = command_;
    doc["version"] = std::string(kVersion);
    doc["generator"] = std::string(kGeneratorName);
    doc["config"] = config_;
    for (const auto& [key, value] : extra_.items()) {
        doc[key] = value;
    }
    doc["inputs"] = inputs_;
    doc["outputs"] = outputs_;
    doc["elapsed_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    write_file_atomic(out_dir_ / "manifest.json", doc.dump(2) + "\n");
}

} // namespace wavesel::cli
