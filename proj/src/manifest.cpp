#include "astroturf/manifest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <memory>
#include <vector>

#include "astroturf/error.hpp"

namespace astroturf {
namespace {

class Sha256 {
public:
    Sha256() : ctx_(EVP_MD_CTX_new(), EVP_MD_CTX_free) {
        if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
    }
    void update(const void* data, std::size_t n) { EVP_DigestUpdate(ctx_.get(), data, n); }
    std::string hex() {
        unsigned char digest[EVP_MAX_MD_SIZE];
        unsigned int len = 0;
        EVP_DigestFinal_ex(ctx_.get(), digest, &len);
        static constexpr char digits[] = "0123456789abcdef";
        std::string out;
        for (unsigned i = 0; i < len; ++i) {
            out += digits[digest[i] >> 4];
            out += digits[digest[i] & 15];
        }
        return out;
    }

private:
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

std::string file_digest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    Sha256 h;
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    return h.hex();
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
    Sha256 h;
    h.update(bytes.data(), bytes.size());
    return h.hex();
}

std::string sha256_path(const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(path)) return file_digest(path);
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(path)) {
        // A manifest describes its directory; it is not part of the content.
        if (e.is_regular_file() && e.path().filename() != "manifest.json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    Sha256 h;
    for (const auto& f : files) {
        const std::string line = fs::relative(f, path).generic_string() + " " + file_digest(f) + "\n";
        h.update(line.data(), line.size());
    }
    return h.hex();
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j = {{"command", command},
                        {"config_digest", config_digest},
                        {"input_digests", input_digests},
                        {"tool_version", tool_version},
                        {"wall_time_seconds", wall_time_seconds}};
    j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
    return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.config_digest = j.at("config_digest").get<std::string>();
    m.input_digests = j.at("input_digests").get<std::map<std::string, std::string>>();
    if (!j.at("seed").is_null()) m.seed = j.at("seed").get<std::uint64_t>();
    m.tool_version = j.at("tool_version").get<std::string>();
    m.wall_time_seconds = j.at("wall_time_seconds").get<double>();
    return m;
}

std::map<std::string, RunManifest> read_manifest(const std::filesystem::path& dir) {
    std::map<std::string, RunManifest> out;
    const auto path = dir / "manifest.json";
    if (!std::filesystem::exists(path)) return out;
    std::ifstream in(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
        for (const auto& [cmd, entry] : doc.at("runs").items()) out[cmd] = RunManifest::from_json(entry);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": malformed manifest: " + e.what());
    }
    return out;
}

void write_manifest(const std::filesystem::path& dir, const RunManifest& manifest) {
    auto runs = read_manifest(dir);
    runs[manifest.command] = manifest;
    nlohmann::json doc = {{"format", "astroturf-manifest"}, {"runs", nlohmann::json::object()}};
    for (const auto& [cmd, m] : runs) doc["runs"][cmd] = m.to_json();
    const auto path = dir / "manifest.json";
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

}  // namespace astroturf
