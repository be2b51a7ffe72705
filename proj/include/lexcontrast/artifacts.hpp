#ifndef LEXCONTRAST_ARTIFACTS_HPP
#define LEXCONTRAST_ARTIFACTS_HPP

// Artifact writing: SHA-256 content hashes, atomic write-then-rename, and the
// per-run manifest that lists every input and output with its hash.

#include <lexcontrast/config.hpp>
#include <lexcontrast/csv.hpp>
#include <lexcontrast/error.hpp>

#include <json.hpp>
#include <openssl/evp.h>

#include <array>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace lexcontrast {

inline constexpr std::string_view tool_name = "lexcontrast";
inline constexpr std::string_view tool_version = "0.1.0";

inline std::string sha256_hex(std::string_view data)
{
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1)
        throw Error("sha256: digest computation failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

/// Writes to a sibling temporary file and renames it into place, so readers never
/// observe a partially written artifact.
inline void atomic_write(const std::filesystem::path& path, std::string_view content)
{
    namespace fs = std::filesystem;
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out)
            throw Error("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

inline std::string json_text(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

/// Collects the inputs read and outputs written by one subcommand run.
class RunRecorder {
public:
    RunRecorder(std::string subcommand, std::filesystem::path dir, const RunConfig& config)
        : subcommand_(std::move(subcommand)), dir_(std::move(dir)), config_(config)
    {
    }

    const std::filesystem::path& dir() const { return dir_; }

    /// Reads an input file and records its hash.
    std::string read_input(const std::string& path)
    {
        std::string content = csv::read_file(path);
        inputs_.push_back({path, sha256_hex(content)});
        return content;
    }

    void write(const std::string& name, std::string_view content)
    {
        atomic_write(dir_ / name, content);
        outputs_.push_back({name, sha256_hex(content), content.size()});
    }

    void write_json(const std::string& name, const nlohmann::ordered_json& j) { write(name, json_text(j)); }

    std::vector<std::string> output_names() const
    {
        std::vector<std::string> out;
        for (const auto& o : outputs_)
            out.push_back(o.name);
        return out;
    }

    /// Writes manifest_<subcommand>.json and returns its file name.
    std::string finish()
    {
        nlohmann::ordered_json m;
        m["tool"] = tool_name;
        m["version"] = tool_version;
        m["subcommand"] = subcommand_;
        m["seed"] = config_.seed();
        nlohmann::ordered_json cfg;
        for (const auto& [k, v] : config_.values())
            cfg[k] = v;
        m["config"] = cfg;
        auto ins = nlohmann::ordered_json::array();
        for (const auto& i : inputs_)
            ins.push_back({{"path", i.path}, {"sha256", i.sha256}});
        m["inputs"] = ins;
        auto outs = nlohmann::ordered_json::array();
        for (const auto& o : outputs_)
            outs.push_back({{"file", o.name}, {"sha256", o.sha256}, {"bytes", o.bytes}});
        m["outputs"] = outs;
        std::string name = "manifest_" + subcommand_ + ".json";
        atomic_write(dir_ / name, json_text(m));
        return name;
    }

private:
    struct Input {
        std::string path;
        std::string sha256;
    };
    struct Output {
        std::string name;
        std::string sha256;
        std::size_t bytes;
    };

    std::string subcommand_;
    std::filesystem::path dir_;
    const RunConfig& config_;
    std::vector<Input> inputs_;
    std::vector<Output> outputs_;
};

} // namespace lexcontrast

#endif
