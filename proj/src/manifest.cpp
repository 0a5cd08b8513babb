#include "tempres/manifest.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <memory>

#include <openssl/evp.h>

#include "tempres/errors.hpp"

namespace tempres {

std::string sha256_hex(std::string_view bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
        throw Error("SHA-256 digest failed");
    }
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        char buf[3];
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["tool_version"] = tool_version;
    j["timestamp"] = timestamp;
    j["master_seed"] = config.experiment.master_seed;
    j["config"] = config_to_json(config);
    j["outputs"] = nlohmann::json::array();
    for (const auto& o : outputs) {
        j["outputs"].push_back({{"file", o.name}, {"sha256", o.sha256}, {"bytes", o.bytes}});
    }
    return j;
}

} // namespace tempres
