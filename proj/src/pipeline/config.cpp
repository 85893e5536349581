// SPDX-License-Identifier: Apache-2.0
#include "orig/pipeline/config.hpp"

#include <nlohmann/json.hpp>

#include "orig/common/error.hpp"
#include "orig/common/io.hpp"
#include "orig/common/strings.hpp"

namespace orig::pipeline {

using nlohmann::json;

IterationPolicy parse_policy(const std::string& text) {
    const auto t = strings::trim(text);
    if (t == "adaptive") return IterationPolicy::adaptive();
    if (strings::starts_with(t, "fixed:")) {
        try {
            const int n = std::stoi(t.substr(6));
            if (n >= 1) return IterationPolicy::fixed(n);
        } catch (const std::exception&) {
        }
        throw ValidationError("policy: fixed:<n> requires an integer n >= 1, got '" + text + "'");
    }
    throw ValidationError("policy must be 'adaptive' or 'fixed:<n>', got '" + text + "'");
}

std::string policy_to_string(const IterationPolicy& policy) {
    return policy.kind == IterationPolicy::Kind::Adaptive
               ? "adaptive"
               : "fixed:" + std::to_string(policy.rounds);
}

namespace {

gateways::CassetteMode parse_mode(const std::string& s) {
    if (s == "record") return gateways::CassetteMode::Record;
    if (s == "replay") return gateways::CassetteMode::Replay;
    if (s == "off") return gateways::CassetteMode::Passthrough;
    throw ValidationError("cassette mode must be record, replay or off, got '" + s + "'");
}

template <typename T>
void read_if(const json& j, const char* key, T& out) {
    if (const auto it = j.find(key); it != j.end()) out = it->get<T>();
}

}  // namespace

RunConfig config_from_json(const std::string& content) {
    json j;
    try {
        j = json::parse(content);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("config: root is not an object");

    RunConfig cfg;
    if (j.contains("policy")) cfg.policy = parse_policy(j["policy"].get<std::string>());
    read_if(j, "max_rounds", cfg.max_rounds);
    read_if(j, "keep_pages", cfg.keep_pages);
    read_if(j, "keep_images", cfg.keep_images);
    read_if(j, "digest_max_chars", cfg.digest_max_chars);
    read_if(j, "skip_generation", cfg.skip_generation);
    read_if(j, "backend", cfg.backend);
    read_if(j, "rate_limit_per_second", cfg.rate_limit_per_second);
    read_if(j, "retry_attempts", cfg.retry_attempts);
    read_if(j, "max_hits", cfg.max_hits);
    if (j.contains("cassette")) {
        const auto& c = j["cassette"];
        if (c.contains("mode")) cfg.cassette_mode = parse_mode(c["mode"].get<std::string>());
        read_if(c, "path", cfg.cassette_path);
    }
    if (j.contains("live")) {
        const auto& l = j["live"];
        read_if(l, "model_base_url", cfg.live.model_base_url);
        read_if(l, "model_name", cfg.live.model_name);
        read_if(l, "search_base_url", cfg.live.search_base_url);
        read_if(l, "reader_base_url", cfg.live.reader_base_url);
        read_if(l, "imagegen_base_url", cfg.live.imagegen_base_url);
        read_if(l, "imagegen_model", cfg.live.imagegen_model);
        read_if(l, "timeout_seconds", cfg.live.timeout_seconds);
    }

    if (cfg.max_rounds < 1) throw ValidationError("config: max_rounds must be >= 1");
    if (cfg.keep_pages < 1) throw ValidationError("config: keep_pages must be >= 1");
    if (cfg.keep_images < 1) throw ValidationError("config: keep_images must be >= 1");
    if (cfg.digest_max_chars < 256) throw ValidationError("config: digest_max_chars must be >= 256");
    if (cfg.backend != "live" && cfg.backend != "stub") {
        throw ValidationError("config: backend must be 'live' or 'stub', got '" + cfg.backend + "'");
    }
    return cfg;
}

std::string config_to_json(const RunConfig& cfg) {
    const json j = {
        {"policy", policy_to_string(cfg.policy)},
        {"max_rounds", cfg.max_rounds},
        {"keep_pages", cfg.keep_pages},
        {"keep_images", cfg.keep_images},
        {"digest_max_chars", cfg.digest_max_chars},
        {"skip_generation", cfg.skip_generation},
        {"backend", cfg.backend},
        {"rate_limit_per_second", cfg.rate_limit_per_second},
        {"retry_attempts", cfg.retry_attempts},
        {"max_hits", cfg.max_hits},
        {"cassette", {{"mode", to_string(cfg.cassette_mode)}, {"path", cfg.cassette_path}}},
        {"live",
         {{"model_base_url", cfg.live.model_base_url},
          {"model_name", cfg.live.model_name},
          {"search_base_url", cfg.live.search_base_url},
          {"reader_base_url", cfg.live.reader_base_url},
          {"imagegen_base_url", cfg.live.imagegen_base_url},
          {"imagegen_model", cfg.live.imagegen_model},
          {"timeout_seconds", cfg.live.timeout_seconds}}},
    };
    return j.dump(2) + "\n";
}

RunConfig load_config(const std::filesystem::path& path) {
    if (!io::exists(path)) throw PersistenceError("config file not found: " + path.string());
    return config_from_json(io::read_file(path));
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ValidationError("override must be key=value, got '" + assignment + "'");
    }
    const std::string key = strings::trim(assignment.substr(0, eq));
    const std::string value = strings::trim(assignment.substr(eq + 1));

    const auto as_int = [&](const char* name) {
        try {
            return std::stoi(value);
        } catch (const std::exception&) {
            throw ValidationError(std::string("override ") + name + " expects an integer, got '" +
                                  value + "'");
        }
    };
    const auto as_bool = [&](const char* name) {
        if (value == "true" || value == "1") return true;
        if (value == "false" || value == "0") return false;
        throw ValidationError(std::string("override ") + name + " expects true/false, got '" +
                              value + "'");
    };

    if (key == "policy") {
        cfg.policy = parse_policy(value);
    } else if (key == "max_rounds") {
        cfg.max_rounds = as_int("max_rounds");
    } else if (key == "keep_pages") {
        cfg.keep_pages = as_int("keep_pages");
    } else if (key == "keep_images") {
        cfg.keep_images = as_int("keep_images");
    } else if (key == "digest_max_chars") {
        cfg.digest_max_chars = as_int("digest_max_chars");
    } else if (key == "skip_generation") {
        cfg.skip_generation = as_bool("skip_generation");
    } else if (key == "backend") {
        if (value != "live" && value != "stub") {
            throw ValidationError("override backend must be 'live' or 'stub'");
        }
        cfg.backend = value;
    } else if (key == "rate_limit_per_second") {
        cfg.rate_limit_per_second = as_int("rate_limit_per_second");
    } else if (key == "retry_attempts") {
        cfg.retry_attempts = as_int("retry_attempts");
    } else if (key == "max_hits") {
        cfg.max_hits = as_int("max_hits");
    } else if (key == "resume") {
        cfg.resume = as_bool("resume");
    } else if (key == "cassette.mode") {
        cfg.cassette_mode = parse_mode(value);
    } else if (key == "cassette.path") {
        cfg.cassette_path = value;
    } else if (key == "live.model_base_url") {
        cfg.live.model_base_url = value;
    } else if (key == "live.model_name") {
        cfg.live.model_name = value;
    } else if (key == "live.search_base_url") {
        cfg.live.search_base_url = value;
    } else if (key == "live.reader_base_url") {
        cfg.live.reader_base_url = value;
    } else if (key == "live.imagegen_base_url") {
        cfg.live.imagegen_base_url = value;
    } else if (key == "live.imagegen_model") {
        cfg.live.imagegen_model = value;
    } else if (key == "live.timeout_seconds") {
        cfg.live.timeout_seconds = as_int("live.timeout_seconds");
    } else {
        throw ValidationError("unknown config key '" + key + "'");
    }
}

void apply_cassette_flag(RunConfig& cfg, const std::string& flag) {
    if (flag == "off") {
        cfg.cassette_mode = gateways::CassetteMode::Passthrough;
        cfg.cassette_path.clear();
        return;
    }
    const auto colon = flag.find(':');
    if (colon == std::string::npos) {
        throw ValidationError("--cassette expects record:<path>, replay:<path> or off");
    }
    cfg.cassette_mode = parse_mode(flag.substr(0, colon));
    cfg.cassette_path = flag.substr(colon + 1);
    if (cfg.cassette_path.empty()) {
        throw ValidationError("--cassette " + flag.substr(0, colon) + ": path is empty");
    }
}

}  // namespace orig::pipeline
