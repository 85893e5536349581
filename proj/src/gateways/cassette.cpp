// SPDX-License-Identifier: Apache-2.0
#include "orig/gateways/cassette.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "orig/common/error.hpp"
#include "orig/common/hashing.hpp"
#include "orig/common/io.hpp"

namespace orig::gateways {

using nlohmann::json;

const char* to_string(CassetteMode mode) {
    switch (mode) {
        case CassetteMode::Record: return "record";
        case CassetteMode::Replay: return "replay";
        case CassetteMode::Passthrough: return "off";
    }
    return "unknown";
}

Cassette::Cassette() = default;

Cassette::Cassette(CassetteMode mode, std::filesystem::path path, bool append)
    : mode_(mode), path_(std::move(path)) {
    if (mode_ == CassetteMode::Replay || (mode_ == CassetteMode::Record && append)) {
        entries_ = read_file(path_);
        consumed_.assign(entries_.size(), false);
    } else if (mode_ == CassetteMode::Record) {
        if (path_.has_parent_path()) io::ensure_dir(path_.parent_path());
        std::ofstream truncate(path_, std::ios::binary | std::ios::trunc);
        if (!truncate) throw PersistenceError("cannot open cassette for writing: " + path_.string());
    }
}

Cassette::ReplayResult Cassette::replay(const std::string& service, const std::string& fingerprint) {
    std::lock_guard lock(mu_);
    if (mode_ != CassetteMode::Replay) {
        throw DeterminismError("cassette is not in replay mode");
    }
    const std::string failed = failure_service(service);
    std::optional<std::size_t> next_unconsumed;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (consumed_[i]) continue;
        if (!next_unconsumed) next_unconsumed = i;
        if (entries_[i].fingerprint == fingerprint &&
            (entries_[i].service == service || entries_[i].service == failed)) {
            consumed_[i] = true;
            return {entries_[i], entries_[i].service == failed};
        }
    }
    const std::string expected =
        next_unconsumed ? entries_[*next_unconsumed].service + "/" +
                              entries_[*next_unconsumed].fingerprint
                        : "<cassette exhausted>";
    throw DeterminismError("cassette replay mismatch: expected next " + expected + ", actual " +
                           service + "/" + fingerprint);
}

void Cassette::record(const CassetteEntry& entry) {
    std::lock_guard lock(mu_);
    if (mode_ != CassetteMode::Record) return;
    entries_.push_back(entry);
    consumed_.push_back(false);
    io::append_line(path_, serialize_entry(entry));
}

std::size_t Cassette::entry_count() const {
    std::lock_guard lock(mu_);
    return entries_.size();
}

void Cassette::truncate_to(std::size_t count) {
    std::lock_guard lock(mu_);
    if (count >= entries_.size()) return;
    entries_.resize(count);
    consumed_.assign(entries_.size(), false);
    if (mode_ == CassetteMode::Record) {
        std::string content;
        for (const auto& e : entries_) content += serialize_entry(e) + "\n";
        io::write_file_atomic(path_, content);
    }
}

std::string Cassette::serialize_entry(const CassetteEntry& entry) {
    const json j = {{"service", entry.service},
                    {"fingerprint", entry.fingerprint},
                    {"request_digest", entry.request_digest},
                    {"response_b64", hashing::base64_encode(entry.response)},
                    {"tokens_in", entry.tokens_in},
                    {"tokens_out", entry.tokens_out}};
    return j.dump();
}

std::vector<CassetteEntry> Cassette::read_file(const std::filesystem::path& path) {
    const std::string content = io::read_file(path);
    std::vector<CassetteEntry> out;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < content.size()) {
        std::size_t end = content.find('\n', start);
        if (end == std::string::npos) end = content.size();
        const std::string line = content.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError("cassette " + path.string() + " line " + std::to_string(line_no) +
                             ": " + e.what());
        }
        CassetteEntry entry;
        try {
            entry.service = j.at("service").get<std::string>();
            entry.fingerprint = j.at("fingerprint").get<std::string>();
            entry.request_digest = j.at("request_digest").get<std::string>();
            entry.response = hashing::base64_decode(j.at("response_b64").get<std::string>());
            entry.tokens_in = j.at("tokens_in").get<std::int64_t>();
            entry.tokens_out = j.at("tokens_out").get<std::int64_t>();
        } catch (const json::exception& e) {
            throw ParseError("cassette " + path.string() + " line " + std::to_string(line_no) +
                             ": " + e.what());
        }
        out.push_back(std::move(entry));
    }
    return out;
}

}  // namespace orig::gateways
