// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace orig::gateways {

enum class CassetteMode { Record, Replay, Passthrough };

const char* to_string(CassetteMode mode);

struct CassetteEntry {
    std::string service;
    std::string fingerprint;
    std::string request_digest;
    std::string response;  // raw bytes; serialized as response_b64
    std::int64_t tokens_in = 0;
    std::int64_t tokens_out = 0;
};

// Ordered transcript of every external-service exchange of one run.
// Record appends under a writer lock; Replay consumes entries by fingerprint
// (first unconsumed match), which keeps concurrent fan-out deterministic
// while still detecting missing or divergent requests.
class Cassette {
public:
    // Replay loads the file eagerly; Record truncates unless append is set.
    Cassette(CassetteMode mode, std::filesystem::path path, bool append = false);

    // Passthrough cassette: records nothing, replays nothing.
    Cassette();

    CassetteMode mode() const { return mode_; }
    const std::filesystem::path& path() const { return path_; }

    struct ReplayResult {
        CassetteEntry entry;
        bool failure = false;  // entry was recorded under "<service>!fail"
    };

    // Replay lookup; throws DeterminismError naming expected vs actual
    // fingerprint when no unconsumed entry matches. Entries recorded under
    // the reserved "<service>!fail" name replay a transport failure, so
    // degraded runs stay replayable.
    ReplayResult replay(const std::string& service, const std::string& fingerprint);

    static std::string failure_service(const std::string& service) { return service + "!fail"; }

    void record(const CassetteEntry& entry);

    std::size_t entry_count() const;

    // Drops every recorded entry after the first `count` (resume support).
    void truncate_to(std::size_t count);

    // Full parse of a cassette file, independent of replay bookkeeping.
    static std::vector<CassetteEntry> read_file(const std::filesystem::path& path);

    static std::string serialize_entry(const CassetteEntry& entry);

private:
    CassetteMode mode_ = CassetteMode::Passthrough;
    std::filesystem::path path_;
    mutable std::mutex mu_;
    std::vector<CassetteEntry> entries_;
    std::vector<bool> consumed_;
};

}  // namespace orig::gateways
