// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "orig/gateways/hub.hpp"
#include "orig/knowledge/blob_store.hpp"
#include "orig/knowledge/evidence.hpp"

namespace orig::gateways {

using WarningSink = std::function<void(const std::string&)>;

// Invokes the model and parses its output, re-asking once with identical
// inputs on a parse or validation failure; the second failure propagates.
template <typename T>
T invoke_parsed(GatewayHub& hub, InstructionRole role,
                const std::map<std::string, std::string>& vars,
                const std::vector<AttachedImage>& images,
                const std::function<T(const std::string&)>& parse, const WarningSink& warn) {
    const auto first = hub.model_invoke(role, vars, images);
    try {
        return parse(first.raw_response);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Parse && e.kind() != ErrorKind::Validation) throw;
        if (warn) {
            warn(std::string(to_string(role)) + ": unparseable output, re-asking once (" +
                 e.what() + ")");
        }
    }
    const auto second = hub.model_invoke(role, vars, images);
    return parse(second.raw_response);
}

// Ranks snippets with one model call, then fetches pages in ranked order
// until `keep` succeed; unreachable or empty pages are skipped and the next
// ranked candidate substitutes. Returns fetched page evidence in fetch order.
std::vector<knowledge::TextEvidence> rank_and_fetch_pages(GatewayHub& hub,
                                                          const std::string& prompt_text,
                                                          const std::vector<SearchHit>& hits,
                                                          int keep, const std::string& query,
                                                          const WarningSink& warn = {});

// Walks image hits in rank order, downloading each; failed, undecodable,
// empty or duplicate (by content hash) downloads are dropped; stops after
// `keep` successes. Stored bytes land in the blob store.
std::vector<knowledge::ImageEvidence> select_images(GatewayHub& hub, knowledge::BlobStore& blobs,
                                                    const std::vector<SearchHit>& hits, int keep,
                                                    const std::string& query,
                                                    const WarningSink& warn = {});

struct GenerationArtifact {
    std::filesystem::path artifact_file;
    std::filesystem::path manifest_file;
    std::string prompt_sha256;
    std::vector<std::string> reference_hashes;
    std::string response_sha256;
    std::size_t response_bytes = 0;
    bool response_is_image = false;
};

// Sends the extended prompt plus reference image bytes to the generation
// backend, saves the response under <run_dir>/artifact/ and writes a
// manifest recording the prompt hash and reference-image hashes.
GenerationArtifact generate_artifact(GatewayHub& hub, const std::string& prompt_text,
                                     const std::vector<AttachedImage>& reference_images,
                                     const std::filesystem::path& run_dir);

}  // namespace orig::gateways
