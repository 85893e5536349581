// SPDX-License-Identifier: Apache-2.0
#include "orig/gateways/retrieval_ops.hpp"

#include <nlohmann/json.hpp>
#include <set>
#include <spdlog/spdlog.h>

#include "orig/common/clock.hpp"
#include "orig/common/error.hpp"
#include "orig/common/hashing.hpp"
#include "orig/common/io.hpp"
#include "orig/common/strings.hpp"
#include "orig/gateways/image_probe.hpp"
#include "orig/gateways/structured.hpp"

namespace orig::gateways {

using nlohmann::json;

namespace {

std::string render_snippets(const std::vector<SearchHit>& hits) {
    std::string out;
    for (const auto& h : hits) {
        out += "[" + std::to_string(h.rank) + "] (" + h.url + ") " + h.snippet + "\n";
    }
    return out;
}

void note(const WarningSink& warn, const std::string& message) {
    spdlog::warn("{}", message);
    if (warn) warn(message);
}

}  // namespace

std::vector<knowledge::TextEvidence> rank_and_fetch_pages(GatewayHub& hub,
                                                          const std::string& prompt_text,
                                                          const std::vector<SearchHit>& hits,
                                                          int keep, const std::string& query,
                                                          const WarningSink& warn) {
    if (keep < 1) throw PreconditionError("rank_and_fetch_pages: keep must be >= 1");
    if (hits.empty()) return {};

    const int n = static_cast<int>(hits.size());
    const std::function<RankingPayload(const std::string&)> parse = [n](const std::string& raw) {
        return parse_ranking(raw, n);
    };
    auto ranking = invoke_parsed<RankingPayload>(
                       hub, InstructionRole::Bootstrap,
                       {{"prompt", prompt_text}, {"snippets", render_snippets(hits)}}, {}, parse,
                       warn)
                       .ranking;

    // A partial ranking is completed with the remaining hits in backend rank
    // order, so dead-link substitution never runs out of candidates early.
    std::set<int> listed(ranking.begin(), ranking.end());
    for (const auto& h : hits) {
        if (listed.count(h.rank) == 0) ranking.push_back(h.rank);
    }

    std::vector<knowledge::TextEvidence> pages;
    for (const int rank : ranking) {
        if (static_cast<int>(pages.size()) >= keep) break;
        const auto& hit = hits[static_cast<std::size_t>(rank - 1)];
        std::string content;
        try {
            content = hub.fetch_page(hit.url);
        } catch (const GatewayError&) {
            note(warn, "page unreachable, substituting next ranked: " + hit.url);
            continue;
        }
        if (strings::trim(content).empty()) {
            note(warn, "page empty, substituting next ranked: " + hit.url);
            continue;
        }
        pages.push_back(knowledge::make_text_evidence(content, hit.url, hit.snippet,
                                                      format_utc(hub.time().now_ms()), query));
    }
    if (pages.empty()) note(warn, "no candidate page reachable for query: " + query);
    return pages;
}

std::vector<knowledge::ImageEvidence> select_images(GatewayHub& hub, knowledge::BlobStore& blobs,
                                                    const std::vector<SearchHit>& hits, int keep,
                                                    const std::string& query,
                                                    const WarningSink& warn) {
    if (keep < 1) throw PreconditionError("select_images: keep must be >= 1");

    std::vector<knowledge::ImageEvidence> selected;
    std::set<std::string> seen_hashes;
    for (const auto& hit : hits) {
        if (static_cast<int>(selected.size()) >= keep) break;
        const std::string url = hit.image_url.empty() ? hit.url : hit.image_url;
        std::string bytes;
        try {
            bytes = hub.fetch_image(url);
        } catch (const GatewayError&) {
            note(warn, "image link dead, skipping: " + url);
            continue;
        }
        if (bytes.empty()) {
            note(warn, "image empty, skipping: " + url);
            continue;
        }
        const auto info = probe_image(bytes);
        if (!info) {
            note(warn, "image undecodable, skipping: " + url);
            continue;
        }
        const std::string hash = hashing::sha256_hex(bytes);
        if (!seen_hashes.insert(hash).second) continue;  // byte-duplicate

        blobs.put(bytes);
        knowledge::ImageEvidence ev;
        ev.bytes_ref = hash;
        ev.title = strings::sanitize_utf8(hit.title);
        ev.source_url = url;
        ev.query_of_origin = query;
        ev.content_hash = hash;
        ev.mime = info->mime;
        ev.width = info->width;
        ev.height = info->height;
        selected.push_back(std::move(ev));
    }
    if (selected.empty() && !hits.empty()) {
        note(warn, "no accessible image among " + std::to_string(hits.size()) +
                       " hits for query: " + query);
    }
    return selected;
}

GenerationArtifact generate_artifact(GatewayHub& hub, const std::string& prompt_text,
                                     const std::vector<AttachedImage>& reference_images,
                                     const std::filesystem::path& run_dir) {
    if (strings::trim(prompt_text).empty()) {
        throw PreconditionError("generate_artifact: prompt text is empty");
    }

    const std::string body = hub.generate(prompt_text, reference_images);

    GenerationArtifact artifact;
    artifact.prompt_sha256 = hashing::sha256_hex(prompt_text);
    for (const auto& [hash, bytes] : reference_images) artifact.reference_hashes.push_back(hash);
    artifact.response_sha256 = hashing::sha256_hex(body);
    artifact.response_bytes = body.size();

    const auto dir = run_dir / "artifact";
    io::ensure_dir(dir);
    std::string filename = "output.bin";
    if (const auto info = probe_image(body)) {
        artifact.response_is_image = true;
        filename = "output." + info->mime.substr(info->mime.find('/') + 1);
    } else {
        try {
            (void)json::parse(body);
            filename = "backend_response.json";
        } catch (const json::parse_error&) {
        }
    }
    artifact.artifact_file = dir / filename;
    io::write_file_atomic(artifact.artifact_file, body);

    json manifest = {{"prompt_sha256", artifact.prompt_sha256},
                     {"reference_hashes", artifact.reference_hashes},
                     {"response_sha256", artifact.response_sha256},
                     {"response_bytes", artifact.response_bytes},
                     {"artifact_file", filename}};
    artifact.manifest_file = dir / "manifest.json";
    io::write_file_atomic(artifact.manifest_file, manifest.dump(2) + "\n");
    return artifact;
}

}  // namespace orig::gateways
