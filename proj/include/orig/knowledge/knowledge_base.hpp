// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "orig/knowledge/blob_store.hpp"
#include "orig/knowledge/evidence.hpp"

namespace orig::knowledge {

// Evolving store of filtered evidence. Values are immutable after
// construction: merge returns a new instance, so snapshots can be shared
// read-only across tasks.
class KnowledgeBase {
public:
    KnowledgeBase() = default;

    const std::vector<TextEvidence>& texts() const { return texts_; }
    const std::vector<ImageEvidence>& images() const { return images_; }

    std::size_t size() const { return texts_.size() + images_.size(); }
    bool empty() const { return texts_.empty() && images_.empty(); }
    bool contains(const std::string& content_hash) const;
    int round_added(const std::string& content_hash) const;  // throws ValidationError if unknown
    const std::map<std::string, int>& rounds() const { return round_added_; }

    bool structurally_equal(const KnowledgeBase& other) const;

    // Union by content hash: existing entries are untouched, unseen entries
    // are appended with the given round, duplicates dropped silently.
    static KnowledgeBase merge(const KnowledgeBase& base, const std::vector<TextEvidence>& texts,
                               const std::vector<ImageEvidence>& images, int round);

private:
    friend KnowledgeBase kb_load(const std::filesystem::path& dir);

    void append_text(TextEvidence ev, int round);
    void append_image(ImageEvidence ev, int round);

    std::vector<TextEvidence> texts_;
    std::vector<ImageEvidence> images_;
    std::map<std::string, int> round_added_;
};

inline KnowledgeBase kb_merge(const KnowledgeBase& base, const std::vector<TextEvidence>& texts,
                              const std::vector<ImageEvidence>& images, int round) {
    return KnowledgeBase::merge(base, texts, images, round);
}

// Bounded deterministic rendering of the knowledge base for model context.
// Lists texts (content, source) then images (title, source, blob key);
// entries are numbered by their position in the full store. When the full
// rendering exceeds max_chars, whole entries are evicted oldest-round-first
// until it fits, so the digest always ends at an entry boundary.
std::string kb_context_digest(const KnowledgeBase& kb, std::size_t max_chars);

// Directory layout: <dir>/manifest.json plus <dir>/blobs/<hash> for image
// bytes. When blob_source is given, referenced image blobs are copied in.
void kb_save(const KnowledgeBase& kb, const std::filesystem::path& dir,
             const BlobStore* blob_source = nullptr);
KnowledgeBase kb_load(const std::filesystem::path& dir);

// Manifest serialization used by kb_save; exposed so callers can byte-compare
// manifests without touching disk.
std::string kb_manifest_json(const KnowledgeBase& kb);

}  // namespace orig::knowledge
