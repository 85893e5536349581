// SPDX-License-Identifier: Apache-2.0
#include "orig/knowledge/knowledge_base.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <tuple>

#include "orig/common/error.hpp"
#include "orig/common/io.hpp"

namespace orig::knowledge {

using nlohmann::json;

bool KnowledgeBase::contains(const std::string& content_hash) const {
    return round_added_.count(content_hash) > 0;
}

int KnowledgeBase::round_added(const std::string& content_hash) const {
    const auto it = round_added_.find(content_hash);
    if (it == round_added_.end()) {
        throw ValidationError("unknown content hash: " + content_hash);
    }
    return it->second;
}

bool KnowledgeBase::structurally_equal(const KnowledgeBase& other) const {
    return texts_ == other.texts_ && images_ == other.images_ && round_added_ == other.round_added_;
}

void KnowledgeBase::append_text(TextEvidence ev, int round) {
    round_added_.emplace(ev.content_hash, round);
    texts_.push_back(std::move(ev));
}

void KnowledgeBase::append_image(ImageEvidence ev, int round) {
    round_added_.emplace(ev.content_hash, round);
    images_.push_back(std::move(ev));
}

KnowledgeBase KnowledgeBase::merge(const KnowledgeBase& base, const std::vector<TextEvidence>& texts,
                                   const std::vector<ImageEvidence>& images, int round) {
    if (round < 0) throw PreconditionError("merge round must be >= 0");
    KnowledgeBase out = base;
    for (const auto& t : texts) {
        if (!out.contains(t.content_hash)) out.append_text(t, round);
    }
    for (const auto& im : images) {
        if (!out.contains(im.content_hash)) out.append_image(im, round);
    }
    return out;
}

namespace {

struct DigestEntry {
    int round;
    int kind;  // texts render (and evict) before images within a round
    std::size_t index;
    std::string line;
};

std::string render_digest(const KnowledgeBase& kb, const std::vector<bool>& keep_text,
                          const std::vector<bool>& keep_image) {
    std::string out = "Knowledge base: " + std::to_string(kb.texts().size()) + " texts, " +
                      std::to_string(kb.images().size()) + " images.\n";
    if (std::find(keep_text.begin(), keep_text.end(), true) != keep_text.end()) {
        out += "Texts:\n";
        for (std::size_t i = 0; i < kb.texts().size(); ++i) {
            if (!keep_text[i]) continue;
            const auto& t = kb.texts()[i];
            out += "[" + std::to_string(i + 1) + "] (source: " + t.source_url + ") " + t.content +
                   "\n";
        }
    }
    if (std::find(keep_image.begin(), keep_image.end(), true) != keep_image.end()) {
        out += "Images:\n";
        for (std::size_t i = 0; i < kb.images().size(); ++i) {
            if (!keep_image[i]) continue;
            const auto& im = kb.images()[i];
            out += "[" + std::to_string(i + 1) + "] Title: " + im.title + " | Url: " +
                   im.source_url + " | Blob: " + im.bytes_ref + "\n";
        }
    }
    return out;
}

}  // namespace

std::string kb_context_digest(const KnowledgeBase& kb, std::size_t max_chars) {
    if (max_chars < 256) throw PreconditionError("digest max_chars must be >= 256");

    std::vector<bool> keep_text(kb.texts().size(), true);
    std::vector<bool> keep_image(kb.images().size(), true);

    // Eviction order: oldest round first; within a round texts before images,
    // each partition in insertion order.
    std::vector<std::tuple<int, int, std::size_t>> order;
    order.reserve(kb.size());
    for (std::size_t i = 0; i < kb.texts().size(); ++i) {
        order.emplace_back(kb.round_added(kb.texts()[i].content_hash), 0, i);
    }
    for (std::size_t i = 0; i < kb.images().size(); ++i) {
        order.emplace_back(kb.round_added(kb.images()[i].content_hash), 1, i);
    }
    std::sort(order.begin(), order.end());

    std::string rendered = render_digest(kb, keep_text, keep_image);
    std::size_t evict = 0;
    while (rendered.size() > max_chars && evict < order.size()) {
        const auto& [round, kind, idx] = order[evict++];
        (kind == 0 ? keep_text : keep_image)[idx] = false;
        rendered = render_digest(kb, keep_text, keep_image);
    }
    return rendered;
}

std::string kb_manifest_json(const KnowledgeBase& kb) {
    json texts = json::array();
    for (const auto& t : kb.texts()) {
        texts.push_back({{"content", t.content},
                         {"source_url", t.source_url},
                         {"snippet", t.snippet},
                         {"retrieved_at", t.retrieved_at},
                         {"query_of_origin", t.query_of_origin},
                         {"content_hash", t.content_hash}});
    }
    json images = json::array();
    for (const auto& im : kb.images()) {
        images.push_back({{"bytes_ref", im.bytes_ref},
                          {"title", im.title},
                          {"source_url", im.source_url},
                          {"query_of_origin", im.query_of_origin},
                          {"content_hash", im.content_hash},
                          {"mime", im.mime},
                          {"width", im.width},
                          {"height", im.height}});
    }
    json round_added = json::object();
    for (const auto& [hash, round] : kb.rounds()) round_added[hash] = round;

    const json manifest = {
        {"version", 1}, {"texts", texts}, {"images", images}, {"round_added", round_added}};
    return manifest.dump(2) + "\n";
}

void kb_save(const KnowledgeBase& kb, const std::filesystem::path& dir,
             const BlobStore* blob_source) {
    io::ensure_dir(dir);
    io::ensure_dir(dir / "blobs");
    if (blob_source != nullptr) {
        BlobStore dst(dir / "blobs");
        for (const auto& im : kb.images()) blob_source->copy_to(im.bytes_ref, dst);
    }
    io::write_file_atomic(dir / "manifest.json", kb_manifest_json(kb));
}

namespace {

const json& require_field(const json& obj, const char* field, const char* context) {
    const auto it = obj.find(field);
    if (it == obj.end()) {
        throw ParseError(std::string("kb manifest: missing field '") + field + "' in " + context);
    }
    return *it;
}

std::string require_string(const json& obj, const char* field, const char* context) {
    const auto& v = require_field(obj, field, context);
    if (!v.is_string()) {
        throw ParseError(std::string("kb manifest: field '") + field + "' in " + context +
                         " is not a string");
    }
    return v.get<std::string>();
}

int require_int(const json& obj, const char* field, const char* context) {
    const auto& v = require_field(obj, field, context);
    if (!v.is_number_integer()) {
        throw ParseError(std::string("kb manifest: field '") + field + "' in " + context +
                         " is not an integer");
    }
    return v.get<int>();
}

}  // namespace

KnowledgeBase kb_load(const std::filesystem::path& dir) {
    const auto manifest_path = dir / "manifest.json";
    json manifest;
    try {
        manifest = json::parse(io::read_file(manifest_path));
    } catch (const json::parse_error& e) {
        throw ParseError("kb manifest: invalid JSON at " + manifest_path.string() + ": " + e.what());
    }
    if (!manifest.is_object()) throw ParseError("kb manifest: root is not an object");

    const auto& texts = require_field(manifest, "texts", "manifest");
    const auto& images = require_field(manifest, "images", "manifest");
    const auto& rounds = require_field(manifest, "round_added", "manifest");
    if (!texts.is_array()) throw ParseError("kb manifest: field 'texts' is not an array");
    if (!images.is_array()) throw ParseError("kb manifest: field 'images' is not an array");
    if (!rounds.is_object()) throw ParseError("kb manifest: field 'round_added' is not an object");

    KnowledgeBase kb;
    for (const auto& t : texts) {
        TextEvidence ev;
        ev.content = require_string(t, "content", "texts[]");
        ev.source_url = require_string(t, "source_url", "texts[]");
        ev.snippet = require_string(t, "snippet", "texts[]");
        ev.retrieved_at = require_string(t, "retrieved_at", "texts[]");
        ev.query_of_origin = require_string(t, "query_of_origin", "texts[]");
        ev.content_hash = require_string(t, "content_hash", "texts[]");
        if (kb.contains(ev.content_hash)) {
            throw ParseError("kb manifest: duplicate content_hash " + ev.content_hash);
        }
        const int round = require_int(rounds, ev.content_hash.c_str(), "round_added");
        kb.append_text(std::move(ev), round);
    }
    for (const auto& im_json : images) {
        ImageEvidence im;
        im.bytes_ref = require_string(im_json, "bytes_ref", "images[]");
        im.title = require_string(im_json, "title", "images[]");
        im.source_url = require_string(im_json, "source_url", "images[]");
        im.query_of_origin = require_string(im_json, "query_of_origin", "images[]");
        im.content_hash = require_string(im_json, "content_hash", "images[]");
        im.mime = require_string(im_json, "mime", "images[]");
        im.width = require_int(im_json, "width", "images[]");
        im.height = require_int(im_json, "height", "images[]");
        if (kb.contains(im.content_hash)) {
            throw ParseError("kb manifest: duplicate content_hash " + im.content_hash);
        }
        const int round = require_int(rounds, im.content_hash.c_str(), "round_added");
        kb.append_image(std::move(im), round);
    }
    return kb;
}

}  // namespace orig::knowledge
