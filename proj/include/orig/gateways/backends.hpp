// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orig/gateways/instruction.hpp"

namespace orig::gateways {

// Canonical service names; cassette entries use these, with model calls
// suffixed by their role ("model:QueryPlanning").
namespace service {
inline constexpr const char* kModel = "model";
inline constexpr const char* kTextSearch = "search_text";
inline constexpr const char* kImageSearch = "search_image";
inline constexpr const char* kPageReader = "page_reader";
inline constexpr const char* kImageFetch = "image_fetch";
inline constexpr const char* kImageGen = "image_gen";
}  // namespace service

struct SearchHit {
    int rank = 0;          // 1-based, contiguous
    std::string url;       // result page
    std::string snippet;   // text search
    std::string title;     // image search
    std::string image_url; // image search: direct image link
};

std::string hits_to_json(const std::vector<SearchHit>& hits);
std::vector<SearchHit> hits_from_json(const std::string& payload);

struct BackendResponse {
    std::string body;
    std::optional<std::int64_t> tokens_in;   // set when the backend reports usage
    std::optional<std::int64_t> tokens_out;
};

// (content-hash, raw bytes) of an attached reference image.
using AttachedImage = std::pair<std::string, std::string>;

class ModelBackend {
public:
    virtual ~ModelBackend() = default;
    virtual BackendResponse complete(InstructionRole role, const std::string& rendered_prompt,
                                     const std::vector<AttachedImage>& images) = 0;
};

class SearchBackend {
public:
    virtual ~SearchBackend() = default;
    // body is the canonical hits JSON (see hits_to_json).
    virtual BackendResponse search(const std::string& query) = 0;
};

class PageReaderBackend {
public:
    virtual ~PageReaderBackend() = default;
    virtual BackendResponse fetch(const std::string& url) = 0;
};

class ImageFetchBackend {
public:
    virtual ~ImageFetchBackend() = default;
    virtual BackendResponse fetch(const std::string& url) = 0;
};

class ImageGenBackend {
public:
    virtual ~ImageGenBackend() = default;
    virtual BackendResponse generate(const std::string& prompt,
                                     const std::vector<AttachedImage>& reference_images) = 0;
};

struct BackendSet {
    std::shared_ptr<ModelBackend> model;
    std::shared_ptr<SearchBackend> text_search;
    std::shared_ptr<SearchBackend> image_search;
    std::shared_ptr<PageReaderBackend> page_reader;
    std::shared_ptr<ImageFetchBackend> image_fetch;
    std::shared_ptr<ImageGenBackend> image_gen;
};

}  // namespace orig::gateways
