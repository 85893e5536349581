// SPDX-License-Identifier: Apache-2.0
#include "orig/gateways/backends.hpp"

#include <nlohmann/json.hpp>

#include "orig/common/error.hpp"

namespace orig::gateways {

using nlohmann::json;

std::string hits_to_json(const std::vector<SearchHit>& hits) {
    json arr = json::array();
    for (const auto& h : hits) {
        json j = {{"rank", h.rank}, {"url", h.url}};
        if (!h.snippet.empty()) j["snippet"] = h.snippet;
        if (!h.title.empty()) j["title"] = h.title;
        if (!h.image_url.empty()) j["image_url"] = h.image_url;
        arr.push_back(std::move(j));
    }
    return arr.dump();
}

std::vector<SearchHit> hits_from_json(const std::string& payload) {
    json arr;
    try {
        arr = json::parse(payload);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("search payload is not valid JSON: ") + e.what());
    }
    if (!arr.is_array()) throw ParseError("search payload is not a JSON array");
    std::vector<SearchHit> hits;
    for (const auto& j : arr) {
        SearchHit h;
        h.url = j.value("url", "");
        h.snippet = j.value("snippet", "");
        h.title = j.value("title", "");
        h.image_url = j.value("image_url", "");
        h.rank = static_cast<int>(hits.size()) + 1;  // ranks renumbered contiguously
        hits.push_back(std::move(h));
    }
    return hits;
}

}  // namespace orig::gateways
