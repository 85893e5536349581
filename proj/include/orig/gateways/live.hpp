// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "orig/gateways/backends.hpp"

namespace orig::gateways {

// Connection settings for the five external services. Keys default to the
// ORIG_*_KEY environment variables; base URLs mirror a Serper-style search
// API (web + image endpoints), a page-to-markdown reader, an OpenAI-style
// chat completions model and an images endpoint. All are swappable.
struct LiveConfig {
    std::string model_base_url = "https://api.openai.com";
    std::string model_name = "gpt-5";
    std::string search_base_url = "https://google.serper.dev";
    std::string reader_base_url = "https://r.jina.ai";
    std::string imagegen_base_url = "https://api.openai.com";
    std::string imagegen_model = "gpt-image-1";
    std::string model_key;
    std::string search_key;
    std::string reader_key;
    std::string imagegen_key;
    int timeout_seconds = 60;
};

// Fills empty key fields from ORIG_MODEL_KEY, ORIG_SEARCH_KEY,
// ORIG_READER_KEY and ORIG_IMAGEGEN_KEY.
LiveConfig with_env_keys(LiveConfig config);

BackendSet make_live_backends(const LiveConfig& config);

}  // namespace orig::gateways
