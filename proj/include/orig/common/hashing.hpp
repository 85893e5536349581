// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace orig::hashing {

// Hex-encoded SHA-256 of raw bytes.
std::string sha256_hex(std::string_view bytes);

// Content identity for text evidence: SHA-256 of the lowercased,
// whitespace-collapsed content. Model-free and deterministic.
std::string text_content_hash(std::string_view content);

// Request fingerprint: pure function of (service, role, rendered input,
// attached blob hashes). Field-separated so adjacent fields cannot collide.
std::string fingerprint(std::string_view service, std::string_view role,
                        std::string_view request_text,
                        const std::vector<std::string>& blob_hashes);

std::string base64_encode(std::string_view bytes);
std::string base64_decode(std::string_view text);  // throws ParseError on bad input

}  // namespace orig::hashing
