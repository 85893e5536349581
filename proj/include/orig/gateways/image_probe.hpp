// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace orig::gateways {

struct ImageInfo {
    std::string mime;
    int width = 0;
    int height = 0;
};

// Header-level decode check: recognizes PNG, JPEG, GIF, BMP and (lossy) WebP
// and reads their pixel dimensions. Returns nullopt for anything else, which
// select_images treats as an undecodable download.
std::optional<ImageInfo> probe_image(std::string_view bytes);

}  // namespace orig::gateways
