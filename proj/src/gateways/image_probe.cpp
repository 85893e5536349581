// SPDX-License-Identifier: Apache-2.0
#include "orig/gateways/image_probe.hpp"

#include <cstdint>

namespace orig::gateways {

namespace {

std::uint32_t be32(std::string_view b, std::size_t off) {
    return (static_cast<std::uint8_t>(b[off]) << 24) | (static_cast<std::uint8_t>(b[off + 1]) << 16) |
           (static_cast<std::uint8_t>(b[off + 2]) << 8) | static_cast<std::uint8_t>(b[off + 3]);
}

std::uint16_t be16(std::string_view b, std::size_t off) {
    return static_cast<std::uint16_t>((static_cast<std::uint8_t>(b[off]) << 8) |
                                      static_cast<std::uint8_t>(b[off + 1]));
}

std::uint32_t le32(std::string_view b, std::size_t off) {
    return static_cast<std::uint8_t>(b[off]) | (static_cast<std::uint8_t>(b[off + 1]) << 8) |
           (static_cast<std::uint8_t>(b[off + 2]) << 16) |
           (static_cast<std::uint8_t>(b[off + 3]) << 24);
}

std::uint16_t le16(std::string_view b, std::size_t off) {
    return static_cast<std::uint16_t>(static_cast<std::uint8_t>(b[off]) |
                                      (static_cast<std::uint8_t>(b[off + 1]) << 8));
}

std::optional<ImageInfo> probe_png(std::string_view b) {
    static constexpr char kSig[] = "\x89PNG\r\n\x1a\n";
    if (b.size() < 24 || b.substr(0, 8) != std::string_view(kSig, 8)) return std::nullopt;
    if (b.substr(12, 4) != "IHDR") return std::nullopt;
    const auto w = be32(b, 16);
    const auto h = be32(b, 20);
    if (w == 0 || h == 0) return std::nullopt;
    return ImageInfo{"image/png", static_cast<int>(w), static_cast<int>(h)};
}

std::optional<ImageInfo> probe_jpeg(std::string_view b) {
    if (b.size() < 4 || static_cast<std::uint8_t>(b[0]) != 0xFF ||
        static_cast<std::uint8_t>(b[1]) != 0xD8) {
        return std::nullopt;
    }
    std::size_t i = 2;
    while (i + 4 <= b.size()) {
        if (static_cast<std::uint8_t>(b[i]) != 0xFF) return std::nullopt;
        const auto marker = static_cast<std::uint8_t>(b[i + 1]);
        if (marker == 0xD8 || (marker >= 0xD0 && marker <= 0xD9)) {
            i += 2;
            continue;
        }
        const std::size_t seg_len = be16(b, i + 2);
        if (seg_len < 2) return std::nullopt;
        const bool is_sof = (marker >= 0xC0 && marker <= 0xCF) && marker != 0xC4 &&
                            marker != 0xC8 && marker != 0xCC;
        if (is_sof) {
            if (i + 9 > b.size()) return std::nullopt;
            const int h = be16(b, i + 5);
            const int w = be16(b, i + 7);
            if (w == 0 || h == 0) return std::nullopt;
            return ImageInfo{"image/jpeg", w, h};
        }
        i += 2 + seg_len;
    }
    return std::nullopt;
}

std::optional<ImageInfo> probe_gif(std::string_view b) {
    if (b.size() < 10 || (b.substr(0, 6) != "GIF87a" && b.substr(0, 6) != "GIF89a")) {
        return std::nullopt;
    }
    const int w = le16(b, 6);
    const int h = le16(b, 8);
    if (w == 0 || h == 0) return std::nullopt;
    return ImageInfo{"image/gif", w, h};
}

std::optional<ImageInfo> probe_bmp(std::string_view b) {
    if (b.size() < 26 || b.substr(0, 2) != "BM") return std::nullopt;
    const int w = static_cast<int>(le32(b, 18));
    const int h = static_cast<int>(le32(b, 22));
    if (w <= 0 || h == 0) return std::nullopt;
    return ImageInfo{"image/bmp", w, h < 0 ? -h : h};
}

std::optional<ImageInfo> probe_webp(std::string_view b) {
    if (b.size() < 30 || b.substr(0, 4) != "RIFF" || b.substr(8, 4) != "WEBP") return std::nullopt;
    if (b.substr(12, 4) == "VP8 ") {
        // Lossy bitstream: dimensions at a fixed offset after the frame tag.
        const int w = le16(b, 26) & 0x3FFF;
        const int h = le16(b, 28) & 0x3FFF;
        if (w == 0 || h == 0) return std::nullopt;
        return ImageInfo{"image/webp", w, h};
    }
    return std::nullopt;
}

}  // namespace

std::optional<ImageInfo> probe_image(std::string_view bytes) {
    if (bytes.empty()) return std::nullopt;
    if (auto r = probe_png(bytes)) return r;
    if (auto r = probe_jpeg(bytes)) return r;
    if (auto r = probe_gif(bytes)) return r;
    if (auto r = probe_bmp(bytes)) return r;
    if (auto r = probe_webp(bytes)) return r;
    return std::nullopt;
}

}  // namespace orig::gateways
