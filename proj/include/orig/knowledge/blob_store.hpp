// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>

namespace orig::knowledge {

// Content-addressed byte store; keys are SHA-256 hex of the bytes. Backing
// layout is one file per blob under the root directory.
class BlobStore {
public:
    explicit BlobStore(std::filesystem::path root);

    // Stores bytes and returns their content key. Idempotent.
    std::string put(std::string_view bytes);

    std::string get(const std::string& key) const;  // throws PersistenceError if missing
    bool contains(const std::string& key) const;

    const std::filesystem::path& root() const { return root_; }

    // Copies one blob into another store (no-op when roots are equal).
    void copy_to(const std::string& key, BlobStore& dst) const;

private:
    std::filesystem::path path_for(const std::string& key) const;
    std::filesystem::path root_;
};

}  // namespace orig::knowledge
