// SPDX-License-Identifier: Apache-2.0
#include "orig/knowledge/blob_store.hpp"

#include "orig/common/error.hpp"
#include "orig/common/hashing.hpp"
#include "orig/common/io.hpp"

namespace orig::knowledge {

BlobStore::BlobStore(std::filesystem::path root) : root_(std::move(root)) {}

std::filesystem::path BlobStore::path_for(const std::string& key) const { return root_ / key; }

std::string BlobStore::put(std::string_view bytes) {
    const std::string key = hashing::sha256_hex(bytes);
    const auto path = path_for(key);
    if (!io::exists(path)) {
        io::ensure_dir(root_);
        io::write_file_atomic(path, bytes);
    }
    return key;
}

std::string BlobStore::get(const std::string& key) const {
    const auto path = path_for(key);
    if (!io::exists(path)) throw PersistenceError("blob not found: " + path.string());
    return io::read_file(path);
}

bool BlobStore::contains(const std::string& key) const { return io::exists(path_for(key)); }

void BlobStore::copy_to(const std::string& key, BlobStore& dst) const {
    if (dst.root() == root_) return;
    dst.put(get(key));
}

}  // namespace orig::knowledge
