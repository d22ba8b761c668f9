#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

namespace causality::detail {

std::string sha256_hex(const std::string& bytes);

// Downloads `url` into `dir`. A non-empty `sha256` must match the payload.
// Returns the path written; throws std::runtime_error on failure.
std::filesystem::path fetch_url(const std::string& url, const std::string& sha256, const std::filesystem::path& dir,
                                std::ostream& err);

}  // namespace causality::detail
