#pragma once

#include <string>
#include <string_view>

namespace footprint {

// SHA-256 hex digest of a byte string.
std::string sha256_hex(std::string_view bytes);

// SHA-256 hex digest of a file's contents. Throws AuditError{IoError} if
// the file cannot be read.
std::string sha256_file_hex(const std::string& path);

}  // namespace footprint
