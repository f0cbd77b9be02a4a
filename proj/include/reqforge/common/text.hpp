#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace reqforge::text {

std::string_view trim(std::string_view s);
std::string lower(std::string_view s);
bool starts_with_icase(std::string_view s, std::string_view prefix);

/// Lowercase alphanumerics only: "Organization and Traceability" -> "organizationandtraceability".
std::string fold_key(std::string_view s);

/// At most `limit` bytes of `s`, with "..." appended when cut.
std::string excerpt(std::string_view s, std::size_t limit = 160);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::string sha256_hex(std::string_view data);

}  // namespace reqforge::text
