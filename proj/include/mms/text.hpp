#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mms {

// Byte-level normalization shared by the keyword index, the toy embedder,
// the intent matcher and query planning: ASCII letters lowercased, ASCII
// punctuation treated as whitespace, tokens split on whitespace. Bytes
// >= 0x80 pass through untouched so UTF-8 text stays intact.
std::vector<std::string> tokenize(std::string_view text);

// Tokens joined by single spaces; the canonical surface form used for
// intent lookup keys and equality of normalized texts.
std::string normalize_join(std::string_view text);

std::string join_tokens(const std::vector<std::string>& tokens);

}  // namespace mms
