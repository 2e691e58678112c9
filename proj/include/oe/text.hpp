#ifndef OE_TEXT_HPP
#define OE_TEXT_HPP

#include <string>
#include <string_view>
#include <vector>

namespace oe::text {

// Lowercase (ASCII), trim, and collapse internal whitespace runs to a single
// space. Sense-tagged tokens such as `fantasy_life.n.01` pass through intact.
std::string normalize_term(std::string_view term);

// Split on Unicode whitespace, strip leading/trailing ASCII punctuation from
// each piece, lowercase. Pieces that strip to nothing are dropped.
std::vector<std::string> tokenize(std::string_view line);

// Splits on '\t' exactly; empty fields are kept.
std::vector<std::string_view> split_tabs(std::string_view line);

}  // namespace oe::text

#endif  // OE_TEXT_HPP
