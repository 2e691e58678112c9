#include "oe/text.hpp"

#include <cctype>
#include <cstdint>

namespace oe::text {

namespace {

// Byte length of the whitespace code point starting at s[i], or 0.
std::size_t whitespace_len(std::string_view s, std::size_t i) {
    const auto c0 = static_cast<unsigned char>(s[i]);
    if (c0 == ' ' || c0 == '\t' || c0 == '\n' || c0 == '\r' || c0 == '\v' || c0 == '\f') return 1;
    if (c0 < 0xC2) return 0;
    auto byte = [&](std::size_t k) -> unsigned { return i + k < s.size() ? static_cast<unsigned char>(s[i + k]) : 0u; };
    if (c0 == 0xC2) {
        unsigned c1 = byte(1);
        return (c1 == 0x85 || c1 == 0xA0) ? 2 : 0;  // NEL, NBSP
    }
    if (c0 == 0xE1 && byte(1) == 0x9A && byte(2) == 0x80) return 3;  // U+1680
    if (c0 == 0xE2 && byte(1) == 0x80) {
        unsigned c2 = byte(2);
        if ((c2 >= 0x80 && c2 <= 0x8A) || c2 == 0xA8 || c2 == 0xA9 || c2 == 0xAF) return 3;
    }
    if (c0 == 0xE2 && byte(1) == 0x81 && byte(2) == 0x9F) return 3;  // U+205F
    if (c0 == 0xE3 && byte(1) == 0x80 && byte(2) == 0x80) return 3;  // U+3000
    return 0;
}

bool is_ascii_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

char lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

template <class F>
void for_each_piece(std::string_view s, F&& f) {
    std::size_t i = 0, start = 0;
    bool in_piece = false;
    while (i < s.size()) {
        std::size_t w = whitespace_len(s, i);
        if (w > 0) {
            if (in_piece) f(s.substr(start, i - start));
            in_piece = false;
            i += w;
        } else {
            if (!in_piece) start = i;
            in_piece = true;
            ++i;
        }
    }
    if (in_piece) f(s.substr(start));
}

}  // namespace

std::string normalize_term(std::string_view term) {
    std::string out;
    out.reserve(term.size());
    for_each_piece(term, [&](std::string_view piece) {
        if (!out.empty()) out.push_back(' ');
        for (char c : piece) out.push_back(lower(c));
    });
    return out;
}

std::vector<std::string> tokenize(std::string_view line) {
    std::vector<std::string> out;
    for_each_piece(line, [&](std::string_view piece) {
        std::size_t b = 0, e = piece.size();
        while (b < e && is_ascii_punct(piece[b])) ++b;
        while (e > b && is_ascii_punct(piece[e - 1])) --e;
        if (b == e) return;
        std::string tok(piece.substr(b, e - b));
        for (char& c : tok) c = lower(c);
        out.push_back(std::move(tok));
    });
    return out;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t pos = line.find('\t', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace oe::text
