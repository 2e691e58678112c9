#ifndef OE_CORPUS_HPP
#define OE_CORPUS_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "oe/embedding.hpp"
#include "oe/random.hpp"

namespace oe {

class Vocabulary {
   public:
    // Returns the existing id when `token` is already present.
    TokenId add(std::string_view token, std::uint64_t count = 0);
    std::optional<TokenId> find(std::string_view token) const;
    const std::string& token(TokenId id) const { return tokens_.at(id); }
    std::uint64_t count(TokenId id) const { return counts_.at(id); }
    std::uint64_t total_count() const noexcept { return total_; }
    std::size_t size() const noexcept { return tokens_.size(); }
    std::span<const std::string> tokens() const noexcept { return tokens_; }

    // Tokenizes `term` and keeps in-vocabulary tokens; nullopt when none are.
    std::optional<PhraseRef> phrase(std::string_view term) const;

   private:
    std::vector<std::string> tokens_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
    std::unordered_map<std::string, TokenId> index_;
};

// Every constituent word of every ontology term comes first (in order of
// appearance), followed by corpus tokens with count >= min_count sorted by
// descending count then bytewise. Ontology words are kept regardless of count.
Vocabulary build_vocab(const std::optional<std::filesystem::path>& corpus, std::uint64_t min_count,
                       std::span<const std::string> ontology_terms);

// Line reader over plain or gzip-compressed text.
class LineReader {
   public:
    explicit LineReader(const std::filesystem::path& file);
    ~LineReader();
    LineReader(const LineReader&) = delete;
    LineReader& operator=(const LineReader&) = delete;

    bool getline(std::string& line);
    void rewind();

   private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct TokenWindow {
    TokenId target = 0;
    std::vector<TokenId> context;
    std::size_t sentence = 0;  // 0-based line index
    std::size_t position = 0;  // token offset within the sentence
};

// Emits one window per in-vocabulary token: the in-vocabulary tokens at raw
// offsets -window/2..window/2 (target excluded) within the same line.
// Windows with empty context are skipped. Optional frequent-word
// subsampling drops tokens before windowing and draws from `rng`.
class WindowStream {
   public:
    WindowStream(const std::filesystem::path& corpus, const Vocabulary& vocab, int window, Rng* rng = nullptr,
                 double subsample = 0.0);

    bool next(TokenWindow& out);
    // Restarts from the first line; used to cycle the corpus across epochs.
    void rewind();

   private:
    bool load_sentence();

    LineReader reader_;
    const Vocabulary& vocab_;
    int half_;
    Rng* rng_;
    double subsample_;
    std::vector<std::optional<TokenId>> sentence_;
    std::size_t sentence_index_ = 0;
    std::size_t cursor_ = 0;
    bool have_sentence_ = false;
    std::string line_;
};

// Number of windows one full pass emits (without subsampling).
std::size_t count_windows(const std::filesystem::path& corpus, const Vocabulary& vocab, int window);

}  // namespace oe

#endif  // OE_CORPUS_HPP
