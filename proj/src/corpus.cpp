#include "oe/corpus.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oe/error.hpp"
#include "oe/text.hpp"

namespace oe {

TokenId Vocabulary::add(std::string_view token, std::uint64_t count) {
    auto it = index_.find(std::string(token));
    if (it != index_.end()) return it->second;
    auto id = static_cast<TokenId>(tokens_.size());
    tokens_.emplace_back(token);
    counts_.push_back(count);
    total_ += count;
    index_.emplace(tokens_.back(), id);
    return id;
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
    auto it = index_.find(std::string(token));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::optional<PhraseRef> Vocabulary::phrase(std::string_view term) const {
    PhraseRef p;
    for (const auto& tok : text::tokenize(term))
        if (auto id = find(tok)) p.tokens.push_back(*id);
    if (p.tokens.empty()) return std::nullopt;
    return p;
}

struct LineReader::Impl {
    gzFile file = nullptr;
    std::string path;
};

LineReader::LineReader(const std::filesystem::path& file) : impl_(std::make_unique<Impl>()) {
    impl_->path = file.string();
    impl_->file = gzopen(impl_->path.c_str(), "rb");
    if (impl_->file == nullptr) throw IoError("cannot open " + impl_->path);
    gzbuffer(impl_->file, 1 << 16);
}

LineReader::~LineReader() {
    if (impl_ && impl_->file) gzclose(impl_->file);
}

bool LineReader::getline(std::string& line) {
    line.clear();
    char buf[8192];
    bool any = false;
    while (gzgets(impl_->file, buf, sizeof buf) != nullptr) {
        any = true;
        line.append(buf);
        if (!line.empty() && line.back() == '\n') {
            line.pop_back();
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return true;
        }
    }
    int err = 0;
    const char* msg = gzerror(impl_->file, &err);
    if (err != Z_OK && err != Z_STREAM_END) throw IoError("read error in " + impl_->path + ": " + msg);
    return any;
}

void LineReader::rewind() {
    if (gzrewind(impl_->file) != 0) throw IoError("cannot rewind " + impl_->path);
}

Vocabulary build_vocab(const std::optional<std::filesystem::path>& corpus, std::uint64_t min_count,
                       std::span<const std::string> ontology_terms) {
    std::unordered_map<std::string, std::uint64_t> counts;
    if (corpus) {
        LineReader reader(*corpus);
        std::string line;
        while (reader.getline(line))
            for (auto& tok : text::tokenize(line)) ++counts[std::move(tok)];
    }
    auto count_of = [&](const std::string& t) {
        auto it = counts.find(t);
        return it == counts.end() ? std::uint64_t{0} : it->second;
    };

    Vocabulary vocab;
    for (const auto& term : ontology_terms)
        for (const auto& tok : text::tokenize(term)) vocab.add(tok, count_of(tok));

    std::vector<std::pair<std::string, std::uint64_t>> rest;
    for (auto& [tok, c] : counts)
        if (c >= min_count && !vocab.find(tok)) rest.emplace_back(tok, c);
    std::sort(rest.begin(), rest.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    for (const auto& [tok, c] : rest) vocab.add(tok, c);
    return vocab;
}

WindowStream::WindowStream(const std::filesystem::path& corpus, const Vocabulary& vocab, int window, Rng* rng,
                           double subsample)
    : reader_(corpus), vocab_(vocab), half_(window / 2), rng_(rng), subsample_(subsample) {
    if (window < 2 || window % 2 != 0) throw std::invalid_argument("window must be even and >= 2");
    if (subsample_ > 0 && rng_ == nullptr) throw std::invalid_argument("subsampling needs a random stream");
}

bool WindowStream::load_sentence() {
    if (!reader_.getline(line_)) return false;
    if (have_sentence_) ++sentence_index_;
    have_sentence_ = true;
    sentence_.clear();
    const double total = static_cast<double>(vocab_.total_count());
    for (const auto& tok : text::tokenize(line_)) {
        auto id = vocab_.find(tok);
        if (id && subsample_ > 0 && total > 0) {
            double f = static_cast<double>(vocab_.count(*id)) / total;
            if (f > 0) {
                double keep = (std::sqrt(f / subsample_) + 1.0) * subsample_ / f;
                if (uniform01(*rng_) >= keep) id.reset();
            }
        }
        sentence_.push_back(id);
    }
    cursor_ = 0;
    return true;
}

bool WindowStream::next(TokenWindow& out) {
    for (;;) {
        while (cursor_ >= sentence_.size())
            if (!load_sentence()) return false;
        const std::size_t t = cursor_++;
        if (!sentence_[t]) continue;
        out.target = *sentence_[t];
        out.context.clear();
        const std::size_t lo = t >= static_cast<std::size_t>(half_) ? t - half_ : 0;
        const std::size_t hi = std::min(sentence_.size() - 1, t + half_);
        for (std::size_t k = lo; k <= hi; ++k)
            if (k != t && sentence_[k]) out.context.push_back(*sentence_[k]);
        if (out.context.empty()) continue;
        out.sentence = sentence_index_;
        out.position = t;
        return true;
    }
}

void WindowStream::rewind() {
    reader_.rewind();
    sentence_.clear();
    cursor_ = 0;
    sentence_index_ = 0;
    have_sentence_ = false;
}

std::size_t count_windows(const std::filesystem::path& corpus, const Vocabulary& vocab, int window) {
    WindowStream stream(corpus, vocab, window);
    TokenWindow w;
    std::size_t n = 0;
    while (stream.next(w)) ++n;
    return n;
}

}  // namespace oe
