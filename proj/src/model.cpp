#include "oe/model.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "oe/error.hpp"

namespace oe {

std::string_view to_string(ModelKind k) { return k == ModelKind::order ? "order" : "bilinear"; }

std::optional<ModelKind> parse_model_kind(std::string_view s) {
    if (s == "order") return ModelKind::order;
    if (s == "bilinear") return ModelKind::bilinear;
    return std::nullopt;
}

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
T to_little(T v) {
    if constexpr (std::endian::native == std::endian::big) {
        std::array<unsigned char, sizeof(T)> b;
        std::memcpy(b.data(), &v, sizeof(T));
        std::reverse(b.begin(), b.end());
        std::memcpy(&v, b.data(), sizeof(T));
    }
    return v;
}

class Writer {
   public:
    explicit Writer(std::ostream& out) : out_(out) {}
    template <class T>
    void put(T v) {
        v = to_little(v);
        out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
    }
    void bytes(std::string_view s) { out_.write(s.data(), static_cast<std::streamsize>(s.size())); }
    template <class T>
    void array(std::span<const T> xs) {
        if constexpr (std::endian::native == std::endian::little) {
            out_.write(reinterpret_cast<const char*>(xs.data()), static_cast<std::streamsize>(xs.size_bytes()));
        } else {
            for (T x : xs) put(x);
        }
    }

   private:
    std::ostream& out_;
};

class Reader {
   public:
    explicit Reader(std::istream& in) : in_(in) {}
    template <class T>
    T get() {
        T v;
        in_.read(reinterpret_cast<char*>(&v), sizeof(T));
        if (!in_) throw FormatError("truncated model file");
        return to_little(v);
    }
    std::string bytes(std::size_t n) {
        std::string s(n, '\0');
        in_.read(s.data(), static_cast<std::streamsize>(n));
        if (!in_) throw FormatError("truncated model file");
        return s;
    }
    template <class T>
    void array(std::span<T> xs) {
        in_.read(reinterpret_cast<char*>(xs.data()), static_cast<std::streamsize>(xs.size_bytes()));
        if (!in_) throw FormatError("truncated model file");
        if constexpr (std::endian::native == std::endian::big)
            for (T& x : xs) x = to_little(x);
    }

   private:
    std::istream& in_;
};

void write_state(Writer& w, const AdamState& s) {
    w.array<std::uint64_t>(s.row_steps);
    w.array<float>(s.first_moment);
    w.array<float>(s.second_moment);
}

AdamState read_state(Reader& r, std::size_t rows, std::size_t cols) {
    AdamState s(rows, cols);
    r.array<std::uint64_t>(s.row_steps);
    r.array<float>(s.first_moment);
    r.array<float>(s.second_moment);
    return s;
}

}  // namespace

void save_model(const Model& m, std::ostream& out) {
    if (m.table.rows() != m.vocab.size()) throw FormatError("embedding rows do not match vocabulary");
    if ((m.kind == ModelKind::bilinear) != m.bilinear.has_value())
        throw FormatError("bilinear parameters must be present exactly for bilinear models");
    Writer w(out);
    w.bytes("OEMB");
    w.put<std::uint32_t>(kModelVersion);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(m.dim()));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(m.vocab.size()));
    w.put<std::uint8_t>(static_cast<std::uint8_t>(m.kind));
    std::uint8_t flags = (m.bilinear ? 1 : 0) | (m.optimizer ? 2 : 0);
    w.put<std::uint8_t>(flags);
    w.put<std::uint16_t>(0);
    for (std::size_t i = 0; i < m.vocab.size(); ++i) {
        const auto& tok = m.vocab.token(static_cast<TokenId>(i));
        w.put<std::uint32_t>(static_cast<std::uint32_t>(tok.size()));
        w.bytes(tok);
        w.put<std::uint64_t>(m.vocab.count(static_cast<TokenId>(i)));
    }
    w.array<float>(m.table.data());
    if (m.bilinear) w.array<float>(m.bilinear->weights);
    if (m.optimizer) {
        w.bytes("ADAM");
        write_state(w, m.optimizer->table);
        if (m.bilinear) {
            if (!m.optimizer->bilinear) throw FormatError("missing bilinear optimizer state");
            write_state(w, *m.optimizer->bilinear);
        }
    }
    if (!out) throw IoError("model write failed");
}

void save_model(const Model& m, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw IoError("cannot write " + file.string());
    save_model(m, out);
}

Model load_model(std::istream& in) {
    Reader r(in);
    if (r.bytes(4) != "OEMB") throw FormatError("not a model file (bad magic)");
    auto version = r.get<std::uint32_t>();
    if (version != kModelVersion) throw FormatError("unsupported model version " + std::to_string(version));
    auto dim = r.get<std::uint32_t>();
    auto vocab_size = r.get<std::uint32_t>();
    auto kind = r.get<std::uint8_t>();
    auto flags = r.get<std::uint8_t>();
    r.get<std::uint16_t>();
    if (kind > 1) throw FormatError("unknown model kind");
    if (dim == 0) throw FormatError("zero embedding dimension");

    Model m;
    m.kind = static_cast<ModelKind>(kind);
    for (std::uint32_t i = 0; i < vocab_size; ++i) {
        auto len = r.get<std::uint32_t>();
        std::string tok = r.bytes(len);
        auto count = r.get<std::uint64_t>();
        if (m.vocab.add(tok, count) != i) throw FormatError("duplicate vocabulary token '" + tok + "'");
    }
    m.table = EmbeddingTable(vocab_size, dim);
    r.array<float>(m.table.data());
    if (flags & 1) {
        m.bilinear = BilinearParams(dim);
        r.array<float>(m.bilinear->weights);
    }
    if ((m.kind == ModelKind::bilinear) != m.bilinear.has_value())
        throw FormatError("model kind and bilinear block disagree");
    if (flags & 2) {
        if (r.bytes(4) != "ADAM") throw FormatError("missing optimizer section tag");
        OptimizerCheckpoint ck{read_state(r, vocab_size, dim), std::nullopt};
        if (m.bilinear) ck.bilinear = read_state(r, dim, dim);
        m.optimizer = std::move(ck);
    }
    return m;
}

Model load_model(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot open " + file.string());
    return load_model(in);
}

void export_tsv(const Model& m, std::ostream& out) {
    char buf[32];
    for (std::size_t i = 0; i < m.vocab.size(); ++i) {
        out << m.vocab.token(static_cast<TokenId>(i)) << '\t';
        auto row = m.table.row(i);
        for (std::size_t k = 0; k < row.size(); ++k) {
            auto res = std::to_chars(buf, buf + sizeof buf, row[k]);
            if (k) out << ' ';
            out.write(buf, res.ptr - buf);
        }
        out << '\n';
    }
}

}  // namespace oe
