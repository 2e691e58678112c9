#ifndef OE_ERROR_HPP
#define OE_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oe {

// Base of every error thrown by the library. `kind()` is a stable
// machine-parsable tag used by the CLI's single-line error output.
class Error : public std::runtime_error {
   public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

   private:
    std::string kind_;
};

class IoError : public Error {
   public:
    explicit IoError(const std::string& what) : Error("io", what) {}
};

class ParseError : public Error {
   public:
    ParseError(std::size_t line, const std::string& what)
        : Error("parse", "line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

   private:
    std::size_t line_;
};

class EmptyOntology : public Error {
   public:
    explicit EmptyOntology(const std::string& what) : Error("empty_ontology", what) {}
};

class CycleError : public Error {
   public:
    explicit CycleError(const std::string& what) : Error("cycle", what) {}
};

class NegativeSamplingExhausted : public Error {
   public:
    explicit NegativeSamplingExhausted(const std::string& what)
        : Error("negative_sampling_exhausted", what) {}
};

class DimensionMismatch : public Error {
   public:
    DimensionMismatch(std::size_t a, std::size_t b)
        : Error("dimension_mismatch",
                "dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

class ConfigError : public Error {
   public:
    explicit ConfigError(const std::string& what) : Error("config", what) {}
};

class NonFiniteError : public Error {
   public:
    explicit NonFiniteError(const std::string& what) : Error("non_finite", what) {}
};

class FormatError : public Error {
   public:
    explicit FormatError(const std::string& what) : Error("format", what) {}
};

}  // namespace oe

#endif  // OE_ERROR_HPP
