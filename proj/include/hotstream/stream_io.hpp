#pragma once

#include "hotstream/rational.hpp"
#include "hotstream/stream_op.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hotstream {

/// One line of a stream file: "I <id>", "D <id>", "Q", "# comment" (or blank).
struct StreamLine {
    enum class Kind { op, query, comment, blank } kind = Kind::blank;
    StreamOperation op;
};

/// Throws Error(parse_error) on anything else.
StreamLine parse_stream_line(std::string_view line);

/// Sequential reader with 1-based line numbers.
class StreamReader {
public:
    explicit StreamReader(std::istream& is) : is_(is) {}

    /// Next non-blank, non-comment line; nullopt at end of input.
    std::optional<StreamLine> next();
    std::uint64_t line_number() const noexcept { return line_no_; }

private:
    std::istream& is_;
    std::string buf_;
    std::uint64_t line_no_ = 0;
};

struct ValidationResult {
    bool ok = true;
    std::uint64_t line = 0; ///< first violating line, 0 when ok
    std::string message;
    std::uint64_t operations = 0;
    std::uint64_t queries = 0;
};

/// Single pass: syntax, ids < n, and per-prefix deletes <= inserts.
ValidationResult validate_stream(std::istream& is, std::uint64_t n);
ValidationResult validate_stream(const std::filesystem::path& path, std::uint64_t n);

void write_op(std::ostream& os, const StreamOperation& op);

enum class GeneratorKind { zipf, uniform, round_robin, planted_hot, adversarial_churn, lower_bound };

std::string to_string(GeneratorKind k);
GeneratorKind parse_generator_kind(const std::string& s);

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::uniform;
    std::uint64_t length = 0;
    std::uint64_t n = 1;
    std::uint64_t seed = 1;
    double delete_ratio = 0.0;      ///< chance an op is a delete, when something is live
    double zipf_s = 1.1;            ///< zipf exponent
    std::uint32_t planted_k = 1;    ///< planted-hot: number of planted ids
    Rational planted_mass{1, 2};    ///< planted-hot: final frequency floor of each planted id
    std::uint64_t churn_period = 0; ///< adversarial-churn: burst period, 0 = derived from length
    std::uint64_t query_every = 0;  ///< emit "Q" after every k ops; 0 = none
    bool final_query = false;       ///< emit one "Q" at the end
    // lower-bound
    Rational phi{1, 2};
    Rational eps{1, 4};
    std::vector<ElementId> members;
    ElementId probe = 0;
};

/// Deterministic for a given spec. Throws Error(invalid_params) on a bad spec.
std::vector<StreamLine> generate(const GeneratorSpec& spec);
void write_stream(std::ostream& os, const GeneratorSpec& spec, const std::vector<StreamLine>& lines);

} // namespace hotstream
