#pragma once

#include "hotstream/rational.hpp"
#include "hotstream/stream_op.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hotstream {

/// Construction constants of the bipartite graph between elements (left side,
/// size n) and group counters (right side, size w_size).
struct DisperserParams {
    std::uint64_t n = 1;
    std::uint32_t d = 1;      ///< left degree
    std::uint32_t delta = 1;  ///< entropy loss
    Rational xi{1, 4};        ///< dispersion slack, 0 < xi < 1/2
    Rational gamma{1, 6};     ///< threshold fraction the right side is sized for
    Rational c_w{2};          ///< right-set scale constant, > 1

    std::uint64_t w_size = 0; ///< ceil(c_w * d / (2 xi gamma))
    std::uint64_t ell = 0;    ///< ceil(delta / (2 xi gamma))

    /// Validates the invariants and fills in the derived sizes.
    /// Throws Error(invalid_params).
    static DisperserParams make(std::uint64_t n, std::uint32_t d, std::uint32_t delta, Rational xi,
                                Rational gamma, Rational c_w);

    /// Defaults when only the universe size and gamma are known: xi = 1/4,
    /// c_w = 2, d = max(8, ceil(log2 n)^2) capped at w_size, delta = d.
    static DisperserParams defaults(std::uint64_t n, Rational gamma, std::optional<std::uint32_t> d = {},
                                    std::optional<std::uint32_t> delta = {}, std::optional<Rational> xi = {},
                                    std::optional<Rational> c_w = {});

    friend bool operator==(const DisperserParams&, const DisperserParams&) = default;
};

enum class Construction {
    seeded,   ///< deterministic mixing of (seed, x, j) reduced mod w_size
    complete, ///< every element adjacent to all of W; requires d == w_size
    shared,   ///< every element has the same list 0..d-1; a counterexample fixture
};

std::string to_string(Construction c);
Construction parse_construction(const std::string& s);

/// Left-regular bipartite graph, evaluated on demand. Immutable once built.
class Disperser {
public:
    static Disperser build_seeded(const DisperserParams& params, std::uint64_t seed);
    static Disperser build_complete(const DisperserParams& params);
    static Disperser build_shared(const DisperserParams& params);
    static Disperser build(const DisperserParams& params, Construction construction, std::uint64_t seed);

    const DisperserParams& params() const noexcept { return params_; }
    Construction construction() const noexcept { return construction_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::uint32_t degree() const noexcept { return params_.d; }
    std::uint64_t w_size() const noexcept { return params_.w_size; }

    /// Writes the d right indices of x into out (out.size() must be d).
    void neighbors(ElementId x, std::span<std::uint32_t> out) const;
    std::vector<std::uint32_t> neighbors(ElementId x) const;

    /// One-line description: params + seed + construction tag.
    std::string header() const;
    static Disperser from_header(const std::string& line);

private:
    Disperser(const DisperserParams& params, Construction c, std::uint64_t seed)
        : params_(params), construction_(c), seed_(seed) {}

    DisperserParams params_;
    Construction construction_;
    std::uint64_t seed_;
};

enum class VerifyMode { automatic, exhaustive, sampled };

struct VerifyOptions {
    VerifyMode mode = VerifyMode::automatic;
    std::uint64_t budget = 5'000'000;   ///< max subsets enumerated exhaustively
    std::uint64_t samples = 100'000;    ///< subsets drawn in sampled mode
    std::uint64_t sample_seed = 1;
};

struct DispersionReport {
    bool holds = true;
    bool exhaustive = true;
    std::uint64_t checked = 0;          ///< subsets of size ell examined
    std::uint64_t required = 0;         ///< ceil((1 - xi) * w_size)
    std::uint64_t min_cover = 0;        ///< smallest |Gamma(L)| seen (w_size if none checked)
    std::optional<std::vector<ElementId>> witness;
};

/// Checks |Gamma(L)| >= (1 - xi) w_size for subsets L of size ell. Sets larger
/// than ell need no check: Gamma is monotone under superset.
DispersionReport verify_dispersion(const Disperser& d, const VerifyOptions& opts = {});

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) noexcept;

} // namespace hotstream
