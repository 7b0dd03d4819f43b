#include "hotstream/disperser.hpp"

#include "hotstream/error.hpp"
#include "hotstream/kernels.hpp"
#include "hotstream/random.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_set>

namespace hotstream {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kStep = 0xD1B54A32D192ED03ULL;
constexpr std::uint64_t kMaxWSize = std::uint64_t{1} << 31;

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::invalid_params, what);
}

std::uint64_t to_u64(std::int64_t v, const char* what) {
    require(v >= 0, std::string(what) + " must be non-negative");
    return static_cast<std::uint64_t>(v);
}

std::uint32_t ceil_log2(std::uint64_t n) {
    return n <= 1 ? 0u : static_cast<std::uint32_t>(std::bit_width(n - 1));
}

} // namespace

DisperserParams DisperserParams::make(std::uint64_t n, std::uint32_t d, std::uint32_t delta, Rational xi,
                                      Rational gamma, Rational c_w) {
    require(n >= 1, "n must be >= 1");
    require(d >= 1, "d must be >= 1");
    require(delta >= 1, "delta must be >= 1");
    require(xi > Rational(0) && xi < Rational(1, 2), "xi must lie in (0, 1/2)");
    require(c_w > Rational(1), "c_w must be > 1");
    require(gamma > Rational(0), "gamma must be > 0");

    DisperserParams p;
    p.n = n;
    p.d = d;
    p.delta = delta;
    p.xi = xi;
    p.gamma = gamma;
    p.c_w = c_w;
    const Rational two_xi_gamma = Rational(2) * xi * gamma;
    p.w_size = to_u64((c_w * Rational(d) / two_xi_gamma).ceil(), "w_size");
    p.ell = to_u64((Rational(delta) / two_xi_gamma).ceil(), "ell");
    require(p.w_size <= kMaxWSize, "w_size " + std::to_string(p.w_size) + " exceeds 2^31");
    require(Rational(static_cast<std::int64_t>(p.w_size)) >= Rational(d) / two_xi_gamma,
            "w_size must be at least d / (2 xi gamma)");
    return p;
}

DisperserParams DisperserParams::defaults(std::uint64_t n, Rational gamma, std::optional<std::uint32_t> d,
                                          std::optional<std::uint32_t> delta, std::optional<Rational> xi,
                                          std::optional<Rational> c_w) {
    const Rational x = xi.value_or(Rational(1, 4));
    const Rational cw = c_w.value_or(Rational(2));
    std::uint32_t degree = d.value_or(std::max<std::uint32_t>(8, ceil_log2(n) * ceil_log2(n)));
    DisperserParams p = make(n, degree, delta.value_or(degree), x, gamma, cw);
    if (!d && p.w_size < degree) {
        degree = static_cast<std::uint32_t>(std::max<std::uint64_t>(1, p.w_size));
        p = make(n, degree, delta.value_or(degree), x, gamma, cw);
    }
    return p;
}

std::string to_string(Construction c) {
    switch (c) {
    case Construction::seeded: return "seeded";
    case Construction::complete: return "complete";
    case Construction::shared: return "shared";
    }
    return "seeded";
}

Construction parse_construction(const std::string& s) {
    if (s == "seeded") return Construction::seeded;
    if (s == "complete") return Construction::complete;
    if (s == "shared") return Construction::shared;
    throw Error(ErrorCode::parse_error, "unknown construction '" + s + "'");
}

Disperser Disperser::build_seeded(const DisperserParams& params, std::uint64_t seed) {
    (void)DisperserParams::make(params.n, params.d, params.delta, params.xi, params.gamma, params.c_w);
    return Disperser(params, Construction::seeded, seed);
}

Disperser Disperser::build_complete(const DisperserParams& params) {
    (void)DisperserParams::make(params.n, params.d, params.delta, params.xi, params.gamma, params.c_w);
    require(params.d == params.w_size, "complete construction needs d == w_size");
    return Disperser(params, Construction::complete, 0);
}

Disperser Disperser::build_shared(const DisperserParams& params) {
    (void)DisperserParams::make(params.n, params.d, params.delta, params.xi, params.gamma, params.c_w);
    return Disperser(params, Construction::shared, 0);
}

Disperser Disperser::build(const DisperserParams& params, Construction construction, std::uint64_t seed) {
    switch (construction) {
    case Construction::seeded: return build_seeded(params, seed);
    case Construction::complete: return build_complete(params);
    case Construction::shared: return build_shared(params);
    }
    return build_seeded(params, seed);
}

void Disperser::neighbors(ElementId x, std::span<std::uint32_t> out) const {
    if (x >= params_.n)
        throw Error(ErrorCode::out_of_universe,
                    "element " + std::to_string(x) + " >= n = " + std::to_string(params_.n));
    const std::uint64_t w = params_.w_size;
    const std::uint32_t d = params_.d;
    switch (construction_) {
    case Construction::seeded: {
        const std::uint64_t h = mix64(seed_ + kGolden * (x + 1));
        for (std::uint32_t j = 0; j < d; ++j)
            out[j] = static_cast<std::uint32_t>(mix64(h + kStep * (std::uint64_t{j} + 1)) % w);
        break;
    }
    case Construction::complete:
    case Construction::shared:
        for (std::uint32_t j = 0; j < d; ++j) out[j] = static_cast<std::uint32_t>(j % w);
        break;
    }
}

std::vector<std::uint32_t> Disperser::neighbors(ElementId x) const {
    std::vector<std::uint32_t> out(params_.d);
    neighbors(x, out);
    return out;
}

std::string Disperser::header() const {
    std::ostringstream os;
    os << "disperser construction=" << to_string(construction_) << " n=" << params_.n << " d=" << params_.d
       << " delta=" << params_.delta << " xi=" << params_.xi << " gamma=" << params_.gamma
       << " cw=" << params_.c_w << " seed=" << seed_ << " w=" << params_.w_size << " ell=" << params_.ell;
    return os.str();
}

Disperser Disperser::from_header(const std::string& line) {
    std::istringstream is(line);
    std::string tag;
    is >> tag;
    if (tag != "disperser") throw Error(ErrorCode::parse_error, "not a disperser header: '" + line + "'");
    std::map<std::string, std::string> kv;
    for (std::string tok; is >> tok;) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::parse_error, "bad header token '" + tok + "'");
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    auto get = [&](const char* key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw Error(ErrorCode::parse_error, std::string("header missing '") + key + "'");
        return it->second;
    };
    auto get_u64 = [&](const char* key) {
        try {
            return static_cast<std::uint64_t>(std::stoull(get(key)));
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::parse_error, std::string("bad integer for '") + key + "'");
        }
    };
    auto p = DisperserParams::make(get_u64("n"), static_cast<std::uint32_t>(get_u64("d")),
                                   static_cast<std::uint32_t>(get_u64("delta")), Rational::parse(get("xi")),
                                   Rational::parse(get("gamma")), Rational::parse(get("cw")));
    if (kv.count("w") && get_u64("w") != p.w_size)
        throw Error(ErrorCode::parse_error, "header w disagrees with params");
    if (kv.count("ell") && get_u64("ell") != p.ell)
        throw Error(ErrorCode::parse_error, "header ell disagrees with params");
    return build(p, parse_construction(get("construction")), get_u64("seed"));
}

std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) noexcept {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(r);
}

namespace {

class MaskSource {
public:
    explicit MaskSource(const Disperser& d)
        : disperser_(d), words_((d.w_size() + 63) / 64), scratch_(d.degree()) {
        if (d.params().n * words_ <= (std::uint64_t{1} << 22)) {
            cache_.assign(d.params().n * words_, 0);
            for (ElementId x = 0; x < d.params().n; ++x) fill(x, std::span(cache_).subspan(x * words_, words_));
            cached_ = true;
        }
        tmp_.assign(words_, 0);
    }

    std::size_t words() const noexcept { return words_; }

    std::span<const std::uint64_t> mask(ElementId x) {
        if (cached_) return std::span<const std::uint64_t>(cache_).subspan(x * words_, words_);
        std::fill(tmp_.begin(), tmp_.end(), 0);
        fill(x, tmp_);
        return tmp_;
    }

private:
    void fill(ElementId x, std::span<std::uint64_t> out) {
        disperser_.neighbors(x, scratch_);
        for (std::uint32_t r : scratch_) out[r / 64] |= std::uint64_t{1} << (r % 64);
    }

    const Disperser& disperser_;
    std::size_t words_;
    std::vector<std::uint32_t> scratch_;
    std::vector<std::uint64_t> cache_;
    std::vector<std::uint64_t> tmp_;
    bool cached_ = false;
};

} // namespace

DispersionReport verify_dispersion(const Disperser& disp, const VerifyOptions& opts) {
    const DisperserParams& p = disp.params();
    DispersionReport report;
    report.required = static_cast<std::uint64_t>(
        ((Rational(1) - p.xi) * Rational(static_cast<std::int64_t>(p.w_size))).ceil());
    report.min_cover = p.w_size;

    const std::uint64_t total = binomial_saturating(p.n, p.ell);
    bool exhaustive = false;
    switch (opts.mode) {
    case VerifyMode::automatic: exhaustive = total <= opts.budget; break;
    case VerifyMode::exhaustive:
        if (total > opts.budget)
            throw Error(ErrorCode::budget_exceeded, "C(" + std::to_string(p.n) + ", " + std::to_string(p.ell) +
                                                        ") subsets exceed budget " + std::to_string(opts.budget));
        exhaustive = true;
        break;
    case VerifyMode::sampled: exhaustive = false; break;
    }
    report.exhaustive = exhaustive;
    if (p.ell > p.n) return report; // no subset of that size: vacuous

    const auto& k = kernels::active();
    MaskSource masks(disp);
    const std::size_t words = masks.words();
    const std::size_t ell = p.ell;
    // acc[level] = union of the first `level` chosen masks.
    std::vector<std::vector<std::uint64_t>> acc(ell + 1, std::vector<std::uint64_t>(words, 0));
    std::vector<ElementId> pick(ell);

    auto record = [&](std::size_t cover) {
        ++report.checked;
        report.min_cover = std::min<std::uint64_t>(report.min_cover, cover);
        if (cover < report.required && !report.witness) {
            report.holds = false;
            std::vector<ElementId> w(pick.begin(), pick.end());
            std::sort(w.begin(), w.end());
            report.witness = std::move(w);
        }
    };

    if (exhaustive) {
        for (std::size_t i = 0; i < ell; ++i) pick[i] = i;
        std::size_t dirty = 0; // first level whose accumulator is stale
        while (true) {
            std::size_t cover = 0;
            for (std::size_t lvl = dirty; lvl < ell; ++lvl)
                cover = k.or_popcount(acc[lvl + 1], acc[lvl], masks.mask(pick[lvl]));
            record(cover);
            if (!report.holds) break;
            // next combination in lexicographic order
            std::size_t i = ell;
            while (i > 0 && pick[i - 1] == p.n - ell + (i - 1)) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < ell; ++j) pick[j] = pick[j - 1] + 1;
            dirty = i - 1;
        }
        return report;
    }

    SplitMix64 rng(opts.sample_seed);
    std::unordered_set<ElementId> chosen;
    for (std::uint64_t s = 0; s < opts.samples; ++s) {
        // Floyd's algorithm: ell distinct values from [0, n)
        chosen.clear();
        for (std::uint64_t j = p.n - ell; j < p.n; ++j) {
            ElementId t = rng.below(j + 1);
            if (!chosen.insert(t).second) chosen.insert(j);
        }
        std::copy(chosen.begin(), chosen.end(), pick.begin());
        std::sort(pick.begin(), pick.end());
        std::size_t cover = 0;
        for (std::size_t lvl = 0; lvl < ell; ++lvl)
            cover = k.or_popcount(acc[lvl + 1], acc[lvl], masks.mask(pick[lvl]));
        record(cover);
        if (!report.holds) break;
    }
    return report;
}

} // namespace hotstream
