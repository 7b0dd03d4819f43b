#pragma once

#include "hotstream/disperser.hpp"
#include "hotstream/entry_store.hpp"
#include "hotstream/group_counters.hpp"
#include "hotstream/rational.hpp"
#include "hotstream/stream_op.hpp"

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

namespace hotstream {

/// Caller-facing knobs. Everything except n, phi and eps has a default.
struct AgentConfig {
    std::uint64_t n = 1;
    Rational phi{1, 2};
    Rational eps{1, 4};
    std::optional<std::uint32_t> d;
    std::optional<std::uint32_t> delta;
    std::optional<Rational> xi;
    std::optional<Rational> c_w;
    Construction construction = Construction::seeded;
    std::uint64_t seed = 1;
    bool check_integrity = true;
};

/// Validated problem constants.
struct Parameters {
    std::uint64_t n = 1;
    Rational phi;
    Rational eps;
    Rational gamma;       ///< eps / 6
    std::uint64_t tau = 0; ///< ceil(1 / gamma), half-window length
    DisperserParams disperser;

    /// Throws Error(invalid_params) unless 0 < eps < phi < 1 and n >= 1.
    static Parameters from_config(const AgentConfig& cfg);

    std::int64_t ceil_gamma_times(std::int64_t t) const { return gamma.ceil_mul(t); }
    /// floor((phi - eps) * t); c + r exceeds (phi - eps) t iff it exceeds this.
    std::int64_t report_threshold(std::int64_t t) const { return (phi - eps).floor_mul(t); }
    /// ceil(delta / (2 xi gamma)) + ceil(1/gamma) + 1
    std::uint64_t size_bound_after_cleanup() const { return disperser.ell + tau + 1; }
    /// ceil(delta / (2 xi gamma)) + 3 ceil(1/gamma) + 1
    std::uint64_t size_bound_after_catch_up() const { return disperser.ell + 3 * tau + 1; }
};

enum class Phase : std::uint8_t { cleanup = 1, catch_up = 2 };

/// What the last completed step (or flush) finished, if anything.
enum class Boundary : std::uint8_t { none, cleanup_end, window_end, drained };

/// Deterministic online (phi, eps)-hot elements agent.
///
/// Windows of 2 tau operations. During the cleanup half each arrival is queued
/// and recorded as a recent operation while one chunk of the entries frozen at
/// window start is swept with remove_if_small. During the catch-up half each
/// arrival is queued and two queued operations are fully processed, so the
/// queue is empty again when the window closes. query_hot() may be called
/// between any two steps.
class Agent {
public:
    explicit Agent(const AgentConfig& cfg);

    void step(const StreamOperation& op);
    /// Processes every queued operation now and restarts the window cursor.
    void flush();

    std::vector<ElementId> query_hot() const;

    /// Model count of machine words: counters, entries (4 words each), queue,
    /// frozen chunk list and cursor.
    std::uint64_t memory_footprint() const noexcept;

    const Parameters& params() const noexcept { return params_; }
    const Disperser& disperser() const noexcept { return disperser_; }
    const GroupCounterTable& counters() const noexcept { return counters_; }
    const EntryStore& entries() const noexcept { return entries_; }

    std::uint64_t t() const noexcept { return t_; }
    std::uint64_t window_start() const noexcept { return t0_; }
    Phase phase() const noexcept { return phase_; }
    std::uint64_t iteration() const noexcept { return iteration_; }
    std::size_t queue_size() const noexcept { return queue_.size(); }
    std::size_t peak_queue_size() const noexcept { return peak_queue_; }
    Boundary last_boundary() const noexcept { return last_boundary_; }

    /// Test hook for fault injection.
    GroupCounterTable& mutable_counters_for_testing() noexcept { return counters_; }

    static constexpr std::uint64_t kCursorWords = 6;

private:
    void start_window();
    void process_front();
    void process(const StreamOperation& op, std::int64_t t_eff);

    Parameters params_;
    Disperser disperser_;
    GroupCounterTable counters_;
    EntryStore entries_;
    std::deque<StreamOperation> queue_;

    std::uint64_t t_ = 0;
    std::uint64_t t0_ = 0;
    Phase phase_ = Phase::cleanup;
    std::uint64_t iteration_ = 1;
    std::uint64_t processed_in_window_ = 0;
    std::int64_t cleanup_threshold_ = 0;
    std::size_t chunk_size_ = 0;
    std::vector<ElementId> frozen_keys_;

    std::size_t peak_queue_ = 0;
    Boundary last_boundary_ = Boundary::none;
    std::vector<std::uint32_t> scratch_;
};

} // namespace hotstream
