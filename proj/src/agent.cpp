#include "hotstream/agent.hpp"

#include "hotstream/error.hpp"

#include <algorithm>

namespace hotstream {

Parameters Parameters::from_config(const AgentConfig& cfg) {
    if (cfg.n < 1) throw Error(ErrorCode::invalid_params, "n must be >= 1");
    if (!(Rational(0) < cfg.eps && cfg.eps < cfg.phi && cfg.phi < Rational(1)))
        throw Error(ErrorCode::invalid_params, "need 0 < eps < phi < 1, got phi=" + cfg.phi.str() +
                                                   " eps=" + cfg.eps.str());
    Parameters p;
    p.n = cfg.n;
    p.phi = cfg.phi;
    p.eps = cfg.eps;
    p.gamma = cfg.eps / Rational(6);
    p.tau = static_cast<std::uint64_t>((Rational(1) / p.gamma).ceil());
    p.disperser = DisperserParams::defaults(cfg.n, p.gamma, cfg.d, cfg.delta, cfg.xi, cfg.c_w);
    return p;
}

Agent::Agent(const AgentConfig& cfg)
    : params_(Parameters::from_config(cfg)),
      disperser_(Disperser::build(params_.disperser, cfg.construction, cfg.seed)),
      counters_(params_.disperser.w_size),
      scratch_(params_.disperser.d) {
    counters_.set_integrity_checks(cfg.check_integrity);
}

void Agent::start_window() {
    t0_ = t_;
    processed_in_window_ = 0;
    cleanup_threshold_ = params_.ceil_gamma_times(static_cast<std::int64_t>(t0_));
    frozen_keys_ = entries_.keys();
    chunk_size_ = (frozen_keys_.size() + params_.tau - 1) / params_.tau;
}

void Agent::step(const StreamOperation& op) {
    if (op.element >= params_.n)
        throw Error(ErrorCode::out_of_universe,
                    "element " + std::to_string(op.element) + " >= n = " + std::to_string(params_.n));
    if (phase_ == Phase::cleanup && iteration_ == 1) start_window();

    ++t_;
    queue_.push_back(op);
    peak_queue_ = std::max(peak_queue_, queue_.size());
    entries_.apply_recent(op);
    last_boundary_ = Boundary::none;

    if (phase_ == Phase::cleanup) {
        const std::size_t begin = std::min(frozen_keys_.size(), (iteration_ - 1) * chunk_size_);
        const std::size_t end = std::min(frozen_keys_.size(), begin + chunk_size_);
        for (std::size_t k = begin; k < end; ++k) {
            const ElementId key = frozen_keys_[k];
            if (entries_.contains(key))
                entries_.remove_if_small(key, cleanup_threshold_, counters_, disperser_, scratch_);
        }
        if (iteration_ == params_.tau) {
            phase_ = Phase::catch_up;
            iteration_ = 1;
            frozen_keys_.clear();
            frozen_keys_.shrink_to_fit();
            last_boundary_ = Boundary::cleanup_end;
        } else {
            ++iteration_;
        }
        return;
    }

    process_front();
    process_front();
    if (iteration_ == params_.tau) {
        phase_ = Phase::cleanup;
        iteration_ = 1;
        last_boundary_ = Boundary::window_end;
    } else {
        ++iteration_;
    }
}

void Agent::flush() {
    if (queue_.empty() && phase_ == Phase::cleanup && iteration_ == 1) return;
    while (!queue_.empty()) process_front();
    phase_ = Phase::cleanup;
    iteration_ = 1;
    frozen_keys_.clear();
    frozen_keys_.shrink_to_fit();
    last_boundary_ = Boundary::drained;
}

void Agent::process_front() {
    if (queue_.empty()) throw Error(ErrorCode::queue_underflow, "dequeue on empty queue at t=" + std::to_string(t_));
    const StreamOperation op = queue_.front();
    queue_.pop_front();
    process(op, static_cast<std::int64_t>(t0_ + processed_in_window_));
    ++processed_in_window_;
}

void Agent::process(const StreamOperation& op, std::int64_t t_eff) {
    disperser_.neighbors(op.element, scratch_);
    counters_.apply_slots(scratch_, op.kind);
    entries_.rollback_recent(op);
    if (entries_.contains(op.element)) {
        entries_.apply_candidate(op);
        return;
    }
    if (counters_.min_over(scratch_) >= params_.ceil_gamma_times(t_eff)) {
        entries_.add(op.element);
        entries_.apply_candidate(op);
    }
}

std::vector<ElementId> Agent::query_hot() const {
    return entries_.get_larger_than(params_.report_threshold(static_cast<std::int64_t>(t_)));
}

std::uint64_t Agent::memory_footprint() const noexcept {
    return counters_.size() + 4 * entries_.size() + queue_.size() + frozen_keys_.size() + kCursorWords;
}

} // namespace hotstream
