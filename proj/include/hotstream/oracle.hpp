#pragma once

#include "hotstream/agent.hpp"
#include "hotstream/rational.hpp"
#include "hotstream/stream_op.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace hotstream {

/// Exact net-occurrence counts: the ground truth every agent answer is judged by.
class ExactOracle {
public:
    /// Throws Error(integrity_violation) if a delete would make a count negative.
    void apply(const StreamOperation& op);

    std::int64_t count(ElementId x) const;
    std::uint64_t t() const noexcept { return t_; }
    std::int64_t total() const noexcept { return total_; }
    std::size_t distinct() const noexcept { return counts_.size(); }

    /// Calls f(id, count) for ids with count >= threshold, largest count first.
    template <typename F>
    void for_each_at_least(std::int64_t threshold, F&& f) const {
        for (const auto& [neg, id] : by_count_) {
            if (-neg < threshold) break;
            f(id, -neg);
        }
    }

private:
    std::unordered_map<ElementId, std::int64_t> counts_;
    std::set<std::pair<std::int64_t, ElementId>> by_count_; // (-count, id), positive counts only
    std::uint64_t t_ = 0;
    std::int64_t total_ = 0;
};

struct HotSets {
    std::vector<ElementId> must_return; ///< f >= phi, ascending
    std::vector<ElementId> may_return;  ///< f > phi - eps, ascending
};

/// Requires t >= 1.
HotSets oracle_hot(const ExactOracle& o, const Rational& phi, const Rational& eps);

/// must_return subset of answer subset of may_return, and no duplicates.
bool answer_is_correct(const HotSets& sets, const std::vector<ElementId>& answer);

struct Violation {
    std::uint64_t step = 0;
    std::string check; ///< printed as lemma=<id>
    std::string detail;

    /// "step=<t> lemma=<id> detail=<text>"
    std::string str() const;
};

/// Every correctness invariant, evaluated on the current state.
/// Checks that only hold at certain moments (size bounds after each half
/// window, queue empty at window end, the counter Markov bound when the queue
/// is empty) are gated on the agent's cursor.
std::vector<Violation> check_step(const Agent& agent, const ExactOracle& oracle);

/// Whether the counter Markov bound count_below(gamma t) >= 2 xi w_size is
/// implied by the parameters, i.e. 2 xi (1 + 1/c_w) <= 1.
bool markov_bound_applies(const DisperserParams& p);

struct LowerBoundShape {
    std::int64_t x = 0;     ///< floor((1 - phi + eps) / eps), |X|
    std::int64_t alpha = 0; ///< ceil(1 / (phi - eps)) - 1
};

/// Throws alpha_too_small if alpha < 1 and non_integral_alpha unless
/// 1 / (phi - eps) is an integer.
LowerBoundShape lower_bound_shape(const Rational& phi, const Rational& eps);

/// alpha inserts of each member of X in order, then x inserts of probe.
std::vector<StreamOperation> build_lower_bound_stream(const Rational& phi, const Rational& eps, std::uint64_t n,
                                                      const std::vector<ElementId>& members, ElementId probe);

struct HarnessReport {
    std::uint64_t trials = 0;
    std::uint64_t correct = 0;
    std::uint64_t probes_in_set = 0;
    std::int64_t x = 0;
    std::int64_t alpha = 0;
    std::uint64_t w_size = 0;
    std::uint64_t size_cap = 0;        ///< size bound after catch-up
    std::uint64_t min_footprint = 0;
    std::uint64_t max_footprint = 0;
    double footprint_over_inv_eps = 0; ///< max_footprint * eps
    std::vector<std::string> failures;
};

/// Runs the agent on random lower-bound instances and checks that the probe
/// is reported exactly when it belongs to X.
HarnessReport distinguishability_harness(const Rational& phi, const Rational& eps, std::uint64_t n,
                                         std::uint64_t trials, std::uint64_t seed);

} // namespace hotstream
