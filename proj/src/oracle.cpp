#include "hotstream/oracle.hpp"

#include "hotstream/error.hpp"
#include "hotstream/random.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace hotstream {

void ExactOracle::apply(const StreamOperation& op) {
    auto it = counts_.find(op.element);
    const std::int64_t before = it == counts_.end() ? 0 : it->second;
    const std::int64_t after = before + op.sign();
    if (after < 0)
        throw Error(ErrorCode::integrity_violation,
                    "delete of " + std::to_string(op.element) + " with no live occurrence at t=" +
                        std::to_string(t_ + 1));
    ++t_;
    total_ += op.sign();
    if (before > 0) by_count_.erase({-before, op.element});
    if (after > 0) {
        by_count_.insert({-after, op.element});
        counts_[op.element] = after;
    } else {
        counts_.erase(op.element);
    }
}

std::int64_t ExactOracle::count(ElementId x) const {
    auto it = counts_.find(x);
    return it == counts_.end() ? 0 : it->second;
}

HotSets oracle_hot(const ExactOracle& o, const Rational& phi, const Rational& eps) {
    if (o.t() == 0) throw Error(ErrorCode::invalid_params, "oracle_hot needs t >= 1");
    const auto t = static_cast<std::int64_t>(o.t());
    HotSets sets;
    // f >= phi  <=>  n >= ceil(phi t);  f > phi - eps  <=>  n > floor((phi - eps) t)
    const std::int64_t must_at = std::max<std::int64_t>(1, phi.ceil_mul(t));
    const std::int64_t may_above = (phi - eps).floor_mul(t);
    o.for_each_at_least(std::max<std::int64_t>(1, may_above + 1), [&](ElementId id, std::int64_t c) {
        sets.may_return.push_back(id);
        if (c >= must_at) sets.must_return.push_back(id);
    });
    std::sort(sets.must_return.begin(), sets.must_return.end());
    std::sort(sets.may_return.begin(), sets.may_return.end());
    return sets;
}

bool answer_is_correct(const HotSets& sets, const std::vector<ElementId>& answer) {
    std::vector<ElementId> a = answer;
    std::sort(a.begin(), a.end());
    if (std::adjacent_find(a.begin(), a.end()) != a.end()) return false;
    return std::includes(a.begin(), a.end(), sets.must_return.begin(), sets.must_return.end()) &&
           std::includes(sets.may_return.begin(), sets.may_return.end(), a.begin(), a.end());
}

std::string Violation::str() const {
    return "step=" + std::to_string(step) + " lemma=" + check + " detail=" + detail;
}

bool markov_bound_applies(const DisperserParams& p) {
    return Rational(2) * p.xi * (Rational(1) + Rational(1) / p.c_w) <= Rational(1);
}

std::vector<Violation> check_step(const Agent& agent, const ExactOracle& oracle) {
    std::vector<Violation> out;
    const std::uint64_t t = agent.t();
    const Parameters& p = agent.params();
    auto report = [&](const char* check, std::string detail) { out.push_back({t, check, std::move(detail)}); };

    if (oracle.t() != t)
        report("sync", "agent saw " + std::to_string(t) + " ops, oracle " + std::to_string(oracle.t()));

    const std::int64_t slack = p.ceil_gamma_times(static_cast<std::int64_t>(t));
    const EntryStore& entries = agent.entries();

    // Every element at or above ceil(gamma t) has an entry.
    oracle.for_each_at_least(std::max<std::int64_t>(1, slack), [&](ElementId id, std::int64_t c) {
        if (!entries.contains(id))
            report("membership", "x=" + std::to_string(id) + " n=" + std::to_string(c) + " threshold=" +
                                     std::to_string(slack) + " has no entry");
    });

    // n - ceil(gamma t) <= c + r <= n for every entry.
    entries.for_each([&](ElementId id, const EntryCounters& e) {
        const std::int64_t n = oracle.count(id);
        const std::int64_t total = e.total();
        if (total > n || total < n - slack)
            report("sandwich", "x=" + std::to_string(id) + " c+r=" + std::to_string(total) + " n=" +
                                   std::to_string(n) + " slack=" + std::to_string(slack));
    });

    const std::size_t q = agent.queue_size();
    if (q > p.tau + 1 || agent.peak_queue_size() > p.tau + 1)
        report("queue-bound", "queue=" + std::to_string(q) + " peak=" + std::to_string(agent.peak_queue_size()) +
                                  " tau+1=" + std::to_string(p.tau + 1));
    if (agent.last_boundary() == Boundary::window_end && q != 0)
        report("queue-bound", "queue=" + std::to_string(q) + " at window end");
    if (entries.total_lambda() != static_cast<std::int64_t>(q))
        report("recent-accounting", "sum lambda=" + std::to_string(entries.total_lambda()) +
                                        " queue=" + std::to_string(q));

    if (agent.last_boundary() == Boundary::cleanup_end && entries.size() > p.size_bound_after_cleanup())
        report("size-after-cleanup", "size=" + std::to_string(entries.size()) +
                                         " bound=" + std::to_string(p.size_bound_after_cleanup()));
    if (agent.last_boundary() == Boundary::window_end && entries.size() > p.size_bound_after_catch_up())
        report("size-after-catch-up", "size=" + std::to_string(entries.size()) +
                                          " bound=" + std::to_string(p.size_bound_after_catch_up()));

    if (q == 0 && t >= p.tau && markov_bound_applies(p.disperser)) {
        const std::size_t below = agent.counters().count_below(slack);
        const Rational need = Rational(2) * p.disperser.xi * Rational(static_cast<std::int64_t>(p.disperser.w_size));
        if (Rational(static_cast<std::int64_t>(below)) < need)
            report("counter-markov", "count_below(" + std::to_string(slack) + ")=" + std::to_string(below) +
                                         " < 2 xi w = " + need.str());
    }

    if (auto err = entries.consistency_error(); !err.empty()) report("store-consistency", err);
    return out;
}

LowerBoundShape lower_bound_shape(const Rational& phi, const Rational& eps) {
    if (!(Rational(0) < eps && eps < phi && phi < Rational(1)))
        throw Error(ErrorCode::invalid_params, "need 0 < eps < phi < 1");
    const Rational inv_gap = Rational(1) / (phi - eps);
    LowerBoundShape s;
    s.alpha = inv_gap.ceil() - 1;
    s.x = ((Rational(1) - phi + eps) / eps).floor();
    if (s.alpha < 1) throw Error(ErrorCode::alpha_too_small, "alpha = " + std::to_string(s.alpha));
    if (!inv_gap.is_integer())
        throw Error(ErrorCode::non_integral_alpha, "1/(phi - eps) = " + inv_gap.str() + " is not an integer");
    return s;
}

std::vector<StreamOperation> build_lower_bound_stream(const Rational& phi, const Rational& eps, std::uint64_t n,
                                                      const std::vector<ElementId>& members, ElementId probe) {
    const LowerBoundShape s = lower_bound_shape(phi, eps);
    if (static_cast<std::int64_t>(members.size()) != s.x)
        throw Error(ErrorCode::bad_cardinality,
                    "|X| = " + std::to_string(members.size()) + ", expected " + std::to_string(s.x));
    std::unordered_set<ElementId> uniq(members.begin(), members.end());
    if (uniq.size() != members.size()) throw Error(ErrorCode::bad_cardinality, "X has repeated elements");
    for (ElementId m : members)
        if (m >= n) throw Error(ErrorCode::out_of_universe, "member " + std::to_string(m) + " >= n");
    if (probe >= n) throw Error(ErrorCode::out_of_universe, "probe " + std::to_string(probe) + " >= n");

    std::vector<StreamOperation> ops;
    ops.reserve(static_cast<std::size_t>((s.alpha + 1) * s.x));
    for (ElementId m : members)
        for (std::int64_t k = 0; k < s.alpha; ++k) ops.push_back(StreamOperation::ins(m));
    for (std::int64_t k = 0; k < s.x; ++k) ops.push_back(StreamOperation::ins(probe));
    return ops;
}

HarnessReport distinguishability_harness(const Rational& phi, const Rational& eps, std::uint64_t n,
                                         std::uint64_t trials, std::uint64_t seed) {
    const LowerBoundShape s = lower_bound_shape(phi, eps);
    if (n <= static_cast<std::uint64_t>(s.x))
        throw Error(ErrorCode::invalid_params, "n must exceed |X| = " + std::to_string(s.x));

    HarnessReport rep;
    rep.x = s.x;
    rep.alpha = s.alpha;
    SplitMix64 rng(seed);
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        std::vector<ElementId> members;
        std::unordered_set<ElementId> in_x;
        while (members.size() < static_cast<std::size_t>(s.x)) {
            ElementId v = rng.below(n);
            if (in_x.insert(v).second) members.push_back(v);
        }
        const bool want_member = (rng.next() & 1) != 0;
        ElementId probe = 0;
        if (want_member) {
            probe = members[rng.below(members.size())];
        } else {
            do probe = rng.below(n);
            while (in_x.count(probe));
        }

        AgentConfig cfg;
        cfg.n = n;
        cfg.phi = phi;
        cfg.eps = eps;
        cfg.seed = seed + trial;
        Agent agent(cfg);
        for (const auto& op : build_lower_bound_stream(phi, eps, n, members, probe)) agent.step(op);
        const auto answer = agent.query_hot();
        const bool reported = std::find(answer.begin(), answer.end(), probe) != answer.end();

        ++rep.trials;
        rep.probes_in_set += want_member ? 1 : 0;
        if (reported == want_member) {
            ++rep.correct;
        } else {
            rep.failures.push_back("trial=" + std::to_string(trial) + " probe=" + std::to_string(probe) +
                                   (want_member ? " in X but not reported" : " not in X but reported"));
        }
        const std::uint64_t fp = agent.memory_footprint();
        rep.min_footprint = trial == 0 ? fp : std::min(rep.min_footprint, fp);
        rep.max_footprint = std::max(rep.max_footprint, fp);
        rep.w_size = agent.params().disperser.w_size;
        rep.size_cap = agent.params().size_bound_after_catch_up();
    }
    rep.footprint_over_inv_eps = static_cast<double>(rep.max_footprint) * eps.to_double();
    return rep;
}

} // namespace hotstream
