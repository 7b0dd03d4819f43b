#include "hotstream/stream_io.hpp"

#include "hotstream/error.hpp"
#include "hotstream/oracle.hpp"
#include "hotstream/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

namespace hotstream {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

} // namespace

StreamLine parse_stream_line(std::string_view raw) {
    std::string_view line = trim(raw);
    StreamLine out;
    if (line.empty()) return out;
    if (line.front() == '#') {
        out.kind = StreamLine::Kind::comment;
        return out;
    }
    if (line == "Q") {
        out.kind = StreamLine::Kind::query;
        return out;
    }
    if (line.size() >= 3 && (line[0] == 'I' || line[0] == 'D') && (line[1] == ' ' || line[1] == '\t')) {
        std::string_view num = trim(line.substr(2));
        ElementId id = 0;
        auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), id);
        if (!num.empty() && ec == std::errc() && ptr == num.data() + num.size()) {
            out.kind = StreamLine::Kind::op;
            out.op = line[0] == 'I' ? StreamOperation::ins(id) : StreamOperation::del(id);
            return out;
        }
    }
    throw Error(ErrorCode::parse_error, "unrecognized line '" + std::string(line) + "'");
}

std::optional<StreamLine> StreamReader::next() {
    while (std::getline(is_, buf_)) {
        ++line_no_;
        StreamLine l = parse_stream_line(buf_);
        if (l.kind == StreamLine::Kind::op || l.kind == StreamLine::Kind::query) return l;
    }
    return std::nullopt;
}

ValidationResult validate_stream(std::istream& is, std::uint64_t n) {
    ValidationResult res;
    std::unordered_map<ElementId, std::int64_t> live;
    StreamReader reader(is);
    auto fail = [&](std::string msg) {
        res.ok = false;
        res.line = reader.line_number();
        res.message = std::move(msg);
        return res;
    };
    while (true) {
        std::optional<StreamLine> l;
        try {
            l = reader.next();
        } catch (const Error& e) {
            return fail(e.what());
        }
        if (!l) break;
        if (l->kind == StreamLine::Kind::query) {
            ++res.queries;
            continue;
        }
        const StreamOperation& op = l->op;
        if (op.element >= n)
            return fail("id " + std::to_string(op.element) + " outside universe of size " + std::to_string(n));
        std::int64_t& c = live[op.element];
        c += op.sign();
        if (c < 0) return fail("delete of " + std::to_string(op.element) + " exceeds its inserts");
        if (c == 0) live.erase(op.element);
        ++res.operations;
    }
    if (is.bad()) throw Error(ErrorCode::io_error, "read failure");
    return res;
}

ValidationResult validate_stream(const std::filesystem::path& path, std::uint64_t n) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
    return validate_stream(in, n);
}

void write_op(std::ostream& os, const StreamOperation& op) {
    os << (op.kind == OpKind::insert ? "I " : "D ") << op.element << '\n';
}

std::string to_string(GeneratorKind k) {
    switch (k) {
    case GeneratorKind::zipf: return "zipf";
    case GeneratorKind::uniform: return "uniform";
    case GeneratorKind::round_robin: return "round-robin";
    case GeneratorKind::planted_hot: return "planted-hot";
    case GeneratorKind::adversarial_churn: return "adversarial-churn";
    case GeneratorKind::lower_bound: return "lower-bound";
    }
    return "uniform";
}

GeneratorKind parse_generator_kind(const std::string& s) {
    for (auto k : {GeneratorKind::zipf, GeneratorKind::uniform, GeneratorKind::round_robin, GeneratorKind::planted_hot,
                   GeneratorKind::adversarial_churn, GeneratorKind::lower_bound})
        if (to_string(k) == s) return k;
    throw Error(ErrorCode::parse_error, "unknown generator kind '" + s + "'");
}

namespace {

/// Live multiset of ids, with uniform sampling over ids that have a positive count.
class LiveSet {
public:
    void insert(ElementId x) {
        auto [it, fresh] = slot_.try_emplace(x, Slot{0, ids_.size()});
        if (fresh) ids_.push_back(x);
        ++it->second.count;
    }
    void erase_one(ElementId x) {
        auto it = slot_.find(x);
        if (--it->second.count == 0) {
            const std::size_t pos = it->second.pos;
            ids_[pos] = ids_.back();
            slot_[ids_[pos]].pos = pos;
            ids_.pop_back();
            slot_.erase(x);
        }
    }
    bool live(ElementId x) const { return slot_.count(x) != 0; }
    bool empty() const noexcept { return ids_.empty(); }
    ElementId pick(SplitMix64& rng) const { return ids_[rng.below(ids_.size())]; }

private:
    struct Slot {
        std::int64_t count;
        std::size_t pos;
    };
    std::unordered_map<ElementId, Slot> slot_;
    std::vector<ElementId> ids_;
};

class Emitter {
public:
    explicit Emitter(const GeneratorSpec& spec) : spec_(spec) {}

    void op(const StreamOperation& o) {
        if (o.kind == OpKind::insert) {
            live_.insert(o.element);
        } else {
            live_.erase_one(o.element);
        }
        lines_.push_back({StreamLine::Kind::op, o});
        ++ops_;
        if (spec_.query_every != 0 && ops_ % spec_.query_every == 0) query();
    }
    void query() { lines_.push_back({StreamLine::Kind::query, {}}); }

    std::vector<StreamLine> finish() {
        if (spec_.final_query && (lines_.empty() || lines_.back().kind != StreamLine::Kind::query)) query();
        return std::move(lines_);
    }

    LiveSet& live() noexcept { return live_; }
    std::uint64_t ops() const noexcept { return ops_; }

private:
    const GeneratorSpec& spec_;
    LiveSet live_;
    std::vector<StreamLine> lines_;
    std::uint64_t ops_ = 0;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::invalid_params, what);
}

std::vector<ElementId> permutation(std::uint64_t n, SplitMix64& rng) {
    std::vector<ElementId> p(n);
    for (std::uint64_t i = 0; i < n; ++i) p[i] = i;
    for (std::uint64_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
    return p;
}

void gen_uniform(const GeneratorSpec& s, Emitter& e, SplitMix64& rng) {
    while (e.ops() < s.length) {
        if (!e.live().empty() && rng.unit() < s.delete_ratio)
            e.op(StreamOperation::del(e.live().pick(rng)));
        else
            e.op(StreamOperation::ins(rng.below(s.n)));
    }
}

void gen_round_robin(const GeneratorSpec& s, Emitter& e, SplitMix64& rng) {
    std::uint64_t next = 0;
    while (e.ops() < s.length) {
        if (!e.live().empty() && rng.unit() < s.delete_ratio) {
            e.op(StreamOperation::del(e.live().pick(rng)));
        } else {
            e.op(StreamOperation::ins(next));
            next = (next + 1) % s.n;
        }
    }
}

void gen_zipf(const GeneratorSpec& s, Emitter& e, SplitMix64& rng) {
    require(s.zipf_s > 0, "zipf exponent must be > 0");
    std::vector<double> cdf(s.n);
    double acc = 0;
    for (std::uint64_t k = 0; k < s.n; ++k) {
        acc += 1.0 / std::pow(static_cast<double>(k + 1), s.zipf_s);
        cdf[k] = acc;
    }
    const std::vector<ElementId> rank_to_id = permutation(s.n, rng);
    auto draw = [&] {
        const double u = rng.unit() * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), s.n - 1);
        return rank_to_id[k];
    };
    while (e.ops() < s.length) {
        if (!e.live().empty() && rng.unit() < s.delete_ratio) {
            ElementId x = draw();
            e.op(StreamOperation::del(e.live().live(x) ? x : e.live().pick(rng)));
        } else {
            e.op(StreamOperation::ins(draw()));
        }
    }
}

void gen_planted(const GeneratorSpec& s, Emitter& e, SplitMix64& rng) {
    require(s.planted_k >= 1 && s.planted_k <= s.n, "planted k must lie in [1, n]");
    require(s.planted_mass > Rational(0) && s.planted_mass <= Rational(1), "planted mass must lie in (0, 1]");
    const std::int64_t per = s.planted_mass.ceil_mul(static_cast<std::int64_t>(s.length));
    const std::uint64_t planted_ops = static_cast<std::uint64_t>(per) * s.planted_k;
    require(planted_ops <= s.length, "k * ceil(mass * length) exceeds length");
    const std::uint64_t background = s.length - planted_ops;
    require(background == 0 || s.n > s.planted_k, "no ids left for background traffic");

    const std::vector<ElementId> perm = permutation(s.n, rng);
    const std::vector<ElementId> planted(perm.begin(), perm.begin() + s.planted_k);
    const std::unordered_set<ElementId> is_planted(planted.begin(), planted.end());

    // schedule: planted slot index, or k for background
    std::vector<std::uint32_t> slots;
    slots.reserve(s.length);
    for (std::uint32_t k = 0; k < s.planted_k; ++k) slots.insert(slots.end(), static_cast<std::size_t>(per), k);
    slots.insert(slots.end(), background, s.planted_k);
    for (std::size_t i = slots.size(); i > 1; --i) std::swap(slots[i - 1], slots[rng.below(i)]);

    LiveSet background_live;
    for (std::uint32_t slot : slots) {
        if (slot < s.planted_k) {
            e.op(StreamOperation::ins(planted[slot]));
            continue;
        }
        if (!background_live.empty() && rng.unit() < s.delete_ratio) {
            ElementId x = background_live.pick(rng);
            background_live.erase_one(x);
            e.op(StreamOperation::del(x));
        } else {
            ElementId x;
            do x = rng.below(s.n);
            while (is_planted.count(x));
            background_live.insert(x);
            e.op(StreamOperation::ins(x));
        }
    }
}

// Bursts one target id up to a large share of the stream, then deletes it back
// down, rotating targets every period, while short-lived "flash" ids are
// inserted and immediately deleted so many entries carry pending operations
// during cleanup.
void gen_churn(const GeneratorSpec& s, Emitter& e, SplitMix64& rng) {
    const std::uint64_t period = s.churn_period != 0 ? s.churn_period : std::max<std::uint64_t>(8, s.length / 20);
    const std::uint64_t pool = std::min<std::uint64_t>(s.n, 16);
    const std::vector<ElementId> perm = permutation(s.n, rng);
    std::uint64_t pending_flash = s.n; // id awaiting its delete, or n for none

    while (e.ops() < s.length) {
        if (pending_flash != s.n) {
            e.op(StreamOperation::del(pending_flash));
            pending_flash = s.n;
            continue;
        }
        const std::uint64_t round = e.ops() / period;
        const bool rising = (e.ops() % period) < period / 2;
        const ElementId target = perm[round % pool];
        const double r = rng.unit();
        if (r < 0.5) {
            if (rising || !e.live().live(target))
                e.op(StreamOperation::ins(target));
            else
                e.op(StreamOperation::del(target));
        } else if (r < 0.8) {
            if (!rising && !e.live().empty() && rng.unit() < std::max(0.5, s.delete_ratio))
                e.op(StreamOperation::del(e.live().pick(rng)));
            else
                e.op(StreamOperation::ins(perm[pool + rng.below(std::max<std::uint64_t>(1, s.n - pool))  % s.n]));
        } else {
            const ElementId flash = rng.below(s.n);
            e.op(StreamOperation::ins(flash));
            pending_flash = flash;
        }
    }
}

void gen_lower_bound(const GeneratorSpec& s, Emitter& e, SplitMix64& rng) {
    std::vector<ElementId> members = s.members;
    if (members.empty()) {
        const LowerBoundShape shape = lower_bound_shape(s.phi, s.eps);
        require(s.n > static_cast<std::uint64_t>(shape.x), "n must exceed |X|");
        std::unordered_set<ElementId> seen;
        while (members.size() < static_cast<std::size_t>(shape.x)) {
            ElementId v = rng.below(s.n);
            if (seen.insert(v).second) members.push_back(v);
        }
    }
    for (const auto& op : build_lower_bound_stream(s.phi, s.eps, s.n, members, s.probe)) e.op(op);
}

} // namespace

std::vector<StreamLine> generate(const GeneratorSpec& spec) {
    require(spec.n >= 1, "n must be >= 1");
    require(spec.delete_ratio >= 0.0 && spec.delete_ratio <= 1.0, "delete ratio must lie in [0, 1]");
    SplitMix64 rng(spec.seed);
    Emitter e(spec);
    switch (spec.kind) {
    case GeneratorKind::uniform: gen_uniform(spec, e, rng); break;
    case GeneratorKind::round_robin: gen_round_robin(spec, e, rng); break;
    case GeneratorKind::zipf: gen_zipf(spec, e, rng); break;
    case GeneratorKind::planted_hot: gen_planted(spec, e, rng); break;
    case GeneratorKind::adversarial_churn: gen_churn(spec, e, rng); break;
    case GeneratorKind::lower_bound: gen_lower_bound(spec, e, rng); break;
    }
    return e.finish();
}

void write_stream(std::ostream& os, const GeneratorSpec& spec, const std::vector<StreamLine>& lines) {
    os << "# kind=" << to_string(spec.kind) << " n=" << spec.n << " length=" << spec.length << " seed=" << spec.seed
       << '\n';
    for (const StreamLine& l : lines) {
        switch (l.kind) {
        case StreamLine::Kind::op: write_op(os, l.op); break;
        case StreamLine::Kind::query: os << "Q\n"; break;
        default: break;
        }
    }
}

} // namespace hotstream
