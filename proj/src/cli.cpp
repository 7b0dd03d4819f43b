#include "hotstream/cli.hpp"

#include "hotstream/agent.hpp"
#include "hotstream/disperser.hpp"
#include "hotstream/error.hpp"
#include "hotstream/kernels.hpp"
#include "hotstream/oracle.hpp"
#include "hotstream/stream_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

namespace hotstream {

namespace {

struct AgentFlags {
    std::string phi = "1/4";
    std::string eps = "1/8";
    std::uint64_t n = 0;
    std::uint64_t seed = 1;
    std::optional<std::uint32_t> d;
    std::optional<std::uint32_t> delta;
    std::optional<std::string> xi;
    std::optional<std::string> c_w;
    std::string construction = "seeded";

    void attach(CLI::App* app) {
        app->add_option("--phi", phi, "hot threshold as p/q")->capture_default_str();
        app->add_option("--eps", eps, "approximation slack as p/q")->capture_default_str();
        app->add_option("--n", n, "universe size")->required();
        app->add_option("--seed", seed, "disperser seed")->capture_default_str();
        app->add_option("--d", d, "left degree");
        app->add_option("--delta", delta, "entropy loss");
        app->add_option("--xi", xi, "dispersion slack as p/q");
        app->add_option("--cw", c_w, "right-set scale constant as p/q");
        app->add_option("--construction", construction, "seeded | complete | shared")->capture_default_str();
    }

    AgentConfig config() const {
        AgentConfig cfg;
        cfg.n = n;
        cfg.phi = Rational::parse(phi);
        cfg.eps = Rational::parse(eps);
        cfg.d = d;
        cfg.delta = delta;
        if (xi) cfg.xi = Rational::parse(*xi);
        if (c_w) cfg.c_w = Rational::parse(*c_w);
        cfg.construction = parse_construction(construction);
        cfg.seed = seed;
        return cfg;
    }
};

int exit_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::io_error: return exit_io;
    case ErrorCode::integrity_violation:
    case ErrorCode::out_of_universe:
    case ErrorCode::lambda_underflow:
    case ErrorCode::missing_entry:
    case ErrorCode::duplicate_key:
    case ErrorCode::queue_underflow: return exit_integrity;
    default: return exit_params;
    }
}

/// Input stream for a path, or stdin for "-".
class Input {
public:
    explicit Input(const std::string& path) {
        if (path == "-") return;
        file_ = std::make_unique<std::ifstream>(path);
        if (!*file_) throw Error(ErrorCode::io_error, "cannot open " + path);
    }
    std::istream& get() { return file_ ? *file_ : std::cin; }

private:
    std::unique_ptr<std::ifstream> file_;
};

void print_list(std::ostream& os, const std::vector<ElementId>& ids) {
    for (std::size_t i = 0; i < ids.size(); ++i) os << (i ? "," : "") << ids[i];
}

struct RunFlags {
    std::string input;
    bool verify = false;
    bool stats = false;
    bool dump_entries = false;
    std::string checkpoint;
};

int cmd_run(const AgentFlags& af, const RunFlags& rf, std::ostream& out, std::ostream& err) {
    const AgentConfig cfg = af.config();
    Agent agent(cfg);
    std::optional<ExactOracle> oracle;
    if (rf.verify) oracle.emplace();
    const std::size_t max_answer = static_cast<std::size_t>((Rational(1) / (cfg.phi - cfg.eps)).floor());

    auto verify_state = [&]() -> bool {
        const auto violations = check_step(agent, *oracle);
        for (const auto& v : violations) err << "violation " << v.str() << '\n';
        return violations.empty();
    };

    Input in(rf.input);
    StreamReader reader(in.get());
    while (auto line = reader.next()) {
        if (line->kind == StreamLine::Kind::query) {
            const auto answer = agent.query_hot();
            out << "t=" << agent.t() << " hot=";
            print_list(out, answer);
            if (rf.stats) out << " footprint=" << agent.memory_footprint() << " queue=" << agent.queue_size();
            out << '\n';
            if (rf.verify && agent.t() > 0) {
                const HotSets sets = oracle_hot(*oracle, cfg.phi, cfg.eps);
                if (!answer_is_correct(sets, answer) || answer.size() > max_answer) {
                    err << "violation " << Violation{agent.t(), "query", "answer outside must/may bounds"}.str()
                        << '\n';
                    return exit_invariant;
                }
            }
            continue;
        }
        if (line->op.element >= cfg.n)
            throw Error(ErrorCode::out_of_universe, "line " + std::to_string(reader.line_number()) + ": id " +
                                                        std::to_string(line->op.element) + " >= n");
        if (oracle) {
            try {
                oracle->apply(line->op);
            } catch (const Error& e) {
                throw Error(e.code(), "line " + std::to_string(reader.line_number()) + ": " + e.what());
            }
        }
        agent.step(line->op);
        if (rf.verify && !verify_state()) return exit_invariant;
    }
    agent.flush();
    if (rf.verify && !verify_state()) return exit_invariant;

    if (rf.dump_entries) agent.entries().dump(out);
    if (!rf.checkpoint.empty()) {
        std::ofstream ck(rf.checkpoint, std::ios::binary);
        if (!ck) throw Error(ErrorCode::io_error, "cannot write " + rf.checkpoint);
        ck << agent.disperser().header() << '\n';
        agent.counters().write_snapshot(ck);
        if (!ck) throw Error(ErrorCode::io_error, "write failed for " + rf.checkpoint);
    }
    return exit_ok;
}

int cmd_bench(const AgentFlags& af, const std::string& input, std::ostream& out) {
    Agent agent(af.config());
    std::vector<StreamOperation> ops;
    {
        Input in(input);
        StreamReader reader(in.get());
        while (auto line = reader.next())
            if (line->kind == StreamLine::Kind::op) ops.push_back(line->op);
    }
    using clock = std::chrono::steady_clock;
    std::vector<std::int64_t> latency;
    latency.reserve(ops.size());
    std::uint64_t peak_footprint = agent.memory_footprint();
    const auto start = clock::now();
    for (const auto& op : ops) {
        const auto a = clock::now();
        agent.step(op);
        const auto b = clock::now();
        latency.push_back(std::chrono::duration_cast<std::chrono::nanoseconds>(b - a).count());
        peak_footprint = std::max(peak_footprint, agent.memory_footprint());
    }
    const double seconds = std::chrono::duration<double>(clock::now() - start).count();
    auto pct = [&](double q) -> std::int64_t {
        if (latency.empty()) return 0;
        const std::size_t k = std::min(latency.size() - 1, static_cast<std::size_t>(q * latency.size()));
        std::nth_element(latency.begin(), latency.begin() + static_cast<std::ptrdiff_t>(k), latency.end());
        return latency[k];
    };
    const std::int64_t p50 = pct(0.50);
    const std::int64_t p99 = pct(0.99);
    out << "ops=" << ops.size() << " seconds=" << seconds
        << " ops_per_sec=" << (seconds > 0 ? static_cast<double>(ops.size()) / seconds : 0.0) << " p50_ns=" << p50
        << " p99_ns=" << p99 << " peak_footprint=" << peak_footprint << " peak_queue=" << agent.peak_queue_size()
        << " w_size=" << agent.params().disperser.w_size << " isa=" << to_string(kernels::active_isa()) << '\n';
    return exit_ok;
}

std::vector<ElementId> parse_id_list(const std::string& s) {
    std::vector<ElementId> ids;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            ids.push_back(std::stoull(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::parse_error, "bad id '" + item + "'");
        }
    }
    return ids;
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Deterministic hot-elements agent for turnstile streams"};
    app.require_subcommand(1);

    // generate
    GeneratorSpec gen;
    std::string gen_kind = "uniform";
    std::string gen_mass = "1/2";
    std::string gen_phi = "1/2";
    std::string gen_eps = "1/4";
    std::string gen_members;
    std::string gen_out = "-";
    auto* g = app.add_subcommand("generate", "write a synthetic stream");
    g->add_option("--kind", gen_kind, "zipf | uniform | round-robin | planted-hot | adversarial-churn | lower-bound")
        ->capture_default_str();
    g->add_option("--length", gen.length, "number of operations");
    g->add_option("--n", gen.n, "universe size")->required();
    g->add_option("--seed", gen.seed)->capture_default_str();
    g->add_option("--delete-ratio", gen.delete_ratio)->capture_default_str();
    g->add_option("--zipf-s", gen.zipf_s)->capture_default_str();
    g->add_option("--k", gen.planted_k, "planted ids")->capture_default_str();
    g->add_option("--mass", gen_mass, "planted frequency floor as p/q")->capture_default_str();
    g->add_option("--churn-period", gen.churn_period);
    g->add_option("--query-every", gen.query_every, "emit Q after every k operations");
    g->add_flag("--final-query", gen.final_query, "emit Q at the end");
    g->add_option("--phi", gen_phi)->capture_default_str();
    g->add_option("--eps", gen_eps)->capture_default_str();
    g->add_option("--members", gen_members, "lower-bound set X, comma separated");
    g->add_option("--probe", gen.probe);
    g->add_option("--out", gen_out, "output path, - for stdout")->capture_default_str();

    // validate
    std::string val_input;
    std::uint64_t val_n = 0;
    auto* v = app.add_subcommand("validate", "check stream syntax and integrity");
    v->add_option("input", val_input)->required();
    v->add_option("--n", val_n, "universe size")->required();

    // run
    AgentFlags run_af;
    RunFlags rf;
    auto* r = app.add_subcommand("run", "feed a stream to the agent and answer its queries");
    r->add_option("input", rf.input, "stream path, - for stdin")->required();
    run_af.attach(r);
    r->add_flag("--verify", rf.verify, "check every invariant against an exact oracle at every step");
    r->add_flag("--stats", rf.stats, "append footprint and queue size to each answer");
    r->add_flag("--dump-entries", rf.dump_entries, "print the entry store after the stream ends");
    r->add_option("--checkpoint", rf.checkpoint, "write disperser header and counter snapshot here");

    // bench
    AgentFlags bench_af;
    std::string bench_input;
    auto* b = app.add_subcommand("bench", "time step() over a stream");
    b->add_option("input", bench_input)->required();
    bench_af.attach(b);

    // lowerbound
    std::string lb_phi = "1/2";
    std::string lb_eps = "1/4";
    std::uint64_t lb_n = 1024;
    std::uint64_t lb_trials = 100;
    std::uint64_t lb_seed = 1;
    auto* lb = app.add_subcommand("lowerbound", "distinguishability harness on random lower-bound instances");
    lb->add_option("--phi", lb_phi)->capture_default_str();
    lb->add_option("--eps", lb_eps)->capture_default_str();
    lb->add_option("--n", lb_n)->capture_default_str();
    lb->add_option("--trials", lb_trials)->capture_default_str();
    lb->add_option("--seed", lb_seed)->capture_default_str();

    // disperser-verify
    std::uint64_t dv_n = 64;
    std::uint32_t dv_d = 4;
    std::uint32_t dv_delta = 4;
    std::string dv_xi = "1/4";
    std::string dv_gamma = "1/6";
    std::string dv_cw = "2";
    std::uint64_t dv_seed = 1;
    std::string dv_construction = "seeded";
    std::string dv_mode = "auto";
    VerifyOptions dv_opts;
    auto* dv = app.add_subcommand("disperser-verify", "check the dispersion property of a graph");
    dv->add_option("--n", dv_n)->capture_default_str();
    dv->add_option("--d", dv_d)->capture_default_str();
    dv->add_option("--delta", dv_delta)->capture_default_str();
    dv->add_option("--xi", dv_xi)->capture_default_str();
    dv->add_option("--gamma", dv_gamma)->capture_default_str();
    dv->add_option("--cw", dv_cw)->capture_default_str();
    dv->add_option("--seed", dv_seed)->capture_default_str();
    dv->add_option("--construction", dv_construction)->capture_default_str();
    dv->add_option("--mode", dv_mode, "auto | exhaustive | sampled")->capture_default_str();
    dv->add_option("--budget", dv_opts.budget)->capture_default_str();
    dv->add_option("--samples", dv_opts.samples)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_params;
    }

    try {
        if (*g) {
            gen.kind = parse_generator_kind(gen_kind);
            gen.planted_mass = Rational::parse(gen_mass);
            gen.phi = Rational::parse(gen_phi);
            gen.eps = Rational::parse(gen_eps);
            gen.members = parse_id_list(gen_members);
            const auto lines = generate(gen);
            if (gen_out == "-") {
                write_stream(out, gen, lines);
            } else {
                std::ofstream f(gen_out);
                if (!f) throw Error(ErrorCode::io_error, "cannot write " + gen_out);
                write_stream(f, gen, lines);
                if (!f) throw Error(ErrorCode::io_error, "write failed for " + gen_out);
            }
            return exit_ok;
        }
        if (*v) {
            Input in(val_input);
            const ValidationResult res = validate_stream(in.get(), val_n);
            if (res.ok) {
                out << "ok operations=" << res.operations << " queries=" << res.queries << '\n';
                return exit_ok;
            }
            out << "violation line=" << res.line << " " << res.message << '\n';
            return exit_integrity;
        }
        if (*r) return cmd_run(run_af, rf, out, err);
        if (*b) return cmd_bench(bench_af, bench_input, out);
        if (*lb) {
            const HarnessReport rep =
                distinguishability_harness(Rational::parse(lb_phi), Rational::parse(lb_eps), lb_n, lb_trials, lb_seed);
            out << "trials=" << rep.trials << " correct=" << rep.correct << " probes_in_set=" << rep.probes_in_set
                << " x=" << rep.x << " alpha=" << rep.alpha << " w_size=" << rep.w_size << " size_cap=" << rep.size_cap
                << " footprint_min=" << rep.min_footprint << " footprint_max=" << rep.max_footprint
                << " footprint_times_eps=" << rep.footprint_over_inv_eps << '\n';
            for (const auto& f : rep.failures) out << "failure " << f << '\n';
            return rep.correct == rep.trials ? exit_ok : exit_invariant;
        }
        if (*dv) {
            const DisperserParams p = DisperserParams::make(dv_n, dv_d, dv_delta, Rational::parse(dv_xi),
                                                            Rational::parse(dv_gamma), Rational::parse(dv_cw));
            const Disperser disp = Disperser::build(p, parse_construction(dv_construction), dv_seed);
            if (dv_mode == "auto")
                dv_opts.mode = VerifyMode::automatic;
            else if (dv_mode == "exhaustive")
                dv_opts.mode = VerifyMode::exhaustive;
            else if (dv_mode == "sampled")
                dv_opts.mode = VerifyMode::sampled;
            else
                throw Error(ErrorCode::invalid_params, "unknown mode '" + dv_mode + "'");
            const DispersionReport rep = verify_dispersion(disp, dv_opts);
            out << disp.header() << '\n';
            out << "holds=" << (rep.holds ? "true" : "false") << " exhaustive=" << (rep.exhaustive ? "true" : "false")
                << " checked=" << rep.checked << " required=" << rep.required << " min_cover=" << rep.min_cover;
            if (rep.witness) {
                out << " witness=";
                print_list(out, *rep.witness);
            }
            out << '\n';
            return rep.holds ? exit_ok : exit_invariant;
        }
    } catch (const Error& e) {
        err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
        return exit_for(e.code());
    }
    return exit_params;
}

} // namespace hotstream
