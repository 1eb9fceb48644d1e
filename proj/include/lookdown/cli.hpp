#pragma once

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "lookdown/lookdown.hpp"

namespace lookdown {

using Json = nlohmann::json;

struct ModelInput {
    std::string kind;
    std::optional<ModelSpec> spec;                // realized at the cap
    std::optional<AsynchronousFamily> family;     // present when a closed-form scale applies
    std::optional<OffspringDistribution> offspring;
};

struct RunConfig {
    Json raw;
    std::string command;
    std::optional<ModelInput> model;
    std::uint64_t seed = 0;
    long long reps = 10000;
    int cap = 0;
    int horizon = 0;
    double alpha = 0.01;
    int threads = 0;  // 0: machine default
    std::string out_dir = "out";
};

namespace detail {

inline Rational rational_from_json(const Json& v, const std::string& field) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number_float()) {
        // exact binary value of the double; use strings for decimal exactness
        double x = v.get<double>();
        Rational r = 0, scale = 1;
        bool neg = x < 0;
        if (neg) x = -x;
        while (x != std::floor(x)) {
            x *= 2;
            scale *= 2;
        }
        r = Rational(BigInt(static_cast<long long>(x)), BigInt(1));
        r /= scale;
        return neg ? -r : r;
    }
    fail(errc::validation_error, field);
}

inline Json family_block(const Json& doc) {
    // accepts {"family": {...}} / {"model": {...}} / {"family": "moran", "N": 4}
    Json block;
    if (doc.contains("family"))
        block = doc.at("family");
    else if (doc.contains("model"))
        block = doc.at("model");
    else
        return Json();
    if (block.is_string()) {
        Json expanded = doc;
        expanded["kind"] = block.get<std::string>();
        expanded.erase("family");
        return expanded;
    }
    return block;
}

}  // namespace detail

inline ModelInput parse_model(const Json& block, int cap) {
    ModelInput input;
    if (!block.contains("kind")) fail(errc::validation_error, "family.kind");
    input.kind = block.at("kind").get<std::string>();
    try {
        if (input.kind == "explicit") {
            std::vector<int> sizes = block.at("X").get<std::vector<int>>();
            std::vector<std::vector<int>> litters =
                block.at("litters").get<std::vector<std::vector<int>>>();
            input.spec = validate_spec(std::move(sizes), std::move(litters));
        } else if (input.kind == "moran") {
            input.spec = moran_spec(block.at("N").get<int>(), cap);
        } else if (input.kind == "synchronous") {
            input.spec = synchronous_spec(block.at("X0").get<int>(),
                                          block.value("litter", 2), cap);
        } else if (input.kind == "asynchronous") {
            AsynchronousFamily fam =
                asynchronous_family(block.at("X0").get<long long>(), block.at("b").get<long long>(), cap);
            input.spec = fam.realize();
            input.family = std::move(fam);
        } else if (input.kind == "pow2") {
            AsynchronousFamily fam = doubling_family(cap);
            input.spec = fam.realize();
            input.family = std::move(fam);
        } else if (input.kind == "gw") {
            std::vector<Rational> pmf;
            for (const auto& v : block.at("pmf")) pmf.push_back(detail::rational_from_json(v, "pmf"));
            input.offspring = make_offspring(std::move(pmf));
        } else {
            fail(errc::validation_error, "family.kind '" + input.kind + "'");
        }
    } catch (const Json::exception& e) {
        fail(errc::validation_error, std::string("family block: ") + e.what());
    }
    return input;
}

inline RunConfig parse_config(const Json& doc) {
    RunConfig config;
    config.raw = doc;
    if (!doc.contains("command") || !doc.at("command").is_string())
        fail(errc::validation_error, "command");
    config.command = doc.at("command").get<std::string>();
    try {
        config.cap = doc.value("cap", 0);
        config.seed = doc.value("seed", std::uint64_t{1});
        config.reps = doc.value("reps", 10000ll);
        config.horizon = doc.value("horizon", config.cap);
        config.alpha = doc.value("alpha", 0.01);
        config.threads = doc.value("threads", 0);
        config.out_dir = doc.value("out", std::string("out"));
    } catch (const Json::exception& e) {
        fail(errc::validation_error, e.what());
    }
    Json block = detail::family_block(doc);
    if (!block.is_null()) {
        if (config.cap == 0 && !block.contains("X") && block.value("kind", "") != "explicit")
            fail(errc::validation_error, "cap");
        config.model = parse_model(block, config.cap);
        if (config.model->spec && config.horizon == 0)
            config.horizon = config.model->spec->generations() - 1;
    }
    return config;
}

namespace detail {

inline std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

class RunContext {
public:
    explicit RunContext(const RunConfig& config) : config_(config) {
        std::filesystem::create_directories(config.out_dir);
        manifest_["command"] = config.command;
        manifest_["config"] = config.raw;
        manifest_["seed_used"] = config.seed;
        manifest_["version"] = LOOKDOWN_VERSION;
        manifest_["started_at"] = iso_timestamp();
        manifest_["replicate_seed_rule"] = "substream(root, \"<command>/replicate\", index)";
    }

    std::ofstream open_csv(const std::string& name) {
        std::string path = config_.out_dir + "/" + name;
        manifest_["outputs"].push_back(path);
        return std::ofstream(path);
    }

    std::string path_for(const std::string& name) {
        std::string path = config_.out_dir + "/" + name;
        manifest_["outputs"].push_back(path);
        return path;
    }

    Json& results() { return manifest_["results"]; }

    void finish() {
        manifest_["finished_at"] = iso_timestamp();
        std::ofstream out(config_.out_dir + "/" + config_.command + ".manifest.json");
        out << manifest_.dump(2) << "\n";
    }

private:
    const RunConfig& config_;
    Json manifest_;
};

inline const ModelSpec& require_spec(const RunConfig& config) {
    require(config.model.has_value() && config.model->spec.has_value(), errc::validation_error,
            "command '" + config.command + "' needs a model or family block");
    return *config.model->spec;
}

inline CoalescentScale scale_for(const RunConfig& config) {
    if (config.model->family) return asynchronous_scale(*config.model->family);
    return coalescent_scale(require_spec(config));
}

inline int run_sample(const RunConfig& config, RunContext& ctx) {
    std::string sampler = config.raw.value("sampler", std::string("lookdown"));
    long long reps = config.raw.value("reps", 1ll);
    for (long long rep = 0; rep < reps; ++rep) {
        SeedSpec rep_seed =
            derive_seed(SeedSpec{config.seed}, "sample/replicate", static_cast<std::uint64_t>(rep));
        Genealogy g;
        if (config.model && config.model->offspring) {
            g = sample_gw(*config.model->offspring, rep_seed, config.cap);
        } else {
            const ModelSpec& spec = require_spec(config);
            SamplerKind kind = sampler_from_name(sampler);
            g = kind == SamplerKind::forward           ? sample_forward(spec, rep_seed)
                : kind == SamplerKind::lookdown        ? build_lookdown(spec, rep_seed)
                                                       : sample_completely_neutral(spec, rep_seed);
        }
        std::ofstream out(ctx.path_for("genealogy_" + std::to_string(rep) + ".txt"));
        write_genealogy(out, g);
    }
    ctx.results()["replicates"] = reps;
    return 0;
}

inline int run_verify_neutrality(const RunConfig& config, RunContext& ctx) {
    const ModelSpec& spec = require_spec(config);
    auto fwd = exact_unlabelled_distribution(spec, SamplerKind::forward);
    auto lkd = exact_unlabelled_distribution(spec, SamplerKind::lookdown);
    auto cn = exact_unlabelled_distribution(spec, SamplerKind::completely_neutral);
    bool equal = fwd == lkd && lkd == cn;

    auto csv = ctx.open_csv("neutrality.csv");
    CsvWriter w(csv);
    w.row("class", "forward", "lookdown", "completely_neutral");
    for (auto& [cls, p] : fwd) {
        Rational pl = lkd.count(cls) ? lkd.at(cls) : Rational(0);
        Rational pc = cn.count(cls) ? cn.at(cls) : Rational(0);
        w.row(cls.encoding, p, pl, pc);
    }
    ctx.results()["exact_equal"] = equal;
    ctx.results()["classes"] = fwd.size();
    return equal ? 0 : 1;
}

inline int run_sbo_check(const RunConfig& config, RunContext& ctx) {
    std::vector<std::vector<int>> cases;
    if (config.raw.contains("partitions"))
        cases = config.raw.at("partitions").get<std::vector<std::vector<int>>>();
    else
        cases = {{2, 1}, {3, 1}, {2, 2}, {1, 1, 1}, {3, 2, 1}, {4, 2, 1, 1}};

    auto csv = ctx.open_csv("sbo_check.csv");
    CsvWriter w(csv);
    w.row("sizes", "mode", "discovery_ok", "scramble_ok", "p_discovery", "p_scramble");
    bool all_ok = true;
    for (const auto& sizes : cases) {
        GenerationPartition p = consecutive_partition(sizes);
        std::string label;
        for (std::size_t i = 0; i < sizes.size(); ++i)
            label += (i ? "+" : "") + std::to_string(sizes[static_cast<std::size_t>(i)]);
        auto product = exact_sbo_distribution(multiset_from_ints(p.block_sizes()));
        if (p.ground_size <= 9) {
            bool okd = discovery_law_exact(p) == product;
            bool oks = scramble_law_exact(p) == product;
            all_ok = all_ok && okd && oks;
            w.row(label, "exact", okd ? 1 : 0, oks ? 1 : 0, "", "");
        } else {
            const long long reps = config.raw.value("reps", 100000ll);
            std::map<std::vector<int>, long long> obs_d, obs_s;
            for (long long rep = 0; rep < reps; ++rep) {
                Stream sd(config.seed, "sbo/discovery", static_cast<std::uint64_t>(rep));
                Stream ss(config.seed, "sbo/scramble", static_cast<std::uint64_t>(rep));
                ++obs_d[sbo_discovery_order(p, sd)];
                ++obs_s[sbo_scramble_order(p, ss)];
            }
            std::vector<long long> cd, cs;
            std::vector<double> probs;
            for (auto& [order, q] : product) {
                cd.push_back(obs_d.count(order) ? obs_d[order] : 0);
                cs.push_back(obs_s.count(order) ? obs_s[order] : 0);
                probs.push_back(to_double(q));
            }
            TestReport rd = chi_square_gof("sbo-discovery", cd, probs, config.alpha);
            TestReport rs = chi_square_gof("sbo-scramble", cs, probs, config.alpha);
            all_ok = all_ok && !rd.reject && !rs.reject;
            w.row(label, "chi-square", rd.reject ? 0 : 1, rs.reject ? 0 : 1, rd.p_value, rs.p_value);
        }
    }
    ctx.results()["all_ok"] = all_ok;
    return all_ok ? 0 : 1;
}

inline int run_coalescent(const RunConfig& config, RunContext& ctx) {
    CoalescentScale scale = scale_for(config);
    auto csv = ctx.open_csv("coalescent.csv");
    CsvWriter w(csv);
    w.row("n", "s_n", "t_n", "s_n_trunc", "t_n_trunc");
    for (std::size_t n = 0; n < scale.s.size(); ++n)
        w.row(static_cast<long long>(n), scale.s[n], scale.t[n + 1], scale.s_trunc[n],
              scale.t_trunc[n + 1]);

    if (config.raw.contains("pair")) {
        const ModelSpec& spec = require_spec(config);
        int n = config.raw.at("pair").value("n", 0);
        int m = config.raw.at("pair").value("m", spec.generations() - 1);
        Rational formula = coalescence_from_increments(coalescent_scale(spec).s, n, m);
        EstimateWithCI est =
            monte_carlo_coalescence(spec, n, m, config.reps, SeedSpec{config.seed});
        ctx.results()["pair"] = {{"n", n},
                                 {"m", m},
                                 {"formula", to_string(formula)},
                                 {"estimate", est.estimate},
                                 {"se", est.se},
                                 {"within_4se", std::abs(est.estimate - to_double(formula)) <= 4 * est.se}};
    }
    return 0;
}

inline int run_identify_base(const RunConfig& config, RunContext& ctx) {
    const ModelSpec& spec = require_spec(config);
    CoalescentScale scale = scale_for(config);
    std::vector<int> grid;
    if (config.raw.contains("n_grid"))
        grid = config.raw.at("n_grid").get<std::vector<int>>();
    else
        for (int n = 0; n <= config.raw.value("n_max", 0); ++n) grid.push_back(n);
    auto rows =
        dichotomy_experiment(spec, scale, grid, config.horizon, config.reps, SeedSpec{config.seed});
    auto csv = ctx.open_csv("identify_base.csv");
    CsvWriter w(csv);
    w.row("n", "t_n", "rho_hat", "se");
    for (auto& row : rows) w.row(row.n, row.t, row.rho_hat, row.se);
    ctx.results()["rows"] = rows.size();
    return 0;
}

inline int run_rank_recovery(const RunConfig& config, RunContext& ctx) {
    const ModelSpec& spec = require_spec(config);
    int n_max = config.raw.value("n_max", 0);
    int threads = config.threads > 0 ? config.threads : default_threads();
    auto reports = replicate_map(config.reps, threads, [&](long long rep) {
        CoupledPair pair = lookdown_coupling(
            spec, derive_seed(SeedSpec{config.seed}, "rank-recovery/replicate",
                              static_cast<std::uint64_t>(rep)));
        return rank_recovery_by_extinction(pair, n_max);
    });
    std::vector<long long> total(static_cast<std::size_t>(n_max) + 1, 0);
    std::vector<long long> resolvable(static_cast<std::size_t>(n_max) + 1, 0);
    std::vector<long long> matched(static_cast<std::size_t>(n_max) + 1, 0);
    long long monotone_violations = 0;
    for (auto& report : reports) {
        if (!report.tau_monotone) ++monotone_violations;
        for (auto& row : report.rows) {
            total[static_cast<std::size_t>(row.generation)] += row.total;
            resolvable[static_cast<std::size_t>(row.generation)] += row.resolvable;
            matched[static_cast<std::size_t>(row.generation)] += row.matched;
        }
    }
    auto csv = ctx.open_csv("rank_recovery.csv");
    CsvWriter w(csv);
    w.row("n", "vertices", "resolvable", "matched", "accuracy");
    for (int n = 0; n <= n_max; ++n) {
        double acc = resolvable[static_cast<std::size_t>(n)] == 0
                         ? 1.0
                         : static_cast<double>(matched[static_cast<std::size_t>(n)]) /
                               static_cast<double>(resolvable[static_cast<std::size_t>(n)]);
        w.row(n, total[static_cast<std::size_t>(n)], resolvable[static_cast<std::size_t>(n)],
              matched[static_cast<std::size_t>(n)], acc);
    }
    ctx.results()["tau_monotone_violations"] = monotone_violations;
    bool perfect = true;
    for (int n = 0; n <= n_max; ++n)
        perfect = perfect && matched[static_cast<std::size_t>(n)] == resolvable[static_cast<std::size_t>(n)];
    ctx.results()["all_resolvable_matched"] = perfect;
    return monotone_violations == 0 && perfect ? 0 : 1;
}

inline int run_fixation(const RunConfig& config, RunContext& ctx) {
    const ModelSpec& spec = require_spec(config);
    int source = config.raw.value("n", -1);
    if (source < 0) {
        source = 0;  // first generation wide enough to have rivals
        while (source < spec.generations() && spec.sizes[static_cast<std::size_t>(source)] < 2) ++source;
    }
    int threads = config.threads > 0 ? config.threads : default_threads();
    auto outcomes = replicate_map(config.reps, threads, [&](long long rep) {
        Genealogy g = build_lookdown(spec, derive_seed(SeedSpec{config.seed}, "fixation/replicate",
                                                       static_cast<std::uint64_t>(rep)));
        auto m = detect_fixation(g, source);
        return m ? *m : -1;
    });
    auto csv = ctx.open_csv("fixation.csv");
    CsvWriter w(csv);
    w.row("replicate", "fixed", "generation");
    long long events = 0;
    for (long long rep = 0; rep < config.reps; ++rep) {
        int m = outcomes[static_cast<std::size_t>(rep)];
        if (m >= 0) ++events;
        w.row(rep, m >= 0 ? 1 : 0, m);
    }
    ctx.results()["source_generation"] = source;
    ctx.results()["events"] = events;
    ctx.results()["frequency"] = static_cast<double>(events) / static_cast<double>(config.reps);
    return 0;
}

inline int run_gw_spine(const RunConfig& config, RunContext& ctx) {
    require(config.model && config.model->offspring, errc::validation_error,
            "gw-spine needs a gw family with a pmf");
    const OffspringDistribution& d = *config.model->offspring;
    SpineDiagnostics diag = spine_diagnostics(d);
    ctx.results()["mu"] = to_string(diag.mu);
    ctx.results()["k_log_k_sum"] = diag.k_log_k;
    ctx.results()["regime"] = diag.regime;
    ctx.results()["heavy_tail_unreachable"] = diag.heavy_tail_unreachable;

    bool ok = true;
    int cap = std::min(config.cap > 0 ? config.cap : 3, 3);
    if (d.mean() > 0) {
        auto direct = spinal_law_exact(d, cap);
        auto coupled = lookdown_spine_law_exact(d, cap);
        ok = direct == coupled;
        ctx.results()["correspondence_cap"] = cap;
        ctx.results()["correspondence_exact"] = ok;
    }

    auto csv = ctx.open_csv("gw_spine.csv");
    CsvWriter w(csv);
    w.row("truncation", "k_log_k_sum");
    if (config.raw.contains("zipf")) {
        int exponent = config.raw.at("zipf").value("exponent", 2);
        for (int cut : config.raw.at("zipf").value("cuts", std::vector<int>{4, 16, 64, 256}))
            w.row(cut, truncated_zipf(exponent, cut).k_log_k_sum());
    } else {
        w.row(d.max_children(), diag.k_log_k);
    }
    return ok ? 0 : 1;
}

}  // namespace detail

inline int run(const RunConfig& config) {
    detail::RunContext ctx(config);
    int code = 2;
    if (config.command == "sample")
        code = detail::run_sample(config, ctx);
    else if (config.command == "verify-neutrality")
        code = detail::run_verify_neutrality(config, ctx);
    else if (config.command == "sbo-check")
        code = detail::run_sbo_check(config, ctx);
    else if (config.command == "coalescent")
        code = detail::run_coalescent(config, ctx);
    else if (config.command == "identify-base")
        code = detail::run_identify_base(config, ctx);
    else if (config.command == "rank-recovery")
        code = detail::run_rank_recovery(config, ctx);
    else if (config.command == "fixation")
        code = detail::run_fixation(config, ctx);
    else if (config.command == "gw-spine")
        code = detail::run_gw_spine(config, ctx);
    else
        fail(errc::validation_error, "unknown command '" + config.command + "'");
    ctx.results()["exit_code"] = code;
    ctx.finish();
    return code;
}

inline int run_config_file(const std::string& path, std::optional<std::uint64_t> seed_override,
                           int threads_override) {
    std::ifstream in(path);
    if (!in) fail(errc::parse_error, "cannot open config '" + path + "'");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::exception& e) {
        fail(errc::parse_error, e.what());
    }
    RunConfig config = parse_config(doc);
    if (seed_override) {
        config.seed = *seed_override;
        config.raw["seed"] = *seed_override;
    }
    if (threads_override > 0) config.threads = threads_override;
    return run(config);
}

}  // namespace lookdown
