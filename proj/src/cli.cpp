#include "bayestree/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bayestree/dataset.hpp"
#include "bayestree/distributions.hpp"
#include "bayestree/engine.hpp"
#include "bayestree/errors.hpp"
#include "bayestree/index.hpp"
#include "bayestree/moments.hpp"
#include "bayestree/params.hpp"
#include "bayestree/report.hpp"
#include "bayestree/skeleton.hpp"

namespace bayestree {

namespace {

struct CommonOpts {
    double s = 0.5;
    double alpha = 1.0;
    int dim_max = 16;
    int min_depth = 0;
    std::string data_path;
    std::string dist;
    std::size_t n = 1000;
    std::uint64_t seed = 1;
    std::string format = "json";
    std::string compactify_mode;
};

const std::vector<std::string> kDistNames = {"beta36", "singular", "linear",
                                             "jump_half", "jump_third"};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_input = true) {
    cmd->add_option("--s", o.s, "split probability (u = 1 - s)")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--alpha", o.alpha, "Beta concentration")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--dim-max", o.dim_max, "dimension distribution cutoff")
        ->check(CLI::Range(1, 4096));
    cmd->add_option("--min-depth", o.min_depth,
                    "force recursion to at least this depth")
        ->check(CLI::Range(0, 1 << 20));
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    if (!with_input) return;
    auto* data = cmd->add_option("--data", o.data_path,
                                 "dataset file (one point per line), '-' for stdin");
    auto* dist = cmd->add_option("--dist", o.dist, "sample the dataset instead")
                     ->check(CLI::IsMember(kDistNames));
    cmd->add_option("--n", o.n, "sample size for --dist");
    cmd->add_option("--seed", o.seed, "sampler seed");
    cmd->add_option("--compactify", o.compactify_mode,
                    "map a real-line dataset into [0, 1)")
        ->check(CLI::IsMember({"reciprocal", "rational"}));
    data->excludes(dist);
    dist->excludes(data);
}

Dataset load_data(const CommonOpts& o, std::istream& in) {
    if (!o.dist.empty()) return sample_dataset(*parse_dist(o.dist), o.n, o.seed);
    std::optional<CompactifyMode> mode;
    if (o.compactify_mode == "reciprocal") mode = CompactifyMode::reciprocal;
    if (o.compactify_mode == "rational") mode = CompactifyMode::rational;
    if (o.data_path.empty() || o.data_path == "-") return Dataset::load(in, mode);
    std::ifstream f(o.data_path);
    if (!f) throw error("cannot open dataset file: " + o.data_path);
    return Dataset::load(f, mode);
}

ModelParams make_params(const CommonOpts& o) {
    return ModelParams::create(o.s, o.alpha);
}

EngineOptions make_opts(const CommonOpts& o) {
    EngineOptions e;
    e.dim_cutoff = o.dim_max;
    e.min_depth = o.min_depth;
    return e;
}

// table-cell rendering of a density-like LogValue (the value, not its log)
nlohmann::json json_cell(const LogValue& v) {
    if (v.is_divergent())
        return {{"divergent", true}, {"scaled_log", v.scaled_log()}};
    return v.value();
}

std::string csv_cell(const LogValue& v) {
    return v.is_divergent() ? "inf" : format_double(v.value());
}

int run_evidence(const CommonOpts& o, const std::optional<double>& x,
                 std::istream& in, std::ostream& out) {
    const Dataset data = load_data(o, in);
    const InferenceResult r = evaluate(data, x, make_params(o), make_opts(o));
    if (o.format == "json")
        out << json_of(r, x.has_value()).dump(2) << "\n";
    else
        out << csv_of(r, x.has_value());
    return r.log_evidence.is_divergent() ? 2 : 0;
}

int run_density(const CommonOpts& o, int grid, std::istream& in, std::ostream& out) {
    const Dataset data = load_data(o, in);
    EngineOptions opts = make_opts(o);
    opts.want_dim = false;
    const EvidenceIndex index = EvidenceIndex::build(data, make_params(o), opts);
    bool divergent = false;
    nlohmann::json rows = nlohmann::json::array();
    std::string csv = "x,density,variance,height_at_x\n";
    for (int i = 0; i < grid; ++i) {
        const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(grid);
        const LogValue density = index.query_density(x);
        const ScalarOrDivergent variance = index.query_variance(x);
        const ScalarOrDivergent height = index.query_height(x);
        divergent = divergent || density.is_divergent() || variance.divergent ||
                    height.divergent;
        if (o.format == "json") {
            rows.push_back({{"x", x},
                            {"density", json_cell(density)},
                            {"variance", json_of(variance)},
                            {"height_at_x", json_of(height)}});
        } else {
            csv += format_double(x);
            csv += ',';
            csv += csv_cell(density);
            csv += ',';
            csv += csv_of(variance);
            csv += ',';
            csv += csv_of(height);
            csv += '\n';
        }
    }
    if (o.format == "json")
        out << rows.dump(2) << "\n";
    else
        out << csv;
    return divergent ? 2 : 0;
}

int run_moments(const CommonOpts& o, const std::vector<int>& powers,
                const std::vector<double>& indicators, std::istream& in,
                std::ostream& out) {
    const Dataset data = load_data(o, in);
    const ModelParams params = make_params(o);
    const EngineOptions opts = make_opts(o);
    std::vector<std::pair<std::string, double>> rows;
    for (int k : powers)
        rows.emplace_back("power(" + std::to_string(k) + ")",
                          moment(data, MomentSpec::power(k), params, opts));
    for (double a : indicators)
        rows.emplace_back("indicator(" + format_double(a) + ")",
                          moment(data, MomentSpec::indicator(a), params, opts));
    if (o.format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [name, value] : rows)
            arr.push_back({{"moment", name}, {"value", value}});
        out << arr.dump(2) << "\n";
    } else {
        std::string csv = "moment,value\n";
        for (const auto& [name, value] : rows)
            csv += name + "," + format_double(value) + "\n";
        out << csv;
    }
    return 0;
}

int run_cdf(const CommonOpts& o, const std::vector<double>& as, std::istream& in,
            std::ostream& out) {
    const Dataset data = load_data(o, in);
    EngineOptions opts = make_opts(o);
    opts.want_dim = false;
    const EvidenceIndex index = EvidenceIndex::build(data, make_params(o), opts);
    if (o.format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (double a : as)
            arr.push_back({{"a", a}, {"value", index.query_cdf(a)}});
        out << arr.dump(2) << "\n";
    } else {
        std::string csv = "a,value\n";
        for (double a : as)
            csv += format_double(a) + "," + format_double(index.query_cdf(a)) + "\n";
        out << csv;
    }
    return 0;
}

int run_skeleton(const CommonOpts& o, int max_depth, std::istream& in,
                 std::ostream& out) {
    const Dataset data = load_data(o, in);
    const TreeSkeleton tree =
        map_skeleton(data, make_params(o), max_depth, make_opts(o));
    if (o.format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const SkeletonNode& n : tree.nodes)
            arr.push_back({{"depth", n.depth},
                           {"lo", n.lo},
                           {"n", n.n},
                           {"split_prob", n.split_prob},
                           {"leaf", n.leaf},
                           {"truncated", n.truncated},
                           {"left", n.left},
                           {"right", n.right}});
        out << arr.dump(2) << "\n";
    } else {
        out << format_skeleton(tree);
    }
    return 0;
}

int run_sample(const std::string& dist, std::size_t n, std::uint64_t seed,
               std::ostream& out) {
    std::string text;
    for (double x : sample(*parse_dist(dist), n, seed)) {
        text += format_double(x);
        text += '\n';
    }
    out << text;
    return 0;
}

int run_bench(const CommonOpts& o, const std::vector<std::int64_t>& sizes,
              std::ostream& out) {
    const ModelParams params = make_params(o);
    const EngineOptions opts = make_opts(o);
    const RefDist d = *parse_dist(o.dist.empty() ? "linear" : o.dist);
    nlohmann::json arr = nlohmann::json::array();
    std::string csv = "n,seconds,recursion_count\n";
    for (std::int64_t n : sizes) {
        const Dataset data = sample_dataset(d, static_cast<std::size_t>(n), o.seed);
        const auto t0 = std::chrono::steady_clock::now();
        const InferenceResult r = evaluate(data, std::nullopt, params, opts);
        const auto t1 = std::chrono::steady_clock::now();
        const double secs = std::chrono::duration<double>(t1 - t0).count();
        if (o.format == "json")
            arr.push_back({{"n", n},
                           {"seconds", secs},
                           {"recursion_count", r.recursion_count}});
        else
            csv += std::to_string(n) + "," + format_double(secs) + "," +
                   std::to_string(r.recursion_count) + "\n";
    }
    if (o.format == "json")
        out << arr.dump(2) << "\n";
    else
        out << csv;
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in,
            std::ostream& out, std::ostream& err) {
    CLI::App app{"exact Bayesian inference on infinite binary partition trees"};
    app.require_subcommand(1);

    CommonOpts evidence_o, density_o, moments_o, cdf_o, skel_o, bench_o;
    std::optional<double> x;
    int grid = 1000;
    std::vector<int> powers;
    std::vector<double> indicators;
    std::vector<double> thresholds;
    int skeleton_depth = 12;
    std::string sample_dist;
    std::size_t sample_n = 1000;
    std::uint64_t sample_seed = 1;
    std::vector<std::int64_t> bench_sizes{10000, 20000};

    CLI::App* ev = app.add_subcommand("evidence", "evidence and posterior summaries");
    add_common(ev, evidence_o);
    ev->add_option("--x", x, "also report the expected tree height at x")
        ->check(CLI::Range(0.0, 1.0));

    CLI::App* de = app.add_subcommand(
        "density", "predictive density, variance and height on a grid");
    add_common(de, density_o);
    de->add_option("--grid", grid, "grid size")->check(CLI::Range(1, 100000000));

    CLI::App* mo = app.add_subcommand("moments", "posterior moments of q");
    add_common(mo, moments_o);
    mo->add_option("--power", powers, "E[int x^k q(x) dx | D]");
    mo->add_option("--indicator", indicators, "E[int 1{x<=a} q(x) dx | D]");

    CLI::App* cd = app.add_subcommand("cdf", "posterior mean cdf");
    add_common(cd, cdf_o);
    cd->add_option("--a", thresholds, "thresholds")->required();

    CLI::App* sk = app.add_subcommand("skeleton", "maximum a posteriori partition");
    add_common(sk, skel_o);
    sk->add_option("--skeleton-depth", skeleton_depth, "expansion depth limit")
        ->check(CLI::Range(0, 64));

    CLI::App* sa = app.add_subcommand("sample", "draw a dataset and print it");
    sa->add_option("--dist", sample_dist, "reference distribution")
        ->check(CLI::IsMember(kDistNames))
        ->required();
    sa->add_option("--n", sample_n, "sample size");
    sa->add_option("--seed", sample_seed, "sampler seed");

    CLI::App* be = app.add_subcommand("bench", "time full evaluations");
    add_common(be, bench_o);
    be->add_option("--sizes", bench_sizes, "dataset sizes");

    try {
        std::vector<std::string> reversed = args;
        std::reverse(reversed.begin(), reversed.end());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (ev->parsed()) return run_evidence(evidence_o, x, in, out);
        if (de->parsed()) return run_density(density_o, grid, in, out);
        if (mo->parsed()) {
            if (powers.empty() && indicators.empty()) powers.push_back(1);
            return run_moments(moments_o, powers, indicators, in, out);
        }
        if (cd->parsed()) return run_cdf(cdf_o, thresholds, in, out);
        if (sk->parsed()) return run_skeleton(skel_o, skeleton_depth, in, out);
        if (sa->parsed()) return run_sample(sample_dist, sample_n, sample_seed, out);
        if (be->parsed()) return run_bench(bench_o, bench_sizes, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "error: no subcommand given\n";
    return 1;
}

}  // namespace bayestree
