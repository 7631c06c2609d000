#include "uspec/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <thread>

#include "uspec/datagen.hpp"
#include "uspec/eval.hpp"
#include "uspec/io.hpp"
#include "uspec/kernels.hpp"
#include "uspec/pipeline.hpp"

namespace uspec {

namespace {

struct UsageError : Error {
    using Error::Error;
};

struct ClusterArgs {
    std::string in;
    std::string algo = "uspec";
    std::size_t k = 0;
    std::string out;
    std::string truth;
    std::size_t runs = 1;
    int threads = 0;
    std::string select = "hybrid";
    std::string knn = "approx";
    RunConfig config;
};

void add_cluster_flags(CLI::App& cmd, ClusterArgs& a) {
    cmd.add_option("--in", a.in, "Dataset (.csv, or .bin/.f64 raw binary)")->required();
    cmd.add_option("--algo", a.algo, "uspec or usenc")->check(CLI::IsMember({"uspec", "usenc"}));
    cmd.add_option("--k", a.k, "Number of clusters")->required();
    cmd.add_option("--p", a.config.p, "Number of representatives");
    cmd.add_option("--Kn", a.config.K, "Nearest representatives per object");
    cmd.add_option("--p-prime", a.config.p_prime, "Hybrid candidate count (default 10p)");
    cmd.add_option("--Kn-prime", a.config.K_prime, "Neighbour table width (default 10Kn)");
    cmd.add_option("--select", a.select, "random, kmeans or hybrid")
        ->check(CLI::IsMember({"random", "kmeans", "hybrid"}));
    cmd.add_option("--knn", a.knn, "approx or exact")->check(CLI::IsMember({"approx", "exact"}));
    cmd.add_option("--m", a.config.m, "Ensemble size");
    cmd.add_option("--kmin", a.config.k_min, "Smallest member cluster count");
    cmd.add_option("--kmax", a.config.k_max, "Largest member cluster count");
    cmd.add_option("--seed", a.config.seed, "Master seed");
    cmd.add_option("--runs", a.runs, "Repeats with derived seeds")->check(CLI::PositiveNumber);
    cmd.add_option("--truth", a.truth, "Ground-truth labels; enables NMI/CA");
    cmd.add_option("--threads", a.threads, "Worker threads (default: hardware)")->check(CLI::NonNegativeNumber);
    cmd.add_flag("--drop-trivial", a.config.drop_trivial, "Discard the constant eigenvector before discretization");
    cmd.add_flag("--row-normalize", a.config.row_normalize, "Scale embedding rows to unit length before discretization");
}

void apply_threads(int requested) {
    int threads = requested;
    if (const char* env = std::getenv("CLUSTER_THREADS"); env && *env) {
        try {
            threads = std::stoi(env);
        } catch (const std::exception&) {
            throw UsageError(std::string("CLUSTER_THREADS is not an integer: ") + env);
        }
        if (threads < 1) throw UsageError("CLUSTER_THREADS must be >= 1");
    }
    if (threads == 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    kernels::set_thread_count(threads);
}

Dataset load(const std::string& path) { return load_dataset(path, format_from_path(path)); }

RunConfig finish_config(ClusterArgs& a, std::size_t n) {
    RunConfig c = a.config;
    c.k = a.k;
    c.select = parse_select_strategy(a.select);
    c.knn = parse_knn_mode(a.knn);
    try {
        return c.resolved(n);
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
}

ClusteringResult run_once(const std::string& algo, const Dataset& data, const RunConfig& c) {
    return algo == "usenc" ? run_usenc(data, c.k, c) : run_uspec(data, c.k, c);
}

std::vector<ClusteringResult> run_repeats(const std::string& algo, const Dataset& data, RunConfig c,
                                          std::size_t runs) {
    std::vector<ClusteringResult> results;
    const std::uint64_t master = c.seed;
    for (std::size_t r = 0; r < runs; ++r) {
        c.seed = run_seed(master, r);
        results.push_back(run_once(algo, data, c));
    }
    return results;
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

int cmd_cluster(ClusterArgs& a, std::ostream& out) {
    apply_threads(a.threads);
    const Dataset data = load(a.in);
    const RunConfig c = finish_config(a, data.n());
    std::optional<Labeling> truth;
    if (!a.truth.empty()) {
        truth = load_labels(a.truth);
        if (truth->size() != data.n()) throw LengthMismatch("truth labels do not match the dataset size");
    }

    const auto results = run_repeats(a.algo, data, c, a.runs);
    if (!a.out.empty()) save_labels(results.front().labeling, a.out);

    out << "run\tseed\tselection\tindex\taffinity\teigen\tdiscretize\tconsensus\ttotal";
    if (truth) out << "\tnmi\tca";
    out << '\n';
    for (std::size_t r = 0; r < results.size(); ++r) {
        const auto& res = results[r];
        const auto& t = res.timings;
        out << r << '\t' << res.config.seed;
        for (double v : {t.selection, t.index, t.affinity, t.eigen, t.discretize, t.consensus, t.total()})
            out << '\t' << fixed(v, 4);
        if (truth) out << '\t' << fixed(nmi(res.labeling, *truth), 4) << '\t' << fixed(clustering_accuracy(res.labeling, *truth), 4);
        out << '\n';
    }
    if (truth) {
        const RunReport rep = run_report(results, *truth);
        out << "\nruns\tnmi\tca\ttime\n";
        out << rep.runs << '\t' << format_mean_std(rep.nmi, 100.0) << '\t' << format_mean_std(rep.ca, 100.0) << '\t'
            << format_mean_std(rep.total) << '\n';
    }
    return 0;
}

struct GenArgs {
    std::string family;
    std::size_t n = 1000;
    double noise = -1.0;
    std::uint64_t seed = 0;
    std::string out;
    std::string labels;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
    SyntheticSpec spec;
    spec.family = parse_family(a.family);
    spec.n = a.n;
    spec.noise = a.noise;
    spec.seed = a.seed;
    const auto [data, truth] = generate(spec);
    save_dataset(data, a.out, format_from_path(a.out));
    if (!a.labels.empty()) save_labels(truth, a.labels);
    out << "family\tn\tclasses\tnoise\n"
        << to_string(spec.family) << '\t' << data.n() << '\t' << truth.k << '\t'
        << (a.noise < 0.0 ? default_noise(spec.family) : a.noise) << '\n';
    return 0;
}

struct EvalArgs {
    std::string pred;
    std::string truth;
    std::string metric = "both";
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
    const Labeling pred = load_labels(a.pred);
    const Labeling truth = load_labels(a.truth);
    const bool want_nmi = a.metric != "ca";
    const bool want_ca = a.metric != "nmi";
    if (want_nmi && want_ca) out << "nmi\tca\n";
    else out << (want_nmi ? "nmi\n" : "ca\n");
    if (want_nmi) out << fixed(nmi(pred, truth), 6);
    if (want_nmi && want_ca) out << '\t';
    if (want_ca) out << fixed(clustering_accuracy(pred, truth), 6);
    out << '\n';
    return 0;
}

struct BenchArgs {
    ClusterArgs cluster;
    std::string sweep;
};

void set_param(ClusterArgs& a, const std::string& name, std::size_t value) {
    if (name == "p") a.config.p = value;
    else if (name == "Kn") a.config.K = value;
    else if (name == "p-prime") a.config.p_prime = value;
    else if (name == "Kn-prime") a.config.K_prime = value;
    else if (name == "m") a.config.m = value;
    else if (name == "kmin") a.config.k_min = value;
    else if (name == "kmax") a.config.k_max = value;
    else if (name == "k") a.k = value;
    else throw UsageError("cannot sweep '" + name + "' (use p, Kn, p-prime, Kn-prime, m, kmin, kmax or k)");
}

int cmd_bench(BenchArgs& a, std::ostream& out) {
    const SweepSpec sweep = parse_sweep(a.sweep);
    apply_threads(a.cluster.threads);
    std::vector<std::size_t> values;
    for (double v = sweep.start; v <= sweep.end + 1e-9; v += sweep.step) {
        if (v < 0.0 || v != std::floor(v)) throw UsageError("sweep values must be nonnegative integers");
        values.push_back(static_cast<std::size_t>(v));
        if (sweep.step == 0.0) break;
    }
    const Dataset data = load(a.cluster.in);
    const Labeling truth = load_labels(a.cluster.truth);
    if (truth.size() != data.n()) throw LengthMismatch("truth labels do not match the dataset size");

    // Validate every point before running any of them.
    std::vector<RunConfig> configs;
    for (std::size_t v : values) {
        ClusterArgs point = a.cluster;
        set_param(point, sweep.param, v);
        configs.push_back(finish_config(point, data.n()));
    }
    out << sweep.param << "\tnmi\tca\ttime\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto rep = run_report(run_repeats(a.cluster.algo, data, configs[i], a.cluster.runs), truth);
        out << values[i] << '\t' << format_mean_std(rep.nmi, 100.0) << '\t' << format_mean_std(rep.ca, 100.0) << '\t'
            << fixed(rep.total.mean, 4) << '\n';
    }
    return 0;
}

}  // namespace

std::uint64_t run_seed(std::uint64_t master, std::size_t r) {
    return r == 0 ? master : derive_seed(derive_seed(master, static_cast<std::uint64_t>(Stream::run)), r);
}

SweepSpec parse_sweep(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("sweep must look like param=start:step:end");
    SweepSpec s;
    s.param = text.substr(0, eq);
    std::vector<double> parts;
    std::size_t pos = eq + 1;
    while (true) {
        const auto colon = text.find(':', pos);
        const std::string piece = text.substr(pos, colon == std::string::npos ? std::string::npos : colon - pos);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(piece, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != piece.size() || !std::isfinite(v)) throw UsageError("bad sweep value '" + piece + "'");
        parts.push_back(v);
        if (colon == std::string::npos) break;
        pos = colon + 1;
    }
    if (parts.size() == 1) {
        s.start = s.end = parts[0];
        s.step = 0.0;
    } else if (parts.size() == 3) {
        s.start = parts[0];
        s.step = parts[1];
        s.end = parts[2];
        if (!(s.step > 0.0) || s.end < s.start) throw UsageError("sweep needs step > 0 and end >= start");
    } else {
        throw UsageError("sweep must look like param=start:step:end");
    }
    return s;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Ultra-scalable spectral clustering and ensemble clustering"};
    app.name("uspec");
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("-q,--quiet", quiet, "Suppress warnings");

    ClusterArgs cluster;
    auto* c_cmd = app.add_subcommand("cluster", "Cluster a dataset with U-SPEC or U-SENC");
    add_cluster_flags(*c_cmd, cluster);
    c_cmd->add_option("--out", cluster.out, "Label file for the first run");

    GenArgs gen;
    auto* g_cmd = app.add_subcommand("gen", "Generate a synthetic benchmark dataset");
    g_cmd->add_option("--family", gen.family, "two_bananas, smiling_face, concentric_circles, circles_gaussians, flower")
        ->required()
        ->check(CLI::IsMember({"two_bananas", "smiling_face", "concentric_circles", "circles_gaussians", "flower"}));
    g_cmd->add_option("--n", gen.n, "Number of points");
    g_cmd->add_option("--noise", gen.noise, "Jitter standard deviation (default: per family)");
    g_cmd->add_option("--seed", gen.seed, "Seed");
    g_cmd->add_option("--out", gen.out, "Dataset output path")->required();
    g_cmd->add_option("--labels", gen.labels, "Ground-truth label output path");

    EvalArgs ev;
    auto* e_cmd = app.add_subcommand("eval", "Score a labeling against ground truth");
    e_cmd->add_option("--pred", ev.pred, "Predicted labels")->required();
    e_cmd->add_option("--truth", ev.truth, "Ground-truth labels")->required();
    e_cmd->add_option("--metric", ev.metric, "nmi, ca or both")->check(CLI::IsMember({"nmi", "ca", "both"}));

    BenchArgs bench;
    auto* b_cmd = app.add_subcommand("bench", "Sweep one parameter and report quality and time");
    add_cluster_flags(*b_cmd, bench.cluster);
    b_cmd->get_option("--truth")->required();
    b_cmd->add_option("--sweep", bench.sweep, "param=start:step:end")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    set_quiet(quiet);

    try {
        if (app.got_subcommand(c_cmd)) return cmd_cluster(cluster, out);
        if (app.got_subcommand(g_cmd)) return cmd_gen(gen, out);
        if (app.got_subcommand(e_cmd)) return cmd_eval(ev, out);
        return cmd_bench(bench, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace uspec
