// Command line driver wiring dataset generation, outlier scoring, metric
// evaluation, and the closed-form score distribution into one tool.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cfof/baselines.hpp"
#include "cfof/dataset.hpp"
#include "cfof/eval.hpp"
#include "cfof/exact.hpp"
#include "cfof/fast_cfof.hpp"
#include "cfof/score_set.hpp"
#include "cfof/synthgen.hpp"
#include "cfof/theory.hpp"

using namespace cfof;

namespace {

bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

unsigned env_threads() {
    const char* env = std::getenv("CFOF_THREADS");
    if (!env) return 0;
    const long v = std::strtol(env, nullptr, 10);
    return v > 0 ? static_cast<unsigned>(v) : 0;
}

Dataset load_dataset(const std::string& path) {
    return has_suffix(path, ".bin") ? load_binary(path) : load_csv(path);
}

void write_dataset(const Dataset& ds, const std::string& out, const std::string& labels_path) {
    if (has_suffix(out, ".bin"))
        save_binary(ds, out);
    else
        save_csv(ds, out, false);
    if (!labels_path.empty()) {
        if (!ds.has_labels()) throw std::runtime_error("no labels to write for this kind");
        save_labels(ds.labels, labels_path);
    }
}

std::vector<double> parse_rho_list(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        out.push_back(std::stod(text.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

MixtureSpec read_mixture_spec(const std::string& path, std::uint64_t seed_override,
                              std::size_t n_override, std::size_t d_override) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    in >> j;
    MixtureSpec spec;
    spec.n = j.value("n", n_override);
    spec.d = j.value("d", d_override);
    spec.seed = j.value("seed", seed_override);
    for (const auto& c : j.at("clusters")) {
        ClusterSpec cs;
        cs.weight = c.at("weight").get<double>();
        cs.stdev = c.value("stdev", 1.0);
        cs.family = parse_family(c.value("family", std::string("normal")));
        const auto& m = c.at("mean");
        if (m.is_number())
            cs.mean = {m.get<double>()};
        else
            cs.mean = m.get<std::vector<double>>();
        spec.clusters.push_back(std::move(cs));
    }
    return spec;
}

int cmd_gen(const std::string& kind, std::size_t n, std::size_t d, std::uint64_t seed,
            double alpha, double factor, const std::string& out, const std::string& labels,
            const std::string& spec_path) {
    if (kind == "unimodal") {
        write_dataset(gen_unimodal(n, d, seed), out, labels);
    } else if (kind == "clust2") {
        write_dataset(gen_clust2(n, d, seed), out, labels);
    } else if (kind == "multimodal") {
        write_dataset(gen_multimodal(n, d, seed, alpha).data, out, labels);
    } else if (kind == "multimodal-art") {
        const auto md = gen_multimodal(n, d, seed, alpha);
        write_dataset(make_artificial(md.data, md.cluster_of, md.centers, factor), out, labels);
    } else if (kind == "mixture") {
        if (spec_path.empty()) throw std::runtime_error("--spec is required for kind=mixture");
        const auto spec = read_mixture_spec(spec_path, seed, n, d);
        auto [ds, assign] = gen_mixture(spec);
        ds.labels.assign(assign.begin(), assign.end()); // cluster ids, not outlier flags
        for (auto& l : ds.labels) l = l > 0 ? 1 : 0;
        write_dataset(ds, out, labels);
    } else {
        throw std::runtime_error("unknown kind '" + kind + "'");
    }
    return 0;
}

int cmd_score(const std::string& input, const std::string& method, const std::string& rho_text,
              std::optional<std::size_t> k, double epsilon, double delta, std::size_t bins,
              double c, std::uint64_t seed, unsigned threads, bool pre_shuffle,
              const std::string& out) {
    const bool is_cfof = method == "cfof" || method == "fast-cfof";
    if (is_cfof && k) throw std::runtime_error("--k does not apply to " + method);
    if (!is_cfof && !k) throw std::runtime_error("--k is required for " + method);

    ScoreSet ss;
    if (method == "fast-cfof") {
        FastParams params;
        params.rho_list = parse_rho_list(rho_text);
        params.epsilon = epsilon;
        params.delta = delta;
        params.bins = bins;
        params.c = c;
        params.seed = seed;
        params.threads = threads;
        params.pre_shuffle = pre_shuffle;
        ss = has_suffix(input, ".bin") ? fast_cfof_file(input, params)
                                       : fast_cfof(load_csv(input), params);
    } else {
        const Dataset ds = load_dataset(input);
        if (method == "cfof") {
            HardCfofOptions opts;
            opts.threads = threads;
            ss = hard_cfof(ds, parse_rho_list(rho_text), opts);
        } else if (method == "odin") {
            ss = odin(ds, *k, threads);
        } else if (method == "antihub2") {
            ss = antihub2(ds, *k, threads);
        } else if (method == "aknn") {
            ss = aknn(ds, *k, threads);
        } else if (method == "lof") {
            ss = lof(ds, *k, threads);
        } else {
            throw std::runtime_error("unknown method '" + method + "'");
        }
    }
    write_scoreset_csv(ss, out);
    return 0;
}

int cmd_eval(const std::string& scores_path, const std::string& ref_path,
             const std::string& labels_path, double alpha, const std::string& metric,
             const std::string& out) {
    const ScoreSet ss = read_scoreset_csv(scores_path);
    std::vector<std::uint8_t> labels;
    if (!labels_path.empty()) labels = load_labels(labels_path);

    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot write " + out);
    os << "method,param,metric,value\n";
    char buf[160];
    auto emit = [&](double param, const char* name, double value) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%s,%.17g", scores_path.c_str(), param, name,
                      value);
        os << buf << '\n';
    };

    if (metric == "dist") {
        // score-distribution table instead of the metric report
        os.close();
        std::ofstream ds(out);
        ds << "param,rank_fraction,sorted_score,cum_score,cum_fraction\n";
        for (std::size_t p = 0; p < ss.params.size(); ++p) {
            const auto sd = score_distribution(ss.scores[p]);
            for (std::size_t i = 0; i < sd.sorted_desc.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g", ss.params[p],
                              sd.rank_fraction[i], sd.sorted_desc[i], sd.cum_score[i],
                              sd.cum_fraction[i]);
                ds << buf << '\n';
            }
        }
        if (!ds) throw std::runtime_error("write failure on " + out);
        return 0;
    }

    for (std::size_t p = 0; p < ss.params.size(); ++p) {
        if (metric == "auc" || metric == "all") {
            if (labels.empty()) throw std::runtime_error("--labels required for auc");
            emit(ss.params[p], "auc", auc(ss.scores[p], labels));
        }
        if (metric == "prec" || metric == "all") {
            if (labels.empty()) throw std::runtime_error("--labels required for prec");
            emit(ss.params[p], "prec", prec_at(ss.scores[p], labels, alpha));
        }
        if (metric == "cr" || metric == "all")
            emit(ss.params[p], "cr", concentration_ratio(ss.scores[p], alpha));
        if (metric == "spearman") {
            if (ref_path.empty()) throw std::runtime_error("--ref required for spearman");
            const ScoreSet ref = read_scoreset_csv(ref_path);
            emit(ss.params[p], "spearman",
                 spearman(ss.scores[p], ref.at_param(ss.params[p])));
        }
    }
    if (!os) throw std::runtime_error("write failure on " + out);
    return 0;
}

int cmd_theory(const std::string& what, double kappa, double rho, double z0,
               const std::string& pis_text, const std::string& kappas_text, double alpha,
               std::size_t steps, const std::string& out) {
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot write " + out);
    char buf[160];
    if (what == "dist") {
        os << "s,cdf,pdf\n";
        for (std::size_t i = 1; i < steps; ++i) {
            const double s = static_cast<double>(i) / static_cast<double>(steps);
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g", s, cfof_cdf(s, kappa, rho),
                          cfof_pdf(s, kappa, rho));
            os << buf << '\n';
        }
    } else if (what == "expected") {
        os << "z,score\n";
        for (std::size_t i = 0; i <= steps; ++i) {
            const double z = -4.0 + 8.0 * static_cast<double>(i) / static_cast<double>(steps);
            std::snprintf(buf, sizeof buf, "%.17g,%.17g", z, cfof_expected(kappa, rho, z));
            os << buf << '\n';
        }
    } else if (what == "separation") {
        os << "kappa,rho,z0,separation\n";
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g", kappa, rho, z0,
                      separation(kappa, rho, z0));
        os << buf << '\n';
    } else if (what == "allocation") {
        const auto pis = parse_rho_list(pis_text);
        const auto kappas = parse_rho_list(kappas_text);
        const auto shares = cluster_allocation(pis, kappas, rho, alpha);
        os << "cluster,weight,kappa,alpha_share\n";
        for (std::size_t i = 0; i < shares.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g", i, pis[i], kappas[i],
                          shares[i]);
            os << buf << '\n';
        }
    } else {
        throw std::runtime_error("unknown theory table '" + what + "'");
    }
    if (!os) throw std::runtime_error("write failure on " + out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Concentration Free Outlier Factor toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate synthetic datasets");
    std::string kind, gen_out, gen_labels, gen_spec;
    std::size_t gen_n = 1000, gen_d = 10;
    std::uint64_t gen_seed = 0;
    double gen_alpha = 0.05, gen_factor = 0.2;
    gen->add_option("--kind", kind, "unimodal|clust2|multimodal|multimodal-art|mixture")
        ->required();
    gen->add_option("--n", gen_n, "points");
    gen->add_option("--d", gen_d, "dimensionality");
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--alpha", gen_alpha, "outlier fraction (multimodal)");
    gen->add_option("--factor", gen_factor, "artificial displacement factor");
    gen->add_option("--out", gen_out, "output dataset (.bin or .csv)")->required();
    gen->add_option("--labels", gen_labels, "labels output path");
    gen->add_option("--spec", gen_spec, "mixture spec JSON");

    // score
    auto* score = app.add_subcommand("score", "compute outlier scores");
    std::string sc_input, sc_method, sc_out, sc_rho = "0.001,0.005,0.01,0.05,0.1";
    std::optional<std::size_t> sc_k;
    double sc_eps = 0.01, sc_delta = 0.01, sc_c = 0.0;
    std::size_t sc_bins = 1000;
    std::uint64_t sc_seed = 0;
    unsigned sc_threads = env_threads();
    bool sc_shuffle = false;
    score->add_option("--input", sc_input, "dataset (.bin or .csv)")->required();
    score->add_option("--method", sc_method, "cfof|fast-cfof|odin|antihub2|aknn|lof")
        ->required();
    score->add_option("--rho", sc_rho, "comma list of rho values");
    score->add_option("--k", sc_k, "neighborhood width (baselines)");
    score->add_option("--epsilon", sc_eps, "absolute error");
    score->add_option("--delta", sc_delta, "error probability");
    score->add_option("--bins", sc_bins, "histogram bins");
    score->add_option("--c", sc_c, "k_up slack constant in [0,3]");
    score->add_option("--seed", sc_seed, "RNG seed");
    score->add_option("--threads", sc_threads, "worker threads (default CFOF_THREADS or all)");
    score->add_flag("--pre-shuffle", sc_shuffle, "randomize row order before partitioning");
    score->add_option("--out", sc_out, "scores CSV output")->required();

    // eval
    auto* ev = app.add_subcommand("eval", "evaluate score files");
    std::string ev_scores, ev_ref, ev_labels, ev_metric = "all", ev_out;
    double ev_alpha = 0.05;
    ev->add_option("--scores", ev_scores, "scores CSV")->required();
    ev->add_option("--ref", ev_ref, "reference scores CSV (spearman)");
    ev->add_option("--labels", ev_labels, "ground truth labels");
    ev->add_option("--alpha", ev_alpha, "top fraction for prec/cr");
    ev->add_option("--metric", ev_metric, "auc|prec|spearman|cr|all|dist");
    ev->add_option("--out", ev_out, "report CSV output")->required();

    // theory
    auto* th = app.add_subcommand("theory", "closed-form score distribution tables");
    std::string th_what = "dist", th_pis, th_kappas, th_out;
    double th_kappa = 3.0, th_rho = 0.01, th_z0 = 0.0, th_alpha = 0.05;
    std::size_t th_steps = 200;
    th->add_option("--what", th_what, "dist|expected|separation|allocation");
    th->add_option("--kappa", th_kappa, "kurtosis");
    th->add_option("--rho", th_rho, "neighborhood fraction");
    th->add_option("--z0", th_z0, "tail start (separation)");
    th->add_option("--pis", th_pis, "mixture weights, comma list (allocation)");
    th->add_option("--kappas", th_kappas, "mixture kurtoses, comma list (allocation)");
    th->add_option("--alpha", th_alpha, "outlier fraction (allocation)");
    th->add_option("--steps", th_steps, "table resolution");
    th->add_option("--out", th_out, "table CSV output")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_gen(kind, gen_n, gen_d, gen_seed, gen_alpha, gen_factor, gen_out,
                           gen_labels, gen_spec);
        if (score->parsed())
            return cmd_score(sc_input, sc_method, sc_rho, sc_k, sc_eps, sc_delta, sc_bins, sc_c,
                             sc_seed, sc_threads, sc_shuffle, sc_out);
        if (ev->parsed())
            return cmd_eval(ev_scores, ev_ref, ev_labels, ev_alpha, ev_metric, ev_out);
        if (th->parsed())
            return cmd_theory(th_what, th_kappa, th_rho, th_z0, th_pis, th_kappas, th_alpha,
                              th_steps, th_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
