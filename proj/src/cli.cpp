#include "spgsim/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "spgsim/apps.hpp"
#include "spgsim/matrix_market.hpp"
#include "spgsim/report.hpp"

namespace spgsim {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitVerifyFailed = 2;
constexpr int kExitUsage = 64;

struct TopoFlags {
    std::string topo_path;
    double alpha_li = -1, alpha_gi = -1, beta_li = -1, beta_gi = -1;
    int index_width = -1, value_width = -1;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--topo", topo_path, "topology config file (.json or .toml)");
        cmd->add_option("--alpha-li", alpha_li, "intranode latency override, seconds");
        cmd->add_option("--alpha-gi", alpha_gi, "internode latency override, seconds");
        cmd->add_option("--beta-li", beta_li, "intranode bandwidth override, bytes/s");
        cmd->add_option("--beta-gi", beta_gi, "internode bandwidth override, bytes/s");
        cmd->add_option("--index-width", index_width, "bytes per index");
        cmd->add_option("--value-width", value_width, "bytes per value");
    }

    // File first, then explicit flags on top.
    TopologySpec resolve(int procs, int gpus_per_node) const {
        TopologySpec t = topo_path.empty() ? TopologySpec::preset()
                                           : TopologySpec::from_file(topo_path);
        if (alpha_li >= 0) t.alpha_li = alpha_li;
        if (alpha_gi >= 0) t.alpha_gi = alpha_gi;
        if (beta_li >= 0) t.beta_li = beta_li;
        if (beta_gi >= 0) t.beta_gi = beta_gi;
        if (index_width > 0) t.index_width = index_width;
        if (value_width > 0) t.value_width = value_width;
        if (gpus_per_node > 0) t.gpus_per_node = gpus_per_node;
        if (t.nodes == 0 && gpus_per_node > 0)
            t.nodes = (procs + gpus_per_node - 1) / gpus_per_node;
        t.validate();
        return t;
    }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << text;
}

Scheme scheme_of(Algo a) {
    switch (a) {
        case Algo::trident: return Scheme::trident;
        case Algo::summa: return Scheme::grid2d;
        case Algo::oned: return Scheme::rows1d;
    }
    return Scheme::grid2d;
}

struct RunArgs {
    std::string algo;
    std::string a_path, b_path;
    bool square = false;
    int procs = 0;
    int gpus_per_node = 4;
    std::uint64_t seed = 0;
    bool verify = false;
    std::string out, ledger_csv, timeline;
    TopoFlags topo;
};

int do_run(const RunArgs& args) {
    const Algo algo = algo_from_name(args.algo);
    const CsrMatrix a = read_matrix_market(args.a_path);
    const CsrMatrix b = args.square ? a : read_matrix_market(args.b_path);
    const TopologySpec topo = args.topo.resolve(args.procs, args.gpus_per_node);

    const DriverResult dr = run_algo(algo, a, b, args.procs, args.gpus_per_node, topo);

    std::optional<bool> verified;
    if (args.verify) verified = allclose(dr.c, spgemm_local(a, b), 1e-12);

    RunConfig cfg;
    cfg.algo = args.algo;
    cfg.procs = args.procs;
    cfg.gpus_per_node = args.gpus_per_node;
    cfg.topology = topo;
    cfg.matrix_a = args.a_path;
    cfg.matrix_b = args.square ? "" : args.b_path;
    cfg.square = args.square;
    cfg.seed = args.seed;
    const TileMap cmap = make_tile_map(dr.c.nrows, dr.c.ncols, scheme_of(algo), args.procs,
                                       algo == Algo::trident ? args.gpus_per_node : 1);
    const RunReport rep = make_report(std::move(cfg), dr, &cmap, verified);

    if (args.out.empty())
        std::cout << rep.to_json() << '\n';
    else
        write_text(args.out, rep.to_json() + "\n");
    if (!args.ledger_csv.empty()) write_text(args.ledger_csv, dr.ledger.to_csv());
    if (!args.timeline.empty()) write_text(args.timeline, dr.timeline.to_jsonl());

    if (verified.has_value() && !*verified) {
        std::cerr << "verification FAILED against the serial kernel\n";
        return kExitVerifyFailed;
    }
    return kExitOk;
}

struct CompareArgs {
    std::vector<std::string> algos;
    std::string a_path, b_path;
    bool square = false;
    int procs = 0;
    int gpus_per_node = 4;
    std::string out;
    TopoFlags topo;
};

int do_compare(const CompareArgs& args) {
    const CsrMatrix a = read_matrix_market(args.a_path);
    const CsrMatrix b = args.square ? a : read_matrix_market(args.b_path);
    const TopologySpec topo = args.topo.resolve(args.procs, args.gpus_per_node);

    std::vector<DriverResult> results;
    for (const auto& name : args.algos)
        results.push_back(
            run_algo(algo_from_name(name), a, b, args.procs, args.gpus_per_node, topo));

    std::ostringstream csv;
    csv << "process";
    for (const auto& name : args.algos) csv << ',' << name << "_gi_nnz";
    csv << '\n';
    for (int p = 0; p < args.procs; ++p) {
        csv << p;
        for (const auto& r : results) csv << ',' << r.ledger.sent(p, LinkClass::GI).nnz;
        csv << '\n';
    }
    csv << "TOTAL";
    std::vector<std::uint64_t> totals;
    for (const auto& r : results) {
        totals.push_back(r.ledger.total_sent(LinkClass::GI).nnz);
        csv << ',' << totals.back();
    }
    csv << '\n';
    // Pairwise summary ratios against the first algorithm; the
    // summa-over-trident ratio is the headline number.
    for (std::size_t i = 0; i < args.algos.size(); ++i)
        for (std::size_t k = 0; k < args.algos.size(); ++k) {
            if (i == k) continue;
            if (totals[k] == 0) continue;
            csv << "ratio_" << args.algos[i] << "_over_" << args.algos[k] << "_gi_nnz,"
                << static_cast<double>(totals[i]) / static_cast<double>(totals[k]) << '\n';
        }

    if (args.out.empty())
        std::cout << csv.str();
    else
        write_text(args.out, csv.str());
    return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"deterministic simulator for hierarchy-aware distributed SpGEMM"};
    app.require_subcommand(1);

    // --- gen ---
    auto* gen = app.add_subcommand("gen", "write a synthetic matrix as Matrix Market");
    std::vector<double> er, block_diag;
    std::vector<index_t> banded, uniform;
    index_t arrowhead = 0;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen->add_option("--er", er, "Erdos-Renyi: N DENSITY")->expected(2);
    gen->add_option("--banded", banded, "band matrix: N HALFWIDTH")->expected(2);
    gen->add_option("--block-diag", block_diag, "block diagonal: N NBLOCKS DENSITY")->expected(3);
    gen->add_option("--arrowhead", arrowhead, "arrowhead matrix: N");
    gen->add_option("--uniform", uniform, "uniform stride pattern: N ROW_NNZ")->expected(2);
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--out", gen_out, "output path")->required();

    // --- run ---
    RunArgs run_args;
    auto* run = app.add_subcommand("run", "run one distributed SpGEMM simulation");
    run->add_option("--algo", run_args.algo, "algorithm")
        ->required()
        ->check(CLI::IsMember({"trident", "summa", "oned"}));
    run->add_option("--a", run_args.a_path, "left operand (Matrix Market)")->required();
    run->add_option("--b", run_args.b_path, "right operand (Matrix Market)");
    run->add_flag("--square", run_args.square, "square the left operand (B = A)");
    run->add_option("--procs", run_args.procs, "simulated process count")->required();
    run->add_option("--gpus-per-node", run_args.gpus_per_node, "GPUs per node (lambda)");
    run->add_option("--seed", run_args.seed, "seed echoed into the report");
    run->add_flag("--verify", run_args.verify, "check the result against the serial kernel");
    run->add_option("--out", run_args.out, "report JSON path (stdout when omitted)");
    run->add_option("--ledger-csv", run_args.ledger_csv, "per-process ledger CSV path");
    run->add_option("--timeline", run_args.timeline, "event timeline JSONL path");
    run_args.topo.add_to(run);

    // --- compare ---
    CompareArgs cmp_args;
    auto* cmp = app.add_subcommand("compare", "run several algorithms on identical inputs");
    cmp->add_option("--algos", cmp_args.algos, "comma-separated algorithms")
        ->required()
        ->delimiter(',')
        ->check(CLI::IsMember({"trident", "summa", "oned"}));
    cmp->add_option("--a", cmp_args.a_path, "left operand")->required();
    cmp->add_option("--b", cmp_args.b_path, "right operand");
    cmp->add_flag("--square", cmp_args.square, "square the left operand");
    cmp->add_option("--procs", cmp_args.procs, "simulated process count")->required();
    cmp->add_option("--gpus-per-node", cmp_args.gpus_per_node, "GPUs per node (lambda)");
    cmp->add_option("--out", cmp_args.out, "comparison CSV path (stdout when omitted)");
    cmp_args.topo.add_to(cmp);

    // --- mcl ---
    std::string mcl_a, mcl_algo = "trident", clusters_out = "clusters.csv", reports_out;
    MclParams mcl_params;
    int mcl_procs = 0, mcl_gpus = 4;
    TopoFlags mcl_topo;
    auto* mclc = app.add_subcommand("mcl", "Markov clustering with a distributed expansion step");
    mclc->add_option("--a", mcl_a, "adjacency matrix (Matrix Market)")->required();
    mclc->add_option("--iters", mcl_params.iterations, "iterations");
    mclc->add_option("--prune", mcl_params.prune_threshold, "pruning threshold");
    mclc->add_option("--inflation", mcl_params.inflation_exponent, "inflation exponent");
    mclc->add_option("--algo", mcl_algo, "expansion driver")
        ->check(CLI::IsMember({"trident", "summa", "oned"}));
    mclc->add_option("--procs", mcl_procs, "simulated process count")->required();
    mclc->add_option("--gpus-per-node", mcl_gpus, "GPUs per node (lambda)");
    mclc->add_option("--clusters-out", clusters_out, "cluster CSV path");
    mclc->add_option("--reports-out", reports_out, "per-iteration reports JSON path");
    mcl_topo.add_to(mclc);

    // --- permute ---
    std::string perm_a, perm_out;
    std::uint64_t perm_seed = 0;
    std::vector<std::string> perm_algos;
    int perm_procs = 0, perm_gpus = 4;
    TopoFlags perm_topo;
    auto* perm = app.add_subcommand("permute", "compare drivers before/after a random "
                                               "symmetric permutation");
    perm->add_option("--a", perm_a, "matrix (Matrix Market)")->required();
    perm->add_option("--seed", perm_seed, "permutation seed");
    perm->add_option("--algos", perm_algos, "comma-separated algorithms")
        ->required()
        ->delimiter(',')
        ->check(CLI::IsMember({"trident", "summa", "oned"}));
    perm->add_option("--procs", perm_procs, "simulated process count")->required();
    perm->add_option("--gpus-per-node", perm_gpus, "GPUs per node (lambda)");
    perm->add_option("--out", perm_out, "paired CSV path (stdout when omitted)");
    perm_topo.add_to(perm);

    try {
        app.parse(argc, argv);

        if (gen->parsed()) {
            int given = 0;
            for (const bool f : {!er.empty(), !banded.empty(), !block_diag.empty(),
                                 arrowhead > 0, !uniform.empty()})
                given += f ? 1 : 0;
            if (given != 1)
                throw CLI::ValidationError("gen", "exactly one generator option is required");
            CsrMatrix m;
            if (!er.empty())
                m = gen_erdos_renyi(static_cast<index_t>(er[0]), er[1], gen_seed);
            else if (!banded.empty())
                m = gen_banded(banded[0], banded[1], gen_seed);
            else if (!block_diag.empty())
                m = gen_block_diagonal(static_cast<index_t>(block_diag[0]),
                                       static_cast<index_t>(block_diag[1]), block_diag[2],
                                       gen_seed);
            else if (arrowhead > 0)
                m = gen_arrowhead(arrowhead, gen_seed);
            else
                m = gen_uniform_stride(uniform[0], uniform[1]);
            write_matrix_market(m, gen_out);
            return kExitOk;
        }
        if (run->parsed()) {
            if (run_args.square == !run_args.b_path.empty())
                throw CLI::ValidationError("run", "exactly one of --b and --square is required");
            return do_run(run_args);
        }
        if (cmp->parsed()) {
            if (cmp_args.square == !cmp_args.b_path.empty())
                throw CLI::ValidationError("compare",
                                           "exactly one of --b and --square is required");
            if (cmp_args.algos.size() < 2)
                throw CLI::ValidationError("compare", "need at least two algorithms");
            return do_compare(cmp_args);
        }
        if (mclc->parsed()) {
            const CsrMatrix a = read_matrix_market(mcl_a);
            const TopologySpec topo = mcl_topo.resolve(mcl_procs, mcl_gpus);
            const MclResult res =
                mcl(a, mcl_params, algo_from_name(mcl_algo), mcl_procs, mcl_gpus, topo);
            write_text(clusters_out, res.clusters_csv());
            if (!reports_out.empty()) {
                std::ostringstream all;
                all << "[\n";
                for (std::size_t i = 0; i < res.iteration_reports.size(); ++i)
                    all << res.iteration_reports[i].to_json()
                        << (i + 1 < res.iteration_reports.size() ? ",\n" : "\n");
                all << "]\n";
                write_text(reports_out, all.str());
            }
            std::cout << res.n_clusters << " clusters over " << a.nrows << " vertices\n";
            return kExitOk;
        }
        if (perm->parsed()) {
            const CsrMatrix a = read_matrix_market(perm_a);
            const TopologySpec topo = perm_topo.resolve(perm_procs, perm_gpus);
            std::vector<Algo> algos;
            for (const auto& name : perm_algos) algos.push_back(algo_from_name(name));
            const PermutationStudy study =
                permutation_study(a, perm_seed, algos, perm_procs, perm_gpus, topo);
            if (perm_out.empty())
                std::cout << study.to_csv();
            else
                write_text(perm_out, study.to_csv());
            return kExitOk;
        }
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
}

int cli_main(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("spgsim");
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace spgsim
