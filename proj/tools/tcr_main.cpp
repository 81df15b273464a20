#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "tcr/pipeline.hpp"

namespace {

void add_common(CLI::App* cmd, tcr::RunConfig& cfg, std::string& dims) {
    cmd->add_option("--in", cfg.input, "input file")->required();
    cmd->add_option("--format", cfg.format, "edges | contacts | xyz | redshift");
    cmd->add_option("--tau-u", cfg.tau_u, "upper birth threshold")->required();
    cmd->add_option("--epsilon", cfg.epsilon, "persistence threshold")->required();
    cmd->add_option("--dims", dims, "homology dims: 1, 2 or 1,2");
    cmd->add_option("--n-pert", cfg.n_pert, "perturbations per cover");
    cmd->add_option("--n-perm", cfg.n_perm, "permutations per perturbation");
    cmd->add_option("--seed", cfg.seed, "rng seed");
    cmd->add_option("--threads", cfg.threads, "worker threads");
    cmd->add_option("--batch-size", cfg.batch_size, "serial-parallel batch size");
    cmd->add_option("--out", cfg.out_dir, "output directory")->required();
    cmd->add_option("--simplex-budget", cfg.budgets.max_simplices, "max simplex count");
    cmd->add_option("--recursion-budget", cfg.budgets.max_recursion_ops,
                    "max reduction ops per birth cycle");
    cmd->add_option("--m-max", cfg.budgets.m_max, "max perturbation halvings");
    cmd->add_option("--hubble", cfg.hubble, "Hubble constant, km/s/Mpc");
    cmd->add_option("--redshift-class", cfg.redshift_class,
                    "catalog class to keep (-1 keeps all)");
    cmd->add_option("--n-samples", cfg.n_samples, "random samples per bank");
    cmd->add_flag("--bindist-report", cfg.bindist_report,
                  "emit bin-distance statistics for contact input");
}

std::vector<int> parse_dims(const std::string& dims) {
    std::vector<int> out;
    for (char c : dims) {
        if (c == '1') out.push_back(1);
        if (c == '2') out.push_back(2);
    }
    if (out.empty()) throw CLI::ValidationError("--dims", "expected 1, 2 or 1,2");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"persistence diagrams and tight representative cycles for sparse metric data"};
    app.require_subcommand(1);

    tcr::RunConfig cfg;
    if (const char* env = std::getenv("TCR_THREADS")) cfg.threads = std::atoi(env);
    std::string dims = "1";

    CLI::App* pd = app.add_subcommand("pd", "persistence diagram");
    CLI::App* cycles = app.add_subcommand("cycles", "birth, shortened and smoothed cycles");
    CLI::App* localize = app.add_subcommand("localize", "covers, contraction and refinement");
    CLI::App* stats = app.add_subcommand("stats", "feature tables and pseudo p-values");
    for (CLI::App* cmd : {pd, cycles, localize, stats}) add_common(cmd, cfg, dims);

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.dims = parse_dims(dims);
        if (pd->parsed()) return tcr::cmd_pd(cfg);
        if (cycles->parsed()) return tcr::cmd_cycles(cfg);
        if (localize->parsed()) return tcr::cmd_localize(cfg);
        if (stats->parsed()) return tcr::cmd_stats(cfg);
    } catch (const tcr::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const tcr::InvalidInput& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const tcr::BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 1;
}
