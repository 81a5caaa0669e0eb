#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qjsd/cli.hpp"

namespace {

using qjsd::cli::RunConfig;

void add_common(CLI::App& sub, RunConfig& c)
{
    sub.add_option("--dim", c.dim, "Hilbert space dimension")->check(CLI::PositiveNumber);
    sub.add_option("--seed", c.seed, "Master random seed");
    sub.add_option("--out", c.out, "Output path or prefix");
}

void add_schedule(CLI::App& sub, RunConfig& c)
{
    sub.add_option("--t-initial", c.schedule.t_initial, "Starting temperature");
    sub.add_option("--t-final", c.schedule.t_final, "Final temperature");
    sub.add_option("--cooling-ratio", c.schedule.cooling_ratio, "Geometric cooling factor");
    sub.add_option("--steps-per-temperature", c.schedule.steps_per_temperature, "0 selects 200 x parameter count");
    sub.add_option("--proposal-scale-ratio", c.schedule.proposal_scale_ratio, "Proposal std over temperature");
}

} // namespace

int main(int argc, char** argv)
{
    RunConfig c;
    CLI::App app{"Quantum Jensen-Shannon divergence: triangle-inequality audit and annealing search"};
    app.require_subcommand(1);

    double floor = 0.0;
    std::string objective = "symmetrized";

    auto* audit = app.add_subcommand("audit", "Monte Carlo triangle-defect audit");
    add_common(*audit, c);
    audit->add_option("--samples", c.samples, "Number of triplets");
    audit->add_option("--workers", c.workers, "Worker threads")->check(CLI::PositiveNumber);
    audit->add_option("--bin-width", c.bin_width, "Histogram bin width");
    audit->add_option("--tail-max", c.tail_max, "Histogram covers [-tail-max, tail-max)");
    audit->add_option("--tolerance", c.tolerance, "Defects below -tolerance are violations");
    auto* audit_floor = audit->add_option("--mixedness-floor", floor, "Minimum linear entropy of sampled states");

    auto* anneal = app.add_subcommand("anneal", "Simulated-annealing search for the smallest defect");
    add_common(*anneal, c);
    add_schedule(*anneal, c);
    anneal->add_option("--objective", objective, "single or symmetrized");
    anneal->add_option("--restarts", c.restarts, "Independent chains");
    anneal->add_option("--workers", c.workers, "Worker threads")->check(CLI::PositiveNumber);

    auto* compare = app.add_subcommand("compare", "Distances between two state files");
    compare->add_option("files", c.inputs, "Two state files")->required()->expected(2);
    compare->add_option("--seed", c.seed, "Seed for random measurement bases");

    auto* sample = app.add_subcommand("sample", "Draw random states");
    add_common(*sample, c);
    sample->add_option("--samples", c.samples, "Number of states");
    auto* sample_floor = sample->add_option("--mixedness-floor", floor, "Minimum linear entropy");

    auto* purescan = app.add_subcommand("purescan", "Grid check of the pure-state triangle inequality");
    purescan->add_option("--grid-steps", c.grid_steps, "Grid resolution");

    // per-subcommand defaults that differ from the struct defaults
    sample->preparse_callback([&](std::size_t) { c.samples = 1; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int status = app.exit(e);
        return status == 0 ? 0 : qjsd::cli::kExitUsage;
    }

    c.subcommand = app.get_subcommands().front()->get_name();
    if (audit_floor->count() + sample_floor->count() > 0) c.mixedness_floor = floor;
    try {
        c.objective = qjsd::objective_from_string(objective);
    } catch (const qjsd::InvalidConfig& e) {
        std::cerr << e.what() << "\n";
        return qjsd::cli::kExitUsage;
    }
    return qjsd::cli::run(c, std::cout, std::cerr);
}
