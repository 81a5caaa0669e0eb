#pragma once

// Subcommands behind the qjsd command-line tool. Parsing lives in the tool
// itself; everything here takes a filled RunConfig and writes to streams so it
// can be driven from tests.

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qjsd/anneal.hpp"
#include "qjsd/audit.hpp"
#include "qjsd/divergences.hpp"
#include "qjsd/log.hpp"
#include "qjsd/pure_states.hpp"
#include "qjsd/state_io.hpp"
#include "qjsd/states.hpp"

namespace qjsd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCounterexample = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitData = 65;
inline constexpr int kExitIo = 74;

inline constexpr double kCounterexampleTol = 1e-9;
inline constexpr double kPureScanTol = 1e-12;
inline constexpr double kPurityTol = 1e-10;

struct RunConfig {
    std::string subcommand;
    std::size_t dim = 2;
    std::uint64_t samples = 100'000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    double bin_width = 0.002;
    double tail_max = 0.2;
    double tolerance = 1e-9;
    std::optional<double> mixedness_floor;
    Objective objective = Objective::symmetrized;
    int restarts = 5;
    int grid_steps = 25;
    AnnealSchedule schedule;  // steps_per_temperature == 0: standard schedule
    std::vector<std::string> inputs;
    std::string out;
};

namespace detail {

inline void write_text(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path);
    f << text;
    if (!f) throw IoError("write failed for " + path);
}

// Dominant eigenvector of a state whose purity is 1 up to rounding.
inline PureState as_pure(const DensityMatrix& rho)
{
    const auto& e = rho.eigen();
    return PureState::normalized(e.vectors.column(rho.dim() - 1));
}

} // namespace detail

inline int cmd_audit(const RunConfig& c, std::ostream& out)
{
    AuditConfig a;
    a.dim = c.dim;
    a.samples = c.samples;
    a.seed = c.seed;
    a.bin_width = c.bin_width;
    a.tail_max = c.tail_max;
    a.tolerance = c.tolerance;
    a.mixedness_floor = c.mixedness_floor;
    a.workers = c.workers;
    const AuditReport r = run_audit(a);
    const std::string report = to_json(r).dump(2) + "\n";

    if (c.out.empty()) {
        out << report;
    } else {
        detail::write_text(c.out + "_report.json", report);
        detail::write_text(c.out + "_histogram.csv", histogram_csv(r.histogram));
        out << "dim=" << r.dim << " samples=" << r.samples << " violations=" << r.violations
            << " min_defect=" << r.min_defect << "\n";
    }
    return r.violations == 0 ? kExitOk : kExitCounterexample;
}

inline int cmd_anneal(const RunConfig& c, std::ostream& out)
{
    AnnealConfig a;
    a.dim = c.dim;
    a.objective = c.objective;
    a.schedule = c.schedule;
    a.seed = c.seed;
    a.restarts = c.restarts;
    a.workers = c.workers;
    const AnnealResult r = run_anneal(a);

    const auto mixed = DensityMatrix::maximally_mixed(c.dim);
    for (std::size_t k = 0; k < r.decoded_states.size(); ++k) {
        log::info("state " + std::to_string(k) + " HS distance to I/N: " +
                  std::to_string(hilbert_schmidt_distance(r.decoded_states[k], mixed)));
    }

    const std::string doc = to_json(r).dump(2) + "\n";
    if (c.out.empty())
        out << doc;
    else {
        detail::write_text(c.out, doc);
        out << "best_objective=" << r.best_objective << " restart=" << r.best_restart << "\n";
    }
    return r.best_objective >= -kCounterexampleTol ? kExitOk : kExitCounterexample;
}

inline nlohmann::json compare_states(const DensityMatrix& rho, const DensityMatrix& sigma, std::uint64_t seed)
{
    check_same_dim(rho, sigma);
    nlohmann::json t = {
        {"dim", rho.dim()},
        {"qjsd", qjsd(rho, sigma)},
        {"qjsd_spectral", qjsd_spectral(rho, sigma)},
        {"qjsd_sqrt", qjsd_sqrt(rho, sigma)},
        {"hilbert_schmidt", hilbert_schmidt_distance(rho, sigma)},
        {"fidelity", fidelity(rho, sigma)},
        {"d_h_closed_form", d_h_closed_form(rho, sigma)},
        {"djs1_lower_bound", djs1_lower_bound(rho, sigma, 16, seed)},
    };
    if (rho.purity() > 1.0 - kPurityTol && sigma.purity() > 1.0 - kPurityTol) {
        t["wootters"] = wootters_distance(detail::as_pure(rho), detail::as_pure(sigma));
    }
    return t;
}

inline int cmd_compare(const RunConfig& c, std::ostream& out)
{
    if (c.inputs.size() != 2) throw InvalidConfig("compare needs exactly two state files");
    const auto rho = read_state_file(c.inputs[0]);
    const auto sigma = read_state_file(c.inputs[1]);
    out << compare_states(rho, sigma, c.seed).dump(2) << "\n";
    return kExitOk;
}

/// Writes `<out>_<i>.json` per state, or a JSON array on `out` when no path is set.
inline int cmd_sample(const RunConfig& c, std::ostream& out)
{
    StateSampler sampler(c.dim, c.seed, c.mixedness_floor);
    std::string array = "[";
    for (std::uint64_t i = 0; i < c.samples; ++i) {
        const auto rho = sample_state(sampler);
        if (c.out.empty())
            array += (i ? ",\n " : "") + state_to_json(rho);
        else
            write_state_file(c.out + "_" + std::to_string(i) + ".json", rho);
    }
    if (c.out.empty()) out << array << "]\n";
    return kExitOk;
}

inline int cmd_purescan(const RunConfig& c, std::ostream& out)
{
    const auto r = pure_triangle_scan(c.grid_steps);
    const nlohmann::json doc = {
        {"grid_steps", c.grid_steps},
        {"evaluated", r.evaluated},
        {"min_g", r.min_g},
        {"x", r.x},
        {"y", r.y},
        {"z", r.z},
        {"a", {r.a.real(), r.a.imag()}},
        {"b", {r.b.real(), r.b.imag()}},
    };
    out << doc.dump(2) << "\n";
    return r.min_g >= -kPureScanTol ? kExitOk : kExitCounterexample;
}

/// Runs one subcommand and maps library errors onto exit statuses.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    try {
        if (c.subcommand == "audit") return cmd_audit(c, out);
        if (c.subcommand == "anneal") return cmd_anneal(c, out);
        if (c.subcommand == "compare") return cmd_compare(c, out);
        if (c.subcommand == "sample") return cmd_sample(c, out);
        if (c.subcommand == "purescan") return cmd_purescan(c, out);
        throw InvalidConfig("unknown subcommand '" + c.subcommand + "'");
    } catch (const InvalidConfig& e) {
        err << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        err << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        // ParseError, DimMismatch and every validation failure of input data
        err << e.what() << "\n";
        return kExitData;
    }
}

} // namespace qjsd::cli
