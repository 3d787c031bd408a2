#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nsms/driver.hpp"
#include "nsms/field_io.hpp"

namespace {

std::vector<double> parse_eps_list(const std::string& s) {
    std::vector<double> eps;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        eps.push_back(std::stod(item));
    }
    return eps;
}

int cmd_run(const std::string& config_path) {
    const nsms::RunConfig cfg = nsms::parse_config_file(config_path);
    const nsms::RunResult res = nsms::run_coupled(cfg);
    const nsms::LedgerRow& last = res.ledger.rows.back();
    std::printf("steps: %zu\n", res.ledger.rows.size() - 1);
    std::printf("final t: %.6g  kinetic: %.6g  perimeter: %.6g  lambda: %.6g\n", last.t, last.kinetic,
                last.perimeter, last.lambda);
    std::printf("ledger: %s/%s\n", cfg.directory.c_str(), cfg.ledger_path.c_str());
    return 0;
}

int cmd_check_ledger(const std::string& csv_path, double kappa, double m) {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw nsms::ConfigError("cannot open " + csv_path);
    std::stringstream ss;
    ss << in.rdbuf();
    const nsms::EnergyLedger ledger = nsms::EnergyLedger::from_csv(ss.str());
    const nsms::LedgerVerdict verdict = nsms::energy_ledger_check(ledger, kappa, m);
    if (verdict.ok) {
        std::printf("ok: %zu rows satisfy the ledger inequalities\n", ledger.rows.size());
        return 0;
    }
    std::printf("violation at row %ld: %s\n", verdict.first_bad_row, verdict.reason.c_str());
    return 3;
}

int cmd_sweep(const std::string& config_path, const std::string& eps_arg) {
    const nsms::RunConfig cfg = nsms::parse_config_file(config_path);
    const std::vector<double> eps = parse_eps_list(eps_arg);
    const nsms::SweepReport rep = nsms::sharp_limit_experiment(cfg, eps);
    std::printf("%-10s %-16s %-14s %-14s %-12s\n", "eps", "sym_diff_area", "E_eps", "E/length", "E/length/kappa");
    for (const nsms::SweepEntry& e : rep.entries)
        std::printf("%-10.4g %-16.8g %-14.8g %-14.8g %-12.6g\n", e.eps, e.sym_diff_area, e.e_eps, e.e_per_length,
                    e.kappa_ratio);
    std::printf("monotone within one cell band (%.4g): %s\n", rep.band_area, rep.monotone ? "yes" : "no");
    std::filesystem::create_directories(cfg.directory);
    std::ofstream out(cfg.directory + "/sweep.csv", std::ios::binary | std::ios::trunc);
    out << nsms::sweep_report_csv(rep);
    std::printf("report: %s/sweep.csv\n", cfg.directory.c_str());
    return 0;
}

int cmd_dump_view(const std::string& field_path, std::string out_path) {
    const nsms::LoadedField lf = nsms::load_field(field_path, 1.0);
    if (out_path.empty()) out_path = field_path + ".pgm";
    nsms::write_pgm(out_path, lf.field);
    std::printf("wrote %s (%dx%d, kind '%c')\n", out_path.c_str(), lf.field.n(), lf.field.n(), lf.kind);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nsms - sharp-interface two-phase flow on the periodic torus"};
    app.require_subcommand(1);

    std::string config_path, csv_path, eps_arg, field_path, out_path;
    double kappa = 1.0, m = 1.0;

    CLI::App* run = app.add_subcommand("run", "run the coupled time-discrete scheme");
    run->add_option("config", config_path, "config file")->required();

    CLI::App* check = app.add_subcommand("check-ledger", "verify the energy inequalities of a ledger CSV");
    check->add_option("csv", csv_path, "ledger CSV")->required();
    check->add_option("--kappa", kappa, "surface tension used by the run (default 1)");
    check->add_option("--m", m, "mobility used by the run (default 1)");

    CLI::App* sweep = app.add_subcommand("sweep-eps", "diffuse-interface cross-validation sweep");
    sweep->add_option("config", config_path, "config file")->required();
    sweep->add_option("--eps", eps_arg, "comma-separated decreasing interface widths")->required();

    CLI::App* view = app.add_subcommand("dump-view", "render a field dump as PGM");
    view->add_option("field", field_path, "field dump file")->required();
    view->add_option("-o,--out", out_path, "output PGM path");

    try {
        app.parse(argc, argv);
        if (run->parsed()) return cmd_run(config_path);
        if (check->parsed()) return cmd_check_ledger(csv_path, kappa, m);
        if (sweep->parsed()) return cmd_sweep(config_path, eps_arg);
        if (view->parsed()) return cmd_dump_view(field_path, out_path);
        return 2;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const nsms::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const nsms::ResolutionError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const nsms::NoConvergenceError& e) {
        std::fprintf(stderr, "solver did not converge: %s\n", e.what());
        return 4;
    } catch (const nsms::LedgerViolationError& e) {
        std::fprintf(stderr, "energy assertion failed: %s\n", e.what());
        return 3;
    } catch (const nsms::MassMismatchError& e) {
        std::fprintf(stderr, "assertion failed: %s\n", e.what());
        return 3;
    } catch (const nsms::DegeneratePhaseError& e) {
        std::fprintf(stderr, "assertion failed: %s\n", e.what());
        return 3;
    } catch (const nsms::CompatibilityError& e) {
        std::fprintf(stderr, "assertion failed: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
