#ifndef NSMS_DRIVER_HPP
#define NSMS_DRIVER_HPP

#include <string>
#include <vector>

#include "nsms/config.hpp"
#include "nsms/model_h.hpp"
#include "nsms/ms_step.hpp"
#include "nsms/ns_step.hpp"

namespace nsms {

struct LedgerRow {
    double t = 0.0;
    double kinetic = 0.0;      // 1/2 ||v||^2
    double perimeter = 0.0;    // mollified TV of chi
    double grad_mu_sq = 0.0;   // ||grad mu0||^2
    double viscous = 0.0;      // int nu |grad v|^2
    double fh_initial = 0.0;
    double fh_final = 0.0;
    double lambda = 0.0;
    double gibbs_thomson_residual = 0.0;
};

struct EnergyLedger {
    std::vector<LedgerRow> rows;  // rows[0] holds the initial state at t = 0

    std::string to_csv() const;  // header row + 17 significant digits
    static EnergyLedger from_csv(const std::string& text);
};

struct LedgerVerdict {
    bool ok = true;
    long first_bad_row = -1;
    std::string reason;
};

struct RunResult {
    EnergyLedger ledger;
    BinaryPhase chi_final;
    VectorField v_final;
};

BinaryPhase initial_phase(const RunConfig& cfg, const Grid& g);
VectorField initial_velocity(const RunConfig& cfg, const SpectralOps& ops);

// The coupled time-discrete loop: per step, the Mullins-Sekerka minimizing
// movement first (chi(t), mu0(t), lambda(t) from v(t-h), chi(t-h)), then the
// Navier-Stokes step (v(t) from v(t-h), chi(t), mu(t)). Asserts the per-step
// energy inequalities and the summed ledger inequality; deterministic for a
// fixed config. When write_outputs is set, the ledger CSV and any field dumps
// land in cfg.directory.
RunResult run_coupled(const RunConfig& cfg, bool write_outputs = true);

// Pre-Gronwall summed inequality plus the per-step laws that are recoverable
// from ledger columns alone. kappa and m must match the generating run.
LedgerVerdict energy_ledger_check(const EnergyLedger& ledger, double kappa, double m);
LedgerVerdict energy_ledger_check(const EnergyLedger& ledger, const RunConfig& cfg);

struct SweepEntry {
    double eps = 0.0;
    double sym_diff_area = 0.0;   // |{threshold(c_T) != chi_T}| * dx^2
    double e_eps = 0.0;           // Ginzburg-Landau energy at T
    double e_per_length = 0.0;    // e_eps / interface length
    double kappa_ratio = 0.0;     // e_per_length / Modica-Mortola kappa
};

struct SweepReport {
    std::vector<SweepEntry> entries;
    bool monotone = true;      // sym-diff non-increasing in the given order, one-cell-band slack
    double band_area = 0.0;    // slack used for the monotonicity call
};

// Model H runs at each interface width from the same sharp initial data
// (optimal-profile smoothing of chi0), cross-checked against the
// minimizing-movement interface at the horizon. eps_list must be decreasing
// and every entry must satisfy eps >= 3 dx (ResolutionError otherwise).
SweepReport sharp_limit_experiment(const RunConfig& cfg, const std::vector<double>& eps_list);

std::string sweep_report_csv(const SweepReport& rep);

}  // namespace nsms

#endif
