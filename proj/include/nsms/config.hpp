#ifndef NSMS_CONFIG_HPP
#define NSMS_CONFIG_HPP

#include <cstdint>
#include <string>

#include "nsms/errors.hpp"
#include "nsms/grid.hpp"
#include "nsms/ms_step.hpp"
#include "nsms/ns_step.hpp"

namespace nsms {

enum class PhaseShape { Stripe, Disk, File };
enum class VelocityInit { Zero, Shear, File };

// Flat key = value sections: [grid], [physics], [scheme], [initial], [output].
// Unknown keys are errors.
struct RunConfig {
    // [grid]
    int n = 64;
    double L = 1.0;

    // [physics]
    double nu_minus = 1.0;
    double nu_plus = 1.0;
    double kappa = 1.0;  // surface tension
    double m = 1.0;      // mobility

    // [scheme]
    double h = 5e-4;
    double T = 0.0;          // horizon, required
    double delta = 0.0;      // 0 -> 2 dx
    double dt_diffuse = 0.0; // Model H step for sweeps, 0 -> h
    AnnealConfig anneal;
    double picard_tol = 1e-8;
    int picard_max = 50;
    double cg_tol = 1e-10;
    int cg_max = 400;

    // [initial]
    PhaseShape phase_shape = PhaseShape::Stripe;
    double stripe_fraction = 0.5;
    double disk_radius = 0.2;
    double disk_cx = -1.0;  // negative -> center of the box
    double disk_cy = -1.0;
    std::string phase_file;
    VelocityInit velocity = VelocityInit::Zero;
    double velocity_amplitude = 1.0;
    std::string velocity_file_x;
    std::string velocity_file_y;
    std::uint64_t seed = 1;

    // [output]
    std::string directory = ".";
    int dump_every = 0;  // 0 disables field dumps
    std::string ledger_path = "ledger.csv";
    std::string anneal_trace_path;  // empty disables the per-proposal trace CSV

    Grid make_grid() const { return Grid(n, L); }
    double resolved_delta() const { return delta > 0.0 ? delta : 2.0 * L / n; }
    double resolved_dt_diffuse() const { return dt_diffuse > 0.0 ? dt_diffuse : h; }
    MsStepConfig ms_config() const;
    NsStepConfig ns_config() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

}  // namespace nsms

#endif
