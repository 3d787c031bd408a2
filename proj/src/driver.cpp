#include "nsms/driver.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nsms/field_io.hpp"
#include "nsms/geometry.hpp"

namespace nsms {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

constexpr const char* kLedgerHeader =
    "t,kinetic,perimeter,grad_mu_sq,viscous,fh_initial,fh_final,lambda,gibbs_thomson_residual";

}  // namespace

std::string EnergyLedger::to_csv() const {
    std::string out = kLedgerHeader;
    out += '\n';
    for (const LedgerRow& r : rows) {
        out += fmt17(r.t) + ',' + fmt17(r.kinetic) + ',' + fmt17(r.perimeter) + ',' + fmt17(r.grad_mu_sq) + ',' +
               fmt17(r.viscous) + ',' + fmt17(r.fh_initial) + ',' + fmt17(r.fh_final) + ',' + fmt17(r.lambda) + ',' +
               fmt17(r.gibbs_thomson_residual) + '\n';
    }
    return out;
}

EnergyLedger EnergyLedger::from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("ledger csv: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kLedgerHeader) throw ConfigError("ledger csv: unexpected header '" + line + "'");
    EnergyLedger ledger;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        double vals[9];
        for (int i = 0; i < 9; ++i) {
            if (!std::getline(row, cell, ',')) throw ConfigError("ledger csv: short row '" + line + "'");
            vals[i] = std::stod(cell);
        }
        ledger.rows.push_back({vals[0], vals[1], vals[2], vals[3], vals[4], vals[5], vals[6], vals[7], vals[8]});
    }
    return ledger;
}

BinaryPhase initial_phase(const RunConfig& cfg, const Grid& g) {
    switch (cfg.phase_shape) {
        case PhaseShape::Stripe:
            return make_stripe(g, cfg.stripe_fraction);
        case PhaseShape::Disk: {
            const double cx = cfg.disk_cx >= 0.0 ? cfg.disk_cx : 0.5 * g.L;
            const double cy = cfg.disk_cy >= 0.0 ? cfg.disk_cy : 0.5 * g.L;
            return make_disk(g, cx, cy, cfg.disk_radius);
        }
        case PhaseShape::File: {
            const LoadedField lf = load_field(cfg.phase_file, g.L);
            if (lf.field.n() != g.n) throw ConfigError("initial.phase_file grid size does not match grid.n");
            return threshold_field(lf.field, 0.5);
        }
    }
    throw ConfigError("initial_phase: unreachable");
}

VectorField initial_velocity(const RunConfig& cfg, const SpectralOps& ops) {
    const Grid& g = ops.grid();
    switch (cfg.velocity) {
        case VelocityInit::Zero:
            return VectorField(g);
        case VelocityInit::Shear: {
            VectorField v(g);
            for (int iy = 0; iy < g.n; ++iy) {
                const double s = cfg.velocity_amplitude * std::sin(2.0 * M_PI * g.y(iy) / g.L);
                for (int ix = 0; ix < g.n; ++ix) v.x.at(ix, iy) = s;
            }
            return v;  // single shear mode, already solenoidal and in band
        }
        case VelocityInit::File: {
            const LoadedField fx = load_field(cfg.velocity_file_x, g.L);
            const LoadedField fy = load_field(cfg.velocity_file_y, g.L);
            if (fx.field.n() != g.n || fy.field.n() != g.n)
                throw ConfigError("initial velocity file grid size does not match grid.n");
            return solenoidal_band_projection(ops, VectorField{fx.field, fy.field});
        }
    }
    throw ConfigError("initial_velocity: unreachable");
}

namespace {

std::vector<VectorField> trig_test_fields(const Grid& g) {
    std::vector<VectorField> fields;
    const double w = 2.0 * M_PI / g.L;
    VectorField a(g), b(g), c(g), d(g);
    for (int iy = 0; iy < g.n; ++iy) {
        for (int ix = 0; ix < g.n; ++ix) {
            const double x = g.x(ix), y = g.y(iy);
            a.x.at(ix, iy) = std::sin(w * x);
            b.y.at(ix, iy) = std::sin(w * y);
            c.x.at(ix, iy) = std::sin(w * y);
            c.y.at(ix, iy) = std::sin(w * x);
            d.x.at(ix, iy) = std::cos(w * x) * std::cos(w * y);
            d.y.at(ix, iy) = std::sin(w * x) * std::sin(w * y);
        }
    }
    fields.push_back(std::move(a));
    fields.push_back(std::move(b));
    fields.push_back(std::move(c));
    fields.push_back(std::move(d));
    return fields;
}

double grad_sq_quadrature(const SpectralOps& ops, const ScalarField& f) {
    const VectorField g = ops.gradient(f);
    return g.l2_norm_sq();
}

}  // namespace

RunResult run_coupled(const RunConfig& cfg, bool write_outputs) {
    const Grid grid = cfg.make_grid();
    const SpectralOps ops(grid);
    const HNegWorkspace hneg(ops);
    const double delta = cfg.resolved_delta();
    const double kappa = cfg.kappa;
    const double m = cfg.m;
    const double h = cfg.h;

    BinaryPhase chi = initial_phase(cfg, grid);
    if (chi.degenerate()) throw ConfigError("initial phase must occupy strictly between 0 and n^2 cells");
    VectorField v = initial_velocity(cfg, ops);
    const long long mass0 = chi.mass();

    const int steps = static_cast<int>(std::ceil(cfg.T / h - 1e-12));
    MsStepConfig ms_cfg = cfg.ms_config();
    const NsStepConfig ns_cfg = cfg.ns_config();

    EnergyLedger ledger;
    LedgerRow row0;
    row0.t = 0.0;
    row0.kinetic = 0.5 * v.l2_norm_sq();
    row0.perimeter = perimeter(ops, chi, delta);
    ledger.rows.push_back(row0);

    std::vector<VectorField> gt_fields = trig_test_fields(grid);
    gt_fields.emplace_back();  // slot for the per-step volume-constraint field

    if (write_outputs) std::filesystem::create_directories(cfg.directory);
    std::ofstream trace_out;
    const bool trace = write_outputs && !cfg.anneal_trace_path.empty();
    if (trace) {
        trace_out.open(cfg.directory + "/" + cfg.anneal_trace_path, std::ios::binary | std::ios::trunc);
        if (!trace_out) throw std::runtime_error("run_coupled: cannot write annealing trace");
        trace_out << "step,iteration,fh,accepted\n";
    }
    const auto dump_state = [&](int k, const BinaryPhase& c, const VectorField& vel, const ScalarField& mu) {
        char tag[16];
        std::snprintf(tag, sizeof(tag), "%06d", k);
        const std::string base = cfg.directory + "/";
        dump_field(base + "chi_" + tag + ".nsms", c.to_field(), 'c');
        dump_field(base + "vx_" + tag + ".nsms", vel.x, 'u');
        dump_field(base + "vy_" + tag + ".nsms", vel.y, 'v');
        dump_field(base + "mu_" + tag + ".nsms", mu, 's');
    };

    for (int k = 1; k <= steps; ++k) {
        try {
            ms_cfg.anneal.seed = cfg.seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(k);

            // Mullins-Sekerka minimizing movement from (chi(t-h), v(t-h)).
            const ScalarField transport = transport_term(ops, chi, v);
            AnnealReport report;
            report.collect_trace = trace;
            MsStepResult ms = ms_step(ops, hneg, chi, v, ms_cfg, trace ? &report : nullptr);
            if (trace)
                for (const AnnealTraceRow& row : report.trace)
                    trace_out << k << ',' << row.iteration << ',' << fmt17(row.fh) << ','
                              << (row.accepted ? 1 : 0) << '\n';
            if (ms.chi_new.mass() != mass0) throw LedgerViolationError("phase mass changed");
            if (ms.fh_final > ms.fh_initial)
                throw LedgerViolationError("F^h increased across the minimizing movement");

            const double gms = grad_sq_quadrature(ops, ms.mu0);
            const double v_prev_sq = v.l2_norm_sq();

            // Transport bound || grad (-Lap)^-1 (v~.grad chi~) || <= || v~ ||.
            const double transport_hneg = hneg.hneg_norm(transport);
            if (transport_hneg > v.l2_norm() * (1.0 + 1e-10) + 1e-12)
                throw LedgerViolationError("transport H^-1 bound failed");

            // Per-step minimizing-movement estimate.
            {
                const double lhs = kappa * ms.perimeter_new + 0.5 * m * h * gms;
                const double rhs = kappa * ledger.rows.back().perimeter + 0.5 * h / m * v_prev_sq;
                if (lhs > rhs + 1e-8 * (1.0 + std::abs(rhs)))
                    throw LedgerViolationError("minimizing-movement energy estimate failed: lhs " +
                                               std::to_string(lhs) + " rhs " + std::to_string(rhs));
            }

            ScalarField mu = ms.mu0;
            for (std::size_t i = 0; i < mu.size(); ++i) mu[i] += ms.lambda;

            gt_fields.back() = step4_field(ops, hneg, ms.chi_new, delta);
            ScalarField mu_over_kappa = (1.0 / kappa) * mu;
            const double gt = gibbs_thomson_residual(ops, ms.chi_new, mu_over_kappa, delta, gt_fields);

            const ScalarField nu = viscosity_field(ops, ms.chi_new, cfg.nu_minus, cfg.nu_plus, delta);
            const NsStepResult ns = ns_step(ops, v, ms.chi_new, mu, nu, ns_cfg);
            if (!ns_energy_check(ops, ns, v, ms.chi_new, mu, nu, h))
                throw LedgerViolationError("Navier-Stokes energy inequality failed");

            chi = ms.chi_new;
            v = ns.v_new;

            ledger.rows.push_back({static_cast<double>(k) * h, ns.kinetic_new, ms.perimeter_new, gms,
                                   ns.viscous_dissipation, ms.fh_initial, ms.fh_final, ms.lambda, gt});

            if (write_outputs && cfg.dump_every > 0 && k % cfg.dump_every == 0) dump_state(k, chi, v, mu);
        } catch (const LedgerViolationError& e) {
            throw LedgerViolationError("step " + std::to_string(k) + ": " + e.what());
        } catch (const NoConvergenceError& e) {
            throw NoConvergenceError("step " + std::to_string(k) + ": " + e.what());
        }
    }

    const LedgerVerdict verdict = energy_ledger_check(ledger, cfg);
    if (!verdict.ok)
        throw LedgerViolationError("ledger check failed at row " + std::to_string(verdict.first_bad_row) + ": " +
                                   verdict.reason);

    if (write_outputs) {
        std::ofstream out(cfg.directory + "/" + cfg.ledger_path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("run_coupled: cannot write ledger");
        out << ledger.to_csv();
    }
    return {std::move(ledger), std::move(chi), std::move(v)};
}

LedgerVerdict energy_ledger_check(const EnergyLedger& ledger, double kappa, double m) {
    const auto& rows = ledger.rows;
    if (rows.size() < 2) return {true, -1, "fewer than two rows, nothing to check"};
    const double h = rows[1].t - rows[0].t;
    if (!(h > 0.0)) return {false, 1, "non-increasing time column"};

    double sum_lhs = 0.0;   // sum of h*viscous + (m h/2) grad_mu_sq
    double sum_gms = 0.0;   // sum of (m h/4) grad_mu_sq
    double sum_kin = (2.0 * h / m) * 2.0 * rows[0].kinetic;  // 2h/m ||v||^2 terms, from t = -h on
    const double e0 = rows[0].kinetic + kappa * rows[0].perimeter;

    for (std::size_t k = 1; k < rows.size(); ++k) {
        const LedgerRow& r = rows[k];
        const LedgerRow& p = rows[k - 1];
        if (!(r.t > p.t)) return {false, static_cast<long>(k), "non-increasing time column"};
        if (r.fh_final > r.fh_initial + 1e-12 * (1.0 + std::abs(r.fh_initial)))
            return {false, static_cast<long>(k), "fh_final exceeds fh_initial"};

        // Per-step minimizing-movement estimate.
        {
            const double lhs = kappa * r.perimeter + 0.5 * m * h * r.grad_mu_sq;
            const double rhs = kappa * p.perimeter + 0.5 * h / m * 2.0 * p.kinetic;
            if (lhs > rhs + 1e-8 * (1.0 + std::abs(rhs)))
                return {false, static_cast<long>(k), "per-step interface energy estimate failed"};
        }

        // Per-step total energy with the Gronwall slack terms.
        {
            const double lhs = r.kinetic + kappa * r.perimeter;
            const double rhs = p.kinetic + kappa * p.perimeter + (h / m) * p.kinetic + (2.0 * h / m) * r.kinetic;
            if (lhs > rhs + 1e-8 * (1.0 + std::abs(rhs)))
                return {false, static_cast<long>(k), "per-step total energy dissipation failed"};
        }

        // Summed (pre-Gronwall) inequality up to t_k.
        sum_lhs += h * r.viscous + 0.5 * m * h * r.grad_mu_sq;
        sum_gms += 0.25 * m * h * r.grad_mu_sq;
        sum_kin += (2.0 * h / m) * 2.0 * r.kinetic;
        const double lhs = r.kinetic + kappa * r.perimeter + sum_lhs;
        const double rhs = e0 + sum_gms + sum_kin;
        if (lhs > rhs + 1e-8 * (1.0 + std::abs(rhs)))
            return {false, static_cast<long>(k), "summed ledger inequality failed"};
    }
    return {true, -1, ""};
}

LedgerVerdict energy_ledger_check(const EnergyLedger& ledger, const RunConfig& cfg) {
    return energy_ledger_check(ledger, cfg.kappa, cfg.m);
}

namespace {

// Signed distance to the phase boundary, positive inside {chi = 1}. Brute
// force over the interface cells of the opposite phase; the half-cell shift
// puts the zero level on the cell boundary.
ScalarField signed_distance(const BinaryPhase& chi) {
    const Grid& g = chi.grid();
    const int n = g.n;
    std::vector<std::pair<double, double>> bd0, bd1;  // boundary cell centers per phase
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const std::uint8_t c = chi.at(ix, iy);
            const bool boundary = chi.at((ix + 1) % n, iy) != c || chi.at((ix + n - 1) % n, iy) != c ||
                                  chi.at(ix, (iy + 1) % n) != c || chi.at(ix, (iy + n - 1) % n) != c;
            if (boundary) (c ? bd1 : bd0).emplace_back(g.x(ix), g.y(iy));
        }
    }
    ScalarField sd(g);
    const double big = 2.0 * g.L;
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const double x = g.x(ix), y = g.y(iy);
            const auto& targets = chi.at(ix, iy) ? bd0 : bd1;
            double best = big;
            for (const auto& [tx, ty] : targets) {
                const double dx = periodic_delta(x, tx, g.L);
                const double dy = periodic_delta(y, ty, g.L);
                best = std::min(best, dx * dx + dy * dy);
            }
            const double d = std::sqrt(best) - 0.5 * g.dx();
            sd.at(ix, iy) = chi.at(ix, iy) ? d : -d;
        }
    }
    return sd;
}

}  // namespace

SweepReport sharp_limit_experiment(const RunConfig& cfg, const std::vector<double>& eps_list) {
    SweepReport rep;
    if (eps_list.empty()) return rep;

    const Grid grid = cfg.make_grid();
    for (std::size_t i = 0; i + 1 < eps_list.size(); ++i)
        if (!(eps_list[i + 1] < eps_list[i])) throw ConfigError("eps list must be strictly decreasing");
    for (double eps : eps_list)
        if (eps < 3.0 * grid.dx())
            throw ResolutionError("eps = " + std::to_string(eps) + " is below 3 dx = " +
                                  std::to_string(3.0 * grid.dx()));

    const SpectralOps ops(grid);
    const double delta = cfg.resolved_delta();

    // Sharp-interface side.
    RunResult mm = run_coupled(cfg, /*write_outputs=*/false);
    const BinaryPhase& chi_T = mm.chi_final;
    const double mm_perimeter = perimeter(ops, chi_T, delta);
    rep.band_area = mm_perimeter * grid.dx();

    // Diffuse side, one trajectory per interface width.
    const BinaryPhase chi0 = initial_phase(cfg, grid);
    const ScalarField sd = signed_distance(chi0);
    const DoubleWell well = DoubleWell::quartic();
    const double kappa_mm = modica_mortola_kappa(well);
    const double dt = cfg.resolved_dt_diffuse();
    const int steps = static_cast<int>(std::ceil(cfg.T / dt - 1e-12));
    NsStepConfig momentum_cfg = cfg.ns_config();

    for (double eps : eps_list) {
        DiffuseState state;
        state.c = ScalarField(grid);
        for (std::size_t i = 0; i < state.c.size(); ++i)
            state.c[i] = 1.0 / (1.0 + std::exp(-std::sqrt(2.0) * sd[i] / eps));
        state.v = initial_velocity(cfg, ops);
        state.eps = eps;
        state.m_eps = cfg.m;
        for (int k = 0; k < steps; ++k) state = nsch_step(ops, state, dt, well, cfg.nu_minus, cfg.nu_plus, momentum_cfg);

        const BinaryPhase thresholded = threshold_field(state.c, 0.5);
        double mismatch = 0.0;
        for (std::size_t i = 0; i < thresholded.cells().size(); ++i)
            mismatch += thresholded[i] != chi_T[i] ? 1.0 : 0.0;

        SweepEntry entry;
        entry.eps = eps;
        entry.sym_diff_area = mismatch * grid.cell_area();
        entry.e_eps = ginzburg_landau_energy(ops, state.c, eps, well);
        const double length = perimeter(ops, thresholded, delta);
        entry.e_per_length = length > 0.0 ? entry.e_eps / length : 0.0;
        entry.kappa_ratio = entry.e_per_length / kappa_mm;
        rep.entries.push_back(entry);
    }

    for (std::size_t i = 0; i + 1 < rep.entries.size(); ++i)
        if (rep.entries[i + 1].sym_diff_area > rep.entries[i].sym_diff_area + rep.band_area) rep.monotone = false;
    return rep;
}

std::string sweep_report_csv(const SweepReport& rep) {
    std::string out = "eps,sym_diff_area,e_eps,e_per_length,kappa_ratio\n";
    for (const SweepEntry& e : rep.entries) {
        out += fmt17(e.eps) + ',' + fmt17(e.sym_diff_area) + ',' + fmt17(e.e_eps) + ',' + fmt17(e.e_per_length) +
               ',' + fmt17(e.kappa_ratio) + '\n';
    }
    return out;
}

}  // namespace nsms
