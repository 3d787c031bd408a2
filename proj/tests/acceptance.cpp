// Acceptance suite: one check per criterion, each printed as a pass/fail
// line. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "nsms/driver.hpp"
#include "nsms/geometry.hpp"
#include "nsms/model_h.hpp"
#include "nsms/prng.hpp"

using namespace nsms;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

void expect(Outcome& o, bool cond, const std::string& what) {
    if (!cond) {
        o.pass = false;
        o.detail += (o.detail.empty() ? "" : "; ") + what;
    }
}

ScalarField cos_x(const Grid& g) {
    ScalarField f(g);
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) f.at(ix, iy) = std::cos(2.0 * M_PI * g.x(ix) / g.L);
    return f;
}

VectorField shear_flow(const Grid& g, double amp) {
    VectorField v(g);
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) v.x.at(ix, iy) = amp * std::sin(2.0 * M_PI * g.y(iy) / g.L);
    return v;
}

// --- 1. H^-1 machinery -----------------------------------------------------
Outcome criterion_hneg() {
    Outcome o;
    for (int n : {32, 64}) {
        Grid g(n, 1.0);
        SpectralOps ops(g);
        HNegWorkspace hneg(ops);
        const double expected = 1.0 / (2.0 * M_PI * std::sqrt(2.0));
        const double got = hneg.hneg_norm(cos_x(g));
        expect(o, std::abs(got - expected) <= 1e-10 * expected,
               "analytic hneg_norm off at n=" + std::to_string(n));
        SplitMix64 rng(1234 + n);
        for (int trial = 0; trial < 100; ++trial) {
            ScalarField f(g);
            for (std::size_t i = 0; i < f.size(); ++i) f[i] = 2.0 * rng.next_double() - 1.0;
            const double m = f.mean();
            for (std::size_t i = 0; i < f.size(); ++i) f[i] -= m;
            const double sq = hneg.hneg_norm_sq(f);
            const double dual = inner(f, hneg.inv_neg_laplacian(f));
            expect(o, std::abs(sq - dual) <= 1e-10 * std::max(1.0, sq), "duality identity failed");
        }
    }
    return o;
}

// --- 2. Perimeter estimator ------------------------------------------------
Outcome criterion_perimeter() {
    Outcome o;
    Grid g(64, 1.0);
    SpectralOps ops(g);
    const double delta = 2.0 * g.dx();
    const double stripe = perimeter(ops, make_stripe(g, 0.5), delta);
    expect(o, std::abs(stripe - 2.0) <= 0.03 * 2.0, "stripe perimeter " + std::to_string(stripe));
    const double r = 0.25;
    const double disk = perimeter(ops, make_disk(g, 0.5, 0.5, r), delta);
    expect(o, std::abs(disk - 2.0 * M_PI * r) <= 0.05 * 2.0 * M_PI * r, "disk perimeter " + std::to_string(disk));
    return o;
}

// --- 3. Modica-Mortola -----------------------------------------------------
Outcome criterion_modica_mortola() {
    Outcome o;
    const DoubleWell well = DoubleWell::quartic();
    const double kappa = modica_mortola_kappa(well);
    expect(o, std::abs(kappa - std::sqrt(2.0) / 6.0) <= 1e-9, "kappa quadrature " + std::to_string(kappa));

    Grid g(256, 1.0);
    SpectralOps ops(g);
    const double eps = 0.04;
    ScalarField c(g);
    for (int iy = 0; iy < g.n; ++iy) {
        const double y = g.y(iy);
        const double dist = std::min(std::abs(periodic_delta(y, 0.0, g.L)),
                                     std::abs(periodic_delta(y, 0.5 * g.L, g.L)));
        const double sd = (y < 0.5 * g.L) ? dist : -dist;
        const double v = 1.0 / (1.0 + std::exp(-std::sqrt(2.0) * sd / eps));
        for (int ix = 0; ix < g.n; ++ix) c.at(ix, iy) = v;
    }
    const double per_interface = ginzburg_landau_energy(ops, c, eps, well) / 2.0;
    expect(o, std::abs(per_interface - kappa) <= 0.02 * kappa,
           "profile energy per interface " + std::to_string(per_interface));
    return o;
}

RunConfig disk_run_config(bool with_shear) {
    RunConfig cfg;
    cfg.n = 64;
    cfg.L = 1.0;
    cfg.h = 5e-4;
    cfg.T = 200 * cfg.h;
    cfg.phase_shape = PhaseShape::Disk;
    cfg.disk_radius = 0.2;
    cfg.velocity = with_shear ? VelocityInit::Shear : VelocityInit::Zero;
    cfg.velocity_amplitude = 1.0;
    cfg.anneal.sweeps = 25;
    cfg.anneal.no_improve_window = 6;
    cfg.seed = 2024;
    return cfg;
}

// --- 4. MS step energy law over a 200-step disk run -------------------------
Outcome criterion_ms_energy_law(RunResult& disk_result_out) {
    Outcome o;
    RunConfig cfg = disk_run_config(false);
    const BinaryPhase chi0 = initial_phase(cfg, cfg.make_grid());
    RunResult res = run_coupled(cfg, false);
    expect(o, res.ledger.rows.size() == 201, "expected 200 steps");
    expect(o, res.chi_final.mass() == chi0.mass(), "mass drifted");
    for (std::size_t k = 1; k < res.ledger.rows.size(); ++k) {
        const LedgerRow& r = res.ledger.rows[k];
        const LedgerRow& p = res.ledger.rows[k - 1];
        const double lhs = r.perimeter + 0.5 * cfg.h * r.grad_mu_sq;
        const double rhs = p.perimeter + 0.5 * cfg.h * 2.0 * p.kinetic;
        expect(o, lhs <= rhs + 1e-8 * (1.0 + std::abs(rhs)),
               "step " + std::to_string(k) + " estimate violated");
        if (!o.pass) break;
    }
    disk_result_out = std::move(res);
    return o;
}

// --- 5. NS step ------------------------------------------------------------
Outcome criterion_ns_step() {
    Outcome o;
    {
        Grid g(32, 1.0);
        SpectralOps ops(g);
        const double nu0 = 0.7, h = 0.01;
        NsStepConfig cfg;
        cfg.h = h;
        cfg.picard_tol = 1e-12;
        cfg.cg_tol = 1e-13;
        const VectorField f = shear_flow(g, 1.0);
        const NsStepResult res = momentum_step(ops, VectorField(g), f, ScalarField(g, nu0), cfg);
        const double gain = 1.0 / (1.0 / h + nu0 * 4.0 * M_PI * M_PI);
        double worst = 0.0;
        for (std::size_t i = 0; i < f.x.size(); ++i)
            worst = std::max(worst, std::abs(res.v_new.x[i] - gain * f.x[i]));
        expect(o, worst <= 1e-9, "analytic single-mode amplitude off by " + std::to_string(worst));
    }
    {
        Grid g(32, 1.0);
        SpectralOps ops(g);
        NsStepConfig cfg;
        cfg.h = 2e-3;
        SplitMix64 rng(55);
        for (int trial = 0; trial < 50; ++trial) {
            VectorField raw(g);
            for (std::size_t i = 0; i < raw.x.size(); ++i) {
                raw.x[i] = 2.0 * rng.next_double() - 1.0;
                raw.y[i] = 2.0 * rng.next_double() - 1.0;
            }
            VectorField v_prev = solenoidal_band_projection(ops, raw);
            if (v_prev.max_abs() > 0) v_prev = (0.5 / v_prev.max_abs()) * v_prev;
            const BinaryPhase chi = make_disk(g, rng.next_double(), rng.next_double(),
                                              0.1 + 0.15 * rng.next_double());
            ScalarField mu(g);
            for (int m = 0; m < 3; ++m) {
                const int kx = static_cast<int>(rng.next_below(5)) - 2;
                const int ky = static_cast<int>(rng.next_below(5)) - 2;
                const double a = 2.0 * rng.next_double() - 1.0;
                const double p = 2.0 * M_PI * rng.next_double();
                for (int iy = 0; iy < g.n; ++iy)
                    for (int ix = 0; ix < g.n; ++ix)
                        mu.at(ix, iy) += a * std::cos(2.0 * M_PI * (kx * g.x(ix) + ky * g.y(iy)) + p);
            }
            const ScalarField nu = viscosity_field(ops, chi, 1.0, 3.0, 2.0 * g.dx());
            const NsStepResult res = ns_step(ops, v_prev, chi, mu, nu, cfg);
            expect(o, ns_energy_check(ops, res, v_prev, chi, mu, nu, cfg.h),
                   "energy inequality failed on randomized step " + std::to_string(trial));
            if (!o.pass) break;
        }
    }
    return o;
}

// --- 6. Coupled ledger -----------------------------------------------------
Outcome criterion_coupled_ledger() {
    Outcome o;
    RunConfig cfg = disk_run_config(true);
    const RunResult res = run_coupled(cfg, false);
    const LedgerVerdict verdict = energy_ledger_check(res.ledger, cfg);
    expect(o, verdict.ok, "ledger check: " + verdict.reason);
    for (std::size_t k = 1; k < res.ledger.rows.size(); ++k) {
        const LedgerRow& r = res.ledger.rows[k];
        const LedgerRow& p = res.ledger.rows[k - 1];
        const double lhs = r.kinetic + cfg.kappa * r.perimeter;
        const double rhs = p.kinetic + cfg.kappa * p.perimeter + cfg.h * p.kinetic + 2.0 * cfg.h * r.kinetic;
        expect(o, lhs <= rhs + 1e-8 * (1.0 + std::abs(rhs)), "total energy rose at step " + std::to_string(k));
        if (!o.pass) break;
    }
    return o;
}

// --- 7. Model H conservation / dissipation ----------------------------------
Outcome criterion_model_h() {
    Outcome o;
    Grid g(128, 1.0);
    SpectralOps ops(g);
    const DoubleWell well = DoubleWell::quartic();
    NsStepConfig cfg;
    const double eps = 0.04, dt = 1e-5;
    DiffuseState st;
    st.c = ScalarField(g);
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) {
            const double dx = periodic_delta(g.x(ix), 0.5, g.L);
            const double dy = periodic_delta(g.y(iy), 0.5, g.L);
            const double sd = 0.25 - std::sqrt(dx * dx + dy * dy);
            st.c.at(ix, iy) = 1.0 / (1.0 + std::exp(-std::sqrt(2.0) * sd / eps));
        }
    st.v = VectorField(g);
    st.eps = eps;
    st.m_eps = 1.0;

    const double mean0 = st.c.mean();
    double total_prev = 0.5 * st.v.l2_norm_sq() + ginzburg_landau_energy(ops, st.c, eps, well);
    for (int k = 0; k < 10000; ++k) {
        st = nsch_step(ops, st, dt, well, 1.0, 1.0, cfg);
        const double total = 0.5 * st.v.l2_norm_sq() + ginzburg_landau_energy(ops, st.c, eps, well);
        if (total > total_prev + 1e-8 * (1.0 + total_prev)) {
            expect(o, false, "coupled energy rose at step " + std::to_string(k));
            break;
        }
        total_prev = total;
    }
    expect(o, std::abs(st.c.mean() - mean0) < 1e-9, "mean drift " + std::to_string(st.c.mean() - mean0));
    return o;
}

// --- 8. Sharp-interface cross-check ------------------------------------------
Outcome criterion_sharp_limit() {
    Outcome o;
    RunConfig cfg;
    cfg.n = 256;
    cfg.L = 1.0;
    cfg.h = 5e-4;
    cfg.T = 0.01;
    cfg.dt_diffuse = 1e-5;
    cfg.phase_shape = PhaseShape::Disk;
    cfg.disk_radius = 0.25;
    cfg.velocity = VelocityInit::Zero;
    cfg.anneal.sweeps = 20;
    cfg.anneal.no_improve_window = 5;
    cfg.seed = 7;
    const SweepReport rep = sharp_limit_experiment(cfg, {0.08, 0.04, 0.02});
    expect(o, rep.entries.size() == 3, "expected three sweep entries");
    expect(o, rep.monotone, "symmetric-difference areas not monotone within one cell band");
    // Profile energy per unit length approaches the Modica-Mortola constant.
    for (std::size_t i = 0; i + 1 < rep.entries.size(); ++i)
        expect(o, std::abs(rep.entries[i + 1].kappa_ratio - 1.0) <= std::abs(rep.entries[i].kappa_ratio - 1.0) + 1e-3,
               "energy-per-length ratio not improving with eps");
    if (!rep.entries.empty())
        expect(o, std::abs(rep.entries.back().kappa_ratio - 1.0) <= 0.05,
               "energy per length off by " + std::to_string(rep.entries.back().kappa_ratio));
    return o;
}

// --- 9. Gibbs-Thomson residual -----------------------------------------------
Outcome criterion_gibbs_thomson() {
    Outcome o;
    {
        Grid g(128, 1.0);
        SpectralOps ops(g);
        HNegWorkspace hneg(ops);
        const double r = 0.25, delta = 2.0 * g.dx();
        const BinaryPhase disk = make_disk(g, 0.5, 0.5, r);
        std::vector<VectorField> fields;
        const double w = 2.0 * M_PI;
        VectorField a(g), b(g), c(g), d(g);
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix) {
                const double x = g.x(ix), y = g.y(iy);
                a.x.at(ix, iy) = std::sin(w * x);
                b.y.at(ix, iy) = std::sin(w * y);
                c.x.at(ix, iy) = std::sin(w * y);
                c.y.at(ix, iy) = std::sin(w * x);
                d.x.at(ix, iy) = std::cos(w * x) * std::cos(w * y);
                d.y.at(ix, iy) = std::sin(w * x) * std::sin(w * y);
            }
        fields.push_back(a);
        fields.push_back(b);
        fields.push_back(c);
        fields.push_back(d);
        fields.push_back(step4_field(ops, hneg, disk, delta));
        const double resid = gibbs_thomson_residual(ops, disk, ScalarField(g, 1.0 / r), delta, fields);
        expect(o, resid < 0.1, "circle residual " + std::to_string(resid));
    }
    {
        Grid g(64, 1.0);
        SpectralOps ops(g);
        const BinaryPhase stripe = make_stripe(g, 0.5);
        std::vector<VectorField> fields;
        VectorField a(g);
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix) {
                a.x.at(ix, iy) = std::sin(2.0 * M_PI * g.x(ix));
                a.y.at(ix, iy) = std::cos(2.0 * M_PI * g.x(ix)) * std::sin(2.0 * M_PI * g.y(iy));
            }
        fields.push_back(a);
        const double resid = gibbs_thomson_residual(ops, stripe, ScalarField(g), 2.0 * g.dx(), fields);
        expect(o, resid < 1e-6, "flat stripe residual " + std::to_string(resid));
    }
    return o;
}

// --- 10. Determinism ----------------------------------------------------------
Outcome criterion_determinism() {
    Outcome o;
    RunConfig cfg = disk_run_config(true);
    cfg.T = 40 * cfg.h;
    cfg.directory = "/tmp/nsms_acceptance_det_a";
    cfg.ledger_path = "ledger.csv";
    cfg.dump_every = 40;
    run_coupled(cfg, true);
    RunConfig cfg2 = cfg;
    cfg2.directory = "/tmp/nsms_acceptance_det_b";
    run_coupled(cfg2, true);
    const auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string a = slurp(cfg.directory + "/ledger.csv");
    const std::string b = slurp(cfg2.directory + "/ledger.csv");
    expect(o, !a.empty() && a == b, "ledger files differ or are empty");
    for (const char* name : {"chi_000040.nsms", "vx_000040.nsms", "vy_000040.nsms", "mu_000040.nsms"}) {
        const std::string da = slurp(cfg.directory + "/" + name);
        const std::string db = slurp(cfg2.directory + "/" + name);
        expect(o, !da.empty() && da == db, std::string("dump differs: ") + name);
    }
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> fn;
    };
    RunResult disk_result;  // shared between criteria 4 and nothing else (kept for symmetry)

    std::vector<Criterion> criteria = {
        {"1 H^-1 machinery: analytic norm and duality identity", criterion_hneg},
        {"2 perimeter estimator: stripe 3%, disk 5%", criterion_perimeter},
        {"3 Modica-Mortola constant and optimal-profile energy", criterion_modica_mortola},
        {"4 MS step energy law over a 200-step disk run", [&] { return criterion_ms_energy_law(disk_result); }},
        {"5 NS step: analytic single mode and 50 randomized energy checks", criterion_ns_step},
        {"6 coupled ledger inequality on a disk+shear run", criterion_coupled_ledger},
        {"7 Model H mass conservation and coupled dissipation", criterion_model_h},
        {"8 sharp-interface cross-check over eps = 0.08, 0.04, 0.02", criterion_sharp_limit},
        {"9 Gibbs-Thomson residual: circle and flat stripe", criterion_gibbs_thomson},
        {"10 determinism: byte-identical ledgers", criterion_determinism},
    };

    int failures = 0;
    for (auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %s (%.1f s)%s%s\n", o.pass ? "PASS" : "FAIL", c.name, secs,
                    o.detail.empty() ? "" : " -- ", o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    return failures;
}
