#include "nsms/ms_step.hpp"

#include <algorithm>
#include <cmath>

#include "nsms/kernels.hpp"
#include "nsms/prng.hpp"

namespace nsms {

ScalarField transport_term(const SpectralOps& ops, const BinaryPhase& chi, const VectorField& v) {
    const ScalarField chif = chi.to_field();
    const Grid& g = chi.grid();
    const int n = g.n;
    Spectrum px = ops.forward(hadamard(chif, v.x));
    Spectrum py = ops.forward(hadamard(chif, v.y));
    Spectrum d(px.size());
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const std::size_t id = g.idx(ix, iy);
            if (!ops.mode_in_band(ix, iy)) {
                d[id] = 0.0;
                continue;
            }
            const std::complex<double> a = px[id];
            const std::complex<double> b = py[id];
            // -(i kx a + i ky b)
            d[id] = std::complex<double>(ops.dk(ix) * a.imag() + ops.dk(iy) * b.imag(),
                                         -ops.dk(ix) * a.real() - ops.dk(iy) * b.real());
        }
    }
    return ops.inverse(d);
}

double fh_energy(const SpectralOps& ops, const HNegWorkspace& hneg, const BinaryPhase& sigma,
                 const BinaryPhase& chi_prev, const VectorField& v_prev, double h, double delta, double kappa,
                 double mobility) {
    if (sigma.mass() != chi_prev.mass())
        throw MassMismatchError("fh_energy: sigma mass " + std::to_string(sigma.mass()) + " != chi_prev mass " +
                                std::to_string(chi_prev.mass()));
    const ScalarField transport = transport_term(ops, chi_prev, v_prev);
    ScalarField g = sigma.to_field();
    g -= chi_prev.to_field();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += h * transport[i];
    return kappa * perimeter(ops, sigma, delta) + hneg.hneg_norm_sq(g) / (2.0 * mobility * h);
}

namespace {

// Annealing workspace. Maintains, across accepted swaps:
//   q  = (-Laplace)^-1 (chi - chi_prev + h T)      (Green-column updates)
//   gx, gy = grad (chi * G_delta)                  (kernel-table updates)
//   Hn = || chi - chi_prev + h T ||^2_{H^-1}       (exact rank-2 increments)
//   P  = perimeter from (gx, gy)
// Proposal cost is O(1) for the H^-1 part and one local window for the
// perimeter part; acceptance refreshes the full fields from the tables.
class FhAnnealer {
  public:
    FhAnnealer(const SpectralOps& ops, const HNegWorkspace& hneg, const BinaryPhase& chi_prev,
               const VectorField& v_prev, const MsStepConfig& cfg)
        : ops_(ops),
          hneg_(hneg),
          grid_(chi_prev.grid()),
          n_(grid_.n),
          mask_(grid_.n - 1),
          cfg_(cfg),
          delta_(cfg.resolved_delta(grid_)),
          rng_(cfg.anneal.seed),
          chi_(chi_prev.cells()),
          chi_prev_(chi_prev.cells()) {
        green_ = build_green_table(ops);
        green0_ = green_[0];
        kern_ = build_grad_mollify_kernel(ops, delta_);

        wrad_ = std::min(static_cast<int>(std::ceil(6.0 * delta_ / grid_.dx())), (n_ - 1) / 2);
        const int w = 2 * wrad_ + 1;
        kwx_.resize(static_cast<std::size_t>(w) * w);
        kwy_.resize(kwx_.size());
        for (int dy = -wrad_; dy <= wrad_; ++dy)
            for (int dx = -wrad_; dx <= wrad_; ++dx) {
                const std::size_t src = grid_.idx((dx + n_) & mask_, (dy + n_) & mask_);
                const std::size_t dst = static_cast<std::size_t>(dy + wrad_) * w + (dx + wrad_);
                kwx_[dst] = kern_.kx[src];
                kwy_[dst] = kern_.ky[src];
            }

        const ScalarField transport = transport_term(ops_, chi_prev, v_prev);
        h_transport_.assign(transport.data(), transport.data() + grid_.cells());
        for (double& x : h_transport_) x *= cfg_.h;

        refresh_fields();
        best_chi_ = chi_;
        best_f_ = current_f();
        initial_f_ = best_f_;
    }

    double initial_f() const { return initial_f_; }
    double best_f() const { return best_f_; }
    const std::vector<std::uint8_t>& best_chi() const { return best_chi_; }

    void run(AnnealReport* report) {
        long iteration = 0;
        int stale_sweeps = 0;
        double window_best = best_f_;
        int sweeps_run = 0;
        for (int sweep = 0; sweep < cfg_.anneal.sweeps; ++sweep) {
            rebuild_boundary_lists();
            if (boundary_ones_.empty() || boundary_zeros_.empty()) break;
            ++sweeps_run;
            const double temp = cfg_.anneal.temp_init * std::pow(cfg_.anneal.temp_decay, sweep);
            const long props = static_cast<long>(boundary_ones_.size());
            for (long p = 0; p < props; ++p) {
                ++iteration;
                const std::size_t a = boundary_ones_[rng_.next_below(boundary_ones_.size())];
                const std::size_t b = boundary_zeros_[rng_.next_below(boundary_zeros_.size())];
                if (report) ++report->proposals;
                if (chi_[a] != 1 || chi_[b] != 0 || !is_boundary(a) || !is_boundary(b)) continue;  // stale entry
                const double d_hn = delta_hneg(a, b);
                const double d_p = delta_perimeter(a, b);
                const double d_f = cfg_.kappa * d_p + d_hn / (2.0 * cfg_.mobility * cfg_.h);
                const bool take = d_f <= 0.0 || rng_.next_double() < std::exp(-d_f / temp);
                if (take) {
                    apply_swap(a, b, d_hn);
                    if (report) ++report->accepted;
                    const double f = current_f();
                    if (f < best_f_) {
                        best_f_ = f;
                        best_chi_ = chi_;
                    }
                }
                if (report && report->collect_trace) report->trace.push_back({iteration, current_f(), take});
            }
            // Bookkeeping must agree with a from-scratch evaluation before the
            // fields are realigned.
            const double f_inc = current_f();
            refresh_fields();
            const double f_fresh = current_f();
            if (report) report->sweep_consistency.emplace_back(f_inc, f_fresh);
            if (std::abs(f_inc - f_fresh) > 1e-8 * (1.0 + std::abs(f_fresh)))
                throw LedgerViolationError("annealer bookkeeping drifted: incremental " + std::to_string(f_inc) +
                                           " vs fresh " + std::to_string(f_fresh));
            if (best_f_ < window_best - 1e-12 * (1.0 + std::abs(window_best))) {
                window_best = best_f_;
                stale_sweeps = 0;
            } else if (++stale_sweeps >= cfg_.anneal.no_improve_window) {
                break;
            }
        }
        if (report) report->sweeps_run = sweeps_run;
    }

  private:
    double current_f() const { return cfg_.kappa * perim_ + hn_ / (2.0 * cfg_.mobility * cfg_.h); }

    bool is_boundary(std::size_t id) const {
        const int ix = static_cast<int>(id) & mask_;
        const int iy = static_cast<int>(id) / n_;
        const std::uint8_t c = chi_[id];
        return chi_[grid_.idx((ix + 1) & mask_, iy)] != c || chi_[grid_.idx((ix - 1 + n_) & mask_, iy)] != c ||
               chi_[grid_.idx(ix, (iy + 1) & mask_)] != c || chi_[grid_.idx(ix, (iy - 1 + n_) & mask_)] != c;
    }

    void rebuild_boundary_lists() {
        boundary_ones_.clear();
        boundary_zeros_.clear();
        for (std::size_t id = 0; id < chi_.size(); ++id) {
            if (!is_boundary(id)) continue;
            (chi_[id] ? boundary_ones_ : boundary_zeros_).push_back(id);
        }
    }

    // Exact H^-1 increment for flipping cell a (1 -> 0) and b (0 -> 1).
    double delta_hneg(std::size_t a, std::size_t b) const {
        const int ax = static_cast<int>(a) & mask_, ay = static_cast<int>(a) / n_;
        const int bx = static_cast<int>(b) & mask_, by = static_cast<int>(b) / n_;
        const std::size_t d = grid_.idx((bx - ax + n_) & mask_, (by - ay + n_) & mask_);
        const double dA = grid_.cell_area();
        return 2.0 * dA * (q_[b] - q_[a]) + 2.0 * dA * (green0_ - green_[d]);
    }

    // Perimeter increment over the 6-delta windows around both flip cells.
    double delta_perimeter(std::size_t a, std::size_t b) const {
        const int ax = static_cast<int>(a) & mask_, ay = static_cast<int>(a) / n_;
        const int bx = static_cast<int>(b) & mask_, by = static_cast<int>(b) / n_;
        const int w = 2 * wrad_ + 1;
        double acc = 0.0;
        auto signed_wrap = [this](int d) {
            d &= mask_;
            return d > n_ / 2 ? d - n_ : d;
        };
        for (int dy = -wrad_; dy <= wrad_; ++dy) {
            for (int dx = -wrad_; dx <= wrad_; ++dx) {
                const int yx = (ax + dx + n_) & mask_;
                const int yy = (ay + dy + n_) & mask_;
                const std::size_t id = grid_.idx(yx, yy);
                const std::size_t ka = static_cast<std::size_t>(dy + wrad_) * w + (dx + wrad_);
                double dgx = -kwx_[ka];
                double dgy = -kwy_[ka];
                const int rx = signed_wrap(yx - bx);
                const int ry = signed_wrap(yy - by);
                if (std::abs(rx) <= wrad_ && std::abs(ry) <= wrad_) {
                    const std::size_t kb = static_cast<std::size_t>(ry + wrad_) * w + (rx + wrad_);
                    dgx += kwx_[kb];
                    dgy += kwy_[kb];
                }
                acc += std::sqrt((gx_[id] + dgx) * (gx_[id] + dgx) + (gy_[id] + dgy) * (gy_[id] + dgy)) -
                       std::sqrt(gx_[id] * gx_[id] + gy_[id] * gy_[id]);
            }
        }
        for (int dy = -wrad_; dy <= wrad_; ++dy) {
            for (int dx = -wrad_; dx <= wrad_; ++dx) {
                const int yx = (bx + dx + n_) & mask_;
                const int yy = (by + dy + n_) & mask_;
                const int rx = signed_wrap(yx - ax);
                const int ry = signed_wrap(yy - ay);
                if (std::abs(rx) <= wrad_ && std::abs(ry) <= wrad_) continue;  // already counted
                const std::size_t id = grid_.idx(yx, yy);
                const std::size_t kb = static_cast<std::size_t>(dy + wrad_) * w + (dx + wrad_);
                const double dgx = kwx_[kb];
                const double dgy = kwy_[kb];
                acc += std::sqrt((gx_[id] + dgx) * (gx_[id] + dgx) + (gy_[id] + dgy) * (gy_[id] + dgy)) -
                       std::sqrt(gx_[id] * gx_[id] + gy_[id] * gy_[id]);
            }
        }
        return acc * grid_.cell_area();
    }

    void apply_swap(std::size_t a, std::size_t b, double d_hn) {
        hn_ += d_hn;
        const int ax = static_cast<int>(a) & mask_, ay = static_cast<int>(a) / n_;
        const int bx = static_cast<int>(b) & mask_, by = static_cast<int>(b) / n_;
        for (int yy = 0; yy < n_; ++yy) {
            const std::size_t row = static_cast<std::size_t>(yy) * n_;
            const std::size_t rowa = static_cast<std::size_t>((yy - ay + n_) & mask_) * n_;
            const std::size_t rowb = static_cast<std::size_t>((yy - by + n_) & mask_) * n_;
            for (int xx = 0; xx < n_; ++xx) {
                const std::size_t ia = rowa + ((xx - ax + n_) & mask_);
                const std::size_t ib = rowb + ((xx - bx + n_) & mask_);
                q_[row + xx] += green_[ib] - green_[ia];
                gx_[row + xx] += kern_.kx[ib] - kern_.kx[ia];
                gy_[row + xx] += kern_.ky[ib] - kern_.ky[ia];
            }
        }
        chi_[a] = 0;
        chi_[b] = 1;
        perim_ = perimeter_from_fields();
    }

    double perimeter_from_fields() const {
        double acc = 0.0;
        for (std::size_t i = 0; i < gx_.size(); ++i) acc += std::sqrt(gx_[i] * gx_[i] + gy_[i] * gy_[i]);
        return acc * grid_.cell_area();
    }

    void refresh_fields() {
        const Grid& g = grid_;
        ScalarField gf(g);
        for (std::size_t i = 0; i < chi_.size(); ++i)
            gf[i] = static_cast<double>(chi_[i]) - static_cast<double>(chi_prev_[i]) + h_transport_[i];
        Spectrum s = ops_.forward(gf);
        const std::vector<double>& inv = ops_.inv_ksq();
        double hn = 0.0;
        Spectrum qs(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            hn += inv[i] * std::norm(s[i]);
            qs[i] = s[i] * inv[i];
        }
        hn_ = hn * g.cell_area() / static_cast<double>(g.cells());
        ScalarField qf = ops_.inverse(qs);
        q_.assign(qf.data(), qf.data() + g.cells());

        ScalarField chif(g);
        for (std::size_t i = 0; i < chi_.size(); ++i) chif[i] = chi_[i];
        const std::vector<double> gauss = ops_.gaussian_factors(delta_);
        Spectrum cs = ops_.forward(chif);
        Spectrum sx(cs.size()), sy(cs.size());
        for (int iy = 0; iy < n_; ++iy) {
            for (int ix = 0; ix < n_; ++ix) {
                const std::size_t id = g.idx(ix, iy);
                const double w = gauss[ix] * gauss[iy];
                const std::complex<double> v = cs[id] * w;
                sx[id] = std::complex<double>(-ops_.dk(ix) * v.imag(), ops_.dk(ix) * v.real());
                sy[id] = std::complex<double>(-ops_.dk(iy) * v.imag(), ops_.dk(iy) * v.real());
            }
        }
        ScalarField fx = ops_.inverse(sx);
        ScalarField fy = ops_.inverse(sy);
        gx_.assign(fx.data(), fx.data() + g.cells());
        gy_.assign(fy.data(), fy.data() + g.cells());
        perim_ = perimeter_from_fields();
    }

    const SpectralOps& ops_;
    const HNegWorkspace& hneg_;
    Grid grid_;
    int n_;
    int mask_;
    MsStepConfig cfg_;
    double delta_;
    SplitMix64 rng_;

    std::vector<double> green_;
    double green0_ = 0.0;
    GradMollifyKernel kern_;
    int wrad_ = 0;
    std::vector<double> kwx_, kwy_;
    std::vector<double> h_transport_;

    std::vector<std::uint8_t> chi_;
    std::vector<std::uint8_t> chi_prev_;
    std::vector<double> q_, gx_, gy_;
    double hn_ = 0.0, perim_ = 0.0;

    std::vector<std::uint8_t> best_chi_;
    double best_f_ = 0.0, initial_f_ = 0.0;

    std::vector<std::size_t> boundary_ones_, boundary_zeros_;
};

}  // namespace

BinaryPhase minimize_fh(const SpectralOps& ops, const HNegWorkspace& hneg, const BinaryPhase& chi_prev,
                        const VectorField& v_prev, const MsStepConfig& cfg, AnnealReport* report) {
    FhAnnealer annealer(ops, hneg, chi_prev, v_prev, cfg);
    annealer.run(report);
    return BinaryPhase(chi_prev.grid(), annealer.best_chi());
}

ScalarField chemical_potential(const SpectralOps& ops, const HNegWorkspace& hneg, const BinaryPhase& chi_new,
                               const BinaryPhase& chi_prev, const VectorField& v_prev, double h, double mobility) {
    if (chi_new.mass() != chi_prev.mass())
        throw MassMismatchError("chemical_potential: mass changed across the step");
    const ScalarField transport = transport_term(ops, chi_prev, v_prev);
    ScalarField rate(chi_new.grid());
    for (std::size_t i = 0; i < rate.size(); ++i) {
        const double dchi = static_cast<double>(chi_new[i]) - static_cast<double>(chi_prev[i]);
        rate[i] = dchi / h + transport[i];
    }
    ScalarField mu0 = hneg.inv_neg_laplacian(rate);
    mu0 *= -1.0 / mobility;
    return mu0;
}

MsStepResult ms_step(const SpectralOps& ops, const HNegWorkspace& hneg, const BinaryPhase& chi_prev,
                     const VectorField& v_prev, const MsStepConfig& cfg, AnnealReport* report) {
    FhAnnealer annealer(ops, hneg, chi_prev, v_prev, cfg);
    annealer.run(report);
    MsStepResult res{BinaryPhase(chi_prev.grid(), annealer.best_chi()), ScalarField{}, 0.0, annealer.initial_f(),
                     annealer.best_f(),                                 0.0};
    res.mu0 = chemical_potential(ops, hneg, res.chi_new, chi_prev, v_prev, cfg.h, cfg.mobility);
    res.lambda = lagrange_multiplier(ops, hneg, res.chi_new, res.mu0, cfg.resolved_delta(chi_prev.grid()), cfg.kappa);
    res.perimeter_new = perimeter(ops, res.chi_new, cfg.resolved_delta(chi_prev.grid()));
    return res;
}

}  // namespace nsms
