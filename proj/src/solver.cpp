#include "nsk/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nsk/random.hpp"

namespace nsk::solver {

using linear::GreenMatrix;
using linear::LinearParams;
using physics::PhysicsGuards;
using physics::PressureModel;

void SolverConfig::validate() const {
    if (!(dt > 0.0)) throw SolverError("dt must be positive");
    if (T_final < 0.0) throw SolverError("T_final must be nonnegative");
    if (diagnostics_cadence < 1) throw SolverError("diagnostics cadence must be >= 1");
    if (exact_weight && scheme != Scheme::ETD1)
        throw SolverError("exact Duhamel weight is only defined for ETD1");
    if (track_gevrey) {
        if (!(gevrey_c0 > 0.0)) throw SolverError("gevrey tracking needs c0 > 0");
        if (gevrey_c0_cap > 0.0 && gevrey_c0 > gevrey_c0_cap)
            throw SolverError("gevrey c0 exceeds the fitted linear-stage cap");
    }
    for (std::size_t i = 0; i + 1 < snapshot_times.size(); ++i)
        if (!(snapshot_times[i] < snapshot_times[i + 1]))
            throw SolverError("snapshot times must increase");
}

InitialData build_initial_data(const Grid& g, const InitialDataSpec& spec) {
    int d = g.dim();
    double eps_m = spec.momentum_epsilon < 0.0 ? spec.epsilon : spec.momentum_epsilon;
    InitialData out;

    if (spec.family == "gaussian") {
        std::vector<double> a_phys(g.mode_count()), mt_phys(g.mode_count());
        for (std::size_t i = 0; i < g.mode_count(); ++i) {
            auto x = g.coordinate(i);
            double r2 = 0.0;
            for (int axis = 0; axis < d; ++axis) {
                double dx = x[axis] - 0.5 * g.length(axis);
                r2 += dx * dx;
            }
            double bump = std::exp(-r2 / (spec.width * spec.width));
            a_phys[i] = spec.epsilon * bump;
            mt_phys[i] = eps_m * bump;
        }
        out.state = State(g);
        out.state.a = transform_forward(g, a_phys);
        out.m_potential = transform_forward(g, mt_phys);
    } else if (spec.family == "random") {
        std::mt19937_64 rng(spec.seed);
        auto scaled = [&](double eps) {
            SpectralField f = random_band_field(g, rng, spec.band_lo, spec.band_hi);
            std::vector<double> phys = transform_inverse(f);
            double hi = 0.0;
            for (double v : phys) hi = std::max(hi, std::abs(v));
            if (hi > 0.0)
                for (auto& c : f.c) c *= eps / hi;
            return f;
        };
        out.state = State(g);
        out.state.a = scaled(spec.epsilon);
        out.m_potential = scaled(eps_m);
    } else {
        throw SolverError("unknown initial data family: " + spec.family);
    }

    std::array<SpectralField, 3> grad_mt = gradient(out.m_potential);
    for (int j = 0; j < d; ++j) out.state.m[j] = grad_mt[j];
    out.state.t = 0.0;

    besov::DyadicPartition part(g);
    double dp = static_cast<double>(d) / 2.0;
    out.a_norm_low = besov::besov_norm(part, out.state.a, {-2.0 + dp, 2.0, 1.0});
    out.a_norm_high = besov::besov_norm(part, out.state.a, {dp, 2.0, 1.0});
    SpectralField m_amp(g);
    for (std::size_t i = 0; i < g.mode_count(); ++i) {
        double s = 0.0;
        for (int j = 0; j < d; ++j) s += std::norm(out.state.m[j].c[i]);
        m_amp.c[i] = std::sqrt(s);
    }
    out.m_norm_low = besov::besov_norm(part, m_amp, {-3.0 + dp, 2.0, 1.0});
    out.m_norm_high = besov::besov_norm(part, m_amp, {-1.0 + dp, 2.0, 1.0});
    return out;
}

namespace {

// per-mode linear tables for a fixed step size: the semigroup blocks and the
// Duhamel weight blocks acting on a forcing of the form (0, N)
class PropagatorTable {
  public:
    PropagatorTable(const Grid& g, double dt, const LinearParams& params, bool exact_weight)
        : grid_(&g), dim_(g.dim()), dt_(dt) {
        std::size_t n = g.mode_count();
        g11_.resize(n);
        for (int j = 0; j < dim_; ++j) {
            g12_[j].resize(n);
            g21_[j].resize(n);
            q12_[j].resize(n);
            for (int k = 0; k < dim_; ++k) {
                g22_[j][k].resize(n);
                q22_[j][k].resize(n);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            GreenMatrix gm = linear::green_matrix(dt, g.wavevector(i), dim_, params);
            GreenMatrix qm;
            if (exact_weight) {
                qm = linear::green_time_integral(dt, g.wavevector(i), dim_, params);
            } else {
                // trapezoid weight (dt/2)(G(dt) + Id)
                qm = gm;
                qm.g11 = 0.5 * dt * (gm.g11 + 1.0);
                for (int j = 0; j < dim_; ++j) {
                    qm.g12[j] = 0.5 * dt * gm.g12[j];
                    qm.g21[j] = 0.5 * dt * gm.g21[j];
                    for (int k = 0; k < dim_; ++k)
                        qm.g22[j][k] =
                            0.5 * dt * (gm.g22[j][k] + (j == k ? 1.0 : 0.0));
                }
            }
            g11_[i] = gm.g11;
            for (int j = 0; j < dim_; ++j) {
                g12_[j][i] = gm.g12[j];
                g21_[j][i] = gm.g21[j];
                q12_[j][i] = qm.g12[j];
                for (int k = 0; k < dim_; ++k) {
                    g22_[j][k][i] = gm.g22[j][k];
                    q22_[j][k][i] = qm.g22[j][k];
                }
            }
        }
    }

    // out = G U
    void apply_semigroup(const State& u, State& out) const {
        std::size_t n = grid_->mode_count();
        for (std::size_t i = 0; i < n; ++i) {
            cplx a = g11_[i] * u.a.c[i];
            for (int k = 0; k < dim_; ++k) a += g12_[k][i] * u.m[k].c[i];
            out.a.c[i] = a;
            for (int j = 0; j < dim_; ++j) {
                cplx m = g21_[j][i] * u.a.c[i];
                for (int k = 0; k < dim_; ++k) m += g22_[j][k][i] * u.m[k].c[i];
                out.m[j].c[i] = m;
            }
        }
    }

    // out += coeff * G (0, N)
    void add_semigroup_forcing(const std::array<SpectralField, 3>& N, double coeff,
                               State& out) const {
        std::size_t n = grid_->mode_count();
        for (std::size_t i = 0; i < n; ++i) {
            cplx a{0.0, 0.0};
            for (int k = 0; k < dim_; ++k) a += g12_[k][i] * N[k].c[i];
            out.a.c[i] += coeff * a;
            for (int j = 0; j < dim_; ++j) {
                cplx m{0.0, 0.0};
                for (int k = 0; k < dim_; ++k) m += g22_[j][k][i] * N[k].c[i];
                out.m[j].c[i] += coeff * m;
            }
        }
    }

    // out += Q (0, N)
    void add_duhamel_forcing(const std::array<SpectralField, 3>& N, State& out) const {
        std::size_t n = grid_->mode_count();
        for (std::size_t i = 0; i < n; ++i) {
            cplx a{0.0, 0.0};
            for (int k = 0; k < dim_; ++k) a += q12_[k][i] * N[k].c[i];
            out.a.c[i] += a;
            for (int j = 0; j < dim_; ++j) {
                cplx m{0.0, 0.0};
                for (int k = 0; k < dim_; ++k) m += q22_[j][k][i] * N[k].c[i];
                out.m[j].c[i] += m;
            }
        }
    }

  private:
    const Grid* grid_;
    int dim_;
    double dt_;
    std::vector<cplx> g11_;
    std::array<std::vector<cplx>, 3> g12_, g21_, q12_;
    std::array<std::array<std::vector<cplx>, 3>, 3> g22_, q22_;
};

std::array<SpectralField, 3> zero_forcing(const Grid& g) {
    std::array<SpectralField, 3> N;
    for (int j = 0; j < g.dim(); ++j) N[j] = SpectralField(g);
    return N;
}

State advance(const State& u, const PropagatorTable& table, const SolverConfig& config,
              const LinearParams& params, const PressureModel& pressure,
              const PhysicsGuards& guards) {
    const Grid& g = u.grid();
    double dt = config.dt;
    std::array<SpectralField, 3> N =
        config.nonlinear
            ? physics::nonlinearity(u, params.mu, params.lambda_visc, params.kappa, pressure,
                                    guards)
            : zero_forcing(g);

    State gu(g);
    table.apply_semigroup(u, gu);

    State out(g);
    out.t = u.t + dt;
    if (config.scheme == Scheme::ETD1) {
        out.a = gu.a;
        for (int j = 0; j < g.dim(); ++j) out.m[j] = gu.m[j];
        table.add_duhamel_forcing(N, out);
        return out;
    }

    // ETD-RK2: predictor with full-step weight dt G, corrector by trapezoid
    State pred(g);
    pred.t = u.t + dt;
    pred.a = gu.a;
    for (int j = 0; j < g.dim(); ++j) pred.m[j] = gu.m[j];
    table.add_semigroup_forcing(N, dt, pred);

    std::array<SpectralField, 3> Np =
        config.nonlinear
            ? physics::nonlinearity(pred, params.mu, params.lambda_visc, params.kappa,
                                    pressure, guards)
            : zero_forcing(g);

    out.a = gu.a;
    for (int j = 0; j < g.dim(); ++j) out.m[j] = gu.m[j];
    table.add_semigroup_forcing(N, 0.5 * dt, out);
    for (int j = 0; j < g.dim(); ++j)
        for (std::size_t i = 0; i < g.mode_count(); ++i)
            out.m[j].c[i] += 0.5 * dt * Np[j].c[i];
    return out;
}

// least-squares slope of log|U| against |xi| over modes inside a relative
// amplitude window, so the fitted band tracks the decaying spectrum
double fit_gevrey_radius(const Grid& g, const std::vector<double>& amp) {
    double peak = 0.0;
    for (double v : amp) peak = std::max(peak, v);
    if (peak <= 0.0) return 0.0;
    double lo = 1e-8 * peak, hi = 1e-2 * peak;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (std::size_t i = 0; i < amp.size(); ++i) {
        if (amp[i] < lo || amp[i] > hi) continue;
        double x = std::sqrt(g.xi_abs2(i));
        if (x == 0.0) continue;
        double y = std::log(amp[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    if (cnt < 8) return 0.0;
    double denom = cnt * sxx - sx * sx;
    if (denom <= 0.0) return 0.0;
    double slope = (cnt * sxy - sx * sy) / denom;
    return slope < 0.0 ? -slope : 0.0;
}

}  // namespace

State step(const State& state, const SolverConfig& config, const LinearParams& params,
           const PressureModel& pressure, const PhysicsGuards& guards) {
    config.validate();
    params.validate();
    PropagatorTable table(state.grid(), config.dt, params, config.exact_weight);
    return advance(state, table, config, params, pressure, guards);
}

Trajectory simulate(const State& initial, const SolverConfig& config,
                    const LinearParams& params, const PressureModel& pressure,
                    const PhysicsGuards& guards) {
    config.validate();
    params.validate();
    pressure.validate();
    const Grid& g = initial.grid();
    int d = g.dim();
    besov::DyadicPartition part(g);
    double s_low = -2.0 + static_cast<double>(d) / config.norm_p;

    Trajectory traj;
    traj.a_block_norms.assign(part.block_count(), {});
    traj.m_block_norms.assign(part.block_count(), {});
    traj.gevrey_block_norms.assign(part.block_count(), {});

    auto record = [&](const State& u) {
        DiagnosticsRow row;
        row.t = u.t;
        row.mass = moment(u.a);
        row.boundary_fraction = boundary_shell_fraction(u.a);

        std::vector<double> ab = besov::block_lebesgue_norms(part, u.a, config.norm_p);
        SpectralField m_amp(g);
        std::vector<double> u_amp(g.mode_count());
        for (std::size_t i = 0; i < g.mode_count(); ++i) {
            double s = 0.0;
            for (int j = 0; j < d; ++j) s += std::norm(u.m[j].c[i]);
            m_amp.c[i] = std::sqrt(s);
            u_amp[i] = std::sqrt(s + std::norm(u.a.c[i]));
        }
        std::vector<double> mb = besov::block_lebesgue_norms(part, m_amp, config.norm_p);
        for (int b = 0; b < part.block_count(); ++b) {
            row.a_norm += ab[b];
            row.m_norm += mb[b];
            traj.a_block_norms[b].push_back(ab[b]);
            traj.m_block_norms[b].push_back(mb[b]);
        }
        row.gevrey_radius = fit_gevrey_radius(g, u_amp);

        if (config.track_gevrey) {
            double radius = std::sqrt(config.gevrey_c0 * std::max(u.t, 0.0));
            if (radius * g.xi_max() > 700.0)
                throw SolverError("gevrey weight overflow during tracking");
            SpectralField weighted(g);
            for (std::size_t i = 0; i < g.mode_count(); ++i) {
                double r = std::sqrt(g.xi_abs2(i));
                double wamp = std::sqrt(g.xi_abs2(i) * std::norm(u.a.c[i]) +
                                        std::norm(m_amp.c[i]));
                weighted.c[i] = wamp * std::exp(radius * r);
            }
            std::vector<double> gb =
                besov::block_lebesgue_norms(part, weighted, config.norm_p);
            for (int b = 0; b < part.block_count(); ++b) {
                row.gevrey_norm += std::exp2(s_low * (part.j_min() + b)) * gb[b];
                traj.gevrey_block_norms[b].push_back(gb[b]);
            }
        }
        traj.rows.push_back(row);

        traj.moments.times.push_back(u.t);
        traj.moments.pressure.push_back(physics::pressure_moment_integrand(u.a, pressure));
        traj.moments.momentum.push_back(
            physics::momentum_moment_integrand(u, params.kappa, guards));
        return row;
    };

    State u = initial;
    DiagnosticsRow row0 = record(u);
    if (config.wrap_guard > 0.0 && row0.boundary_fraction > config.wrap_guard) {
        traj.aborted = true;
        traj.abort_reason = "wrap-around guard violated by the initial data";
        traj.final_state = u;
        return traj;
    }

    std::size_t snap_idx = 0;
    auto maybe_snapshot = [&](const State& s) {
        while (snap_idx < config.snapshot_times.size() &&
               s.t >= config.snapshot_times[snap_idx] - 0.5 * config.dt) {
            traj.snapshot_times.push_back(s.t);
            traj.snapshots.push_back(s);
            ++snap_idx;
        }
    };
    maybe_snapshot(u);

    long nsteps = std::lround(config.T_final / config.dt);
    if (nsteps > 0) {
        PropagatorTable table(g, config.dt, params, config.exact_weight);
        for (long i = 1; i <= nsteps; ++i) {
            try {
                u = advance(u, table, config, params, pressure, guards);
            } catch (const physics::PhysicsError& e) {
                traj.aborted = true;
                traj.abort_reason = e.what();
                break;
            }
            u.t = initial.t + static_cast<double>(i) * config.dt;
            maybe_snapshot(u);
            if (i % config.diagnostics_cadence == 0 || i == nsteps) {
                DiagnosticsRow row = record(u);
                if (config.wrap_guard > 0.0 && row.boundary_fraction > config.wrap_guard) {
                    traj.aborted = true;
                    traj.abort_reason = "wrap-around guard violated at t = " +
                                        std::to_string(u.t);
                    break;
                }
            }
        }
    }
    traj.final_state = u;
    return traj;
}

AsymptoticMoments accumulate_nonlinear_moments(const Trajectory& traj,
                                               const InitialData& data) {
    const auto& ms = traj.moments;
    if (ms.times.size() < 2)
        throw SolverError("moment accumulation needs at least 2 integrand samples");
    AsymptoticMoments out;
    out.alpha = moment(data.state.a);
    out.beta = moment(data.m_potential);

    int d = data.state.grid().dim();
    for (std::size_t i = 0; i + 1 < ms.times.size(); ++i) {
        double w = 0.5 * (ms.times[i + 1] - ms.times[i]);
        out.pi_P += w * (ms.pressure[i] + ms.pressure[i + 1]);
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                out.M[j][k] += w * (ms.momentum[i][j][k] + ms.momentum[i + 1][j][k]);
    }

    // tail beyond T: fit the decay slope of the total integrand magnitude
    // over the last decade; extrapolate only when it is steeper than -1
    double T = ms.times.back();
    double t_lo = std::max(T / 10.0, ms.times.front());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (std::size_t i = 0; i < ms.times.size(); ++i) {
        if (ms.times[i] < t_lo || ms.times[i] <= 0.0) continue;
        double mag = std::abs(ms.pressure[i]);
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) mag += std::abs(ms.momentum[i][j][k]);
        if (mag <= 0.0) continue;
        double x = std::log(ms.times[i]), y = std::log(mag);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    if (cnt >= 8) {
        double denom = cnt * sxx - sx * sx;
        if (denom > 0.0) {
            out.tail_slope = (cnt * sxy - sx * sy) / denom;
            if (out.tail_slope < -1.0) {
                out.tail_estimable = true;
                // int_T^inf v(T) (t/T)^slope dt = v(T) T / (-slope - 1)
                double factor = T / (-out.tail_slope - 1.0);
                out.pressure_tail = ms.pressure.back() * factor;
                out.pi_P += out.pressure_tail;
                for (int j = 0; j < d; ++j)
                    for (int k = 0; k < d; ++k)
                        out.M[j][k] += ms.momentum.back()[j][k] * factor;
            }
        }
    }
    return out;
}

std::vector<double> log_spaced_times(double t0, double t1, int count) {
    if (!(t0 > 0.0) || !(t1 > t0) || count < 2)
        throw SolverError("log_spaced_times needs 0 < t0 < t1 and count >= 2");
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i)
        out[i] = t0 * std::pow(t1 / t0, static_cast<double>(i) / (count - 1));
    return out;
}

}  // namespace nsk::solver
