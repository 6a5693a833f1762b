#include "gnde/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include "gnde/config.hpp"
#include "gnde/errors.hpp"

namespace gnde {

std::string_view to_string(SolverMethod method) {
    switch (method) {
        case SolverMethod::rk4: return "rk4";
        case SolverMethod::dp5: return "dp5";
        case SolverMethod::picard: return "picard";
    }
    return "unknown";
}

SolverMethod parse_solver_method(std::string_view text) {
    if (text == "rk4") return SolverMethod::rk4;
    if (text == "dp5") return SolverMethod::dp5;
    if (text == "picard") return SolverMethod::picard;
    throw InvalidParameter("unknown solver '" + std::string(text) + "'");
}

void SolverConfig::validate() const {
    if (eval_intervals < 1) throw InvalidParameter("evaluation grid needs M >= 1");
    if (rk4.step < 0.0) throw InvalidParameter("rk4 step must be positive");
    if (!(dp5.atol > 0.0) || !(dp5.rtol > 0.0)) {
        throw InvalidParameter("dp5 tolerances must be positive");
    }
    if (dp5.initial_step < 0.0) throw InvalidParameter("dp5 initial step must be positive");
    if (dp5.max_steps < 1) throw InvalidParameter("dp5 max steps must be >= 1");
    if (!(picard.points_per_unit > 0.0)) throw InvalidParameter("picard grid must be positive");
    if (picard.max_iterations < 1) throw InvalidParameter("picard needs max iterations >= 1");
    if (!(picard.tolerance > 0.0)) throw InvalidParameter("picard tolerance must be positive");
}

std::vector<double> eval_grid(double horizon, std::size_t intervals) {
    std::vector<double> t(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) {
        t[i] = horizon * static_cast<double>(i) / static_cast<double>(intervals);
    }
    t.back() = horizon;
    return t;
}

Matrix rhs(const Matrix& shift, const Matrix& x, const FilterBank& bank, const Activation& act,
           double t) {
    return gnn_forward(shift, x, bank.at(t), act);
}

namespace {

void check_inputs(const Matrix& shift, const Matrix& z, const FilterBank& bank, double horizon) {
    if (!(horizon > 0.0)) throw InvalidParameter("horizon must be positive");
    if (shift.rows() != z.rows() || shift.cols() != z.rows()) {
        throw DimensionError("shift and initial features disagree on the node count");
    }
    if (z.cols() != bank.features()) {
        throw DimensionError("initial features have " + std::to_string(z.cols()) +
                             " channels, filter bank expects " + std::to_string(bank.features()));
    }
    if (bank.law() == TimeLaw::fourier && bank.horizon() < horizon) {
        throw DomainError("fourier filter horizon is shorter than the integration horizon");
    }
}

bool all_finite(const Matrix& x) {
    for (double v : x.data()) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

// Evaluates the vector field, clamping stage times into [0, T] against rounding.
class Field {
public:
    Field(const Matrix& shift, const FilterBank& bank, const Activation& act, double horizon)
        : shift_(shift), bank_(bank), act_(act), horizon_(horizon) {}

    void operator()(double t, const Matrix& x, Matrix& out) {
        ++evaluations;
        const double tc = std::clamp(t, 0.0, horizon_);
        if (bank_.law() == TimeLaw::constant) {
            if (!cached_) {
                coeffs_ = bank_.at(0.0);
                cached_ = true;
            }
            gnn_forward(shift_, x, coeffs_, act_, ws_, out);
        } else {
            gnn_forward(shift_, x, bank_.at(tc), act_, ws_, out);
        }
    }

    std::uint64_t evaluations = 0;

private:
    const Matrix& shift_;
    const FilterBank& bank_;
    const Activation& act_;
    double horizon_;
    ForwardWorkspace ws_;
    FilterCoefficients coeffs_{};
    bool cached_ = false;
};

// y = x + sum_i c_i k_i
void combine(Matrix& y, const Matrix& x, std::initializer_list<std::pair<double, const Matrix*>> terms) {
    auto yd = y.data();
    auto xd = x.data();
    for (std::size_t i = 0; i < yd.size(); ++i) {
        double s = xd[i];
        for (const auto& [c, k] : terms) s += c * k->data()[i];
        yd[i] = s;
    }
}

TrajectoryRecord integrate_rk4(const Matrix& z, Field& field, double horizon,
                               const SolverConfig& cfg) {
    const double h = cfg.rk4.step > 0.0 ? cfg.rk4.step : horizon / 200.0;
    TrajectoryRecord rec;
    rec.times = eval_grid(horizon, cfg.eval_intervals);
    rec.states.reserve(rec.times.size());
    rec.states.push_back(z);
    rec.meta.method = "rk4";
    rec.meta.settings = "h=" + format_double(h) + ";M=" + std::to_string(cfg.eval_intervals);

    const std::size_t n = z.rows();
    const std::size_t f = z.cols();
    Matrix y = z;
    Matrix k1(n, f), k2(n, f), k3(n, f), k4(n, f), tmp(n, f);
    for (std::size_t i = 0; i + 1 < rec.times.size(); ++i) {
        const double t0 = rec.times[i];
        const double dt = rec.times[i + 1] - t0;
        const double ratio = dt / h;
        auto sub = static_cast<std::size_t>(std::max(1.0, std::ceil(ratio * (1.0 - 1e-12))));
        const double step = dt / static_cast<double>(sub);
        for (std::size_t j = 0; j < sub; ++j) {
            const double t = t0 + static_cast<double>(j) * step;
            field(t, y, k1);
            combine(tmp, y, {{0.5 * step, &k1}});
            field(t + 0.5 * step, tmp, k2);
            combine(tmp, y, {{0.5 * step, &k2}});
            field(t + 0.5 * step, tmp, k3);
            combine(tmp, y, {{step, &k3}});
            field(t + step, tmp, k4);
            combine(y, y, {{step / 6.0, &k1}, {step / 3.0, &k2}, {step / 3.0, &k3}, {step / 6.0, &k4}});
            ++rec.meta.accepted;
            if (!all_finite(y)) {
                throw DivergenceError("rk4 state became non-finite", t + step);
            }
        }
        rec.states.push_back(y);
    }
    rec.meta.rhs_evaluations = field.evaluations;
    return rec;
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

TrajectoryRecord integrate_dp5(const Matrix& z, Field& field, double horizon,
                               const SolverConfig& cfg) {
    const Dp5Options& o = cfg.dp5;
    constexpr double beta = 0.04;
    constexpr double expo1 = 0.2 - beta * 0.75;
    constexpr double safe = 0.9;
    constexpr double facc1 = 5.0;
    constexpr double facc2 = 0.1;
    constexpr double uround = std::numeric_limits<double>::epsilon();

    TrajectoryRecord rec;
    rec.times = eval_grid(horizon, cfg.eval_intervals);
    rec.states.reserve(rec.times.size());
    rec.states.push_back(z);
    const double h0 = o.initial_step > 0.0 ? o.initial_step : horizon / 100.0;
    rec.meta.method = "dp5";
    rec.meta.settings = "atol=" + format_double(o.atol) + ";rtol=" + format_double(o.rtol) +
                        ";h0=" + format_double(h0) + ";max_steps=" + std::to_string(o.max_steps) +
                        ";M=" + std::to_string(cfg.eval_intervals);

    const std::size_t n = z.rows();
    const std::size_t f = z.cols();
    const std::size_t dim = n * f;
    Matrix y = z, y1(n, f), ys(n, f);
    Matrix k1(n, f), k2(n, f), k3(n, f), k4(n, f), k5(n, f), k6(n, f), k7(n, f);
    std::size_t next_eval = 1;

    double t = 0.0;
    double h = std::min(h0, horizon);
    double facold = 1e-4;
    bool reject = false;
    field(t, y, k1);

    while (next_eval < rec.times.size()) {
        if (rec.meta.accepted >= o.max_steps) {
            throw NonconvergenceError("dp5 exceeded " + std::to_string(o.max_steps) +
                                      " accepted steps",
                                      t);
        }
        if (0.1 * h <= std::abs(t) * uround) {
            throw NonconvergenceError("dp5 step size underflow", t);
        }
        bool last = false;
        if (t + 1.01 * h >= horizon) {
            h = horizon - t;
            last = true;
        }
        combine(ys, y, {{h * a21, &k1}});
        field(t + c2 * h, ys, k2);
        combine(ys, y, {{h * a31, &k1}, {h * a32, &k2}});
        field(t + c3 * h, ys, k3);
        combine(ys, y, {{h * a41, &k1}, {h * a42, &k2}, {h * a43, &k3}});
        field(t + c4 * h, ys, k4);
        combine(ys, y, {{h * a51, &k1}, {h * a52, &k2}, {h * a53, &k3}, {h * a54, &k4}});
        field(t + c5 * h, ys, k5);
        combine(ys, y, {{h * a61, &k1}, {h * a62, &k2}, {h * a63, &k3}, {h * a64, &k4}, {h * a65, &k5}});
        field(t + h, ys, k6);
        combine(y1, y, {{h * a71, &k1}, {h * a73, &k3}, {h * a74, &k4}, {h * a75, &k5}, {h * a76, &k6}});
        if (!all_finite(y1)) throw DivergenceError("dp5 state became non-finite", t + h);
        field(t + h, y1, k7);

        double err = 0.0;
        {
            auto yd = y.data();
            auto y1d = y1.data();
            for (std::size_t i = 0; i < dim; ++i) {
                const double e = h * (e1 * k1.data()[i] + e3 * k3.data()[i] + e4 * k4.data()[i] +
                                      e5 * k5.data()[i] + e6 * k6.data()[i] + e7 * k7.data()[i]);
                const double sk = o.atol + o.rtol * std::max(std::abs(yd[i]), std::abs(y1d[i]));
                err += (e / sk) * (e / sk);
            }
            err = std::sqrt(err / static_cast<double>(dim));
        }
        const double fac11 = std::pow(err, expo1);
        double fac = fac11 / std::pow(facold, beta);
        fac = std::max(facc2, std::min(facc1, fac / safe));
        double hnew = h / fac;

        if (err <= 1.0) {
            facold = std::max(err, 1e-4);
            ++rec.meta.accepted;
            const double t_new = last ? horizon : t + h;
            bool have_dense = false;
            Matrix rcont2, rcont3, rcont4, rcont5;
            while (next_eval < rec.times.size() && rec.times[next_eval] <= t_new) {
                const double te = rec.times[next_eval];
                if (te == t_new) {
                    rec.states.push_back(y1);
                } else {
                    if (!have_dense) {
                        rcont2 = Matrix(n, f);
                        rcont3 = Matrix(n, f);
                        rcont4 = Matrix(n, f);
                        rcont5 = Matrix(n, f);
                        for (std::size_t i = 0; i < dim; ++i) {
                            const double ydiff = y1.data()[i] - y.data()[i];
                            const double bspl = h * k1.data()[i] - ydiff;
                            rcont2.data()[i] = ydiff;
                            rcont3.data()[i] = bspl;
                            rcont4.data()[i] = ydiff - h * k7.data()[i] - bspl;
                            rcont5.data()[i] =
                                h * (d1 * k1.data()[i] + d3 * k3.data()[i] + d4 * k4.data()[i] +
                                     d5 * k5.data()[i] + d6 * k6.data()[i] + d7 * k7.data()[i]);
                        }
                        have_dense = true;
                    }
                    const double theta = (te - t) / h;
                    const double theta1 = 1.0 - theta;
                    Matrix out(n, f);
                    for (std::size_t i = 0; i < dim; ++i) {
                        out.data()[i] =
                            y.data()[i] +
                            theta * (rcont2.data()[i] +
                                     theta1 * (rcont3.data()[i] +
                                               theta * (rcont4.data()[i] +
                                                        theta1 * rcont5.data()[i])));
                    }
                    rec.states.push_back(std::move(out));
                }
                ++next_eval;
            }
            std::swap(y, y1);
            std::swap(k1, k7);
            t = t_new;
            if (reject) hnew = std::min(hnew, h);
            reject = false;
        } else {
            hnew = h / std::min(facc1, fac11 / safe);
            ++rec.meta.rejected;
            reject = true;
        }
        h = hnew;
    }
    rec.meta.rhs_evaluations = field.evaluations;
    return rec;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    double m = 0.0;
    auto da = a.data();
    auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) m = std::max(m, std::abs(da[i] - db[i]));
    return m;
}

}  // namespace

TrajectoryRecord integrate(const Matrix& shift, const Matrix& z, const FilterBank& bank,
                           const Activation& act, double horizon, const SolverConfig& cfg) {
    cfg.validate();
    check_inputs(shift, z, bank, horizon);
    Field field(shift, bank, act, horizon);
    switch (cfg.method) {
        case SolverMethod::rk4: return integrate_rk4(z, field, horizon, cfg);
        case SolverMethod::dp5: return integrate_dp5(z, field, horizon, cfg);
        case SolverMethod::picard:
            throw UnsupportedOperation("integrate handles rk4 and dp5; use picard_solve");
    }
    throw UnsupportedOperation("unknown solver");
}

TrajectoryRecord picard_solve(const Matrix& shift, const Matrix& z, const FilterBank& bank,
                              const Activation& act, double horizon, const SolverConfig& cfg) {
    cfg.validate();
    check_inputs(shift, z, bank, horizon);
    if (z.rows() > kPicardMaxNodes || horizon > kPicardMaxHorizon) {
        throw ComplexityGuard("picard oracle is limited to n <= " +
                              std::to_string(kPicardMaxNodes) + " and T <= " +
                              format_double(kPicardMaxHorizon));
    }
    const PicardOptions& o = cfg.picard;
    const double growth = std::pow(static_cast<double>(bank.features() * bank.taps()) *
                                       h_sup_certified(bank),
                                   static_cast<double>(bank.layers()));
    const double tau = growth > 0.0 ? std::min(0.4 / growth, horizon) : horizon;

    TrajectoryRecord rec;
    rec.times = eval_grid(horizon, cfg.eval_intervals);
    rec.meta.method = "picard";
    rec.meta.settings = "grid_per_unit=" + format_double(o.points_per_unit) +
                        ";tol=" + format_double(o.tolerance) +
                        ";max_iter=" + std::to_string(o.max_iterations) +
                        ";tau=" + format_double(tau) + ";M=" + std::to_string(cfg.eval_intervals);

    // Fine grid refining every evaluation interval.
    std::vector<double> grid{0.0};
    std::vector<std::size_t> eval_index{0};
    for (std::size_t i = 0; i + 1 < rec.times.size(); ++i) {
        const double t0 = rec.times[i];
        const double dt = rec.times[i + 1] - t0;
        auto sub = static_cast<std::size_t>(
            std::max(1.0, std::ceil(o.points_per_unit * dt * (1.0 - 1e-12))));
        for (std::size_t j = 1; j < sub; ++j) {
            grid.push_back(t0 + dt * static_cast<double>(j) / static_cast<double>(sub));
        }
        grid.push_back(rec.times[i + 1]);
        eval_index.push_back(grid.size() - 1);
    }
    const std::size_t last = grid.size() - 1;

    Field field(shift, bank, act, horizon);
    std::vector<Matrix> x(grid.size(), z);
    std::vector<Matrix> phi(grid.size(), Matrix(z.rows(), z.cols()));
    Matrix acc(z.rows(), z.cols());

    std::size_t s = 0;
    while (s < last) {
        std::size_t e = s + 1;
        while (e < last && grid[e + 1] - grid[s] <= tau * (1.0 + 1e-12)) ++e;
        for (std::size_t j = s + 1; j <= e; ++j) x[j] = x[s];
        field(grid[s], x[s], phi[s]);
        bool converged = false;
        double prev = std::numeric_limits<double>::infinity();
        double factor = 0.0;
        for (std::size_t iter = 0; iter < o.max_iterations; ++iter) {
            for (std::size_t j = s + 1; j <= e; ++j) field(grid[j], x[j], phi[j]);
            ++rec.meta.iterations;
            acc = x[s];
            double change = 0.0;
            for (std::size_t j = s + 1; j <= e; ++j) {
                const double w = 0.5 * (grid[j] - grid[j - 1]);
                combine(acc, acc, {{w, &phi[j - 1]}, {w, &phi[j]}});
                change = std::max(change, max_abs_diff(acc, x[j]));
                x[j] = acc;
            }
            if (!std::isfinite(change)) {
                throw DivergenceError("picard iterate became non-finite", grid[s]);
            }
            if (change < o.tolerance) {
                converged = true;
                break;
            }
            if (std::isfinite(prev) && prev > 0.0) factor = change / prev;
            prev = change;
        }
        if (!converged) {
            throw NonconvergenceError("picard iteration did not converge within " +
                                          std::to_string(o.max_iterations) +
                                          " sweeps; contraction factor estimate " +
                                          format_double(factor),
                                      grid[s]);
        }
        s = e;
    }
    rec.states.reserve(eval_index.size());
    for (std::size_t idx : eval_index) rec.states.push_back(x[idx]);
    rec.meta.accepted = last;
    rec.meta.rhs_evaluations = field.evaluations;
    return rec;
}

TrajectoryRecord solve(const Matrix& shift, const Matrix& z, const FilterBank& bank,
                       const Activation& act, double horizon, const SolverConfig& cfg) {
    if (cfg.method == SolverMethod::picard) return picard_solve(shift, z, bank, act, horizon, cfg);
    return integrate(shift, z, bank, act, horizon, cfg);
}

Matrix permute_rows(const Matrix& x, const std::vector<std::size_t>& perm) {
    if (perm.size() != x.rows()) throw DimensionError("permutation length must equal n");
    Matrix out(x.rows(), x.cols());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        auto src = x.row(perm[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

Matrix permute_symmetric(const Matrix& s, const std::vector<std::size_t>& perm) {
    if (perm.size() != s.rows() || s.rows() != s.cols()) {
        throw DimensionError("permutation length must equal n");
    }
    Matrix out(s.rows(), s.cols());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        for (std::size_t j = 0; j < perm.size(); ++j) out(i, j) = s(perm[i], perm[j]);
    }
    return out;
}

namespace {

void check_permutation(const std::vector<std::size_t>& perm, std::size_t n) {
    if (perm.size() != n) throw DimensionError("permutation length must equal n");
    std::vector<bool> seen(n, false);
    for (std::size_t p : perm) {
        if (p >= n || seen[p]) throw InvalidParameter("perm is not a bijection on node indices");
        seen[p] = true;
    }
}

}  // namespace

double equivariance_check(const Matrix& shift, const Matrix& z, const FilterBank& bank,
                          const Activation& act, double horizon, const SolverConfig& cfg,
                          const std::vector<std::size_t>& perm) {
    check_permutation(perm, z.rows());
    const TrajectoryRecord base = solve(shift, z, bank, act, horizon, cfg);
    const TrajectoryRecord moved =
        solve(permute_symmetric(shift, perm), permute_rows(z, perm), bank, act, horizon, cfg);
    double worst = 0.0;
    for (std::size_t i = 0; i < base.states.size(); ++i) {
        worst = std::max(worst, scaled_distance(permute_rows(base.states[i], perm), moved.states[i]));
    }
    return worst;
}

}  // namespace gnde
