#include "sosb/tracker.hpp"

#include <cmath>
#include <limits>
#include <optional>

namespace sosb {

namespace {

constexpr double kPi = 3.14159265358979323846;

double norm_inf(const Eigen::VectorXcd& v) {
    double m = 0.0;
    for (long i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v[i]));
    return m;
}

bool all_finite(const Eigen::VectorXcd& v) {
    for (long i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
    return true;
}

}  // namespace

Homotopy::Homotopy(PolySystem f, PolySystem g, Cplx gamma_)
    : target(std::move(f)), start(std::move(g)), gamma(gamma_) {
    if (target.nvars != start.nvars || target.size() != start.size())
        throw std::invalid_argument("Homotopy: target/start shape mismatch");
    if (gamma == Cplx(0.0, 0.0)) throw std::invalid_argument("Homotopy: gamma must be nonzero");
}

std::string to_string(PathStatus s) {
    switch (s) {
        case PathStatus::Success: return "Success";
        case PathStatus::Divergent: return "Divergent";
        case PathStatus::StepFailure: return "StepFailure";
        case PathStatus::MaxSteps: return "MaxSteps";
    }
    return "?";
}

CompiledPoly CompiledPoly::compile(const Polynomial& p) {
    CompiledPoly out;
    out.offsets.push_back(0);
    for (const Term& t : p.terms()) {
        out.coeffs.push_back(t.coeff);
        for (int v = 0; v < p.nvars(); ++v)
            if (t.mono.exp[v] != 0) out.factors.push_back(Factor{v, t.mono.exp[v]});
        out.offsets.push_back(static_cast<std::uint32_t>(out.factors.size()));
    }
    return out;
}

Cplx CompiledPoly::eval(const Cplx* x) const {
    Cplx acc(0.0, 0.0);
    for (std::size_t t = 0; t < coeffs.size(); ++t) {
        Cplx m = coeffs[t];
        for (std::uint32_t i = offsets[t]; i < offsets[t + 1]; ++i) {
            const Cplx v = x[factors[i].var];
            switch (factors[i].exp) {
                case 1: m *= v; break;
                case 2: m *= v * v; break;
                default: {
                    Cplx b = v, r(1.0, 0.0);
                    int e = factors[i].exp;
                    while (e > 0) {
                        if (e & 1) r *= b;
                        b *= b;
                        e >>= 1;
                    }
                    m *= r;
                }
            }
        }
        acc += m;
    }
    return acc;
}

SystemEval::SystemEval(PolySystem sys) : sys_(std::move(sys)), jac_(jacobian(sys_)) {
    eqs_c_.reserve(sys_.equations.size());
    for (const Polynomial& e : sys_.equations) eqs_c_.push_back(CompiledPoly::compile(e));
    jac_c_.reserve(jac_.size() * static_cast<std::size_t>(sys_.nvars));
    for (const auto& row : jac_)
        for (const Polynomial& e : row) jac_c_.push_back(CompiledPoly::compile(e));
}

Eigen::VectorXcd SystemEval::eval(const Eigen::VectorXcd& x) const {
    Eigen::VectorXcd out(sys_.size());
    for (int i = 0; i < sys_.size(); ++i) out[i] = eqs_c_[i].eval(x.data());
    return out;
}

Eigen::MatrixXcd SystemEval::jacobian_at(const Eigen::VectorXcd& x) const {
    Eigen::MatrixXcd out(sys_.size(), sys_.nvars);
    const int nv = sys_.nvars;
    for (int i = 0; i < sys_.size(); ++i)
        for (int j = 0; j < nv; ++j)
            out(i, j) = jac_c_[static_cast<std::size_t>(i) * nv + j].eval(x.data());
    return out;
}

namespace {

struct HomotopyEval {
    const SystemEval& target;
    const SystemEval& start;
    Cplx gamma;

    int n() const { return target.nvars(); }

    Eigen::VectorXcd H(const Eigen::VectorXcd& x, Cplx t) const {
        return gamma * t * start.eval(x) + (1.0 - t) * target.eval(x);
    }
    Eigen::MatrixXcd Hx(const Eigen::VectorXcd& x, Cplx t) const {
        return gamma * t * start.jacobian_at(x) + (1.0 - t) * target.jacobian_at(x);
    }
    Eigen::VectorXcd Ht(const Eigen::VectorXcd& x) const {
        return gamma * start.eval(x) - target.eval(x);
    }
};

// dx/dt from the Davidenko ODE; nullopt when the linear solve degenerates.
std::optional<Eigen::VectorXcd> davidenko(const HomotopyEval& he, const Eigen::VectorXcd& x,
                                          Cplx t) {
    Eigen::VectorXcd rhs = -he.Ht(x);
    Eigen::VectorXcd dx = he.Hx(x, t).partialPivLu().solve(rhs);
    if (!all_finite(dx)) return std::nullopt;
    return dx;
}

// corrector: update norm relative to the iterate scale, so paths with large
// coordinates are not starved by the double-precision residual floor
bool newton_on_h(const HomotopyEval& he, Eigen::VectorXcd& x, Cplx t, double tol,
                 int max_iters) {
    for (int it = 0; it < max_iters; ++it) {
        Eigen::VectorXcd r = he.H(x, t);
        Eigen::VectorXcd delta = he.Hx(x, t).partialPivLu().solve(-r);
        if (!all_finite(delta)) return false;
        x += delta;
        if (!all_finite(x)) return false;
        if (norm_inf(delta) <= tol * std::max(1.0, norm_inf(x))) return true;
    }
    return false;
}

std::optional<Eigen::VectorXcd> rk4_predict(const HomotopyEval& he, const Eigen::VectorXcd& x,
                                            Cplx t, Cplx dt) {
    auto k1 = davidenko(he, x, t);
    if (!k1) return std::nullopt;
    auto k2 = davidenko(he, x + (dt / 2.0) * *k1, t + dt / 2.0);
    if (!k2) return std::nullopt;
    auto k3 = davidenko(he, x + (dt / 2.0) * *k2, t + dt / 2.0);
    if (!k3) return std::nullopt;
    auto k4 = davidenko(he, x + dt * *k3, t + dt);
    if (!k4) return std::nullopt;
    Eigen::VectorXcd out = x + (dt / 6.0) * (*k1 + 2.0 * *k2 + 2.0 * *k3 + *k4);
    if (!all_finite(out)) return std::nullopt;
    return out;
}

// Euler predictor + Newton corrector from t_from to t_to, bisecting the
// segment on corrector failure.
bool track_complex_segment(const HomotopyEval& he, Eigen::VectorXcd& x, Cplx t_from,
                           Cplx t_to, const TrackerConfig& cfg, int depth, int* budget) {
    if (*budget <= 0) return false;
    --*budget;
    Eigen::VectorXcd trial = x;
    auto dx = davidenko(he, trial, t_from);
    if (dx) {
        trial += *dx * (t_to - t_from);
        if (all_finite(trial) && newton_on_h(he, trial, t_to, cfg.newton_tol,
                                             cfg.corrector_iters)) {
            x = trial;
            return true;
        }
    }
    if (depth <= 0) return false;
    const Cplx mid = (t_from + t_to) / 2.0;
    return track_complex_segment(he, x, t_from, mid, cfg, depth - 1, budget) &&
           track_complex_segment(he, x, mid, t_to, cfg, depth - 1, budget);
}

struct LoopResult {
    bool closed = false;
    bool diverged = false;
    int winding = 0;
    Eigen::VectorXcd estimate;
};

LoopResult loop_at_radius(const HomotopyEval& he, Eigen::VectorXcd& x, double r,
                          const TrackerConfig& cfg, int* budget) {
    LoopResult res;
    const Eigen::VectorXcd x_start = x;
    const double close_tol =
        std::max(1e3 * cfg.newton_tol, 1e-9) * std::max(1.0, norm_inf(x_start));
    Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(x.size());
    long count = 0;
    double theta = 0.0;
    for (int w = 1; w <= cfg.max_winding; ++w) {
        for (int s = 0; s < cfg.endgame_samples; ++s) {
            const double theta_next = theta + 2.0 * kPi / cfg.endgame_samples;
            const Cplx t_from = r * Cplx(std::cos(theta), std::sin(theta));
            const Cplx t_to = r * Cplx(std::cos(theta_next), std::sin(theta_next));
            if (!track_complex_segment(he, x, t_from, t_to, cfg, 6, budget)) return res;
            if (norm_inf(x) > cfg.security_norm) {
                res.diverged = true;
                return res;
            }
            sum += x;
            ++count;
            theta = theta_next;
        }
        if (norm_inf(x - x_start) <= close_tol) {
            res.closed = true;
            res.winding = w;
            res.estimate = sum / static_cast<double>(count);
            return res;
        }
    }
    return res;
}

EndgameResult run_cauchy(const HomotopyEval& he, const Eigen::VectorXcd& x_at_radius,
                         double radius, const TrackerConfig& cfg) {
    EndgameResult out;
    Eigen::VectorXcd x = x_at_radius;
    double r = radius;
    int budget = 8 * cfg.endgame_samples * cfg.max_winding * cfg.endgame_max_radii;
    Eigen::VectorXcd prev;
    bool have_prev = false;
    double first_norm = -1.0;
    int growth_streak = 0;
    for (int iter = 0; iter < cfg.endgame_max_radii && r > 1e-14; ++iter) {
        LoopResult loop = loop_at_radius(he, x, r, cfg, &budget);
        if (loop.diverged) {
            out.diverged = true;
            out.endpoint = from_eigen(x);
            return out;
        }
        if (!loop.closed) {
            out.endpoint = from_eigen(x);
            out.winding_estimate = 0;
            out.low_confidence = true;
            return out;
        }
        out.winding_estimate = loop.winding;
        if (have_prev && norm_inf(loop.estimate - prev) <= 10.0 * cfg.newton_tol) {
            out.endpoint = from_eigen(loop.estimate);
            out.converged = true;
            return out;
        }

        // sustained estimate growth marks a path to infinity well before the
        // security norm itself is reached
        const double est_norm = norm_inf(loop.estimate);
        if (first_norm < 0.0) first_norm = std::max(1.0, est_norm);
        growth_streak = (have_prev && est_norm > 1.5 * norm_inf(prev)) ? growth_streak + 1 : 0;
        if (est_norm > cfg.security_norm ||
            (growth_streak >= 3 && est_norm > 1e3 * first_norm)) {
            out.diverged = true;
            out.endpoint = from_eigen(x);
            return out;
        }

        prev = loop.estimate;
        have_prev = true;
        if (!track_complex_segment(he, x, Cplx(r, 0.0), Cplx(r * cfg.endgame_ratio, 0.0),
                                   cfg, 10, &budget)) {
            out.endpoint = from_eigen(prev);
            out.low_confidence = true;
            return out;
        }
        r *= cfg.endgame_ratio;
        if (norm_inf(x) > cfg.security_norm) {
            out.diverged = true;
            out.endpoint = from_eigen(x);
            return out;
        }
    }
    if (have_prev) out.endpoint = from_eigen(prev);
    else out.endpoint = from_eigen(x);
    out.low_confidence = true;
    return out;
}

Point infinity_marker(int n) {
    return Point(n, Cplx(std::numeric_limits<double>::infinity(),
                         std::numeric_limits<double>::infinity()));
}

}  // namespace

NewtonResult newton_correct(const SystemEval& eval, const Point& point, double tol,
                            int max_iters) {
    NewtonResult res;
    Eigen::VectorXcd x = to_eigen(point);
    for (int it = 0; it < max_iters; ++it) {
        Eigen::VectorXcd r = eval.eval(x);
        Eigen::VectorXcd delta = eval.jacobian_at(x).partialPivLu().solve(-r);
        res.iters = it + 1;
        if (!all_finite(delta)) break;  // singular solve: non-convergence
        x += delta;
        if (!all_finite(x)) break;
        if (norm_inf(delta) <= tol && norm_inf(eval.eval(x)) <= tol) {
            res.converged = true;
            break;
        }
    }
    if (all_finite(x)) res.point = from_eigen(x);
    else res.point = point;
    res.residual = norm_inf(eval.eval(to_eigen(res.point)));
    return res;
}

NewtonResult newton_correct(const PolySystem& sys, const Point& point, double tol,
                            int max_iters) {
    return newton_correct(SystemEval(sys), point, tol, max_iters);
}

namespace {

PathResult track_path_impl(const HomotopyEval& he, const Point& start_point,
                           const TrackerConfig& cfg) {
    if (static_cast<int>(start_point.size()) != he.n())
        throw std::invalid_argument("track_path: start point dimension mismatch");

    PathResult res;
    Eigen::VectorXcd x = to_eigen(start_point);

    // refine the start root at t=1
    if (!newton_on_h(he, x, Cplx(1.0, 0.0), cfg.newton_tol, cfg.newton_max_iters)) {
        res.status = PathStatus::StepFailure;
        res.endpoint = from_eigen(x);
        return res;
    }

    double t = 1.0;
    double step = cfg.step_init;
    int streak = 0;
    bool endgame_armed = false;
    Eigen::VectorXcd x_eg;
    double t_eg = 0.0;
    int rescues_left = 3;

    // norm growth across the endgame region marks an escape to infinity
    // that is too slow to trip the security norm outright
    auto diverged_by_growth = [&]() {
        return endgame_armed &&
               norm_inf(x) > cfg.escape_growth * std::max(1.0, norm_inf(x_eg));
    };
    auto mark_divergent = [&]() {
        res.status = PathStatus::Divergent;
        res.endpoint = infinity_marker(he.n());
        res.residual = std::numeric_limits<double>::infinity();
    };

    auto finish_with_endgame = [&]() {
        // norm growth across the endgame region, judged before looping; a
        // failed endgame on a path that kept growing is an escape, not a
        // step failure
        const bool grew_inside =
            endgame_armed && norm_inf(x) > 4.0 * std::max(1.0, norm_inf(x_eg));
        EndgameResult eg = run_cauchy(he, x_eg, t_eg, cfg);
        if (eg.diverged) {
            res.status = PathStatus::Divergent;
            res.endpoint = infinity_marker(he.n());
            res.residual = std::numeric_limits<double>::infinity();
            return;
        }
        if (!eg.converged && grew_inside) {
            mark_divergent();
            return;
        }
        res.endpoint = eg.endpoint;
        res.winding_estimate = eg.winding_estimate;
        res.low_confidence = eg.low_confidence;
        // final polish on the target system
        NewtonResult polish =
            newton_correct(he.target, res.endpoint, cfg.newton_tol, cfg.newton_max_iters);
        const double raw = he.target.system().residual_inf(res.endpoint);
        if (polish.residual < raw) res.endpoint = polish.point;
        res.residual = he.target.system().residual_inf(res.endpoint);
        res.status = (eg.converged && res.residual <= cfg.newton_tol)
                         ? PathStatus::Success
                         : PathStatus::StepFailure;
    };

    while (t > 0.0) {
        if (res.steps_taken >= cfg.max_steps) {
            res.status = PathStatus::MaxSteps;
            res.endpoint = from_eigen(x);
            res.residual = he.target.system().residual_inf(res.endpoint);
            return res;
        }
        const double xnorm = norm_inf(x);
        if (xnorm > cfg.divergence_threshold ||
            (t <= cfg.endgame_radius && xnorm > cfg.security_norm) ||
            (t < 0.5 * cfg.endgame_radius && endgame_armed &&
             xnorm > 4.0 * cfg.escape_growth * std::max(1.0, norm_inf(x_eg)))) {
            mark_divergent();
            return res;
        }
        if (!endgame_armed && t <= cfg.endgame_radius) {
            endgame_armed = true;
            x_eg = x;
            t_eg = t;
        }

        const double hstep = std::min(step, t);
        ++res.steps_taken;
        bool ok = false;
        auto pred = rk4_predict(he, x, Cplx(t, 0.0), Cplx(-hstep, 0.0));
        if (pred) {
            Eigen::VectorXcd trial = *pred;
            if (newton_on_h(he, trial, Cplx(t - hstep, 0.0), cfg.newton_tol,
                            cfg.corrector_iters)) {
                x = trial;
                t -= hstep;
                ok = true;
            }
        }
        if (ok) {
            if (++streak >= cfg.growth_run) {
                step = std::min(2.0 * step, cfg.step_max);
                streak = 0;
            }
        } else {
            streak = 0;
            step = hstep / 2.0;
            if (step < cfg.step_min) {
                if (diverged_by_growth()) {
                    mark_divergent();
                    return res;
                }
                if (endgame_armed) {
                    finish_with_endgame();
                    return res;
                }
                // ride through a badly conditioned stretch with a relaxed
                // corrector, then re-tighten before resuming
                bool rescued = false;
                if (rescues_left-- > 0) {
                    const double t_exit = std::max(t - 0.05, cfg.endgame_radius / 2.0);
                    const double loose = cfg.newton_tol * 1e4;
                    double rstep = cfg.step_min * 16.0;
                    Eigen::VectorXcd xr = x;
                    double tr = t;
                    int guard = 400;
                    bool riding = true;
                    while (tr > t_exit && riding && guard-- > 0) {
                        const double hs = std::min(rstep, tr - t_exit);
                        ++res.steps_taken;
                        bool moved = false;
                        if (auto pred = rk4_predict(he, xr, Cplx(tr, 0.0), Cplx(-hs, 0.0))) {
                            Eigen::VectorXcd trial = *pred;
                            if (newton_on_h(he, trial, Cplx(tr - hs, 0.0), loose,
                                            cfg.corrector_iters + 2)) {
                                xr = trial;
                                tr -= hs;
                                rstep = std::min(rstep * 1.5, 0.01);
                                moved = true;
                            }
                        }
                        if (!moved) {
                            rstep /= 2.0;
                            if (rstep < cfg.step_min / 4.0) riding = false;
                        }
                    }
                    if (riding && tr <= t_exit &&
                        newton_on_h(he, xr, Cplx(tr, 0.0), cfg.newton_tol,
                                    cfg.newton_max_iters)) {
                        x = xr;
                        t = tr;
                        step = cfg.step_min * 8.0;
                        streak = 0;
                        rescued = true;
                    }
                }
                if (rescued) continue;
                res.status = PathStatus::StepFailure;
                res.endpoint = from_eigen(x);
                res.residual = he.target.system().residual_inf(res.endpoint);
                return res;
            }
        }
    }

    // landed on t = 0 by direct stepping
    NewtonResult fin = newton_correct(he.target, from_eigen(x), cfg.newton_tol,
                                      cfg.newton_max_iters);
    if (!fin.converged) {
        if (diverged_by_growth()) {
            mark_divergent();
            return res;
        }
        if (endgame_armed) {
            finish_with_endgame();
            return res;
        }
    }
    res.endpoint = fin.point;
    res.residual = fin.residual;
    res.winding_estimate = 1;
    res.status =
        res.residual <= cfg.newton_tol ? PathStatus::Success : PathStatus::StepFailure;
    return res;
}

}  // namespace

TrackSession::TrackSession(const Homotopy& h)
    : target_(h.target), start_(h.start), gamma_(h.gamma) {
    if (h.target.size() != h.target.nvars)
        throw std::invalid_argument("track_path: system must be square");
}

PathResult TrackSession::track(const Point& start_point, const TrackerConfig& cfg) const {
    return track_path_impl(HomotopyEval{target_, start_, gamma_}, start_point, cfg);
}

PathResult track_path(const Homotopy& h, const Point& start_point,
                      const TrackerConfig& cfg) {
    return TrackSession(h).track(start_point, cfg);
}

EndgameResult cauchy_endgame(const Homotopy& h, const Point& point_at_radius,
                             const TrackerConfig& cfg) {
    const SystemEval target(h.target), start(h.start);
    const HomotopyEval he{target, start, h.gamma};
    Eigen::VectorXcd x = to_eigen(point_at_radius);
    // settle the point exactly on the circle |t| = endgame_radius
    if (!newton_on_h(he, x, Cplx(cfg.endgame_radius, 0.0), cfg.newton_tol,
                     cfg.newton_max_iters)) {
        EndgameResult out;
        out.endpoint = point_at_radius;
        out.low_confidence = true;
        return out;
    }
    return run_cauchy(he, x, cfg.endgame_radius, cfg);
}

}  // namespace sosb
