#pragma once

#include <Eigen/Dense>

#include "sosb/polynomial.hpp"

namespace sosb {

// H(x,t) = gamma * t * start(x) + (1-t) * target(x), tracked from t=1 to t=0.
struct Homotopy {
    PolySystem target;  // F, roots wanted at t=0
    PolySystem start;   // G, roots known at t=1
    Cplx gamma = 1.0;

    Homotopy() = default;
    Homotopy(PolySystem f, PolySystem g, Cplx gamma_);
};

struct TrackerConfig {
    double step_init = 0.1;
    double step_min = 1e-7;
    double step_max = 0.25;
    double newton_tol = 1e-10;
    int newton_max_iters = 10;
    int max_steps = 20000;
    double endgame_radius = 0.1;
    double endgame_ratio = 0.5;
    int endgame_samples = 8;

    // plumbing beyond the core knobs
    int corrector_iters = 4;       // Newton iterations allowed per step
    int growth_run = 5;            // successes before the step doubles
    double divergence_threshold = 1e8;
    double security_norm = 1e5;    // inside the endgame region, larger means infinity
    double escape_growth = 16.0;   // norm growth past the endgame entry that marks escape
    int max_winding = 8;
    int endgame_max_radii = 40;
};

enum class PathStatus { Success, Divergent, StepFailure, MaxSteps };

std::string to_string(PathStatus s);

struct PathResult {
    PathStatus status = PathStatus::StepFailure;
    Point endpoint;            // infinity marker entries when Divergent
    double residual = 0.0;     // ||F(endpoint)||_inf
    int winding_estimate = 0;
    int steps_taken = 0;
    bool low_confidence = false;
};

struct NewtonResult {
    Point point;
    double residual = 0.0;
    bool converged = false;
    int iters = 0;
};

// Flat evaluation program for one polynomial: per-term coefficient plus a
// run of (variable, exponent) factors.
struct CompiledPoly {
    struct Factor {
        int var;
        int exp;
    };
    std::vector<Cplx> coeffs;
    std::vector<std::uint32_t> offsets;
    std::vector<Factor> factors;

    static CompiledPoly compile(const Polynomial& p);
    Cplx eval(const Cplx* x) const;
};

// Precomputed evaluation of a square system and its Jacobian.
class SystemEval {
public:
    explicit SystemEval(PolySystem sys);

    const PolySystem& system() const { return sys_; }
    int nvars() const { return sys_.nvars; }
    int size() const { return sys_.size(); }

    Eigen::VectorXcd eval(const Eigen::VectorXcd& x) const;
    Eigen::MatrixXcd jacobian_at(const Eigen::VectorXcd& x) const;

private:
    PolySystem sys_;
    std::vector<std::vector<Polynomial>> jac_;
    std::vector<CompiledPoly> eqs_c_;
    std::vector<CompiledPoly> jac_c_;
};

inline Eigen::VectorXcd to_eigen(const Point& p) {
    Eigen::VectorXcd v(static_cast<long>(p.size()));
    for (std::size_t i = 0; i < p.size(); ++i) v[static_cast<long>(i)] = p[i];
    return v;
}

inline Point from_eigen(const Eigen::VectorXcd& v) {
    Point p(static_cast<std::size_t>(v.size()));
    for (long i = 0; i < v.size(); ++i) p[static_cast<std::size_t>(i)] = v[i];
    return p;
}

NewtonResult newton_correct(const PolySystem& sys, const Point& point, double tol,
                            int max_iters);
NewtonResult newton_correct(const SystemEval& eval, const Point& point, double tol,
                            int max_iters);

// Shared evaluation state for tracking many paths of one homotopy.
class TrackSession {
public:
    explicit TrackSession(const Homotopy& h);

    PathResult track(const Point& start_point, const TrackerConfig& cfg) const;
    const SystemEval& target_eval() const { return target_; }

private:
    SystemEval target_;
    SystemEval start_;
    Cplx gamma_;
};

// Track one path of the homotopy. start_point must approximate a root of
// the start system at t=1 (it is refined before stepping).
PathResult track_path(const Homotopy& h, const Point& start_point,
                      const TrackerConfig& cfg);

struct EndgameResult {
    Point endpoint;
    int winding_estimate = 0;
    bool converged = false;
    bool low_confidence = false;
    bool diverged = false;  // security norm exceeded while shrinking radii
};

// Cauchy endgame started from a point tracked to t = cfg.endgame_radius:
// loops t around 0 at geometrically shrinking radii and averages samples
// until two consecutive radius estimates agree within 10 * newton_tol.
EndgameResult cauchy_endgame(const Homotopy& h, const Point& point_at_radius,
                             const TrackerConfig& cfg);

}  // namespace sosb
