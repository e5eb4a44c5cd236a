#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "wishart/matrix.hpp"
#include "wishart/model.hpp"

namespace wishart {

enum class Scheme { kEulerPsd };

struct PathConfig {
    double horizon = 0.0;  // years
    int n_steps = 0;
    int n_paths = 0;
    std::uint64_t seed = 0;
    Scheme scheme = Scheme::kEulerPsd;

    double dt() const { return horizon / n_steps; }
};

enum class MeasureKind { kPhysical, kTilted };

struct MeasureSpec {
    MeasureKind kind = MeasureKind::kPhysical;
    Vec theta;  // tilted only

    static MeasureSpec physical() { return {}; }
    static MeasureSpec tilted(Vec theta) {
        MeasureSpec m;
        m.kind = MeasureKind::kTilted;
        m.theta = std::move(theta);
        return m;
    }
};

// Terminal samples of (Y_T, X_T), path-major.
struct TerminalBatch {
    int n = 0;
    std::vector<double> y_terminal;  // n_paths * n
    std::vector<double> x_terminal;  // n_paths * n * n
    PathConfig config;
    MeasureSpec measure;

    double y(int path, int j) const { return y_terminal[static_cast<size_t>(path) * n + j]; }
    Vec y_row(int path) const;
    SymMatrix x(int path) const;
};

// One Euler step of the volatility matrix with effective drift coefficient
// b_eff (b, or b + 2 gamma under a tilt):
//   x + (alpha I + b_eff x + x b_eff) dt + sqrt(dt) (x^{1/2} g + g^T x^{1/2}),
// symmetrized and eigenvalue-clipped back onto the PSD cone.
SymMatrix step_x(const ModelParams& params, const SymMatrix& x_cur, const SymMatrix& b_eff,
                 double dt, const Matrix& noise);

// Trapezoidal log-price step with x_bar = (x_cur + x_next)/2, m = a^T x_bar a:
//   y + (r 1 - diag(m)/2 + m theta) dt + Chol(m) sqrt(dt) noise,
// the theta term present only under the tilted measure. m gets a 1e-12 I
// floor when the factorization needs it.
Vec step_y(const ModelParams& params, const Vec& y_cur, const SymMatrix& x_cur,
           const SymMatrix& x_next, const std::optional<Vec>& theta_drift, double dt,
           const Vec& noise);

// Simulates n_paths independent terminal samples. Path p consumes its own
// counter-based stream keyed by (seed, p) — n^2 normals for the matrix noise
// then n for the log-price per step — so results are bit-identical for any
// worker count. Under the tilted measure the drift coefficient
// b + 2 gamma_theta(T - t_mid) is cached per step, not per path.
TerminalBatch simulate(const ModelParams& params, const PathConfig& cfg,
                       const MeasureSpec& measure);

// Binary dump: header (magic, version, n, n_paths, seed) then little-endian
// doubles, path-major (Y block, then X block).
void write_terminal_batch(std::ostream& out, const TerminalBatch& batch);
TerminalBatch read_terminal_batch(std::istream& in);

}  // namespace wishart
