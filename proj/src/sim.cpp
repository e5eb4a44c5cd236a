#include "wishart/sim.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include "wishart/laplace.hpp"
#include "wishart/parallel.hpp"
#include "wishart/rng.hpp"

namespace wishart {

Vec TerminalBatch::y_row(int path) const {
    Vec v(n);
    for (int j = 0; j < n; ++j) v[j] = y(path, j);
    return v;
}

SymMatrix TerminalBatch::x(int path) const {
    Matrix m(n);
    const size_t base = static_cast<size_t>(path) * n * n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = x_terminal[base + static_cast<size_t>(i) * n + j];
    return SymMatrix::symmetric_part(m);
}

SymMatrix step_x(const ModelParams& params, const SymMatrix& x_cur, const SymMatrix& b_eff,
                 double dt, const Matrix& noise) {
    const int n = params.n;
    const SymMatrix sq = sym_sqrt(x_cur);
    const Matrix bx = b_eff.mat() * x_cur.mat();
    const Matrix sn = sq.mat() * noise;
    const double sdt = std::sqrt(dt);

    Matrix next(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double drift = (i == j ? params.alpha : 0.0) + bx(i, j) + bx(j, i);
            const double diff = sn(i, j) + sn(j, i);
            next(i, j) = x_cur(i, j) + drift * dt + diff * sdt;
        }
    }
    // Clip stray negative eigenvalues back to zero.
    return apply_spectral_fn(SymMatrix::symmetric_part(next),
                             [](double lam) { return lam > 0.0 ? lam : 0.0; });
}

namespace {

Matrix chol_with_floor(const SymMatrix& m) {
    try {
        return cholesky(m);
    } catch (const NotSpdError&) {
    }
    Matrix floored = m.mat();
    for (int i = 0; i < m.dim(); ++i) floored(i, i) += 1e-12;
    try {
        return cholesky(SymMatrix(std::move(floored)));
    } catch (const NotSpdError&) {
    }
    // Still indefinite from round-off: clip the spectrum first.
    SymMatrix clipped =
        apply_spectral_fn(m, [](double lam) { return lam > 0.0 ? lam : 0.0; });
    Matrix safe = clipped.mat();
    for (int i = 0; i < m.dim(); ++i) safe(i, i) += 1e-12;
    return cholesky(SymMatrix(std::move(safe)));
}

}  // namespace

Vec step_y(const ModelParams& params, const Vec& y_cur, const SymMatrix& x_cur,
           const SymMatrix& x_next, const std::optional<Vec>& theta_drift, double dt,
           const Vec& noise) {
    const int n = params.n;
    const SymMatrix x_bar = SymMatrix::symmetric_part((x_cur.mat() + x_next.mat()) * 0.5);
    const SymMatrix m = SymMatrix::symmetric_part(params.a.transpose() * x_bar.mat() * params.a);
    const Matrix l = chol_with_floor(m);

    Vec drift(n, params.r);
    for (int i = 0; i < n; ++i) drift[i] -= 0.5 * m(i, i);
    if (theta_drift) {
        const Vec extra = m.mat() * *theta_drift;
        for (int i = 0; i < n; ++i) drift[i] += extra[i];
    }

    const double sdt = std::sqrt(dt);
    Vec out(n);
    for (int i = 0; i < n; ++i) {
        double diff = 0.0;
        for (int j = 0; j <= i; ++j) diff += l(i, j) * noise[j];
        out[i] = y_cur[i] + drift[i] * dt + diff * sdt;
    }
    return out;
}

TerminalBatch simulate(const ModelParams& params, const PathConfig& cfg,
                       const MeasureSpec& measure) {
    require_valid(params);
    if (cfg.n_steps < 1 || cfg.n_paths < 1 || !(cfg.horizon > 0.0)) {
        throw Error("path config requires n_steps >= 1, n_paths >= 1, horizon > 0");
    }
    const int n = params.n;
    const double dt = cfg.dt();

    const bool tilted = measure.kind == MeasureKind::kTilted;
    if (tilted) {
        if (static_cast<int>(measure.theta.size()) != n) {
            throw Error("tilted measure needs an n-dimensional theta");
        }
        if (!log_laplace_y(params, measure.theta, cfg.horizon).finite) {
            throw OutOfDomainError("tilt theta has no finite Laplace transform at the horizon");
        }
    }

    // Effective X-drift coefficient per step; path-independent, so computed
    // once per batch.
    std::vector<SymMatrix> b_eff(cfg.n_steps);
    for (int i = 0; i < cfg.n_steps; ++i) {
        if (tilted) {
            const double t_mid = (static_cast<double>(i) + 0.5) * dt;
            const Matrix g = gamma_theta(params, measure.theta, cfg.horizon - t_mid);
            b_eff[i] = SymMatrix::symmetric_part(params.b.mat() + g * 2.0);
        } else {
            b_eff[i] = params.b;
        }
    }

    TerminalBatch batch;
    batch.n = n;
    batch.config = cfg;
    batch.measure = measure;
    batch.y_terminal.assign(static_cast<size_t>(cfg.n_paths) * n, 0.0);
    batch.x_terminal.assign(static_cast<size_t>(cfg.n_paths) * n * n, 0.0);

    const std::optional<Vec> drift_theta =
        tilted ? std::optional<Vec>(measure.theta) : std::nullopt;

    parallel_for(static_cast<size_t>(cfg.n_paths), [&](size_t begin, size_t end) {
        Matrix g_noise(n);
        Vec z_noise(n);
        for (size_t p = begin; p < end; ++p) {
            NormalStream rng(cfg.seed, p);
            SymMatrix x = params.x0;
            Vec y = params.y0;
            for (int step = 0; step < cfg.n_steps; ++step) {
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) g_noise(i, j) = rng.next();
                for (int i = 0; i < n; ++i) z_noise[i] = rng.next();
                const SymMatrix x_next = step_x(params, x, b_eff[step], dt, g_noise);
                y = step_y(params, y, x, x_next, drift_theta, dt, z_noise);
                x = x_next;
            }
            for (int j = 0; j < n; ++j) batch.y_terminal[p * n + j] = y[j];
            const size_t xb = p * n * n;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    batch.x_terminal[xb + static_cast<size_t>(i) * n + j] = x(i, j);
        }
    });
    return batch;
}

namespace {

constexpr char kMagic[4] = {'W', 'S', 'H', 'B'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}

}  // namespace

void write_terminal_batch(std::ostream& out, const TerminalBatch& batch) {
    out.write(kMagic, 4);
    write_pod(out, kVersion);
    write_pod(out, static_cast<std::uint32_t>(batch.n));
    write_pod(out, static_cast<std::uint64_t>(batch.config.n_paths));
    write_pod(out, batch.config.seed);
    const std::uint8_t has_x = batch.x_terminal.empty() ? 0 : 1;
    write_pod(out, has_x);
    out.write(reinterpret_cast<const char*>(batch.y_terminal.data()),
              static_cast<std::streamsize>(batch.y_terminal.size() * sizeof(double)));
    if (has_x) {
        out.write(reinterpret_cast<const char*>(batch.x_terminal.data()),
                  static_cast<std::streamsize>(batch.x_terminal.size() * sizeof(double)));
    }
    if (!out) throw Error("terminal batch write failed");
}

TerminalBatch read_terminal_batch(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) throw Error("bad terminal batch magic");
    if (read_pod<std::uint32_t>(in) != kVersion) throw Error("unsupported terminal batch version");
    TerminalBatch batch;
    batch.n = static_cast<int>(read_pod<std::uint32_t>(in));
    const auto n_paths = read_pod<std::uint64_t>(in);
    batch.config.n_paths = static_cast<int>(n_paths);
    batch.config.seed = read_pod<std::uint64_t>(in);
    const auto has_x = read_pod<std::uint8_t>(in);
    batch.y_terminal.resize(n_paths * batch.n);
    in.read(reinterpret_cast<char*>(batch.y_terminal.data()),
            static_cast<std::streamsize>(batch.y_terminal.size() * sizeof(double)));
    if (has_x) {
        batch.x_terminal.resize(n_paths * batch.n * batch.n);
        in.read(reinterpret_cast<char*>(batch.x_terminal.data()),
                static_cast<std::streamsize>(batch.x_terminal.size() * sizeof(double)));
    }
    if (!in) throw Error("terminal batch read failed");
    return batch;
}

}  // namespace wishart
