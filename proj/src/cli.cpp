#include "wishart/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "wishart/csv.hpp"
#include "wishart/impsamp.hpp"
#include "wishart/laplace.hpp"
#include "wishart/ldp.hpp"
#include "wishart/model.hpp"
#include "wishart/normal.hpp"
#include "wishart/parallel.hpp"
#include "wishart/rng.hpp"
#include "wishart/sha256.hpp"
#include "wishart/sim.hpp"
#include "wishart/smile.hpp"

namespace wishart {

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_path = "-";
    std::uint64_t seed = 12345;
    int paths = 20000;
    int steps = 0;  // 0: derived from dt
    double dt = 0.025;
    bool no_timing = false;
};

Vec parse_vec(const std::string& text) {
    Vec v;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        v.push_back(std::stod(tok));
    }
    if (v.empty()) throw CLI::ValidationError("expected a comma-separated list of reals");
    return v;
}

struct Output {
    std::ofstream file;
    std::ostream* stream = nullptr;

    explicit Output(const std::string& path) {
        if (path == "-" || path.empty()) {
            stream = &std::cout;
        } else {
            file.open(path);
            if (!file) throw Error("cannot open output file: " + path);
            stream = &file;
        }
    }
};

// Header comments carry the SHA-256 of the resolved run description so a CSV
// can be traced back to its exact inputs. Worker counts and wall time stay
// out of it.
void write_header(CsvWriter& csv, const std::string& command, const ModelParams& params,
                  const std::vector<std::pair<std::string, std::string>>& opts) {
    std::string resolved = "command=" + command + "\n";
    const std::string config_json = params_to_json_text(params);
    resolved += config_json + "\n";
    for (const auto& [k, v] : opts) resolved += k + "=" + v + "\n";

    csv.comment("wishart-ldp " + command);
    csv.comment("config_sha256: " + sha256_hex(resolved));
    std::string one_line = config_json;
    for (char& c : one_line) {
        if (c == '\n') c = ' ';
    }
    csv.comment("config: " + one_line);
    for (const auto& [k, v] : opts) csv.comment(k + ": " + v);
}

std::string fmt(double v) { return CsvWriter::format(v); }

int steps_for(const CommonOpts& opts, double horizon) {
    if (opts.steps > 0) return opts.steps;
    return std::max(1, static_cast<int>(std::llround(horizon / opts.dt)));
}

void check_smile_mode(const ModelParams& params) {
    if (params.r != 0.0) {
        throw Error("smile commands require a config with r = 0");
    }
}

int cmd_laplace(const CommonOpts& opts, const std::vector<std::string>& theta_args,
                const std::vector<double>& times) {
    const ModelParams params = params_from_json_file(opts.config_path);
    require_valid(params);
    if (theta_args.empty() || times.empty()) {
        std::cerr << "laplace: need at least one --theta and one --t\n";
        return 1;
    }
    Output out(opts.out_path);
    CsvWriter csv(*out.stream);
    std::vector<std::pair<std::string, std::string>> hdr;
    for (const auto& th : theta_args) hdr.emplace_back("theta", th);
    for (double t : times) hdr.emplace_back("t", fmt(t));
    write_header(csv, "laplace", params, hdr);

    std::vector<std::string> cols;
    for (int j = 0; j < params.n; ++j) cols.push_back("theta" + std::to_string(j + 1));
    cols.insert(cols.end(), {"t", "log_value", "finite"});
    csv.header(cols);

    for (const auto& arg : theta_args) {
        const Vec theta = parse_vec(arg);
        if (static_cast<int>(theta.size()) != params.n) {
            throw Error("theta dimension does not match the model");
        }
        for (double t : times) {
            const LaplaceEval ev = log_laplace_y(params, theta, t);
            for (double c : theta) csv.field(c);
            csv.field(t).field(ev.finite ? ev.log_value : std::numeric_limits<double>::infinity());
            csv.field(ev.finite);
            csv.end_row();
        }
    }
    return 0;
}

int cmd_lambda(const CommonOpts& opts, const std::vector<std::string>& theta_args,
               double horizon) {
    const ModelParams params = params_from_json_file(opts.config_path);
    require_valid(params);
    if (theta_args.empty()) {
        std::cerr << "lambda: need at least one --theta\n";
        return 1;
    }
    Output out(opts.out_path);
    CsvWriter csv(*out.stream);
    std::vector<std::pair<std::string, std::string>> hdr{{"T", fmt(horizon)}};
    for (const auto& th : theta_args) hdr.emplace_back("theta", th);
    write_header(csv, "lambda", params, hdr);

    std::vector<std::string> cols;
    for (int j = 0; j < params.n; ++j) cols.push_back("theta" + std::to_string(j + 1));
    cols.insert(cols.end(), {"value", "finite"});
    csv.header(cols);

    for (const auto& arg : theta_args) {
        const Vec theta = parse_vec(arg);
        const LambdaEval ev = lambda(params, horizon, theta);
        for (double c : theta) csv.field(c);
        csv.field(ev.value.value_or_inf()).field(ev.value.is_finite());
        csv.end_row();
    }
    return 0;
}

int cmd_rate(const CommonOpts& opts, const std::vector<std::string>& y_args) {
    const ModelParams params = params_from_json_file(opts.config_path);
    require_valid(params);
    if (y_args.empty()) {
        std::cerr << "rate: need at least one --y\n";
        return 1;
    }
    Output out(opts.out_path);
    CsvWriter csv(*out.stream);
    std::vector<std::pair<std::string, std::string>> hdr;
    for (const auto& y : y_args) hdr.emplace_back("y", y);
    write_header(csv, "rate", params, hdr);

    std::vector<std::string> cols;
    for (int j = 0; j < params.n; ++j) cols.push_back("y" + std::to_string(j + 1));
    cols.emplace_back("value");
    for (int j = 0; j < params.n; ++j) cols.push_back("argmax" + std::to_string(j + 1));
    cols.emplace_back("converged");
    csv.header(cols);

    for (const auto& arg : y_args) {
        const Vec y = parse_vec(arg);
        const RateEval ev = rate_function(params, y);
        for (double c : y) csv.field(c);
        csv.field(ev.value);
        for (double c : ev.argmax_lambda) csv.field(c);
        csv.field(ev.converged);
        csv.end_row();
    }
    return 0;
}

std::vector<double> build_grid(const std::vector<double>& explicit_points, double lo, double hi,
                               int count) {
    if (!explicit_points.empty()) return explicit_points;
    std::vector<double> grid;
    if (count == 1) {
        grid.push_back(lo);
        return grid;
    }
    for (int i = 0; i < count; ++i) {
        grid.push_back(lo + (hi - lo) * static_cast<double>(i) / (count - 1));
    }
    return grid;
}

int cmd_smile_asymptotic(const CommonOpts& opts, const std::vector<double>& y_values, double y_lo,
                         double y_hi, int y_count) {
    const ModelParams params = params_from_json_file(opts.config_path);
    require_valid(params);
    check_smile_mode(params);
    const std::vector<double> grid = build_grid(y_values, y_lo, y_hi, y_count);
    if (grid.empty()) {
        std::cerr << "smile-asymptotic: empty y grid\n";
        return 1;
    }

    Output out(opts.out_path);
    CsvWriter csv(*out.stream);
    std::vector<std::pair<std::string, std::string>> hdr;
    for (double y : grid) hdr.emplace_back("y", fmt(y));
    write_header(csv, "smile-asymptotic", params, hdr);
    csv.header({"y", "regime", "L", "sigma_inf", "c_infinity", "error"});

    const RegimeConstants rc = regime_constants(params);
    for (double y : grid) {
        csv.field(y);
        try {
            const SmilePoint pt = smile_point(params, rc, y);
            const double ci = c_infinity(params, rc, y);
            csv.field(std::string(regime_name(pt.regime)))
                .field(pt.big_l)
                .field(pt.sigma_inf)
                .field(ci)
                .field(std::string());
        } catch (const Error& e) {
            csv.field(std::string()).field(std::string()).field(std::string());
            csv.field(std::string()).field(std::string(e.what()));
        }
        csv.end_row();
    }
    return 0;
}

int cmd_smile_mc(const CommonOpts& opts, const std::vector<double>& y_values, double y_lo,
                 double y_hi, int y_count, const std::vector<double>& maturities, double dt) {
    const ModelParams params = params_from_json_file(opts.config_path);
    require_valid(params);
    check_smile_mode(params);
    const std::vector<double> grid = build_grid(y_values, y_lo, y_hi, y_count);
    if (grid.empty()) {
        std::cerr << "smile-mc: empty y grid\n";
        return 1;
    }

    Output out(opts.out_path);
    CsvWriter csv(*out.stream);
    std::vector<std::pair<std::string, std::string>> hdr{
        {"seed", std::to_string(opts.seed)},
        {"paths", std::to_string(opts.paths)},
        {"dt", fmt(dt)}};
    for (double t : maturities) hdr.emplace_back("maturity", fmt(t));
    for (double y : grid) hdr.emplace_back("y", fmt(y));
    write_header(csv, "smile-mc", params, hdr);
    csv.comment("mc_price is the basket put at log-strike k = y*T on a unit forward");
    csv.header({"y", "T", "mc_price", "stderr", "implied_vol", "error"});

    for (size_t ti = 0; ti < maturities.size(); ++ti) {
        const double maturity = maturities[ti];
        PathConfig cfg;
        cfg.horizon = maturity;
        cfg.n_paths = opts.paths;
        cfg.n_steps = std::max(1, static_cast<int>(std::llround(maturity / dt)));
        cfg.seed = derive_seed(opts.seed, ti);
        const TerminalBatch batch = simulate(params, cfg, MeasureSpec::physical());

        std::vector<double> baskets(cfg.n_paths);
        for (int p = 0; p < cfg.n_paths; ++p) {
            double basket = 0.0;
            for (int j = 0; j < params.n; ++j) basket += params.omega[j] * std::exp(batch.y(p, j));
            baskets[p] = basket;
        }
        for (double y : grid) {
            const double k = y * maturity;
            const double strike = std::exp(k);
            std::vector<double> payoffs(cfg.n_paths);
            for (int p = 0; p < cfg.n_paths; ++p) {
                payoffs[p] = std::max(strike - baskets[p], 0.0);
            }
            const MeanVar mv = mean_variance(payoffs);
            const double se = std::sqrt(mv.variance / cfg.n_paths);
            csv.field(y).field(maturity).field(mv.mean).field(se);
            try {
                csv.field(bs_implied_vol(maturity, k, mv.mean, false)).field(std::string());
            } catch (const Error& e) {
                csv.field(std::string()).field(std::string(e.what()));
            }
            csv.end_row();
        }
    }
    return 0;
}

int cmd_theta_star(const CommonOpts& opts, double strike, double maturity) {
    const ModelParams params = params_from_json_file(opts.config_path);
    require_valid(params);
    Output out(opts.out_path);
    CsvWriter csv(*out.stream);
    write_header(csv, "theta-star", params,
                 {{"K", fmt(strike)}, {"T", fmt(maturity)}});

    std::vector<std::string> cols;
    for (int j = 0; j < params.n; ++j) cols.push_back("theta" + std::to_string(j + 1));
    cols.insert(cols.end(), {"objective", "converged"});
    csv.header(cols);

    const ThetaStar ts = theta_star(params, maturity, PayoffSpec::basket_put(strike, params.omega));
    for (double c : ts.theta) csv.field(c);
    csv.field(ts.objective).field(ts.converged);
    csv.end_row();
    return ts.converged ? 0 : 3;
}

int cmd_price(const CommonOpts& opts, double strike, double maturity, bool is_call,
              const std::string& tilt_arg, bool tilt_star) {
    const ModelParams params = params_from_json_file(opts.config_path);
    require_valid(params);

    const PayoffSpec payoff = is_call ? PayoffSpec::basket_call(strike, params.omega)
                                      : PayoffSpec::basket_put(strike, params.omega);
    std::optional<Vec> tilt;
    if (tilt_star) {
        const ThetaStar ts = theta_star(params, maturity, PayoffSpec::basket_put(strike, params.omega));
        if (!ts.converged) throw NotConvergedError("theta_star did not converge");
        tilt = ts.theta;
    } else if (!tilt_arg.empty()) {
        tilt = parse_vec(tilt_arg);
    }

    PathConfig cfg;
    cfg.horizon = maturity;
    cfg.n_paths = opts.paths;
    cfg.n_steps = steps_for(opts, maturity);
    cfg.seed = opts.seed;

    Output out(opts.out_path);
    CsvWriter csv(*out.stream);
    std::vector<std::pair<std::string, std::string>> hdr{
        {"K", fmt(strike)},          {"T", fmt(maturity)},
        {"kind", is_call ? "call" : "put"}, {"seed", std::to_string(opts.seed)},
        {"paths", std::to_string(opts.paths)}, {"steps", std::to_string(cfg.n_steps)}};
    if (tilt) {
        std::string t;
        for (size_t i = 0; i < tilt->size(); ++i) t += (i ? "," : "") + fmt((*tilt)[i]);
        hdr.emplace_back("tilt", t);
    }
    write_header(csv, "price", params, hdr);

    std::vector<std::string> cols{"T", "K", "kind", "price", "stderr", "n_paths"};
    if (!opts.no_timing) cols.push_back("time_seconds");
    csv.header(cols);

    const McResult res = price(params, payoff, cfg, tilt);
    csv.field(maturity).field(strike).field(std::string(is_call ? "call" : "put"));
    csv.field(res.estimate).field(res.stderr_).field(static_cast<long long>(res.n_paths));
    if (!opts.no_timing) csv.field(res.wall_time);
    csv.end_row();
    return 0;
}

struct TableRow {
    double maturity;
    double strike;
};

std::vector<TableRow> default_table_rows() {
    std::vector<TableRow> rows;
    for (double k : {0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3, 1.4}) rows.push_back({0.50, k});
    rows.push_back({0.25, 1.0});
    rows.push_back({1.00, 1.0});
    rows.push_back({2.00, 1.0});
    rows.push_back({3.00, 1.0});
    rows.push_back({5.00, 1.0});
    return rows;
}

std::vector<TableRow> parse_table_rows(const std::string& text) {
    if (text.empty()) return default_table_rows();
    std::vector<TableRow> rows;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ';')) {
        if (tok.empty()) continue;
        const auto colon = tok.find(':');
        if (colon == std::string::npos) {
            throw CLI::ValidationError("--rows expects T:K pairs separated by ';'");
        }
        rows.push_back({std::stod(tok.substr(0, colon)), std::stod(tok.substr(colon + 1))});
    }
    if (rows.empty()) throw CLI::ValidationError("--rows parsed to an empty list");
    return rows;
}

int run_variance_rows(const CommonOpts& opts, const std::vector<TableRow>& rows,
                      const std::string& command, const std::string& tilt_arg) {
    const ModelParams params = params_from_json_file(opts.config_path);
    require_valid(params);

    Output out(opts.out_path);
    CsvWriter csv(*out.stream);
    std::vector<std::pair<std::string, std::string>> hdr{
        {"seed", std::to_string(opts.seed)},
        {"paths", std::to_string(opts.paths)}};
    for (const auto& row : rows) {
        hdr.emplace_back("row", fmt(row.maturity) + ":" + fmt(row.strike));
    }
    if (!tilt_arg.empty()) hdr.emplace_back("tilt", tilt_arg);
    write_header(csv, command, params, hdr);

    std::vector<std::string> cols{"maturity", "strike", "price", "std_dev", "var_ratio"};
    if (!opts.no_timing) cols.push_back("time_seconds");
    cols.push_back("error");
    csv.header(cols);

    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        PathConfig cfg;
        cfg.horizon = row.maturity;
        cfg.n_paths = opts.paths;
        cfg.n_steps = steps_for(opts, row.maturity);
        cfg.seed = derive_seed(opts.seed, i);

        csv.field(row.maturity).field(row.strike);
        try {
            const PayoffSpec payoff = PayoffSpec::basket_put(row.strike, params.omega);
            Vec tilt;
            if (!tilt_arg.empty()) {
                tilt = parse_vec(tilt_arg);
            } else {
                const ThetaStar ts = theta_star(params, row.maturity, payoff);
                if (!ts.converged) throw NotConvergedError("theta_star did not converge");
                tilt = ts.theta;
            }
            const VarianceRatioResult vr = variance_ratio(params, payoff, cfg, tilt);
            csv.field(vr.tilted.estimate).field(vr.tilted.stderr_).field(vr.ratio);
            if (!opts.no_timing) csv.field(vr.plain.wall_time + vr.tilted.wall_time);
            csv.field(std::string());
        } catch (const Error& e) {
            csv.field(std::string()).field(std::string()).field(std::string());
            if (!opts.no_timing) csv.field(std::string());
            csv.field(std::string(e.what()));
        }
        csv.end_row();
    }
    return 0;
}

int cmd_selftest(const CommonOpts& opts) {
    ModelParams params;
    if (!opts.config_path.empty()) {
        params = params_from_json_file(opts.config_path);
    } else {
        params = ModelParams::make(
            2, 1.5, Matrix::diag({0.2, 0.3}),
            SymMatrix(Matrix(2, {-1.0, -0.7, -0.7, -0.7})), SymMatrix::identity(2), 0.0,
            {0.0, 0.0});
    }
    require_valid(params);

    int failures = 0;
    auto report = [&failures](const std::string& name, bool ok) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    };

    {
        const LaplaceEval ev = log_laplace_y(params, Vec(params.n, 0.0), 1.0);
        report("laplace normalization", ev.finite && std::abs(ev.log_value) < 1e-9);
    }
    {
        bool ok = true;
        for (int j = 0; j < params.n; ++j) {
            Vec ej(params.n, 0.0);
            ej[j] = 1.0;
            const LaplaceEval ev = log_laplace_y(params, ej, 1.0);
            const double want = params.y0[j] + params.r * 1.0;
            ok = ok && ev.finite && std::abs(ev.log_value - want) < 1e-9;
        }
        report("laplace martingale", ok);
    }
    if (params.r == 0.0) {
        bool ok = true;
        try {
            const RegimeConstants rc = regime_constants(params);
            for (int j = 0; j < params.n; ++j) {
                ok = ok && std::abs(rc.x_star[j] + rc.x_tilde_star[j]) < 1e-10;
            }
            ok = ok && rc.beta_star < 0.0 && rc.beta_hat_star > 0.0 &&
                 rc.beta_hat_star <= rc.beta_tilde_star;

            const RateEval rate0 = rate_function(params, rc.x_star);
            ok = ok && rate0.converged && std::abs(rate0.value) < 1e-7;

            const double y_put = 2.0 * rc.beta_star;
            const SmilePoint pt = sigma_infinity(params, y_put);
            const double half = pt.sigma_inf / 2.0 - y_put / pt.sigma_inf;
            ok = ok && std::abs(0.5 * half * half - pt.big_l) < 1e-8;
        } catch (const Error&) {
            ok = false;
        }
        report("rate and smile identities", ok);
    }
    {
        const double sigma = 0.2;
        const double p = bs_price(2.0, 0.1, sigma, true);
        const double back = bs_implied_vol(2.0, 0.1, p, true);
        report("black-scholes round trip", std::abs(back - sigma) < 1e-9);
    }
    {
        PathConfig cfg;
        cfg.horizon = 0.5;
        cfg.n_steps = 20;
        cfg.n_paths = 5000;
        cfg.seed = opts.seed;
        bool ok = true;
        try {
            Vec theta(params.n, -0.2);
            const TerminalBatch batch = simulate(params, cfg, MeasureSpec::tilted(theta));
            std::vector<double> weights(cfg.n_paths);
            for (int p = 0; p < cfg.n_paths; ++p) {
                weights[p] = is_weight(params, theta, cfg.horizon, batch.y_row(p));
            }
            const MeanVar mv = mean_variance(weights);
            const double se = std::sqrt(mv.variance / cfg.n_paths);
            ok = std::abs(mv.mean - 1.0) <= 3.0 * se;
        } catch (const Error&) {
            ok = false;
        }
        report("tilted weight normalization", ok);
    }
    return failures == 0 ? 0 : 3;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Wishart stochastic volatility: Laplace transforms, long-maturity smile "
                 "asymptotics and importance-sampled Monte Carlo pricing"};
    app.require_subcommand(1);
    app.fallthrough();

    CommonOpts opts;
    app.add_option("--config", opts.config_path, "model parameter JSON file");
    app.add_option("--out", opts.out_path, "output CSV path ('-' for stdout)");
    app.add_option("--seed", opts.seed, "Monte Carlo seed");
    app.add_option("--paths", opts.paths, "Monte Carlo path count");
    app.add_option("--steps", opts.steps, "time steps (0: derived from --dt)");
    app.add_option("--dt", opts.dt, "time step used when --steps is 0");
    app.add_flag("--no-timing", opts.no_timing, "omit wall-time columns");

    std::vector<std::string> theta_args;
    std::vector<double> times;
    double horizon = 1.0;
    std::vector<std::string> y_args;
    std::vector<double> y_values;
    double y_lo = 0.0, y_hi = 0.0;
    int y_count = 0;
    std::vector<double> maturities = {1.0, 2.0, 5.0, 10.0, 25.0, 50.0};
    double smile_dt = 0.1;
    double strike = 1.0, maturity = 0.5;
    bool is_call = false;
    std::string tilt_arg;
    bool tilt_star = false;
    std::string rows_arg;

    auto* laplace_cmd = app.add_subcommand("laplace", "finite-horizon log Laplace transform");
    laplace_cmd->add_option("--theta", theta_args, "tilt vector, comma-separated (repeatable)");
    laplace_cmd->add_option("--t", times, "horizon (repeatable)");

    auto* lambda_cmd = app.add_subcommand("lambda", "limiting Laplace exponent");
    lambda_cmd->add_option("--theta", theta_args, "tilt vector (repeatable)");
    lambda_cmd->add_option("--T", horizon, "horizon factor");

    auto* rate_cmd = app.add_subcommand("rate", "Fenchel-Legendre rate function");
    rate_cmd->add_option("--y", y_args, "target vector (repeatable)");

    auto* sa_cmd = app.add_subcommand("smile-asymptotic", "limiting smile by regime");
    sa_cmd->add_option("--y", y_values, "renormalized log-strikes");
    sa_cmd->add_option("--y-min", y_lo, "grid start");
    sa_cmd->add_option("--y-max", y_hi, "grid end");
    sa_cmd->add_option("--y-count", y_count, "grid size");

    auto* sm_cmd = app.add_subcommand("smile-mc", "Monte Carlo smile at fixed maturities");
    sm_cmd->add_option("--y", y_values, "renormalized log-strikes");
    sm_cmd->add_option("--y-min", y_lo, "grid start");
    sm_cmd->add_option("--y-max", y_hi, "grid end");
    sm_cmd->add_option("--y-count", y_count, "grid size");
    sm_cmd->add_option("--maturities", maturities, "maturities in years");
    sm_cmd->add_option("--smile-dt", smile_dt, "discretization step");

    auto* price_cmd = app.add_subcommand("price", "basket option price");
    price_cmd->add_option("--K", strike, "strike");
    price_cmd->add_option("--T", maturity, "maturity in years");
    price_cmd->add_flag("--call", is_call, "price a call (default put)");
    price_cmd->add_option("--tilt", tilt_arg, "importance-sampling tilt vector");
    price_cmd->add_flag("--tilt-star", tilt_star, "use the asymptotically optimal tilt");

    auto* ts_cmd = app.add_subcommand("theta-star", "asymptotically optimal tilt");
    ts_cmd->add_option("--K", strike, "strike");
    ts_cmd->add_option("--T", maturity, "maturity in years");

    auto* vr_cmd = app.add_subcommand("variance-ratio", "plain vs tilted estimator variance");
    vr_cmd->add_option("--K", strike, "strike");
    vr_cmd->add_option("--T", maturity, "maturity in years");
    vr_cmd->add_option("--tilt", tilt_arg, "tilt vector (default: theta-star)");

    auto* table_cmd = app.add_subcommand("table1", "variance-ratio sweep over (T, K) rows");
    table_cmd->add_option("--rows", rows_arg, "rows as 'T:K;T:K;...'");

    auto* selftest_cmd = app.add_subcommand("selftest", "run the build-in invariant checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(laplace_cmd)) return cmd_laplace(opts, theta_args, times);
        if (app.got_subcommand(lambda_cmd)) return cmd_lambda(opts, theta_args, horizon);
        if (app.got_subcommand(rate_cmd)) return cmd_rate(opts, y_args);
        if (app.got_subcommand(sa_cmd)) {
            return cmd_smile_asymptotic(opts, y_values, y_lo, y_hi, y_count);
        }
        if (app.got_subcommand(sm_cmd)) {
            return cmd_smile_mc(opts, y_values, y_lo, y_hi, y_count, maturities, smile_dt);
        }
        if (app.got_subcommand(price_cmd)) {
            return cmd_price(opts, strike, maturity, is_call, tilt_arg, tilt_star);
        }
        if (app.got_subcommand(ts_cmd)) return cmd_theta_star(opts, strike, maturity);
        if (app.got_subcommand(vr_cmd)) {
            return run_variance_rows(opts, {{maturity, strike}}, "variance-ratio", tilt_arg);
        }
        if (app.got_subcommand(table_cmd)) {
            return run_variance_rows(opts, parse_table_rows(rows_arg), "table1", "");
        }
        if (app.got_subcommand(selftest_cmd)) return cmd_selftest(opts);
    } catch (const NotConvergedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace wishart
