#include "wishart/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace wishart {

ModelParams ModelParams::make(int n, double alpha, Matrix a, SymMatrix b, SymMatrix x0, double r,
                              Vec y0, Vec omega) {
    ModelParams p;
    p.n = n;
    p.alpha = alpha;
    p.a = std::move(a);
    p.b = std::move(b);
    p.x0 = std::move(x0);
    p.r = r;
    p.y0 = std::move(y0);
    if (omega.empty()) omega.assign(static_cast<size_t>(n), 1.0 / n);
    p.omega = std::move(omega);
    return p;
}

std::vector<std::string> validate(const ModelParams& p) {
    std::vector<std::string> bad;
    std::ostringstream os;
    auto flag = [&bad, &os]() {
        bad.push_back(os.str());
        os.str("");
    };

    if (p.n < 1) {
        os << "n must be positive, got " << p.n;
        flag();
        return bad;
    }
    if (p.a.dim() != p.n || p.b.dim() != p.n || p.x0.dim() != p.n ||
        static_cast<int>(p.y0.size()) != p.n || static_cast<int>(p.omega.size()) != p.n) {
        os << "inconsistent dimensions relative to n=" << p.n;
        flag();
        return bad;
    }
    if (!(p.alpha > p.n - 1)) {
        os << "alpha <= n-1: alpha=" << p.alpha << ", n=" << p.n;
        flag();
    }
    {
        Matrix neg_b = p.b.mat();
        neg_b *= -1.0;
        const double me = min_eigenvalue(SymMatrix(neg_b));
        if (!(me > 0.0)) {
            os << "-b not SPD: min eigenvalue " << me;
            flag();
        }
    }
    {
        const double me = min_eigenvalue(p.x0);
        if (!(me > 0.0)) {
            os << "x0 not SPD: min eigenvalue " << me;
            flag();
        }
    }
    {
        bool invertible = true;
        try {
            det_and_inverse(p.a);
        } catch (const SingularError&) {
            invertible = false;
        }
        if (!invertible) {
            os << "a not invertible";
            flag();
        } else {
            const SymMatrix ata = SymMatrix::symmetric_part(p.a.transpose() * p.a);
            const double me = min_eigenvalue(ata);
            if (!(me > 0.0)) {
                os << "a^T a not SPD: min eigenvalue " << me;
                flag();
            }
        }
    }
    {
        double sum = 0.0;
        for (int i = 0; i < p.n; ++i) {
            if (p.omega[i] < 0.0) {
                os << "omega[" << i << "] negative: " << p.omega[i];
                flag();
            }
            sum += p.omega[i];
        }
        if (std::abs(sum - 1.0) > 1e-12) {
            os << "omega does not sum to 1: sum " << sum;
            flag();
        }
    }
    return bad;
}

void require_valid(const ModelParams& p) {
    const auto bad = validate(p);
    if (bad.empty()) return;
    std::string msg = "invalid model parameters:";
    for (const auto& b : bad) msg += " [" + b + "]";
    throw Error(msg);
}

SymMatrix phi(const ModelParams& p, const Vec& theta) {
    const int n = p.n;
    const Matrix b2 = p.b.mat() * p.b.mat();
    const Vec a_theta = p.a * theta;
    Matrix out(n);
    // a Diag(theta) a^T via (a Diag(theta) a^T)_{ij} = sum_k a_ik theta_k a_jk.
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double lin = 0.0;
            for (int k = 0; k < n; ++k) lin += p.a(i, k) * theta[k] * p.a(j, k);
            const double v = b2(i, j) + lin - a_theta[i] * a_theta[j];
            out(i, j) = v;
            out(j, i) = v;
        }
    }
    return SymMatrix(std::move(out));
}

DomainReport in_domain(const ModelParams& p, const Vec& theta) {
    DomainReport rep;
    rep.theta = theta;
    rep.min_eig_phi = min_eigenvalue(phi(p, theta));
    rep.inside = rep.min_eig_phi >= -tol::kDomain;
    rep.strict = rep.min_eig_phi > tol::kDomain;
    return rep;
}

double domain_bounding_radius(const ModelParams& p) {
    const Matrix at_inv = det_and_inverse(p.a.transpose()).inverse;
    const Matrix m = p.b.mat() * at_inv;
    // Spectral norm as the square root of the top eigenvalue of m^T m.
    const SymMatrix mtm = SymMatrix::symmetric_part(m.transpose() * m);
    const double top = sym_eigen(mtm).eigenvalues.back();
    const double norm = std::sqrt(std::max(top, 0.0));
    return std::max(2.0, norm * std::sqrt(2.0));
}

namespace {

using nlohmann::json;

Matrix matrix_from_json(const json& j, int n, const char* key) {
    if (!j.is_array() || static_cast<int>(j.size()) != n * n) {
        throw Error(std::string("config key '") + key + "' must be a row-major array of n*n reals");
    }
    Vec entries;
    entries.reserve(j.size());
    for (const auto& v : j) entries.push_back(v.get<double>());
    return Matrix(n, std::move(entries));
}

Vec vec_from_json(const json& j, int n, const char* key) {
    if (!j.is_array() || static_cast<int>(j.size()) != n) {
        throw Error(std::string("config key '") + key + "' must be an array of n reals");
    }
    Vec v;
    v.reserve(j.size());
    for (const auto& e : j) v.push_back(e.get<double>());
    return v;
}

}  // namespace

ModelParams params_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw Error(std::string("config is not valid JSON: ") + e.what());
    }
    for (const char* key : {"n", "alpha", "a", "b", "x0", "r", "y0"}) {
        if (!j.contains(key)) throw Error(std::string("config missing key '") + key + "'");
    }
    const int n = j["n"].get<int>();
    if (n < 1) throw Error("config key 'n' must be a positive integer");
    Vec omega;
    if (j.contains("omega")) omega = vec_from_json(j["omega"], n, "omega");
    return ModelParams::make(n, j["alpha"].get<double>(), matrix_from_json(j["a"], n, "a"),
                             SymMatrix(matrix_from_json(j["b"], n, "b")),
                             SymMatrix(matrix_from_json(j["x0"], n, "x0")), j["r"].get<double>(),
                             vec_from_json(j["y0"], n, "y0"), std::move(omega));
}

ModelParams params_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return params_from_json_text(ss.str());
}

std::string params_to_json_text(const ModelParams& p) {
    json j;
    j["n"] = p.n;
    j["alpha"] = p.alpha;
    j["a"] = p.a.entries();
    j["b"] = p.b.mat().entries();
    j["x0"] = p.x0.mat().entries();
    j["r"] = p.r;
    j["y0"] = p.y0;
    j["omega"] = p.omega;
    return j.dump(2);
}

}  // namespace wishart
