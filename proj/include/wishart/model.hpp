#pragma once

#include <string>
#include <vector>

#include "wishart/matrix.hpp"

namespace wishart {

// Parameters of the Wishart stochastic volatility model
//   dY_t = (r 1 - diag(a^T X_t a)/2) dt + a^T X_t^{1/2} dZ_t
//   dX_t = (alpha I + b X_t + X_t b) dt + X_t^{1/2} dW_t + dW_t^T X_t^{1/2}
// with X_0 = x0, Y_0 = y0. Immutable after construction.
struct ModelParams {
    int n = 0;
    double alpha = 0.0;
    Matrix a;      // invertible, a^T a positive definite
    SymMatrix b;   // -b positive definite
    SymMatrix x0;  // positive definite
    double r = 0.0;
    Vec y0;
    Vec omega;  // basket weights, nonnegative, summing to 1

    // Equal weights when omega is not supplied.
    static ModelParams make(int n, double alpha, Matrix a, SymMatrix b, SymMatrix x0, double r,
                            Vec y0, Vec omega = {});
};

// Every violated parameter constraint, with the offending value. Empty means
// valid.
std::vector<std::string> validate(const ModelParams& params);

// Throws Error listing all violations unless validate() is empty.
void require_valid(const ModelParams& params);

// phi(theta) = b^2 + a (Diag(theta) - theta theta^T) a^T. The Laplace
// transform of Y is finite exactly on U = { theta : phi(theta) PSD }.
SymMatrix phi(const ModelParams& params, const Vec& theta);

struct DomainReport {
    Vec theta;
    double min_eig_phi = 0.0;
    bool inside = false;  // min_eig_phi >= -kDomain
    bool strict = false;  // min_eig_phi >  kDomain
};

DomainReport in_domain(const ModelParams& params, const Vec& theta);

// Radius lambda* = max(2, ||b (a^T)^{-1}||_2 sqrt(2)); every theta with
// ||theta|| > lambda* lies outside U.
double domain_bounding_radius(const ModelParams& params);

// JSON serialization with keys n, alpha, a, b, x0, r, y0, omega (matrices
// row-major).
ModelParams params_from_json_text(const std::string& text);
ModelParams params_from_json_file(const std::string& path);
std::string params_to_json_text(const ModelParams& params);

}  // namespace wishart
