#include "dicke/model.hpp"

#include <cmath>

namespace dicke {

std::string to_string(Sector s) {
    switch (s) {
        case Sector::Full: return "full";
        case Sector::Positive: return "+";
        case Sector::Negative: return "-";
    }
    return "?";
}

Sector sector_from_string(std::string_view s) {
    if (s == "full") return Sector::Full;
    if (s == "+" || s == "positive") return Sector::Positive;
    if (s == "-" || s == "negative") return Sector::Negative;
    throw ConfigError("unknown sector '" + std::string(s) + "' (expected +, -, or full)");
}

void ModelParams::validate() const {
    if (!(omega > 0.0)) throw ConfigError("omega must be > 0");
    if (!(omega0 > 0.0)) throw ConfigError("omega0 must be > 0");
    if (!(kappa > 0.0)) throw ConfigError("kappa must be > 0");
    if (!(gamma >= 0.0)) throw ConfigError("gamma must be >= 0");
    if (two_j < 0) throw ConfigError("two_j must be a non-negative integer");
    if (n_max < 0) throw ConfigError("n_max must be >= 0");
}

ModelParams ModelParams::from_json(const nlohmann::json& j) {
    ModelParams p;
    try {
        p.omega = j.at("omega").get<double>();
        p.omega0 = j.at("omega0").get<double>();
        p.gamma = j.at("gamma").get<double>();
        p.kappa = j.value("kappa", 1.0);
        p.two_j = j.at("two_j").get<int>();
        p.n_max = j.at("n_max").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad model parameters: ") + e.what());
    }
    p.validate();
    return p;
}

nlohmann::json ModelParams::to_json() const {
    return {{"omega", omega},   {"omega0", omega0}, {"gamma", gamma},
            {"kappa", kappa},   {"two_j", two_j},   {"n_max", n_max}};
}

std::vector<FockLabel> fock_basis(const ModelParams& params) {
    std::vector<FockLabel> basis;
    basis.reserve(params.dim_hilbert());
    for (int n = 0; n <= params.n_max; ++n)
        for (int two_mz = -params.two_j; two_mz <= params.two_j; two_mz += 2)
            basis.push_back({n, two_mz});
    return basis;
}

int parity_of(const FockLabel& label, int two_j) { return label.parity(two_j); }

CriticalCouplings critical_couplings(const ModelParams& params) {
    const double gc = 0.5 * std::sqrt(params.omega * params.omega0);
    const double shift = std::sqrt(1.0 + params.kappa * params.kappa / (params.omega * params.omega));
    return {gc, gc * shift};
}

Eigen::MatrixXd build_hamiltonian(const ModelParams& params, int max_dim) {
    params.validate();
    const int dim = params.dim_hilbert();
    if (dim > max_dim)
        throw DimensionError("Hilbert dimension " + std::to_string(dim) +
                             " exceeds the guard of " + std::to_string(max_dim));

    const auto basis = fock_basis(params);
    // gamma/sqrt(N) with N = 2j atoms; guard the degenerate two_j = 0 case
    // where the coupling term is absent.
    const double g = params.two_j > 0 ? params.gamma / std::sqrt(double(params.two_j)) : 0.0;
    const double j = params.j();

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int col = 0; col < dim; ++col) {
        const auto& [n, two_mz] = basis[col];
        const double mz = 0.5 * two_mz;
        h(col, col) = params.omega * n + params.omega0 * mz;
        if (g == 0.0) continue;

        const double c_plus = std::sqrt(j * (j + 1.0) - mz * (mz + 1.0));
        const double c_minus = std::sqrt(j * (j + 1.0) - mz * (mz - 1.0));
        for (const int dn : {+1, -1}) {
            const int np = n + dn;
            if (np < 0 || np > params.n_max) continue;
            const double photon = dn > 0 ? std::sqrt(n + 1.0) : std::sqrt(double(n));
            if (two_mz + 2 <= params.two_j) {
                const int row = FockLabel{np, two_mz + 2}.flat_index(params.two_j);
                h(row, col) = g * photon * c_plus;
            }
            if (two_mz - 2 >= -params.two_j) {
                const int row = FockLabel{np, two_mz - 2}.flat_index(params.two_j);
                h(row, col) = g * photon * c_minus;
            }
        }
    }
    return h;
}

}  // namespace dicke
