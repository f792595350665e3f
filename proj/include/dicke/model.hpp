#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "dicke/errors.hpp"

namespace dicke {

/// Dense eigensolves are capped; these defaults fit a ~5 GB workstation.
inline constexpr int kDefaultMaxHilbertDim = 10000;
inline constexpr long kDefaultMaxLiouvilleDim = 40000;

enum class Sector { Full, Positive, Negative };

std::string to_string(Sector s);
Sector sector_from_string(std::string_view s);

/// Physical and truncation parameters of the Dicke model with cavity decay.
/// All frequencies and couplings are dimensionless, scaled to the cavity
/// decay rate kappa. The pseudo-spin j is stored as the integer 2j so the
/// parity exponents and dimension formulas stay in exact arithmetic.
struct ModelParams {
    double omega = 1.0;    ///< cavity frequency
    double omega0 = 1.0;   ///< atomic transition frequency
    double gamma = 1.0;    ///< atom-field coupling strength
    double kappa = 1.0;    ///< cavity decay rate (normalization)
    int two_j = 2;         ///< twice the collective pseudo-spin
    int n_max = 30;        ///< photon-number truncation

    double j() const { return 0.5 * two_j; }
    int atom_count() const { return two_j; }
    int spin_dim() const { return two_j + 1; }
    int dim_hilbert() const { return (two_j + 1) * (n_max + 1); }
    long dim_liouville() const {
        const long d = dim_hilbert();
        return d * d;
    }

    /// Throws ConfigError when a physical or truncation invariant is violated.
    void validate() const;

    static ModelParams from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

/// One state |n; j, m_z> of the Fock basis. m_z is stored doubled, matching
/// ModelParams::two_j, so half-integer spins need no floating arithmetic.
struct FockLabel {
    int n = 0;
    int two_mz = 0;

    /// Position in the flattened basis, 0-based: (2j+1) n + (m_z + j).
    int flat_index(int two_j) const {
        return (two_j + 1) * n + (two_mz + two_j) / 2;
    }
    /// The conventional 1-based index f(n, m_z) = (2j+1) n + m_z + j + 1,
    /// used only in reports.
    int report_index(int two_j) const { return flat_index(two_j) + 1; }
    /// Parity eigenvalue (-1)^(n + m_z + j).
    int parity(int two_j) const {
        return (n + (two_mz + two_j) / 2) % 2 == 0 ? +1 : -1;
    }

    bool operator==(const FockLabel&) const = default;
};

/// Full Fock basis in flat-index order: n outer, m_z inner ascending.
std::vector<FockLabel> fock_basis(const ModelParams& params);

int parity_of(const FockLabel& label, int two_j);

struct CriticalCouplings {
    double isolated;     ///< gamma_c of the closed system
    double open_system;  ///< gamma_c^os, shifted by the cavity decay
};

/// gamma_c = sqrt(omega*omega0)/2 and gamma_c^os = gamma_c * sqrt(1 + kappa^2/omega^2).
CriticalCouplings critical_couplings(const ModelParams& params);

/// Dicke Hamiltonian in the truncated Fock basis. Real symmetric,
/// dimension (2j+1)(n_max+1). Diagonal: omega*n + omega0*m_z. Off-diagonal:
/// gamma/sqrt(N) (sqrt(n+1) d_{n',n+1} + sqrt(n) d_{n',n-1})
///              (C+ d_{m',m+1} + C- d_{m',m-1}),
/// C+- = sqrt(j(j+1) - m_z(m_z +- 1)).
Eigen::MatrixXd build_hamiltonian(const ModelParams& params,
                                  int max_dim = kDefaultMaxHilbertDim);

}  // namespace dicke
