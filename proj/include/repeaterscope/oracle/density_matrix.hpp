#pragma once

// Dense 16-dimensional simulation of two Bell pairs. Qubit order A1, B1, A2, B2
// (A1 most significant); pair 1 is (A1, B1), pair 2 is (A2, B2).

#include <Eigen/Core>

#include <complex>

#include "repeaterscope/states.hpp"

namespace repeaterscope::oracle {

using Density4 = Eigen::Matrix<std::complex<double>, 4, 4>;
using Density16 = Eigen::Matrix<std::complex<double>, 16, 16>;

enum class TwoPairMap {
  Swap,    // Bell measurement on (B1, A2), Pauli correction on B2
  Dejmps,  // local rotations, bilateral CNOT, Z readout of (A2, B2)
};

enum class DejmpsBranch { Coincident, Anti };

struct TwoPairResult {
  states::BellState state;
  double success_prob = 1.0;
};

/// Bell-diagonal density matrix on two qubits.
Density4 bell_density(const states::BellState& s);

/// Diagonal of rho in the Bell basis (phi+, phi-, psi+, psi-).
Eigen::Vector4d bell_coefficients(const Density4& rho);

/// Largest |off-diagonal| of rho in the Bell basis; zero for Bell-diagonal states.
double bell_off_diagonal(const Density4& rho);

/// Exact ideal map; `branch` selects the DEJMPS herald and is ignored for Swap.
TwoPairResult dm_two_pair(TwoPairMap map, const states::BellState& s1, const states::BellState& s2,
                          DejmpsBranch branch = DejmpsBranch::Coincident);

/// Same, returning the full output density matrix for structural checks.
Density4 dm_two_pair_density(TwoPairMap map, const states::BellState& s1, const states::BellState& s2,
                             DejmpsBranch branch, double* success_prob = nullptr);

/// Independent Z dephasing of both memories for time t: every coherence
/// between computational states differing on one qubit decays by exp(-t/T2).
Density4 dm_dephase(const Density4& rho, double t, double t2);

}  // namespace repeaterscope::oracle
