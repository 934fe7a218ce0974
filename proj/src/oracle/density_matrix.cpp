#include "repeaterscope/oracle/density_matrix.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>

namespace repeaterscope::oracle {

namespace {

using cd = std::complex<double>;
using Mat2 = Eigen::Matrix<cd, 2, 2>;

// Bell vectors in the computational basis |q0 q1>, index 2*q0 + q1.
const std::array<Eigen::Vector4cd, 4>& bell_basis() {
  static const std::array<Eigen::Vector4cd, 4> basis = [] {
    const double h = std::numbers::sqrt2 / 2.0;
    std::array<Eigen::Vector4cd, 4> b;
    b[0] << h, 0, 0, h;   // phi+
    b[1] << h, 0, 0, -h;  // phi-
    b[2] << 0, h, h, 0;   // psi+
    b[3] << 0, h, -h, 0;  // psi-
    return b;
  }();
  return basis;
}

Mat2 rx(double theta) {
  Mat2 m;
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  m << cd(c, 0), cd(0, -s), cd(0, -s), cd(c, 0);
  return m;
}

// Kronecker product of four single-qubit operators, q0 most significant.
Density16 kron4(const Mat2& m0, const Mat2& m1, const Mat2& m2, const Mat2& m3) {
  Density16 out;
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < 16; ++c) {
      out(r, c) = m0(r >> 3 & 1, c >> 3 & 1) * m1(r >> 2 & 1, c >> 2 & 1) * m2(r >> 1 & 1, c >> 1 & 1) *
                  m3(r & 1, c & 1);
    }
  }
  return out;
}

// CNOT as a permutation of basis states.
Density16 cnot(int control, int target) {
  Density16 out = Density16::Zero();
  for (int i = 0; i < 16; ++i) {
    const int cbit = i >> (3 - control) & 1;
    const int j = cbit ? i ^ (1 << (3 - target)) : i;
    out(j, i) = 1.0;
  }
  return out;
}

Density16 product_state(const states::BellState& s1, const states::BellState& s2) {
  const Density4 r1 = bell_density(s1);
  const Density4 r2 = bell_density(s2);
  Density16 out;
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < 16; ++c) out(r, c) = r1(r >> 2, c >> 2) * r2(r & 3, c & 3);
  }
  return out;
}

Density4 swap_output(const Density16& rho) {
  const auto& bell = bell_basis();
  const Mat2 id = Mat2::Identity();
  Mat2 x, z;
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  const std::array<Mat2, 4> correction = {id, z, x, x * z};

  Density4 out = Density4::Zero();
  for (int k = 0; k < 4; ++k) {
    // Project (B1, A2) onto Bell state k; what remains lives on (A1, B2).
    Density4 cond = Density4::Zero();
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int ap = 0; ap < 2; ++ap)
          for (int bp = 0; bp < 2; ++bp) {
            cd sum = 0.0;
            for (int m = 0; m < 4; ++m)
              for (int mp = 0; mp < 4; ++mp) {
                const int row = a << 3 | m << 1 | b;
                const int col = ap << 3 | mp << 1 | bp;
                sum += std::conj(bell[k][m]) * bell[k][mp] * rho(row, col);
              }
            cond(a << 1 | b, ap << 1 | bp) = sum;
          }
    Eigen::Matrix<cd, 4, 4> fix;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) fix(r, c) = id(r >> 1, c >> 1) * correction[k](r & 1, c & 1);
    out += fix * cond * fix.adjoint();
  }
  return out;
}

Density4 dejmps_output(const Density16& rho, DejmpsBranch branch, double& prob) {
  const double q = std::numbers::pi / 2.0;
  const Density16 u = cnot(1, 3) * cnot(0, 2) * kron4(rx(q), rx(-q), rx(q), rx(-q));
  const Density16 evolved = u * rho * u.adjoint();
  Density4 out = Density4::Zero();
  for (int a2 = 0; a2 < 2; ++a2) {
    for (int b2 = 0; b2 < 2; ++b2) {
      const bool coincident = a2 == b2;
      if (coincident != (branch == DejmpsBranch::Coincident)) continue;
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out(r, c) += evolved(r << 2 | a2 << 1 | b2, c << 2 | a2 << 1 | b2);
    }
  }
  prob = out.trace().real();
  if (prob > 0.0) out /= prob;
  return out;
}

}  // namespace

Density4 bell_density(const states::BellState& s) {
  const auto& bell = bell_basis();
  Density4 rho = Density4::Zero();
  for (int k = 0; k < 4; ++k) rho += s[k] * bell[k] * bell[k].adjoint();
  return rho;
}

Eigen::Vector4d bell_coefficients(const Density4& rho) {
  const auto& bell = bell_basis();
  Eigen::Vector4d out;
  for (int k = 0; k < 4; ++k) out[k] = (bell[k].adjoint() * rho * bell[k])(0, 0).real();
  return out;
}

double bell_off_diagonal(const Density4& rho) {
  const auto& bell = bell_basis();
  double worst = 0.0;
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k)
      if (j != k) worst = std::max(worst, std::abs((bell[j].adjoint() * rho * bell[k])(0, 0)));
  return worst;
}

Density4 dm_two_pair_density(TwoPairMap map, const states::BellState& s1, const states::BellState& s2,
                             DejmpsBranch branch, double* success_prob) {
  const Density16 rho = product_state(s1, s2);
  double prob = 1.0;
  const Density4 out = map == TwoPairMap::Swap ? swap_output(rho) : dejmps_output(rho, branch, prob);
  if (success_prob) *success_prob = prob;
  return out;
}

TwoPairResult dm_two_pair(TwoPairMap map, const states::BellState& s1, const states::BellState& s2,
                          DejmpsBranch branch) {
  double prob = 1.0;
  const Density4 rho = dm_two_pair_density(map, s1, s2, branch, &prob);
  return {states::BellState::from_trusted(bell_coefficients(rho)), prob};
}

Density4 dm_dephase(const Density4& rho, double t, double t2) {
  const double decay = std::exp(-t / t2);
  Density4 out = rho;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      out(r, c) *= std::pow(decay, ((r ^ c) >> 1 & 1) + ((r ^ c) & 1));
  return out;
}

}  // namespace repeaterscope::oracle
