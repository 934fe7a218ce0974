#pragma once

// Bell-diagonal two-qubit states and the local noise channels acting on them.
//
// Coefficients are stored in the order (phi+, phi-, psi+, psi-). Each Bell
// state carries a pair of Pauli labels (x, z): x marks a bit flip, z a phase
// flip. The storage index is 2*x + z, so composing Pauli labels (XOR) is the
// same as XOR-ing indices:
//
//   index 0  phi+  (0,0)      index 2  psi+  (1,0)
//   index 1  phi-  (0,1)      index 3  psi-  (1,1)

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "repeaterscope/errors.hpp"

namespace repeaterscope::states {

inline constexpr double kNormTolerance = 1e-12;

template <typename Scalar>
class BellDiagonal {
 public:
  using Coeffs = Eigen::Matrix<Scalar, 4, 1>;

  BellDiagonal() : coeffs_(Scalar(1), Scalar(0), Scalar(0), Scalar(0)) {}

  BellDiagonal(Scalar a, Scalar b, Scalar c, Scalar d) : BellDiagonal(Coeffs(a, b, c, d)) {}

  explicit BellDiagonal(const Coeffs& coeffs) : coeffs_(coeffs) { validate(); }

  /// Werner state: fidelity on phi+ with the remainder split evenly.
  static BellDiagonal werner(Scalar fidelity) {
    const Scalar rest = (Scalar(1) - fidelity) / Scalar(3);
    return BellDiagonal(fidelity, rest, rest, rest);
  }

  /// Skips validation. Only for results of the maps below, which preserve
  /// normalization up to rounding.
  static BellDiagonal from_trusted(const Coeffs& coeffs) {
    BellDiagonal s;
    s.coeffs_ = coeffs;
    return s;
  }

  Scalar a() const { return coeffs_[0]; }
  Scalar b() const { return coeffs_[1]; }
  Scalar c() const { return coeffs_[2]; }
  Scalar d() const { return coeffs_[3]; }
  Scalar fidelity() const { return coeffs_[0]; }
  Scalar operator[](int i) const { return coeffs_[i]; }
  const Coeffs& coeffs() const { return coeffs_; }

 private:
  void validate() const {
    using std::abs;
    for (int i = 0; i < 4; ++i) {
      if (!(coeffs_[i] >= Scalar(-kNormTolerance) && coeffs_[i] <= Scalar(1 + kNormTolerance))) {
        std::ostringstream os;
        os << "Bell coefficient " << i << " out of [0,1]: " << coeffs_[i];
        throw DomainError(os.str());
      }
    }
    if (abs(coeffs_.sum() - Scalar(1)) > Scalar(kNormTolerance)) {
      std::ostringstream os;
      os << "Bell coefficients sum to " << coeffs_.sum() << ", expected 1";
      throw DomainError(os.str());
    }
  }

  Coeffs coeffs_;
};

using BellState = BellDiagonal<double>;

/// Local noise parameters shared by every node.
struct NoiseParams {
  double eps_g = 0.0;  // two-qubit gate depolarizing probability
  double xi = 0.0;     // measurement flip probability
  double t2 = 1.0;     // memory coherence time, seconds

  /// Measurement error tied to the gate error as xi = eps_g / 4.
  static NoiseParams from_gate_error(double eps_g, double t2) {
    NoiseParams p{eps_g, eps_g / 4.0, t2};
    p.validate();
    return p;
  }

  void validate() const {
    if (!(eps_g >= 0.0 && eps_g <= 1.0)) throw DomainError("eps_g must lie in [0,1]");
    if (!(xi >= 0.0 && xi <= 1.0)) throw DomainError("xi must lie in [0,1]");
    if (!(t2 > 0.0)) throw DomainError("t2 must be positive");
  }
};

template <typename Scalar>
struct DistillationOutcome {
  BellDiagonal<Scalar> state;
  Scalar success_prob;
};

namespace detail {

template <typename Scalar>
using Coeffs = typename BellDiagonal<Scalar>::Coeffs;

// Apply a Pauli label (as an index) to every coefficient: out[g ^ mask] = in[g].
template <typename Scalar>
Coeffs<Scalar> relabel(const Coeffs<Scalar>& in, int mask) {
  Coeffs<Scalar> out;
  for (int g = 0; g < 4; ++g) out[g ^ mask] = in[g];
  return out;
}

}  // namespace detail

/// Werner state with fidelity 1 - (5/4) eps_g.
template <typename Scalar = double>
BellDiagonal<Scalar> initial_state(Scalar eps_g) {
  if (!(eps_g >= Scalar(0) && eps_g <= Scalar(0.8))) {
    throw DomainError("initial_state: eps_g must lie in [0, 0.8]");
  }
  return BellDiagonal<Scalar>::werner(Scalar(1) - Scalar(1.25) * eps_g);
}

/// Uniform depolarization of weight p: s -> (1-p) s + p/4.
template <typename Scalar>
BellDiagonal<Scalar> depolarize(const BellDiagonal<Scalar>& s, Scalar p) {
  const detail::Coeffs<Scalar> out =
      (Scalar(1) - p) * s.coeffs() + detail::Coeffs<Scalar>::Constant(p / Scalar(4));
  return BellDiagonal<Scalar>::from_trusted(out);
}

/// Pure dephasing for storage time t: Lambda = (1 + exp(-2t/T2)) / 2 mixes
/// phi+ with phi- and psi+ with psi-.
template <typename Scalar>
BellDiagonal<Scalar> apply_dephasing(const BellDiagonal<Scalar>& s, Scalar t, Scalar t2) {
  using std::exp;
  if (!(t >= Scalar(0))) throw DomainError("apply_dephasing: storage time must be non-negative");
  if (!(t2 > Scalar(0))) throw DomainError("apply_dephasing: t2 must be positive");
  const Scalar keep = (Scalar(1) + exp(Scalar(-2) * t / t2)) / Scalar(2);
  const detail::Coeffs<Scalar> out =
      keep * s.coeffs() + (Scalar(1) - keep) * detail::relabel<Scalar>(s.coeffs(), 1);
  return BellDiagonal<Scalar>::from_trusted(out);
}

/// Bell-measurement entanglement swap of two adjacent pairs.
///
/// The ideal composition is the XOR convolution of the Pauli labels. Gate noise
/// mixes the result uniformly with weight eps_g; each of the two measured bits
/// is then flipped independently with probability xi.
template <typename Scalar>
BellDiagonal<Scalar> swap(const BellDiagonal<Scalar>& s1, const BellDiagonal<Scalar>& s2,
                          const NoiseParams& noise) {
  using Coeffs = detail::Coeffs<Scalar>;
  Coeffs out = Coeffs::Zero();
  for (int g1 = 0; g1 < 4; ++g1) {
    for (int g2 = 0; g2 < 4; ++g2) out[g1 ^ g2] += s1[g1] * s2[g2];
  }

  const Scalar eps = Scalar(noise.eps_g);
  out = (Scalar(1) - eps) * out + Coeffs::Constant(eps / Scalar(4));

  const Scalar xi = Scalar(noise.xi);
  const Scalar none = (Scalar(1) - xi) * (Scalar(1) - xi);
  const Scalar single = xi * (Scalar(1) - xi);
  const Scalar both = xi * xi;
  out = none * out + single * detail::relabel<Scalar>(out, 2) +
        single * detail::relabel<Scalar>(out, 1) + both * detail::relabel<Scalar>(out, 3);
  return BellDiagonal<Scalar>::from_trusted(out);
}

/// Ideal DEJMPS branches for (already noisy) inputs. `coincident` is the
/// unnormalized output conditioned on matching parities, `anti` the
/// unnormalized output on mismatched parities. Their sums are the branch
/// probabilities.
template <typename Scalar>
struct DejmpsBranches {
  detail::Coeffs<Scalar> coincident;
  detail::Coeffs<Scalar> anti;
};

template <typename Scalar>
DejmpsBranches<Scalar> dejmps_branches(const BellDiagonal<Scalar>& s1,
                                       const BellDiagonal<Scalar>& s2) {
  const Scalar a1 = s1.a(), b1 = s1.b(), c1 = s1.c(), d1 = s1.d();
  const Scalar a2 = s2.a(), b2 = s2.b(), c2 = s2.c(), d2 = s2.d();
  DejmpsBranches<Scalar> br;
  br.coincident << a1 * a2 + d1 * d2, a1 * d2 + d1 * a2, c1 * c2 + b1 * b2, c1 * b2 + b1 * c2;
  br.anti << a1 * c2 + d1 * b2, a1 * b2 + d1 * c2, c1 * a2 + b1 * d2, c1 * d2 + b1 * a2;
  return br;
}

/// Two-to-one DEJMPS distillation with noisy gates and measurements.
///
/// Each input is depolarized with weight eps_g. A herald is accepted when the
/// two reported parities agree, which happens for true coincidences with both
/// or neither measurement flipped, and for anti-coincidences with exactly one
/// flipped.
template <typename Scalar>
DistillationOutcome<Scalar> dejmps(const BellDiagonal<Scalar>& s1, const BellDiagonal<Scalar>& s2,
                                   const NoiseParams& noise) {
  const Scalar eps = Scalar(noise.eps_g);
  const auto br = dejmps_branches(depolarize(s1, eps), depolarize(s2, eps));
  const Scalar xi = Scalar(noise.xi);
  const Scalar agree = (Scalar(1) - xi) * (Scalar(1) - xi) + xi * xi;
  const Scalar disagree = Scalar(2) * xi * (Scalar(1) - xi);

  const detail::Coeffs<Scalar> accepted = agree * br.coincident + disagree * br.anti;
  const Scalar total = accepted.sum();
  if (!(total > Scalar(0))) throw DegenerateInput("dejmps: acceptance probability is zero");
  return {BellDiagonal<Scalar>::from_trusted(accepted / total), total};
}

/// Binary entropy in bits with h(0) = h(1) = 0.
template <typename Scalar>
Scalar binary_entropy(Scalar p) {
  using std::log2;
  if (p <= Scalar(0) || p >= Scalar(1)) return Scalar(0);
  return -p * log2(p) - (Scalar(1) - p) * log2(Scalar(1) - p);
}

/// Asymptotic BB84 secret fraction max(0, 1 - h(e_X) - h(e_Z)), where the
/// Z-basis error rate counts psi states and the X-basis rate counts the
/// phase-flipped states.
template <typename Scalar>
Scalar key_fraction(const BellDiagonal<Scalar>& s) {
  const Scalar e_z = s.c() + s.d();
  const Scalar e_x = s.b() + s.d();
  return std::max(Scalar(0), Scalar(1) - binary_entropy(e_x) - binary_entropy(e_z));
}

}  // namespace repeaterscope::states
