#pragma once

// Brute-force reference engine in a truncated Fock basis. Input states are
// Schmidt-diagonal, sum_n c_n |n, n>; the interferometer is applied by exact
// rotations inside each total-photon sector and loss by explicit Kraus
// branches. Nothing here touches the generating-function machinery.

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "gsp/gsp_core.hpp"
#include "gsp/loss.hpp"
#include "gsp/metrology.hpp"

namespace gsp::oracle {

inline constexpr int max_cutoff = 512;
inline constexpr double default_tolerance = 1e-16;

struct SchmidtState {
  std::vector<double> coeffs;  // c_0 .. c_cutoff
  int cutoff = 0;
  bool normalized = false;
  double raw_norm2 = 0.0;  // sum of squared coefficients before normalizing

  double norm2() const;
};

/// Dense amplitudes psi(na, nb) for 0 <= na, nb < dim.
class TwoModeState {
 public:
  explicit TwoModeState(int dim);

  int dim() const noexcept { return dim_; }
  Complex& at(int na, int nb) { return amp_[index(na, nb)]; }
  Complex at(int na, int nb) const { return amp_[index(na, nb)]; }
  std::vector<Complex>& data() noexcept { return amp_; }
  const std::vector<Complex>& data() const noexcept { return amp_; }

  double norm2() const;

  /// Probability of each total photon number 0 .. 2 dim - 2.
  std::vector<double> total_photon_distribution() const;

  static TwoModeState from_schmidt(const SchmidtState& st, int extra = 0);

 private:
  std::size_t index(int na, int nb) const {
    return static_cast<std::size_t>(na) * static_cast<std::size_t>(dim_) +
           static_cast<std::size_t>(nb);
  }
  int dim_;
  std::vector<Complex> amp_;
};

/// Passive two-mode transform U given by U a† U† = aa a† + ab b† and
/// U b† U† = ba a† + bb b†.
struct ModeTransform {
  Complex aa;
  Complex ab;
  Complex ba;
  Complex bb;

  /// exp(-i angle J2): a† -> cos a† + sin b†, b† -> cos b† - sin a†.
  static ModeTransform mzi(double angle);
  /// Balanced splitter exp(-i pi/2 J1): a† -> (a† - i b†)/sqrt2.
  static ModeTransform splitter();
  /// Inverse of splitter().
  static ModeTransform splitter_inverse();
};

/// Smallest N such that terms beyond N are negligible: the scan stops once
/// ten consecutive terms each fall below tol times the running total, and
/// N is the index of the first of them. Throws cutoff_overflow past 512.
int choose_cutoff(const std::function<double(int)>& weight, double tol);
int choose_cutoff(const GspParams& p, double tol = default_tolerance);

SchmidtState build_gsp_schmidt(const GspParams& p, int cutoff);
SchmidtState build_tmsv(double z, int cutoff);
/// Normalized a b |TMSV>: c_k ∝ z^{k+1} (k+1).
SchmidtState build_ps_tmsv(double z, int cutoff);
/// Normalized a† b† |TMSV>: c_k ∝ z^{k-1} k.
SchmidtState build_pa_tmsv(double z, int cutoff);

int ps_tmsv_cutoff(double z, double tol = default_tolerance);
int pa_tmsv_cutoff(double z, double tol = default_tolerance);

/// <a^l b^k a†^h b†^g>.
Complex oracle_moment(const SchmidtState& st, int l, int k, int h, int g);

double oracle_apn(const SchmidtState& st);
double oracle_antibunching(const SchmidtState& st);
std::pair<double, double> oracle_quadrature_variances(const SchmidtState& st,
                                                      QuadraturePhases q = {});
double oracle_qfi(const SchmidtState& st);

TwoModeState apply_transform(const TwoModeState& psi, const ModeTransform& u);
TwoModeState apply_transform(const SchmidtState& st, const ModeTransform& u);
TwoModeState apply_mzi(const SchmidtState& st, double mzi_angle);
TwoModeState apply_mzi(const TwoModeState& psi, double mzi_angle);

/// Expectation of the b-mode observable base^{nb}, with 0^0 = 1.
double mode_b_power_expectation(const TwoModeState& psi, double base);

/// Expectation of (-1)^{nb} after splitter_inverse(), computed sector by
/// sector without applying the splitter.
double parity_after_splitter(const TwoModeState& psi);

double oracle_parity(const SchmidtState& st, const PhasePoint& pp);
double oracle_parity_external(const SchmidtState& st, const PhasePoint& pp, double eta);
double oracle_parity_internal(const SchmidtState& st, const PhasePoint& pp, double eta);

/// Sum of the Kraus branch norms for internal loss (1 for a trace-preserving channel).
double internal_loss_trace(const SchmidtState& st, const PhasePoint& pp, double eta);

/// Signal with exact phase derivatives from the generators.
PhaseJet oracle_parity_jet(const SchmidtState& st, const PhasePoint& pp,
                           const std::optional<LossConfig>& loss);

/// Error-propagation sensitivity from exact generator derivatives.
double oracle_sensitivity(const SchmidtState& st, const PhasePoint& pp,
                          const std::optional<LossConfig>& loss = std::nullopt);

/// Same quantity from central differences of the signal with Richardson
/// extrapolation; throws numeric_failure when successive step halvings
/// disagree by more than 1e-6 relative.
double oracle_sensitivity_fd(const SchmidtState& st, const PhasePoint& pp,
                             const std::optional<LossConfig>& loss = std::nullopt);

}  // namespace gsp::oracle
