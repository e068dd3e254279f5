#include <doctest.h>

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "gsp/error.hpp"
#include "gsp/fock_oracle.hpp"
#include "reference.hpp"

using namespace gsp::oracle;
using gsp::GspParams;
using gsp::PhasePoint;
using reference::rel;

namespace {

SchmidtState state_for(const GspParams& p, double tol = default_tolerance) {
  return build_gsp_schmidt(p, choose_cutoff(p, tol));
}

TwoModeState random_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  TwoModeState psi(dim);
  for (auto& c : psi.data()) c = {g(rng), g(rng)};
  const double norm = std::sqrt(psi.norm2());
  for (auto& c : psi.data()) c /= norm;
  return psi;
}

// Compares amplitudes by (na, nb); transforms enlarge the box, so entries
// outside the smaller state count as zero.
double max_gap(const TwoModeState& a, const TwoModeState& b) {
  const int dim = std::max(a.dim(), b.dim());
  auto amp = [](const TwoModeState& s, int na, int nb) {
    return na < s.dim() && nb < s.dim() ? s.at(na, nb) : std::complex<double>{};
  };
  double m = 0.0;
  for (int na = 0; na < dim; ++na)
    for (int nb = 0; nb < dim; ++nb) m = std::max(m, std::abs(amp(a, na, nb) - amp(b, na, nb)));
  return m;
}

}  // namespace

TEST_CASE("cutoff selection") {
  const int nc = choose_cutoff(GspParams::tmsv(0.5), 1e-12);
  CHECK(nc >= 17);
  CHECK(nc <= 25);
  // the dropped tail really is below the tolerance
  double tail = 0.0, total = 0.0;
  for (int j = 0; j < 400; ++j) {
    const double w = std::pow(0.25, j);
    total += w;
    if (j > nc) tail += w;
  }
  CHECK(tail < 1e-12 * total);

  for (const auto& [m, n] : std::vector<std::pair<int, int>>{{0, 0}, {1, 1}, {2, 2}}) {
    int previous = 0;
    for (int iz = 1; iz <= 9; ++iz) {
      const int c = choose_cutoff(GspParams::make(0.5, m, n, 0.1 * iz), 1e-12);
      CHECK(c >= previous);
      previous = c;
    }
  }
  try {
    choose_cutoff(GspParams::make(0.5, 2, 2, 0.99), 1e-12);
    FAIL("expected a cutoff overflow");
  } catch (const gsp::Error& e) {
    CHECK(e.kind() == gsp::ErrorKind::cutoff_overflow);
  }
  CHECK_THROWS_AS(choose_cutoff(GspParams::tmsv(0.5), 1e-3), gsp::Error);
  CHECK_THROWS_AS(choose_cutoff(GspParams::tmsv(0.5), 0.0), gsp::Error);
}

TEST_CASE("Schmidt coefficients") {
  const SchmidtState tmsv = state_for(GspParams::tmsv(0.6));
  CHECK(tmsv.normalized);
  CHECK(std::abs(tmsv.norm2() - 1.0) < 1e-12);
  for (int j = 1; j <= tmsv.cutoff; ++j) CHECK(tmsv.coeffs[j] == doctest::Approx(0.6 * tmsv.coeffs[j - 1]));

  for (const auto& [m, n] : std::vector<std::pair<int, int>>{{0, 1}, {1, 0}, {2, 2}}) {
    const SchmidtState st = state_for(GspParams::make(0.0, m, n, 0.5));
    CHECK(st.coeffs[0] == 0.0);
    for (double c : st.coeffs) CHECK(c >= 0.0);
  }

  const GspParams p = GspParams::make(1.0, 1, 0, 0.5);
  const SchmidtState st = state_for(p);
  for (int j = 1; j <= 10; ++j) {
    CHECK(st.coeffs[j] / st.coeffs[0] == doctest::Approx(std::pow(0.5, j) * (j + 1)));
  }
  // raw amplitudes omit the sqrt(1 - z^2) prefactor
  CHECK(rel(st.raw_norm2 * (1 - 0.25), 20.0 / 9.0) < 1e-12);
}

TEST_CASE("photon-subtracted and photon-added baselines") {
  const SchmidtState ps = build_ps_tmsv(0.5, ps_tmsv_cutoff(0.5));
  CHECK(ps.coeffs[0] == doctest::Approx(ps.coeffs[1]));
  const SchmidtState pa = build_pa_tmsv(0.5, pa_tmsv_cutoff(0.5));
  CHECK(pa.coeffs[0] == 0.0);

  const SchmidtState ps6 = build_ps_tmsv(0.6, ps_tmsv_cutoff(0.6));
  const SchmidtState pa6 = build_pa_tmsv(0.6, pa_tmsv_cutoff(0.6));
  const double tmsv_apn = oracle_apn(state_for(GspParams::tmsv(0.6)));
  CHECK(oracle_apn(ps6) > tmsv_apn);
  CHECK(oracle_apn(pa6) > tmsv_apn);
  CHECK(rel(oracle_apn(ps6), static_cast<double>(reference::apn(reference::ps_tmsv(0.6)))) < 1e-12);
  CHECK(rel(oracle_apn(pa6), static_cast<double>(reference::apn(reference::pa_tmsv(0.6)))) < 1e-12);
  CHECK(rel(oracle_qfi(pa6), static_cast<double>(reference::qfi(reference::pa_tmsv(0.6)))) < 1e-12);
}

TEST_CASE("moments and Fisher information") {
  const SchmidtState tmsv = state_for(GspParams::tmsv(0.6));
  CHECK(std::abs(oracle_moment(tmsv, 1, 0, 1, 0).real() - 1.0 - 0.5625) < 1e-13);
  CHECK(std::abs(oracle_apn(tmsv) - 0.5625) < 1e-13);
  CHECK(rel(oracle_qfi(tmsv), 3.515625) < 1e-13);
  CHECK(rel(oracle_qfi(state_for(GspParams::make(0.0, 1, 0, 0.5))), 256.0 / 15.0) < 1e-12);

  SchmidtState pair;
  pair.coeffs = {0.0, 1.0};
  pair.cutoff = 1;
  pair.normalized = true;
  pair.raw_norm2 = 1.0;
  CHECK(oracle_qfi(pair) == doctest::Approx(4.0));

  const SchmidtState st = state_for(GspParams::make(0.5, 1, 2, 0.6));
  const reference::Schmidt ref = reference::gsp(0.5, 1, 2, 0.6);
  for (int l = 0; l <= 2; ++l)
    for (int k = 0; k <= 2; ++k)
      for (int h = 0; h <= 2; ++h)
        for (int g = 0; g <= 2; ++g) {
          const std::complex<double> v = oracle_moment(st, l, k, h, g);
          if (h - l != g - k) {
            CHECK(v == std::complex<double>(0.0));
          } else {
            CHECK(rel(v.real(), static_cast<double>(reference::moment(ref, l, k, h, g))) < 1e-12);
          }
        }
}

TEST_CASE("interferometer rotation") {
  std::mt19937_64 rng(3);
  const TwoModeState psi = random_state(6, rng);
  CHECK(max_gap(apply_mzi(psi, 0.0), psi) < 1e-15);

  TwoModeState one(2);
  one.at(1, 0) = 1.0;
  const double angle = 0.8;
  const TwoModeState out = apply_mzi(one, angle);
  CHECK(std::abs(out.at(1, 0) - std::cos(angle / 2)) < 1e-15);
  CHECK(std::abs(out.at(0, 1) - std::sin(angle / 2)) < 1e-15);

  for (double a : {0.3, 1.7, -2.5}) {
    const TwoModeState rotated = apply_mzi(psi, a);
    CHECK(std::abs(rotated.norm2() - 1.0) < 1e-10);
    CHECK(max_gap(apply_mzi(rotated, -a), psi) < 1e-10);
    const auto before = psi.total_photon_distribution();
    const auto after = rotated.total_photon_distribution();
    for (std::size_t i = 0; i < after.size(); ++i) {
      CHECK(std::abs((i < before.size() ? before[i] : 0.0) - after[i]) < 1e-12);
    }
  }

  const SchmidtState st = state_for(GspParams::make(0.5, 1, 1, 0.5));
  CHECK(max_gap(apply_mzi(st, 1.1), apply_mzi(TwoModeState::from_schmidt(st), 1.1)) < 1e-12);
  CHECK(max_gap(apply_transform(apply_transform(psi, ModeTransform::splitter()), ModeTransform::splitter_inverse()),
                psi) < 1e-12);
}

TEST_CASE("sector parity shortcut matches an explicit splitter") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const TwoModeState psi = random_state(7, rng);
    const TwoModeState out = apply_transform(psi, ModeTransform::splitter_inverse());
    double explicit_parity = 0.0;
    for (int na = 0; na < out.dim(); ++na)
      for (int nb = 0; nb < out.dim(); ++nb) explicit_parity += (nb % 2 ? -1.0 : 1.0) * std::norm(out.at(na, nb));
    CHECK(std::abs(parity_after_splitter(psi) - explicit_parity) < 1e-12);
  }
}

TEST_CASE("parity and loss on the oracle") {
  const SchmidtState tmsv = state_for(GspParams::tmsv(0.6));
  CHECK(std::abs(oracle_parity(tmsv, PhasePoint::from_detection(0.3)) - 0.874697) < 1e-6);
  for (double z : {0.3, 0.6, 0.8}) {
    const SchmidtState st = state_for(GspParams::tmsv(z));
    for (double phi : {0.1, 0.3, 0.7}) {
      const double q = z * z;
      const double expected = (1 - q) / std::sqrt(1 - 2 * q * std::cos(2 * phi) + q * q);
      CHECK(rel(oracle_parity(st, PhasePoint::from_detection(phi)), expected) < 1e-10);
    }
  }

  const SchmidtState st = state_for(GspParams::make(0.5, 1, 1, 0.6));
  CHECK(std::abs(oracle_parity(st, PhasePoint::from_detection(0.0)) - 1.0) < 1e-12);
  for (double phi : {0.0, 0.2, 0.5}) {
    const PhasePoint pp = PhasePoint::from_detection(phi);
    const double ideal = oracle_parity(st, pp);
    CHECK(std::abs(oracle_parity_external(st, pp, 1.0) - ideal) < 1e-14);
    CHECK(std::abs(oracle_parity_internal(st, pp, 1.0) - ideal) < 1e-12);
    CHECK(std::abs(internal_loss_trace(st, pp, 0.8) - 1.0) < 1e-10);
    CHECK(std::abs(oracle_parity_internal(st, pp, 0.8)) <= 1.0);
  }
}

TEST_CASE("oracle sensitivity") {
  const SchmidtState tmsv = state_for(GspParams::tmsv(0.6));
  CHECK(rel(oracle_sensitivity(tmsv, PhasePoint::from_detection(0.0)), 0.64 / 1.2) < 1e-10);
  CHECK(rel(oracle_sensitivity_fd(tmsv, PhasePoint::from_detection(0.0)), 0.64 / 1.2) < 1e-6);

  const SchmidtState st = state_for(GspParams::make(1.0, 2, 2, 0.5));
  for (double phi : {0.05, 0.2}) {
    const PhasePoint pp = PhasePoint::from_detection(phi);
    for (const std::optional<gsp::LossConfig>& loss :
         {std::optional<gsp::LossConfig>{}, std::optional{gsp::LossConfig{gsp::LossPlacement::external, 0.9}},
          std::optional{gsp::LossConfig{gsp::LossPlacement::internal, 0.9}}}) {
      CHECK(rel(oracle_sensitivity(st, pp, loss), oracle_sensitivity_fd(st, pp, loss)) < 1e-6);
    }
  }
}

TEST_CASE("results are stable under a doubled cutoff") {
  for (double s : {0.0, 1.0}) {
    for (const auto& [m, n] : std::vector<std::pair<int, int>>{{0, 1}, {2, 2}}) {
      for (double z : {0.3, 0.8}) {
        const GspParams p = GspParams::make(s, m, n, z);
        const int nc = choose_cutoff(p);
        const SchmidtState a = build_gsp_schmidt(p, nc);
        const SchmidtState b = build_gsp_schmidt(p, 2 * nc);
        const PhasePoint pp = PhasePoint::from_detection(0.2);
        CHECK(rel(oracle_apn(a), oracle_apn(b)) < 1e-9);
        CHECK(rel(oracle_qfi(a), oracle_qfi(b)) < 1e-9);
        CHECK(rel(oracle_parity(a, pp), oracle_parity(b, pp)) < 1e-9);
        CHECK(rel(oracle_parity_internal(a, pp, 0.9), oracle_parity_internal(b, pp, 0.9)) < 1e-9);
      }
    }
  }
}
