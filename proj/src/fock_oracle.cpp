#include "gsp/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gsp/error.hpp"
#include "gsp/simd/kernels.hpp"

namespace gsp::oracle {

namespace {

constexpr Complex imag_unit{0.0, 1.0};

const std::vector<double>& sqrt_table(int upto) {
  thread_local std::vector<double> table;
  if (static_cast<int>(table.size()) <= upto) {
    const std::size_t old = table.size();
    table.resize(static_cast<std::size_t>(upto) + 1);
    for (std::size_t i = old; i < table.size(); ++i) {
      table[i] = std::sqrt(static_cast<double>(i));
    }
  }
  return table;
}

// sqrt((n + r)! / n!)
double rising_root(int n, int r) {
  double out = 1.0;
  for (int j = 1; j <= r; ++j) {
    out *= std::sqrt(static_cast<double>(n + j));
  }
  return out;
}

void check_tolerance(double tol) {
  if (!(tol > 0.0 && tol <= 1e-6)) {
    raise(ErrorKind::invalid_argument, "cutoff tolerance must lie in (0, 1e-6]");
  }
}

void check_cutoff(int cutoff) {
  if (cutoff < 0) {
    raise(ErrorKind::invalid_argument, "cutoff must be non-negative");
  }
  if (cutoff > max_cutoff) {
    raise(ErrorKind::cutoff_overflow,
          "cutoff " + std::to_string(cutoff) + " exceeds " + std::to_string(max_cutoff));
  }
}

void check_z(double z) {
  if (!(z > 0.0 && z < 1.0)) {
    raise(ErrorKind::invalid_argument, "z must satisfy 0 < z < 1");
  }
}

SchmidtState normalized_state(std::vector<double> raw) {
  SchmidtState st;
  st.cutoff = static_cast<int>(raw.size()) - 1;
  double sum = 0.0;
  for (double c : raw) {
    sum += c * c;
  }
  require_finite(sum, "schmidt normalization");
  if (!(sum > 0.0)) {
    raise(ErrorKind::numeric_failure, "schmidt state has zero norm");
  }
  const double scale = 1.0 / std::sqrt(sum);
  for (double& c : raw) {
    c *= scale;
  }
  st.coeffs = std::move(raw);
  st.normalized = true;
  st.raw_norm2 = sum;
  return st;
}

double gsp_eigenvalue(const GspParams& p, int n) {
  return p.s * static_cast<double>(n + 1) + p.t * static_cast<double>(n);
}

}  // namespace

double SchmidtState::norm2() const {
  double sum = 0.0;
  for (double c : coeffs) {
    sum += c * c;
  }
  return sum;
}

TwoModeState::TwoModeState(int dim) : dim_(dim) {
  if (dim < 1) {
    raise(ErrorKind::invalid_argument, "two-mode state needs dim >= 1");
  }
  amp_.assign(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), Complex{});
}

double TwoModeState::norm2() const {
  double sum = 0.0;
  for (const Complex& a : amp_) {
    sum += std::norm(a);
  }
  return sum;
}

std::vector<double> TwoModeState::total_photon_distribution() const {
  std::vector<double> dist(static_cast<std::size_t>(2 * dim_ - 1), 0.0);
  for (int na = 0; na < dim_; ++na) {
    for (int nb = 0; nb < dim_; ++nb) {
      dist[static_cast<std::size_t>(na + nb)] += std::norm(at(na, nb));
    }
  }
  return dist;
}

TwoModeState TwoModeState::from_schmidt(const SchmidtState& st, int extra) {
  TwoModeState out(st.cutoff + 1 + extra);
  for (int n = 0; n <= st.cutoff; ++n) {
    out.at(n, n) = st.coeffs[static_cast<std::size_t>(n)];
  }
  return out;
}

ModeTransform ModeTransform::mzi(double angle) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  return {c, s, -s, c};
}

ModeTransform ModeTransform::splitter() {
  const double r = std::numbers::sqrt2 / 2.0;
  return {r, Complex(0.0, -r), Complex(0.0, -r), r};
}

ModeTransform ModeTransform::splitter_inverse() {
  const double r = std::numbers::sqrt2 / 2.0;
  return {r, Complex(0.0, r), Complex(0.0, r), r};
}

int choose_cutoff(const std::function<double(int)>& weight, double tol) {
  check_tolerance(tol);
  double total = 0.0;
  int run = 0;
  int first_small = 0;
  for (int n = 0;; ++n) {
    const double w = weight(n);
    require_finite(w, "choose_cutoff");
    total += w;
    if (total > 0.0 && w < tol * total) {
      if (run == 0) {
        first_small = n;
      }
      if (++run == 10) {
        return first_small;
      }
    } else {
      run = 0;
      if (n >= max_cutoff) {
        raise(ErrorKind::cutoff_overflow,
              "Fock cutoff would exceed " + std::to_string(max_cutoff) + " photon pairs");
      }
    }
  }
}

int choose_cutoff(const GspParams& p, double tol) {
  const double log_z2 = 2.0 * std::log(p.z);
  const int power = 2 * (p.m + p.n);
  return choose_cutoff(
      [&](int n) {
        const double lambda = gsp_eigenvalue(p, n);
        if (power > 0 && lambda == 0.0) {
          return 0.0;
        }
        return std::exp(n * log_z2 + power * std::log(lambda));
      },
      tol);
}

int ps_tmsv_cutoff(double z, double tol) {
  check_z(z);
  return choose_cutoff([z](int k) { return std::pow(z, 2 * k) * (k + 1.0) * (k + 1.0); }, tol);
}

int pa_tmsv_cutoff(double z, double tol) {
  check_z(z);
  return choose_cutoff(
      [z](int k) { return k == 0 ? 0.0 : std::pow(z, 2 * (k - 1)) * double(k) * double(k); }, tol);
}

SchmidtState build_gsp_schmidt(const GspParams& p, int cutoff) {
  check_cutoff(cutoff);
  std::vector<double> raw(static_cast<std::size_t>(cutoff) + 1);
  const int power = p.m + p.n;
  double zn = 1.0;
  for (int n = 0; n <= cutoff; ++n) {
    raw[static_cast<std::size_t>(n)] = zn * std::pow(gsp_eigenvalue(p, n), power);
    zn *= p.z;
  }
  return normalized_state(std::move(raw));
}

SchmidtState build_tmsv(double z, int cutoff) {
  check_z(z);
  return build_gsp_schmidt(GspParams::tmsv(z), cutoff);
}

SchmidtState build_ps_tmsv(double z, int cutoff) {
  check_z(z);
  check_cutoff(cutoff);
  std::vector<double> raw(static_cast<std::size_t>(cutoff) + 1);
  for (int k = 0; k <= cutoff; ++k) {
    raw[static_cast<std::size_t>(k)] = std::pow(z, k + 1) * (k + 1.0);
  }
  return normalized_state(std::move(raw));
}

SchmidtState build_pa_tmsv(double z, int cutoff) {
  check_z(z);
  check_cutoff(cutoff);
  std::vector<double> raw(static_cast<std::size_t>(cutoff) + 1, 0.0);
  for (int k = 1; k <= cutoff; ++k) {
    raw[static_cast<std::size_t>(k)] = std::pow(z, k - 1) * double(k);
  }
  return normalized_state(std::move(raw));
}

Complex oracle_moment(const SchmidtState& st, int l, int k, int h, int g) {
  for (int x : {l, k, h, g}) {
    if (x < 0 || x > 4) {
      raise(ErrorKind::invalid_argument, "moment orders must lie in [0, 4]");
    }
  }
  // <Y|X> with X = a†^h b†^g psi and Y = a†^l b†^k psi; the overlap pairs
  // |n'+h, n'+g> with |n+l, n+k>, so it vanishes unless h - l = g - k.
  if (h - l != g - k) {
    return 0.0;
  }
  double sum = 0.0;
  for (int np = 0; np <= st.cutoff; ++np) {
    const int n = np + h - l;
    if (n < 0 || n > st.cutoff) {
      continue;
    }
    const double cx = st.coeffs[static_cast<std::size_t>(np)] * rising_root(np, h) * rising_root(np, g);
    const double cy = st.coeffs[static_cast<std::size_t>(n)] * rising_root(n, l) * rising_root(n, k);
    sum += cx * cy;
  }
  return sum;
}

double oracle_apn(const SchmidtState& st) {
  double sum = 0.0;
  for (int n = 0; n <= st.cutoff; ++n) {
    sum += n * st.coeffs[static_cast<std::size_t>(n)] * st.coeffs[static_cast<std::size_t>(n)];
  }
  return sum;
}

double oracle_antibunching(const SchmidtState& st) {
  double pairs = 0.0;
  double cross = 0.0;
  for (int n = 0; n <= st.cutoff; ++n) {
    const double w = st.coeffs[static_cast<std::size_t>(n)] * st.coeffs[static_cast<std::size_t>(n)];
    pairs += double(n) * double(n - 1) * w;
    cross += double(n) * double(n) * w;
  }
  if (!(cross > 0.0)) {
    raise(ErrorKind::domain, "oracle_antibunching: <a†a b†b> vanishes");
  }
  return (2.0 * pairs) / (2.0 * cross) - 1.0;
}

std::pair<double, double> oracle_quadrature_variances(const SchmidtState& st, QuadraturePhases q) {
  const TwoModeState psi = TwoModeState::from_schmidt(st, 2);
  const int dim = psi.dim();
  const auto& root = sqrt_table(dim);
  const Complex ea = std::polar(1.0, q.theta1);
  const Complex eb = std::polar(1.0, q.theta2);

  auto variance = [&](double sign) {
    // X = (e^{-i th1} a + e^{i th1} a† + sign (e^{-i th2} b + e^{i th2} b†)) / sqrt2
    TwoModeState x(dim);
    for (int na = 0; na < dim; ++na) {
      for (int nb = 0; nb < dim; ++nb) {
        Complex v{};
        if (na + 1 < dim) v += std::conj(ea) * root[na + 1] * psi.at(na + 1, nb);
        if (na > 0) v += ea * root[na] * psi.at(na - 1, nb);
        if (nb + 1 < dim) v += sign * std::conj(eb) * root[nb + 1] * psi.at(na, nb + 1);
        if (nb > 0) v += sign * eb * root[nb] * psi.at(na, nb - 1);
        x.at(na, nb) = v / std::numbers::sqrt2;
      }
    }
    Complex mean{};
    for (std::size_t i = 0; i < x.data().size(); ++i) {
      mean += std::conj(psi.data()[i]) * x.data()[i];
    }
    return x.norm2() - mean.real() * mean.real();
  };
  return {variance(1.0), variance(-1.0)};
}

namespace {

// J2 psi = (a†b - a b†) psi / (2i), computed on the same grid.
TwoModeState apply_j2(const TwoModeState& psi) {
  const int dim = psi.dim();
  const auto& root = sqrt_table(dim);
  TwoModeState out(dim);
  for (int na = 0; na < dim; ++na) {
    for (int nb = 0; nb < dim; ++nb) {
      Complex v{};
      if (na > 0 && nb + 1 < dim) v += root[na] * root[nb + 1] * psi.at(na - 1, nb + 1);
      if (nb > 0 && na + 1 < dim) v -= root[na + 1] * root[nb] * psi.at(na + 1, nb - 1);
      out.at(na, nb) = v / Complex(0.0, 2.0);
    }
  }
  return out;
}

Complex overlap(const TwoModeState& x, const TwoModeState& y) {
  Complex sum{};
  for (std::size_t i = 0; i < x.data().size(); ++i) {
    sum += std::conj(x.data()[i]) * y.data()[i];
  }
  return sum;
}

}  // namespace

double oracle_qfi(const SchmidtState& st) {
  const TwoModeState psi = TwoModeState::from_schmidt(st, 1);
  const TwoModeState j2 = apply_j2(psi);
  const double mean = overlap(psi, j2).real();
  return 4.0 * (j2.norm2() - mean * mean);
}

namespace {

// (x a† + y b†) applied to a sector-N vector indexed by na; result lives in
// sector N + 1.
std::vector<Complex> create(const std::vector<Complex>& in, int sector, Complex x, Complex y) {
  const auto& kernels = simd::active();
  const auto& root = sqrt_table(sector + 1);
  std::vector<Complex> out(static_cast<std::size_t>(sector) + 2, Complex{});
  const std::size_t n = static_cast<std::size_t>(sector) + 1;
  // a†: out[k] += x sqrt(k) in[k-1], k = 1..N+1
  kernels.real_scaled_caxpy(n, x, root.data() + 1, in.data(), out.data() + 1);
  // b†: out[k] += y sqrt(N+1-k) in[k], k = 0..N
  for (std::size_t k = 0; k < n; ++k) {
    out[k] += y * root[n - k] * in[k];
  }
  return out;
}

void scatter_sector(TwoModeState& out, int sector, Complex weight, const std::vector<Complex>& v) {
  for (int na = 0; na <= sector; ++na) {
    out.at(na, sector - na) += weight * v[static_cast<std::size_t>(na)];
  }
}

}  // namespace

TwoModeState apply_transform(const SchmidtState& st, const ModeTransform& u) {
  TwoModeState out(2 * st.cutoff + 1);
  std::vector<Complex> image{1.0};  // U|n, n> for the current n
  out.at(0, 0) += st.coeffs[0] * image[0];
  for (int n = 1; n <= st.cutoff; ++n) {
    // |n, n> = a† b† |n-1, n-1> / n
    const std::vector<Complex> half = create(image, 2 * n - 2, u.aa, u.ab);
    image = create(half, 2 * n - 1, u.ba, u.bb);
    for (Complex& c : image) {
      c /= double(n);
    }
    const double c = st.coeffs[static_cast<std::size_t>(n)];
    if (c != 0.0) {
      scatter_sector(out, 2 * n, c, image);
    }
  }
  return out;
}

TwoModeState apply_transform(const TwoModeState& psi, const ModeTransform& u) {
  const int dim = psi.dim();
  const int max_sector = 2 * (dim - 1);
  TwoModeState out(max_sector + 1);
  const auto& kernels = simd::active();
  // images[na] = U|na, N - na> within sector N, built from sector N - 1.
  std::vector<std::vector<Complex>> images{{1.0}};
  out.at(0, 0) += psi.at(0, 0);
  std::vector<Complex> acc;
  for (int sector = 1; sector <= max_sector; ++sector) {
    std::vector<std::vector<Complex>> next(static_cast<std::size_t>(sector) + 1);
    next[0] = create(images[0], sector - 1, u.ba, u.bb);
    for (Complex& c : next[0]) {
      c /= std::sqrt(double(sector));
    }
    for (int na = 1; na <= sector; ++na) {
      next[static_cast<std::size_t>(na)] =
          create(images[static_cast<std::size_t>(na - 1)], sector - 1, u.aa, u.ab);
      for (Complex& c : next[static_cast<std::size_t>(na)]) {
        c /= std::sqrt(double(na));
      }
    }
    acc.assign(static_cast<std::size_t>(sector) + 1, Complex{});
    bool any = false;
    for (int na = std::max(0, sector - dim + 1); na <= std::min(sector, dim - 1); ++na) {
      const Complex c = psi.at(na, sector - na);
      if (c != Complex{}) {
        kernels.caxpy(acc.size(), c, next[static_cast<std::size_t>(na)].data(), acc.data());
        any = true;
      }
    }
    if (any) {
      scatter_sector(out, sector, 1.0, acc);
    }
    images = std::move(next);
  }
  return out;
}

TwoModeState apply_mzi(const SchmidtState& st, double mzi_angle) {
  return apply_transform(st, ModeTransform::mzi(mzi_angle));
}

TwoModeState apply_mzi(const TwoModeState& psi, double mzi_angle) {
  return apply_transform(psi, ModeTransform::mzi(mzi_angle));
}

namespace {

std::vector<double> powers(double base, int count) {
  std::vector<double> w(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    w[static_cast<std::size_t>(i)] = std::pow(base, i);  // pow(0, 0) == 1
  }
  return w;
}

// Row-wise sum_{na, nb} w[nb] conj(x) y.
Complex weighted_overlap(const TwoModeState& x, const TwoModeState& y, const std::vector<double>& w) {
  const auto& kernels = simd::active();
  const std::size_t dim = static_cast<std::size_t>(x.dim());
  Complex sum{};
  for (std::size_t na = 0; na < dim; ++na) {
    sum += kernels.weighted_dot(dim, w.data(), x.data().data() + na * dim, y.data().data() + na * dim);
  }
  return sum;
}

double weighted_norm(const TwoModeState& x, const std::vector<double>& w) {
  const auto& kernels = simd::active();
  const std::size_t dim = static_cast<std::size_t>(x.dim());
  double sum = 0.0;
  for (std::size_t na = 0; na < dim; ++na) {
    sum += kernels.weighted_norm2(dim, w.data(), x.data().data() + na * dim);
  }
  return sum;
}

}  // namespace

double mode_b_power_expectation(const TwoModeState& psi, double base) {
  return weighted_norm(psi, powers(base, psi.dim()));
}

namespace {

// sum_N i^N sum_na (-1)^na conj(x(N-na, na)) y(na, N-na): the bilinear form
// of the parity on mode b after splitter_inverse().
Complex splitter_parity_form(const TwoModeState& x, const TwoModeState& y) {
  const int dim = x.dim();
  static constexpr Complex i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  Complex total{};
  for (int sector = 0; sector <= 2 * (dim - 1); ++sector) {
    Complex part{};
    for (int na = std::max(0, sector - dim + 1); na <= std::min(sector, dim - 1); ++na) {
      const double sign = (na % 2 == 0) ? 1.0 : -1.0;
      part += sign * std::conj(x.at(sector - na, na)) * y.at(na, sector - na);
    }
    total += i_pow[sector % 4] * part;
  }
  return total;
}

}  // namespace

double parity_after_splitter(const TwoModeState& psi) {
  return splitter_parity_form(psi, psi).real();
}

namespace {

void check_eta(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    raise(ErrorKind::invalid_argument, "transmissivity eta must lie in (0, 1]");
  }
}

double checked_real(Complex v, const char* context) {
  if (std::abs(v.imag()) > 1e-9 * std::max(1.0, std::abs(v.real()))) {
    raise(ErrorKind::numeric_failure, std::string(context) + ": complex expectation value");
  }
  return require_finite(v.real(), context);
}

// Ideal or external loss: the signal is <psi| base^{nb} |psi> with
// psi = exp(-i phi J2) psi0, so psi' = -i J2 psi and psi'' = -J2² psi.
PhaseJet diagonal_observable_jet(const SchmidtState& st, double mzi_angle, double base, int order) {
  const TwoModeState psi = apply_mzi(st, mzi_angle);
  const std::vector<double> w = powers(base, psi.dim());
  PhaseJet jet;
  jet.value = weighted_norm(psi, w);
  if (order >= 1) {
    TwoModeState d1 = apply_j2(psi);
    for (Complex& c : d1.data()) {
      c *= -imag_unit;
    }
    jet.d1 = 2.0 * weighted_overlap(psi, d1, w).real();
    if (order >= 2) {
      TwoModeState d2 = apply_j2(d1);
      for (Complex& c : d2.data()) {
        c *= -imag_unit;
      }
      jet.d2 = 2.0 * weighted_overlap(psi, d2, w).real() + 2.0 * weighted_norm(d1, w);
    }
  }
  return jet;
}

struct InternalResult {
  PhaseJet jet;
  double trace = 0.0;
};

// Internal loss: chi = exp(-i phi J3) B1 psi0, amplitude damping on b, then
// B2 = B1^{-1} and parity on b. J3 is diagonal, so chi and its phase
// derivatives are per-amplitude phase factors.
InternalResult internal_loss(const SchmidtState& st, double mzi_angle, double eta, int order) {
  check_eta(eta);
  const TwoModeState beta = apply_transform(st, ModeTransform::splitter());
  const int dim = beta.dim();
  std::vector<TwoModeState> chi(static_cast<std::size_t>(order) + 1, TwoModeState(dim));
  for (int na = 0; na < dim; ++na) {
    for (int nb = 0; nb < dim; ++nb) {
      const double j3 = 0.5 * double(na - nb);
      const Complex base = std::polar(1.0, -mzi_angle * j3) * beta.at(na, nb);
      chi[0].at(na, nb) = base;
      if (order >= 1) chi[1].at(na, nb) = -imag_unit * j3 * base;
      if (order >= 2) chi[2].at(na, nb) = -j3 * j3 * base;
    }
  }

  // log C(nb, k) from lgamma; branches k > 0 vanish at eta = 1.
  const int max_k = eta == 1.0 ? 0 : dim - 1;
  const double log_eta = std::log(eta);
  const double log_loss = eta == 1.0 ? 0.0 : std::log1p(-eta);
  auto kraus = [&](int nb, int k) {
    if (k == 0) {
      return std::exp(0.5 * nb * log_eta);
    }
    const double log_binom = std::lgamma(nb + 1.0) - std::lgamma(k + 1.0) - std::lgamma(nb - k + 1.0);
    return std::exp(0.5 * (log_binom + (nb - k) * log_eta + k * log_loss));
  };

  Complex value{};
  Complex d1{};
  Complex d2{};
  double trace = 0.0;
  std::vector<TwoModeState> branch(chi.size(), TwoModeState(dim));
  for (int k = 0; k <= max_k; ++k) {
    for (auto& b : branch) {
      std::fill(b.data().begin(), b.data().end(), Complex{});
    }
    for (int nb = k; nb < dim; ++nb) {
      const double amp = kraus(nb, k);
      for (int na = 0; na < dim; ++na) {
        for (std::size_t j = 0; j < chi.size(); ++j) {
          branch[j].at(na, nb - k) = amp * chi[j].at(na, nb);
        }
      }
    }
    trace += branch[0].norm2();
    value += splitter_parity_form(branch[0], branch[0]);
    if (order >= 1) {
      d1 += splitter_parity_form(branch[1], branch[0]) + splitter_parity_form(branch[0], branch[1]);
    }
    if (order >= 2) {
      d2 += splitter_parity_form(branch[2], branch[0]) + 2.0 * splitter_parity_form(branch[1], branch[1]) +
            splitter_parity_form(branch[0], branch[2]);
    }
  }
  InternalResult out;
  out.jet.value = checked_real(value, "oracle_parity_internal");
  out.jet.d1 = order >= 1 ? checked_real(d1, "oracle_parity_internal") : 0.0;
  out.jet.d2 = order >= 2 ? checked_real(d2, "oracle_parity_internal") : 0.0;
  out.trace = trace;
  return out;
}

PhaseJet signal_jet(const SchmidtState& st, const PhasePoint& pp,
                    const std::optional<LossConfig>& loss, int order) {
  if (!loss) {
    return diagonal_observable_jet(st, pp.mzi_angle(), -1.0, order);
  }
  check_eta(loss->eta);
  if (loss->placement == LossPlacement::external) {
    return diagonal_observable_jet(st, pp.mzi_angle(), 1.0 - 2.0 * loss->eta, order);
  }
  return internal_loss(st, pp.mzi_angle(), loss->eta, order).jet;
}

}  // namespace

double oracle_parity(const SchmidtState& st, const PhasePoint& pp) {
  return signal_jet(st, pp, std::nullopt, 0).value;
}

double oracle_parity_external(const SchmidtState& st, const PhasePoint& pp, double eta) {
  return signal_jet(st, pp, LossConfig{LossPlacement::external, eta}, 0).value;
}

double oracle_parity_internal(const SchmidtState& st, const PhasePoint& pp, double eta) {
  return signal_jet(st, pp, LossConfig{LossPlacement::internal, eta}, 0).value;
}

double internal_loss_trace(const SchmidtState& st, const PhasePoint& pp, double eta) {
  return internal_loss(st, pp.mzi_angle(), eta, 0).trace;
}

PhaseJet oracle_parity_jet(const SchmidtState& st, const PhasePoint& pp,
                           const std::optional<LossConfig>& loss) {
  return signal_jet(st, pp, loss, 2);
}

double oracle_sensitivity(const SchmidtState& st, const PhasePoint& pp,
                          const std::optional<LossConfig>& loss) {
  const int order = pp.detection_phase() == 0.0 ? 2 : 1;
  return sensitivity_from_jet(signal_jet(st, pp, loss, order), pp.detection_phase(),
                              "oracle_sensitivity");
}

double oracle_sensitivity_fd(const SchmidtState& st, const PhasePoint& pp,
                             const std::optional<LossConfig>& loss) {
  const double phi = pp.detection_phase();
  auto signal = [&](double x) {
    return signal_jet(st, PhasePoint::from_detection(x), loss, 0).value;
  };
  const double centre = signal(phi);
  const bool at_peak = phi == 0.0;
  // Central difference of the first (or, at the peak, second) derivative.
  auto difference = [&](double h) {
    const double plus = signal(phi + h);
    const double minus = signal(phi - h);
    return at_peak ? (plus - 2.0 * centre + minus) / (h * h) : (plus - minus) / (2.0 * h);
  };

  double h = at_peak ? 2e-2 : 1e-2;
  double coarse = difference(h);
  double previous = 0.0;
  bool have_previous = false;
  double best = 0.0;
  for (int halving = 0; halving < 8; ++halving) {
    h /= 2.0;
    const double fine = difference(h);
    const double extrapolated = (4.0 * fine - coarse) / 3.0;
    if (have_previous && std::abs(extrapolated - previous) <= 1e-9 * std::abs(extrapolated)) {
      best = extrapolated;
      break;
    }
    if (have_previous && std::abs(extrapolated - previous) <= 1e-6 * std::abs(extrapolated)) {
      best = extrapolated;
    }
    previous = extrapolated;
    have_previous = true;
    coarse = fine;
  }
  if (best == 0.0) {
    raise(ErrorKind::numeric_failure, "oracle_sensitivity_fd: derivative did not converge");
  }
  PhaseJet jet;
  jet.value = centre;
  if (at_peak) {
    jet.d2 = best;
  } else {
    jet.d1 = best;
  }
  return sensitivity_from_jet(jet, phi, "oracle_sensitivity_fd");
}

}  // namespace gsp::oracle
