#include "arteria/diagnostics.hpp"

#include <cmath>
#include <numbers>

#include "arteria/errors.hpp"

namespace arteria {

LipschitzValue lipschitz_diag(const SpectralField& f) {
  if (!f.is_finite()) throw NonFiniteError("lipschitz_diag: field is not finite");
  const double lip = max_abs_physical(differentiate(f, 1));
  return {lip, lip > 0.0 ? 1.0 / lip : kInvLipSentinel};
}

double accumulate_integral(double prev_I, double prev_lip, double prev_t, double lip, double t) {
  if (t < prev_t) throw ConfigError("accumulate_integral: time went backwards");
  return prev_I + (t - prev_t) * 0.5 * (lip + prev_lip);
}

DiagnosticsRow energies(const SpectralField& f, const MultiplierTable& table,
                        const ModelParams& params) {
  if (!(f.grid() == table.grid)) throw ShapeError("energies: table and field grids differ");
  const int n = f.grid().size();
  double l2 = 0.0, hs = 0.0, d1 = 0.0, d2 = 0.0;
  for (int k = 0; k <= f.grid().max_wavenumber(); ++k) {
    const auto idx = static_cast<std::size_t>(k);
    const double w = mode_weight(k, n);
    const double c2 = std::norm(f[k]);
    const double k2 = static_cast<double>(k) * k;
    const double ls = table.lambda_s[idx];
    l2 += w * c2;
    hs += w * ls * ls * c2;
    // The collocated first derivative has no Nyquist component.
    if (2 * k != n) d1 += w * k2 * c2;
    d2 += w * k2 * k2 * c2;
  }
  const double two_pi = 2.0 * std::numbers::pi;
  l2 *= two_pi;
  hs *= two_pi;
  d1 *= two_pi;
  d2 *= two_pi;
  const double weight = 4.0 / (params.kappa * params.kappa);
  DiagnosticsRow row;
  row.mean = f.mean();
  row.l2 = std::sqrt(l2);
  row.hs_energy = l2 + hs;
  row.d1 = d1;
  row.d2 = d2;
  row.e1 = l2 + weight * d1;
  row.e2 = d1 + weight * d2;
  return row;
}

DiagnosticsRow DiagnosticsTracker::observe(double t, const SpectralField& f) {
  const auto lv = lipschitz_diag(f);
  if (started_) {
    integral_ = accumulate_integral(integral_, prev_lip_, prev_t_, lv.lip, t);
  }
  started_ = true;
  prev_t_ = t;
  prev_lip_ = lv.lip;
  DiagnosticsRow row = energies(f, table_, table_.params);
  row.t = t;
  row.lip = lv.lip;
  row.inv_lip = lv.inv_lip;
  row.cum_integral = integral_;
  return row;
}

}  // namespace arteria
