#pragma once

#include <string>
#include <vector>

#include "arteria/grid.hpp"
#include "arteria/multipliers.hpp"

namespace arteria {

enum class RhsKind { general, mollified, bbm_local };

/// Which form of the evolution equation to evaluate.
struct RhsVariant {
  RhsKind kind = RhsKind::general;
  double mollify_eps = 0.0;  ///< used by RhsKind::mollified only

  static RhsVariant general() { return {}; }
  static RhsVariant mollified(double eps) { return {RhsKind::mollified, eps}; }
  static RhsVariant bbm_local() { return {RhsKind::bbm_local, 0.0}; }

  /// bbm_local needs nu == 0, mollified needs eps > 0.
  void validate(const ModelParams& params) const;
  std::string name() const;
};

RhsKind parse_rhs_kind(const std::string& text);

struct RhsOptions {
  bool dealias = true;
  double dealias_fraction = 2.0 / 3.0;
};

/// Evaluates f_t for one model variant on a fixed grid.
///
/// Linear terms act on the full spectrum. Quadratic terms are formed as
/// pointwise products of spectrally differentiated fields; with dealiasing on,
/// the factors are truncated to the 2/3 band and the products truncated again
/// after the forward transform. The mean mode of the result is always zero.
///
/// Holds scratch buffers, so one instance must not be shared between threads.
class ModelRhs {
 public:
  ModelRhs(const ModelParams& params, const GridSpec& grid, RhsVariant variant,
           RhsOptions options = {});
  ModelRhs(MultiplierTable table, RhsVariant variant, RhsOptions options = {});

  /// Throws NonFiniteError when a product or the result is not finite.
  void evaluate(const SpectralField& f, SpectralField& out) const;
  SpectralField operator()(const SpectralField& f) const;

  const ModelParams& params() const { return params_; }
  const MultiplierTable& table() const { return table_; }
  const RhsVariant& variant() const { return variant_; }
  const RhsOptions& options() const { return options_; }

  /// Multiplier of the linear part on each half-spectrum wavenumber: the rhs
  /// of a field with vanishing quadratic terms is linear_symbol()[k] * fhat(k).
  /// The Nyquist entry is real, as the rhs keeps that mode real.
  const std::vector<Complex>& linear_symbol() const { return linear_; }

 private:
  void quadratic_terms(const SpectralField& f) const;
  void general_form(const SpectralField& f, SpectralField& out) const;
  void bbm_form(const SpectralField& f, SpectralField& out) const;

  ModelParams params_;
  MultiplierTable table_;
  RhsVariant variant_;
  RhsOptions options_;
  int cutoff_;
  bool viscous_products_;
  std::vector<double> mollifier_;
  std::vector<Complex> linear_;

  // Scratch: physical fields g, g_x, g_xx, g_xxx and spectral products
  // f f_x, f_x f_xx, f f_xxx.
  mutable std::vector<Complex> spec_scratch_;
  mutable std::vector<double> g_, gx_, gxx_, gxxx_, prod_;
  mutable std::vector<Complex> q_ffx_, q_fxfxx_, q_ffxxx_;
};

SpectralField rhs_general(const ModelParams& params, const MultiplierTable& table,
                          const SpectralField& f, const RhsOptions& options = {});
SpectralField rhs_mollified(const ModelParams& params, const MultiplierTable& table,
                            const SpectralField& f, double mollify_eps,
                            const RhsOptions& options = {});
SpectralField rhs_bbm_local(const ModelParams& params, const MultiplierTable& table,
                            const SpectralField& f, const RhsOptions& options = {});

}  // namespace arteria
