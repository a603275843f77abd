#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ucband {

// ---------------------------------------------------------------------------
// Convolution kernels: K_l(y,x) = 2^{ld} prod_m K(2^l (y_m - x_m)).
// ---------------------------------------------------------------------------

enum class ConvolutionBase {
  epanechnikov,  // 0.75 (1 - s^2) on [-1, 1], order 2
  poly4,         // 9/8 - 15/8 s^2 on [-1, 1], order 4
};

struct ConvolutionSpec {
  ConvolutionBase base = ConvolutionBase::epanechnikov;
  /// Declared vanishing-moment order r >= 2.
  int order = 2;
};

/// The univariate base kernel K(s).
double convolution_base_value(ConvolutionBase base, double s) noexcept;
/// Half-width s_K of the support [-s_K, s_K].
double convolution_support(ConvolutionBase base) noexcept;
/// The order the built-in kernel actually has.
int natural_order(ConvolutionBase base) noexcept;

struct MomentReport {
  /// m_j = \int s^j K(s) ds for j = 0..order-1.
  std::vector<double> moments;
  /// |m_0 - 1| followed by |m_j| for j >= 1.
  std::vector<double> deviations;
  double tolerance = 1e-8;
  bool pass = false;
};

/// Gauss-Legendre moment check of a convolution kernel against its declared order.
MomentReport verify_moments(const ConvolutionSpec& spec, int quadrature_points,
                            double tolerance = 1e-8);

// ---------------------------------------------------------------------------
// Wavelet projection kernels.
// ---------------------------------------------------------------------------

enum class WaveletName { haar, daub4 };

struct WaveletSpec {
  WaveletName father = WaveletName::haar;
  /// Depth J of the dyadic evaluation table (ignored for Haar).
  int dyadic_resolution = 12;
};

/// Father wavelet phi supported on [0, N]. Haar is closed form; Daubechies-4
/// is tabulated at k / 2^J by cascade refinement and linearly interpolated.
class ScalingFunction {
 public:
  explicit ScalingFunction(const WaveletSpec& spec);

  double operator()(double x) const noexcept;
  int support_length() const noexcept { return support_; }
  WaveletName name() const noexcept { return name_; }

  /// Dyadic table phi(k / 2^J), k = 0..N 2^J. Empty for Haar.
  std::span<const double> table() const noexcept { return table_; }
  int resolution() const noexcept { return resolution_; }

 private:
  WaveletName name_;
  int support_ = 1;
  int resolution_ = 0;
  double scale_ = 1.0;  // 2^J
  std::vector<double> table_;
};

/// max_k |\int phi(x) phi(x-k) dx - delta_{0k}|, using the dyadic table
/// (exact indicator integrals for Haar).
double wavelet_orthonormality_error(const WaveletSpec& spec);

// ---------------------------------------------------------------------------
// Orthonormal series kernels: K_l(y,x) = sum_{j=1}^{floor(2^{ld})} phi_j(y) phi_j(x).
// ---------------------------------------------------------------------------

enum class SeriesBasis { fourier_cosine, legendre };

struct SeriesSpec {
  SeriesBasis basis = SeriesBasis::legendre;
  /// Hyper-rectangle domain, one entry per dimension. Empty means [-1, 1]^d.
  std::vector<double> lower;
  std::vector<double> upper;
  /// Use tensor products for d > 1 (the only supported construction).
  bool tensorize = true;
};

/// Largest univariate basis index supported.
inline constexpr int kMaxBasisIndex = 4096;

/// phi_j(x) for a univariate basis on [lower, upper], j >= 1.
double basis_eval_1d(SeriesBasis basis, int j, double x, double lower = -1.0,
                     double upper = 1.0);

/// j-th tensor basis function on spec's domain; multi-indices are taken in
/// graded order (max component, then lexicographic). For d = 1 this is the
/// univariate basis.
double basis_eval(const SeriesSpec& spec, int j, std::span<const double> x);

/// Multi-indices (1-based) of the first `count` tensor basis functions in d dims.
std::vector<std::vector<int>> graded_multi_indices(int d, std::size_t count);

/// max_{j,k <= terms} |\int phi_j phi_k - delta_jk| on [-1, 1] (univariate).
double series_orthonormality_error(SeriesBasis basis, int terms, int quadrature_points);

// ---------------------------------------------------------------------------
// Kernel family.
// ---------------------------------------------------------------------------

enum class KernelVariant { convolution, wavelet, series };

class KernelFamily {
 public:
  static KernelFamily convolution(ConvolutionSpec spec, int dimension);
  static KernelFamily wavelet(WaveletSpec spec, int dimension);
  static KernelFamily series(SeriesSpec spec, int dimension);

  /// "epanechnikov" | "poly4" | "haar" | "daub4" | "fourier" | "legendre".
  /// `series_lower`/`series_upper` give the series domain (per dimension or a
  /// single value broadcast); empty means [-1, 1].
  static KernelFamily from_name(std::string_view name, int dimension,
                                std::vector<double> series_lower = {},
                                std::vector<double> series_upper = {},
                                int dyadic_resolution = 12);

  KernelVariant variant() const noexcept { return variant_; }
  int dimension() const noexcept { return dimension_; }
  const std::string& id() const noexcept { return id_; }
  bool integer_levels() const noexcept { return variant_ == KernelVariant::wavelet; }

  const ConvolutionSpec& convolution_spec() const;
  const WaveletSpec& wavelet_spec() const;
  const SeriesSpec& series_spec() const;

  /// Throws ParameterError when l is not a valid resolution for this family.
  void check_level(double l) const;
  /// Throws DomainError when a series kernel gets a point outside its domain.
  void check_point(std::span<const double> p) const;

  /// Per-coordinate radius outside which K_l(., x) vanishes (infinity for series).
  double reach(double l) const noexcept;

  /// K_l(y, x).
  double eval(double l, std::span<const double> y, std::span<const double> x) const;

  /// out[i] = K_l(points_i, x) for row-major `points` (count x d).
  void eval_column(double l, std::span<const double> points, std::span<const double> x,
                   std::span<double> out) const;

 private:
  KernelFamily() = default;

  double eval_unchecked(double l, std::span<const double> y,
                        std::span<const double> x) const;
  double wavelet_1d(double scale, double y, double x) const;
  void series_values(std::span<const double> p, int per_dim, std::span<double> out) const;
  std::size_t series_terms(double l) const;

  KernelVariant variant_ = KernelVariant::convolution;
  int dimension_ = 1;
  std::string id_;
  ConvolutionSpec conv_{};
  WaveletSpec wave_{};
  SeriesSpec series_{};
  std::shared_ptr<const ScalingFunction> phi_;
};

inline double eval_kernel(const KernelFamily& family, double l, std::span<const double> y,
                          std::span<const double> x) {
  return family.eval(l, y, x);
}

}  // namespace ucband
