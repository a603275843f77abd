#include "ucband/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ucband/error.hpp"
#include "ucband/quadrature.hpp"

namespace ucband {

// ---------------------------------------------------------------------------
// Convolution
// ---------------------------------------------------------------------------

double convolution_base_value(ConvolutionBase base, double s) noexcept {
  if (!(std::abs(s) <= 1.0)) return 0.0;
  switch (base) {
    case ConvolutionBase::epanechnikov:
      return 0.75 * (1.0 - s * s);
    case ConvolutionBase::poly4:
      // Projection of the point mass at 0 onto polynomials of degree < 4
      // in the normalised Legendre basis on [-1, 1].
      return 1.125 - 1.875 * s * s;
  }
  return 0.0;
}

double convolution_support(ConvolutionBase) noexcept { return 1.0; }

int natural_order(ConvolutionBase base) noexcept {
  return base == ConvolutionBase::poly4 ? 4 : 2;
}

MomentReport verify_moments(const ConvolutionSpec& spec, int quadrature_points,
                            double tolerance) {
  if (quadrature_points < 64)
    throw ParameterError("verify_moments: quadrature_points must be >= 64");
  if (spec.order < 2) throw ParameterError("verify_moments: order must be >= 2");

  const QuadratureRule rule = gauss_legendre(quadrature_points);
  const double half = convolution_support(spec.base);

  MomentReport report;
  report.tolerance = tolerance;
  report.moments.assign(spec.order, 0.0);
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double s = half * rule.nodes[k];
    const double wk = half * rule.weights[k] * convolution_base_value(spec.base, s);
    double power = 1.0;
    for (int j = 0; j < spec.order; ++j) {
      report.moments[j] += wk * power;
      power *= s;
    }
  }
  report.pass = true;
  for (int j = 0; j < spec.order; ++j) {
    const double dev = std::abs(j == 0 ? report.moments[j] - 1.0 : report.moments[j]);
    report.deviations.push_back(dev);
    if (!(dev <= tolerance)) report.pass = false;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Wavelets
// ---------------------------------------------------------------------------

ScalingFunction::ScalingFunction(const WaveletSpec& spec) : name_(spec.father) {
  if (name_ == WaveletName::haar) {
    support_ = 1;
    return;
  }
  if (spec.dyadic_resolution < 10 || spec.dyadic_resolution > 20)
    throw ParameterError("wavelet dyadic_resolution must lie in [10, 20]");

  support_ = 3;
  resolution_ = spec.dyadic_resolution;
  const long long per_unit = 1LL << resolution_;
  scale_ = static_cast<double>(per_unit);
  table_.assign(static_cast<std::size_t>(support_ * per_unit + 1), 0.0);

  const double r3 = std::sqrt(3.0);
  const double h[4] = {(1 + r3) / 4, (3 + r3) / 4, (3 - r3) / 4, (1 - r3) / 4};  // sqrt(2) h_k

  // Integer values solve phi = M phi with phi(0) = phi(3) = 0, sum = 1.
  table_[per_unit] = (1 + r3) / 2;
  table_[2 * per_unit] = (1 - r3) / 2;

  // Cascade: phi(x) = sum_k sqrt(2) h_k phi(2x - k).
  const long long last = static_cast<long long>(table_.size()) - 1;
  for (int j = 1; j <= resolution_; ++j) {
    const long long step = per_unit >> j;
    for (long long m = step; m < last; m += 2 * step) {
      double v = 0.0;
      for (int k = 0; k < 4; ++k) {
        const long long idx = 2 * m - k * per_unit;
        if (idx > 0 && idx < last) v += h[k] * table_[idx];
      }
      table_[m] = v;
    }
  }
}

double ScalingFunction::operator()(double x) const noexcept {
  if (name_ == WaveletName::haar) return (x >= 0.0 && x < 1.0) ? 1.0 : 0.0;
  if (!(x > 0.0 && x < support_)) return 0.0;
  const double t = x * scale_;
  const auto i = static_cast<std::size_t>(t);
  const double frac = t - static_cast<double>(i);
  if (i + 1 >= table_.size()) return table_.back();
  return table_[i] + frac * (table_[i + 1] - table_[i]);
}

double wavelet_orthonormality_error(const WaveletSpec& spec) {
  const ScalingFunction phi(spec);
  if (phi.name() == WaveletName::haar) return 0.0;  // disjoint unit indicators

  // Exact integral of the product of the two piecewise-linear interpolants.
  const auto table = phi.table();
  const long long per_unit = 1LL << phi.resolution();
  const double h = 1.0 / static_cast<double>(per_unit);
  const long long len = static_cast<long long>(table.size());
  auto at = [&](long long m) { return (m >= 0 && m < len) ? table[m] : 0.0; };

  double worst = 0.0;
  for (int k = 0; k < phi.support_length(); ++k) {
    const long long shift = k * per_unit;
    double sum = 0.0;
    for (long long m = 0; m + 1 < len; ++m) {
      const double a0 = at(m), a1 = at(m + 1);
      const double b0 = at(m - shift), b1 = at(m + 1 - shift);
      sum += (a0 * b0 + a1 * b1) / 3.0 + (a0 * b1 + a1 * b0) / 6.0;
    }
    sum *= h;
    worst = std::max(worst, std::abs(sum - (k == 0 ? 1.0 : 0.0)));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Series bases
// ---------------------------------------------------------------------------

namespace {

double to_unit(double x, double lower, double upper) {
  const double u = 2.0 * (x - lower) / (upper - lower) - 1.0;
  return std::clamp(u, -1.0, 1.0);
}

void check_domain(double x, double lower, double upper) {
  if (!(x >= lower && x <= upper))
    throw DomainError("point " + std::to_string(x) + " outside series domain [" +
                      std::to_string(lower) + ", " + std::to_string(upper) + "]");
}

// phi_1..phi_count at u in [-1, 1] (unit-interval normalisation).
void unit_basis_values(SeriesBasis basis, double u, int count, double* out) {
  if (basis == SeriesBasis::fourier_cosine) {
    out[0] = std::numbers::sqrt2 / 2.0;
    for (int j = 1; j < count; ++j) out[j] = std::cos(std::numbers::pi * j * u);
    return;
  }
  double p0 = 1.0, p1 = u;
  for (int j = 0; j < count; ++j) {
    double pj;
    if (j == 0) {
      pj = p0;
    } else if (j == 1) {
      pj = p1;
    } else {
      const double p2 = ((2.0 * j - 1.0) * u * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
      pj = p2;
    }
    out[j] = std::sqrt((2.0 * j + 1.0) / 2.0) * pj;
  }
}

}  // namespace

double basis_eval_1d(SeriesBasis basis, int j, double x, double lower, double upper) {
  if (j < 1 || j > kMaxBasisIndex)
    throw ParameterError("basis index " + std::to_string(j) + " outside [1, " +
                         std::to_string(kMaxBasisIndex) + "]");
  if (!(upper > lower)) throw ParameterError("series domain must have upper > lower");
  check_domain(x, lower, upper);
  const double u = to_unit(x, lower, upper);
  const double norm = std::sqrt(2.0 / (upper - lower));
  if (basis == SeriesBasis::fourier_cosine) {
    if (j == 1) return norm * std::numbers::sqrt2 / 2.0;
    return norm * std::cos(std::numbers::pi * (j - 1) * u);
  }
  return norm * std::sqrt((2.0 * j - 1.0) / 2.0) *
         std::legendre(static_cast<unsigned>(j - 1), u);
}

std::vector<std::vector<int>> graded_multi_indices(int d, std::size_t count) {
  std::vector<std::vector<int>> out;
  out.reserve(count);
  for (int g = 1; out.size() < count; ++g) {
    if (g > kMaxBasisIndex) throw ParameterError("too many tensor basis terms");
    std::vector<int> idx(d, 1);
    for (;;) {
      if (*std::max_element(idx.begin(), idx.end()) == g) {
        out.push_back(idx);
        if (out.size() == count) return out;
      }
      int m = d - 1;
      while (m >= 0 && idx[m] == g) idx[m--] = 1;
      if (m < 0) break;
      ++idx[m];
    }
  }
  return out;
}

double basis_eval(const SeriesSpec& spec, int j, std::span<const double> x) {
  const int d = static_cast<int>(x.size());
  if (d < 1) throw ParameterError("basis_eval: empty point");
  if (j < 1) throw ParameterError("basis index must be >= 1");
  auto bound = [&](const std::vector<double>& v, std::size_t m, double dflt) {
    if (v.empty()) return dflt;
    return v.size() == 1 ? v[0] : v.at(m);
  };
  if (d == 1) return basis_eval_1d(spec.basis, j, x[0], bound(spec.lower, 0, -1.0),
                                   bound(spec.upper, 0, 1.0));
  const auto multi = graded_multi_indices(d, static_cast<std::size_t>(j));
  double v = 1.0;
  for (int m = 0; m < d; ++m)
    v *= basis_eval_1d(spec.basis, multi.back()[m], x[m], bound(spec.lower, m, -1.0),
                       bound(spec.upper, m, 1.0));
  return v;
}

double series_orthonormality_error(SeriesBasis basis, int terms, int quadrature_points) {
  if (terms < 1 || terms > kMaxBasisIndex) throw ParameterError("terms out of range");
  const QuadratureRule rule = gauss_legendre(quadrature_points);
  const std::size_t q = rule.nodes.size();
  std::vector<double> values(q * terms);
  for (std::size_t k = 0; k < q; ++k)
    for (int j = 1; j <= terms; ++j)
      values[k * terms + (j - 1)] = basis_eval_1d(basis, j, rule.nodes[k]);

  double worst = 0.0;
  for (int a = 0; a < terms; ++a) {
    for (int b = a; b < terms; ++b) {
      double s = 0.0;
      for (std::size_t k = 0; k < q; ++k)
        s += rule.weights[k] * values[k * terms + a] * values[k * terms + b];
      worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// KernelFamily
// ---------------------------------------------------------------------------

KernelFamily KernelFamily::convolution(ConvolutionSpec spec, int dimension) {
  if (dimension < 1) throw ParameterError("dimension must be >= 1");
  if (spec.order < 2) throw ParameterError("convolution kernel order must be >= 2");
  KernelFamily k;
  k.variant_ = KernelVariant::convolution;
  k.dimension_ = dimension;
  k.conv_ = spec;
  k.id_ = spec.base == ConvolutionBase::epanechnikov ? "epanechnikov" : "poly4";
  return k;
}

KernelFamily KernelFamily::wavelet(WaveletSpec spec, int dimension) {
  if (dimension < 1) throw ParameterError("dimension must be >= 1");
  KernelFamily k;
  k.variant_ = KernelVariant::wavelet;
  k.dimension_ = dimension;
  k.wave_ = spec;
  k.phi_ = std::make_shared<const ScalingFunction>(spec);
  k.id_ = spec.father == WaveletName::haar ? "haar" : "daub4";
  return k;
}

KernelFamily KernelFamily::series(SeriesSpec spec, int dimension) {
  if (dimension < 1) throw ParameterError("dimension must be >= 1");
  if (!spec.tensorize && dimension > 1)
    throw ParameterError("series kernels in d > 1 require tensorize = true");
  auto expand = [&](std::vector<double>& v, double dflt, const char* what) {
    if (v.empty()) v.assign(dimension, dflt);
    else if (v.size() == 1) v.assign(dimension, v[0]);
    else if (static_cast<int>(v.size()) != dimension)
      throw ParameterError(std::string("series domain ") + what +
                           " bound has wrong dimension");
  };
  expand(spec.lower, -1.0, "lower");
  expand(spec.upper, 1.0, "upper");
  for (int m = 0; m < dimension; ++m)
    if (!(spec.upper[m] > spec.lower[m]))
      throw ParameterError("series domain must have upper > lower");

  KernelFamily k;
  k.variant_ = KernelVariant::series;
  k.dimension_ = dimension;
  k.series_ = std::move(spec);
  k.id_ = k.series_.basis == SeriesBasis::fourier_cosine ? "fourier" : "legendre";
  return k;
}

KernelFamily KernelFamily::from_name(std::string_view name, int dimension,
                                     std::vector<double> series_lower,
                                     std::vector<double> series_upper,
                                     int dyadic_resolution) {
  if (name == "epanechnikov")
    return convolution({ConvolutionBase::epanechnikov, 2}, dimension);
  if (name == "poly4") return convolution({ConvolutionBase::poly4, 4}, dimension);
  if (name == "haar") return wavelet({WaveletName::haar, dyadic_resolution}, dimension);
  if (name == "daub4") return wavelet({WaveletName::daub4, dyadic_resolution}, dimension);
  if (name == "fourier" || name == "legendre") {
    SeriesSpec spec;
    spec.basis = name == "fourier" ? SeriesBasis::fourier_cosine : SeriesBasis::legendre;
    spec.lower = std::move(series_lower);
    spec.upper = std::move(series_upper);
    return series(std::move(spec), dimension);
  }
  throw ParameterError("unknown kernel '" + std::string(name) + "'");
}

const ConvolutionSpec& KernelFamily::convolution_spec() const {
  if (variant_ != KernelVariant::convolution) throw ParameterError("not a convolution kernel");
  return conv_;
}
const WaveletSpec& KernelFamily::wavelet_spec() const {
  if (variant_ != KernelVariant::wavelet) throw ParameterError("not a wavelet kernel");
  return wave_;
}
const SeriesSpec& KernelFamily::series_spec() const {
  if (variant_ != KernelVariant::series) throw ParameterError("not a series kernel");
  return series_;
}

std::size_t KernelFamily::series_terms(double l) const {
  // floor(2^{ld}); the relative nudge keeps l = log2(k) from rounding down.
  const double raw = std::exp2(l * dimension_);
  return static_cast<std::size_t>(std::floor(raw * (1.0 + 1e-12)));
}

void KernelFamily::check_level(double l) const {
  if (!std::isfinite(l)) throw ParameterError("resolution level must be finite");
  switch (variant_) {
    case KernelVariant::convolution:
      return;
    case KernelVariant::wavelet:
      if (l < 0.0 || l != std::floor(l))
        throw ParameterError("wavelet resolution level must be a nonnegative integer, got " +
                             std::to_string(l));
      if (l > 30.0) throw ParameterError("wavelet resolution level too large");
      return;
    case KernelVariant::series: {
      if (l > 40.0) throw ParameterError("series resolution level too large");
      const std::size_t terms = series_terms(l);
      if (terms < 1)
        throw ParameterError("series kernel needs floor(2^{ld}) >= 1, got l = " +
                             std::to_string(l));
      const double per_dim = std::ceil(std::pow(static_cast<double>(terms), 1.0 / dimension_) - 1e-9);
      if (per_dim > kMaxBasisIndex) throw ParameterError("series kernel has too many terms");
      return;
    }
  }
}

void KernelFamily::check_point(std::span<const double> p) const {
  if (static_cast<int>(p.size()) != dimension_)
    throw ParameterError("point dimension does not match kernel dimension");
  if (variant_ != KernelVariant::series) return;
  for (int m = 0; m < dimension_; ++m) check_domain(p[m], series_.lower[m], series_.upper[m]);
}

double KernelFamily::reach(double l) const noexcept {
  switch (variant_) {
    case KernelVariant::convolution: return convolution_support(conv_.base) / std::exp2(l);
    case KernelVariant::wavelet: return phi_->support_length() / std::exp2(l);
    case KernelVariant::series: return std::numeric_limits<double>::infinity();
  }
  return std::numeric_limits<double>::infinity();
}

double KernelFamily::wavelet_1d(double scale, double y, double x) const {
  const ScalingFunction& phi = *phi_;
  const double uy = scale * y, ux = scale * x;
  const double fy = std::floor(uy), fx = std::floor(ux);
  const double k_hi = std::min(fy, fx);
  const double k_lo = std::max(fy, fx) - phi.support_length() + 1;
  double s = 0.0;
  for (double k = k_lo; k <= k_hi; k += 1.0) s += phi(uy - k) * phi(ux - k);
  return scale * s;
}

void KernelFamily::series_values(std::span<const double> p, int per_dim,
                                 std::span<double> out) const {
  for (int m = 0; m < dimension_; ++m) {
    const double lo = series_.lower[m], hi = series_.upper[m];
    unit_basis_values(series_.basis, to_unit(p[m], lo, hi), per_dim, out.data() + m * per_dim);
    const double norm = std::sqrt(2.0 / (hi - lo));
    for (int j = 0; j < per_dim; ++j) out[m * per_dim + j] *= norm;
  }
}

double KernelFamily::eval_unchecked(double l, std::span<const double> y,
                                    std::span<const double> x) const {
  switch (variant_) {
    case KernelVariant::convolution: {
      const double scale = std::exp2(l);
      double v = 1.0;
      for (int m = 0; m < dimension_; ++m)
        v *= scale * convolution_base_value(conv_.base, scale * (y[m] - x[m]));
      return v;
    }
    case KernelVariant::wavelet: {
      const double scale = std::exp2(l);
      double v = 1.0;
      for (int m = 0; m < dimension_; ++m) v *= wavelet_1d(scale, y[m], x[m]);
      return v;
    }
    case KernelVariant::series: {
      const std::size_t terms = series_terms(l);
      if (dimension_ == 1) {
        std::vector<double> py(terms), px(terms);
        series_values(y, static_cast<int>(terms), py);
        series_values(x, static_cast<int>(terms), px);
        double s = 0.0;
        for (std::size_t j = 0; j < terms; ++j) s += py[j] * px[j];
        return s;
      }
      const auto multi = graded_multi_indices(dimension_, terms);
      int per_dim = 0;
      for (const auto& idx : multi) per_dim = std::max(per_dim, *std::max_element(idx.begin(), idx.end()));
      std::vector<double> py(per_dim * dimension_), px(per_dim * dimension_);
      series_values(y, per_dim, py);
      series_values(x, per_dim, px);
      double s = 0.0;
      for (const auto& idx : multi) {
        double t = 1.0;
        for (int m = 0; m < dimension_; ++m)
          t *= py[m * per_dim + idx[m] - 1] * px[m * per_dim + idx[m] - 1];
        s += t;
      }
      return s;
    }
  }
  return 0.0;
}

double KernelFamily::eval(double l, std::span<const double> y,
                          std::span<const double> x) const {
  check_level(l);
  check_point(y);
  check_point(x);
  return eval_unchecked(l, y, x);
}

void KernelFamily::eval_column(double l, std::span<const double> points,
                               std::span<const double> x, std::span<double> out) const {
  check_level(l);
  check_point(x);
  const std::size_t d = static_cast<std::size_t>(dimension_);
  if (points.size() != out.size() * d)
    throw ParameterError("eval_column: points/out size mismatch");
  const std::size_t count = out.size();

  if (variant_ == KernelVariant::convolution && d == 1) {
    const double scale = std::exp2(l);
    for (std::size_t i = 0; i < count; ++i)
      out[i] = scale * convolution_base_value(conv_.base, scale * (points[i] - x[0]));
    return;
  }
  if (variant_ != KernelVariant::series) {
    for (std::size_t i = 0; i < count; ++i)
      out[i] = eval_unchecked(l, points.subspan(i * d, d), x);
    return;
  }

  // Series: tabulate the basis at x once.
  for (std::size_t i = 0; i < count; ++i) check_point(points.subspan(i * d, d));
  const std::size_t terms = series_terms(l);
  std::vector<std::vector<int>> multi;
  int per_dim = static_cast<int>(terms);
  if (d > 1) {
    multi = graded_multi_indices(dimension_, terms);
    per_dim = 0;
    for (const auto& idx : multi) per_dim = std::max(per_dim, *std::max_element(idx.begin(), idx.end()));
  }
  std::vector<double> px(per_dim * d), py(per_dim * d);
  series_values(x, per_dim, px);
  for (std::size_t i = 0; i < count; ++i) {
    series_values(points.subspan(i * d, d), per_dim, py);
    double s = 0.0;
    if (d == 1) {
      for (std::size_t j = 0; j < terms; ++j) s += py[j] * px[j];
    } else {
      for (const auto& idx : multi) {
        double t = 1.0;
        for (std::size_t m = 0; m < d; ++m)
          t *= py[m * per_dim + idx[m] - 1] * px[m * per_dim + idx[m] - 1];
        s += t;
      }
    }
    out[i] = s;
  }
}

}  // namespace ucband
