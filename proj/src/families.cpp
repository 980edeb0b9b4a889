#include "roq/families.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "roq/error.hpp"

namespace roq {

namespace {

constexpr double kPi = std::numbers::pi;

// Leading SPA phase coefficient: 3/128 (pi G / c^3)^{-5/3}, so that the phase is
// -pi/4 + coeff * (f Mc)^{-5/3}.
double spa_phase_coefficient(const PhysicalConstants& k) {
  return 3.0 / 128.0 * std::pow(kPi * k.G / (k.c * k.c * k.c), -5.0 / 3.0);
}

ColumnSampler pointwise_sampler(const FunctionFamily& fam, std::span<const double> xs,
                                std::span<const double> ys) {
  std::vector<double> x(xs.begin(), xs.end());
  std::vector<double> y(ys.begin(), ys.end());
  std::vector<double> sqrt_w(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double yk = y.empty() ? 0.0 : y[k];
    const double w = fam.weight(x[k], yk);
    if (!(w > 0.0)) throw DomainError("family " + fam.name + ": nonpositive weight at node");
    sqrt_w[k] = std::sqrt(w);
  }
  auto eval = fam.evaluate;
  return [x = std::move(x), y = std::move(y), sqrt_w = std::move(sqrt_w), eval](
             const Parameter& p, std::span<Complex> out) {
    if (out.size() != x.size()) throw DimensionError("sampler: output length mismatch");
    for (std::size_t k = 0; k < x.size(); ++k) {
      out[k] = sqrt_w[k] * eval(p, x[k], y.empty() ? 0.0 : y[k]);
    }
  };
}

}  // namespace

ColumnSampler FunctionFamily::sampler_for(const QuadratureRule& rule) const {
  return sampler_at(rule.x, rule.y);
}

ColumnSampler FunctionFamily::sampler_at(std::span<const double> xs,
                                         std::span<const double> ys) const {
  if (!ys.empty() && ys.size() != xs.size()) throw DimensionError("sampler: x/y length mismatch");
  if (prepare) return prepare(xs, ys);
  return pointwise_sampler(*this, xs, ys);
}

ComplexVector absorb_weight(const ComplexVector& samples, std::span<const double> weight_at_nodes) {
  if (samples.size() != static_cast<Eigen::Index>(weight_at_nodes.size())) {
    throw DimensionError("absorb_weight: length mismatch");
  }
  ComplexVector out(samples.size());
  for (Eigen::Index k = 0; k < samples.size(); ++k) {
    const double w = weight_at_nodes[k];
    if (!(w > 0.0)) throw DomainError("absorb_weight: weights must be positive");
    out[k] = std::sqrt(w) * samples[k];
  }
  return out;
}

Complex spa_waveform(double chirp_mass_kg, double f_hz, double amplitude,
                     const PhysicalConstants& constants) {
  if (!(f_hz > 0.0)) throw DomainError("spa_waveform: frequency must be positive");
  if (!(chirp_mass_kg > 0.0)) throw DomainError("spa_waveform: chirp mass must be positive");
  const double k = constants.G / (constants.c * constants.c * constants.c);
  const double phase = -kPi / 4.0 + 3.0 / 128.0 * std::pow(kPi * k * f_hz * chirp_mass_kg, -5.0 / 3.0);
  return amplitude * std::pow(f_hz, -7.0 / 6.0) * std::polar(1.0, phase);
}

double chirp_mass(double m1, double m2) {
  if (!(m1 > 0.0) || !(m2 > 0.0)) throw DomainError("chirp_mass: masses must be positive");
  return std::pow(m1 * m2, 3.0 / 5.0) * std::pow(m1 + m2, -1.0 / 5.0);
}

double ligo_psd(double f_hz) {
  if (!(f_hz > 0.0)) throw DomainError("ligo_psd: frequency must be positive");
  const double y = f_hz / 150.0;
  return 9e-46 * (std::pow(4.49 * y, -56.0) + 0.16 * std::pow(y, -4.52) + 0.52 + 0.32 * y * y);
}

std::vector<double> log_training_set(double A, double B, std::size_t K) {
  if (!(A > 0.0) || !(A < B)) throw ArgumentError("log_training_set: require 0 < A < B");
  if (K < 2) throw ArgumentError("log_training_set: need K >= 2");
  std::vector<double> out(K);
  const double ratio = B / A;
  for (std::size_t i = 0; i < K; ++i) {
    out[i] = A * std::pow(ratio, static_cast<double>(i) / static_cast<double>(K - 1));
  }
  out.front() = A;
  out.back() = B;
  return out;
}

double n_cycles(double chirp_mass_kg, double fmin, double fmax, const PhysicalConstants& k) {
  if (!(chirp_mass_kg > 0.0)) throw DomainError("n_cycles: chirp mass must be positive");
  if (!(fmin > 0.0) || fmax < fmin) throw ArgumentError("n_cycles: require 0 < fmin <= fmax");
  const double scale = 1.0 / (32.0 * std::pow(kPi, 8.0 / 3.0)) *
                       std::pow(k.G * chirp_mass_kg / (k.c * k.c * k.c), -5.0 / 3.0);
  return scale * (std::pow(fmin, -5.0 / 3.0) - std::pow(fmax, -5.0 / 3.0));
}

double normalized_legendre(int degree, double x) {
  if (degree < 0) throw ArgumentError("normalized_legendre: negative degree");
  double p0 = 1.0;
  double p1 = x;
  if (degree == 0) {
    p1 = 1.0;
  } else {
    for (int k = 2; k <= degree; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
  }
  return std::sqrt((2.0 * degree + 1.0) / 2.0) * p1;
}

FunctionFamily gw_family(const GwPreset& preset) {
  FunctionFamily fam;
  fam.name = "gw_spa";
  fam.parameter_domain = {{preset.mc_min_kg(), preset.mc_max_kg()}};
  fam.log_uniform = true;
  const PhysicalConstants k = preset.constants;
  fam.evaluate = [k](const Parameter& p, double f, double) { return spa_waveform(p.at(0), f, 1.0, k); };
  fam.weight = [](double f, double) { return 1.0 / ligo_psd(f); };
  fam.prepare = [k](std::span<const double> xs, std::span<const double>) -> ColumnSampler {
    const std::size_t M = xs.size();
    std::vector<double> amplitude(M);
    std::vector<double> phase_factor(M);
    for (std::size_t i = 0; i < M; ++i) {
      const double f = xs[i];
      amplitude[i] = std::pow(f, -7.0 / 6.0) / std::sqrt(ligo_psd(f));
      phase_factor[i] = std::pow(f, -5.0 / 3.0);
    }
    const double coeff = spa_phase_coefficient(k);
    return [amplitude = std::move(amplitude), phase_factor = std::move(phase_factor), coeff](
               const Parameter& p, std::span<Complex> out) {
      if (out.size() != amplitude.size()) throw DimensionError("gw sampler: length mismatch");
      const double mc = p.at(0);
      if (!(mc > 0.0)) throw DomainError("gw sampler: chirp mass must be positive");
      const double s = coeff * std::pow(mc, -5.0 / 3.0);
      for (std::size_t i = 0; i < amplitude.size(); ++i) {
        out[i] = std::polar(amplitude[i], -kPi / 4.0 + s * phase_factor[i]);
      }
    };
  };
  return fam;
}

FunctionFamily analytic_family(const std::string& name) {
  FunctionFamily fam;
  fam.name = name;
  fam.weight = [](double, double) { return 1.0; };
  if (name == "legendre") {
    fam.parameter_domain = {{0.0, 1e9}};
    fam.evaluate = [](const Parameter& p, double x, double) {
      return Complex{normalized_legendre(static_cast<int>(std::lround(p.at(0))), x), 0.0};
    };
  } else if (name == "runge") {
    fam.evaluate = [](const Parameter&, double x, double) { return Complex{1.0 / (1.0 + x * x), 0.0}; };
  } else if (name == "inv_dist_1d") {
    fam.parameter_domain = {{-0.1, 0.1}};
    fam.evaluate = [](const Parameter& p, double x, double) {
      const double dx = x - p.at(0);
      return Complex{1.0 / std::sqrt(dx * dx + 0.01), 0.0};
    };
  } else if (name == "inv_dist_2d") {
    fam.parameter_domain = {{-0.1, 0.1}, {-0.1, 0.1}};
    fam.evaluate = [](const Parameter& p, double x, double y) {
      const double dx = x - p.at(0);
      const double dy = y - p.at(1);
      return Complex{1.0 / std::sqrt(dx * dx + dy * dy + 0.01), 0.0};
    };
  } else {
    throw ArgumentError("analytic_family: unknown family '" + name + "'");
  }
  return fam;
}

SampledFunctionSet sample_family(const FunctionFamily& family,
                                 const std::vector<Parameter>& parameters,
                                 const QuadratureRule& rule, bool normalize) {
  SampledFunctionSet set;
  set.rule = rule;
  set.family = family.name;
  set.parameters = parameters;
  set.normalized = normalize;
  set.samples.resize(static_cast<Eigen::Index>(rule.size()),
                     static_cast<Eigen::Index>(parameters.size()));
  set.original_norms.resize(parameters.size());
  const ColumnSampler sampler = family.sampler_for(rule);
  for (std::size_t j = 0; j < parameters.size(); ++j) {
    auto col = set.samples.col(static_cast<Eigen::Index>(j));
    sampler(parameters[j], std::span<Complex>(col.data(), static_cast<std::size_t>(col.size())));
    const double nrm = discrete_norm(col, rule.weights);
    set.original_norms[j] = nrm;
    if (normalize) {
      if (!(nrm > 0.0)) {
        throw DegenerateError("sample_family: zero-norm function at parameter index " +
                              std::to_string(j));
      }
      col /= nrm;
    }
  }
  return set;
}

void write_samples_csv(std::ostream& out, const SampledFunctionSet& set) {
  const auto old = out.precision(17);
  out << "node_index,param_index,re,im\n";
  for (Eigen::Index j = 0; j < set.samples.cols(); ++j) {
    for (Eigen::Index k = 0; k < set.samples.rows(); ++k) {
      const Complex v = set.samples(k, j);
      out << k << ',' << j << ',' << v.real() << ',' << v.imag() << '\n';
    }
  }
  out.precision(old);
}

}  // namespace roq
