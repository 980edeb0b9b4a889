#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "roq/numerics.hpp"
#include "roq/quadrature.hpp"

namespace roq {

/// A point in parameter space (one entry per parameter dimension).
using Parameter = std::vector<double>;

/// Physical constants used by the gravitational-wave family, MKS units.
struct PhysicalConstants {
  double G = 6.67384e-11;       // m^3 kg^-1 s^-2
  double c = 299792458.0;       // m s^-1
  double solar_mass = 1.98892e30;  // kg
};

/// Fills `out` with the family sampled at a fixed set of nodes for one parameter.
using ColumnSampler = std::function<void(const Parameter&, std::span<Complex> out)>;

/// A parameterized family h_mu(x) with inner-product weight W(x).
///
/// `prepare` binds the family to a rule once (precomputing node-only factors)
/// and returns a sampler that writes W^{1/2} h_mu at every node. Families
/// built by the helpers below keep `evaluate` and `weight` consistent with it.
struct FunctionFamily {
  std::string name;
  std::vector<Interval> parameter_domain;
  std::function<Complex(const Parameter&, double x, double y)> evaluate;
  std::function<double(double x, double y)> weight;
  std::function<ColumnSampler(std::span<const double> xs, std::span<const double> ys)> prepare;
  bool log_uniform = false;  // natural sampling measure for Monte Carlo draws

  ColumnSampler sampler_for(const QuadratureRule& rule) const;
  ColumnSampler sampler_at(std::span<const double> xs, std::span<const double> ys) const;
};

/// Pointwise multiplication by sqrt(W(x_k)).
ComplexVector absorb_weight(const ComplexVector& samples, std::span<const double> weight_at_nodes);

/// Leading-order stationary-phase inspiral waveform.
Complex spa_waveform(double chirp_mass_kg, double f_hz, double amplitude = 1.0,
                     const PhysicalConstants& constants = {});

/// (m1 m2)^{3/5} (m1 + m2)^{-1/5}.
double chirp_mass(double m1, double m2);

/// Initial-LIGO power spectral density model, y = f / 150 Hz.
double ligo_psd(double f_hz);

/// Geometric grid A (B/A)^{i/(K-1)}, i = 0..K-1.
std::vector<double> log_training_set(double A, double B, std::size_t K);

/// Number of cycles N(fmin) - N(fmax) for a chirp mass in kg.
double n_cycles(double chirp_mass_kg, double fmin, double fmax,
                const PhysicalConstants& constants = {});

/// Orthonormal Legendre polynomial sqrt((2l+1)/2) P_l(x).
double normalized_legendre(int degree, double x);

/// Parameter-space box and frequency band of the inspiral study.
struct GwPreset {
  PhysicalConstants constants;
  double fmin = 40.0;
  double fmax = 366.3383434841933;
  double mc_min_solar = 2.611651689888372;
  double mc_max_solar = 26.11651689888372;

  double mc_min_kg() const { return mc_min_solar * constants.solar_mass; }
  double mc_max_kg() const { return mc_max_solar * constants.solar_mass; }
};

/// SPA waveforms with W = 1 / S(f); parameter = {chirp mass in kg}.
FunctionFamily gw_family(const GwPreset& preset = {});

/// Analytic families: "legendre" (parameter = {degree}), "runge" (no parameter),
/// "inv_dist_1d" ({mu1}), "inv_dist_2d" ({mu1, mu2}). All with W = 1.
FunctionFamily analytic_family(const std::string& name);

/// Samples of a family on a rule; columns are parameter instances.
struct SampledFunctionSet {
  ComplexMatrix samples;
  std::vector<Parameter> parameters;
  std::vector<double> original_norms;  // ||W^{1/2} h||_d before normalization
  QuadratureRule rule;
  std::string family;
  bool normalized = false;

  std::size_t size() const { return static_cast<std::size_t>(samples.cols()); }
};

/// Column j = W^{1/2} h_{mu_j} at the rule nodes, divided by its discrete norm if
/// `normalize`.
SampledFunctionSet sample_family(const FunctionFamily& family,
                                 const std::vector<Parameter>& parameters,
                                 const QuadratureRule& rule, bool normalize);

/// CSV `node_index,param_index,re,im` with 17 significant digits.
void write_samples_csv(std::ostream& out, const SampledFunctionSet& set);

}  // namespace roq
