#pragma once

#include "abflow/madelung.hpp"

#include <vector>

namespace abflow::packets {

/// Free Gaussian packet of initial width alpha moving with u0 = hbar k0 / m.
struct GaussianPacketConfig {
  double alpha = 1.0;
  double k0 = 0.0;
  double mass = 1.0;
  double hbar = 1.0;

  void validate() const;
  /// Spreading time m alpha^2 / (2 hbar).
  [[nodiscard]] double T() const { return mass * alpha * alpha / (2.0 * hbar); }
  [[nodiscard]] double u0() const { return hbar * k0 / mass; }
  /// Width alpha sqrt(1 + (t/T)^2).
  [[nodiscard]] double epsilon(double t) const;
};

struct GaussianFields {
  double rho = 0.0;
  double eta = 0.0;    ///< u0 + (t/T) xi
  double xi = 0.0;     ///< 2 hbar (x - u0 t) / (m eps^2)
  double F_Q = 0.0;    ///< 4 hbar^2 (x - u0 t) / (m eps^4)
  double delta = 0.0;  ///< phase (x - u0 t)^2 t / (eps^2 T) - atan(t/T) / 2
};

GaussianFields gaussian_fields(const GaussianPacketConfig& cfg, double x, double t);

/// Normalized (2/pi)^{1/4} eps^{-1/2} exp(-(x - u0 t)^2/eps^2) e^{i(k0 x - hbar k0^2 t/2m + delta)}.
WaveField gaussian_wavefield(const GaussianPacketConfig& cfg);

struct GaussianConsistency {
  double continuity_residual = 0.0;      ///< max |d rho/dt + d(rho eta)/dx|
  double phase_relation_residual = 0.0;  ///< max |xi - (hbar T / m t) d delta/dx|
  double decomposition_residual = 0.0;   ///< max |eta - u0 - (t/T) xi|
};

/// Residuals of the packet's closed forms on `grid` at time t; derivatives
/// by central differences with step h. The phase relation needs t != 0.
GaussianConsistency gaussian_consistency(const GaussianPacketConfig& cfg, const std::vector<double>& grid, double t,
                                         double h);

/// Non-spreading Airy packet accelerated by a constant force k.
struct AiryPacketConfig {
  double k = 1.0;
  double mass = 1.0;
  double hbar = 1.0;
  double x_lo = -10.0;
  double x_hi = 2.0;

  void validate() const;
  /// (2 m k)^{1/3} / hbar^{2/3}.
  [[nodiscard]] double scale() const;
};

struct AiryFields {
  Complex psi{};
  double rho = 0.0;
  double eta = 0.0;  ///< k t / m
  double F_Q = 0.0;  ///< -dQ/dx by finite differences of the Bohm potential
};

/// Throws DomainError outside [x_lo, x_hi].
AiryFields airy_fields(const AiryPacketConfig& cfg, double x, double t);

WaveField airy_wavefield(const AiryPacketConfig& cfg);

struct FreeParticleFields {
  double eta = 0.0;
  double xi = 0.0;
  bool normalizable = false;
};

FreeParticleFields free_particle_fields(double k0, double mass, double hbar, double x, double t);

}  // namespace abflow::packets
