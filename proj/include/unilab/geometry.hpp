#pragma once

// Pointwise geometry of a single frame field: the material connection
// Gamma^I_{JK} = -P^I_{a,K} P^{-a}_J, its torsion, the material metric
// g = (P P^T)^{-1}, covariant derivatives and a finite-difference
// curvature check.

#include "unilab/field.hpp"
#include "unilab/tensor.hpp"

namespace unilab {

struct ConnectionValue {
  Ten3 gamma;  // gamma(I, J, K) = Gamma^I_{JK}
  Vec3 point;
};

struct TorsionValue {
  Ten3 tau;  // tau(I, J, K) = -tau(I, K, J)
  Vec3 point;
};

struct MetricValue {
  Mat3 g;
  Vec3 point;
};

/// Gamma^I_{JK} = -dP^I_{a,K} P^{-a}_J from an already evaluated jet.
Ten3 connection_from_jet(const FrameJet& jet);

ConnectionValue christoffel(const FrameField& f, const Vec3& x);

/// The other form, Gamma^I_{JK} = P^I_a (P^{-1})^a_{J,K}, which
/// differentiates the inverse directly: symbolically through the adjugate
/// for analytic fields, by finite differences of node-wise inverses for
/// sampled ones. Used as a cross-check of christoffel().
Ten3 christoffel_inverse_form(const FrameField& f, const Vec3& x);

TorsionValue torsion(const ConnectionValue& c);

MetricValue metric(const FrameField& f, const Vec3& x);
Mat3 metric_from_frame(const Mat3& p);

/// (nabla n)^I_K = n^I_{,K} + Gamma^I_{MK} n^M, with Gamma from f.
Mat3 covariant_derivative(const DirectorField& n, const FrameField& f, const Vec3& x);

/// Largest |R^I_{JKL}| of the Riemann tensor
///   R^I_{JKL} = Gamma^I_{JL,K} - Gamma^I_{JK,L} + Gamma^I_{MK} Gamma^M_{JL} - Gamma^I_{ML} Gamma^M_{JK}
/// with the connection derivatives taken by central differences of step h.
double curvature_residual(const FrameField& f, const Vec3& x, double h);

}  // namespace unilab
