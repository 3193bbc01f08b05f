#pragma once

// Every comparison threshold used across the library lives here.
namespace crossnorm::tol {

inline constexpr double kHermitian = 1e-9;
inline constexpr double kTrace = 1e-9;
inline constexpr double kPsdClamp = 1e-9;
inline constexpr double kSupport = 1e-12;
inline constexpr double kReconstruction = 1e-10;
inline constexpr double kUnitNorm = 1e-10;
inline constexpr double kOrthonormal = 1e-10;

/// Hilbert-Schmidt residual a witness must meet to certify an upper bound.
inline constexpr double kWitnessResidual = 1e-8;
/// Operator Schmidt terms below this singular value are dropped.
inline constexpr double kSchmidtDrop = 1e-12;
/// Lower bound may exceed the upper bound by at most this much.
inline constexpr double kBracket = 1e-9;
/// Slack used by separability verdicts.
inline constexpr double kVerdict = 1e-6;
/// gamma values below 1 - kMeasureDomain are rejected by the measures.
inline constexpr double kMeasureDomain = 1e-6;

inline constexpr double kChannelBound = 1e-9;
/// Choi eigenvalues in [-kChoiReject, -kChoiWarn) only warn.
inline constexpr double kChoiWarn = 1e-9;
inline constexpr double kChoiReject = 1e-7;
inline constexpr double kProjector = 1e-9;
inline constexpr double kBranchCutoff = 1e-12;

}  // namespace crossnorm::tol
