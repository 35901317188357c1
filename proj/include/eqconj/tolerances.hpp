#pragma once

namespace eqconj::tol {

inline constexpr double kSolver = 1e-12;
inline constexpr double kPressure = 1e-6;
inline constexpr double kTransport = 5e-3;
inline constexpr double kDisintegration = 5e-3;
inline constexpr double kLebesgue = 5e-3;
inline constexpr double kMarginalTV = 5e-3;
inline constexpr double kFiniteDifference = 1e-2;
inline constexpr double kJacobian = 1e-8;
inline constexpr double kFiberDuality = 1e-6;
inline constexpr double kDegree = 1e-12;
inline constexpr double kConjugacyRatio = 1.8;
inline constexpr double kTransportRatio = 3.0;
inline constexpr double kSymmetry = 1e-10;
inline constexpr double kT3Separable = 2e-2;
inline constexpr double kT3Pushforward = 2e-2;
inline constexpr double kOracle = 1e-4;
// 2^-28
inline constexpr double kWeierstrass = 3.725290298461914e-09;
inline constexpr double kZeroEigen = 1e-12;
inline constexpr double kZeroPhi = 1e-10;
inline constexpr double kZeroJacobian = 1e-8;
inline constexpr double kBaseFactorization = 1e-6;

}  // namespace eqconj::tol
