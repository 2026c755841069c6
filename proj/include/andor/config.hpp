#pragma once

// Numeric constants shared across the library. Every tolerance used by
// validation code or by the test suites lives here.

namespace andor::config {

inline constexpr int kMaxVariables = 24;
inline constexpr int kMaxOracleVariables = 14;
inline constexpr int kMaxSparsifyVariables = 20;
inline constexpr int kMaxAxiomVariables = 8;

// Transforms switch to the OpenMP path at this table size.
inline constexpr int kParallelMinVariables = 14;

// Default fractions for the salience threshold and the denoising box.
inline constexpr double kSalienceFraction = 0.02;
inline constexpr double kZetaFraction = 0.02;

// Probabilities are clipped to [eps, 1 - eps] before taking the logit.
inline constexpr double kLogitClamp = 1e-7;

inline constexpr double kMatchingRelTol = 1e-8;
inline constexpr double kOracleAbsTol = 1e-10;
inline constexpr double kRoundTripRelTol = 1e-9;
inline constexpr double kAxiomTol = 1e-8;

// Slack allowed when checking |delta| <= zeta and the empty-set pin.
inline constexpr double kInvariantSlack = 1e-12;

inline constexpr double kCondition3MaxP = 64.0;
inline constexpr double kCondition3Resolution = 1e-6;

}  // namespace andor::config
