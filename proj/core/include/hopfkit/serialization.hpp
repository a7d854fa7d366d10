#ifndef HOPFKIT_SERIALIZATION_HPP
#define HOPFKIT_SERIALIZATION_HPP

#include <iosfwd>
#include <string>

#include "hopfkit/conditions.hpp"
#include "hopfkit/continuation.hpp"

namespace hopfkit {

/// Field layout: {ncomp, nt, nx, a: [...], b: [...]} with coefficients
/// flattened row-major in [n][c][j] order; b starts at n = 1.
std::string field_to_json(const SpaceTimeField& u);
SpaceTimeField field_from_json(const std::string& text);

/// State checkpoint: the field layout plus {lambda, sigma} under "field".
std::string checkpoint_to_json(double lambda, double sigma, const SpaceTimeField& u);
struct Checkpoint {
  double lambda = 0.0;
  double sigma = 0.0;
  SpaceTimeField field;
};
Checkpoint checkpoint_from_json(const std::string& text);

/// Deterministic report serialization (fixed key order, no timestamps).
std::string report_to_json(const ConditionReport& rep, const std::string& config_snapshot);

/// CSV with header alpha,lambda,sigma,eta_norm,g_residual,newton_iters and
/// 17-significant-digit floats (round-trip exact). A partial branch gets a
/// trailer comment line.
void branch_to_csv(const Branch& branch, std::ostream& os, bool partial = false);

}  // namespace hopfkit

#endif
