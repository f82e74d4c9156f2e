#pragma once

#include <string>
#include <vector>

namespace riemip {

/// One row per outer iteration. Fields that do not apply to a run (p_hat
/// before enough data, the trust-region columns under the plain interior
/// point algorithm) are NaN.
struct IterationTrace {
  int k = 0;
  double mu = 0;
  double grad_norm = 0;   // ||grad_x L|| at the accepted iterate
  double compl_norm = 0;  // ||S y - mu 1||
  double eq_norm = 0;     // ||h||
  double min_g = 0;
  double min_y = 0;
  int inner_iters = 0;
  double err_to_ref = 0;
  double p_hat = 0;
  double delta = 0;         // trust-region radius (riptrm)
  double nu = 0;            // TRS multiplier of the accepted step (riptrm)
  double lambda_min_h = 0;  // smallest eigenvalue of H at the iterate (riptrm)
};

extern const char* const kTraceHeader;

std::string trace_to_csv(const std::vector<IterationTrace>& trace);
void write_trace_csv(const std::string& path, const std::vector<IterationTrace>& trace);
std::vector<IterationTrace> read_trace_csv(const std::string& path);

}  // namespace riemip
