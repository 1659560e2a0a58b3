#pragma once

// CSV result files. Numbers are written with 17 significant digits so a
// read-back reproduces the in-memory doubles exactly.
//
//   SER curves:      method,uwsvd,iteration,ser,zf_ser,trials,seed
//   condition data:  channel,trial,cond_a,cond_a_bar
//   trajectory:      iteration,residual_norm,error_norm[,x<i>_re,x<i>_im ...]

#include <string>
#include <vector>

#include "elaa/detectors.hpp"
#include "elaa/harness.hpp"

namespace elaa {

void write_csv(const std::vector<SerCurve>& curves, const std::string& path);
void write_csv(const std::vector<CondSample>& samples, const std::string& path);

/// Inverse of write_csv for SER curves; zf_uwsvd_ser and diverged_trials are not stored.
std::vector<SerCurve> read_ser_csv(const std::string& path);
std::vector<CondSample> read_cond_csv(const std::string& path);

/// Per-iteration residual (and error, when known) norms. Every
/// `checkpoint_every`-th iterate also gets its entries; 0 disables checkpoints.
void write_trajectory_csv(const Trajectory<double>& traj, const std::string& path, int checkpoint_every = 0);

}  // namespace elaa
