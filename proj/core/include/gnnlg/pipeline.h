#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gnnlg/admm.h"
#include "gnnlg/graph.h"
#include "gnnlg/image.h"
#include "gnnlg/patches.h"

namespace gnnlg {

// Every tunable of the denoiser. The three regularization weights depend on
// the noise level, see schedule_for_sigma().
struct ParamSchedule {
  int patch_size = 5;
  int window = 20;
  int stride = 3;
  int k = 16;  // group size, reference patch included

  double alpha = 1.2;
  double beta = 0.8;
  int graph_max_iters = 500;
  double graph_tol = 1e-6;
  // Groups are multiplied by this factor before graph learning and the ADMM
  // solve, and estimates divided by it afterwards. The default maps 8-bit
  // intensities to [0, 1]; the theta weights and the residual tolerances
  // below are calibrated for that range.
  double intensity_scale = 1.0 / 255.0;

  double theta_n = 0.0;
  double theta_r = 0.0;
  double theta_c = 0.0;
  double v = 0.1;
  double p = 0.015;
  int n2 = 100;
  double eps_pri = 0.03;
  double eps_dual = 0.015;

  double delta = 0.1;
  int n1 = 5;
};

// Defaults with theta_n, theta_r, theta_c interpolated (piecewise linear,
// constant outside the table) from the shipped per-sigma table.
ParamSchedule schedule_for_sigma(double sigma);

struct ThetaEntry {
  double sigma;
  double theta_n;
  double theta_r;
  double theta_c;
};

// Table behind schedule_for_sigma(), ordered by sigma. Each weight is
// non-decreasing in sigma.
const std::vector<ThetaEntry>& theta_table();

void validate(const ParamSchedule& schedule);
AdmmConfig admm_config(const ParamSchedule& schedule);
GraphLearnConfig graph_config(const ParamSchedule& schedule);

struct IterationRecord {
  int index = 0;  // 1-based outer iteration
  std::optional<double> psnr;
  double seconds = 0.0;
  int groups = 0;
  int converged_groups = 0;
  double mean_inner_iterations = 0.0;
  int max_inner_iterations = 0;
  int unconverged_graphs = 0;
};

struct DenoiseReport {
  bool oracle = false;
  int selected_iteration = 0;  // 1-based
  std::vector<IterationRecord> iterations;
};

struct DenoiseResult {
  Image image;
  DenoiseReport report;
};

struct DenoiseOptions {
  int threads = 1;
  std::function<void(const IterationRecord&)> on_iteration;
};

// prev + delta (noisy - prev), pixel-wise.
Image outer_regularize(const Image& noisy, const Image& prev, double delta);

// One group as the denoiser sees it: learned graphs, ADMM iterates and
// trace. Laplacians and the solution are in scaled units (see
// intensity_scale); `estimate` is back in image units.
struct GroupInspection {
  PatchGroup group;
  LaplacianFit row;
  LaplacianFit column;
  GroupSolution solution;
  std::vector<AdmmTraceRow> trace;
  Matrix estimate;
};

GroupInspection inspect_group(const Image& image, PatchRef reference,
                              const ParamSchedule& schedule);

// Runs n1 outer passes. Each pass re-injects the noisy image, groups similar
// patches around every stride-grid reference, learns row and column
// Laplacians per group, solves the group by ADMM and averages the estimates
// back into an image.
//
// With ground truth the pass with the highest PSNR (computed on the 8-bit
// quantized estimate) is returned; otherwise the last pass. The result is
// identical for any thread count.
DenoiseResult denoise(const Image& noisy, const ParamSchedule& schedule,
                      const std::optional<Image>& ground_truth,
                      const DenoiseOptions& options = {});

// Report as JSON with a fixed key order. Timing fields are included, so two
// runs differ only in the "seconds" values.
std::string report_to_json(const DenoiseReport& report, const ParamSchedule& schedule);

// "iteration,psnr" rows, one per outer pass. PSNR is empty in blind mode.
std::string psnr_trace_csv(const DenoiseReport& report);

}  // namespace gnnlg
