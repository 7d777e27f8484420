#include "gnnlg/pipeline.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "gnnlg/image_io.h"
#include "gnnlg/metrics.h"
#include "gnnlg/patches.h"

#include "json.hpp"

namespace gnnlg {
namespace {

struct GroupOutcome {
  PatchGroup group;
  Matrix estimate;
  int inner_iterations = 0;
  bool converged = false;
  int unconverged_graphs = 0;
};

GroupOutcome process_reference(const Image& current, PatchRef ref,
                               const ParamSchedule& schedule, const GraphLearnConfig& graph_cfg,
                               const AdmmConfig& admm_cfg) {
  GroupOutcome out;
  out.group = build_group(current, ref, schedule.patch_size, schedule.window, schedule.k);
  const Matrix scaled = out.group.t * schedule.intensity_scale;
  const LaplacianFit lr = learn_laplacian(scaled, GraphMode::kRow, graph_cfg);
  const LaplacianFit lc = learn_laplacian(scaled, GraphMode::kColumn, graph_cfg);
  out.unconverged_graphs = (lr.converged ? 0 : 1) + (lc.converged ? 0 : 1);
  GroupSolution solution = solve_group(scaled, lr.laplacian, lc.laplacian, admm_cfg);
  out.estimate = solution.denoised / schedule.intensity_scale;
  out.inner_iterations = solution.state.iter;
  out.converged = solution.state.converged;
  return out;
}

// Runs fn(i) for i in [0, count) on up to `threads` workers. Each index is
// handled exactly once; the first exception is rethrown after all workers
// stop.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  const auto workers =
      static_cast<std::size_t>(std::clamp<long>(threads, 1, static_cast<long>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

const std::vector<ThetaEntry>& theta_table() {
  static const std::vector<ThetaEntry> table = {
      // Tuned by grid search on a synthetic 64x64 depth scene; the optimum
      // is flat, so neighbouring entries were nudged to keep every weight
      // non-decreasing in sigma.
      {15.0, 0.05, 0.5, 0.5},
      {20.0, 0.05, 0.5, 1.0},
      {25.0, 0.05, 1.0, 1.0},
      {30.0, 0.05, 1.0, 1.0},
  };
  return table;
}

ParamSchedule schedule_for_sigma(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  const auto& table = theta_table();
  ParamSchedule schedule;
  auto assign = [&](const ThetaEntry& e) {
    schedule.theta_n = e.theta_n;
    schedule.theta_r = e.theta_r;
    schedule.theta_c = e.theta_c;
  };
  if (sigma <= table.front().sigma) {
    assign(table.front());
  } else if (sigma >= table.back().sigma) {
    assign(table.back());
  } else {
    for (std::size_t i = 0; i + 1 < table.size(); ++i) {
      const ThetaEntry& lo = table[i];
      const ThetaEntry& hi = table[i + 1];
      if (sigma <= hi.sigma) {
        const double f = (sigma - lo.sigma) / (hi.sigma - lo.sigma);
        schedule.theta_n = lo.theta_n + f * (hi.theta_n - lo.theta_n);
        schedule.theta_r = lo.theta_r + f * (hi.theta_r - lo.theta_r);
        schedule.theta_c = lo.theta_c + f * (hi.theta_c - lo.theta_c);
        break;
      }
    }
  }
  return schedule;
}

void validate(const ParamSchedule& s) {
  if (s.patch_size < 1) throw std::invalid_argument("patch_size must be positive");
  if (s.window < s.patch_size) throw std::invalid_argument("window must be >= patch_size");
  if (s.stride < 1) throw std::invalid_argument("stride must be positive");
  if (s.stride > s.patch_size) {
    throw std::invalid_argument("stride larger than patch_size leaves pixels uncovered");
  }
  if (s.k < 1) throw std::invalid_argument("k must be positive");
  if (s.n1 < 1) throw std::invalid_argument("n1 must be at least 1");
  if (!(s.delta >= 0.0 && s.delta <= 1.0)) {
    throw std::invalid_argument("delta must lie in [0, 1]");
  }
  if (!(s.intensity_scale > 0.0)) {
    throw std::invalid_argument("intensity_scale must be positive");
  }
  validate(admm_config(s));
}

AdmmConfig admm_config(const ParamSchedule& s) {
  AdmmConfig cfg;
  cfg.theta_n = s.theta_n;
  cfg.theta_r = s.theta_r;
  cfg.theta_c = s.theta_c;
  cfg.p = s.p;
  cfg.v = s.v;
  cfg.max_inner = s.n2;
  cfg.eps_pri = s.eps_pri;
  cfg.eps_dual = s.eps_dual;
  return cfg;
}

GraphLearnConfig graph_config(const ParamSchedule& s) {
  return GraphLearnConfig{s.alpha, s.beta, s.graph_max_iters, s.graph_tol};
}

Image outer_regularize(const Image& noisy, const Image& prev, double delta) {
  if (!noisy.same_shape(prev)) {
    throw std::invalid_argument("outer_regularize: image sizes differ");
  }
  Image out = prev;
  auto dst = out.data();
  auto src = noisy.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += delta * (src[i] - dst[i]);
  return out;
}

GroupInspection inspect_group(const Image& image, PatchRef reference,
                              const ParamSchedule& schedule) {
  validate(schedule);
  PatchGroup group =
      build_group(image, reference, schedule.patch_size, schedule.window, schedule.k);
  const Matrix scaled = group.t * schedule.intensity_scale;
  LaplacianFit row = learn_laplacian(scaled, GraphMode::kRow, graph_config(schedule));
  LaplacianFit column = learn_laplacian(scaled, GraphMode::kColumn, graph_config(schedule));
  std::vector<AdmmTraceRow> trace;
  GroupSolution solution =
      solve_group(scaled, row.laplacian, column.laplacian, admm_config(schedule), &trace);
  Matrix estimate = solution.denoised / schedule.intensity_scale;
  return GroupInspection{std::move(group), std::move(row),   std::move(column),
                         std::move(solution), std::move(trace), std::move(estimate)};
}

DenoiseResult denoise(const Image& noisy, const ParamSchedule& schedule,
                      const std::optional<Image>& ground_truth, const DenoiseOptions& options) {
  validate(schedule);
  if (ground_truth && !ground_truth->same_shape(noisy)) {
    throw std::invalid_argument("ground truth and noisy image sizes differ");
  }
  const GraphLearnConfig graph_cfg = graph_config(schedule);
  const AdmmConfig admm_cfg = admm_config(schedule);

  DenoiseReport report;
  report.oracle = ground_truth.has_value();
  std::vector<Image> iterates;
  iterates.reserve(static_cast<std::size_t>(schedule.n1));
  Image prev = noisy;

  for (int pass = 1; pass <= schedule.n1; ++pass) {
    const auto start = std::chrono::steady_clock::now();
    const Image current = outer_regularize(noisy, prev, schedule.delta);
    const std::vector<PatchRef> refs =
        extract_patch_refs(current, schedule.patch_size, schedule.stride);

    std::vector<GroupOutcome> outcomes(refs.size());
    parallel_for(refs.size(), options.threads, [&](std::size_t i) {
      outcomes[i] = process_reference(current, refs[i], schedule, graph_cfg, admm_cfg);
    });

    std::vector<PatchGroup> groups;
    std::vector<Matrix> estimates;
    groups.reserve(outcomes.size());
    estimates.reserve(outcomes.size());
    IterationRecord record;
    record.index = pass;
    record.groups = static_cast<int>(outcomes.size());
    long inner_total = 0;
    for (GroupOutcome& o : outcomes) {
      inner_total += o.inner_iterations;
      record.max_inner_iterations = std::max(record.max_inner_iterations, o.inner_iterations);
      record.converged_groups += o.converged ? 1 : 0;
      record.unconverged_graphs += o.unconverged_graphs;
      groups.push_back(std::move(o.group));
      estimates.push_back(std::move(o.estimate));
    }
    record.mean_inner_iterations =
        static_cast<double>(inner_total) / static_cast<double>(std::max<std::size_t>(1, refs.size()));

    Image estimate =
        aggregate(groups, estimates, noisy.width(), noisy.height(), schedule.patch_size);
    if (ground_truth) record.psnr = psnr(*ground_truth, quantize(estimate));
    record.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (options.on_iteration) options.on_iteration(record);
    report.iterations.push_back(record);
    iterates.push_back(estimate);
    prev = std::move(estimate);
  }

  std::size_t selected = iterates.size() - 1;
  if (ground_truth) {
    selected = 0;
    for (std::size_t i = 1; i < report.iterations.size(); ++i) {
      if (*report.iterations[i].psnr > *report.iterations[selected].psnr) selected = i;
    }
  }
  report.selected_iteration = static_cast<int>(selected) + 1;
  return DenoiseResult{std::move(iterates[selected]), std::move(report)};
}

std::string report_to_json(const DenoiseReport& report, const ParamSchedule& s) {
  using nlohmann::ordered_json;
  ordered_json params = {
      {"patch_size", s.patch_size}, {"window", s.window},
      {"stride", s.stride},         {"k", s.k},
      {"alpha", s.alpha},           {"beta", s.beta},
      {"intensity_scale", s.intensity_scale},
      {"theta_n", s.theta_n},       {"theta_r", s.theta_r},
      {"theta_c", s.theta_c},       {"v", s.v},
      {"p", s.p},                   {"delta", s.delta},
      {"n1", s.n1},                 {"n2", s.n2},
      {"eps_pri", s.eps_pri},       {"eps_dual", s.eps_dual},
  };
  ordered_json iterations = ordered_json::array();
  for (const IterationRecord& r : report.iterations) {
    ordered_json item;
    item["iteration"] = r.index;
    if (report.oracle && r.psnr) {
      if (std::isfinite(*r.psnr)) {
        item["psnr"] = *r.psnr;
      } else {
        item["psnr"] = "inf";
      }
    }
    item["groups"] = r.groups;
    item["converged_groups"] = r.converged_groups;
    item["mean_inner_iterations"] = r.mean_inner_iterations;
    item["max_inner_iterations"] = r.max_inner_iterations;
    item["unconverged_graphs"] = r.unconverged_graphs;
    item["seconds"] = r.seconds;
    iterations.push_back(std::move(item));
  }
  ordered_json root;
  root["mode"] = report.oracle ? "oracle" : "blind";
  root["selected_iteration"] = report.selected_iteration;
  root["parameters"] = std::move(params);
  root["iterations"] = std::move(iterations);
  return root.dump(2) + "\n";
}

std::string psnr_trace_csv(const DenoiseReport& report) {
  std::ostringstream out;
  out.precision(10);
  out << "iteration,psnr\n";
  for (const IterationRecord& r : report.iterations) {
    out << r.index << ',';
    if (r.psnr) out << *r.psnr;
    out << '\n';
  }
  return out.str();
}

}  // namespace gnnlg
