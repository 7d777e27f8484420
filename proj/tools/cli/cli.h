#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gnnlg/pipeline.h"

namespace gnnlg::cli {

// Optional replacements for individual ParamSchedule fields.
struct ScheduleOverrides {
  std::optional<int> patch_size, window, stride, k, n1, n2;
  std::optional<double> alpha, beta, intensity_scale;
  std::optional<double> theta_n, theta_r, theta_c, v, p, delta, eps_pri, eps_dual;
};

void apply(const ScheduleOverrides& overrides, ParamSchedule& schedule);

struct RunConfig {
  std::string subcommand;  // denoise | bench | inspect-laplacian | synth
  std::vector<std::filesystem::path> inputs;
  std::filesystem::path output;
  std::vector<double> sigmas;
  std::uint64_t seed = 0;
  bool oracle = false;
  std::filesystem::path truth;
  int threads = 1;
  std::filesystem::path report;
  std::filesystem::path trace_dir;
  std::filesystem::path image_dir;
  std::optional<int> row, col;
  std::string kind = "rectangles";
  int size = 64;
  bool quiet = false;
  ScheduleOverrides overrides;
};

// Schedule for sigma (or the bare defaults when sigma is absent) with the
// overrides applied.
ParamSchedule resolve_schedule(const RunConfig& cfg, std::optional<double> sigma);

// Noise seed for one (image, sigma) cell of a bench run.
std::uint64_t bench_seed(std::uint64_t master, const std::string& image_name, double sigma);

// RFC 4180 field: quoted when it contains a comma, quote or line break.
std::string csv_field(const std::string& value);

int cmd_denoise(const RunConfig& cfg, std::ostream& log);
int cmd_bench(const RunConfig& cfg, std::ostream& log);
int cmd_inspect_laplacian(const RunConfig& cfg, std::ostream& log);
int cmd_synth(const RunConfig& cfg, std::ostream& log);

// Parses argv and dispatches. Returns the process exit status; usage and
// runtime errors are reported on `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gnnlg::cli
