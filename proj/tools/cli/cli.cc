#include "cli/cli.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "gnnlg/image_io.h"
#include "gnnlg/laplacian_dump.h"
#include "gnnlg/metrics.h"
#include "gnnlg/noise.h"
#include "gnnlg/synthetic.h"

namespace gnnlg::cli {
namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_number(const char* fmt, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, value);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

void log_iteration(std::ostream& log, const IterationRecord& r, int total) {
  log << "pass " << r.index << "/" << total << ": " << r.converged_groups << "/" << r.groups
      << " groups converged, mean " << format_number("%.1f", r.mean_inner_iterations)
      << " inner iterations";
  if (r.psnr) log << ", psnr " << format_number("%.3f", *r.psnr) << " dB";
  log << ", " << format_number("%.2f", r.seconds) << " s\n";
}

std::optional<double> single_sigma(const RunConfig& cfg) {
  if (cfg.sigmas.size() > 1) throw UsageError(cfg.subcommand + " takes a single --sigma");
  if (cfg.sigmas.empty()) return std::nullopt;
  return cfg.sigmas.front();
}

const fs::path& single_input(const RunConfig& cfg) {
  if (cfg.inputs.size() != 1) throw UsageError(cfg.subcommand + " needs exactly one --in");
  return cfg.inputs.front();
}

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

void apply(const ScheduleOverrides& o, ParamSchedule& s) {
  auto set = [](const auto& from, auto& to) {
    if (from) to = *from;
  };
  set(o.patch_size, s.patch_size);
  set(o.window, s.window);
  set(o.stride, s.stride);
  set(o.k, s.k);
  set(o.n1, s.n1);
  set(o.n2, s.n2);
  set(o.alpha, s.alpha);
  set(o.beta, s.beta);
  set(o.intensity_scale, s.intensity_scale);
  set(o.theta_n, s.theta_n);
  set(o.theta_r, s.theta_r);
  set(o.theta_c, s.theta_c);
  set(o.v, s.v);
  set(o.p, s.p);
  set(o.delta, s.delta);
  set(o.eps_pri, s.eps_pri);
  set(o.eps_dual, s.eps_dual);
}

ParamSchedule resolve_schedule(const RunConfig& cfg, std::optional<double> sigma) {
  ParamSchedule s = sigma ? schedule_for_sigma(*sigma) : ParamSchedule{};
  apply(cfg.overrides, s);
  validate(s);
  return s;
}

std::uint64_t bench_seed(std::uint64_t master, const std::string& image_name, double sigma) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char ch : image_name) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  const auto milli = static_cast<std::uint64_t>(std::llround(sigma * 1000.0));
  return mix64(mix64(mix64(master) ^ h) ^ milli);
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string quoted = "\"";
  for (char ch : value) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

int cmd_denoise(const RunConfig& cfg, std::ostream& log) {
  const fs::path& input = single_input(cfg);
  if (cfg.output.empty()) throw UsageError("denoise needs --out");
  if (cfg.oracle && cfg.truth.empty()) throw UsageError("--oracle requires --truth");
  if (!cfg.oracle && !cfg.truth.empty()) throw UsageError("--truth is only used with --oracle");
  const std::optional<double> sigma = single_sigma(cfg);
  const ScheduleOverrides& o = cfg.overrides;
  if (!sigma && !(o.theta_n && o.theta_r && o.theta_c)) {
    throw UsageError("denoise needs --sigma, or all of --theta-n, --theta-r and --theta-c");
  }
  const ParamSchedule schedule = resolve_schedule(cfg, sigma);

  const Image noisy = load_image(input);
  std::optional<Image> truth;
  if (cfg.oracle) truth = load_image(cfg.truth);

  DenoiseOptions options;
  options.threads = cfg.threads;
  if (!cfg.quiet) {
    options.on_iteration = [&](const IterationRecord& r) { log_iteration(log, r, schedule.n1); };
  }
  const DenoiseResult result = denoise(noisy, schedule, truth, options);

  if (cfg.output.has_parent_path()) fs::create_directories(cfg.output.parent_path());
  save_image(result.image, cfg.output);
  const fs::path report =
      cfg.report.empty() ? cfg.output.parent_path() / "report.json" : cfg.report;
  write_text(report, report_to_json(result.report, schedule));
  if (!cfg.trace_dir.empty()) {
    write_text(cfg.trace_dir / "psnr_trace.csv", psnr_trace_csv(result.report));
  }
  if (!cfg.quiet) {
    log << "selected pass " << result.report.selected_iteration << "; wrote " << cfg.output.string()
        << " and " << report.string() << "\n";
  }
  return 0;
}

int cmd_bench(const RunConfig& cfg, std::ostream& log) {
  if (cfg.inputs.empty()) throw UsageError("bench needs at least one --in");
  if (cfg.sigmas.empty()) throw UsageError("bench needs --sigma");
  if (cfg.output.empty()) throw UsageError("bench needs --out for the CSV table");
  if (!cfg.truth.empty()) throw UsageError("bench uses its inputs as ground truth; drop --truth");

  std::ostringstream table;
  table << "image,sigma,noisy_psnr,denoised_psnr,ssim\n";
  for (const fs::path& input : cfg.inputs) {
    const Image clean = load_image(input);
    const std::string name = input.filename().string();
    for (double sigma : cfg.sigmas) {
      const ParamSchedule schedule = resolve_schedule(cfg, sigma);
      const Image noisy = add_awgn(clean, {sigma, bench_seed(cfg.seed, name, sigma)});
      DenoiseOptions options;
      options.threads = cfg.threads;
      const DenoiseResult result =
          denoise(noisy, schedule, cfg.oracle ? std::optional<Image>(clean) : std::nullopt,
                  options);
      const Image denoised = quantize(result.image);
      const QualityScore q = quality(clean, denoised);
      const double noisy_psnr = psnr(clean, quantize(noisy));

      std::ostringstream row;
      row << csv_field(name) << ',' << format_number("%g", sigma) << ','
          << format_number("%.4f", noisy_psnr) << ',' << format_number("%.4f", q.psnr) << ','
          << format_number("%.4f", q.ssim) << '\n';
      table << row.str();
      if (!cfg.quiet) log << row.str();

      if (!cfg.image_dir.empty()) {
        fs::create_directories(cfg.image_dir);
        const std::string out_name = input.stem().string() + "_sigma" +
                                     format_number("%g", sigma) + input.extension().string();
        save_image(denoised, cfg.image_dir / out_name);
      }
    }
  }
  write_text(cfg.output, table.str());
  return 0;
}

int cmd_inspect_laplacian(const RunConfig& cfg, std::ostream& log) {
  const fs::path& input = single_input(cfg);
  if (!cfg.row || !cfg.col) throw UsageError("inspect-laplacian needs --row and --col");
  if (cfg.output.empty()) throw UsageError("inspect-laplacian needs --out (a directory)");
  const ParamSchedule schedule = resolve_schedule(cfg, single_sigma(cfg));

  const Image image = load_image(input);
  const int max_row = image.height() - schedule.patch_size;
  const int max_col = image.width() - schedule.patch_size;
  if (*cfg.row < 0 || *cfg.row > max_row || *cfg.col < 0 || *cfg.col > max_col) {
    throw UsageError("coordinate (" + std::to_string(*cfg.row) + ", " +
                     std::to_string(*cfg.col) + ") out of range; rows 0.." +
                     std::to_string(max_row) + ", cols 0.." + std::to_string(max_col));
  }
  const GroupInspection g = inspect_group(image, {*cfg.row, *cfg.col}, schedule);

  fs::create_directories(cfg.output);
  write_laplacian_csv(g.row.laplacian, cfg.output / "row_laplacian.csv");
  write_laplacian_csv(g.column.laplacian, cfg.output / "column_laplacian.csv");
  save_image(laplacian_magnitude_image(g.row.laplacian, 8), cfg.output / "row_laplacian.png");
  save_image(laplacian_magnitude_image(g.column.laplacian, 8),
             cfg.output / "column_laplacian.png");
  const fs::path trace_dir = cfg.trace_dir.empty() ? cfg.output : cfg.trace_dir;
  fs::create_directories(trace_dir);
  write_admm_trace_csv(g.trace, trace_dir / "admm_trace.csv");
  if (!cfg.quiet) {
    log << "row graph " << g.row.laplacian.size() << " nodes, " << g.row.iterations
        << " iterations; column graph " << g.column.laplacian.size() << " nodes, "
        << g.column.iterations << " iterations; admm " << g.solution.state.iter
        << " iterations, " << (g.solution.state.converged ? "converged" : "not converged")
        << "\n";
  }
  return 0;
}

int cmd_synth(const RunConfig& cfg, std::ostream&) {
  if (cfg.output.empty()) throw UsageError("synth needs --out");
  Image img = [&] {
    if (cfg.kind == "rectangles") return rectangles_depth(cfg.size, cfg.size);
    if (cfg.kind == "scene") return scene_depth(cfg.size, cfg.size);
    throw UsageError("unknown --kind '" + cfg.kind + "' (rectangles or scene)");
  }();
  if (!cfg.sigmas.empty()) {
    img = add_awgn(img, {single_sigma(cfg).value(), cfg.seed});
  }
  if (cfg.output.has_parent_path()) fs::create_directories(cfg.output.parent_path());
  save_image(img, cfg.output);
  return 0;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Depth image denoising with learned dual graphs and low-rank groups", "gnnlg"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "INI file of key=value options named like the long flags (theta-r=0.5); "
                 "command-line flags take precedence");
  app.allow_config_extras(false);

  RunConfig cfg;
  app.add_option("--in", cfg.inputs, "Input image(s), 8-bit grayscale PGM or PNG");
  app.add_option("--out", cfg.output, "Output image, CSV table or directory");
  app.add_option("--sigma", cfg.sigmas, "Noise standard deviation (bench: comma list)")
      ->delimiter(',');
  app.add_option("--seed", cfg.seed, "Master noise seed");
  app.add_flag("--oracle", cfg.oracle, "Select the outer pass with the best PSNR");
  app.add_option("--truth", cfg.truth, "Ground-truth image for --oracle");
  app.add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--report", cfg.report, "JSON report path (default: report.json next to --out)");
  app.add_option("--trace-dir", cfg.trace_dir, "Directory for PSNR / ADMM trace CSVs");
  app.add_option("--image-dir", cfg.image_dir, "bench: directory for denoised images");
  app.add_option("--row", cfg.row, "inspect-laplacian: reference patch row");
  app.add_option("--col", cfg.col, "inspect-laplacian: reference patch column");
  app.add_option("--kind", cfg.kind, "synth: rectangles or scene");
  app.add_option("--size", cfg.size, "synth: image side length")->check(CLI::PositiveNumber);
  app.add_flag("-q,--quiet", cfg.quiet, "No progress output");

  ScheduleOverrides& o = cfg.overrides;
  const std::string group = "Schedule overrides";
  app.add_option("--patch-size", o.patch_size)->group(group);
  app.add_option("--window", o.window)->group(group);
  app.add_option("--stride", o.stride)->group(group);
  app.add_option("--k", o.k, "Patches per group, reference included")->group(group);
  app.add_option("--n1", o.n1, "Outer passes")->group(group);
  app.add_option("--n2", o.n2, "ADMM iteration cap")->group(group);
  app.add_option("--alpha", o.alpha)->group(group);
  app.add_option("--beta", o.beta)->group(group);
  app.add_option("--intensity-scale", o.intensity_scale)->group(group);
  app.add_option("--theta-n", o.theta_n)->group(group);
  app.add_option("--theta-r", o.theta_r)->group(group);
  app.add_option("--theta-c", o.theta_c)->group(group);
  app.add_option("--v", o.v)->group(group);
  app.add_option("--p", o.p)->group(group);
  app.add_option("--delta", o.delta)->group(group);
  app.add_option("--eps-pri", o.eps_pri)->group(group);
  app.add_option("--eps-dual", o.eps_dual)->group(group);

  app.add_subcommand("denoise", "Denoise one image and write a JSON report");
  app.add_subcommand("bench", "Add seeded noise to clean images, denoise, tabulate PSNR/SSIM");
  app.add_subcommand("inspect-laplacian",
                     "Dump the learned row/column Laplacians and ADMM trace for one group");
  app.add_subcommand("synth", "Write a synthetic depth image, optionally with noise");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();

  try {
    if (cfg.subcommand == "denoise") return cmd_denoise(cfg, err);
    if (cfg.subcommand == "bench") return cmd_bench(cfg, err);
    if (cfg.subcommand == "inspect-laplacian") return cmd_inspect_laplacian(cfg, err);
    return cmd_synth(cfg, err);
  } catch (const UsageError& e) {
    err << "gnnlg " << cfg.subcommand << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "gnnlg " << cfg.subcommand << ": error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace gnnlg::cli
