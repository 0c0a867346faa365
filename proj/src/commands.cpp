#include "chroma_sr/commands.hpp"

#include <fstream>
#include <ostream>

#include "chroma_sr/errors.hpp"
#include "chroma_sr/io.hpp"
#include "chroma_sr/metrics.hpp"
#include "chroma_sr/noise.hpp"
#include "chroma_sr/pipeline.hpp"
#include "chroma_sr/resample.hpp"
#include "chroma_sr/synth.hpp"

namespace chroma_sr {

namespace {

nlohmann::json eval_json(const EvalReport& r) {
  return {{"psnr_db", r.psnr_db}, {"ssim", r.ssim}, {"per_channel_psnr", r.per_channel_psnr}};
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot open report for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError(path, "failed writing report");
}

// Runs `body`, mapping the error hierarchy onto exit codes.
template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const StageError& e) {
    err << "stage '" << e.stage() << "' failed: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int finish(const RunConfig& cfg, int divergence_warnings, std::ostream& err) {
  if (cfg.strict && divergence_warnings > 0) {
    err << "strict mode: " << divergence_warnings << " divergence warning(s)\n";
    return kExitStrict;
  }
  return kExitOk;
}

}  // namespace

std::string report_path_for(const std::string& output_path) { return output_path + ".report.json"; }

int cmd_sr(const std::string& input_path, const std::string& output_path, const RunConfig& cfg,
           std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(cfg);
    const ColorImage lr = read_image(input_path);
    RunReport run;
    const ColorImage sr = run_pipeline(lr, cfg, &run);
    write_png(output_path, sr);

    nlohmann::json report = {{"schema", kReportSchema},
                             {"command", "sr"},
                             {"input", input_path},
                             {"output", output_path},
                             {"input_size", {lr.width(), lr.height()}},
                             {"output_size", {sr.width(), sr.height()}},
                             {"config", to_json(cfg)},
                             {"run", run.to_json()}};
    write_json(report_path_for(output_path), report);
    out << output_path << '\n';
    for (const std::string& w : run.warnings) err << "warning: " << w << '\n';
    return finish(cfg, run.divergence_warnings, err);
  });
}

nlohmann::json evaluate_synthetic(const ColorImage& gt, const std::array<double, kChannels>& sigma,
                                  const RunConfig& cfg, ColorImage* sr_out,
                                  int* divergence_warnings) {
  validate(cfg);
  for (double s : sigma) {
    if (!(s >= 0.0)) throw ConfigError({"sigma"}, "noise sigma must be non-negative");
  }
  const DegradationModel model(cfg.scale_factor);
  const ColorImage noisy = add_channel_noise(gt, sigma, cfg.seed);
  const ColorImage lr = degrade(noisy, model);

  RunReport run;
  const ColorImage sr =
      quantize_8bit(crop(run_pipeline(lr, cfg, &run), 0, 0, gt.width(), gt.height()));
  const ColorImage baseline = quantize_8bit(crop(
      bicubic_resize(lr, lr.width() * cfg.scale_factor, lr.height() * cfg.scale_factor, false), 0,
      0, gt.width(), gt.height()));

  if (sr_out) *sr_out = sr;
  if (divergence_warnings) *divergence_warnings = run.divergence_warnings;

  const EvalReport ours = evaluate(sr, gt, cfg.shave);
  const EvalReport base = evaluate(baseline, gt, cfg.shave);
  return {{"schema", kReportSchema},
          {"command", "eval"},
          {"sigma_injected", sigma},
          {"lr_size", {lr.width(), lr.height()}},
          {"ours", eval_json(ours)},
          {"baseline", eval_json(base)},
          {"gain", {{"psnr_db", ours.psnr_db - base.psnr_db}, {"ssim", ours.ssim - base.ssim}}},
          {"config", to_json(cfg)},
          {"run", run.to_json()}};
}

int cmd_eval(const std::string& gt_path, const EvalOptions& opts, const RunConfig& cfg,
             std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ColorImage gt = read_image(gt_path);
    ColorImage sr;
    int divergences = 0;
    nlohmann::json report = evaluate_synthetic(gt, opts.sigma, cfg, &sr, &divergences);
    report["ground_truth"] = gt_path;
    if (opts.output_path) {
      write_png(*opts.output_path, sr);
      report["output"] = *opts.output_path;
      write_json(report_path_for(*opts.output_path), report);
    }
    out << report.dump(2) << '\n';
    return finish(cfg, divergences, err);
  });
}

int cmd_noise(const std::string& input_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const NoiseProfile profile = estimate_noise_profile(read_image(input_path));
    const nlohmann::json j = {{"schema", kReportSchema},
                              {"sigma", profile.sigma},
                              {"variance", profile.variances()}};
    out << j.dump() << '\n';
    return kExitOk;
  });
}

}  // namespace chroma_sr
