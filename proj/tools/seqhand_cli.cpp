// seqhand command-line front end. Talks to the library only through the C API.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seqhand/seqhand.h"

namespace {

// One machine-parsable line on stderr: "error: <category>: <message>".
int report(sh_status status) {
  if (status == SH_OK) return 0;
  std::fprintf(stderr, "error: %s: %s\n", sh_status_name(status), sh_last_error());
  return static_cast<int>(status);
}

int usage_error(const std::string& message) {
  std::fprintf(stderr, "error: %s: %s\n", sh_status_name(SH_ERR_INVALID_ARGUMENT), message.c_str());
  return static_cast<int>(SH_ERR_INVALID_ARGUMENT);
}

struct ModelHandle {
  sh_model* ptr = nullptr;
  ~ModelHandle() { sh_model_free(ptr); }
  sh_status open(const std::string& path) {
    return path.empty() ? sh_model_builtin(&ptr) : sh_model_load(path.c_str(), &ptr);
  }
};

struct GenOptions {
  sh_gen_job job{};
  std::string db, backgrounds, out, model, preset;
};

struct EvalOptions {
  std::string pred, truth, csv;
  std::vector<double> thresholds;
};

struct IkOptions {
  std::string joints, out, model;
  std::vector<double> beta;
};

struct InspectOptions {
  std::string dataset, db;
};

struct DbOptions {
  std::string in, out, model;
  std::size_t count = 50000;
  std::uint64_t seed = 0;
};

int run_gen(GenOptions& o) {
  if (o.preset == "train") o.job.sequence_count = 40000;
  if (o.preset == "test") o.job.sequence_count = 1000;
  o.job.db_path = o.db.c_str();
  o.job.background_dir = o.backgrounds.c_str();
  o.job.output_dir = o.out.c_str();
  o.job.model_path = o.model.empty() ? nullptr : o.model.c_str();
  std::size_t frames = 0;
  const sh_status st = sh_gen(&o.job, &frames);
  if (st == SH_OK) std::printf("generated %zu sequences, %zu frames in %s\n", o.job.sequence_count, frames, o.out.c_str());
  return report(st);
}

int run_eval(const EvalOptions& o) {
  sh_eval_summary s{};
  const sh_status st = sh_eval(o.pred.c_str(), o.truth.c_str(), o.thresholds.empty() ? nullptr : o.thresholds.data(),
                               o.thresholds.size(), o.csv.empty() ? nullptr : o.csv.c_str(), &s);
  if (st != SH_OK) return report(st);
  std::printf("frames %zu\n", s.frames);
  std::printf("dims %d\n", s.dims);
  if (!std::isnan(s.auc)) std::printf("auc %.17g\n", s.auc);
  std::printf("mean_error %.17g %s\n", s.mean_error, s.dims == 3 ? "mm" : "px");
  return 0;
}

int run_ik(const IkOptions& o) {
  if (!o.beta.empty() && o.beta.size() != 10) return usage_error("--beta needs exactly 10 values");
  ModelHandle model;
  if (const sh_status st = model.open(o.model); st != SH_OK) return report(st);
  char* text = nullptr;
  std::size_t rows = 0;
  double worst = 0.0;
  const sh_status st =
      sh_ik_file(model.ptr, o.joints.c_str(), o.beta.empty() ? nullptr : o.beta.data(), &text, &rows, &worst);
  if (st != SH_OK) return report(st);
  const std::string body = text;
  sh_string_free(text);
  if (o.out.empty()) {
    std::fputs(body.c_str(), stdout);
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!(f << body)) return usage_error("cannot write " + o.out);
  }
  std::fprintf(stderr, "ik: %zu rows, max residual %.6g mm\n", rows, worst);
  return 0;
}

int run_inspect(const InspectOptions& o) {
  char* text = nullptr;
  std::size_t failures = 0;
  const sh_status st = sh_inspect(o.dataset.c_str(), o.db.empty() ? nullptr : o.db.c_str(), &text, &failures);
  if (st != SH_OK) return report(st);
  std::fputs(text, stdout);
  sh_string_free(text);
  if (failures > 0) {
    std::fprintf(stderr, "error: %s: %zu inspection failures\n", sh_status_name(SH_ERR_VALIDATION), failures);
    return static_cast<int>(SH_ERR_VALIDATION);
  }
  return 0;
}

int run_db_synth(const DbOptions& o) {
  ModelHandle model;
  if (const sh_status st = model.open(o.model); st != SH_OK) return report(st);
  sh_db* db = nullptr;
  sh_status st = sh_db_synthesize(model.ptr, o.count, o.seed, &db);
  if (st == SH_OK) st = sh_db_save(db, o.out.c_str());
  sh_db_free(db);
  if (st == SH_OK) std::printf("wrote %zu records to %s\n", o.count, o.out.c_str());
  return report(st);
}

int run_db_convert(const DbOptions& o) {
  sh_db* db = nullptr;
  sh_status st = sh_db_load(o.in.c_str(), &db);
  char fp[17] = {};
  if (st == SH_OK) st = sh_db_fingerprint(db, fp);
  if (st == SH_OK) st = sh_db_save(db, o.out.c_str());
  if (st == SH_OK) std::printf("%zu records, fingerprint %s\n", sh_db_size(db), fp);
  sh_db_free(db);
  return report(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seqhand: synthetic sequential hand-pose datasets and evaluation"};
  app.set_config("--config", "", "TOML/INI file with option defaults; flags override it");
  app.require_subcommand(1);
  app.set_version_flag("--version", sh_version());

  GenOptions gen;
  sh_gen_job_defaults(&gen.job);
  auto* gen_cmd = app.add_subcommand("gen", "Generate a pose-flow dataset");
  gen_cmd->add_option("--db", gen.db, "Pose database file")->required();
  gen_cmd->add_option("--backgrounds", gen.backgrounds, "Directory of PNG background images")->required();
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--model", gen.model, "Hand model asset (default: builtin)");
  gen_cmd->add_option("--count", gen.job.sequence_count, "Number of sequences")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--preset", gen.preset, "Sequence count preset (train: 40000, test: 1000)")
      ->check(CLI::IsMember({"train", "test"}))
      ->excludes("--count");
  gen_cmd->add_option("--frames", gen.job.n_frames, "Frames per sequence")->capture_default_str();
  gen_cmd->add_option("--alpha", gen.job.alpha, "Update gain alpha in (0, frames]")->capture_default_str();
  gen_cmd->add_option("--noise", gen.job.noise_sigma, "Gaussian jitter (mm) on the updated pose")->capture_default_str();
  gen_cmd->add_option("--width", gen.job.width, "Frame width (px)")->capture_default_str();
  gen_cmd->add_option("--height", gen.job.height, "Frame height (px)")->capture_default_str();
  gen_cmd->add_option("--seed", gen.job.seed, "Master seed")->capture_default_str();
  gen_cmd->add_option("--workers", gen.job.workers, "Worker threads")->capture_default_str();
  gen_cmd->add_option("--scale-min", gen.job.scale_min, "Camera scale lower bound (x fit scale)")->capture_default_str();
  gen_cmd->add_option("--scale-max", gen.job.scale_max, "Camera scale upper bound (x fit scale)")->capture_default_str();
  gen_cmd->add_option("--translate-min", gen.job.translate_min, "Translation lower bound (frame fraction)")
      ->capture_default_str();
  gen_cmd->add_option("--translate-max", gen.job.translate_max, "Translation upper bound (frame fraction)")
      ->capture_default_str();
  gen_cmd->add_option("--rotation-max", gen.job.rotation_max, "Camera rotation magnitude bound (rad)")
      ->capture_default_str();

  EvalOptions ev;
  auto* eval_cmd = app.add_subcommand("eval", "3D-PCK, AUC and mean error of predictions");
  eval_cmd->add_option("--pred", ev.pred, "Prediction keypoint file")->required();
  eval_cmd->add_option("--truth", ev.truth, "Ground-truth keypoint file")->required();
  eval_cmd->add_option("--thresholds", ev.thresholds, "PCK thresholds in mm (default 20..50)");
  eval_cmd->add_option("--csv", ev.csv, "Write the PCK curve as CSV");

  IkOptions ik;
  auto* ik_cmd = app.add_subcommand("ik", "Fit pose parameters to joint positions");
  ik_cmd->add_option("--joints", ik.joints, "3D keypoint file")->required();
  ik_cmd->add_option("--beta", ik.beta, "10 shape parameters (default zeros)");
  ik_cmd->add_option("--model", ik.model, "Hand model asset (default: builtin)");
  ik_cmd->add_option("--out", ik.out, "Report file (default stdout)");

  InspectOptions insp;
  auto* inspect_cmd = app.add_subcommand("inspect", "Audit a generated dataset");
  inspect_cmd->add_option("--dataset", insp.dataset, "Dataset directory")->required();
  inspect_cmd->add_option("--db", insp.db, "Pose database for fingerprint and membership checks");

  DbOptions dbo;
  auto* db_cmd = app.add_subcommand("db", "Pose database utilities");
  db_cmd->require_subcommand(1);
  auto* synth_cmd = db_cmd->add_subcommand("synth", "Write a synthetic pose database");
  synth_cmd->add_option("--count", dbo.count, "Record count")->capture_default_str()->check(CLI::PositiveNumber);
  synth_cmd->add_option("--seed", dbo.seed, "Seed")->capture_default_str();
  synth_cmd->add_option("--model", dbo.model, "Hand model asset (default: builtin)");
  synth_cmd->add_option("--out", dbo.out, "Output file")->required();
  auto* convert_cmd = db_cmd->add_subcommand("convert", "Validate, root-centre and rewrite a pose database");
  convert_cmd->add_option("--in", dbo.in, "Input file")->required();
  convert_cmd->add_option("--out", dbo.out, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return usage_error(e.what());
  }

  if (*gen_cmd) return run_gen(gen);
  if (*eval_cmd) return run_eval(ev);
  if (*ik_cmd) return run_ik(ik);
  if (*inspect_cmd) return run_inspect(insp);
  if (*synth_cmd) return run_db_synth(dbo);
  if (*convert_cmd) return run_db_convert(dbo);
  return usage_error("no subcommand");
}
