// tools/mmsenmf.cc

// Copyright 2026 The mmsenmf Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: train | separate | mix | evaluate | inspect-model.
//
// Every subcommand accepts --config FILE, a flat key=value file whose keys
// are long option names without the dashes. Command-line flags win over the
// file, which wins over the built-in defaults.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mmsenmf/metrics.h"
#include "mmsenmf/model_io.h"
#include "mmsenmf/separation.h"
#include "mmsenmf/wav.h"

namespace fs = std::filesystem;
using namespace mmsenmf;

namespace {

// Exit status for bad invocations and missing inputs.
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Applies key=value pairs from `path` to options of `sub` not set on the
// command line.
void ApplyConfigFile(CLI::App *sub, const std::string &path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  for (const CLI::ConfigItem &item : CLI::ConfigINI().from_config(in)) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    const std::string key = item.fullname();
    CLI::Option *opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config")
      throw UsageError("unknown key '" + key + "' in config file " + path);
    if (opt->count() > 0) continue;
    for (const std::string &v : item.inputs) opt->add_result(v);
    opt->run_callback();
  }
}

void Require(const std::string &value, const std::string &flag) {
  if (value.empty()) throw UsageError("missing required option --" + flag);
}

void AddFraming(CLI::App *sub, FrameParams *f) {
  sub->add_option("--frame-length", f->frame_length, "analysis window length")
      ->capture_default_str();
  sub->add_option("--hop", f->hop, "frame hop in samples")->capture_default_str();
  sub->add_option("--fft-size", f->fft_size, "FFT length")->capture_default_str();
  sub->add_option("--sample-rate", f->sample_rate_hz, "expected sample rate (Hz)")
      ->capture_default_str();
}

// ---- train ------------------------------------------------------------------

struct TrainArgs {
  std::string input, out, config;
  TrainConfig train;
};

int RunTrain(CLI::App *sub, TrainArgs &a) {
  ApplyConfigFile(sub, a.config);
  Require(a.input, "input");
  Require(a.out, "out");
  if (!fs::is_directory(a.input))
    throw UsageError("input directory not found: " + a.input);
  std::vector<fs::path> files;
  for (const auto &entry : fs::directory_iterator(a.input)) {
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (entry.is_regular_file() && ext == ".wav") files.push_back(entry.path());
  }
  if (files.empty()) throw UsageError("no .wav files in " + a.input);
  std::sort(files.begin(), files.end());
  std::vector<AudioSignal> audio;
  for (const fs::path &p : files)
    audio.push_back(ReadWav(p.string(), a.train.framing.sample_rate_hz));

  const SourceModel model = TrainSourceModel(audio, a.train);
  SaveSourceModel(a.out, model);
  std::cout << "files=" << files.size() << "\n"
            << "rank=" << model.rank() << "\n"
            << "K=" << model.prior.num_components() << "\n"
            << "final_divergence=" << model.final_divergence << "\n";
  return 0;
}

// ---- separate ---------------------------------------------------------------

struct SeparateArgs {
  std::string mixture, model_a, model_b, out, config, prior = "mmse";
  double alpha = 1.0;
  double alpha_a = -1.0, alpha_b = -1.0;
  SeparationConfig sep;
};

int RunSeparate(CLI::App *sub, SeparateArgs &a) {
  ApplyConfigFile(sub, a.config);
  Require(a.mixture, "mixture");
  Require(a.model_a, "model-a");
  Require(a.model_b, "model-b");
  Require(a.out, "out");
  for (const std::string *p : {&a.mixture, &a.model_a, &a.model_b})
    if (!fs::exists(*p)) throw UsageError("file not found: " + *p);

  a.sep.mode = ParsePriorMode(a.prior);
  a.sep.alpha_a = a.alpha_a >= 0.0 ? a.alpha_a : a.alpha;
  a.sep.alpha_b = a.alpha_b >= 0.0 ? a.alpha_b : a.alpha;
  a.sep.track_cost = true;
  const SourceModel ma = LoadSourceModel(a.model_a);
  const SourceModel mb = LoadSourceModel(a.model_b);
  const AudioSignal mix = ReadWav(a.mixture, ma.framing.sample_rate_hz);
  const SeparationResult r = Separate(mix, ma, mb, a.sep);

  fs::create_directories(a.out);
  WriteWav((fs::path(a.out) / "source1.wav").string(), r.estimate_a);
  WriteWav((fs::path(a.out) / "source2.wav").string(), r.estimate_b);
  std::ofstream diag(fs::path(a.out) / "diagnostics.txt");
  diag.precision(10);
  diag << "prior=" << PriorModeName(a.sep.mode) << "\n"
       << "alpha_a=" << a.sep.alpha_a << "\nalpha_b=" << a.sep.alpha_b << "\n"
       << "lambda=" << a.sep.lambda << "\n"
       << "noprior_iterations=" << r.noprior_iterations << "\n"
       << "regularized_iterations=" << r.regularized_iterations << "\n";
  const auto summary = [&](const char *name, const UncertaintyDiag &psi) {
    if (psi.dim() == 0) return;
    diag << name << "_mean=" << psi.psi.mean() << "\n"
         << name << "_min=" << psi.psi.minCoeff() << "\n"
         << name << "_max=" << psi.psi.maxCoeff() << "\n";
  };
  summary("psi_a", r.psi_a);
  summary("psi_b", r.psi_b);
  diag << "cost_trace=";
  for (std::size_t i = 0; i < r.cost_trace.size(); ++i)
    diag << (i ? "," : "") << r.cost_trace[i];
  diag << "\n";
  if (!diag) throw std::runtime_error("failed writing diagnostics");

  std::cout << "source1=" << (fs::path(a.out) / "source1.wav").string() << "\n"
            << "source2=" << (fs::path(a.out) / "source2.wav").string() << "\n";
  if (a.sep.mode == PriorMode::kMmse)
    std::cout << "psi_a_mean=" << r.psi_a.psi.mean() << "\n"
              << "psi_b_mean=" << r.psi_b.psi.mean() << "\n";
  return 0;
}

// ---- mix --------------------------------------------------------------------

struct MixArgs {
  std::string a, b, out, config;
  double smr_db = 0.0;
  int sample_rate = 16000;
};

int RunMix(CLI::App *sub, MixArgs &m) {
  ApplyConfigFile(sub, m.config);
  Require(m.a, "a");
  Require(m.b, "b");
  Require(m.out, "out");
  for (const std::string *p : {&m.a, &m.b})
    if (!fs::exists(*p)) throw UsageError("file not found: " + *p);
  const AudioSignal a = ReadWav(m.a, m.sample_rate);
  const AudioSignal b = ReadWav(m.b, m.sample_rate);
  const double c = SmrScale(a, b, m.smr_db);
  WriteWav(m.out, MixAtSmr(a, b, m.smr_db));
  std::cout << "scale=" << c << "\nSMR_dB=" << m.smr_db << "\n";
  return 0;
}

// ---- evaluate ---------------------------------------------------------------

struct EvalArgs {
  std::string estimate, target, interferer, config;
  int sample_rate = 16000;
};

int RunEvaluate(CLI::App *sub, EvalArgs &e) {
  ApplyConfigFile(sub, e.config);
  Require(e.estimate, "estimate");
  Require(e.target, "target");
  Require(e.interferer, "interferer");
  for (const std::string *p : {&e.estimate, &e.target, &e.interferer})
    if (!fs::exists(*p)) throw UsageError("file not found: " + *p);
  const EvalReport r = Evaluate(ReadWav(e.estimate, e.sample_rate),
                                ReadWav(e.target, e.sample_rate),
                                ReadWav(e.interferer, e.sample_rate));
  std::cout.precision(6);
  std::cout << std::fixed << "SNR_dB=" << r.snr_db << "\nSIR_dB=" << r.sir_db
            << "\n";
  return 0;
}

// ---- inspect-model ----------------------------------------------------------

int RunInspect(const std::string &path) {
  Require(path, "model");
  if (!fs::exists(path)) throw UsageError("file not found: " + path);
  const SourceModel m = LoadSourceModel(path);
  std::cout << "version=" << m.version << "\n"
            << "rank=" << m.rank() << "\n"
            << "K=" << m.prior.num_components() << "\n"
            << "frame_length=" << m.framing.frame_length << "\n"
            << "hop=" << m.framing.hop << "\n"
            << "fft_size=" << m.framing.fft_size << "\n"
            << "sample_rate=" << m.framing.sample_rate_hz << "\n"
            << "seed=" << m.seed << "\n"
            << "nmf_iters=" << m.nmf_iters << "\n"
            << "gmm_iters=" << m.gmm_iters << "\n"
            << "final_divergence=" << m.final_divergence << "\n"
            << "gain_floor=" << m.gain_floor << "\n"
            << "weights=";
  for (Eigen::Index k = 0; k < m.prior.weights.size(); ++k)
    std::cout << (k ? "," : "") << m.prior.weights(k);
  std::cout << "\nmean_prior_variance=" << m.prior.variances.mean() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Single-channel source separation with IS-NMF and GMM gain priors"};
  app.require_subcommand(1);

  TrainArgs train;
  CLI::App *train_cmd = app.add_subcommand("train", "learn a source model from a directory of WAV files");
  train_cmd->add_option("--input", train.input, "directory of training WAV files");
  train_cmd->add_option("--out", train.out, "model file to write");
  train_cmd->add_option("--rank", train.train.rank, "number of basis vectors")->capture_default_str();
  train_cmd->add_option("--gmm-k", train.train.gmm_components, "GMM components")->capture_default_str();
  train_cmd->add_option("--nmf-iters", train.train.nmf_iters, "NMF iterations")->capture_default_str();
  train_cmd->add_option("--gmm-iters", train.train.gmm_iters, "GMM EM iterations")->capture_default_str();
  train_cmd->add_option("--seed", train.train.seed, "random seed")->capture_default_str();
  train_cmd->add_option("--epsilon-floor", train.train.epsilon_floor, "IS divergence floor")->capture_default_str();
  AddFraming(train_cmd, &train.train.framing);
  train_cmd->add_option("--config", train.config, "key=value config file");

  SeparateArgs sep;
  CLI::App *sep_cmd = app.add_subcommand("separate", "separate a two-source mixture");
  sep_cmd->add_option("--mixture", sep.mixture, "mixture WAV");
  sep_cmd->add_option("--model-a", sep.model_a, "model of source 1");
  sep_cmd->add_option("--model-b", sep.model_b, "model of source 2");
  sep_cmd->add_option("--out", sep.out, "output directory");
  sep_cmd->add_option("--prior", sep.prior, "none | sparse | mmse")->capture_default_str();
  sep_cmd->add_option("--alpha", sep.alpha, "prior weight for both sources")->capture_default_str();
  sep_cmd->add_option("--alpha-a", sep.alpha_a, "prior weight for source 1 (overrides --alpha)");
  sep_cmd->add_option("--alpha-b", sep.alpha_b, "prior weight for source 2 (overrides --alpha)");
  sep_cmd->add_option("--lambda", sep.sep.lambda, "sparsity weight")->capture_default_str();
  sep_cmd->add_option("--noprior-iters", sep.sep.noprior_iters, "no-prior iterations")->capture_default_str();
  sep_cmd->add_option("--regularized-iters", sep.sep.regularized_iters, "regularized iterations")->capture_default_str();
  sep_cmd->add_option("--psi-iters", sep.sep.psi_em.max_iters, "uncertainty EM iterations")->capture_default_str();
  sep_cmd->add_option("--relearn-psi-every", sep.sep.relearn_psi_every, "re-learn uncertainties every N iterations (0 = never)")->capture_default_str();
  sep_cmd->add_option("--seed", sep.sep.seed, "random seed")->capture_default_str();
  sep_cmd->add_option("--config", sep.config, "key=value config file");

  MixArgs mix;
  CLI::App *mix_cmd = app.add_subcommand("mix", "mix two signals at a given SMR");
  mix_cmd->add_option("--a", mix.a, "first (reference) signal");
  mix_cmd->add_option("--b", mix.b, "second signal, scaled and looped");
  mix_cmd->add_option("--smr-db", mix.smr_db, "power ratio of a to b in dB")->capture_default_str();
  mix_cmd->add_option("--out", mix.out, "mixture WAV to write");
  mix_cmd->add_option("--sample-rate", mix.sample_rate, "expected sample rate")->capture_default_str();
  mix_cmd->add_option("--config", mix.config, "key=value config file");

  EvalArgs eval;
  CLI::App *eval_cmd = app.add_subcommand("evaluate", "SNR and SIR of an estimate");
  eval_cmd->add_option("--estimate", eval.estimate, "estimated source WAV");
  eval_cmd->add_option("--target", eval.target, "reference of the target source");
  eval_cmd->add_option("--interferer", eval.interferer, "reference of the other source");
  eval_cmd->add_option("--sample-rate", eval.sample_rate, "expected sample rate")->capture_default_str();
  eval_cmd->add_option("--config", eval.config, "key=value config file");

  std::string model_path;
  CLI::App *inspect_cmd = app.add_subcommand("inspect-model", "print a model summary");
  inspect_cmd->add_option("--model", model_path, "model file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (train_cmd->parsed()) return RunTrain(train_cmd, train);
    if (sep_cmd->parsed()) return RunSeparate(sep_cmd, sep);
    if (mix_cmd->parsed()) return RunMix(mix_cmd, mix);
    if (eval_cmd->parsed()) return RunEvaluate(eval_cmd, eval);
    if (inspect_cmd->parsed()) return RunInspect(model_path);
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kUsageError;
}
