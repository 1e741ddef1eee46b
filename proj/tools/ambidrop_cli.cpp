/*
Copyright 2026 The AmbiDrop Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

// ambidrop: array-agnostic Ambisonics speech-enhancement pipeline CLI.
//
// Verbs: arrays-list, scene-generate, asm-design, encode, enhance, eval,
// steering-export, steering-import.  Exit codes: 0 success, 2 validation
// error, 3 numerical failure.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ambidrop/asm_codec.hpp"
#include "ambidrop/common.hpp"
#include "ambidrop/container.hpp"
#include "ambidrop/enhancement.hpp"
#include "ambidrop/geometry.hpp"
#include "ambidrop/metrics.hpp"
#include "ambidrop/room.hpp"
#include "ambidrop/sh.hpp"
#include "ambidrop/simd.hpp"
#include "ambidrop/steering.hpp"
#include "ambidrop/stft.hpp"
#include "ambidrop/synth.hpp"
#include "ambidrop/wav.hpp"

namespace {

namespace fs = std::filesystem;
using namespace ambidrop;

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out << text;
}

ArrayGeometry load_array(const std::string& name, const std::string& json_path) {
  if (!json_path.empty()) return array_from_json(read_text(json_path));
  return builtin_array(name);
}

HarmonicSet make_set(int order, bool full) {
  return full ? full_set(order) : horizontal_subset(order);
}

// First sample whose 10 ms RMS exceeds 1% of the peak 10 ms RMS.
std::size_t detect_onset(const std::vector<double>& x, double sample_rate) {
  const std::size_t win = std::max<std::size_t>(1, std::size_t(0.010 * sample_rate));
  if (x.size() < win) return 0;
  double peak = 0.0;
  std::vector<double> rms(x.size() - win + 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < win; ++i) acc += x[i] * x[i];
  for (std::size_t i = 0;; ++i) {
    rms[i] = std::sqrt(acc / double(win));
    peak = std::max(peak, rms[i]);
    if (i + win >= x.size()) break;
    acc += x[i + win] * x[i + win] - x[i] * x[i];
  }
  for (std::size_t i = 0; i < rms.size(); ++i) {
    if (rms[i] > 0.01 * peak) return i;
  }
  return 0;
}

StftConfig default_stft(double sample_rate) {
  StftConfig cfg;
  cfg.sample_rate = sample_rate;
  cfg.window_length = std::size_t(0.032 * sample_rate);
  cfg.hop = cfg.window_length / 2;
  cfg.fft_size = cfg.window_length;
  return cfg;
}

std::size_t find_omni_channel(const HarmonicSet& set) {
  for (std::size_t c = 0; c < set.size(); ++c) {
    if (set.indices[c].n == 0 && set.indices[c].m == 0) return c;
  }
  throw ShapeError("harmonic set has no (0,0) channel");
}

// ---------------------------------------------------------------------------
// scene-generate

struct SceneGenOptions {
  std::string out_dir;
  std::string array_name = "full_circle_r10";
  std::string array_json;
  std::vector<std::string> speech_files;
  int num_speakers = 6;
  double duration = 6.0;
  double snr_db = 30.0;
  double sample_rate = 16000.0;
  double room_lx = 6.0, room_ly = 5.0, room_lz = 3.0;
  double beta = 0.83;
  int max_order = 4;
  int ambisonics_order = 2;
  bool full_harmonics = false;
  std::uint64_t seed = 0;
};

int cmd_scene_generate(const SceneGenOptions& opt) {
  if (!opt.speech_files.empty() &&
      opt.speech_files.size() < std::size_t(opt.num_speakers)) {
    throw ShapeError("need at least " + std::to_string(opt.num_speakers) +
                     " speech files, got " +
                     std::to_string(opt.speech_files.size()));
  }
  const std::size_t segment = std::size_t(opt.duration * opt.sample_rate);

  // Per-speaker 6-second segments starting at speech onset.
  std::vector<std::vector<double>> segments;
  for (int s = 0; s < opt.num_speakers; ++s) {
    std::vector<double> speech;
    if (opt.speech_files.empty()) {
      speech = synthetic_speech(opt.duration + 1.0, opt.sample_rate,
                                opt.seed * 977 + std::uint64_t(s));
    } else {
      MultichannelSignal wav = read_wav(opt.speech_files[std::size_t(s)]);
      if (wav.sample_rate != opt.sample_rate) {
        throw FormatError("'" + opt.speech_files[std::size_t(s)] +
                          "': expected " + std::to_string(opt.sample_rate) +
                          " Hz");
      }
      speech = std::move(wav.channels[0]);
    }
    const std::size_t onset = detect_onset(speech, opt.sample_rate);
    if (speech.size() < onset + segment) {
      throw ShapeError("speech too short for a " + std::to_string(opt.duration) +
                       " s segment after onset");
    }
    segments.emplace_back(speech.begin() + long(onset),
                          speech.begin() + long(onset + segment));
  }

  SceneSpec scene;
  scene.room.lx = opt.room_lx;
  scene.room.ly = opt.room_ly;
  scene.room.lz = opt.room_lz;
  scene.room.beta.fill(opt.beta);
  scene.room.max_image_order = opt.max_order;
  scene.array = load_array(opt.array_name, opt.array_json);
  scene.array_center = {opt.room_lx / 2.0, opt.room_ly / 2.0,
                        std::min(1.5, opt.room_lz / 2.0)};
  scene.snr_db = opt.snr_db;
  scene.sample_rate = opt.sample_rate;
  scene.seed = opt.seed;

  // Speaker placement: seeded, uniform with a 0.5 m wall margin.
  std::mt19937_64 rng(opt.seed * 31337 + 7);
  std::uniform_real_distribution<double> ux(0.5, opt.room_lx - 0.5);
  std::uniform_real_distribution<double> uy(0.5, opt.room_ly - 0.5);
  std::uniform_real_distribution<double> uz(1.2, std::min(2.0, opt.room_lz - 0.5));
  for (int s = 0; s < opt.num_speakers; ++s) {
    SceneSource src;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      src.position = {ux(rng), uy(rng), uz(rng)};
      if ((src.position - scene.array_center).norm() > 0.5) break;
    }
    src.signal = std::move(segments[std::size_t(s)]);
    scene.sources.push_back(std::move(src));
  }

  const HarmonicSet set = make_set(opt.ambisonics_order, opt.full_harmonics);
  MicRender mic_render = render_mics(scene);
  AmbisonicsRender amb_render = render_ideal_ambisonics(scene, set);

  auto trim = [&](std::vector<double>& x) { x.resize(segment); };
  for (auto& ch : mic_render.mics.channels) trim(ch);
  trim(mic_render.clean_reference);
  trim(amb_render.clean_reference);
  for (auto& ch : amb_render.channels.channels) ch.resize(segment);
  MultichannelSignal packed = pack_ambisonics(amb_render.channels, set);
  packed.sample_rate = opt.sample_rate;

  fs::create_directories(opt.out_dir);
  const fs::path dir(opt.out_dir);
  write_wav(mic_render.mics, (dir / "mics.wav").string());
  write_wav(packed, (dir / "ambisonics.wav").string());
  MultichannelSignal clean_mic{{mic_render.clean_reference}, opt.sample_rate};
  write_wav(clean_mic, (dir / "clean_mic.wav").string());
  MultichannelSignal clean_a00{{amb_render.clean_reference}, opt.sample_rate};
  write_wav(clean_a00, (dir / "clean_a00.wav").string());

  nlohmann::json manifest;
  manifest["seed"] = opt.seed;
  manifest["sample_rate"] = opt.sample_rate;
  manifest["duration_seconds"] = opt.duration;
  manifest["snr_db"] = opt.snr_db;
  manifest["array"] = nlohmann::json::parse(array_to_json(scene.array));
  manifest["array_center"] = {scene.array_center.x, scene.array_center.y,
                              scene.array_center.z};
  manifest["room"] = {{"lx", opt.room_lx},
                      {"ly", opt.room_ly},
                      {"lz", opt.room_lz},
                      {"beta", opt.beta},
                      {"max_image_order", opt.max_order}};
  manifest["reference_mic"] = mic_render.reference_mic;
  manifest["ambisonics_order"] = opt.ambisonics_order;
  manifest["harmonics"] = [&] {
    auto arr = nlohmann::json::array();
    for (const auto& h : set.indices) arr.push_back({h.n, h.m});
    return arr;
  }();
  auto speakers = nlohmann::json::array();
  for (const auto& src : scene.sources) {
    speakers.push_back({src.position.x, src.position.y, src.position.z});
  }
  manifest["speakers"] = speakers;
  manifest["files"] = {{"mics", "mics.wav"},
                       {"ambisonics", "ambisonics.wav"},
                       {"clean_mic", "clean_mic.wav"},
                       {"clean_a00", "clean_a00.wav"}};
  write_text((dir / "manifest.json").string(), manifest.dump(2) + "\n");
  std::cout << "wrote scene bundle to " << opt.out_dir << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// asm-design

struct AsmDesignOptions {
  std::string array_name = "full_circle_r10";
  std::string array_json;
  std::string steering_file;
  std::string out_path;
  double snr_db = 30.0;
  double sample_rate = 16000.0;
  std::size_t fft_size = 512;
  std::size_t num_directions = 360;
  int order = 2;
  bool full_harmonics = false;
};

int cmd_asm_design(const AsmDesignOptions& opt) {
  SteeringMatrix steering;
  if (!opt.steering_file.empty()) {
    steering = import_measured_steering(opt.steering_file);
  } else {
    const ArrayGeometry array = load_array(opt.array_name, opt.array_json);
    steering = free_field_steering(
        array, horizon_grid(opt.num_directions),
        FrequencyGrid::stft_bins(opt.fft_size, opt.sample_rate));
  }

  AsmDesignParams params;
  params.harmonic_set = make_set(opt.order, opt.full_harmonics);
  params.snr_db = opt.snr_db;
  if (check_encodability(params.harmonic_set, steering.num_mics()) ==
      Encodability::kWarn) {
    std::cerr << "warning: " << params.harmonic_set.size()
              << " harmonics > " << steering.num_mics()
              << " microphones; some channels may be poorly encoded\n";
  }

  const AsmFilterBank bank = asm_design(steering, params);
  export_filter_bank(bank, opt.out_path);

  std::cout << "harmonic   mean NMSE (dB)\n";
  const double lambda = params.regularization();
  for (const auto& h : params.harmonic_set.indices) {
    const std::vector<double> nmse = asm_nmse(steering, bank, h, lambda);
    double mean = 0.0;
    for (double v : nmse) mean += v;
    mean /= double(nmse.size());
    std::cout << "(" << h.n << "," << h.m << ")     " << nmse_db(mean) << "\n";
  }
  std::cout << "wrote filter bank to " << opt.out_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// encode

struct EncodeOptions {
  std::string in_path;
  std::string bank_path;
  std::string out_path;
};

int cmd_encode(const EncodeOptions& opt) {
  const MultichannelSignal mics = read_wav(opt.in_path);
  const AsmFilterBank bank = import_filter_bank(opt.bank_path);
  StftConfig cfg = default_stft(mics.sample_rate);
  if (bank.num_frequencies() != cfg.num_bins()) {
    throw ShapeError("filter bank bin count does not match the STFT profile");
  }
  const TimeFreqTensor mic_tf = stft_forward(mics, cfg);
  const TimeFreqTensor amb_tf = asm_apply(bank, mic_tf);
  const HarmonicSet& set = bank.harmonic_set;

  // Packed real representation per channel (see README): linear +/-m
  // combinations whose inverse STFTs are the Re/Im parts of each estimate.
  auto channel_index = [&](const HarmonicIndex& idx) {
    for (std::size_t c = 0; c < set.size(); ++c) {
      if (set.indices[c] == idx) return c;
    }
    throw ShapeError("harmonic set not closed under m -> -m");
  };
  TimeFreqTensor packed_tf = amb_tf;
  for (std::size_t c = 0; c < set.size(); ++c) {
    const HarmonicIndex idx = set.indices[c];
    if (idx.m == 0) continue;
    const std::size_t pos = channel_index({idx.n, std::abs(idx.m)});
    const std::size_t neg = channel_index({idx.n, -std::abs(idx.m)});
    const double sign = (std::abs(idx.m) % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t t = 0; t < amb_tf.num_frames; ++t) {
      for (std::size_t f = 0; f < amb_tf.num_bins(); ++f) {
        const cplx ap = amb_tf.at(pos, t, f);
        const cplx an = amb_tf.at(neg, t, f);
        packed_tf.at(c, t, f) = idx.m > 0 ? (ap + sign * an) / 2.0
                                          : (ap - sign * an) / (2.0 * cplx(0, 1));
      }
    }
  }
  MultichannelSignal out = stft_inverse(packed_tf);
  for (auto& ch : out.channels) ch.resize(mics.num_samples());
  out.sample_rate = mics.sample_rate;
  write_wav(out, opt.out_path);
  std::cout << "wrote " << set.size() << "-channel Ambisonics estimate to "
            << opt.out_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// enhance

struct EnhanceOptions {
  std::string in_path;
  std::string bank_path;
  std::string estimator = "unit";
  std::string clean_path;
  std::string weights_path;
  std::string out_path;
  int order = 2;
  bool full_harmonics = false;
  double dropout_probability = 0.0;
  std::size_t dropout_max = 3;
  std::uint64_t dropout_seed = 0;
};

int cmd_enhance(const EnhanceOptions& opt) {
  const MultichannelSignal input = read_wav(opt.in_path);
  StftConfig cfg = default_stft(input.sample_rate);

  TimeFreqTensor tensor;
  std::size_t ref_channel = 0;
  if (!opt.bank_path.empty()) {
    const AsmFilterBank bank = import_filter_bank(opt.bank_path);
    if (input.num_channels() != bank.num_mics()) {
      throw ShapeError("input channel count does not match filter bank M");
    }
    if (bank.num_frequencies() != cfg.num_bins()) {
      throw ShapeError("filter bank bin count does not match the STFT profile");
    }
    tensor = asm_apply(bank, stft_forward(input, cfg));
    ref_channel = find_omni_channel(bank.harmonic_set);
  } else {
    const HarmonicSet set = make_set(opt.order, opt.full_harmonics);
    if (input.num_channels() != set.size()) {
      throw ShapeError("input channel count does not match harmonic set");
    }
    const ComplexMultichannel amb = unpack_ambisonics(input, set);
    tensor = stft_forward_complex(amb, cfg);
    ref_channel = find_omni_channel(set);
  }

  if (opt.dropout_probability > 0.0) {
    DropoutSpec spec;
    spec.probability = opt.dropout_probability;
    spec.max_dropped = opt.dropout_max;
    spec.protected_channels = {ref_channel};
    spec.seed = opt.dropout_seed;
    tensor = channel_dropout(tensor, spec);
  }

  ComplexMask mask;
  if (opt.estimator == "unit") {
    mask.num_frames = tensor.num_frames;
    mask.num_bins = tensor.num_bins();
    mask.values.assign(mask.num_frames * mask.num_bins, cplx(1.0, 0.0));
  } else if (opt.estimator == "oracle") {
    if (opt.clean_path.empty()) {
      throw ShapeError("estimator=oracle requires --clean");
    }
    const MultichannelSignal clean = read_wav(opt.clean_path);
    TimeFreqTensor clean_tf = stft_forward(clean, cfg);
    if (clean_tf.num_frames != tensor.num_frames) {
      throw ShapeError("clean reference frame count differs from input");
    }
    // Compare against the tensor's reference channel.
    TimeFreqTensor noisy_ref;
    noisy_ref.config = tensor.config;
    noisy_ref.num_channels = 1;
    noisy_ref.num_frames = tensor.num_frames;
    noisy_ref.values.assign(tensor.frame(ref_channel, 0),
                            tensor.frame(ref_channel, 0) +
                                tensor.num_frames * tensor.num_bins());
    mask = oracle_cirm(clean_tf, noisy_ref, 10.0, 0);
  } else if (opt.estimator == "ft_jnf") {
    if (opt.weights_path.empty()) {
      throw ShapeError("estimator=ft_jnf requires --weights");
    }
    const FtJnfWeights weights = import_ft_jnf_weights(opt.weights_path);
    mask = ft_jnf_forward(tensor, weights);
  } else {
    throw ShapeError("unknown estimator '" + opt.estimator + "'");
  }

  const TimeFreqTensor masked = apply_mask(mask, tensor, ref_channel);
  MultichannelSignal out = stft_inverse(masked);
  out.channels[0].resize(input.num_samples());
  out.sample_rate = input.sample_rate;
  write_wav(out, opt.out_path);
  std::cout << "wrote enhanced signal to " << opt.out_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// eval

int cmd_eval(const std::string& manifest_path, const std::string& out_json,
             const std::string& out_table) {
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_text(manifest_path));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("eval manifest: ") + e.what());
  }
  if (!manifest.is_array() || manifest.empty()) {
    throw ShapeError("eval manifest must be a non-empty array");
  }
  std::vector<EvalRow> rows;
  for (const auto& entry : manifest) {
    EvalRow row;
    row.dataset = entry.value("dataset", "default");
    row.utterance = entry.value("utterance", entry.value("clean", ""));
    try {
      const auto clean = read_wav(entry.at("clean").get<std::string>());
      const auto noisy = read_wav(entry.at("noisy").get<std::string>());
      const auto enhanced = read_wav(entry.at("enhanced").get<std::string>());
      row.noisy_si_sdr_db = si_sdr(clean.channels[0], noisy.channels[0]).value_db;
      row.enhanced_si_sdr_db =
          si_sdr(clean.channels[0], enhanced.channels[0]).value_db;
    } catch (const Error& e) {
      std::cerr << "warning: skipping row '" << row.utterance
                << "': " << e.what() << "\n";
      continue;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ShapeError("no usable rows in eval manifest");
  const EvalReport report = aggregate(rows);
  const std::string table = report_to_table(report);
  std::cout << table;
  if (!out_json.empty()) write_text(out_json, report_to_json(report) + "\n");
  if (!out_table.empty()) write_text(out_table, table);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AmbiDrop: array-agnostic Ambisonics speech enhancement"};
  app.require_subcommand(1);

  bool help_json = false;
  app.add_flag("--help-json", help_json,
               "Print a machine-readable listing of all subcommands/flags");

  // arrays-list
  auto* arrays_cmd = app.add_subcommand("arrays-list", "List catalog arrays");
  bool arrays_json = false;
  arrays_cmd->add_flag("--json", arrays_json, "Emit geometry JSON per array");

  // scene-generate
  SceneGenOptions scene_opt;
  auto* scene_cmd =
      app.add_subcommand("scene-generate", "Render a reverberant scene bundle");
  scene_cmd->add_option("--out", scene_opt.out_dir, "Output directory")->required();
  scene_cmd->add_option("--seed", scene_opt.seed, "Random seed")->required();
  scene_cmd->add_option("--array", scene_opt.array_name, "Catalog array name");
  scene_cmd->add_option("--array-json", scene_opt.array_json,
                        "User-supplied array geometry JSON");
  scene_cmd->add_option("--speech", scene_opt.speech_files,
                        "Speech WAV per speaker (omit for synthetic speech)");
  scene_cmd->add_option("--speakers", scene_opt.num_speakers, "Speaker count");
  scene_cmd->add_option("--duration", scene_opt.duration, "Segment seconds");
  scene_cmd->add_option("--snr", scene_opt.snr_db, "Sensor SNR in dB");
  scene_cmd->add_option("--sample-rate", scene_opt.sample_rate, "Hz");
  scene_cmd->add_option("--room-lx", scene_opt.room_lx, "Room x size (m)");
  scene_cmd->add_option("--room-ly", scene_opt.room_ly, "Room y size (m)");
  scene_cmd->add_option("--room-lz", scene_opt.room_lz, "Room z size (m)");
  scene_cmd->add_option("--beta", scene_opt.beta, "Wall reflection coefficient");
  scene_cmd->add_option("--max-order", scene_opt.max_order, "Image order cap");
  scene_cmd->add_option("--order", scene_opt.ambisonics_order, "Ambisonics order");
  scene_cmd->add_flag("--full-harmonics", scene_opt.full_harmonics,
                      "Use all (order+1)^2 harmonics instead of m = +/-n");

  // asm-design
  AsmDesignOptions design_opt;
  auto* design_cmd =
      app.add_subcommand("asm-design", "Design ASM encoding filters");
  design_cmd->add_option("--out", design_opt.out_path, "Filter bank file")->required();
  design_cmd->add_option("--array", design_opt.array_name, "Catalog array name");
  design_cmd->add_option("--array-json", design_opt.array_json, "Geometry JSON");
  design_cmd->add_option("--steering", design_opt.steering_file,
                         "Measured steering container instead of free field");
  design_cmd->add_option("--snr", design_opt.snr_db, "Design SNR in dB");
  design_cmd->add_option("--sample-rate", design_opt.sample_rate, "Hz");
  design_cmd->add_option("--fft", design_opt.fft_size, "FFT size");
  design_cmd->add_option("--directions", design_opt.num_directions,
                         "Design grid azimuth count");
  design_cmd->add_option("--order", design_opt.order, "Ambisonics order");
  design_cmd->add_flag("--full-harmonics", design_opt.full_harmonics,
                       "Design all (order+1)^2 harmonics");

  // encode
  EncodeOptions encode_opt;
  auto* encode_cmd =
      app.add_subcommand("encode", "Encode microphone WAV to Ambisonics WAV");
  encode_cmd->add_option("--in", encode_opt.in_path, "Mic WAV")->required();
  encode_cmd->add_option("--bank", encode_opt.bank_path, "Filter bank")->required();
  encode_cmd->add_option("--out", encode_opt.out_path, "Output WAV")->required();

  // enhance
  EnhanceOptions enhance_opt;
  auto* enhance_cmd = app.add_subcommand("enhance", "Run the enhancement chain");
  enhance_cmd->add_option("--in", enhance_opt.in_path, "Input WAV")->required();
  enhance_cmd->add_option("--out", enhance_opt.out_path, "Output WAV")->required();
  enhance_cmd->add_option("--bank", enhance_opt.bank_path,
                          "ASM filter bank (microphone input path)");
  enhance_cmd->add_option("--estimator", enhance_opt.estimator,
                          "unit | oracle | ft_jnf");
  enhance_cmd->add_option("--clean", enhance_opt.clean_path,
                          "Clean reference WAV (oracle estimator)");
  enhance_cmd->add_option("--weights", enhance_opt.weights_path,
                          "FT-JNF weight container (ft_jnf estimator)");
  enhance_cmd->add_option("--order", enhance_opt.order,
                          "Ambisonics order of the input (ideal path)");
  enhance_cmd->add_flag("--full-harmonics", enhance_opt.full_harmonics,
                        "Input uses all (order+1)^2 harmonics");
  enhance_cmd->add_option("--dropout", enhance_opt.dropout_probability,
                          "Channel dropout probability (training chain)");
  enhance_cmd->add_option("--dropout-max", enhance_opt.dropout_max,
                          "Max dropped channels");
  enhance_cmd->add_option("--dropout-seed", enhance_opt.dropout_seed,
                          "Dropout seed");

  // eval
  std::string eval_manifest, eval_json, eval_table;
  auto* eval_cmd = app.add_subcommand("eval", "Score (clean, noisy, enhanced) triples");
  eval_cmd->add_option("--manifest", eval_manifest, "JSON manifest")->required();
  eval_cmd->add_option("--json-out", eval_json, "Report JSON path");
  eval_cmd->add_option("--table-out", eval_table, "Report table path");

  // steering-export / steering-import
  AsmDesignOptions steer_opt;
  std::string steer_out;
  auto* export_cmd = app.add_subcommand(
      "steering-export", "Write a free-field steering container");
  export_cmd->add_option("--out", steer_out, "Output file")->required();
  export_cmd->add_option("--array", steer_opt.array_name, "Catalog array name");
  export_cmd->add_option("--array-json", steer_opt.array_json, "Geometry JSON");
  export_cmd->add_option("--sample-rate", steer_opt.sample_rate, "Hz");
  export_cmd->add_option("--fft", steer_opt.fft_size, "FFT size");
  export_cmd->add_option("--directions", steer_opt.num_directions,
                         "Azimuth count");

  std::string steer_in;
  auto* import_cmd = app.add_subcommand(
      "steering-import", "Validate and summarize a steering container");
  import_cmd->add_option("--in", steer_in, "Input file")->required();

  CLI11_PARSE(app, argc, argv);

  if (help_json) {
    nlohmann::json j;
    for (const CLI::App* sub : app.get_subcommands({})) {
      auto flags = nlohmann::json::array();
      for (const CLI::Option* o : sub->get_options()) {
        flags.push_back({{"name", o->get_name()},
                         {"required", o->get_required()},
                         {"description", o->get_description()}});
      }
      j[sub->get_name()] = flags;
    }
    std::cout << j.dump(2) << "\n";
    return 0;
  }

  try {
    if (arrays_cmd->parsed()) {
      for (const auto& name : builtin_array_names()) {
        if (arrays_json) {
          std::cout << array_to_json(builtin_array(name)) << "\n";
        } else {
          std::cout << name << "\n";
        }
      }
      return 0;
    }
    if (scene_cmd->parsed()) return cmd_scene_generate(scene_opt);
    if (design_cmd->parsed()) return cmd_asm_design(design_opt);
    if (encode_cmd->parsed()) return cmd_encode(encode_opt);
    if (enhance_cmd->parsed()) return cmd_enhance(enhance_opt);
    if (eval_cmd->parsed()) return cmd_eval(eval_manifest, eval_json, eval_table);
    if (export_cmd->parsed()) {
      const ArrayGeometry array =
          load_array(steer_opt.array_name, steer_opt.array_json);
      const SteeringMatrix steering = free_field_steering(
          array, horizon_grid(steer_opt.num_directions),
          FrequencyGrid::stft_bins(steer_opt.fft_size, steer_opt.sample_rate));
      export_steering(steering, steer_out);
      std::cout << "wrote steering container to " << steer_out << "\n";
      return 0;
    }
    if (import_cmd->parsed()) {
      const SteeringMatrix steering = import_measured_steering(steer_in);
      std::cout << "array: " << steering.array_name
                << "  M=" << steering.num_mics()
                << "  Q=" << steering.num_directions()
                << "  F=" << steering.num_frequencies() << "\n";
      return 0;
    }
  } catch (const SolverError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
