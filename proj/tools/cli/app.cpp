#include "cli/app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "cli/io.hpp"
#include "mmgsep/bandpass.hpp"
#include "mmgsep/ceemdan.hpp"
#include "mmgsep/emd.hpp"
#include "mmgsep/gait.hpp"
#include "mmgsep/metrics.hpp"
#include "mmgsep/mmg_select.hpp"
#include "mmgsep/random.hpp"
#include "mmgsep/synth.hpp"

namespace mmgsep::cli {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Reconstruction errors above this fraction of max|x| are invariant breaches.
constexpr double kReconstructionTolerance = 1e-8;

double relative_error(double abs_err, const Vector& x) {
  const double scale = x.size() ? x.cwiseAbs().maxCoeff() : 0.0;
  return scale > 0.0 ? abs_err / scale : abs_err;
}

// Keys in `config` that have no counterpart in `defaults`, as JSON pointers.
void collect_unknown(const json& config, const json& defaults, const std::string& prefix,
                     std::vector<std::string>& out) {
  for (const auto& [key, value] : config.items()) {
    const std::string path = prefix + "/" + key;
    if (!defaults.contains(key)) {
      out.push_back(path);
    } else if (value.is_object() && defaults.at(key).is_object()) {
      collect_unknown(value, defaults.at(key), path, out);
    }
  }
}

// Effective parameters: flags over config file over defaults. A config may be
// a plain parameter object or a manifest written by the same command.
json resolve_params(const std::string& command, const json& defaults, const std::string& config_path,
                    const json& flags) {
  json effective = defaults;
  if (!config_path.empty()) {
    json config = read_json(config_path);
    if (!config.is_object()) throw InputError(config_path + ": config must be a JSON object");
    if (config.contains("command") && config.contains("params")) {
      if (config.at("command") != command) {
        throw InputError(config_path + ": manifest is for '" +
                         config.at("command").get<std::string>() + "', not '" + command + "'");
      }
      config = config.at("params");
    }
    std::vector<std::string> unknown;
    collect_unknown(config, defaults, "", unknown);
    if (!unknown.empty()) throw InputError(config_path + ": unknown parameter " + unknown.front());
    effective.merge_patch(config);
  }
  effective.merge_patch(flags);
  return effective;
}

template <typename T>
T param(const json& p, const char* pointer) {
  try {
    return p.at(json::json_pointer(pointer)).get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string("parameter ") + pointer + ": " + e.what());
  }
}

// Registers an option whose value, when given, lands at `pointer` in `flags`.
template <typename T>
CLI::Option* flag(CLI::App* sub, json& flags, const std::string& name, const char* pointer,
                  const std::string& help) {
  const json::json_pointer ptr(pointer);
  return sub->add_option_function<T>(name, [&flags, ptr](const T& v) { flags[ptr] = v; }, help);
}

struct Manifest {
  std::string command;
  json params;
  json inputs = json::array();
  json timings = json::object();
  json results = json::object();

  void add_input(const std::string& role, const std::string& path) {
    inputs.push_back({{"role", role}, {"path", path}, {"sha256", sha256_file(path)}});
  }

  json to_json() const {
    return {{"command", command},
            {"tool", kToolName},
            {"version", kToolVersion},
            {"noise_generator", kNoiseGeneratorId},
            {"params", params},
            {"inputs", inputs},
            {"timings_s", timings},
            {"results", results}};
  }
};

fs::path prepare_out(const std::string& dir) {
  const fs::path out(dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) throw InputError("cannot create output directory " + dir);
  return out;
}

json recipe_to_json(const SynthRecipe& r) {
  return {{"fs", r.fs},
          {"duration_s", r.duration_s},
          {"seed", r.seed},
          {"motion",
           {{"f_lo", r.motion.f_lo},
            {"f_hi", r.motion.f_hi},
            {"amplitude_rms", r.motion.amplitude_rms},
            {"sinusoid_hz", r.motion.sinusoid_hz}}},
          {"mmg",
           {{"target_mpf", r.mmg.target_mpf},
            {"amplitude_rms", r.mmg.amplitude_rms},
            {"spectral_shape", r.mmg.spectral_shape}}},
          {"impacts", {{"rate_hz", r.impacts.rate_hz}, {"peak_amplitude", r.impacts.peak_amplitude}}}};
}

SynthRecipe recipe_from_json(const json& p) {
  SynthRecipe r;
  r.fs = param<double>(p, "/fs");
  r.duration_s = param<double>(p, "/duration_s");
  r.seed = param<std::uint64_t>(p, "/seed");
  r.motion.f_lo = param<double>(p, "/motion/f_lo");
  r.motion.f_hi = param<double>(p, "/motion/f_hi");
  r.motion.amplitude_rms = param<double>(p, "/motion/amplitude_rms");
  r.motion.sinusoid_hz = param<std::vector<double>>(p, "/motion/sinusoid_hz");
  r.mmg.target_mpf = param<double>(p, "/mmg/target_mpf");
  r.mmg.amplitude_rms = param<double>(p, "/mmg/amplitude_rms");
  r.mmg.spectral_shape = param<double>(p, "/mmg/spectral_shape");
  r.impacts.rate_hz = param<double>(p, "/impacts/rate_hz");
  r.impacts.peak_amplitude = param<double>(p, "/impacts/peak_amplitude");
  return r;
}

json decomp_defaults() {
  const DecompParams d;
  return {{"ensemble_size", d.ensemble_size},
          {"noise_amplitude", d.noise_amplitude},
          {"seed", d.seed},
          {"sift",
           {{"sd_threshold", d.sift.sd_threshold},
            {"max_sifts", d.sift.max_sifts},
            {"max_imfs", d.sift.max_imfs}}},
          {"threads", 1}};
}

DecompParams decomp_from_json(const json& p) {
  DecompParams d;
  d.ensemble_size = param<int>(p, "/ensemble_size");
  d.noise_amplitude = param<double>(p, "/noise_amplitude");
  d.seed = param<std::uint64_t>(p, "/seed");
  d.sift.sd_threshold = param<double>(p, "/sift/sd_threshold");
  d.sift.max_sifts = param<int>(p, "/sift/max_sifts");
  d.sift.max_imfs = param<int>(p, "/sift/max_imfs");
  d.validate();
  return d;
}

int threads_from_json(const json& p) {
  const int t = param<int>(p, "/threads");
  if (t < 1) throw ValidationError("threads must be >= 1");
  return t;
}

void add_decomp_flags(CLI::App* sub, json& flags) {
  flag<int>(sub, flags, "--ensemble", "/ensemble_size", "iCEEMDAN ensemble size");
  flag<double>(sub, flags, "--epsilon", "/noise_amplitude", "noise amplitude (fraction of std)");
  flag<std::uint64_t>(sub, flags, "--seed", "/seed", "master noise seed");
  flag<double>(sub, flags, "--sd-threshold", "/sift/sd_threshold", "sifting SD stop threshold");
  flag<int>(sub, flags, "--max-sifts", "/sift/max_sifts", "sifting iteration cap");
  flag<int>(sub, flags, "--max-imfs", "/sift/max_imfs", "IMF count cap");
  flag<int>(sub, flags, "--threads", "/threads", "worker threads for the ensemble");
}

Decomposition run_decomposition(const TimeSeries& x, const std::string& method, const DecompParams& d,
                                int threads) {
  if (method == "emd") return extract_imfs(x, d.sift);
  if (method == "ceemdan") return decompose_iceemdan(x, d, threads);
  throw ValidationError("unknown decomposition method '" + method + "' (emd|ceemdan)");
}

json bands_to_json(const BandValues& values) {
  json arr = json::array();
  for (const auto& bv : values) {
    arr.push_back({{"lo_hz", bv.band.lo}, {"hi_hz", bv.band.hi}, {"value", bv.value}});
  }
  return arr;
}

struct Outcome {
  json summary = json::object();
  // Set when an invariant check failed after outputs were written.
  std::string breach{};
};

Outcome cmd_synth(const json& p, const fs::path& out, Manifest& m) {
  const SynthRecipe recipe = recipe_from_json(p);
  auto t0 = Clock::now();
  const SyntheticTrial trial = generate_trial(recipe);
  m.timings["generate"] = seconds_since(t0);

  t0 = Clock::now();
  write_csv(out / "raw.csv", trial.raw);
  write_csv(out / "truth_motion.csv", trial.truth_motion);
  write_csv(out / "truth_mmg.csv", trial.truth_mmg);
  write_csv(out / "truth_impacts.csv", trial.truth_impacts);
  write_json(out / "recipe.json", recipe_to_json(recipe));
  m.timings["write"] = seconds_since(t0);

  m.results = {{"samples", trial.raw.size()},
               {"impact_onsets_s", trial.impact_onsets_s},
               {"mpf_truth_mmg_hz", mean_power_frequency(welch_psd(trial.truth_mmg))}};
  return {{{"samples", trial.raw.size()}, {"impacts", trial.impact_onsets_s.size()}}};
}

Outcome cmd_decompose(const json& p, const fs::path& out, Manifest& m) {
  const std::string input = param<std::string>(p, "/input");
  const std::string method = param<std::string>(p, "/method");
  const DecompParams d = decomp_from_json(p);
  const int threads = threads_from_json(p);

  auto t0 = Clock::now();
  const TimeSeries x = read_csv(input);
  m.add_input("input", input);
  m.timings["read"] = seconds_since(t0);

  t0 = Clock::now();
  const Decomposition dec = run_decomposition(x, method, d, threads);
  m.timings["decompose"] = seconds_since(t0);

  t0 = Clock::now();
  for (const Imf& imf : dec.imfs) {
    char name[32];
    std::snprintf(name, sizeof name, "imf_%02d.csv", imf.index);
    write_csv(out / name, TimeSeries(imf.samples, x.fs()));
  }
  write_csv(out / "residual.csv", TimeSeries(dec.residual, x.fs()));
  m.timings["write"] = seconds_since(t0);

  const double abs_err = reconstruction_error(dec, x.samples());
  const double rel_err = relative_error(abs_err, x.samples());
  json imfs = json::array();
  for (const Imf& imf : dec.imfs) {
    imfs.push_back({{"index", imf.index}, {"sifts", imf.sifts}, {"converged", imf.converged}});
  }
  m.results = {{"imf_count", dec.imfs.size()},
               {"imfs", imfs},
               {"reconstruction_error_abs", abs_err},
               {"reconstruction_error_rel", rel_err}};
  Outcome o{{{"imfs", dec.imfs.size()}, {"reconstruction_error_rel", rel_err}}};
  if (!(rel_err <= kReconstructionTolerance)) {
    o.breach = "reconstruction error " + format_double(rel_err) + " exceeds " +
               format_double(kReconstructionTolerance) + " of max|x|";
  }
  return o;
}

Outcome cmd_filter(const json& p, const fs::path& out, Manifest& m) {
  const std::string input = param<std::string>(p, "/input");
  const std::string method = param<std::string>(p, "/method");

  auto t0 = Clock::now();
  const TimeSeries x = read_csv(input);
  m.add_input("input", input);
  m.timings["read"] = seconds_since(t0);

  Outcome o;
  if (method == "band") {
    BandpassConfig cfg;
    cfg.lo_hz = param<double>(p, "/band/lo_hz");
    cfg.hi_hz = param<double>(p, "/band/hi_hz");
    cfg.order = param<int>(p, "/band/order");
    cfg.zero_phase = param<bool>(p, "/band/zero_phase");
    t0 = Clock::now();
    const MmgSeparation sep = separate_bandpass(x, cfg);
    m.timings["filter"] = seconds_since(t0);
    write_csv(out / "mmg.csv", sep.mmg);
    write_csv(out / "motion.csv", sep.motion);
    m.results = {{"split_error", split_error(sep, x)}};
    o.summary = {{"method", "band"}};
    return o;
  }
  if (method != "ceemdan") {
    throw ValidationError("unknown filter method '" + method + "' (ceemdan|band)");
  }

  const DecompParams d = decomp_from_json(p);
  const int threads = threads_from_json(p);
  FuzzEnParams fz;
  fz.m = param<int>(p, "/fuzzen/m");
  fz.r = param<double>(p, "/fuzzen/r");
  fz.n = param<double>(p, "/fuzzen/n");
  fz.validate();
  const double theta = param<double>(p, "/theta");

  t0 = Clock::now();
  const Decomposition dec = decompose_iceemdan(x, d, threads);
  m.timings["decompose"] = seconds_since(t0);
  t0 = Clock::now();
  const MmgSeparation sep = separate_ceemdan(x, dec, fz, theta);
  m.timings["select"] = seconds_since(t0);

  write_csv(out / "mmg.csv", sep.mmg);
  write_csv(out / "motion.csv", sep.motion);

  const double energy = x.samples().squaredNorm();
  json per_imf = json::array();
  for (std::size_t k = 0; k < sep.scores.size(); ++k) {
    const double share = energy > 0.0 ? dec.imfs[k].samples.squaredNorm() / energy : 0.0;
    per_imf.push_back({{"imf", k + 1},
                       {"fuzzen", sep.scores[k]},
                       {"window_fraction", sep.window_fractions[k]},
                       {"energy_share", share}});
  }
  write_json(out / "scores.json",
             {{"imfs", per_imf},
              {"argmax", sep.argmax},
              {"selected", {{"first", sep.selected.first}, {"last", sep.selected.last}}},
              {"theta", theta}});

  const double abs_err = reconstruction_error(dec, x.samples());
  const double rel_err = relative_error(abs_err, x.samples());
  m.results = {{"imf_count", dec.imfs.size()},
               {"argmax", sep.argmax},
               {"selected", {{"first", sep.selected.first}, {"last", sep.selected.last}}},
               {"reconstruction_error_rel", rel_err},
               {"split_error", split_error(sep, x)}};
  o.summary = {{"method", "ceemdan"},
               {"argmax", sep.argmax},
               {"selected", {sep.selected.first, sep.selected.last}}};
  if (!(rel_err <= kReconstructionTolerance)) {
    o.breach = "reconstruction error " + format_double(rel_err) + " exceeds tolerance";
  }
  return o;
}

SeparationMethod method_from_name(const std::string& name, const fs::path& dir) {
  if (name == to_string(SeparationMethod::CeemdanFuzzEn)) return SeparationMethod::CeemdanFuzzEn;
  if (name == to_string(SeparationMethod::Bandpass)) return SeparationMethod::Bandpass;
  throw InputError(dir.string() + ": unknown separation method '" + name + "'");
}

json report_to_json(const ComparisonReport& r, bool with_ratio) {
  json meta = json::object();
  for (const auto& [k, v] : r.metadata) meta[k] = v;
  json j = {{"method", r.method},
            {"r_squared", r.r_squared},
            {"delta_psd", bands_to_json(r.delta_psd)},
            {"mpf_filtered_hz", r.mpf_filtered},
            {"rms_filtered", r.rms_filtered},
            {"rms_raw", r.rms_raw},
            {"metadata", meta}};
  j["rms_ratio_to_other"] = with_ratio ? json(r.rms_ratio_to_other) : json(nullptr);
  return j;
}

Outcome cmd_metrics(const json& p, const fs::path& out, Manifest& m) {
  const std::string raw_path = param<std::string>(p, "/raw");
  const std::string ref_path = param<std::string>(p, "/reference");
  const auto dirs = param<std::vector<std::string>>(p, "/separations");
  if (dirs.empty()) throw ValidationError("metrics needs at least one separation directory");

  auto t0 = Clock::now();
  const TimeSeries raw = read_csv(raw_path);
  const TimeSeries reference = read_csv(ref_path);
  m.add_input("raw", raw_path);
  m.add_input("reference", ref_path);
  require_aligned(raw, reference, "raw vs reference");

  std::vector<MmgSeparation> seps;
  std::vector<std::string> labels;
  for (const std::string& dir : dirs) {
    const fs::path d(dir);
    const json manifest = read_json(d / "manifest.json");
    const SeparationMethod method = method_from_name(
        manifest.value(json::json_pointer("/params/method"), std::string{}), d);
    const TimeSeries mmg = read_csv(d / "mmg.csv");
    const TimeSeries motion = read_csv(d / "motion.csv");
    require_aligned(mmg, raw, dir + "/mmg.csv vs raw");
    require_aligned(motion, raw, dir + "/motion.csv vs raw");
    m.add_input("mmg", (d / "mmg.csv").string());
    m.add_input("motion", (d / "motion.csv").string());
    seps.push_back(MmgSeparation{mmg, motion, method});
    labels.push_back(dir);
  }
  m.timings["read"] = seconds_since(t0);

  t0 = Clock::now();
  std::vector<ComparisonReport> reports;
  if (seps.size() == 2) {
    auto [a, b] = compare_methods(raw, reference, seps[0], seps[1]);
    reports.push_back(std::move(a));
    reports.push_back(std::move(b));
  } else {
    for (const auto& s : seps) reports.push_back(make_report(raw, reference, s));
  }
  for (std::size_t i = 0; i < reports.size(); ++i) {
    reports[i].metadata.emplace_back("source", labels[i]);
  }

  json rep = json::array();
  for (const auto& r : reports) rep.push_back(report_to_json(r, reports.size() == 2));

  std::vector<std::size_t> order(reports.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return reports[a].r_squared > reports[b].r_squared;
  });
  json ranking = json::array();
  for (std::size_t i : order) {
    ranking.push_back({{"method", reports[i].method}, {"source", labels[i]},
                       {"r_squared", reports[i].r_squared}});
  }
  json pairs = json::array();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    for (std::size_t j = i + 1; j < reports.size(); ++j) {
      BandValues diff;
      for (std::size_t b = 0; b < reports[i].delta_psd.size(); ++b) {
        diff.push_back({reports[i].delta_psd[b].band,
                        reports[i].delta_psd[b].value - reports[j].delta_psd[b].value});
      }
      const double ratio = reports[j].rms_filtered > 0.0
                               ? reports[i].rms_filtered / reports[j].rms_filtered
                               : 0.0;
      pairs.push_back({{"a", labels[i]},
                       {"b", labels[j]},
                       {"r_squared_difference", reports[i].r_squared - reports[j].r_squared},
                       {"delta_psd_difference", bands_to_json(diff)},
                       {"rms_ratio", ratio}});
    }
  }
  write_json(out / "report.json",
             {{"reports", rep}, {"summary", {{"r_squared_ranking", ranking}, {"pairs", pairs}}}});
  m.timings["report"] = seconds_since(t0);

  m.results = {{"best", ranking.front()}};
  return {{{"best_method", reports[order.front()].method},
           {"best_r_squared", reports[order.front()].r_squared}}};
}

// Seeded benchmark fixture: 2 Hz and 40 Hz tones plus white noise at 1 kHz.
TimeSeries bench_fixture(Index samples, std::uint64_t seed) {
  constexpr double fs = 1000.0;
  Vector x = 0.5 * white_noise(samples, seed, 0);
  for (Index i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / fs;
    x[i] += std::sin(2.0 * std::numbers::pi * 2.0 * t) + std::sin(2.0 * std::numbers::pi * 40.0 * t);
  }
  return TimeSeries(std::move(x), fs);
}

bool identical(const Decomposition& a, const Decomposition& b) {
  if (a.imfs.size() != b.imfs.size()) return false;
  for (std::size_t k = 0; k < a.imfs.size(); ++k) {
    if (a.imfs[k].samples != b.imfs[k].samples) return false;
  }
  return a.residual == b.residual;
}

Outcome cmd_bench(const json& p, const fs::path& out, Manifest& m) {
  const int samples = param<int>(p, "/samples");
  if (samples < 256) throw ValidationError("bench needs --samples >= 256");
  DecompParams d;
  d.ensemble_size = param<int>(p, "/ensemble_size");
  d.noise_amplitude = param<double>(p, "/noise_amplitude");
  d.seed = param<std::uint64_t>(p, "/seed");
  d.validate();
  std::vector<int> threads = param<std::vector<int>>(p, "/threads");
  if (threads.empty()) throw ValidationError("bench needs at least one thread count");
  for (int t : threads) {
    if (t < 1) throw ValidationError("thread counts must be >= 1");
  }

  const TimeSeries x = bench_fixture(samples, d.seed);
  std::vector<int> plan = threads;
  if (std::find(plan.begin(), plan.end(), 1) == plan.end()) plan.insert(plan.begin(), 1);

  std::vector<Decomposition> decs;
  std::vector<double> wall;
  for (int t : plan) {
    const auto t0 = Clock::now();
    decs.push_back(decompose_iceemdan(x, d, t));
    wall.push_back(seconds_since(t0));
  }
  const auto base = static_cast<std::size_t>(std::find(plan.begin(), plan.end(), 1) - plan.begin());

  json runs = json::array();
  bool all_identical = true;
  double worst = 0.0;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const double rel = relative_error(reconstruction_error(decs[i], x.samples()), x.samples());
    worst = std::max(worst, rel);
    const bool same = identical(decs[i], decs[base]);
    all_identical = all_identical && same;
    runs.push_back({{"threads", plan[i]},
                    {"wall_s", wall[i]},
                    {"speedup", wall[i] > 0.0 ? wall[base] / wall[i] : 0.0},
                    {"reconstruction_error_rel", rel},
                    {"identical_to_single_thread", same}});
    m.timings["threads_" + std::to_string(plan[i])] = wall[i];
  }
  const json bench = {{"samples", samples},
                      {"ensemble_size", d.ensemble_size},
                      {"hardware_concurrency", std::thread::hardware_concurrency()},
                      {"runs", runs},
                      {"bit_identical", all_identical}};
  write_json(out / "bench.json", bench);
  m.results = {{"bit_identical", all_identical}, {"worst_reconstruction_error_rel", worst}};

  Outcome o{{{"single_thread_s", wall[base]}, {"bit_identical", all_identical}}};
  if (!(worst <= kReconstructionTolerance)) o.breach = "reconstruction error exceeds tolerance";
  if (!all_identical) o.breach = "outputs differ across thread counts";
  return o;
}

Outcome cmd_segment(const json& p, const fs::path& out, Manifest& m) {
  const std::string input = param<std::string>(p, "/input");
  WalkConfig cfg;
  cfg.lo_deg = param<double>(p, "/lo_deg");
  cfg.hi_deg = param<double>(p, "/hi_deg");
  cfg.min_duration_s = param<double>(p, "/min_duration_s");
  const double cutoff = param<double>(p, "/gravity_cutoff_hz");

  auto t0 = Clock::now();
  const TimeSeries acc = read_csv(input);
  m.add_input("input", input);
  m.timings["read"] = seconds_since(t0);

  t0 = Clock::now();
  const TimeSeries angle = inclination_angle(acc, cutoff);
  const std::vector<WalkWindow> windows = walking_windows(angle, cfg);
  m.timings["segment"] = seconds_since(t0);

  json list = json::array();
  for (const WalkWindow& w : windows) {
    list.push_back({{"start_sample", w.start},
                    {"end_sample", w.end},
                    {"start_s", static_cast<double>(w.start) / angle.fs()},
                    {"end_s", static_cast<double>(w.end) / angle.fs()}});
  }
  write_json(out / "windows.json", {{"fs", angle.fs()},
                                    {"lo_deg", cfg.lo_deg},
                                    {"hi_deg", cfg.hi_deg},
                                    {"end_exclusive", true},
                                    {"windows", list}});
  write_csv(out / "angle.csv", angle);
  m.results = {{"window_count", windows.size()}};
  return {{{"windows", windows.size()}}};
}

struct Command {
  CLI::App* app = nullptr;
  json defaults;
  json flags = json::object();
  std::string out;
  std::string config;
  std::function<Outcome(const json&, const fs::path&, Manifest&)> body;
};

Command& add_command(CLI::App& root, std::vector<std::unique_ptr<Command>>& cmds, const std::string& name,
                     const std::string& help, json defaults,
                     std::function<Outcome(const json&, const fs::path&, Manifest&)> body) {
  auto c = std::make_unique<Command>();
  c->app = root.add_subcommand(name, help);
  c->defaults = std::move(defaults);
  c->body = std::move(body);
  c->app->add_option("-o,--out", c->out, "output directory")->required();
  c->app->add_option("--config", c->config, "JSON parameter file or a manifest from an earlier run");
  cmds.push_back(std::move(c));
  return *cmds.back();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App root{"Motion-artifact separation for accelerometer MMG", kToolName};
  root.require_subcommand(1);
  root.set_version_flag("--version", kToolVersion);
  std::vector<std::unique_ptr<Command>> cmds;

  {
    Command& c = add_command(root, cmds, "synth", "generate a labelled synthetic trial",
                             recipe_to_json(standard_recipe()), cmd_synth);
    c.app->add_option("--recipe", c.config, "recipe JSON (same as --config)");
    flag<double>(c.app, c.flags, "--fs", "/fs", "sampling rate in Hz");
    flag<double>(c.app, c.flags, "--duration", "/duration_s", "duration in seconds");
    flag<std::uint64_t>(c.app, c.flags, "--seed", "/seed", "master seed");
    flag<double>(c.app, c.flags, "--motion-lo", "/motion/f_lo", "chirp start frequency");
    flag<double>(c.app, c.flags, "--motion-hi", "/motion/f_hi", "chirp end frequency (<= 15 Hz)");
    flag<double>(c.app, c.flags, "--motion-rms", "/motion/amplitude_rms", "motion RMS");
    flag<std::vector<double>>(c.app, c.flags, "--motion-sinusoids", "/motion/sinusoid_hz",
                              "extra sinusoid frequencies");
    flag<double>(c.app, c.flags, "--mmg-mpf", "/mmg/target_mpf", "MMG mean power frequency");
    flag<double>(c.app, c.flags, "--mmg-rms", "/mmg/amplitude_rms", "MMG RMS");
    flag<double>(c.app, c.flags, "--mmg-shape", "/mmg/spectral_shape", "gamma order of the MMG spectrum");
    flag<double>(c.app, c.flags, "--impact-rate", "/impacts/rate_hz", "impact events per second");
    flag<double>(c.app, c.flags, "--impact-peak", "/impacts/peak_amplitude", "impact peak amplitude");
  }
  {
    json defaults = decomp_defaults();
    defaults["input"] = "";
    defaults["method"] = "ceemdan";
    Command& c = add_command(root, cmds, "decompose", "EMD or iCEEMDAN decomposition of a CSV signal",
                             defaults, cmd_decompose);
    flag<std::string>(c.app, c.flags, "input", "/input", "input CSV");
    flag<std::string>(c.app, c.flags, "--method", "/method", "emd|ceemdan")
        ->check(CLI::IsMember({"emd", "ceemdan"}));
    add_decomp_flags(c.app, c.flags);
  }
  {
    json defaults = decomp_defaults();
    defaults["input"] = "";
    defaults["method"] = "ceemdan";
    const FuzzEnParams fz;
    defaults["fuzzen"] = {{"m", fz.m}, {"r", fz.r}, {"n", fz.n}};
    defaults["theta"] = 0.5;
    const BandpassConfig bp;
    defaults["band"] = {{"lo_hz", bp.lo_hz}, {"hi_hz", bp.hi_hz}, {"order", bp.order},
                        {"zero_phase", bp.zero_phase}};
    Command& c = add_command(root, cmds, "filter", "separate MMG from motion artifacts", defaults,
                             cmd_filter);
    flag<std::string>(c.app, c.flags, "input", "/input", "input CSV");
    flag<std::string>(c.app, c.flags, "--method", "/method", "ceemdan|band")
        ->check(CLI::IsMember({"ceemdan", "band"}));
    add_decomp_flags(c.app, c.flags);
    flag<int>(c.app, c.flags, "--fuzzen-m", "/fuzzen/m", "fuzzy entropy embedding dimension");
    flag<double>(c.app, c.flags, "--fuzzen-r", "/fuzzen/r", "fuzzy entropy tolerance");
    flag<double>(c.app, c.flags, "--fuzzen-n", "/fuzzen/n", "fuzzy entropy exponent");
    flag<double>(c.app, c.flags, "--theta", "/theta", "chain threshold relative to the top score");
    flag<double>(c.app, c.flags, "--lo", "/band/lo_hz", "band-pass lower edge");
    flag<double>(c.app, c.flags, "--hi", "/band/hi_hz", "band-pass upper edge");
    flag<int>(c.app, c.flags, "--order", "/band/order", "band-pass order");
    json& flags = c.flags;
    c.app->add_flag_callback("--single-pass", [&flags] { flags["band"]["zero_phase"] = false; },
                             "causal single-pass band-pass");
  }
  {
    const json defaults = {{"raw", ""}, {"reference", ""}, {"separations", json::array()}};
    Command& c = add_command(root, cmds, "metrics", "compare separations against a reference motion",
                             defaults, cmd_metrics);
    flag<std::string>(c.app, c.flags, "--raw", "/raw", "raw signal CSV");
    flag<std::string>(c.app, c.flags, "--reference", "/reference", "reference motion CSV");
    flag<std::vector<std::string>>(c.app, c.flags, "separations", "/separations",
                                   "separation directories written by filter");
  }
  {
    const DecompParams d;
    const json defaults = {{"samples", 5000},
                           {"ensemble_size", 500},
                           {"threads", {1, 2, 4}},
                           {"seed", d.seed},
                           {"noise_amplitude", d.noise_amplitude}};
    Command& c = add_command(root, cmds, "bench", "time iCEEMDAN across thread counts", defaults,
                             cmd_bench);
    flag<int>(c.app, c.flags, "--samples", "/samples", "fixture length");
    flag<int>(c.app, c.flags, "--ensemble", "/ensemble_size", "ensemble size");
    flag<std::vector<int>>(c.app, c.flags, "--threads", "/threads", "thread counts to time");
    flag<std::uint64_t>(c.app, c.flags, "--seed", "/seed", "fixture and noise seed");
    flag<double>(c.app, c.flags, "--epsilon", "/noise_amplitude", "noise amplitude");
  }
  {
    const WalkConfig w;
    const json defaults = {{"input", ""},
                           {"lo_deg", w.lo_deg},
                           {"hi_deg", w.hi_deg},
                           {"min_duration_s", w.min_duration_s},
                           {"gravity_cutoff_hz", 1.0}};
    Command& c = add_command(root, cmds, "segment", "walking windows from trunk inclination", defaults,
                             cmd_segment);
    flag<std::string>(c.app, c.flags, "input", "/input", "accelerometer CSV in m/s^2");
    flag<double>(c.app, c.flags, "--lo", "/lo_deg", "lower inclination bound in degrees");
    flag<double>(c.app, c.flags, "--hi", "/hi_deg", "upper inclination bound in degrees");
    flag<double>(c.app, c.flags, "--min-duration", "/min_duration_s", "shortest kept window");
    flag<double>(c.app, c.flags, "--cutoff", "/gravity_cutoff_hz", "gravity low-pass cutoff");
  }

  try {
    root.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = root.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  Command* cmd = nullptr;
  for (auto& c : cmds) {
    if (c->app->parsed()) cmd = c.get();
  }
  const std::string name = cmd->app->get_name();

  try {
    Manifest m;
    m.command = name;
    m.params = resolve_params(name, cmd->defaults, cmd->config, cmd->flags);
    const fs::path dir = prepare_out(cmd->out);
    const auto t0 = Clock::now();
    Outcome o = cmd->body(m.params, dir, m);
    m.timings["total"] = seconds_since(t0);
    write_json(dir / "manifest.json", m.to_json());
    if (!o.breach.empty()) {
      err << kToolName << " " << name << ": invariant breach: " << o.breach << '\n';
      out << json{{"command", name}, {"status", "invariant_breach"}, {"out", cmd->out}}.dump() << '\n';
      return kExitInvariant;
    }
    json summary = {{"command", name}, {"status", "ok"}, {"out", cmd->out}};
    summary.update(o.summary);
    out << summary.dump() << '\n';
    return kExitOk;
  } catch (const ValidationError& e) {
    err << kToolName << " " << name << ": error: " << e.what() << '\n';
    return kExitInput;
  } catch (const InvariantError& e) {
    err << kToolName << " " << name << ": invariant breach: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const MonotoneComponentError& e) {
    err << kToolName << " " << name << ": invariant breach: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    err << kToolName << " " << name << ": error: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace mmgsep::cli
