// Command-line pipeline for the wave-gesture toolkit: generate synthetic
// demonstrations, train a gesture model, inspect and condition it, synthesize
// trajectories, and render overlaid poses. Every subcommand is deterministic
// given its flags; randomness enters only through --seed.
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wavegen/demo_generator.hpp"
#include "wavegen/demonstration.hpp"
#include "wavegen/gesture_model.hpp"
#include "wavegen/kinematics.hpp"
#include "wavegen/svg_overlay.hpp"
#include "wavegen/synthesis.hpp"

namespace {

namespace fs = std::filesystem;

std::string indexed_name(const char* prefix, int i) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%03d", prefix, i);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

/// Parse one --set flag of the form
///   amp:dof=<d>,k=<k>,value=<v>
///   phase:dof=<d>,k=<k>,value=<v>
///   dc:dof=<d>,value=<v>
wavegen::ConditioningConstraint parse_constraint(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::runtime_error("constraint '" + text +
                             "' is missing its kind prefix (amp:, phase: or dc:)");
  const std::string kind = text.substr(0, colon);

  wavegen::ConditioningConstraint constraint;
  if (kind == "amp")
    constraint.target.component = wavegen::Component::LogAmplitude;
  else if (kind == "phase")
    constraint.target.component = wavegen::Component::Phase;
  else if (kind == "dc")
    constraint.target.component = wavegen::Component::Dc;
  else
    throw std::runtime_error("constraint '" + text + "' has unknown kind '" + kind +
                             "' (expected amp, phase or dc)");

  bool have_dof = false;
  bool have_k = false;
  bool have_value = false;
  std::string rest = text.substr(colon + 1);
  std::stringstream fields(rest);
  std::string field;
  while (std::getline(fields, field, ',')) {
    const auto eq = field.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("constraint '" + text + "': field '" + field +
                               "' is not key=value");
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    try {
      if (key == "dof") {
        constraint.target.dof = std::stoi(value);
        have_dof = true;
      } else if (key == "k") {
        constraint.target.harmonic = std::stoi(value);
        have_k = true;
      } else if (key == "value") {
        constraint.value = std::stod(value);
        have_value = true;
      } else {
        throw std::runtime_error("constraint '" + text + "': unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw std::runtime_error("constraint '" + text + "': '" + value +
                               "' is not a number");
    }
  }
  if (!have_dof || !have_value)
    throw std::runtime_error("constraint '" + text + "' needs dof= and value=");
  if (constraint.target.component == wavegen::Component::Dc) {
    if (have_k && constraint.target.harmonic != 0)
      throw std::runtime_error("constraint '" + text + "': dc targets have no harmonic");
    constraint.target.harmonic = 0;
  } else if (!have_k) {
    throw std::runtime_error("constraint '" + text + "' needs k=");
  }
  return constraint;
}

struct GenDemosArgs {
  std::string spec_path;
  std::string out_dir;
  std::uint64_t seed = 0;
};

void run_gen_demos(const GenDemosArgs& args) {
  wavegen::GeneratorSpec spec = wavegen::load_generator_spec(args.spec_path);
  wavegen::Dataset data = wavegen::generate_dataset(spec, args.seed);
  fs::create_directories(args.out_dir);
  for (const auto& demo : data.demos)
    wavegen::save_demo(demo, fs::path(args.out_dir) / (demo.name + ".csv"));
  std::cout << "wrote " << data.size() << " demonstrations to " << args.out_dir << "\n";
}

struct TrainArgs {
  std::string demos_dir;
  std::string out_path;
  int harmonics = 25;
  double lambda = wavegen::default_lambda;
  double eps_r = wavegen::default_amplitude_floor;
};

void run_train(const TrainArgs& args) {
  wavegen::Dataset data = wavegen::load_dataset(args.demos_dir);
  std::vector<std::string> warnings;
  wavegen::GestureModel model =
      wavegen::fit_model(data, args.harmonics, args.lambda, args.eps_r, &warnings);
  for (const auto& warning : warnings) std::cerr << "warning: " << warning << "\n";
  wavegen::save_model(model, args.out_path);
  std::cout << "trained on " << data.size() << " demonstrations: dimension "
            << model.layout.dimension() << ", reference duration "
            << model.ref_duration << " s -> " << args.out_path << "\n";
}

struct SampleArgs {
  std::string model_path;
  std::string out_dir;
  int count = 1;
  std::uint64_t seed = 0;
  std::optional<double> duration;
  double rate = wavegen::default_rate;
};

void run_sample(const SampleArgs& args) {
  if (args.count < 1) throw std::runtime_error("--n must be >= 1");
  wavegen::GestureModel model = wavegen::load_model(args.model_path);
  wavegen::SynthesisRequest req;
  req.duration = args.duration.value_or(model.ref_duration);
  req.rate = args.rate;
  fs::create_directories(args.out_dir);
  for (int i = 0; i < args.count; ++i) {
    wavegen::Demonstration traj =
        wavegen::sample_gesture(model, args.seed + static_cast<std::uint64_t>(i), req);
    traj.name = indexed_name("sample", i);
    wavegen::save_demo(traj, fs::path(args.out_dir) / (traj.name + ".csv"));
  }
  std::cout << "wrote " << args.count << " sampled trajectories to " << args.out_dir
            << "\n";
}

struct ConditionArgs {
  std::string model_path;
  std::string out_path;
  std::vector<std::string> constraints;
};

void run_condition(const ConditionArgs& args) {
  wavegen::GestureModel model = wavegen::load_model(args.model_path);
  std::vector<wavegen::ConditioningConstraint> constraints;
  for (const auto& text : args.constraints) constraints.push_back(parse_constraint(text));
  wavegen::GestureModel conditioned = wavegen::condition(model, constraints);
  wavegen::save_model(conditioned, args.out_path);
  std::cout << "conditioned on " << constraints.size() << " constraints -> "
            << args.out_path << "\n";
}

struct SynthesizeArgs {
  std::string model_path;
  std::string out_path;
  std::uint64_t seed = 0;
  std::optional<double> duration;
  double rate = wavegen::default_rate;
  double scale_amp = 1.0;
  double time_scale = 1.0;
};

void run_synthesize(const SynthesizeArgs& args) {
  wavegen::GestureModel model = wavegen::load_model(args.model_path);
  wavegen::LogPolarVector x = wavegen::sample_model(model, args.seed);
  if (args.scale_amp != 1.0) x = wavegen::scale_amplitude(x, args.scale_amp);

  wavegen::SynthesisRequest req;
  req.rate = args.rate;
  req = wavegen::time_scale(req, args.time_scale);
  // default to one (scaled) period of the gesture
  req.duration = args.duration.value_or(model.ref_duration * req.period_scale);

  wavegen::Demonstration traj = wavegen::synthesize(x, model.ref_duration, req);
  traj.name = fs::path(args.out_path).stem().string();
  wavegen::save_demo(traj, args.out_path);
  std::cout << "synthesized " << traj.length() << " samples x " << traj.dofs()
            << " joints -> " << args.out_path << "\n";
}

struct SpectrumArgs {
  std::string model_path;
  std::string out_path;
  bool include_dc = false;
};

void run_spectrum(const SpectrumArgs& args) {
  wavegen::GestureModel model = wavegen::load_model(args.model_path);
  write_text(args.out_path, wavegen::spectrum_csv(model, args.include_dc));
  std::cout << "wrote spectrum of " << model.layout.dofs << " joints -> "
            << args.out_path << "\n";
}

struct RenderArgs {
  std::string chain_path;
  std::string traj_path;
  std::string out_path;
  int stride = 1;
  std::string plane = "xy";
};

void run_render(const RenderArgs& args) {
  wavegen::KinematicChain chain = wavegen::load_chain(args.chain_path);
  wavegen::Demonstration traj = wavegen::load_demo(args.traj_path);
  const auto violations = wavegen::check_joint_limits(chain, traj);
  if (!violations.empty())
    std::cerr << "warning: " << violations.size()
              << " samples outside joint limits (first at frame "
              << violations.front().frame << ", joint " << violations.front().joint
              << ")\n";
  write_text(args.out_path, wavegen::render_overlay(chain, traj, args.stride,
                                                    wavegen::parse_plane(args.plane)));
  std::cout << "rendered " << (traj.length() + args.stride - 1) / args.stride
            << " poses -> " << args.out_path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wave gesture toolkit: learn, condition and render rhythmic "
               "multi-joint gestures"};
  app.require_subcommand(1);

  GenDemosArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen-demos", "generate a synthetic dataset");
  gen->add_option("--spec", gen_args.spec_path, "generator spec JSON")->required();
  gen->add_option("--out", gen_args.out_dir, "output directory")->required();
  gen->add_option("--seed", gen_args.seed, "random seed");

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "fit a gesture model to a dataset");
  train->add_option("--demos", train_args.demos_dir, "demonstration directory")
      ->required();
  train->add_option("--out", train_args.out_path, "model file to write")->required();
  train->add_option("--k", train_args.harmonics, "harmonic count");
  train->add_option("--lambda", train_args.lambda, "covariance diagonal loading");
  train->add_option("--eps-r", train_args.eps_r, "amplitude floor");

  SampleArgs sample_args;
  CLI::App* sample = app.add_subcommand("sample", "draw gesture trajectories");
  sample->add_option("--model", sample_args.model_path, "model file")->required();
  sample->add_option("--out", sample_args.out_dir, "output directory")->required();
  sample->add_option("--n", sample_args.count, "number of trajectories");
  sample->add_option("--seed", sample_args.seed, "random seed");
  sample->add_option("--duration", sample_args.duration, "seconds per trajectory");
  sample->add_option("--rate", sample_args.rate, "samples per second");

  ConditionArgs condition_args;
  CLI::App* cond = app.add_subcommand("condition", "pin model coordinates");
  cond->add_option("--model", condition_args.model_path, "model file")->required();
  cond->add_option("--out", condition_args.out_path, "model file to write")->required();
  cond->add_option("--set", condition_args.constraints,
                   "constraint amp:dof=<d>,k=<k>,value=<v> (or phase:, dc:)")
      ->required();

  SynthesizeArgs synth_args;
  CLI::App* synth = app.add_subcommand("synthesize", "render one gesture draw");
  synth->add_option("--model", synth_args.model_path, "model file")->required();
  synth->add_option("--out", synth_args.out_path, "trajectory file to write")
      ->required();
  synth->add_option("--seed", synth_args.seed, "random seed");
  synth->add_option("--duration", synth_args.duration, "seconds of output");
  synth->add_option("--rate", synth_args.rate, "samples per second");
  synth->add_option("--scale-amp", synth_args.scale_amp, "amplitude multiplier");
  synth->add_option("--time-scale", synth_args.time_scale, "period multiplier");

  SpectrumArgs spectrum_args;
  CLI::App* spectrum = app.add_subcommand("spectrum", "emit amplitudes per harmonic");
  spectrum->add_option("--model", spectrum_args.model_path, "model file")->required();
  spectrum->add_option("--out", spectrum_args.out_path, "csv file to write")
      ->required();
  spectrum->add_flag("--include-dc", spectrum_args.include_dc,
                     "include the k=0 offsets");

  RenderArgs render_args;
  CLI::App* render = app.add_subcommand("render", "render overlaid poses as SVG");
  render->add_option("--chain", render_args.chain_path, "chain config JSON")
      ->required();
  render->add_option("--traj", render_args.traj_path, "trajectory file")->required();
  render->add_option("--out", render_args.out_path, "SVG file to write")->required();
  render->add_option("--stride", render_args.stride, "frame step")
      ->check(CLI::PositiveNumber);
  render->add_option("--plane", render_args.plane, "projection plane: xy, xz or yz");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) run_gen_demos(gen_args);
    if (train->parsed()) run_train(train_args);
    if (sample->parsed()) run_sample(sample_args);
    if (cond->parsed()) run_condition(condition_args);
    if (synth->parsed()) run_synthesize(synth_args);
    if (spectrum->parsed()) run_spectrum(spectrum_args);
    if (render->parsed()) run_render(render_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
