// blockframe: build, analyze and experiment with block frames from the shell.
#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "blockcoh/blockcs.hpp"
#include "blockcoh/bounds.hpp"
#include "blockcoh/constructions.hpp"
#include "blockcoh/errors.hpp"
#include "blockcoh/flipping.hpp"
#include "blockcoh/io.hpp"
#include "blockcoh/parallel.hpp"
#include "blockcoh/randomgrass.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace blockcoh;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitConvergence = 3;

struct Globals {
  std::uint64_t seed = 1;
  std::optional<std::size_t> trials;
  std::string out_dir = ".";
  std::optional<unsigned> threads;
  std::string format = "json";

  unsigned worker_count() const { return threads ? *threads : default_thread_count(); }
  std::size_t trials_or(std::size_t fallback) const { return trials ? *trials : fallback; }
};

// Collects output files for the manifest.
class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  template <class Writer>
  void write(const std::string& name, Writer&& w) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + (dir_ / name).string() + "'");
    w(out);
    if (!out) throw ParseError("write failed for '" + (dir_ / name).string() + "'");
    names_.push_back(name);
  }
  void write_json(const std::string& name, const json& j) {
    write(name, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
  }

  /// For files written by other means.
  void record(const std::string& name) { names_.push_back(name); }

  const fs::path& dir() const { return dir_; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
};

std::vector<double> parse_grid(const std::string& spec) {
  // lo:hi:count, evenly spaced and inclusive.
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw ValidationError("--grid expects lo:hi:count");
  const double lo = parse_double(parts[0]), hi = parse_double(parts[1]);
  const double count = parse_double(parts[2]);
  if (!(count >= 1.0) || count != std::floor(count)) throw ValidationError("--grid count must be a positive integer");
  const auto c = static_cast<std::size_t>(count);
  std::vector<double> out(c);
  for (std::size_t i = 0; i < c; ++i)
    out[i] = c == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(c - 1);
  return out;
}

json option_values(const CLI::App* app) {
  json j = json::object();
  for (const CLI::Option* opt : app->get_options()) {
    const std::string name = opt->get_name(false, true);
    if (name.empty() || name == "--help" || name == "-h") continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      j[name] = res.size() == 1 ? json(res.front()) : json(res);
    } else {
      j[name] = opt->get_default_str();
    }
  }
  return j;
}

struct Run {
  CLI::App* sub = nullptr;
  json result;  // echoed to stdout
  std::string stdout_text;
};

// --- subcommands -----------------------------------------------------------

struct ConstructArgs {
  std::string family;
  std::optional<std::size_t> v, p, k;
  std::string set_path, frame_path, kron = "none", name = "frame";
  bool save_set = false;
};

void cmd_construct(const ConstructArgs& a, const Globals& g, Outputs& out, Run& run) {
  FrameRecipe rc;
  rc.family = family_from_string(a.family);
  rc.param = a.v ? *a.v : a.p ? *a.p : a.k ? *a.k : 0;
  rc.path = rc.family == Family::external_file ? a.frame_path : a.set_path;
  rc.kron = parse_kron(a.kron);
  const BlockFrame frame = build(rc);
  const CoherenceReport rep = analyze(frame, g.worker_count());
  out.write(a.name + ".bfm", [&](std::ostream& o) { write_bfm(o, frame); });
  json j = to_json(rep);
  j["recipe"] = {{"family", to_string(rc.family)}, {"param", rc.param}, {"kron", to_string(rc.kron)}};
  out.write_json("report.json", j);
  out.write("gram_map.csv", [&](std::ostream& o) { write_gram_map_csv(o, rep.gram_map); });
  if (a.save_set && rc.family == Family::kerdock_real && a.set_path.empty()) {
    const auto set = kerdock_set(static_cast<unsigned>(rc.param));
    const fs::path p = out.dir() / "kerdock_set.txt";
    write_kerdock_set(p.string(), set);
    out.record("kerdock_set.txt");
  }
  run.result = j;
}

void cmd_analyze(const std::string& path, bool gram_json, const Globals& g, Outputs& out, Run& run) {
  const BfmFile f = read_bfm_file(path);
  const BlockFrame frame = BlockFrame::make(f.data, f.r, f.field);
  const CoherenceReport rep = analyze(frame, g.worker_count());
  const json j = to_json(rep, gram_json);
  out.write_json("report.json", j);
  out.write("gram_map.csv", [&](std::ostream& o) { write_gram_map_csv(o, rep.gram_map); });
  run.result = j;
}

void cmd_bounds(const BoundInputs& b, Outputs& out, Run& run) {
  const json j = bounds_json(b);
  out.write_json("bounds.json", j);
  run.result = j;
}

void cmd_threshold(const std::vector<double>& betas, const Globals& g, Outputs& out, Run& run) {
  std::vector<ThresholdSolution> rows;
  rows.reserve(betas.size());
  for (double b : betas) rows.push_back(solve_a_hat(b));
  if (g.format == "csv") {
    std::ostringstream s;
    write_threshold_csv(s, rows);
    out.write("threshold.csv", [&](std::ostream& o) { o << s.str(); });
    run.stdout_text = s.str();
  } else {
    json j = json::array();
    for (const auto& r : rows) j.push_back(to_json(r));
    out.write_json("threshold.json", j);
    run.result = j;
  }
}

void cmd_random_mu(std::size_t n, const std::vector<std::size_t>& grid, std::size_t m_cap,
                   const Globals& g, Outputs& out, Run& run) {
  const auto rows = empirical_mu_curve(n, grid, m_cap, g.trials_or(50), g.seed, g.worker_count());
  if (g.format == "csv") {
    std::ostringstream s;
    write_mu_curve_csv(s, rows);
    out.write("mu_curve.csv", [&](std::ostream& o) { o << s.str(); });
    run.stdout_text = s.str();
  } else {
    json j = json::array();
    for (const auto& r : rows) j.push_back(to_json(r));
    out.write_json("mu_curve.json", j);
    run.result = j;
  }
}

struct FlipArgs {
  std::string frame;
  std::string variant = "spectral";
  double c = 1.0;
  std::size_t search_trials = 0;
  bool steps = false;
};

void cmd_flip(const FlipArgs& a, const Globals& g, Outputs& out, Run& run) {
  const BfmFile f = read_bfm_file(a.frame);
  const BlockFrame frame = BlockFrame::make(f.data, f.r, f.field);
  FlipConfig cfg;
  cfg.norm_variant = norm_variant_from_string(a.variant);
  if (!(a.c > 0.0)) throw ValidationError("--c must be positive");
  cfg.c = a.c;
  cfg.search_trials = a.search_trials;
  const FlipResult res = flip(frame, cfg, g.worker_count());
  json j = to_json(res, a.steps);
  j["norm_variant"] = to_string(cfg.norm_variant);
  j["c"] = cfg.c;
  if (frame.m() > frame.n() / frame.r()) {
    const double cmin = thm14_min_c(frame.m(), frame.n(), frame.r());
    j["thm14_min_c"] = cmin;
    j["target_nu"] = cfg.c * res.mu_after *
                     std::sqrt(static_cast<double>(frame.r()) * std::log(static_cast<double>(frame.m())) /
                               static_cast<double>(frame.n()));
  }
  if (a.search_trials > 0) {
    const FlipResult rs = random_flip_search(frame, a.search_trials, g.seed, g.worker_count());
    j["random_search"] = to_json(rs);
    j["random_search"]["trials"] = a.search_trials;
  }
  out.write("flipped.bfm", [&](std::ostream& o) { write_bfm(o, res.flipped); });
  out.write_json("flip.json", j);
  run.result = j;
}

void cmd_flip_table(std::size_t n, std::size_t m, const std::vector<std::size_t>& r_set,
                    const std::string& variant, const Globals& g, Outputs& out, Run& run) {
  const auto rows = run_flipping_table(n, m, r_set, g.trials_or(10), g.seed, g.worker_count(),
                                       norm_variant_from_string(variant));
  json j = json::array();
  for (const auto& r : rows) j.push_back(to_json(r));
  out.write_json("flip_table.json", j);
  if (g.format == "csv") {
    std::ostringstream s;
    write_flip_table_csv(s, rows);
    out.write("flip_table.csv", [&](std::ostream& o) { o << s.str(); });
    run.stdout_text = s.str();
  } else {
    run.result = j;
  }
}

struct CsArgs {
  std::vector<std::string> frames;  // label=path
  bool no_random = false;
  std::vector<std::size_t> k_grid = {1, 2, 3, 4, 5, 6};
  std::vector<double> dr = {10.0, 100.0};
  std::optional<double> snr_db;
  bool complex_signal = false;
};

void cmd_cs(const CsArgs& a, const Globals& g, Outputs& out, Run& run) {
  std::vector<FrameSource> sources;
  if (a.frames.empty()) {
    sources.push_back({"steiner", kron_construct1(steiner_pairs_etf(4), hadamard_sylvester(1)), std::nullopt});
  }
  for (const auto& spec : a.frames) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw ValidationError("--frame expects label=path, got '" + spec + "'");
    const BfmFile f = read_bfm_file(spec.substr(eq + 1));
    sources.push_back({spec.substr(0, eq), BlockFrame::make(f.data, f.r, f.field), std::nullopt});
  }
  if (!a.no_random) {
    const BlockFrame& ref = *sources.front().fixed;
    sources.push_back({"random", std::nullopt, RandomFrameSpec{ref.n(), ref.r(), ref.m(), 0, 0}});
  }
  NdpOptions opts;
  opts.snr_db = a.snr_db;
  opts.signal_field = a.complex_signal ? Field::complex : Field::real;
  const auto rows = run_ndp_experiment(sources, a.k_grid, a.dr, g.trials_or(500), g.seed, g.worker_count(), opts);
  if (g.format == "csv") {
    std::ostringstream s;
    write_ndp_csv(s, rows);
    out.write("ndp.csv", [&](std::ostream& o) { o << s.str(); });
    run.stdout_text = s.str();
  } else {
    json j = json::array();
    for (const auto& r : rows) j.push_back(to_json(r));
    out.write_json("ndp.json", j);
    run.result = j;
  }
}

// --- driver ----------------------------------------------------------------

int execute(const std::vector<std::string>& args, const std::optional<std::string>& out_dir_override,
            json* manifest_out);

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return {};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cmd_replay(const std::string& manifest_path, const Globals& g, bool out_dir_given) {
  std::ifstream in(manifest_path);
  if (!in) throw ParseError("cannot open '" + manifest_path + "'");
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
  if (!m.contains("argv") || !m.contains("outputs") || !m.contains("out_dir"))
    throw ParseError("manifest lacks argv, outputs or out_dir");
  const auto argv = m["argv"].get<std::vector<std::string>>();
  const fs::path original = m["out_dir"].get<std::string>();
  const fs::path target = out_dir_given ? fs::path(g.out_dir) : original / "replay";
  if (fs::weakly_canonical(target) == fs::weakly_canonical(original))
    throw ValidationError("replay needs an --out-dir different from the original run");
  json replayed;
  const int code = execute(argv, target.string(), &replayed);
  if (code != 0) return code;
  json report{{"manifest", manifest_path}, {"replay_dir", target.string()}, {"files", json::array()}};
  bool all = true;
  for (const auto& name : m["outputs"].get<std::vector<std::string>>()) {
    const std::string a = slurp(original / name), b = slurp(target / name);
    const bool same = !a.empty() && a == b;
    all = all && same;
    report["files"].push_back({{"name", name}, {"identical", same}});
  }
  report["identical"] = all;
  std::cout << report.dump(2) << '\n';
  return all ? 0 : kExitValidation;
}

int execute(const std::vector<std::string>& args, const std::optional<std::string>& out_dir_override,
            json* manifest_out) {
  CLI::App app{"Block-coherence toolkit: constructions, bounds and experiments", "blockframe"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Experiment seed")->capture_default_str();
  app.add_option("--trials", g.trials, "Trial or realization count for experiments");
  app.add_option("--out-dir", g.out_dir, "Directory for output files")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (default: BLOCKFRAME_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "Tabular output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.set_version_flag("--version", std::string(BLOCKCOH_VERSION));

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "Build a frame from a recipe and report its coherence");
  construct->add_option("--family", ca.family, "steiner|harmonic|alltop|chirp|id-hadamard|kerdock|file")->required();
  construct->add_option("--v", ca.v, "Steiner design size");
  construct->add_option("--p", ca.p, "Prime for harmonic, alltop and chirp");
  construct->add_option("--k", ca.k, "Exponent for id-hadamard and kerdock");
  construct->add_option("--set", ca.set_path, "Validated Kerdock set file");
  construct->add_option("--frame", ca.frame_path, "Base frame (BFM) for --family file");
  construct->add_option("--kron", ca.kron, "none|hadamard:k|dft:r|r:r|file:path")->capture_default_str();
  construct->add_option("--name", ca.name, "Stem of the frame file")->capture_default_str();
  construct->add_flag("--save-set", ca.save_set, "Also write the generated Kerdock set");

  std::string analyze_path;
  bool gram_json = false;
  auto* analyze_cmd = app.add_subcommand("analyze", "Coherence report and gram map of a BFM frame");
  analyze_cmd->add_option("frame", analyze_path, "BFM file")->required();
  analyze_cmd->add_flag("--gram-json", gram_json, "Embed the gram map in the JSON report");

  BoundInputs bi;
  std::string field_name = "complex";
  auto* bounds = app.add_subcommand("bounds", "Every coherence and packing bound for (m, n, r)");
  bounds->add_option("--m", bi.m)->required();
  bounds->add_option("--n", bi.n)->required();
  bounds->add_option("--r", bi.r)->required();
  bounds->add_option("--field", field_name)->check(CLI::IsMember({"real", "complex"}))->capture_default_str();

  std::vector<double> betas;
  std::string grid_spec = "0.05:0.45:9";
  auto* threshold = app.add_subcommand("threshold", "Solve for a_hat(beta)");
  threshold->add_option("--beta", betas, "Explicit beta values");
  threshold->add_option("--grid", grid_spec, "lo:hi:count when --beta is absent")->capture_default_str();

  std::size_t rm_n = 200, rm_cap = 400;
  std::vector<std::size_t> rm_grid = {10, 20, 30, 40, 50, 60, 70, 80, 90};
  bool full_scale = false;
  auto* random_mu = app.add_subcommand("random-mu", "Worst-case coherence of random subspaces against theory");
  random_mu->add_option("--n", rm_n)->capture_default_str();
  random_mu->add_option("--r-grid", rm_grid)->delimiter(',');
  random_mu->add_option("--m-cap", rm_cap)->capture_default_str();
  random_mu->add_flag("--full", full_scale, "n = 1000, r = 50..450, 1000 trials unless --trials is given");

  FlipArgs fa;
  auto* flip_cmd = app.add_subcommand("flip", "Greedy sign flipping of a BFM frame");
  flip_cmd->add_option("frame", fa.frame, "BFM file")->required();
  flip_cmd->add_option("--variant", fa.variant)->check(CLI::IsMember({"spectral", "frobenius"}))->capture_default_str();
  flip_cmd->add_option("--c", fa.c, "Constant of the target nu <= c mu sqrt(r log m / n)")->capture_default_str();
  flip_cmd->add_option("--search-trials", fa.search_trials, "Also run a best-of-N random sign search");
  flip_cmd->add_flag("--steps", fa.steps, "Include per-step norms");

  std::size_t ft_n = 128, ft_m = 2048;
  std::vector<std::size_t> ft_r = {1, 2, 3};
  std::string ft_variant = "spectral";
  auto* flip_table = app.add_subcommand("flip-table", "nu before and after flipping for random frames");
  flip_table->add_option("--n", ft_n)->capture_default_str();
  flip_table->add_option("--m", ft_m)->capture_default_str();
  flip_table->add_option("--r-set", ft_r)->delimiter(',');
  flip_table->add_option("--variant", ft_variant)->check(CLI::IsMember({"spectral", "frobenius"}))->capture_default_str();

  CsArgs cs;
  double snr = 0.0;
  auto* cs_cmd = app.add_subcommand("cs", "Non-discovery proportion of one-step group thresholding");
  cs_cmd->add_option("--frame", cs.frames, "label=path, repeatable (default: Steiner(4) (x) Hadamard(1))");
  cs_cmd->add_flag("--no-random", cs.no_random, "Skip the random-subspace comparison");
  cs_cmd->add_option("--k-grid", cs.k_grid)->delimiter(',');
  cs_cmd->add_option("--dr", cs.dr, "Dynamic ranges")->delimiter(',');
  auto* snr_opt = cs_cmd->add_option("--snr-db", snr, "Add white Gaussian noise at this SNR");
  cs_cmd->add_flag("--complex-signal", cs.complex_signal);

  std::string manifest_path;
  auto* replay = app.add_subcommand("replay", "Re-run a manifest and compare outputs byte for byte");
  replay->add_option("manifest", manifest_path)->required();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }
  const bool out_dir_given = app.get_option("--out-dir")->count() > 0;
  if (out_dir_override) g.out_dir = *out_dir_override;

  if (replay->parsed()) return cmd_replay(manifest_path, g, out_dir_given);

  const auto t0 = std::chrono::steady_clock::now();
  Outputs out(g.out_dir);
  Run run;
  if (construct->parsed()) {
    run.sub = construct;
    cmd_construct(ca, g, out, run);
  } else if (analyze_cmd->parsed()) {
    run.sub = analyze_cmd;
    cmd_analyze(analyze_path, gram_json, g, out, run);
  } else if (bounds->parsed()) {
    run.sub = bounds;
    bi.field = field_from_string(field_name);
    cmd_bounds(bi, out, run);
  } else if (threshold->parsed()) {
    run.sub = threshold;
    cmd_threshold(betas.empty() ? parse_grid(grid_spec) : betas, g, out, run);
  } else if (random_mu->parsed()) {
    run.sub = random_mu;
    if (full_scale) {
      rm_n = 1000;
      if (random_mu->get_option("--r-grid")->count() == 0) rm_grid = {50, 100, 150, 200, 250, 300, 350, 400, 450};
      if (!g.trials) g.trials = 1000;
    }
    cmd_random_mu(rm_n, rm_grid, rm_cap, g, out, run);
  } else if (flip_cmd->parsed()) {
    run.sub = flip_cmd;
    cmd_flip(fa, g, out, run);
  } else if (flip_table->parsed()) {
    run.sub = flip_table;
    cmd_flip_table(ft_n, ft_m, ft_r, ft_variant, g, out, run);
  } else if (cs_cmd->parsed()) {
    run.sub = cs_cmd;
    if (snr_opt->count() > 0) cs.snr_db = snr;
    cmd_cs(cs, g, out, run);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json params = option_values(run.sub);
  params["seed"] = g.seed;
  params["trials"] = g.trials ? json(*g.trials) : json(nullptr);
  params["format"] = g.format;
  params["threads"] = g.worker_count();
  json manifest{{"tool", "blockframe"},
                {"version", BLOCKCOH_VERSION},
                {"command", run.sub->get_name()},
                {"argv", args},
                {"parameters", params},
                {"seed", g.seed},
                {"out_dir", fs::absolute(out.dir()).lexically_normal().string()},
                {"outputs", out.names()},
                {"duration_s", secs}};
  {
    std::ofstream mf(out.dir() / "manifest.json");
    mf << manifest.dump(2) << '\n';
  }
  // A replay reports its own comparison, so the inner run stays silent.
  if (manifest_out) {
    *manifest_out = manifest;
    return 0;
  }
  if (!run.stdout_text.empty()) {
    std::cout << run.stdout_text;
  } else {
    std::cout << run.result.dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return execute(args, std::nullopt, nullptr);
  } catch (const ConvergenceError& e) {
    std::cerr << "blockframe: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const Error& e) {
    std::cerr << "blockframe: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "blockframe: " << e.what() << '\n';
    return 1;
  }
}
