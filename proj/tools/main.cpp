#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include <sitelink/sitelink.hpp>

namespace {

using namespace sitelink;

std::string read_input_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

InputFormat resolve_format(const std::string& format, const std::string& path) {
  if (format == "fasta") return InputFormat::fasta;
  if (format == "raw") return InputFormat::raw;
  // auto: decide by extension, defaulting to fasta
  for (const char* ext : {".raw", ".txt", ".tsv"}) {
    if (path.size() >= std::string(ext).size() &&
        path.compare(path.size() - std::string(ext).size(), std::string(ext).size(), ext) == 0) {
      return InputFormat::raw;
    }
  }
  return InputFormat::fasta;
}

struct LoadedInput {
  System system;
  RunConfig config;
};

LoadedInput load_input(const std::string& input, const std::string& format,
                       const std::string& alphabet) {
  const InputFormat fmt = resolve_format(format, input);
  std::optional<Alphabet> declared;
  if (!alphabet.empty()) declared = Alphabet(alphabet);
  ParseResult parsed = parse_input(read_input_text(input), fmt, declared);
  RunConfig config;
  config.input = input;
  config.format = fmt == InputFormat::fasta ? "fasta" : "raw";
  config.alphabet = parsed.system.alphabet().symbols();
  config.alphabet_source = alphabet_source_name(parsed.alphabet_source);
  return LoadedInput{std::move(parsed.system), std::move(config)};
}

// --links values: "all", "lowest-frac=F", or "file=PATH" with one 1-based
// "i j" or "i,j" pair per line.
LinkSet resolve_links(const std::string& spec, const System& sys, int threads) {
  if (spec == "all") return LinkSet::all(sys.cols());
  constexpr std::string_view frac_tag = "lowest-frac=";
  constexpr std::string_view file_tag = "file=";
  if (spec.rfind(frac_tag, 0) == 0) {
    double fraction = 0.0;
    try {
      fraction = std::stod(spec.substr(frac_tag.size()));
    } catch (const std::exception&) {
      throw config_error("cannot parse link fraction in '" + spec + "'");
    }
    return rank_links(sys, fraction, threads);
  }
  if (spec.rfind(file_tag, 0) == 0) {
    const std::string path = spec.substr(file_tag.size());
    std::ifstream in(path);
    if (!in) throw input_error("cannot open links file: " + path);
    std::vector<Link> links;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      for (char& c : line) {
        if (c == ',') c = ' ';
      }
      std::istringstream fields(line);
      int i = 0, j = 0;
      if (!(fields >> i >> j)) {
        throw input_error("links file " + path + ": cannot parse line " +
                          std::to_string(line_no));
      }
      links.emplace_back(i - 1, j - 1);
    }
    if (links.empty()) throw input_error("links file " + path + " contains no links");
    return LinkSet::of(std::move(links), sys.cols());
  }
  throw config_error("unknown --links value '" + spec +
                     "' (expected all, lowest-frac=F, or file=PATH)");
}

Method resolve_method(const std::string& name) {
  if (name == "closed" || name == "closed_form") return Method::closed_form;
  if (name == "exact") return Method::exact;
  if (name == "mc" || name == "monte_carlo") return Method::monte_carlo;
  throw config_error("unknown method '" + name + "' (expected closed, exact, or mc)");
}

void write_output(const std::string& path, const std::string& data) {
  if (path.empty()) {
    std::cout << data;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open output file: " + path);
  out << data;
}

// ---------------------------------------------------------------------------
// selfcheck: runs the library's worked examples and prints pass/fail lines.
// ---------------------------------------------------------------------------

struct SelfCheck {
  int failures = 0;

  void check(const std::string& name, bool ok, const std::string& detail = "") {
    if (ok) {
      std::cout << "[ ok ] " << name << "\n";
    } else {
      ++failures;
      std::cout << "[FAIL] " << name << (detail.empty() ? "" : ": " + detail) << "\n";
    }
  }

  void close(const std::string& name, double got, double expected, double tol = 1e-12) {
    const bool ok = std::abs(got - expected) <= tol;
    std::ostringstream detail;
    detail.precision(17);
    detail << "expected " << expected << ", got " << got;
    check(name, ok, detail.str());
  }

  template <class Fn>
  void throws(const std::string& name, Fn&& fn) {
    bool threw = false;
    try {
      fn();
    } catch (const error&) {
      threw = true;
    }
    check(name, threw, "expected an error");
  }
};

System worked_example() {
  // columns (0,0,1) and (0,1,1) over a binary alphabet
  return System::from_rows({"00", "01", "11"}, Alphabet("01"));
}

System uniform_4x2() { return System::from_rows({"00", "01", "10", "11"}, Alphabet("01")); }

System pure_3x2() { return System::from_rows({"01", "10", "01"}, Alphabet("01")); }

int run_selfcheck() {
  SelfCheck sc;
  const double ln2 = std::log(2.0);

  {
    const auto sys = System::from_rows({"00", "01", "10", "11"}, Alphabet("01"));
    const auto lc = link_counts(sys, 0, 1);
    sc.check("link_counts balanced 4x2 joint",
             lc.joint == std::vector<std::int64_t>({1, 1, 1, 1}) &&
                 lc.left == std::vector<std::int64_t>({2, 2}) &&
                 lc.right == std::vector<std::int64_t>({2, 2}) && lc.total == 4);
  }
  {
    const auto lc = link_counts(worked_example(), 0, 1);
    sc.check("link_counts worked example",
             lc.joint == std::vector<std::int64_t>({1, 1, 0, 1}) &&
                 lc.left == std::vector<std::int64_t>({2, 1}) &&
                 lc.right == std::vector<std::int64_t>({1, 2}));
  }
  {
    const auto sys = worked_example();
    const auto removed = remove_rows(sys, RowMask::of({1}));
    sc.check("remove_rows keeps labels",
             removed.rows() == 2 && removed.row_label(0) == 1 && removed.row_label(1) == 3);
    sc.throws("remove_rows rejects removing every row",
              [&] { (void)remove_rows(sys, RowMask::of({0, 1, 2})); });
  }
  sc.check("is_pure swap link", is_pure(link_counts(pure_3x2(), 0, 1)));
  sc.check("is_pure rejects non-function", !is_pure(link_counts(worked_example(), 0, 1)));
  sc.check("is_pure partial map", is_pure(link_counts(System::from_rows({"01", "01", "01"}, Alphabet("01")), 0, 1)));
  sc.check("is_uniform balanced", is_uniform(link_counts(uniform_4x2(), 0, 1)));
  sc.check("is_uniform rejects diagonal",
           !is_uniform(LinkCounts::from_joint(2, std::vector<std::int64_t>({2, 0, 0, 2}))));
  sc.check("is_uniform needs divisibility",
           !is_uniform(LinkCounts::from_joint(2, std::vector<std::int64_t>({2, 2, 1, 1}))));

  sc.close("entropy uniform pair", entropy(std::vector<std::int64_t>({2, 2}), 4), ln2);
  sc.close("entropy degenerate", entropy(std::vector<std::int64_t>({4}), 4), 0.0);
  sc.close("entropy [1,3]", entropy(std::vector<std::int64_t>({1, 3}), 4),
           std::log(4.0) - 0.75 * std::log(3.0));

  sc.close("vi pure", vi_distance(link_counts(pure_3x2(), 0, 1)), 0.0);
  sc.close("vi uniform 4x2", vi_distance(link_counts(uniform_4x2(), 0, 1)), 2.0 * ln2);
  sc.close("vi worked example", vi_distance(link_counts(worked_example(), 0, 1)),
           4.0 / 3.0 * ln2);

  sc.close("row MI [2,1]", row_mutual_information(std::vector<std::int64_t>({2, 1}), 3),
           std::log(1.5) - ln2 / 3.0);
  sc.close("row MI degenerate", row_mutual_information(std::vector<std::int64_t>({5}), 5), 0.0);
  sc.close("row MI [2,2]", row_mutual_information(std::vector<std::int64_t>({2, 2}), 4),
           std::log(4.0 / 3.0) - ln2 / 3.0);

  sc.close("g(1)", special_g(1.0), 0.0);
  sc.close("g(2)", special_g(2.0), ln2);
  sc.check("g increasing", special_g(3.0) > special_g(2.0));
  sc.close("G(2)", special_G(2.0), 2.0 * ln2);
  sc.close("H(4,2)", special_H(4.0, 2), 12.0 * std::log(4.0 / 3.0) - 4.0 * ln2);

  sc.close("lambda worked example", lambda_statistic(link_counts(worked_example(), 0, 1)),
           4.0 / 3.0 * ln2);
  sc.close("lambda uniform 4x2", lambda_statistic(link_counts(uniform_4x2(), 0, 1)), 2.0 * ln2);
  sc.close("lambda pure", lambda_statistic(link_counts(pure_3x2(), 0, 1)), 0.0);

  sc.close("closed form worked example",
           potential_closed_form_s1(link_counts(worked_example(), 0, 1)).value, 2.0 / 3.0 * ln2);
  sc.close("closed form uniform 4x2",
           potential_closed_form_s1(link_counts(uniform_4x2(), 0, 1)).value, 2.0 / 3.0 * ln2);
  sc.check("closed form pure is exactly zero",
           potential_closed_form_s1(link_counts(pure_3x2(), 0, 1)).value == 0.0);

  sc.close("exact s=1 worked example", potential_exact(worked_example(), 0, 1, 1).value,
           2.0 / 3.0 * ln2);
  sc.close("exact s=2 uniform 4x2", potential_exact(uniform_4x2(), 0, 1, 2).value,
           4.0 / 3.0 * ln2);
  {
    bool all_zero = true;
    for (int s = 1; s <= 2; ++s) all_zero &= potential_exact(pure_3x2(), 0, 1, s).value == 0.0;
    sc.check("exact pure all s", all_zero);
  }

  {
    const auto mc1 = potential_mc(uniform_4x2(), 0, 1, 1, 10'000, 42);
    const auto mc2 = potential_mc(uniform_4x2(), 0, 1, 1, 10'000, 42);
    sc.check("mc deterministic per seed",
             mc1.value == mc2.value && mc1.std_error == mc2.std_error);
    sc.check("mc near exact", std::abs(mc1.value - 2.0 / 3.0 * ln2) <= 4.0 * mc1.std_error);
    const auto pure = potential_mc(pure_3x2(), 0, 1, 1, 100, 7);
    sc.check("mc pure is exactly zero", pure.value == 0.0 && pure.std_error == 0.0);
  }

  sc.close("ground state bound (4,2)", ground_state_bound(4, 2), 2.0 / 3.0 * ln2);
  sc.check("ground state bound decreasing in k",
           ground_state_bound(8, 2) < ground_state_bound(4, 2));
  sc.throws("ground state bound needs divisibility", [] { (void)ground_state_bound(6, 2); });
  sc.close("purity gain bound p=0.5", purity_gain_bound(4, 2, 0.5), ln2 / 3.0);
  sc.close("purity gain bound p=1", purity_gain_bound(4, 2, 1.0), 0.0);
  sc.close("purity gain bound p=0", purity_gain_bound(4, 2, 0.0), 2.0 / 3.0 * ln2);

  {
    // link (0,1) pure, the others not
    const auto sys = System::from_rows({"010", "101", "010", "100"}, Alphabet("01"));
    const auto picked = rank_links(sys, 0.01);
    sc.check("rank_links picks the pure link",
             picked.size() == 1 && picked[0] == Link{0, 1});
    sc.check("rank_links fraction one keeps all", rank_links(sys, 1.0).size() == 3);
  }
  {
    const auto sys = worked_example();
    const auto links = LinkSet::all(2);
    sc.close("q_average worked example", q_average(sys, links), 4.0 / 3.0 * ln2);
    sc.close("q_drop row label 2", q_drop(sys, links, 1), 4.0 / 3.0 * ln2);
    sc.close("q_drop row label 1", q_drop(sys, links, 0), ln2 / 3.0);
    const auto [row, q] = argmax_drop(sys, links);
    sc.check("argmax_drop picks row label 2", row == 1);
    sc.close("argmax_drop value", q, 4.0 / 3.0 * ln2);

    const auto trace = purge(sys, LinkPolicy::fixed(links), StopRule{.q_threshold = 0.0});
    sc.check("purge one step to purity",
             trace.steps.size() == 1 && trace.steps[0].row_label == 2 &&
                 trace.stop_reason == StopReason::all_links_pure);
    if (!trace.steps.empty()) {
      sc.close("purge step drop", trace.steps[0].q_drop, 4.0 / 3.0 * ln2);
    }
    const auto none = purge(sys, LinkPolicy::fixed(links), StopRule{.max_removals = 0});
    sc.check("purge zero removals",
             none.steps.empty() && none.stop_reason == StopReason::max_removals);
    const auto pure_trace =
        purge(pure_3x2(), LinkPolicy::fixed(LinkSet::all(2)), StopRule{.q_threshold = 0.0});
    sc.check("purge all-pure start",
             pure_trace.steps.empty() && pure_trace.stop_reason == StopReason::all_links_pure);
  }

  std::cout << (sc.failures == 0 ? "selfcheck passed" : "selfcheck FAILED") << "\n";
  return sc.failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sitelink: information-theoretic site-linkage analysis of aligned symbol data"};
  app.require_subcommand(1);

  std::string input = "-";
  std::string format = "auto";
  std::string alphabet;
  int threads = 1;
  std::string out_path;

  auto add_input_options = [&](CLI::App* cmd) {
    cmd->add_option("--input", input, "input path, or - for stdin")->capture_default_str();
    cmd->add_option("--format", format, "input format: auto, fasta, raw")
        ->check(CLI::IsMember({"auto", "fasta", "raw"}))
        ->capture_default_str();
    cmd->add_option("--alphabet", alphabet,
                    "declared alphabet symbols (default: inferred from the input)");
    cmd->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber)
        ->capture_default_str();
  };

  int site_i = 0, site_j = 0;
  int s = 1;
  std::string method = "closed";
  std::uint64_t samples = 10'000;
  std::uint64_t seed = 0;
  std::uint64_t budget = 10'000'000;
  std::string links_spec = "all";
  double fraction = 0.005;
  std::optional<double> tau;
  std::optional<int> max_removals;
  bool refresh = false;
  std::string gen_spec_path;
  int gen_rows = 0, gen_cols = 0;
  std::string gen_alphabet = "ACGU";
  std::string gen_format = "raw";

  auto* cmd_distance = app.add_subcommand("distance", "D-distance of one link, in nats");
  add_input_options(cmd_distance);
  cmd_distance->add_option("--i", site_i, "first site (1-based)")->required();
  cmd_distance->add_option("--j", site_j, "second site (1-based)")->required();

  auto* cmd_potential = app.add_subcommand("potential", "link potential of one link");
  add_input_options(cmd_potential);
  cmd_potential->add_option("--i", site_i, "first site (1-based)")->required();
  cmd_potential->add_option("--j", site_j, "second site (1-based)")->required();
  cmd_potential->add_option("--s", s, "rows removed per subset")->capture_default_str();
  cmd_potential->add_option("--method", method, "closed, exact, or mc")->capture_default_str();
  cmd_potential->add_option("--samples", samples, "Monte Carlo samples")->capture_default_str();
  cmd_potential->add_option("--seed", seed, "Monte Carlo seed")->capture_default_str();
  cmd_potential->add_option("--budget", budget, "exact enumeration budget")->capture_default_str();
  cmd_potential->add_option("--out", out_path, "output path (default: stdout)");

  auto* cmd_spectrum = app.add_subcommand("spectrum", "spectrum CSV over a link set");
  add_input_options(cmd_spectrum);
  cmd_spectrum->add_option("--links", links_spec, "all, lowest-frac=F, or file=PATH")
      ->capture_default_str();
  cmd_spectrum->add_option("--s", s, "rows removed per subset")->capture_default_str();
  cmd_spectrum->add_option("--method", method, "closed, exact, or mc")->capture_default_str();
  cmd_spectrum->add_option("--samples", samples, "Monte Carlo samples")->capture_default_str();
  cmd_spectrum->add_option("--seed", seed, "Monte Carlo seed")->capture_default_str();
  cmd_spectrum->add_option("--budget", budget, "exact enumeration budget")->capture_default_str();
  cmd_spectrum->add_option("--out", out_path, "output path (default: stdout)");

  auto* cmd_rank = app.add_subcommand("rank-links", "lowest-distance links as CSV");
  add_input_options(cmd_rank);
  cmd_rank->add_option("--fraction", fraction, "fraction of links to keep, in (0,1]")
      ->capture_default_str();
  cmd_rank->add_option("--out", out_path, "output path (default: stdout)");

  auto* cmd_purge = app.add_subcommand("purge", "greedy row removal; JSON trace");
  add_input_options(cmd_purge);
  cmd_purge->add_option("--links", links_spec, "all, lowest-frac=F, or file=PATH")
      ->capture_default_str();
  cmd_purge->add_option("--tau", tau, "stop once average distance q <= tau");
  cmd_purge->add_option("--max-removals", max_removals, "stop after this many removals");
  cmd_purge->add_flag("--refresh", refresh,
                      "re-rank the link set on the surviving system before each step "
                      "(requires --links lowest-frac=F)");
  cmd_purge->add_option("--out", out_path, "output path (default: stdout)");

  auto* cmd_generate = app.add_subcommand("generate", "synthetic system with planted links");
  cmd_generate->add_option("--spec", gen_spec_path, "synthetic spec JSON path");
  cmd_generate->add_option("--rows", gen_rows, "rows (when no --spec)");
  cmd_generate->add_option("--cols", gen_cols, "columns (when no --spec)");
  cmd_generate->add_option("--alphabet", gen_alphabet, "alphabet (when no --spec)")
      ->capture_default_str();
  cmd_generate->add_option("--seed", seed, "generator seed")->capture_default_str();
  cmd_generate->add_option("--format", gen_format, "output format: raw or fasta")
      ->check(CLI::IsMember({"raw", "fasta"}))
      ->capture_default_str();
  cmd_generate->add_option("--out", out_path, "output path (default: stdout)");

  auto* cmd_selfcheck =
      app.add_subcommand("selfcheck", "run the built-in worked examples and report pass/fail");

  try {
    app.parse(argc, argv);

    if (app.got_subcommand(cmd_selfcheck)) return run_selfcheck();

    if (app.got_subcommand(cmd_generate)) {
      SyntheticSpec spec;
      RunConfig config;
      if (!gen_spec_path.empty()) {
        spec = synthetic_spec_from_json(read_input_text(gen_spec_path));
        if (cmd_generate->count("--seed") > 0) spec.seed = seed;
        config.input = gen_spec_path;
      } else {
        if (gen_rows < 1 || gen_cols < 1) {
          throw config_error("generate requires --spec, or both --rows and --cols");
        }
        spec.rows = gen_rows;
        spec.cols = gen_cols;
        spec.alphabet = Alphabet(gen_alphabet);
        spec.seed = seed;
        spec.blocks.push_back(BlockSpec{.row_count = gen_rows, .links = {}});
      }
      const System sys = generate(spec);
      config.alphabet = sys.alphabet().symbols();
      config.alphabet_source = "declared";
      config.seed = spec.seed;
      config.output_format = gen_format;
      config.output_path = out_path;
      write_output(out_path,
                   gen_format == "raw" ? emit_system_raw(sys, config) : emit_system_fasta(sys));
      return 0;
    }

    LoadedInput loaded = load_input(input, format, alphabet);
    const System& sys = loaded.system;
    RunConfig config = std::move(loaded.config);
    config.output_path = out_path;

    if (app.got_subcommand(cmd_distance)) {
      const auto lc = link_counts(sys, site_i - 1, site_j - 1);
      std::cout << format_double(vi_distance(lc)) << "\n";
      return 0;
    }

    if (app.got_subcommand(cmd_potential)) {
      const Method m = resolve_method(method);
      const int i = site_i - 1, j = site_j - 1;
      const LinkCounts lc = link_counts(sys, i, j);
      PotentialEstimate pot;
      switch (m) {
        case Method::closed_form:
          if (s != 1) throw config_error("the closed_form method is defined for s = 1 only");
          pot = potential_closed_form_s1(lc);
          break;
        case Method::exact:
          pot = potential_exact(sys, i, j, s, {budget});
          break;
        case Method::monte_carlo:
          pot = potential_mc(sys, i, j, s, samples, seed);
          break;
      }
      config.s = s;
      config.method = method_name(m);
      if (m == Method::monte_carlo) {
        config.samples = samples;
        config.seed = seed;
      }
      if (m == Method::exact) config.subset_budget = budget;
      config.output_format = "csv";
      const SpectrumEntry entry{Link{i, j}, vi_distance(lc), pot};
      write_output(out_path, emit_spectrum_csv(std::vector<SpectrumEntry>{entry}, config));
      return 0;
    }

    if (app.got_subcommand(cmd_spectrum)) {
      const Method m = resolve_method(method);
      const LinkSet links = resolve_links(links_spec, sys, threads);
      MethodSpec mspec{.method = m, .samples = samples, .seed = seed, .subset_budget = budget};
      const auto entries = site_spectrum(sys, links, s, mspec, threads);
      config.links = links_spec;
      config.s = s;
      config.method = method_name(m);
      if (m == Method::monte_carlo) {
        config.samples = samples;
        config.seed = seed;
      }
      if (m == Method::exact) config.subset_budget = budget;
      config.output_format = "csv";
      write_output(out_path, emit_spectrum_csv(entries, config));
      return 0;
    }

    if (app.got_subcommand(cmd_rank)) {
      const LinkSet links = rank_links(sys, fraction, threads);
      std::vector<double> dist(links.size());
      for (std::size_t t = 0; t < links.size(); ++t) {
        dist[t] = vi_distance(link_counts(sys, links[t].first, links[t].second));
      }
      config.links = "lowest-frac=" + format_double(fraction);
      config.output_format = "csv";
      write_output(out_path, emit_links_csv(links.links(), dist, config));
      return 0;
    }

    if (app.got_subcommand(cmd_purge)) {
      if (refresh && links_spec.rfind("lowest-frac=", 0) != 0) {
        throw config_error("--refresh requires --links lowest-frac=F");
      }
      LinkPolicy policy = [&] {
        if (refresh) {
          double f = 0.0;
          try {
            f = std::stod(links_spec.substr(std::string("lowest-frac=").size()));
          } catch (const std::exception&) {
            throw config_error("cannot parse link fraction in '" + links_spec + "'");
          }
          return LinkPolicy::refresh(f);
        }
        return LinkPolicy::fixed(resolve_links(links_spec, sys, threads));
      }();
      const StopRule stop{.q_threshold = tau, .max_removals = max_removals};
      const RemovalTrace trace = purge(sys, policy, stop, threads);
      config.links = links_spec;
      config.purge_threshold = tau;
      config.purge_max_removals = max_removals;
      config.purge_refresh = refresh;
      config.output_format = "json";
      write_output(out_path, emit_trace_json(trace, config));
      return 0;
    }

    throw config_error("no subcommand selected");
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
