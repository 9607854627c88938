// clakit: generate, verify and benchmark carry-lookahead adder netlists.
//
// Exit codes: 0 success / verification pass, 1 verification failure,
// 2 usage error, 3 build or library error.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "clakit/genarch.hpp"
#include "clakit/logicsim.hpp"
#include "clakit/metrics.hpp"
#include "clakit/netlist.hpp"
#include "clakit/timing.hpp"

using namespace clakit;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBuild = 3;

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

LibraryRef resolve_library(std::string choice) {
  if (choice.empty()) {
    const char* env = std::getenv("CLAKIT_LIB");
    choice = env ? env : "builtin";
  }
  if (choice == "builtin" || choice == "unit")
    return std::make_shared<CellLibrary>(builtin_unit_library());
  if (choice == "ideal")
    return std::make_shared<CellLibrary>(builtin_unit_library(LibraryMode::ideal));
  return std::make_shared<CellLibrary>(load_library(choice));
}

GeneratorStyle resolve_style(const std::string& style) {
  if (style == "decomposed") return GeneratorStyle::decomposed;
  if (style == "basic") return GeneratorStyle::basic;
  throw usage_error("unknown --style '" + style + "' (want basic or decomposed)");
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
}

Netlist build_checked(const std::string& arch, GeneratorStyle style, const LibraryRef& lib) {
  Netlist nl = build_adder(parse_adder_spec(arch, style), lib);
  ValidationReport report = validate(nl);
  if (!report.ok())
    throw build_error("generated netlist failed validation: " + report.summary());
  return nl;
}

// --- vector sources ---------------------------------------------------------

std::vector<InputVector> vectors_from_file(const Netlist& nl, unsigned width,
                                           const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usage_error("cannot open vector file '" + path + "'");
  AdderPortMap ports = find_adder_ports(nl, width);
  const auto& pis = nl.primary_inputs();
  std::vector<size_t> slot(nl.net_count(), 0);
  for (size_t i = 0; i < pis.size(); ++i) slot[pis[i]] = i;

  std::vector<InputVector> vectors;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    uint64_t a = 0, b = 0;
    int cin = 0;
    if (std::sscanf(line.c_str(), "A=%llx B=%llx Cin=%d",
                    reinterpret_cast<unsigned long long*>(&a),
                    reinterpret_cast<unsigned long long*>(&b), &cin) != 3)
      throw usage_error(path + ":" + std::to_string(lineno) +
                        ": expected 'A=<hex> B=<hex> Cin=<0|1>'");
    InputVector v(pis.size(), 0);
    for (unsigned i = 0; i < width; ++i) {
      v[slot[ports.a[i]]] = (a >> i) & 1;
      v[slot[ports.b[i]]] = (b >> i) & 1;
    }
    v[slot[ports.cin]] = cin ? 1 : 0;
    vectors.push_back(std::move(v));
  }
  if (vectors.empty()) throw usage_error("vector file '" + path + "' holds no vectors");
  return vectors;
}

struct VectorSource {
  enum class Kind { random, file } kind = Kind::random;
  uint64_t count = 0, seed = 0;
  std::string path;
};

VectorSource parse_vector_source(const std::string& text) {
  VectorSource src;
  if (text.rfind("random:", 0) == 0) {
    std::string rest = text.substr(7);
    auto colon = rest.find(':');
    if (colon == std::string::npos)
      throw usage_error("--vectors random needs a seed: random:<count>:<seed>");
    try {
      src.count = std::stoull(rest.substr(0, colon));
      src.seed = std::stoull(rest.substr(colon + 1));
    } catch (const std::exception&) {
      throw usage_error("bad --vectors '" + text + "'");
    }
    if (src.count == 0) throw usage_error("--vectors random needs a positive count");
    return src;
  }
  if (text.rfind("file:", 0) == 0) {
    src.kind = VectorSource::Kind::file;
    src.path = text.substr(5);
    if (src.path.empty()) throw usage_error("--vectors file needs a path: file:<path>");
    return src;
  }
  throw usage_error("bad --vectors '" + text + "' (want random:<count>:<seed> or file:<path>)");
}

// --- CSV row sources --------------------------------------------------------

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

double field_or_nan(const std::string& s) {
  if (s.empty()) return std::nan("");
  size_t pos = 0;
  double d = std::stod(s, &pos);
  if (pos != s.size()) throw usage_error("bad CSV number '" + s + "'");
  return d;
}

/// Accepts either the paper-mode input schema (name,power_uw,delay_ns,
/// area_um2) or the bench output schema (name,power,delay,area,fom).
/// Missing fields stay NaN; the FOM is computed whenever power, delay
/// and area are all present.
std::vector<MetricsReport> load_metrics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usage_error("cannot open CSV '" + path + "'");
  std::string header;
  if (!std::getline(in, header)) throw usage_error("CSV '" + path + "' is empty");
  bool paper_schema = header == "name,power_uw,delay_ns,area_um2";
  if (!paper_schema && header != "name,power,delay,area,fom")
    throw usage_error("CSV '" + path + "' has unknown header '" + header + "'");

  std::vector<MetricsReport> rows;
  std::string line;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = split_csv(line);
    if (fields.size() != (paper_schema ? 4u : 5u))
      throw usage_error(path + ":" + std::to_string(lineno) + ": wrong column count");
    MetricsReport r;
    r.name = fields[0];
    r.power = field_or_nan(fields[1]);
    r.delay = field_or_nan(fields[2]);
    r.area = field_or_nan(fields[3]);
    r.fom = paper_schema ? std::nan("") : field_or_nan(fields[4]);
    if (std::isnan(r.fom) && !std::isnan(r.power) && !std::isnan(r.delay) && !std::isnan(r.area))
      r.fom = compute_fom(r.power, r.delay, r.area);
    rows.push_back(std::move(r));
  }
  return rows;
}

// --- commands ---------------------------------------------------------------

struct CommonOpts {
  std::string arch;
  std::string lib;
  std::string style = "decomposed";
};

int cmd_generate(const CommonOpts& common, const std::string& format, const std::string& out) {
  Netlist nl = build_checked(common.arch, resolve_style(common.style),
                             resolve_library(common.lib));
  std::string text;
  if (format == "verilog")
    text = export_verilog(nl);
  else if (format == "dot")
    text = export_dot(nl);
  else if (format == "json")
    text = export_json(nl);
  else
    throw usage_error("unknown --format '" + format + "' (want verilog, dot or json)");
  write_text(out, text);
  return kExitPass;
}

int cmd_verify(const CommonOpts& common, bool exhaustive, uint64_t random_count,
               std::optional<uint64_t> seed) {
  AdderSpec spec = parse_adder_spec(common.arch, resolve_style(common.style));
  const unsigned width = spec.total_width();
  VerifyMode mode;
  if (exhaustive) {
    if (width > kMaxExhaustiveWidth)
      throw usage_error("exhaustive verification of a " + std::to_string(width) +
                        "-bit adder needs 2^" + std::to_string(2 * width + 1) +
                        " vectors; the cap is n <= " + std::to_string(kMaxExhaustiveWidth) +
                        ". Use --random <count> --seed <seed> instead.");
    mode = VerifyMode::exhaustive();
  } else {
    if (random_count == 0) throw usage_error("choose --exhaustive or --random <count>");
    if (!seed) throw usage_error("--random needs --seed for reproducibility");
    mode = VerifyMode::random(random_count, *seed);
  }

  Netlist nl = build_adder(spec, resolve_library(common.lib));
  VerifyResult result = verify_adder(nl, width, mode);
  if (result.pass) {
    std::cout << "PASS " << nl.name() << ": " << result.vectors_run
              << " vectors match integer addition\n";
    return kExitPass;
  }
  std::cout << "FAIL " << nl.name() << " after " << result.vectors_run
            << " vectors: " << result.counterexample->to_string(width) << "\n";
  return kExitVerifyFail;
}

int cmd_bench(const std::vector<std::string>& archs, bool all, const CommonOpts& common,
              const std::string& vectors_text, double period, const std::string& paper_csv,
              const std::string& out, const std::string& svg, const std::string& vcd_dir) {
  std::vector<MetricsReport> rows;

  if (!paper_csv.empty()) {
    rows = load_metrics_csv(paper_csv);
    for (auto& r : rows)
      if (std::isnan(r.fom))
        throw usage_error("paper-mode row '" + r.name + "' is missing power, delay or area");
  } else {
    std::vector<AdderSpec> specs;
    GeneratorStyle style = resolve_style(common.style);
    if (all)
      specs = named_specs();
    else if (!archs.empty())
      for (const auto& a : archs) specs.push_back(parse_adder_spec(a, style));
    else
      throw usage_error("bench needs --all, --arch or --paper-mode");
    if (vectors_text.empty())
      throw usage_error("bench needs exactly one vector source (--vectors) to estimate power");
    if (period <= 0) throw usage_error("--period must be positive");
    VectorSource src = parse_vector_source(vectors_text);

    LibraryRef lib = resolve_library(common.lib);
    for (const auto& spec : specs) {
      Netlist nl = build_adder(spec, lib);
      ValidationReport report = validate(nl);
      if (!report.ok())
        throw build_error("netlist '" + nl.name() + "' failed validation: " + report.summary());
      unsigned width = spec.total_width();
      std::vector<InputVector> vectors =
          src.kind == VectorSource::Kind::random
              ? random_adder_vectors(nl, width, src.count, src.seed)
              : vectors_from_file(nl, width, src.path);
      rows.push_back(evaluate_design(nl, vectors, period));
      if (!vcd_dir.empty()) {
        SimTrace trace = run_sequence(nl, vectors, period);
        std::filesystem::create_directories(vcd_dir);
        dump_vcd(trace, nl, (std::filesystem::path(vcd_dir) / (nl.name() + ".vcd")).string());
      }
    }
  }

  std::sort(rows.begin(), rows.end(),
            [](const MetricsReport& a, const MetricsReport& b) { return a.name < b.name; });
  write_text(out, metrics_csv(rows));
  if (!svg.empty()) write_text(svg, fom_svg(rows));
  return kExitPass;
}

int cmd_compare(const std::string& baseline, const std::string& candidate,
                const std::vector<std::string>& sources, const std::string& csv_out) {
  if (sources.empty()) throw usage_error("compare needs at least one --source CSV");
  std::map<std::string, MetricsReport> by_name;
  for (const auto& path : sources)
    for (auto& row : load_metrics_csv(path)) {
      if (by_name.count(row.name))
        throw usage_error("design '" + row.name + "' appears in more than one source");
      by_name.emplace(row.name, std::move(row));
    }
  auto find = [&by_name](const std::string& name) -> const MetricsReport& {
    auto it = by_name.find(name);
    if (it == by_name.end()) throw usage_error("design '" + name + "' not found in sources");
    return it->second;
  };
  ComparisonRow row = compare(find(baseline), find(candidate));
  std::cout << comparison_table(row);
  if (!csv_out.empty()) write_text(csv_out, comparison_csv({row}));
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gate-level carry-lookahead adder synthesis and analysis"};
  app.require_subcommand(1);

  CommonOpts common;
  auto add_common = [&common](CLI::App* cmd, bool need_arch) {
    auto* arch = cmd->add_option("--arch", common.arch,
                                 "architecture: named alias (homogeneous-ccla, hybrid-scbcla-4, "
                                 "...) or kind:width[*repeat] list, LSB first");
    if (need_arch) arch->required();
    cmd->add_option("--lib", common.lib,
                    "cell library: builtin, ideal, or a library file path "
                    "(default: $CLAKIT_LIB or builtin)");
    cmd->add_option("--style", common.style, "generator style: basic or decomposed")
        ->capture_default_str();
  };

  // generate
  auto* generate = app.add_subcommand("generate", "build a netlist and export it");
  std::string format = "json", out_path = "-";
  add_common(generate, true);
  generate->add_option("--format", format, "verilog, dot or json")->capture_default_str();
  generate->add_option("--out", out_path, "output file ('-' for stdout)")->capture_default_str();

  // verify
  auto* verify = app.add_subcommand("verify", "check an adder against integer addition");
  bool exhaustive = false;
  uint64_t random_count = 0;
  std::optional<uint64_t> seed;
  add_common(verify, true);
  verify->add_flag("--exhaustive", exhaustive, "all 2^(2n+1) input vectors (n <= 10)");
  verify->add_option("--random", random_count, "number of random vectors");
  verify->add_option("--seed", seed, "PRNG seed for --random");

  // bench
  auto* bench = app.add_subcommand("bench", "power/delay/area/FOM table for designs");
  bool all = false;
  std::vector<std::string> archs;
  std::string vectors_text, paper_csv, svg_path, vcd_dir, bench_out = "-";
  double period = 5.0;
  bench->add_flag("--all", all, "benchmark the ten canonical 32-bit designs");
  bench->add_option("--arch", archs, "architecture(s) to benchmark");
  bench->add_option("--lib", common.lib, "cell library (default: $CLAKIT_LIB or builtin)");
  bench->add_option("--style", common.style, "generator style for parsed --arch specs")
      ->capture_default_str();
  bench->add_option("--vectors", vectors_text, "random:<count>:<seed> or file:<path>");
  bench->add_option("--period", period, "vector interval in library time units")
      ->capture_default_str();
  bench->add_option("--paper-mode", paper_csv,
                    "compute FOMs from a name,power_uw,delay_ns,area_um2 CSV instead of "
                    "simulating")
      ->excludes("--vectors")
      ->excludes("--all")
      ->excludes("--arch");
  bench->add_option("--out", bench_out, "CSV output ('-' for stdout)")->capture_default_str();
  bench->add_option("--svg", svg_path, "also write an SVG bar chart of the FOMs");
  bench->add_option("--vcd-dir", vcd_dir, "dump one VCD per design into this directory");

  // compare
  auto* cmp = app.add_subcommand("compare", "percentage comparison of two designs");
  std::string baseline, candidate, cmp_csv;
  std::vector<std::string> sources;
  cmp->add_option("--baseline", baseline)->required();
  cmp->add_option("--candidate", candidate)->required();
  cmp->add_option("--source", sources, "metrics CSV (bench output or paper tables)");
  cmp->add_option("--csv", cmp_csv, "also write the comparison as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (generate->parsed()) return cmd_generate(common, format, out_path);
    if (verify->parsed()) return cmd_verify(common, exhaustive, random_count, seed);
    if (bench->parsed())
      return cmd_bench(archs, all, common, vectors_text, period, paper_csv, bench_out, svg_path,
                       vcd_dir);
    if (cmp->parsed()) return cmd_compare(baseline, candidate, sources, cmp_csv);
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBuild;
  }
  return kExitUsage;
}
