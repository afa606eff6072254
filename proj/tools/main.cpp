#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "ugrid/category_mi.hpp"
#include "ugrid/field.hpp"
#include "ugrid/ingest.hpp"
#include "ugrid/relevance.hpp"
#include "ugrid/serialize.hpp"
#include "ugrid/synthgen.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitDataError = 1;
constexpr int kExitUsage = 2;

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ugrid::IoError("cannot open input file: " + path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw ugrid::IoError("failed reading: " + path);
  return data;
}

ugrid::UtcSeconds now_utc() { return static_cast<ugrid::UtcSeconds>(std::time(nullptr)); }

// One directory per run: named outputs plus a manifest.json recording the
// digests of everything read and written.
class RunDir {
 public:
  RunDir(std::string dir, bool force, std::string command_line)
      : dir_(std::move(dir)), force_(force) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw ugrid::IoError("cannot create output directory: " + dir_);
    manifest_["tool"] = "ugrid";
    manifest_["version"] = kVersion;
    manifest_["command_line"] = std::move(command_line);
    manifest_["started_utc"] = ugrid::format_iso8601(now_utc());
    manifest_["config_digest"] = nullptr;
    manifest_["inputs"] = nlohmann::json::array();
    manifest_["outputs"] = nlohmann::json::array();
  }

  void note_input(const std::string& path, std::string_view bytes) {
    manifest_["inputs"].push_back({{"path", path}, {"sha256", sha256_hex(bytes)}});
  }
  void note_config(std::string_view bytes) { manifest_["config_digest"] = sha256_hex(bytes); }
  void note_rng(const char* name) { manifest_["rng"] = name; }

  void write(const std::string& name, std::string_view content) {
    const std::filesystem::path path = std::filesystem::path(dir_) / name;
    if (!force_ && std::filesystem::exists(path))
      throw ugrid::IoError("output exists, pass --force to overwrite: " + path.string());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ugrid::IoError("cannot open for writing: " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out.good()) throw ugrid::IoError("failed writing: " + path.string());
    manifest_["outputs"].push_back({{"path", name}, {"sha256", sha256_hex(content)}});
  }

  void write_json(const std::string& name, const nlohmann::json& j) {
    write(name, j.dump(2) + "\n");
  }

  void finish() {
    manifest_["finished_utc"] = ugrid::format_iso8601(now_utc());
    const std::filesystem::path path = std::filesystem::path(dir_) / "manifest.json";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ugrid::IoError("cannot write manifest: " + path.string());
    out << manifest_.dump(2) << "\n";
  }

 private:
  std::string dir_;
  bool force_;
  nlohmann::json manifest_;
};

struct DatasetArgs {
  std::string input;
  std::string format = "auto";
  std::vector<std::string> window;
};

void add_dataset_options(CLI::App* cmd, DatasetArgs& a) {
  cmd->add_option("--input", a.input, "event file (canonical CSV or JSON-lines)")->required();
  cmd->add_option("--format", a.format, "input format")
      ->check(CLI::IsMember({"auto", "csv", "jsonl"}));
  cmd->add_option("--window", a.window, "UTC window START END (ISO 8601, half-open)")
      ->expected(2);
}

ugrid::InputFormat resolve_format(const DatasetArgs& a) {
  if (a.format == "csv") return ugrid::InputFormat::Csv;
  if (a.format == "jsonl") return ugrid::InputFormat::JsonLines;
  return a.input.size() > 6 && a.input.substr(a.input.size() - 6) == ".jsonl"
             ? ugrid::InputFormat::JsonLines
             : ugrid::InputFormat::Csv;
}

ugrid::TimeWindow resolve_window(const DatasetArgs& a, const ugrid::ParseResult& parsed) {
  if (!a.window.empty()) {
    const auto start = ugrid::parse_iso8601(a.window[0]);
    const auto end = ugrid::parse_iso8601(a.window[1]);
    if (!start || !end || !(*start < *end))
      throw ugrid::IoError("bad --window: need two ISO 8601 timestamps, start < end");
    return {*start, *end};
  }
  ugrid::TimeWindow w{0, 1};  // placeholder when nothing parsed
  bool any = false;
  for (const ugrid::EventRecord& r : parsed.records) {
    if (!any) {
      w = {r.reported_at, r.reported_at + 1};
      any = true;
    } else {
      w.start = std::min(w.start, r.reported_at);
      w.end = std::max(w.end, r.reported_at + 1);
    }
  }
  return w;
}

struct LoadedDataset {
  ugrid::EventDataset dataset;
  std::vector<ugrid::RawRecordError> rejects;
};

LoadedDataset load_dataset(const DatasetArgs& a, RunDir& run) {
  const std::string bytes = read_file(a.input);
  run.note_input(a.input, bytes);
  ugrid::ParseResult parsed = ugrid::parse_events(bytes, resolve_format(a));
  const ugrid::TimeWindow window = resolve_window(a, parsed);

  LoadedDataset out;
  out.rejects = std::move(parsed.errors);
  out.dataset = ugrid::clean(std::move(parsed.records), window, &out.rejects, &parsed.lines);
  std::sort(out.rejects.begin(), out.rejects.end(),
            [](const auto& x, const auto& y) { return x.line_number < y.line_number; });
  if (!out.rejects.empty())
    std::cerr << "warning: " << out.rejects.size() << " input row(s) rejected\n";
  return out;
}

std::string join_command_line(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s.push_back(' ');
    const std::string_view arg = argv[i];
    if (arg.find(' ') != std::string_view::npos) {
      s.push_back('"');
      s += arg;
      s.push_back('"');
    } else {
      s += arg;
    }
  }
  return s;
}

ugrid::CooccurrenceMode parse_mode_flag(const std::string& s) {
  if (s == "product") return ugrid::CooccurrenceMode::PairProduct;
  if (s == "min") return ugrid::CooccurrenceMode::MinCount;
  return ugrid::CooccurrenceMode::Presence;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"urban grid event analytics"};
  app.set_version_flag("--version", std::string("ugrid ") + kVersion);
  app.require_subcommand(1);

  const std::string command_line = join_command_line(argc, argv);

  struct {
    std::string out;
    bool force = false;
    int threads = 1;
  } common;

  auto add_out = [&](CLI::App* cmd, bool threaded = false) {
    cmd->add_option("--out", common.out, "output directory")->required();
    cmd->add_flag("--force", common.force, "overwrite existing output files");
    if (threaded)
      cmd->add_option("--threads", common.threads, "worker cap")->check(CLI::PositiveNumber);
  };

  std::string synth_config;
  std::uint64_t synth_seed = 0;
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic event dataset");
  synth->add_option("--config", synth_config, "generator config (JSON)")->required();
  CLI::Option* seed_opt = synth->add_option("--seed", synth_seed, "override the config seed");
  add_out(synth, true);

  DatasetArgs ingest_args;
  CLI::App* ingest = app.add_subcommand("ingest", "parse, validate and clean an event file");
  add_dataset_options(ingest, ingest_args);
  add_out(ingest);

  DatasetArgs summary_args;
  CLI::App* summary = app.add_subcommand("summary", "source/category composition report");
  add_dataset_options(summary, summary_args);
  add_out(summary);

  DatasetArgs temporal_args;
  std::string temporal_bin = "day";
  std::int32_t max_lag = 30;
  std::string temporal_category;
  bool temporal_normalize = false;
  CLI::App* temporal =
      app.add_subcommand("temporal", "weekly trend plus lagged temporal relevance curve");
  add_dataset_options(temporal, temporal_args);
  temporal->add_option("--bin", temporal_bin, "time bin width")
      ->check(CLI::IsMember({"day", "week"}));
  temporal->add_option("--max-lag", max_lag, "largest lag in bins")->check(CLI::PositiveNumber);
  temporal->add_option("--category", temporal_category, "restrict to one category");
  temporal->add_flag("--normalize", temporal_normalize, "anchor the curve at 1 for lag 0");
  add_out(temporal, true);

  DatasetArgs spatial_args;
  double bin_width_m = 1000.0;
  double max_dist_m = 30000.0;
  std::string spatial_category;
  std::vector<std::int32_t> resolution{64, 64};
  bool spatial_normalize = false;
  CLI::App* spatial =
      app.add_subcommand("spatial", "density grid plus distance-binned spatial relevance curve");
  add_dataset_options(spatial, spatial_args);
  spatial->add_option("--bin-width-m", bin_width_m, "distance bin width in meters");
  spatial->add_option("--max-dist-m", max_dist_m, "largest pair distance in meters");
  spatial->add_option("--category", spatial_category, "restrict to one category");
  spatial->add_option("--resolution", resolution, "density grid NX NY")->expected(2);
  spatial->add_flag("--normalize", spatial_normalize, "divide by the mean cell variance");
  add_out(spatial, true);

  DatasetArgs categories_args;
  std::string row_source = "MobileDevice";
  std::string col_source = "Hotline";
  std::string mode = "product";
  CLI::App* categories =
      app.add_subcommand("categories", "cross-channel category relevance matrix (NMI)");
  add_dataset_options(categories, categories_args);
  categories->add_option("--row-source", row_source, "source channel for matrix rows")
      ->check(CLI::IsMember({"MobileDevice", "Hotline"}));
  categories->add_option("--col-source", col_source, "source channel for matrix columns")
      ->check(CLI::IsMember({"MobileDevice", "Hotline"}));
  categories->add_option("--mode", mode, "co-occurrence construction")
      ->check(CLI::IsMember({"product", "min", "presence"}));
  add_out(categories, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*synth) {
      const std::string bytes = read_file(synth_config);
      nlohmann::json cfg_json = nlohmann::json::parse(bytes, nullptr, false);
      if (cfg_json.is_discarded())
        throw ugrid::IoError("config is not valid JSON: " + synth_config);
      ugrid::GeneratorConfig cfg = ugrid::generator_config_from_json(cfg_json);
      if (seed_opt->count() > 0) cfg.seed = synth_seed;

      RunDir run(common.out, common.force, command_line);
      run.note_input(synth_config, bytes);
      run.note_config(bytes);
      run.note_rng(ugrid::kRngName);
      const ugrid::EventDataset ds = ugrid::generate(cfg, common.threads);
      run.write("events.csv", ugrid::dataset_to_csv(ds.records));
      run.finish();
      std::cout << "generated " << ds.records.size() << " events over " << ds.cells.size()
                << " cells\n";
      return kExitOk;
    }

    if (*ingest) {
      RunDir run(common.out, common.force, command_line);
      LoadedDataset loaded = load_dataset(ingest_args, run);
      run.write("dataset.csv", ugrid::dataset_to_csv(loaded.dataset.records));
      run.write("cells.csv", ugrid::cells_to_csv(loaded.dataset.cells));
      run.write("rejects.csv", ugrid::rejects_to_csv(loaded.rejects));
      run.finish();
      std::cout << "kept " << loaded.dataset.records.size() << " records, rejected "
                << loaded.rejects.size() << "\n";
      return kExitOk;
    }

    if (*summary) {
      RunDir run(common.out, common.force, command_line);
      LoadedDataset loaded = load_dataset(summary_args, run);
      const ugrid::SourceCategorySummary s = ugrid::summarize(loaded.dataset);
      run.write("summary.csv", ugrid::summary_to_csv(s));
      run.write_json("summary.json", ugrid::summary_to_json(s));
      run.finish();
      std::cout << ugrid::summary_to_text(s);
      return kExitOk;
    }

    if (*temporal) {
      RunDir run(common.out, common.force, command_line);
      LoadedDataset loaded = load_dataset(temporal_args, run);
      std::optional<ugrid::CategoryId> category;
      if (!temporal_category.empty()) category = temporal_category;

      const ugrid::TrendSeries trend = ugrid::weekly_histogram(loaded.dataset, category);
      std::optional<std::vector<ugrid::CategoryId>> filter;
      if (category) filter = std::vector<ugrid::CategoryId>{*category};
      const ugrid::SpatioTemporalField field = ugrid::build_field(
          loaded.dataset, temporal_bin == "day" ? ugrid::BinWidth::Day : ugrid::BinWidth::Week,
          filter);
      const ugrid::RelevanceCurve curve =
          ugrid::global_temporal_relevance(field, max_lag, temporal_normalize, common.threads);

      run.write("trend.csv", ugrid::trend_to_csv(trend));
      run.write_json("trend.json", ugrid::trend_to_json(trend));
      run.write("temporal_relevance.csv", ugrid::curve_to_csv(curve));
      run.write_json("temporal_relevance.json", ugrid::curve_to_json(curve));
      run.finish();
      if (std::all_of(curve.points.begin(), curve.points.end(),
                      [](const ugrid::CurvePoint& p) { return p.missing(); }))
        std::cerr << "warning: degenerate field, relevance curve is all-missing\n";
      std::cout << "temporal curve over " << curve.points.size() << " lags, trend over "
                << trend.values.size() << " weeks\n";
      return kExitOk;
    }

    if (*spatial) {
      RunDir run(common.out, common.force, command_line);
      LoadedDataset loaded = load_dataset(spatial_args, run);
      std::optional<ugrid::CategoryId> category;
      if (!spatial_category.empty()) category = spatial_category;

      const ugrid::DensityGrid density =
          ugrid::spatial_density(loaded.dataset, category, resolution[0], resolution[1]);
      std::optional<std::vector<ugrid::CategoryId>> filter;
      if (category) filter = std::vector<ugrid::CategoryId>{*category};
      const ugrid::SpatioTemporalField field =
          ugrid::build_field(loaded.dataset, ugrid::BinWidth::Day, filter);
      const ugrid::RelevanceCurve curve = ugrid::global_spatial_relevance(
          field, bin_width_m, max_dist_m, spatial_normalize, common.threads);

      run.write("density.csv", ugrid::density_to_csv(density));
      run.write_json("density.json", ugrid::density_to_json(density));
      run.write("spatial_relevance.csv", ugrid::curve_to_csv(curve));
      run.write_json("spatial_relevance.json", ugrid::curve_to_json(curve));
      run.finish();
      if (std::all_of(curve.points.begin(), curve.points.end(),
                      [](const ugrid::CurvePoint& p) { return p.missing(); }))
        std::cerr << "warning: no usable cell pairs, spatial curve is all-missing\n";
      if (density.degenerate) std::cerr << "warning: no events matched the density filter\n";
      std::cout << "spatial curve over " << curve.points.size() << " distance bins\n";
      return kExitOk;
    }

    if (*categories) {
      RunDir run(common.out, common.force, command_line);
      LoadedDataset loaded = load_dataset(categories_args, run);
      const ugrid::SourceChannel rs = *ugrid::source_from_string(row_source);
      const ugrid::SourceChannel cs = *ugrid::source_from_string(col_source);
      std::size_t n_rows = 0, n_cols = 0;
      for (const ugrid::EventRecord& r : loaded.dataset.records) {
        if (r.source == rs) ++n_rows;
        if (r.source == cs) ++n_cols;
      }
      if (n_rows == 0 || n_cols == 0) {
        std::cerr << "error: dataset has no events from source '"
                  << (n_rows == 0 ? row_source : col_source) << "'\n";
        return kExitUsage;
      }
      const ugrid::RelevanceMatrix m = ugrid::relevance_matrix(loaded.dataset, rs, cs,
                                                               parse_mode_flag(mode),
                                                               common.threads);
      run.write("category_relevance.csv", ugrid::matrix_to_csv(m));
      run.write_json("category_relevance.json", ugrid::matrix_to_json(m));
      run.finish();
      std::cout << "matrix " << m.rows.size() << " x " << m.cols.size() << " (" << mode << ")\n";
      return kExitOk;
    }
  } catch (const ugrid::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ugrid::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitUsage;
}
