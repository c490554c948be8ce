#include "callshield/harness/experiment.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "callshield/errors.hpp"

namespace callshield::harness {

using nlohmann::json;

namespace {

constexpr std::array<Experiment, 7> kExperiments = {Experiment::bit_accuracy, Experiment::sync_eval,
                                                    Experiment::ablation,     Experiment::protocol_stages,
                                                    Experiment::retry_comparison, Experiment::timing,
                                                    Experiment::attacks};

std::vector<GridCell> calibration_grid() { return watermark::ChannelCalibration::shipped().cells(); }

std::vector<GridCell> retry_grid() {
  std::vector<GridCell> g{{audio::DistortionKind::clean, 0.0}};
  for (auto k : audio::all_distortion_kinds()) {
    if (k != audio::DistortionKind::clean) g.emplace_back(k, 0.2);
  }
  return g;
}

}  // namespace

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::bit_accuracy: return "bit_accuracy";
    case Experiment::sync_eval: return "sync_eval";
    case Experiment::ablation: return "ablation";
    case Experiment::protocol_stages: return "protocol_stages";
    case Experiment::retry_comparison: return "retry_comparison";
    case Experiment::timing: return "timing";
    case Experiment::attacks: return "attacks";
  }
  return "unknown";
}

std::optional<Experiment> parse_experiment(std::string_view name) {
  for (auto e : kExperiments) {
    if (to_string(e) == name) return e;
  }
  return std::nullopt;
}

ExperimentSpec default_spec(Experiment e, watermark::Backend backend) {
  ExperimentSpec s;
  s.experiment = e;
  s.backend = backend;
  s.trials = backend == watermark::Backend::statistical ? 200 : 50;
  switch (e) {
    case Experiment::bit_accuracy:
      s.grid = calibration_grid();
      s.alphas = {0.6, 0.8, 1.0};
      break;
    case Experiment::sync_eval:
    case Experiment::ablation:
      s.grid = {{audio::DistortionKind::clean, 0.0}};
      s.alphas = {1.0};
      break;
    case Experiment::protocol_stages:
      s.grid = calibration_grid();
      s.alphas = {0.6};
      s.max_attempts = 1;
      break;
    case Experiment::retry_comparison:
      s.grid = retry_grid();
      s.alphas = {0.6};
      break;
    case Experiment::timing:
      s.grid = retry_grid();
      s.alphas = {0.6};
      s.guard_seconds = 2.26;
      break;
    case Experiment::attacks:
      s.grid = {{audio::DistortionKind::clean, 0.0}};
      s.alphas = {1.0};
      s.trials = 1000;
      break;
  }
  return s;
}

void ExperimentSpec::validate() const {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (grid.empty() || alphas.empty()) throw std::invalid_argument("empty distortion or alpha grid");
  if (bits_per_trial < 16) throw std::invalid_argument("bits_per_trial must be >= 16");
  if (max_attempts < 1) throw std::invalid_argument("max_attempts must be >= 1");
  if (message_bits < 1) throw std::invalid_argument("message_bits must be >= 1");
  for (const auto& [kind, cov] : grid) {
    if (!(cov >= 0.0 && cov <= 1.0)) throw std::invalid_argument("coverage must be in [0, 1]");
  }
  if (backend != watermark::Backend::statistical) return;
  const auto& cal = watermark::ChannelCalibration::shipped();
  for (const auto& [kind, cov] : grid) {
    for (double a : alphas) {
      const watermark::ChannelCondition c{kind, cov, a};
      if (!cal.contains(c)) throw CalibrationMissError("grid cell not in the calibration table: " + watermark::describe(c));
    }
  }
  if (experiment == Experiment::sync_eval) {
    for (auto k : audio::all_distortion_kinds()) {
      for (double a : alphas) {
        if (!cal.contains({k, 0.2, a})) throw CalibrationMissError("distortion mix needs 20% cells for every kind");
      }
    }
  }
}

ExperimentSpec apply_overrides(ExperimentSpec spec, const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("config must be a JSON object");
  try {
    for (const auto& [key, v] : doc.items()) {
      if (key == "experiment") {
        const auto e = parse_experiment(v.get<std::string>());
        if (!e) throw FormatError("unknown experiment " + v.get<std::string>());
        spec.experiment = *e;
      } else if (key == "backend") {
        const auto b = watermark::parse_backend(v.get<std::string>());
        if (!b) throw FormatError("unknown backend " + v.get<std::string>());
        spec.backend = *b;
      } else if (key == "grid") {
        spec.grid.clear();
        for (const auto& cell : v) {
          const auto k = audio::parse_distortion_kind(cell.at("kind").get<std::string>());
          if (!k) throw FormatError("unknown distortion kind " + cell.at("kind").get<std::string>());
          spec.grid.emplace_back(*k, cell.value("coverage", 0.0));
        }
      } else if (key == "alphas") {
        spec.alphas = v.get<std::vector<double>>();
      } else if (key == "trials") {
        spec.trials = v.get<int>();
      } else if (key == "seed") {
        spec.seed = v.get<std::uint64_t>();
      } else if (key == "output") {
        spec.output = v.get<std::string>();
      } else if (key == "threads") {
        spec.threads = v.get<int>();
      } else if (key == "bits_per_trial") {
        spec.bits_per_trial = v.get<int>();
      } else if (key == "max_attempts") {
        spec.max_attempts = v.get<int>();
      } else if (key == "strategy") {
        const auto st = datalink::parse_strategy(v.get<std::string>());
        if (!st) throw FormatError("unknown strategy " + v.get<std::string>());
        spec.strategy = *st;
      } else if (key == "alpha0") {
        spec.alpha0 = v.get<double>();
      } else if (key == "guard_seconds") {
        spec.guard_seconds = v.get<double>();
      } else if (key == "ablation_m") {
        spec.ablation_m = v.get<int>();
      } else if (key == "ablation_t") {
        spec.ablation_t = v.get<int>();
      } else if (key == "message_bits") {
        spec.message_bits = v.get<int>();
      } else if (key == "burst_model") {
        spec.burst_model = v.get<bool>();
      } else if (key == "carrier_dir") {
        spec.carrier_dir = v.get<std::string>();
      } else if (key == "variants") {
        spec.variants = v.get<std::vector<std::string>>();
      } else {
        throw FormatError("unknown config key " + key);
      }
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  return spec;
}

ExperimentSpec apply_overrides_file(ExperimentSpec spec, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return apply_overrides(std::move(spec), ss.str());
}

// ---------------------------------------------------------------------------
// Records

const std::vector<std::string>& record_columns() {
  static const std::vector<std::string> cols = {
      "experiment", "backend", "variant",  "group",    "kind",           "coverage",     "alpha",
      "trial",      "seed",    "success",  "beacon",   "challenge",      "response",     "finish",
      "failed_stage", "attempts", "restarts", "corrected_errors", "sync_offset", "true_offset", "elapsed_seconds",
      "hits",       "total",   "blocks_ok", "blocks",  "delivered",      "mac_rejections"};
  return cols;
}

namespace {

json to_json(const TrialRecord& r) {
  return json{{"experiment", r.experiment},
              {"backend", r.backend},
              {"variant", r.variant},
              {"group", r.group},
              {"kind", r.kind},
              {"coverage", r.coverage},
              {"alpha", r.alpha},
              {"trial", r.trial},
              {"seed", r.seed},
              {"success", r.success},
              {"beacon", r.stages[0]},
              {"challenge", r.stages[1]},
              {"response", r.stages[2]},
              {"finish", r.stages[3]},
              {"failed_stage", r.failed_stage},
              {"attempts", r.attempts},
              {"restarts", r.restarts},
              {"corrected_errors", r.corrected_errors},
              {"sync_offset", r.sync_offset},
              {"true_offset", r.true_offset},
              {"elapsed_seconds", r.elapsed_seconds},
              {"hits", r.hits},
              {"total", r.total},
              {"blocks_ok", r.blocks_ok},
              {"blocks", r.blocks},
              {"delivered", r.delivered},
              {"mac_rejections", r.mac_rejections}};
}

TrialRecord from_json(const json& j) {
  TrialRecord r;
  r.experiment = j.at("experiment").get<std::string>();
  r.backend = j.at("backend").get<std::string>();
  r.variant = j.at("variant").get<std::string>();
  r.group = j.at("group").get<std::string>();
  r.kind = j.at("kind").get<std::string>();
  r.coverage = j.at("coverage").get<double>();
  r.alpha = j.at("alpha").get<double>();
  r.trial = j.at("trial").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.success = j.at("success").get<bool>();
  r.stages = {j.at("beacon").get<int>(), j.at("challenge").get<int>(), j.at("response").get<int>(),
              j.at("finish").get<int>()};
  r.failed_stage = j.at("failed_stage").get<std::string>();
  r.attempts = j.at("attempts").get<int>();
  r.restarts = j.at("restarts").get<int>();
  r.corrected_errors = j.at("corrected_errors").get<int>();
  r.sync_offset = j.at("sync_offset").get<long long>();
  r.true_offset = j.at("true_offset").get<long long>();
  r.elapsed_seconds = j.at("elapsed_seconds").get<double>();
  r.hits = j.at("hits").get<std::int64_t>();
  r.total = j.at("total").get<std::int64_t>();
  r.blocks_ok = j.at("blocks_ok").get<std::int64_t>();
  r.blocks = j.at("blocks").get<std::int64_t>();
  r.delivered = j.at("delivered").get<bool>();
  r.mac_rejections = j.at("mac_rejections").get<int>();
  return r;
}

std::string csv_field(const json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_float()) {
    std::ostringstream os;
    os << std::setprecision(17) << v.get<double>();
    return os.str();
  }
  return v.dump();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::optional<RecordFormat> parse_format(std::string_view name) {
  if (name == "csv") return RecordFormat::csv;
  if (name == "jsonl") return RecordFormat::jsonl;
  return std::nullopt;
}

RecordFormat format_for(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? RecordFormat::csv : RecordFormat::jsonl;
}

void write_records(const std::vector<TrialRecord>& records, RecordFormat format, std::ostream& out) {
  const auto& cols = record_columns();
  if (format == RecordFormat::jsonl) {
    for (const auto& r : records) out << to_json(r).dump() << '\n';
    return;
  }
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : records) {
    const auto j = to_json(r);
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << csv_field(j.at(cols[i]));
    out << '\n';
  }
}

void write_records(const std::vector<TrialRecord>& records, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_records(records, format_for(path), out);
}

std::vector<TrialRecord> read_jsonl(std::istream& in) {
  std::vector<TrialRecord> out;
  std::string line;
  try {
    while (std::getline(in, line)) {
      if (!line.empty()) out.push_back(from_json(json::parse(line)));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("records: ") + e.what());
  }
  return out;
}

std::vector<TrialRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) return {};
  const auto header = split_csv_line(line);
  if (header != record_columns()) throw FormatError("records: CSV header does not match the record schema");
  std::vector<TrialRecord> out;
  const json proto = to_json(TrialRecord{});
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) throw FormatError("records: wrong CSV field count");
    json j;
    try {
      for (std::size_t i = 0; i < header.size(); ++i) {
        const auto& like = proto.at(header[i]);
        const auto& f = fields[i];
        if (like.is_string()) j[header[i]] = f;
        else if (like.is_boolean()) j[header[i]] = f == "1";
        else if (like.is_number_float()) j[header[i]] = std::stod(f);
        else if (like.is_number_unsigned()) j[header[i]] = std::stoull(f);
        else j[header[i]] = std::stoll(f);
      }
    } catch (const std::logic_error& e) {
      throw FormatError(std::string("records: bad CSV value: ") + e.what());
    }
    out.push_back(from_json(j));
  }
  return out;
}

std::vector<TrialRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open records " + path.string());
  return format_for(path) == RecordFormat::csv ? read_csv(in) : read_jsonl(in);
}

}  // namespace callshield::harness
