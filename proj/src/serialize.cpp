#include "cvsvm/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace cvsvm {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_dataset_csv(const Dataset& ds, std::ostream& out) {
  out << "y";
  for (std::size_t j = 1; j <= ds.p(); ++j) out << ",x" << j;
  out << "\n";
  for (std::size_t i = 0; i < ds.n(); ++i) {
    out << (ds.labels[i] > 0.0 ? "1" : "-1");
    const double* row = ds.features.row(i);
    for (std::size_t j = 0; j < ds.p(); ++j) out << ',' << format_double(row[j]);
    out << "\n";
  }
}

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw invalid_parameter_error("dataset csv: empty file");
  std::size_t p = 0;
  {
    std::stringstream header(line);
    std::string field;
    bool first = true;
    while (std::getline(header, field, ',')) {
      if (first) {
        if (field != "y") throw invalid_parameter_error("dataset csv: first column must be y");
        first = false;
      } else {
        ++p;
      }
    }
  }
  if (p == 0) throw invalid_parameter_error("dataset csv: no feature columns");

  std::vector<double> labels;
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string field;
    if (!std::getline(row, field, ',')) break;
    const double y = std::strtod(field.c_str(), nullptr);
    if (y != 1.0 && y != -1.0)
      throw invalid_parameter_error("dataset csv: label must be +-1, got " + field);
    labels.push_back(y);
    std::size_t count = 0;
    while (std::getline(row, field, ',')) {
      values.push_back(std::strtod(field.c_str(), nullptr));
      ++count;
    }
    if (count != p) throw invalid_parameter_error("dataset csv: ragged row");
  }

  Dataset ds;
  ds.features = Matrix(labels.size(), p);
  ds.features.data = std::move(values);
  ds.labels = std::move(labels);
  if (!ds.features.all_finite()) throw numeric_error("dataset csv: non-finite value");
  return ds;
}

nlohmann::json dataset_sidecar(const Dataset& ds) {
  nlohmann::json j;
  j["p"] = ds.p();
  j["n"] = ds.n();
  j["snr"] = ds.snr;
  j["seed"] = ds.seed;
  if (ds.true_coefficients) j["w_star"] = *ds.true_coefficients;
  return j;
}

void apply_sidecar(Dataset& ds, const nlohmann::json& meta) {
  if (meta.contains("snr")) ds.snr = meta["snr"].get<double>();
  if (meta.contains("seed")) ds.seed = meta["seed"].get<std::uint64_t>();
  if (meta.contains("w_star")) {
    auto w = meta["w_star"].get<std::vector<double>>();
    if (w.size() != ds.p())
      throw invalid_parameter_error("sidecar w_star length != feature count");
    ds.true_coefficients = std::move(w);
  }
  if (meta.contains("p") && meta["p"].get<std::size_t>() != ds.p())
    throw invalid_parameter_error("sidecar p disagrees with csv");
  if (meta.contains("n") && meta["n"].get<std::size_t>() != ds.n())
    throw invalid_parameter_error("sidecar n disagrees with csv");
}

void save_dataset(const Dataset& ds, const std::string& csv_path,
                  const std::string& json_path) {
  std::ofstream csv(csv_path);
  if (!csv) throw invalid_parameter_error("cannot open " + csv_path);
  write_dataset_csv(ds, csv);
  std::ofstream js(json_path);
  if (!js) throw invalid_parameter_error("cannot open " + json_path);
  js << dataset_sidecar(ds).dump(2) << "\n";
}

Dataset load_dataset(const std::string& csv_path, const std::string& json_path) {
  std::ifstream csv(csv_path);
  if (!csv) throw invalid_parameter_error("cannot open " + csv_path);
  Dataset ds = read_dataset_csv(csv);
  std::ifstream js(json_path);
  if (js) {
    nlohmann::json meta;
    js >> meta;
    apply_sidecar(ds, meta);
  }
  return ds;
}

nlohmann::json final_model_json(const FinalModel& model) {
  nlohmann::json j;
  j["mask"] = model.mask.to_string();
  j["weights"] = model.weights;
  j["bias"] = model.bias;
  return j;
}

FinalModel final_model_from_json(const nlohmann::json& j) {
  FinalModel m;
  m.mask = FeatureMask::from_string(j.at("mask").get<std::string>());
  m.weights = j.at("weights").get<std::vector<double>>();
  m.bias = j.at("bias").get<double>();
  if (m.weights.size() != m.mask.size())
    throw invalid_parameter_error("model json: weights/mask length mismatch");
  return m;
}

nlohmann::json evaluation_json(const CvEvaluation& eval) {
  nlohmann::json j;
  j["mask"] = eval.mask.to_string();
  j["gamma"] = eval.gamma;
  j["loss"] = loss_kind_name(eval.loss_kind);
  j["objective"] = eval.objective;
  j["fold_losses"] = eval.fold_losses;
  nlohmann::json models = nlohmann::json::array();
  for (const auto& fm : eval.fold_models) {
    nlohmann::json fj;
    fj["fold"] = fm.fold_id;
    fj["weights"] = fm.weights;
    fj["bias"] = fm.bias;
    models.push_back(std::move(fj));
  }
  j["fold_models"] = std::move(models);
  if (!eval.per_sample_slack.empty()) j["per_sample_slack"] = eval.per_sample_slack;
  return j;
}

nlohmann::json l1_model_json(const L1SvmModel& model) {
  nlohmann::json j;
  j["weights"] = model.weights;
  j["bias"] = model.bias;
  j["C"] = model.c;
  j["converged"] = model.converged;
  j["iterations"] = model.iterations;
  return j;
}

void write_trace_csv(std::span<const TracePoint> trace, std::ostream& out) {
  out << "elapsed_s,objective,mask_bits\n";
  for (const auto& tp : trace) {
    out << format_double(tp.elapsed_s) << ',' << format_double(tp.objective) << ','
        << tp.mask.to_string() << "\n";
  }
}

}  // namespace cvsvm
