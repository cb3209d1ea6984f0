#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "cvsvm/baselines.hpp"
#include "cvsvm/cv_objective.hpp"
#include "cvsvm/datagen.hpp"
#include "cvsvm/search.hpp"

namespace cvsvm {

// Shortest decimal that round-trips the exact double (17 significant digits).
std::string format_double(double v);

// Dataset CSV: header "y,x1,...,xp", label then features per row; floats round-trip
// exactly. The JSON sidecar carries {p, n, snr, seed, w_star}.
void write_dataset_csv(const Dataset& ds, std::ostream& out);
Dataset read_dataset_csv(std::istream& in);
nlohmann::json dataset_sidecar(const Dataset& ds);
void apply_sidecar(Dataset& ds, const nlohmann::json& meta);

void save_dataset(const Dataset& ds, const std::string& csv_path,
                  const std::string& json_path);
Dataset load_dataset(const std::string& csv_path, const std::string& json_path);

// Model serialization: mask as a 0/1 string, weights as decimal arrays.
nlohmann::json final_model_json(const FinalModel& model);
FinalModel final_model_from_json(const nlohmann::json& j);
nlohmann::json evaluation_json(const CvEvaluation& eval);
nlohmann::json l1_model_json(const L1SvmModel& model);

// Incumbent trace CSV: "elapsed_s,objective,mask_bits".
void write_trace_csv(std::span<const TracePoint> trace, std::ostream& out);

}  // namespace cvsvm
