#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "cvsvm/rng.hpp"
#include "cvsvm/serialize.hpp"

using namespace cvsvm;

TEST_CASE("dataset csv round-trips bit-exactly") {
  const Dataset ds = generate_dataset(5, 64, 0.25, 321);
  std::stringstream buf;
  write_dataset_csv(ds, buf);

  const Dataset back = read_dataset_csv(buf);
  REQUIRE(back.n() == ds.n());
  REQUIRE(back.p() == ds.p());
  CHECK(back.features.data == ds.features.data);  // exact doubles, not approximate
  CHECK(back.labels == ds.labels);
}

TEST_CASE("csv header and label validation") {
  {
    std::stringstream bad("foo,x1\n1,0.5\n");
    CHECK_THROWS_AS(read_dataset_csv(bad), invalid_parameter_error);
  }
  {
    std::stringstream bad("y,x1\n0.7,0.5\n");
    CHECK_THROWS_AS(read_dataset_csv(bad), invalid_parameter_error);
  }
  {
    std::stringstream bad("y,x1,x2\n1,0.5\n");
    CHECK_THROWS_AS(read_dataset_csv(bad), invalid_parameter_error);
  }
}

TEST_CASE("sidecar metadata restores generation parameters") {
  const Dataset ds = generate_dataset(4, 10, 2.0, 77);
  const nlohmann::json meta = dataset_sidecar(ds);
  CHECK(meta["p"] == 4);
  CHECK(meta["n"] == 10);
  CHECK(meta["snr"] == 2.0);
  CHECK(meta["seed"] == 77);

  std::stringstream buf;
  write_dataset_csv(ds, buf);
  Dataset back = read_dataset_csv(buf);
  apply_sidecar(back, meta);
  CHECK(back.seed == 77);
  CHECK(back.snr == 2.0);
  REQUIRE(back.true_coefficients.has_value());
  CHECK(*back.true_coefficients == *ds.true_coefficients);

  nlohmann::json wrong = meta;
  wrong["p"] = 9;
  Dataset other = back;
  CHECK_THROWS_AS(apply_sidecar(other, wrong), invalid_parameter_error);
}

TEST_CASE("final model json round-trips") {
  FinalModel m;
  m.mask = FeatureMask::from_string("0110");
  m.weights = {0.0, -1.25, 0.5, 0.0};
  m.bias = 0.125;
  const nlohmann::json j = final_model_json(m);
  const FinalModel back = final_model_from_json(j);
  CHECK(back.mask.to_string() == "0110");
  CHECK(back.weights == m.weights);
  CHECK(back.bias == m.bias);
}

TEST_CASE("evaluation json carries the criterion decomposition") {
  Matrix x(6, 2);
  NormalStream normals(5);
  for (auto& v : x.data) v = normals.next();
  const std::vector<double> y = {1.0, -1.0, 1.0, -1.0, 1.0, -1.0};
  const FoldPartition folds = partition_folds(6, 3, 2);
  const CvEvaluation eval =
      cv_objective(x, y, folds, FeatureMask::ones(2), 150.0, LossKind::kSquared);
  const nlohmann::json j = evaluation_json(eval);
  CHECK(j["mask"] == "11");
  CHECK(j["gamma"] == 150.0);
  CHECK(j["loss"] == "squared");
  CHECK(j["fold_losses"].size() == 3);
  CHECK(j["fold_models"].size() == 3);
  double total = 0.0;
  for (const auto& l : j["fold_losses"]) total += l.get<double>();
  CHECK(total == doctest::Approx(j["objective"].get<double>()).epsilon(1e-12));
}

TEST_CASE("trace csv layout") {
  std::vector<TracePoint> trace;
  trace.push_back({0.5, 12.25, FeatureMask::from_string("10")});
  trace.push_back({1.25, 3.0, FeatureMask::from_string("01")});
  std::stringstream buf;
  write_trace_csv(trace, buf);
  std::string line;
  std::getline(buf, line);
  CHECK(line == "elapsed_s,objective,mask_bits");
  std::getline(buf, line);
  CHECK(line == "0.5,12.25,10");
  std::getline(buf, line);
  CHECK(line == "1.25,3,01");
}

TEST_CASE("doubles print with full round-trip precision") {
  const double v = 0.1 + 0.2;  // not exactly 0.3
  const std::string s = format_double(v);
  CHECK(std::strtod(s.c_str(), nullptr) == v);
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-0.25) == "-0.25");
}
