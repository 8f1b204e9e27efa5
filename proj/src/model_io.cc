// model_io.cc

// Copyright 2026 The mmsenmf Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "mmsenmf/model_io.h"

#include <fstream>
#include <stdexcept>
#include <vector>

namespace mmsenmf {

using nlohmann::json;

namespace {

json RowMajor(const Matrix &m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> row(m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j) row[j] = m(i, j);
    rows.push_back(row);
  }
  return rows;
}

Matrix FromRowMajor(const json &rows, Eigen::Index expected_rows,
                    Eigen::Index expected_cols, const char *what) {
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != expected_rows)
    throw std::runtime_error(std::string("model field '") + what +
                             "' has the wrong number of rows");
  Matrix m(expected_rows, expected_cols);
  for (Eigen::Index i = 0; i < expected_rows; ++i) {
    const json &row = rows[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != expected_cols)
      throw std::runtime_error(std::string("model field '") + what +
                               "' has a row of the wrong length");
    for (Eigen::Index j = 0; j < expected_cols; ++j)
      m(i, j) = row[j].get<double>();
  }
  return m;
}

}  // namespace

json SourceModelToJson(const SourceModel &model) {
  json doc;
  doc["version"] = model.version;
  doc["rank"] = model.rank();
  doc["frame_params"] = {{"frame_length", model.framing.frame_length},
                         {"hop", model.framing.hop},
                         {"fft_size", model.framing.fft_size},
                         {"sample_rate_hz", model.framing.sample_rate_hz}};
  doc["basis"] = RowMajor(model.basis.values);
  const GmmPrior &p = model.prior;
  std::vector<double> weights(p.weights.data(), p.weights.data() + p.weights.size());
  // Stored K x d: one row per component.
  doc["gmm"] = {{"k", p.num_components()},
                {"weights", weights},
                {"means", RowMajor(p.means.transpose())},
                {"variances", RowMajor(p.variances.transpose())}};
  doc["floors"] = {{"epsilon", model.epsilon_floor},
                   {"gain", model.gain_floor},
                   {"covariance", model.covariance_floor}};
  doc["seed"] = model.seed;
  doc["training"] = {{"nmf_iters", model.nmf_iters},
                     {"gmm_iters", model.gmm_iters},
                     {"final_divergence", model.final_divergence}};
  return doc;
}

SourceModel SourceModelFromJson(const json &doc) {
  try {
    SourceModel model;
    model.version = doc.at("version").get<int>();
    if (model.version != kModelVersion)
      throw std::runtime_error("unsupported model version " +
                               std::to_string(model.version));
    const int rank = doc.at("rank").get<int>();
    const json &fp = doc.at("frame_params");
    model.framing.frame_length = fp.at("frame_length").get<int>();
    model.framing.hop = fp.at("hop").get<int>();
    model.framing.fft_size = fp.at("fft_size").get<int>();
    model.framing.sample_rate_hz = fp.at("sample_rate_hz").get<int>();
    model.framing.Validate();
    model.basis.values =
        FromRowMajor(doc.at("basis"), model.framing.num_bins(), rank, "basis");
    const json &gmm = doc.at("gmm");
    const int k = gmm.at("k").get<int>();
    const std::vector<double> weights = gmm.at("weights").get<std::vector<double>>();
    if (static_cast<int>(weights.size()) != k)
      throw std::runtime_error("gmm weights length does not match k");
    model.prior.weights = Eigen::Map<const Vector>(weights.data(), k);
    model.prior.means = FromRowMajor(gmm.at("means"), k, rank, "means").transpose();
    model.prior.variances =
        FromRowMajor(gmm.at("variances"), k, rank, "variances").transpose();
    const json &floors = doc.at("floors");
    model.epsilon_floor = floors.at("epsilon").get<double>();
    model.gain_floor = floors.at("gain").get<double>();
    model.covariance_floor = floors.at("covariance").get<double>();
    model.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("training")) {
      const json &t = doc.at("training");
      model.nmf_iters = t.value("nmf_iters", 0);
      model.gmm_iters = t.value("gmm_iters", 0);
      model.final_divergence = t.value("final_divergence", 0.0);
    }
    model.Validate();
    return model;
  } catch (const json::exception &e) {
    throw std::runtime_error(std::string("malformed model file: ") + e.what());
  }
}

void SaveSourceModel(const std::string &path, const SourceModel &model) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file " + path);
  out << SourceModelToJson(model).dump(1) << "\n";
  if (!out) throw std::runtime_error("failed writing model file " + path);
}

SourceModel LoadSourceModel(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception &e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return SourceModelFromJson(doc);
}

}  // namespace mmsenmf
