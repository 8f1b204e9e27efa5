// tests/model_io_test.cc

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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "synth.h"

namespace mmsenmf {
namespace {

namespace fs = std::filesystem;

std::string Slurp(const fs::path &p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SourceModel SmallModel(std::uint64_t seed) {
  TrainConfig c;
  c.rank = 5;
  c.gmm_components = 2;
  c.nmf_iters = 30;
  c.gmm_iters = 20;
  c.seed = seed;
  return TrainSourceModel({testing::HarmonicComplexes(seed, 1.0)}, c);
}

class ModelIoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mmsenmf_model_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(ModelIoTest, RoundTripIsExact) {
  const SourceModel m = SmallModel(1);
  SaveSourceModel(dir_ / "a.model", m);
  const SourceModel r = LoadSourceModel(dir_ / "a.model");
  EXPECT_TRUE(r.basis.values == m.basis.values);
  EXPECT_TRUE(r.prior.weights == m.prior.weights);
  EXPECT_TRUE(r.prior.means == m.prior.means);
  EXPECT_TRUE(r.prior.variances == m.prior.variances);
  EXPECT_EQ(r.framing, m.framing);
  EXPECT_EQ(r.seed, m.seed);
  EXPECT_EQ(r.nmf_iters, m.nmf_iters);
  EXPECT_EQ(r.gmm_iters, m.gmm_iters);
  EXPECT_EQ(r.epsilon_floor, m.epsilon_floor);
  EXPECT_EQ(r.gain_floor, m.gain_floor);
  EXPECT_EQ(r.covariance_floor, m.covariance_floor);
  EXPECT_EQ(r.final_divergence, m.final_divergence);

  SaveSourceModel(dir_ / "b.model", r);
  EXPECT_EQ(Slurp(dir_ / "a.model"), Slurp(dir_ / "b.model"));
}

TEST_F(ModelIoTest, RetrainingIsByteIdentical) {
  SaveSourceModel(dir_ / "a.model", SmallModel(4));
  SaveSourceModel(dir_ / "b.model", SmallModel(4));
  EXPECT_EQ(Slurp(dir_ / "a.model"), Slurp(dir_ / "b.model"));
}

TEST_F(ModelIoTest, DocumentLayout) {
  const nlohmann::json doc = SourceModelToJson(SmallModel(2));
  EXPECT_EQ(doc.at("version").get<int>(), kModelVersion);
  EXPECT_EQ(doc.at("rank").get<int>(), 5);
  EXPECT_EQ(doc.at("basis").size(), 257u);
  EXPECT_EQ(doc.at("basis")[0].size(), 5u);
  EXPECT_EQ(doc.at("gmm").at("k").get<int>(), 2);
  EXPECT_EQ(doc.at("gmm").at("means").size(), 2u);
  EXPECT_EQ(doc.at("gmm").at("means")[0].size(), 5u);
  EXPECT_EQ(doc.at("frame_params").at("fft_size").get<int>(), 512);
}

TEST_F(ModelIoTest, RejectsBadDocuments) {
  nlohmann::json doc = SourceModelToJson(SmallModel(3));
  nlohmann::json bad = doc;
  bad["version"] = kModelVersion + 1;
  EXPECT_THROW(SourceModelFromJson(bad), std::runtime_error);
  bad = doc;
  bad["rank"] = 6;
  EXPECT_THROW(SourceModelFromJson(bad), std::runtime_error);
  bad = doc;
  bad["gmm"].erase("weights");
  EXPECT_THROW(SourceModelFromJson(bad), std::runtime_error);
  bad = doc;
  bad["gmm"]["means"][0][0] = 0.5;
  EXPECT_THROW(SourceModelFromJson(bad), std::invalid_argument);
  EXPECT_THROW(LoadSourceModel(dir_ / "missing.model"), std::runtime_error);
  std::ofstream(dir_ / "junk.model") << "{ not json";
  EXPECT_THROW(LoadSourceModel(dir_ / "junk.model"), std::runtime_error);
}

}  // namespace
}  // namespace mmsenmf
