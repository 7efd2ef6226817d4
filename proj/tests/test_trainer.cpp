//------------------------------------------------------------------------------
//
//   Copyright 2026 The GaborNet Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "gabornet/trainer.hpp"

#include "fixtures.hpp"

#include "gtest/gtest.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <set>

namespace {

using namespace gabornet;

ErrorCode error_of(auto &&fn)
{
  try
  {
    fn();
  }
  catch (Error const &e)
  {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Io;
}

// Shared small problem: 300 synthetic training images, 100 test images and a
// 16-filter bank, with features extracted once.
struct Problem
{
  Dataset    train = fixtures::synthetic_dataset(30, 1, Split::Train);
  Dataset    test  = fixtures::synthetic_dataset(10, 2, Split::Test);
  FilterBank bank  = make_filter_bank({1.0, 2.0}, {4.0, 8.0}, 4);
  FeatureSet train_features;
  FeatureSet test_features;

  Problem()
  {
    train_features = extract_set(train, bank, 64);
    test_features  = extract_set(test, bank, 64);
  }

  static Problem const &get()
  {
    static Problem const p;
    return p;
  }
};

TrainConfig small_config()
{
  TrainConfig c;
  c.batch_size        = 50;
  c.n_model_per_class = 5;
  c.entropy_levels    = 64;
  c.hidden            = {12};
  c.init_epochs       = 10;
  c.update_steps      = 5;
  return c;
}

TrainingResult run(TrainConfig const &config)
{
  auto const &p = Problem::get();
  return run_training(p.train, p.train_features, p.test_features, p.bank, config);
}

TEST(BatchIter, SizesAndRemainder)
{
  auto const batches = batch_iter(100, 32, 7);
  ASSERT_EQ(batches.size(), 4u);
  EXPECT_EQ(batches[0].size(), 32u);
  EXPECT_EQ(batches[1].size(), 32u);
  EXPECT_EQ(batches[2].size(), 32u);
  EXPECT_EQ(batches[3].size(), 4u);
  std::set<std::size_t> seen;
  for (auto const &b : batches)
  {
    seen.insert(b.begin(), b.end());
  }
  EXPECT_EQ(seen.size(), 100u);
  EXPECT_EQ(*seen.rbegin(), 99u);
}

TEST(BatchIter, SingleBatch)
{
  EXPECT_EQ(batch_iter(100, 100, 1).size(), 1u);
  EXPECT_EQ(batch_iter(100, 1000, 1).size(), 1u);
  EXPECT_EQ(error_of([] { batch_iter(10, 0, 1); }), ErrorCode::InvalidParams);
}

TEST(BatchIter, SeedDeterminesComposition)
{
  EXPECT_EQ(batch_iter(500, 64, 3), batch_iter(500, 64, 3));
  EXPECT_NE(batch_iter(500, 64, 3), batch_iter(500, 64, 4));
}

TEST(Evaluate, PerfectModelScoresOne)
{
  // three items whose first feature picks the label through a fixed linear map
  FeatureSet set;
  for (Label l : {Label{1}, Label{4}, Label{9}})
  {
    FeatureVector f;
    f.values.assign(10, 0.0);
    f.values[l] = 1.0;
    set.features.push_back(f);
    set.labels.push_back(l);
  }
  auto m = mlp_init({10, 10, 10}, Activation::ReLU, 1);
  for (auto &w : m.weights)
  {
    w = Matrix::identity(10);
  }
  EXPECT_EQ(evaluate(m, Standardizer{}, set), 1.0);
}

TEST(Evaluate, ZeroModelMatchesClassZeroFrequency)
{
  auto const &p = Problem::get();
  auto        m = mlp_init({32, 8, 10}, Activation::ReLU, 1);
  for (auto &w : m.weights)
  {
    for (auto &v : w.data())
    {
      v = 0.0;
    }
  }
  EXPECT_DOUBLE_EQ(evaluate(m, Standardizer{}, p.test_features), 0.1);
  EXPECT_DOUBLE_EQ(evaluate(m, p.test, p.bank, small_config()), 0.1);
}

TEST(Evaluate, Errors)
{
  auto const &p = Problem::get();
  auto const  m = mlp_init({32, 8, 10}, Activation::ReLU, 1);
  EXPECT_EQ(error_of([&] { evaluate(m, Standardizer{}, FeatureSet{}); }), ErrorCode::EmptyDataset);
  EXPECT_EQ(error_of([&] { evaluate(m, Dataset(Split::Test), p.bank, small_config()); }), ErrorCode::EmptyDataset);
  auto const wide = mlp_init({40, 8, 10}, Activation::ReLU, 1);
  EXPECT_EQ(error_of([&] { evaluate(wide, p.test, p.bank, small_config()); }), ErrorCode::DimensionMismatch);
}

TEST(RunTraining, InfiniteFactorNeverUpdates)
{
  auto c         = small_config();
  c.drift_factor = std::numeric_limits<double>::infinity();
  auto const r   = run(c);
  EXPECT_EQ(r.model, r.initial_model);
  EXPECT_EQ(r.updates_used, 0u);
  for (auto const &rep : r.reports)
  {
    EXPECT_FALSE(rep.drifted);
    EXPECT_FALSE(rep.weights_updated);
  }
}

TEST(RunTraining, ZeroFactorUpdatesEveryBatchWithSpread)
{
  auto c         = small_config();
  c.drift_factor = 0.0;
  auto const r   = run(c);
  ASSERT_EQ(r.reports.size(), 6u);
  for (auto const &rep : r.reports)
  {
    EXPECT_GT(rep.mean_principal_std, 0.0);
    EXPECT_TRUE(rep.weights_updated);
  }
  EXPECT_EQ(r.updates_used, r.total_batches);
  EXPECT_NE(r.model, r.initial_model);
}

TEST(RunTraining, FirstBatchAlwaysTrainsUnderFiniteFactor)
{
  for (double f : {0.5, 1.1, 1.5, 1e6})
  {
    auto c         = small_config();
    c.drift_factor = f;
    auto const r   = run(c);
    EXPECT_TRUE(r.reports.front().weights_updated) << f;
  }
}

TEST(RunTraining, Deterministic)
{
  auto const a = run(small_config());
  auto const b = run(small_config());
  EXPECT_EQ(a.model, b.model);
  ASSERT_EQ(a.reports.size(), b.reports.size());
  for (std::size_t i = 0; i < a.reports.size(); ++i)
  {
    EXPECT_EQ(a.reports[i].drifted, b.reports[i].drifted);
    EXPECT_EQ(a.reports[i].weights_updated, b.reports[i].weights_updated);
    EXPECT_EQ(a.reports[i].test_accuracy, b.reports[i].test_accuracy);
    EXPECT_EQ(a.reports[i].distances, b.reports[i].distances);
    EXPECT_EQ(std::memcmp(a.reports[i].class_std.data(), b.reports[i].class_std.data(), sizeof(double) * kNumClasses), 0);
  }
}

TEST(RunTraining, ExtractingPerBatchMatchesPrecomputed)
{
  auto const &p  = Problem::get();
  auto const  c  = small_config();
  auto const  a  = run(c);
  auto const  b  = run_training(p.train, p.test, p.bank, c);
  EXPECT_EQ(a.model, b.model);
  EXPECT_EQ(a.final_accuracy, b.final_accuracy);
}

TEST(RunTraining, ReportsAreConsistent)
{
  for (double f : {0.0, 0.9, 1.1, 1.5, 3.0})
  {
    auto c         = small_config();
    c.drift_factor = f;
    c.eval_every   = 2;
    auto const r   = run(c);
    std::size_t updates = 0;
    for (std::size_t i = 0; i < r.reports.size(); ++i)
    {
      auto const &rep = r.reports[i];
      EXPECT_EQ(rep.batch_index, i);
      if (rep.weights_updated)
      {
        EXPECT_TRUE(rep.drifted);
        ++updates;
      }
      EXPECT_EQ(rep.distances.size(), kNumPairs);
      bool const expect_eval = i % 2 == 0 || i + 1 == r.reports.size();
      EXPECT_EQ(rep.test_accuracy.has_value(), expect_eval);
      if (rep.test_accuracy)
      {
        EXPECT_GE(*rep.test_accuracy, 0.0);
        EXPECT_LE(*rep.test_accuracy, 1.0);
      }
    }
    EXPECT_EQ(updates, r.updates_used);
    EXPECT_EQ(r.final_accuracy, *r.reports.back().test_accuracy);
  }
}

TEST(RunTraining, MaxBatchesTruncates)
{
  auto c        = small_config();
  c.max_batches = 2;
  auto const r  = run(c);
  EXPECT_EQ(r.total_batches, 2u);
  EXPECT_EQ(r.reports.size(), 2u);
}

TEST(RunTraining, LearnsSyntheticClasses)
{
  auto c         = small_config();
  c.drift_factor = 0.0;
  c.update_steps = 50;
  auto const r   = run(c);
  EXPECT_GT(r.final_accuracy, 0.5);
}

TEST(RunTraining, GatingMonotoneUnderFrozenReferences)
{
  std::vector<double> factors{0.0, 0.5, 0.8, 0.9, 1.0, 1.05, 1.1, 1.2, 1.5, 2.0, 3.0,
                              std::numeric_limits<double>::infinity()};
  std::size_t         prev_updates = std::numeric_limits<std::size_t>::max();
  std::vector<bool>   prev_gates;
  for (double f : factors)
  {
    auto c              = small_config();
    c.batch_size        = 20;
    c.drift_factor      = f;
    c.freeze_references = true;
    c.update_steps      = 1;
    c.eval_every        = 0;
    auto const        r = run(c);
    std::vector<bool> gates;
    for (auto const &rep : r.reports)
    {
      gates.push_back(rep.weights_updated);
    }
    EXPECT_LE(r.updates_used, prev_updates) << f;
    // every gate open under the larger factor is open under the smaller one
    for (std::size_t i = 0; i < prev_gates.size(); ++i)
    {
      if (gates[i])
      {
        EXPECT_TRUE(prev_gates[i]) << f << " batch " << i;
      }
    }
    prev_updates = r.updates_used;
    prev_gates   = gates;
  }
  EXPECT_EQ(prev_updates, 0u);
}

TEST(RunTraining, ConfigErrors)
{
  auto c       = small_config();
  c.batch_size = 5;
  EXPECT_EQ(error_of([&] { run(c); }), ErrorCode::BadConfig);
  c             = small_config();
  c.max_batches = 0;
  EXPECT_EQ(error_of([&] { run(c); }), ErrorCode::BadConfig);
  c        = small_config();
  c.hidden = {};
  EXPECT_EQ(error_of([&] { run(c); }), ErrorCode::BadConfig);
}

}  // namespace
