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

#include "gabornet/checkpoint.hpp"

#include "fixtures.hpp"

#include "gtest/gtest.h"

#include <cstdio>
#include <map>
#include <set>
#include <sys/wait.h>
#include <fstream>
#include <sstream>

#ifndef GABORNET_CLI_PATH
#error "GABORNET_CLI_PATH must name the built command-line tool"
#endif

namespace {

using namespace gabornet;
namespace fs = std::filesystem;

struct Outcome
{
  int         status;
  std::string output;
};

Outcome run_cli(std::string const &args)
{
  std::string const cmd  = std::string(GABORNET_CLI_PATH) + " " + args + " 2>&1";
  FILE             *pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr)
  {
    return {-1, "popen failed"};
  }
  std::string output;
  char        buf[4096];
  while (auto n = std::fread(buf, 1, sizeof buf, pipe))
  {
    output.append(buf, n);
  }
  int const status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, output};
}

std::vector<std::string> read_lines(fs::path const &path)
{
  std::ifstream            in(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);)
  {
    lines.push_back(line);
  }
  return lines;
}

std::string read_all(fs::path const &path)
{
  std::ifstream      in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_fields(std::string const &line)
{
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

// A tiny MNIST-shaped directory: 28x28 synthetic digits.
fs::path const &mnist_dir()
{
  static fs::path const dir = [] {
    auto d = fixtures::scratch_dir("cli_mnist");
    fixtures::write_dataset_idx(fixtures::synthetic_dataset(20, 11, Split::Train, 28), d / "train-images-idx3-ubyte",
                                d / "train-labels-idx1-ubyte");
    fixtures::write_dataset_idx(fixtures::synthetic_dataset(5, 12, Split::Test, 28), d / "t10k-images-idx3-ubyte",
                                d / "t10k-labels-idx1-ubyte");
    return d;
  }();
  return dir;
}

std::string data_flags()
{
  return "--mnist-dir " + mnist_dir().string();
}

TEST(Cli, FiltersDumpsDefaultBank)
{
  auto const out = fixtures::scratch_dir("cli_filters");
  auto const r   = run_cli("filters --out-dir " + out.string());
  ASSERT_EQ(r.status, 0) << r.output;
  auto const lines = read_lines(out / "filters.csv");
  ASSERT_GT(lines.size(), 2u);
  EXPECT_EQ(lines[0], "# gabornet filters v1");
  std::set<std::string> kernels;
  for (std::size_t i = 2; i < lines.size(); ++i)
  {
    kernels.insert(lines[i].substr(0, lines[i].find(',')));
  }
  EXPECT_EQ(kernels.size(), 72u);
}

TEST(Cli, ExtractTenImages)
{
  auto const out = fixtures::scratch_dir("cli_extract");
  auto const r   = run_cli("extract " + data_flags() + " --train-limit 10 --out-dir " + out.string());
  ASSERT_EQ(r.status, 0) << r.output;
  auto const lines = read_lines(out / "features.csv");
  ASSERT_EQ(lines.size(), 12u);
  for (std::size_t i = 1; i < lines.size(); ++i)
  {
    EXPECT_EQ(count_fields(lines[i]), 145u);
  }
}

TEST(Cli, DistancesFromFeatures)
{
  auto const out = fixtures::scratch_dir("cli_distances");
  ASSERT_EQ(run_cli("extract " + data_flags() + " --train-limit 40 --out-dir " + out.string()).status, 0);
  auto const r = run_cli("distances --features " + (out / "features.csv").string() + " --out-dir " + out.string());
  ASSERT_EQ(r.status, 0) << r.output;
  auto const lines = read_lines(out / "distances.csv");
  EXPECT_EQ(lines[1], "batch,pair_index,digit_a,digit_b,distance");
  EXPECT_EQ(lines.size(), 2u + 45u);
}

TEST(Cli, TrainOneBatch)
{
  auto const out = fixtures::scratch_dir("cli_train");
  auto const r   = run_cli("train " + data_flags() + " --n-model 5 --batch-size 50 --max-batches 1 --out-dir " + out.string());
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_EQ(read_lines(out / "accuracy.csv").size(), 3u);
  EXPECT_EQ(read_lines(out / "distances.csv").size(), 2u + 45u);
  EXPECT_TRUE(fs::exists(out / "model.ckpt"));
  auto const summary = read_all(out / "summary.json");
  EXPECT_NE(summary.find("\"total_batches\": 1"), std::string::npos) << summary;
  EXPECT_NE(summary.find("updates_used"), std::string::npos);
  EXPECT_NE(summary.find("final_accuracy"), std::string::npos);
}

TEST(Cli, TrainIsRepeatableAndEvalReadsCheckpoint)
{
  auto const  a    = fixtures::scratch_dir("cli_train_a");
  auto const  b    = fixtures::scratch_dir("cli_train_b");
  std::string args = "train " + data_flags() + " --n-model 5 --batch-size 40 --hidden 16 --update-steps 5 --out-dir ";
  ASSERT_EQ(run_cli(args + a.string()).status, 0);
  ASSERT_EQ(run_cli(args + b.string()).status, 0);
  EXPECT_EQ(read_all(a / "accuracy.csv"), read_all(b / "accuracy.csv"));
  EXPECT_EQ(read_all(a / "distances.csv"), read_all(b / "distances.csv"));
  EXPECT_EQ(read_all(a / "model.ckpt"), read_all(b / "model.ckpt"));

  auto const r = run_cli("eval " + data_flags() + " --checkpoint " + (a / "model.ckpt").string() + " --out-dir " +
                         a.string());
  ASSERT_EQ(r.status, 0) << r.output;
  auto const pos = r.output.find("accuracy ");
  ASSERT_NE(pos, std::string::npos) << r.output;
  double const acc = std::stod(r.output.substr(pos + 9));
  EXPECT_GE(acc, 0.0);
  EXPECT_LE(acc, 1.0);
  EXPECT_TRUE(fs::exists(a / "eval.json"));
}

TEST(Cli, MissingIdxFileFails)
{
  auto const out = fixtures::scratch_dir("cli_missing");
  auto const r   = run_cli("train --mnist-dir " + out.string() + " --out-dir " + out.string());
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.output.find("train-images-idx3-ubyte"), std::string::npos) << r.output;
  EXPECT_FALSE(fs::exists(out / "accuracy.csv"));
}

TEST(Cli, BadFlagFails)
{
  EXPECT_NE(run_cli("train --drift-factor banana").status, 0);
  EXPECT_NE(run_cli("no-such-command").status, 0);
}

TEST(Cli, SweepSingleCandidate)
{
  auto const out = fixtures::scratch_dir("cli_sweep");
  auto const r   = run_cli("sweep " + data_flags() + " --n-model 5 --sigma-set 1,2,3 --lambda-set 4,8,12 --out-dir " +
                         out.string());
  ASSERT_EQ(r.status, 0) << r.output;
  auto const  lines     = read_lines(out / "sweep.csv");
  std::size_t distances = 0;
  std::size_t summaries = 0;
  for (std::size_t i = 2; i < lines.size(); ++i)
  {
    distances += lines[i].find(",distance,") != std::string::npos;
    summaries += lines[i].find(",summary,") != std::string::npos;
  }
  EXPECT_EQ(distances, 45u);
  EXPECT_EQ(summaries, 1u);
}

TEST(Cli, SweepDuplicateCandidatesMatch)
{
  auto const out = fixtures::scratch_dir("cli_sweep_dup");
  auto const r   = run_cli("sweep " + data_flags() +
                         " --n-model 5 --sigma-set 1,2 --sigma-set 1,2 --lambda-set 4,8 --out-dir " + out.string());
  ASSERT_EQ(r.status, 0) << r.output;
  std::map<std::string, std::vector<std::string>> rows;
  for (auto const &line : read_lines(out / "sweep.csv"))
  {
    if (line.empty() || line[0] == '#' || line.rfind("candidate", 0) == 0)
    {
      continue;
    }
    auto const comma = line.find(',');
    auto       rest  = line.substr(comma + 1);
    if (rest.find(",summary,") != std::string::npos)
    {
      // drop the trailing rank, which necessarily differs
      rest = rest.substr(0, rest.rfind(','));
    }
    rows[line.substr(0, comma)].push_back(rest);
  }
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows.begin()->second, rows.rbegin()->second);
}

}  // namespace
