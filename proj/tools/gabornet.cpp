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

#include "gabornet/gabornet.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace gabornet;

namespace {

struct Options
{
  fs::path                 mnist_dir{"data/mnist"};
  fs::path                 out_dir{"out"};
  BankConfig               bank;
  TrainConfig              train;
  bool                     strict_labels{true};
  std::size_t              train_limit{0};
  std::size_t              test_limit{0};
  std::string              split{"train"};
  fs::path                 features_path;
  fs::path                 checkpoint_path;
  std::vector<std::string> sigma_sets;
  std::vector<std::string> lambda_sets;
};

std::vector<double> parse_list(std::string const &text)
{
  std::vector<double> out;
  std::stringstream   ss(text);
  std::string         cell;
  while (std::getline(ss, cell, ','))
  {
    out.push_back(parse_double(cell));
  }
  if (out.empty())
  {
    throw Error(ErrorCode::BadConfig, "empty value list '" + text + "'");
  }
  return out;
}

std::string join(std::vector<double> const &values, char sep = ';')
{
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i)
  {
    if (i)
    {
      out += sep;
    }
    out += format_double(values[i]);
  }
  return out;
}

void require_file(fs::path const &p)
{
  if (!fs::is_regular_file(p))
  {
    throw Error(ErrorCode::Io, "missing input file " + p.string());
  }
}

Dataset load_split(Options const &opt, Split split)
{
  auto const paths = mnist_paths(opt.mnist_dir, split);
  require_file(paths.images);
  require_file(paths.labels);
  auto ds = load_idx_dataset(paths.images, paths.labels, split, opt.strict_labels);
  auto const limit = split == Split::Train ? opt.train_limit : opt.test_limit;
  return limit > 0 ? ds.head(limit) : ds;
}

nlohmann::json bank_json(BankConfig const &b)
{
  return {{"sigmas", b.sigmas},     {"lambdas", b.lambdas}, {"n_thetas", b.n_thetas},
          {"psi", b.psi},           {"gamma", b.gamma},     {"max_kernel_size", b.max_kernel_size}};
}

nlohmann::json config_json(Options const &opt)
{
  auto const &t = opt.train;
  return {{"batch_size", t.batch_size},
          {"drift_factor", format_double(t.drift_factor)},
          {"n_model_per_class", t.n_model_per_class},
          {"seed", t.seed},
          {"learning_rate", t.learning_rate},
          {"max_batches", t.max_batches},
          {"minkowski_p", t.minkowski_p},
          {"entropy_levels", t.entropy_levels},
          {"hidden", t.hidden},
          {"activation", std::string(to_string(t.activation))},
          {"init_epochs", t.init_epochs},
          {"update_steps", t.update_steps},
          {"eval_every", t.eval_every},
          {"standardize", t.standardize},
          {"freeze_references", t.freeze_references},
          {"train_limit", opt.train_limit},
          {"test_limit", opt.test_limit},
          {"bank", bank_json(opt.bank)}};
}

int cmd_filters(Options const &opt)
{
  auto const bank = make_filter_bank(opt.bank);
  auto       out  = open_output(opt.out_dir / "filters.csv");
  write_filters_csv(out, bank);
  std::cout << "wrote " << bank.size() << " kernels to " << (opt.out_dir / "filters.csv").string() << '\n';
  return 0;
}

int cmd_extract(Options const &opt)
{
  auto const split = opt.split == "test" ? Split::Test : Split::Train;
  auto const data  = load_split(opt, split);
  auto const bank  = make_filter_bank(opt.bank);
  auto const set   = extract_set(data, bank, opt.train.entropy_levels);
  auto       out   = open_output(opt.out_dir / "features.csv");
  write_features_csv(out, set);
  std::cout << "wrote " << set.size() << " feature vectors of length " << 2 * bank.size() << " to "
            << (opt.out_dir / "features.csv").string() << '\n';
  return 0;
}

int cmd_distances(Options const &opt)
{
  require_file(opt.features_path);
  std::ifstream in(opt.features_path);
  auto const    set = read_features_csv(in);
  if (set.size() == 0)
  {
    throw Error(ErrorCode::EmptyInput, "features file holds no rows");
  }
  // without --batch-size the whole file is one batch
  auto const chunk = opt.train.batch_size == 0 ? set.size() : opt.train.batch_size;
  auto out = open_output(opt.out_dir / "distances.csv");
  write_distances_header(out);
  std::size_t batch = 0;
  for (std::size_t start = 0; start < set.size(); start += chunk, ++batch)
  {
    std::array<std::vector<FeatureVector>, kNumClasses> by_class;
    for (std::size_t i = start; i < std::min(set.size(), start + chunk); ++i)
    {
      by_class[set.labels[i]].push_back(set.features[i]);
    }
    std::vector<std::vector<double>> centroids;
    for (std::size_t d = 0; d < kNumClasses; ++d)
    {
      if (by_class[d].empty())
      {
        throw Error(ErrorCode::InsufficientSamples,
                    "batch " + std::to_string(batch) + " has no samples of digit " + std::to_string(d));
      }
      centroids.push_back(centroid(by_class[d]));
    }
    write_distance_rows(out, batch, pairwise_centroid_distances(centroids, opt.train.minkowski_p));
  }
  std::cout << "wrote " << batch << " batch(es) of 45 distances to " << (opt.out_dir / "distances.csv").string()
            << '\n';
  return 0;
}

int cmd_train(Options const &opt)
{
  auto const train = load_split(opt, Split::Train);
  auto const test  = load_split(opt, Split::Test);
  auto const bank  = make_filter_bank(opt.bank);
  auto const run   = run_training(train, test, bank, opt.train);

  fs::create_directories(opt.out_dir);
  {
    auto out = open_output(opt.out_dir / "accuracy.csv");
    write_accuracy_csv(out, run.reports);
  }
  {
    auto out = open_output(opt.out_dir / "distances.csv");
    write_distances_csv(out, run.reports);
  }
  save_checkpoint(opt.out_dir / "model.ckpt",
                  Checkpoint{run.model, run.standardizer, opt.bank, opt.train.entropy_levels});

  nlohmann::json summary = {{"config", config_json(opt)},
                            {"updates_used", run.updates_used},
                            {"total_batches", run.total_batches},
                            {"update_ratio", run.update_ratio()},
                            {"final_accuracy", run.final_accuracy}};
  auto out = open_output(opt.out_dir / "summary.json");
  out << summary.dump(2) << '\n';

  std::cout << "final accuracy " << format_double(run.final_accuracy) << ", weight updates "
            << run.updates_used << "/" << run.total_batches << '\n';
  return 0;
}

int cmd_eval(Options const &opt)
{
  require_file(opt.checkpoint_path);
  auto const ckpt = load_checkpoint(opt.checkpoint_path);
  auto const test = load_split(opt, Split::Test);
  auto const bank = make_filter_bank(ckpt.bank);
  double const acc = evaluate(ckpt.model, ckpt.standardizer, test, bank, ckpt.entropy_levels);

  nlohmann::json result = {{"checkpoint", opt.checkpoint_path.string()},
                           {"test_items", test.size()},
                           {"accuracy", acc}};
  auto out = open_output(opt.out_dir / "eval.json");
  out << result.dump(2) << '\n';
  std::cout << "accuracy " << format_double(acc) << '\n';
  return 0;
}

struct SweepCandidate
{
  std::vector<double>         sigmas;
  std::vector<double>         lambdas;
  std::vector<DistanceRecord> distances;
  double                      min{0.0};
  double                      mean{0.0};
  double                      cv{0.0};
};

int cmd_sweep(Options const &opt)
{
  auto const sigma_sets  = opt.sigma_sets.empty() ? std::vector<std::string>{join(opt.bank.sigmas, ',')} : opt.sigma_sets;
  auto const lambda_sets = opt.lambda_sets.empty() ? std::vector<std::string>{join(opt.bank.lambdas, ',')} : opt.lambda_sets;

  auto const train  = load_split(opt, Split::Train);
  auto const models = build_model_digits(train, opt.train.n_model_per_class, RunSeeds::derive(opt.train.seed).model_digits);

  std::vector<SweepCandidate> candidates;
  for (auto const &s : sigma_sets)
  {
    for (auto const &l : lambda_sets)
    {
      SweepCandidate c;
      c.sigmas        = parse_list(s);
      c.lambdas       = parse_list(l);
      BankConfig cfg  = opt.bank;
      cfg.sigmas      = c.sigmas;
      cfg.lambdas     = c.lambdas;
      auto const bank = make_filter_bank(cfg);
      std::vector<std::vector<double>> feats;
      for (auto const &m : models)
      {
        feats.push_back(extract_features(m.image, bank, opt.train.entropy_levels).values);
      }
      c.distances = pairwise_centroid_distances(feats, opt.train.minkowski_p);
      c.min       = c.distances.front().distance;
      double sum = 0.0, sq = 0.0;
      for (auto const &r : c.distances)
      {
        c.min = std::min(c.min, r.distance);
        sum += r.distance;
        sq += r.distance * r.distance;
      }
      c.mean          = sum / static_cast<double>(c.distances.size());
      double const sd = std::sqrt(std::max(0.0, sq / static_cast<double>(c.distances.size()) - c.mean * c.mean));
      c.cv            = c.mean > 0.0 ? sd / c.mean : 0.0;
      candidates.push_back(std::move(c));
    }
  }

  // rank 1 = largest minimum pairwise distance; ties keep candidate order
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return candidates[a].min > candidates[b].min; });

  auto out = open_output(opt.out_dir / "sweep.csv");
  write_schema(out, "sweep", "candidate,sigmas,lambdas,row,pair_index,digit_a,digit_b,distance,min,mean,cv,rank");
  for (std::size_t i = 0; i < candidates.size(); ++i)
  {
    auto const &c = candidates[i];
    for (auto const &r : c.distances)
    {
      out << i << ',' << join(c.sigmas) << ',' << join(c.lambdas) << ",distance," << r.pair_index << ','
          << static_cast<int>(r.digit_a) << ',' << static_cast<int>(r.digit_b) << ','
          << format_double(r.distance) << ",,,,\n";
    }
  }
  for (std::size_t rank = 0; rank < order.size(); ++rank)
  {
    auto const &c = candidates[order[rank]];
    out << order[rank] << ',' << join(c.sigmas) << ',' << join(c.lambdas) << ",summary,,,,,"
        << format_double(c.min) << ',' << format_double(c.mean) << ',' << format_double(c.cv) << ','
        << rank + 1 << '\n';
  }
  std::cout << "swept " << candidates.size() << " candidate(s); best (largest minimum distance): sigmas "
            << join(candidates[order.front()].sigmas, ',') << " lambdas "
            << join(candidates[order.front()].lambdas, ',') << '\n';
  return 0;
}

void add_bank_flags(CLI::App *cmd, Options &opt, std::string &sigmas, std::string &lambdas)
{
  cmd->add_option("--sigmas", sigmas, "Gaussian envelope widths, comma separated")->capture_default_str();
  cmd->add_option("--lambdas", lambdas, "wavelengths, comma separated")->capture_default_str();
  cmd->add_option("--n-thetas", opt.bank.n_thetas, "orientations in [0, pi)")->capture_default_str();
  cmd->add_option("--psi", opt.bank.psi, "phase offset (radians)")->capture_default_str();
  cmd->add_option("--gamma", opt.bank.gamma, "spatial aspect ratio")->capture_default_str();
  cmd->add_option("--max-kernel-size", opt.bank.max_kernel_size, "kernel side cap")->capture_default_str();
}

void add_data_flags(CLI::App *cmd, Options &opt)
{
  cmd->add_option("--mnist-dir", opt.mnist_dir, "directory with the four MNIST IDX files")->capture_default_str();
  cmd->add_option("--strict-labels", opt.strict_labels, "reject label bytes above 9")->capture_default_str();
  cmd->add_option("--train-limit", opt.train_limit, "use only the first N training images (0 = all)");
  cmd->add_option("--test-limit", opt.test_limit, "use only the first N test images (0 = all)");
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Gabor-feature digit classifier with drift-gated MLP training"};
  app.set_config("--config", "", "TOML/INI file of flag values; command-line flags win");
  app.require_subcommand(1);

  Options     opt;
  std::string sigmas  = "1,2,3";
  std::string lambdas = "4,8,12";
  std::string hidden  = "100";
  std::string drift   = "1.1";
  std::string activation = "relu";

  auto common = [&](CLI::App *cmd) {
    cmd->add_option("--out-dir", opt.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--seed", opt.train.seed, "random seed")->capture_default_str();
    cmd->add_option("--entropy-levels", opt.train.entropy_levels, "entropy quantization levels")->capture_default_str();
    cmd->add_option("--minkowski-p", opt.train.minkowski_p, "Minkowski order")->capture_default_str();
    add_bank_flags(cmd, opt, sigmas, lambdas);
  };

  auto *filters = app.add_subcommand("filters", "dump the Gabor filter bank as CSV");
  common(filters);

  auto *extract = app.add_subcommand("extract", "write per-image feature vectors as CSV");
  common(extract);
  add_data_flags(extract, opt);
  extract->add_option("--split", opt.split, "train or test")->check(CLI::IsMember({"train", "test"}))->capture_default_str();

  auto *distances = app.add_subcommand("distances", "pairwise class-centroid distances from a features CSV");
  common(distances);
  distances->add_option("--features", opt.features_path, "features CSV written by 'extract'")->required();
  opt.train.batch_size = 0;
  distances->add_option("--batch-size", opt.train.batch_size, "rows per batch (0 = whole file)");

  auto *train = app.add_subcommand("train", "drift-gated training run");
  auto *eval  = app.add_subcommand("eval", "accuracy of a checkpoint on the test split");
  auto *sweep = app.add_subcommand("sweep", "model-digit distance statistics over filter-bank candidates");
  for (auto *cmd : {train, sweep})
  {
    common(cmd);
    add_data_flags(cmd, opt);
    cmd->add_option("--n-model", opt.train.n_model_per_class, "images averaged per model digit")->capture_default_str();
  }
  train->add_option("--batch-size", opt.train.batch_size, "training batch size");
  train->add_option("--drift-factor", drift, "gate threshold as a multiple of the reference spread ('inf' never opens)")->capture_default_str();
  train->add_option("--learning-rate", opt.train.learning_rate, "gradient-descent step size")->capture_default_str();
  train->add_option("--max-batches", opt.train.max_batches, "stop after this many batches");
  train->add_option("--hidden", hidden, "hidden layer sizes, comma separated")->capture_default_str();
  train->add_option("--activation", activation, "hidden activation")->check(CLI::IsMember({"relu", "logistic"}))->capture_default_str();
  train->add_option("--eval-every", opt.train.eval_every, "evaluate the test set every N batches (0 = last only)")->capture_default_str();
  train->add_option("--init-epochs", opt.train.init_epochs, "gradient steps on the model digits")->capture_default_str();
  train->add_option("--update-steps", opt.train.update_steps, "gradient steps per opened gate")->capture_default_str();
  train->add_option("--standardize", opt.train.standardize, "z-score features before the MLP")->capture_default_str();
  train->add_flag("--freeze-references", opt.train.freeze_references,
                  "record gate decisions against the batch-0 references only");

  common(eval);
  add_data_flags(eval, opt);
  eval->add_option("--checkpoint", opt.checkpoint_path, "checkpoint written by 'train'")->required();

  sweep->add_option("--sigma-set", opt.sigma_sets, "candidate sigma list (repeatable), e.g. 1,2,3");
  sweep->add_option("--lambda-set", opt.lambda_sets, "candidate lambda list (repeatable), e.g. 4,8,12");

  CLI11_PARSE(app, argc, argv);

  try
  {
    opt.bank.sigmas  = parse_list(sigmas);
    opt.bank.lambdas = parse_list(lambdas);
    if (train->parsed())
    {
      if (opt.train.batch_size == 0)
      {
        opt.train.batch_size = 256;
      }
      opt.train.drift_factor = parse_double(drift);
      opt.train.activation   = activation == "logistic" ? Activation::Logistic : Activation::ReLU;
      opt.train.hidden.clear();
      for (double h : parse_list(hidden))
      {
        if (!(h >= 1.0) || h != std::floor(h))
        {
          throw Error(ErrorCode::BadConfig, "hidden sizes must be positive integers");
        }
        opt.train.hidden.push_back(static_cast<std::size_t>(h));
      }
    }

    if (filters->parsed())
    {
      return cmd_filters(opt);
    }
    if (extract->parsed())
    {
      return cmd_extract(opt);
    }
    if (distances->parsed())
    {
      return cmd_distances(opt);
    }
    if (train->parsed())
    {
      return cmd_train(opt);
    }
    if (eval->parsed())
    {
      return cmd_eval(opt);
    }
    if (sweep->parsed())
    {
      return cmd_sweep(opt);
    }
  }
  catch (std::exception const &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
