// Command-line front end: generate benchmark data, train/evaluate forests,
// and run multi-classifier benchmark sweeps to CSV.

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pf/dataset.hpp"
#include "pf/errors.hpp"
#include "pf/forest.hpp"
#include "pf/nn_ensemble.hpp"
#include "pf/report.hpp"
#include "pf/synthetic.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format_accuracy(double value) {
  std::array<char, 64> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, 9);
  if (ec != std::errc()) return "?";
  return std::string(buf.data(), ptr);
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  for (const char c : csv) {
    if (c == ',') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else {
      item += c;
    }
  }
  if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<pf::MeasureKind> parse_measures(const std::string& csv) {
  std::vector<pf::MeasureKind> out;
  for (const auto& name : split_list(csv)) out.push_back(pf::measure_kind_from_string(name));
  if (out.empty()) throw std::invalid_argument("at least one measure is required");
  return out;
}

const std::vector<std::string> kKnownClassifiers = {"pf2", "ee_pf2", "nn:adtw", "nn:cdtw",
                                                    "nn:lcss"};

std::vector<std::string> parse_classifiers(const std::string& csv) {
  std::vector<std::string> out = split_list(csv);
  if (out.empty()) throw std::invalid_argument("at least one classifier is required");
  for (const auto& id : out) {
    if (std::find(kKnownClassifiers.begin(), kKnownClassifiers.end(), id) ==
        kKnownClassifiers.end()) {
      throw std::invalid_argument("unknown classifier '" + id + "' (choose from pf2, ee_pf2, "
                                  "nn:adtw, nn:cdtw, nn:lcss)");
    }
  }
  return out;
}

double batch_accuracy(const pf::Dataset& truth, const std::vector<std::string>& predicted) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predicted[i] == truth.label_name(i)) ++correct;
  }
  return truth.size() == 0 ? 0.0
                           : static_cast<double>(correct) / static_cast<double>(truth.size());
}

void write_predictions(const std::string& path, const pf::Dataset& queries,
                       const std::vector<std::string>& predicted) {
  std::ofstream out(path);
  if (!out) throw pf::IoError("cannot open file for writing: " + path);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    out << queries.label_name(i) << '\t' << predicted[i] << '\n';
  }
  out.flush();
  if (!out) throw pf::IoError("write failure: " + path);
}

void print_confusion(const pf::Dataset& test, const std::vector<std::string>& predicted,
                     const std::vector<std::string>& model_classes) {
  // Rows are the true classes of the test set; columns are the model's
  // classes. Predictions always come out of the model's class list.
  std::cout << "confusion matrix (rows: truth, columns: predicted)\n";
  std::cout << "truth\\pred";
  for (const auto& name : model_classes) std::cout << '\t' << name;
  std::cout << '\n';
  for (std::size_t truth = 0; truth < test.class_count(); ++truth) {
    std::vector<std::size_t> row(model_classes.size(), 0);
    for (std::size_t i = 0; i < test.size(); ++i) {
      if (test.label_index(i) != truth) continue;
      const auto it = std::find(model_classes.begin(), model_classes.end(), predicted[i]);
      row[static_cast<std::size_t>(it - model_classes.begin())]++;
    }
    std::cout << test.classes()[truth];
    for (const auto count : row) std::cout << '\t' << count;
    std::cout << '\n';
  }
}

// --- subcommand payloads ------------------------------------------------

struct SynthArgs {
  std::string train_path;
  std::string test_path;
  std::size_t per_class = 100;
  std::size_t test_per_class = 100;
  std::size_t length = 100;
  double noise = 0.02;
  std::uint64_t seed = 7;
};

int run_synth(const SynthArgs& args) {
  pf::SyntheticSpec spec;
  spec.train_per_class = args.per_class;
  spec.test_per_class = args.test_per_class;
  spec.length = args.length;
  spec.noise_sigma = args.noise;
  spec.seed = args.seed;
  const auto [train, test] = pf::make_shift_dataset(spec);
  train.save(args.train_path);
  test.save(args.test_path);
  std::cout << "wrote " << train.size() << " train and " << test.size() << " test series of length "
            << train.length() << '\n';
  return 0;
}

struct TrainArgs {
  std::string train_path;
  std::string model_path;
  std::size_t trees = 100;
  std::size_t candidates = 5;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  std::string measures = "adtw,cdtw,lcss";
  bool normalize = false;
};

int run_train(const TrainArgs& args) {
  pf::Dataset train = pf::Dataset::load(args.train_path);
  if (args.normalize) train = pf::znormalized(train);
  pf::ForestConfig config;
  config.tree_count = args.trees;
  config.candidates = args.candidates;
  config.seed = args.seed;
  config.threads = args.threads;
  config.measures = parse_measures(args.measures);
  const pf::Forest forest = pf::Forest::train(train, config);
  forest.save(args.model_path);
  std::cout << "trained " << forest.tree_count() << " trees on " << train.size()
            << " series (" << train.class_count() << " classes, length " << train.length()
            << ") in " << format_accuracy(forest.train_seconds()) << " s\n";
  std::cout << "model written to " << args.model_path << '\n';
  return 0;
}

struct TestArgs {
  std::string model_path;
  std::string test_path;
  std::string predictions_path;
  unsigned threads = 0;
  bool normalize = false;
};

int run_test(const TestArgs& args) {
  const pf::Forest forest = pf::Forest::load(args.model_path);
  pf::Dataset test = pf::Dataset::load(args.test_path);
  if (args.normalize) test = pf::znormalized(test);
  const auto predicted = forest.predict_batch(test, args.threads);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (predicted[i] == test.label_name(i)) ++correct;
  }
  const double accuracy =
      static_cast<double>(correct) / static_cast<double>(test.size());
  std::cout << "accuracy " << format_accuracy(accuracy) << " (" << correct << "/" << test.size()
            << ")\n";
  print_confusion(test, predicted, forest.classes());
  if (!args.predictions_path.empty()) write_predictions(args.predictions_path, test, predicted);
  return 0;
}

struct BenchArgs {
  std::string train_path;
  std::string test_path;
  std::string out_path;
  std::string dataset_name;
  std::size_t resamples = 1;
  std::string classifiers = "pf2";
  std::size_t trees = 100;
  std::size_t candidates = 5;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  bool normalize = false;
  bool append = false;
};

pf::RunReport run_one_cell(const std::string& classifier, const pf::Dataset& train,
                           const pf::Dataset& test, const BenchArgs& args) {
  pf::RunReport report;
  report.classifier = classifier;
  report.seed = args.seed;

  std::vector<std::string> predicted;
  const auto t0 = Clock::now();
  if (classifier == "pf2") {
    pf::ForestConfig config;
    config.tree_count = args.trees;
    config.candidates = args.candidates;
    config.seed = args.seed;
    config.threads = args.threads;
    const pf::Forest forest = pf::Forest::train(train, config);
    report.train_seconds = seconds_since(t0);
    report.trees = args.trees;
    report.candidates = args.candidates;
    const auto t1 = Clock::now();
    predicted = forest.predict_batch(test, args.threads);
    report.test_seconds = seconds_since(t1);
  } else if (classifier == "ee_pf2") {
    const pf::NnEnsemble ensemble = pf::train_nn_ensemble(train, args.seed, args.threads);
    report.train_seconds = seconds_since(t0);
    const auto t1 = Clock::now();
    predicted = pf::ensemble_predict_batch(ensemble, train, test, args.threads);
    report.test_seconds = seconds_since(t1);
  } else {
    const pf::MeasureKind family = pf::measure_kind_from_string(classifier.substr(3));
    const pf::TunedConstituent tuned =
        pf::tune_nn_classifier(train, family, args.seed, args.threads);
    report.train_seconds = seconds_since(t0);
    const auto t1 = Clock::now();
    predicted = pf::nn_predict_batch(train, tuned.choice, test, args.threads);
    report.test_seconds = seconds_since(t1);
  }
  report.accuracy = batch_accuracy(test, predicted);
  report.predictions = std::move(predicted);
  return report;
}

int run_bench(const BenchArgs& args) {
  const auto classifiers = parse_classifiers(args.classifiers);
  pf::Dataset train = pf::Dataset::load(args.train_path);
  pf::Dataset test = pf::Dataset::load(args.test_path);
  if (args.normalize) {
    train = pf::znormalized(train);
    test = pf::znormalized(test);
  }
  if (args.resamples == 0) throw std::invalid_argument("--resamples must be at least 1");

  std::string dataset_name = args.dataset_name;
  if (dataset_name.empty()) {
    dataset_name = std::filesystem::path(args.train_path).stem().string();
  }

  std::vector<pf::RunReport> rows;
  std::cout << pf::kReportHeader << '\n';
  for (std::size_t fold = 0; fold < args.resamples; ++fold) {
    const auto plan = pf::ResamplePlan::from_split(args.seed, fold, train, test);
    const auto [fold_train, fold_test] = pf::stratified_resample(train, test, plan);
    for (const auto& classifier : classifiers) {
      pf::RunReport report = run_one_cell(classifier, fold_train, fold_test, args);
      report.dataset = dataset_name;
      report.fold = fold;
      report.predictions.clear();
      std::cout << pf::format_report_row(report) << '\n';
      rows.push_back(std::move(report));
    }
  }
  if (!args.out_path.empty()) {
    pf::write_report_csv(args.out_path, rows, args.append);
    std::cout << "report written to " << args.out_path << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proximity-forest time-series classification toolkit"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate the bundled synthetic benchmark");
  synth_cmd->add_option("--train", synth.train_path, "Output path for the training split")
      ->required();
  synth_cmd->add_option("--test", synth.test_path, "Output path for the test split")->required();
  synth_cmd->add_option("--per-class", synth.per_class, "Training series per class");
  synth_cmd->add_option("--test-per-class", synth.test_per_class, "Test series per class");
  synth_cmd->add_option("--length", synth.length, "Series length");
  synth_cmd->add_option("--noise", synth.noise, "Additive noise sigma");
  synth_cmd->add_option("--seed", synth.seed, "Generator seed");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train a forest and save it as JSON");
  train_cmd->add_option("--train", train.train_path, "Training data (TSV/CSV)")->required();
  train_cmd->add_option("--model", train.model_path, "Output model path")->required();
  train_cmd->add_option("--trees", train.trees, "Number of trees");
  train_cmd->add_option("--candidates", train.candidates, "Candidate splitters per node");
  train_cmd->add_option("--seed", train.seed, "Training seed");
  train_cmd->add_option("--threads", train.threads, "Worker threads (0 = all cores)");
  train_cmd->add_option("--measures", train.measures, "Comma list from adtw,cdtw,lcss");
  train_cmd->add_flag("--normalize", train.normalize, "Z-normalize each series first");

  TestArgs test;
  auto* test_cmd = app.add_subcommand("test", "Evaluate a saved model on a labelled file");
  test_cmd->add_option("--model", test.model_path, "Saved model path")->required();
  test_cmd->add_option("--test", test.test_path, "Test data (TSV/CSV)")->required();
  test_cmd->add_option("--predictions", test.predictions_path,
                       "Also write truth/prediction pairs to this file");
  test_cmd->add_option("--threads", test.threads, "Worker threads (0 = all cores)");
  test_cmd->add_flag("--normalize", test.normalize,
                     "Z-normalize each series first (match the training run)");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Benchmark classifiers over stratified resamples");
  bench_cmd->add_option("--train", bench.train_path, "Training data (TSV/CSV)")->required();
  bench_cmd->add_option("--test", bench.test_path, "Test data (TSV/CSV)")->required();
  bench_cmd->add_option("--out", bench.out_path, "CSV report path");
  bench_cmd->add_option("--dataset-name", bench.dataset_name,
                        "Dataset column value (default: train file stem)");
  bench_cmd->add_option("--resamples", bench.resamples, "Number of folds (fold 0 = original split)");
  bench_cmd->add_option("--classifiers", bench.classifiers,
                        "Comma list from pf2,ee_pf2,nn:adtw,nn:cdtw,nn:lcss");
  bench_cmd->add_option("--trees", bench.trees, "Trees per forest");
  bench_cmd->add_option("--candidates", bench.candidates, "Candidate splitters per node");
  bench_cmd->add_option("--seed", bench.seed, "Seed for resampling and training");
  bench_cmd->add_option("--threads", bench.threads, "Worker threads (0 = all cores)");
  bench_cmd->add_flag("--normalize", bench.normalize, "Z-normalize each series first");
  bench_cmd->add_flag("--append", bench.append, "Append to the CSV instead of overwriting");

  try {
    app.parse(argc, argv);
    if (synth_cmd->parsed()) return run_synth(synth);
    if (train_cmd->parsed()) return run_train(train);
    if (test_cmd->parsed()) return run_test(test);
    return run_bench(bench);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exits 0
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[E_USAGE]: " << e.what() << '\n';
    return 2;
  } catch (const pf::FormatError& e) {
    std::cerr << "error[E_FORMAT]: " << e.what() << '\n';
    return 3;
  } catch (const pf::IoError& e) {
    std::cerr << "error[E_IO]: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error[E_USAGE]: " << e.what() << '\n';
    return 2;
  }
}
