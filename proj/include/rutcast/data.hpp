#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rutcast::data {

// One loading period of one pavement structure.
struct Period {
  int index = 0;              // loading period, 1-based in input files
  double load_axes = 0.0;     // accumulated load axle count, non-decreasing
  double temperature_c = 0.0;
  double rut_depth_mm = 0.0;
};

struct SeriesRecord {
  std::string structure_id;
  std::vector<Period> periods;  // sorted, strictly increasing period index

  std::vector<double> depths() const;
  void set_depths(const std::vector<double>& d);
};

struct Sample {
  std::vector<double> features;
  double target = 0.0;       // next-period rutting depth, mm
  std::string source_id;     // structure the sample came from
  int target_period = 0;
};

struct SampleSet {
  std::string structure_id;
  std::vector<std::string> feature_names;
  std::vector<Sample> samples;

  std::size_t size() const { return samples.size(); }
};

// Chronological split: no test sample precedes a training sample.
struct SplitSpec {
  double train_fraction = 0.8;
  // When set, train = samples with target_period <= boundary_period.
  std::optional<int> boundary_period;
};

inline constexpr int kDefaultWindow = 5;
inline constexpr int kFeatureCount = 9;

// CSV column names; defaults match the documented file format.
struct CsvSchema {
  std::string structure_id = "structure_id";
  std::string period = "period";
  std::string load_axes = "load_axes";
  std::string temperature = "temperature_c";
  std::string rut_depth = "rut_depth_mm";
};

std::vector<SeriesRecord> load_series(const std::filesystem::path& csv_path,
                                      const CsvSchema& schema = {});
std::vector<SeriesRecord> parse_series_csv(std::istream& in, const std::string& name,
                                           const CsvSchema& schema = {});

std::string series_to_csv(const std::vector<SeriesRecord>& series, const CsvSchema& schema = {});
void write_series_csv(const std::filesystem::path& path, const std::vector<SeriesRecord>& series,
                      const CsvSchema& schema = {});

// Feature layout produced by build_samples for a given window size.
std::vector<std::string> feature_names(int window_size = kDefaultWindow);

// Sliding-window supervised samples. Feature vector per sample: the
// window_size most recent depths (oldest first), then load-axes change rate,
// temperature change rate, second difference of temperature, and the current
// accumulated load in millions of axles. Target is the next period's depth.
// Depths are expected to be smoothed beforehand; temperature and load stay raw.
SampleSet build_samples(const SeriesRecord& series, int window_size = kDefaultWindow);

std::pair<SampleSet, SampleSet> chronological_split(const SampleSet& set, const SplitSpec& spec);

// Per-feature z-score fitted on training data only.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> sd;  // zero-variance features keep sd = 1

  static Standardizer fit(const SampleSet& train);
  std::vector<double> transform(const std::vector<double>& features) const;
  SampleSet transform(const SampleSet& set) const;
};

}  // namespace rutcast::data
