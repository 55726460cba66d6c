#include "rutcast/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "rutcast/util.hpp"

namespace rutcast::data {

std::vector<double> SeriesRecord::depths() const {
  std::vector<double> out;
  out.reserve(periods.size());
  for (const auto& p : periods) out.push_back(p.rut_depth_mm);
  return out;
}

void SeriesRecord::set_depths(const std::vector<double>& d) {
  if (d.size() != periods.size())
    throw ValidationError("set_depths: length mismatch for " + structure_id);
  for (std::size_t i = 0; i < d.size(); ++i) periods[i].rut_depth_mm = d[i];
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  for (auto& c : cells) c = std::string(trim(c));
  return cells;
}

int find_column(const std::vector<std::string>& header, const std::string& name,
                const std::string& context) {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end())
    throw ValidationError(context + ": missing required column '" + name + "'");
  return int(it - header.begin());
}

}  // namespace

std::vector<SeriesRecord> parse_series_csv(std::istream& in, const std::string& name,
                                           const CsvSchema& schema) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(name + ": no records (empty file)");
  const auto header = split_csv_line(line);
  const int c_id = find_column(header, schema.structure_id, name);
  const int c_period = find_column(header, schema.period, name);
  const int c_load = find_column(header, schema.load_axes, name);
  const int c_temp = find_column(header, schema.temperature, name);
  const int c_depth = find_column(header, schema.rut_depth, name);

  std::map<std::string, SeriesRecord> by_id;
  std::vector<std::string> order;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (int(cells.size()) < int(header.size()))
      throw ValidationError(name + ": row " + std::to_string(row) + ": expected " +
                            std::to_string(header.size()) + " cells, got " +
                            std::to_string(cells.size()));
    const std::string ctx = name + ": row " + std::to_string(row);
    Period p;
    p.index = int(parse_long(cells[c_period], ctx));
    p.load_axes = parse_double(cells[c_load], ctx);
    p.temperature_c = parse_double(cells[c_temp], ctx);
    p.rut_depth_mm = parse_double(cells[c_depth], ctx);
    if (!std::isfinite(p.load_axes) || !std::isfinite(p.temperature_c) ||
        !std::isfinite(p.rut_depth_mm))
      throw ValidationError(ctx + ": non-finite value");
    const std::string& id = cells[c_id];
    if (id.empty()) throw ValidationError(ctx + ": empty structure_id");
    auto [it, inserted] = by_id.try_emplace(id);
    if (inserted) {
      it->second.structure_id = id;
      order.push_back(id);
    }
    it->second.periods.push_back(p);
  }
  if (order.empty()) throw ValidationError(name + ": no records");

  std::vector<SeriesRecord> out;
  out.reserve(order.size());
  for (const auto& id : order) {
    SeriesRecord rec = std::move(by_id[id]);
    std::stable_sort(rec.periods.begin(), rec.periods.end(),
                     [](const Period& a, const Period& b) { return a.index < b.index; });
    for (std::size_t i = 1; i < rec.periods.size(); ++i) {
      if (rec.periods[i].index == rec.periods[i - 1].index)
        throw ValidationError(name + ": duplicate period " + std::to_string(rec.periods[i].index) +
                              " for structure " + id);
      if (rec.periods[i].load_axes < rec.periods[i - 1].load_axes)
        throw ValidationError(name + ": non-monotonic load axes for structure " + id +
                              " at period " + std::to_string(rec.periods[i].index));
    }
    for (const auto& p : rec.periods)
      if (p.load_axes < 0)
        throw ValidationError(name + ": negative load axes for structure " + id + " at period " +
                              std::to_string(p.index));
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<SeriesRecord> load_series(const std::filesystem::path& csv_path,
                                      const CsvSchema& schema) {
  std::ifstream in(csv_path);
  if (!in) throw ValidationError("cannot open file: " + csv_path.string());
  return parse_series_csv(in, csv_path.filename().string(), schema);
}

std::string series_to_csv(const std::vector<SeriesRecord>& series, const CsvSchema& schema) {
  std::ostringstream out;
  out << schema.structure_id << ',' << schema.period << ',' << schema.load_axes << ','
      << schema.temperature << ',' << schema.rut_depth << '\n';
  for (const auto& rec : series)
    for (const auto& p : rec.periods)
      out << rec.structure_id << ',' << p.index << ',' << format_double(p.load_axes) << ','
          << format_double(p.temperature_c) << ',' << format_double(p.rut_depth_mm) << '\n';
  return out.str();
}

void write_series_csv(const std::filesystem::path& path, const std::vector<SeriesRecord>& series,
                      const CsvSchema& schema) {
  write_file_atomic(path, series_to_csv(series, schema));
}

std::vector<std::string> feature_names(int window_size) {
  std::vector<std::string> names;
  for (int k = window_size; k >= 1; --k) names.push_back("rut_lag" + std::to_string(k));
  names.insert(names.end(), {"load_axes_rate", "temp_rate", "temp_diff2", "load_millions"});
  return names;
}

SampleSet build_samples(const SeriesRecord& series, int window_size) {
  if (window_size < 1) throw ValidationError("build_samples: window_size must be >= 1");
  const int n = int(series.periods.size());
  const int min_len = window_size + 1;
  if (n < min_len)
    throw ValidationError("build_samples: series " + series.structure_id + " has " +
                          std::to_string(n) + " periods, needs at least " +
                          std::to_string(min_len));

  SampleSet set;
  set.structure_id = series.structure_id;
  set.feature_names = feature_names(window_size);

  const auto& ps = series.periods;
  for (int k = 0; k + window_size < n; ++k) {
    const int t = k + window_size - 1;  // most recent observed period
    Sample s;
    s.features.reserve(set.feature_names.size());
    for (int j = k; j <= t; ++j) s.features.push_back(ps[j].rut_depth_mm);
    // Change rates are 0 when a predecessor is missing (possible only for
    // window sizes below 3), matching the first-row convention of the inputs.
    const double dt = t >= 1 ? double(ps[t].index - ps[t - 1].index) : 1.0;
    s.features.push_back(t >= 1 ? (ps[t].load_axes - ps[t - 1].load_axes) / dt : 0.0);
    s.features.push_back(t >= 1 ? (ps[t].temperature_c - ps[t - 1].temperature_c) / dt : 0.0);
    s.features.push_back(t >= 2 ? (ps[t].temperature_c - ps[t - 1].temperature_c) -
                                      (ps[t - 1].temperature_c - ps[t - 2].temperature_c)
                                : 0.0);
    s.features.push_back(ps[t].load_axes / 1e6);
    s.target = ps[t + 1].rut_depth_mm;
    s.source_id = series.structure_id;
    s.target_period = ps[t + 1].index;
    set.samples.push_back(std::move(s));
  }
  return set;
}

std::pair<SampleSet, SampleSet> chronological_split(const SampleSet& set, const SplitSpec& spec) {
  SampleSet train, test;
  train.structure_id = test.structure_id = set.structure_id;
  train.feature_names = test.feature_names = set.feature_names;

  std::size_t n_train = 0;
  if (spec.boundary_period) {
    for (const auto& s : set.samples)
      if (s.target_period <= *spec.boundary_period) ++n_train;
  } else {
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
      throw ValidationError("chronological_split: train_fraction must be in (0,1)");
    n_train = std::size_t(std::floor(spec.train_fraction * double(set.samples.size())));
  }
  if (n_train == 0) throw ValidationError("chronological_split: empty training side");
  if (n_train >= set.samples.size()) throw ValidationError("chronological_split: empty test side");

  train.samples.assign(set.samples.begin(), set.samples.begin() + long(n_train));
  test.samples.assign(set.samples.begin() + long(n_train), set.samples.end());
  return {std::move(train), std::move(test)};
}

Standardizer Standardizer::fit(const SampleSet& train) {
  if (train.samples.empty()) throw ValidationError("Standardizer::fit: empty sample set");
  const std::size_t d = train.samples.front().features.size();
  Standardizer z;
  z.mean.assign(d, 0.0);
  z.sd.assign(d, 0.0);
  const double n = double(train.samples.size());
  for (const auto& s : train.samples)
    for (std::size_t j = 0; j < d; ++j) z.mean[j] += s.features[j];
  for (auto& m : z.mean) m /= n;
  for (const auto& s : train.samples)
    for (std::size_t j = 0; j < d; ++j) {
      const double c = s.features[j] - z.mean[j];
      z.sd[j] += c * c;
    }
  for (auto& v : z.sd) {
    v = std::sqrt(v / n);
    if (v <= 0.0) v = 1.0;
  }
  return z;
}

std::vector<double> Standardizer::transform(const std::vector<double>& features) const {
  if (features.size() != mean.size())
    throw ValidationError("Standardizer: feature dimension mismatch");
  std::vector<double> out(features.size());
  for (std::size_t j = 0; j < features.size(); ++j) out[j] = (features[j] - mean[j]) / sd[j];
  return out;
}

SampleSet Standardizer::transform(const SampleSet& set) const {
  SampleSet out = set;
  for (auto& s : out.samples) s.features = transform(s.features);
  return out;
}

}  // namespace rutcast::data
