#include "shiftmix/data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace shiftmix {

Mat feature_matrix(const Dataset& data) {
    Mat xs(data.size(), data.dim());
    for (long i = 0; i < data.size(); ++i) xs.row(i) = data.samples[i].x.transpose();
    return xs;
}

Vec target_vector(const Dataset& data) {
    Vec ys(data.size());
    for (long i = 0; i < data.size(); ++i) ys[i] = data.samples[i].y;
    return ys;
}

NormStats compute_norm_stats(const std::vector<Sample>& samples) {
    if (samples.empty()) throw std::invalid_argument("compute_norm_stats: no samples");
    const long n = static_cast<long>(samples.size());
    const int d = static_cast<int>(samples.front().x.size());
    NormStats stats;
    stats.x_mean = Vec::Zero(d);
    stats.x_std = Vec::Ones(d);
    double y_sum = 0.0;
    Vec x_sum = Vec::Zero(d);
    for (const auto& s : samples) {
        x_sum += s.x;
        y_sum += s.y;
    }
    stats.x_mean = x_sum / n;
    stats.y_mean = y_sum / n;
    Vec x_sq = Vec::Zero(d);
    double y_sq = 0.0;
    for (const auto& s : samples) {
        x_sq += (s.x - stats.x_mean).cwiseAbs2();
        y_sq += (s.y - stats.y_mean) * (s.y - stats.y_mean);
    }
    for (int j = 0; j < d; ++j) {
        const double sd = std::sqrt(x_sq[j] / n);
        stats.x_std[j] = sd > 1e-12 ? sd : 1.0;  // constant feature fallback
    }
    const double ysd = std::sqrt(y_sq / n);
    stats.y_std = ysd > 1e-12 ? ysd : 1.0;
    return stats;
}

void apply_normalization(std::vector<Sample>& samples, const NormStats& stats) {
    for (auto& s : samples) {
        s.x = (s.x - stats.x_mean).cwiseQuotient(stats.x_std);
        s.y = (s.y - stats.y_mean) / stats.y_std;
    }
}

Vec denormalize_x(const NormStats& stats, const Vec& x) {
    return x.cwiseProduct(stats.x_std) + stats.x_mean;
}

double denormalize_y(const NormStats& stats, double y) { return y * stats.y_std + stats.y_mean; }

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool is_missing(const std::string& cell) {
    if (cell.empty()) return true;
    std::string low;
    for (char c : cell) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return low == "na" || low == "nan" || low == "null" || low == "n/a";
}

bool parse_double(const std::string& cell, double& out) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& target_column, bool drop_na,
                 bool normalize) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_csv: empty file '" + path + "'");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header = split_csv_line(line);
    for (auto& h : header) h = trim(h);
    int target_idx = -1;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == target_column) target_idx = static_cast<int>(j);
    }
    if (target_idx < 0)
        throw std::runtime_error("load_csv: target column '" + target_column + "' not found in '" +
                                 path + "'");
    const int d = static_cast<int>(header.size()) - 1;
    if (d < 1) throw std::runtime_error("load_csv: need at least one feature column");

    Dataset data;
    long row_number = 1;  // header was row 1
    long t = 1;
    while (std::getline(in, line)) {
        ++row_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            throw std::runtime_error("load_csv: row " + std::to_string(row_number) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(header.size()));
        }
        bool missing = false;
        for (auto& c : cells) {
            c = trim(c);
            if (is_missing(c)) missing = true;
        }
        if (missing) {
            if (drop_na) continue;
            throw std::runtime_error("load_csv: missing value at row " + std::to_string(row_number));
        }
        Sample s;
        s.x = Vec(d);
        int xi = 0;
        for (std::size_t j = 0; j < cells.size(); ++j) {
            double value;
            if (!parse_double(cells[j], value)) {
                throw std::runtime_error("load_csv: non-numeric cell at row " +
                                         std::to_string(row_number) + ", column '" + header[j] +
                                         "'");
            }
            if (static_cast<int>(j) == target_idx) {
                s.y = value;
            } else {
                s.x[xi++] = value;
            }
        }
        s.t = t++;
        data.samples.push_back(std::move(s));
    }
    if (data.samples.empty()) throw std::runtime_error("load_csv: no usable rows in '" + path + "'");
    data.stats = compute_norm_stats(data.samples);
    if (normalize) apply_normalization(data.samples, data.stats);
    return data;
}

namespace {

constexpr long kBlockLen = 4000;
// local 1-based inclusive test windows inside the block; 200 samples each
constexpr std::pair<long, long> kTestWindows[] = {
    {501, 700}, {1201, 1400}, {1901, 2100}, {2601, 2800}, {3301, 3500}};

Dataset reindexed(const Dataset& parent, const std::vector<long>& block_offsets) {
    Dataset out;
    out.stats = parent.stats;
    out.samples.reserve(block_offsets.size());
    long t = 1;
    for (long off : block_offsets) {
        Sample s = parent.samples[off];
        s.t = t++;
        out.samples.push_back(std::move(s));
    }
    return out;
}

}  // namespace

ShiftSplit shift_split(const Dataset& data, Rng& rng) {
    if (data.size() < kBlockLen)
        throw std::invalid_argument("shift_split: need at least 4000 samples, got " +
                                    std::to_string(data.size()));
    const long start = static_cast<long>(rng.uniform_int(data.size() - kBlockLen + 1));
    std::vector<long> train_idx, test_idx;
    for (long local = 1; local <= kBlockLen; ++local) {
        bool in_test = false;
        for (const auto& [lo, hi] : kTestWindows) {
            if (local >= lo && local <= hi) { in_test = true; break; }
        }
        (in_test ? test_idx : train_idx).push_back(start + local - 1);
    }
    ShiftSplit split;
    split.block_start = start + 1;
    split.test_windows.assign(std::begin(kTestWindows), std::end(kTestWindows));
    split.train = reindexed(data, train_idx);
    split.test = reindexed(data, test_idx);
    return split;
}

ShiftSplit holdout_split(const Dataset& data, Rng& rng) {
    if (data.size() < kBlockLen)
        throw std::invalid_argument("holdout_split: need at least 4000 samples, got " +
                                    std::to_string(data.size()));
    const long start = static_cast<long>(rng.uniform_int(data.size() - kBlockLen + 1));
    std::vector<long> train_idx, test_idx;
    for (long local = 1; local <= kBlockLen; ++local) {
        (local <= 3000 ? train_idx : test_idx).push_back(start + local - 1);
    }
    ShiftSplit split;
    split.block_start = start + 1;
    split.test_windows = {{3001, 4000}};
    split.train = reindexed(data, train_idx);
    split.test = reindexed(data, test_idx);
    return split;
}

Vec SynthSpec::weights_at(long t, long n_train) const {
    Vec w = Vec::Zero(k);
    if (schedule == WeightSchedule::Sinusoidal) {
        for (int j = 0; j < k; ++j) {
            w[j] = 1.0 + 0.9 * std::sin(2.0 * std::numbers::pi *
                                        (static_cast<double>(t) / sin_period +
                                         static_cast<double>(j) / k));
        }
        w /= w.sum();
        return w;
    }
    long segment;
    if (t <= n_train || n_train <= 0) {
        segment = (t - 1) / std::max<long>(1, train_segment_len);
    } else {
        const long train_segments =
            (n_train + train_segment_len - 1) / std::max<long>(1, train_segment_len);
        segment = train_segments + (t - n_train - 1) / std::max<long>(1, test_segment_len);
    }
    const int dominant = static_cast<int>(segment % k);
    const double rest = (1.0 - dominant_weight) / std::max(1, k - 1);
    w.setConstant(rest);
    w[dominant] = dominant_weight;
    return w;
}

double SynthGroundTruth::component_mean(int k, const Vec& x_normalized) const {
    const auto& c = spec.components.at(k);
    const Vec x_raw = denormalize_x(stats, x_normalized);
    const double y_raw = c.slope.dot(x_raw) + c.intercept;
    return (y_raw - stats.y_mean) / stats.y_std;
}

Vec SynthGroundTruth::input_posterior(const Vec& x_normalized) const {
    const Vec x_raw = denormalize_x(stats, x_normalized);
    Vec log_p(spec.k);
    for (int j = 0; j < spec.k; ++j) {
        const auto& c = spec.components[j];
        double lp = 0.0;
        for (int i = 0; i < x_raw.size(); ++i) {
            const double z = (x_raw[i] - c.input_center[i]) / c.input_scale[i];
            lp += -std::log(c.input_scale[i]) - 0.5 * z * z;
        }
        log_p[j] = lp;
    }
    return stable_softmax(log_p);
}

SynthSpec default_synth_spec() {
    SynthSpec spec;
    spec.k = 3;
    const double centers[3][2] = {{-3.0, 0.0}, {0.0, 3.0}, {3.0, 0.0}};
    // Distinct linear responses, each centered near zero over its own input
    // cluster but extrapolating far from its neighbours' lines inside the
    // cluster-overlap zones (where the online mixing weight has to do the
    // disambiguation work).
    const double slopes[3][2] = {{0.42, 0.165}, {0.0, 0.40}, {-0.42, 0.165}};
    const double intercepts[3] = {1.26, -1.20, 1.26};
    for (int j = 0; j < 3; ++j) {
        SynthComponent c;
        c.input_center = Eigen::Map<const Vec>(centers[j], 2);
        c.input_scale = Vec::Ones(2);
        c.slope = Eigen::Map<const Vec>(slopes[j], 2);
        c.intercept = intercepts[j];
        c.noise_std = 0.1;
        spec.components.push_back(std::move(c));
    }
    spec.schedule = WeightSchedule::PiecewiseConstant;
    spec.train_segment_len = 500;  // N/6 for the default N = 3000
    spec.test_segment_len = 200;
    spec.dominant_weight = 1.0;
    return spec;
}

SynthResult synth_generate(const SynthSpec& spec, long n_train, long n_test, Rng& rng) {
    if (spec.k < 1 || static_cast<int>(spec.components.size()) != spec.k)
        throw std::invalid_argument("synth_generate: component list does not match k");
    const long total = n_train + n_test;
    if (total < 1) throw std::invalid_argument("synth_generate: empty request");
    const int d = static_cast<int>(spec.components.front().input_center.size());

    SynthResult out;
    out.truth.spec = spec;
    out.truth.assignments.reserve(total);
    out.truth.trajectory.reserve(total);

    std::vector<Sample> raw;
    raw.reserve(total);
    for (long t = 1; t <= total; ++t) {
        const Vec w = spec.weights_at(t, n_train);
        out.truth.trajectory.push_back(w);
        // categorical draw
        const double r = rng.uniform();
        double acc = 0.0;
        int comp = spec.k - 1;
        for (int j = 0; j < spec.k; ++j) {
            acc += w[j];
            if (r < acc) { comp = j; break; }
        }
        out.truth.assignments.push_back(comp);
        const auto& c = spec.components[comp];
        Sample s;
        s.t = t;
        s.x = Vec(d);
        for (int i = 0; i < d; ++i) s.x[i] = rng.normal(c.input_center[i], c.input_scale[i]);
        s.y = c.slope.dot(s.x) + c.intercept;
        if (c.noise_std > 0.0) s.y += rng.normal(0.0, c.noise_std);
        raw.push_back(std::move(s));
    }

    out.truth.stats = compute_norm_stats(raw);
    apply_normalization(raw, out.truth.stats);

    out.train.stats = out.truth.stats;
    out.test.stats = out.truth.stats;
    for (long i = 0; i < total; ++i) {
        Sample s = raw[i];
        if (i < n_train) {
            s.t = i + 1;
            out.train.samples.push_back(std::move(s));
        } else {
            s.t = i - n_train + 1;
            out.test.samples.push_back(std::move(s));
        }
    }
    return out;
}

std::string ground_truth_to_json(const SynthGroundTruth& truth) {
    nlohmann::json j;
    j["k"] = truth.spec.k;
    j["schedule"] =
        truth.spec.schedule == WeightSchedule::PiecewiseConstant ? "piecewise" : "sinusoidal";
    j["train_segment_len"] = truth.spec.train_segment_len;
    j["test_segment_len"] = truth.spec.test_segment_len;
    j["dominant_weight"] = truth.spec.dominant_weight;
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : truth.spec.components) {
        nlohmann::json jc;
        jc["input_center"] = std::vector<double>(c.input_center.begin(), c.input_center.end());
        jc["input_scale"] = std::vector<double>(c.input_scale.begin(), c.input_scale.end());
        jc["slope"] = std::vector<double>(c.slope.begin(), c.slope.end());
        jc["intercept"] = c.intercept;
        jc["noise_std"] = c.noise_std;
        comps.push_back(jc);
    }
    j["components"] = comps;
    j["assignments"] = truth.assignments;
    nlohmann::json traj = nlohmann::json::array();
    for (const auto& w : truth.trajectory)
        traj.push_back(std::vector<double>(w.begin(), w.end()));
    j["trajectory"] = traj;
    j["norm"] = {{"x_mean", std::vector<double>(truth.stats.x_mean.begin(), truth.stats.x_mean.end())},
                 {"x_std", std::vector<double>(truth.stats.x_std.begin(), truth.stats.x_std.end())},
                 {"y_mean", truth.stats.y_mean},
                 {"y_std", truth.stats.y_std}};
    return j.dump(2);
}

void write_dataset_csv(const Dataset& data, const std::string& path, bool denormalized) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_dataset_csv: cannot open '" + path + "'");
    const int d = data.dim();
    for (int i = 0; i < d; ++i) out << "x" << (i + 1) << ",";
    out << "y\n";
    out.precision(17);
    for (const auto& s : data.samples) {
        Vec x = denormalized ? denormalize_x(data.stats, s.x) : s.x;
        const double y = denormalized ? denormalize_y(data.stats, s.y) : s.y;
        for (int i = 0; i < d; ++i) out << x[i] << ",";
        out << y << "\n";
    }
}

}  // namespace shiftmix
