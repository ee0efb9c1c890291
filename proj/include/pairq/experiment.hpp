#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pairq/synthetic.hpp"

namespace pairq {

enum class Task { Scalar, Cosine, SquaredDistance };
enum class Method { Opq, OpqBc, PairQ };

std::string to_string(Task task);
std::string to_string(Method method);
Task parse_task(const std::string& s);
Method parse_method(const std::string& s);

struct DatasetPaths {
    std::filesystem::path database;
    std::filesystem::path train_queries;
    std::filesystem::path eval_queries;
};

struct ExperimentConfig {
    Task task = Task::Scalar;
    std::vector<Method> methods{Method::Opq, Method::PairQ};
    /// Bytes per vector at K = 256.
    std::vector<std::size_t> ms{8};
    std::size_t k = 256;
    /// Exactly one of these is used; synthetic wins when both are set.
    std::optional<SyntheticSpec> synthetic;
    std::optional<DatasetPaths> files;
    /// Leading database rows used to train quantizers (0: first half).
    std::size_t train_size = 0;
    /// Following rows used for evaluation (0: the rest).
    std::size_t eval_size = 0;
    std::size_t outer_iters = 20;
    std::size_t kmeans_iters = 25;
    std::uint64_t seed = 0;
    std::size_t max_pairs = 10'000'000;
};

/// Throws InvalidArgument describing the first problem found.
void validate(const ExperimentConfig& config);

struct ReportRow {
    Method method = Method::Opq;
    std::size_t m = 0;
    std::size_t bytes = 0;
    double compression_ratio = 0.0;  // 4n / bytes
    double mse = 0.0;
    double relative_error = 0.0;     // squared-distance task only
    double bias = 0.0;
    std::optional<double> reduction_pct;  // primary error vs OPQ at the same M
    std::size_t pairs = 0;
    /// OPQ objective after every PQ step of the model behind this row.
    std::vector<double> objective_trace;
    double train_seconds = 0.0;
    double eval_seconds = 0.0;
    std::string error;  // non-empty when the cell failed
};

struct Report {
    Task task = Task::Scalar;
    std::size_t n = 0;
    std::size_t train_size = 0;
    std::size_t eval_size = 0;
    double query_g_condition = 0.0;
    std::vector<ReportRow> rows;

    std::size_t failed_cells() const;
    /// Fixed column order; timings are excluded so reruns are byte-identical.
    std::string to_csv() const;
    /// Human-readable table including the reduction column.
    std::string to_table() const;
    /// Config, environment and timings as JSON.
    std::string to_json(const ExperimentConfig& config) const;
};

Report run_experiment(const ExperimentConfig& config);

/// Writes report.csv and a JSON sidecar next to it (same stem, .json).
void write_report(const Report& report, const ExperimentConfig& config, const std::filesystem::path& csv_path);

}  // namespace pairq
