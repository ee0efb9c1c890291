#include "pairq/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include "json.hpp"

#include "pairq/error.hpp"
#include "pairq/estimator.hpp"
#include "pairq/io.hpp"
#include "pairq/kernels.hpp"
#include "pairq/metrics.hpp"
#include "pairq/opq.hpp"
#include "pairq/pair_transform.hpp"

namespace pairq {

std::string to_string(Task task) {
    switch (task) {
        case Task::Scalar: return "scalar";
        case Task::Cosine: return "cosine";
        case Task::SquaredDistance: return "sqdist";
    }
    return "?";
}

std::string to_string(Method method) {
    switch (method) {
        case Method::Opq: return "opq";
        case Method::OpqBc: return "opq-bc";
        case Method::PairQ: return "pairq";
    }
    return "?";
}

Task parse_task(const std::string& s) {
    if (s == "scalar") return Task::Scalar;
    if (s == "cosine") return Task::Cosine;
    if (s == "sqdist") return Task::SquaredDistance;
    throw Error(ErrorKind::InvalidArgument, "unknown task '" + s + "' (scalar|cosine|sqdist)");
}

Method parse_method(const std::string& s) {
    if (s == "opq") return Method::Opq;
    if (s == "opq-bc") return Method::OpqBc;
    if (s == "pairq") return Method::PairQ;
    throw Error(ErrorKind::InvalidArgument, "unknown method '" + s + "' (opq|opq-bc|pairq)");
}

void validate(const ExperimentConfig& c) {
    if (c.methods.empty()) throw Error(ErrorKind::InvalidArgument, "no methods configured");
    if (c.ms.empty()) throw Error(ErrorKind::InvalidArgument, "no M values configured");
    for (std::size_t m : c.ms)
        if (m == 0) throw Error(ErrorKind::InvalidArgument, "M must be >= 1");
    if (c.k == 0 || c.k > 256) throw Error(ErrorKind::InvalidArgument, "K must be in [1, 256]");
    if (!c.synthetic && !c.files) throw Error(ErrorKind::InvalidArgument, "no dataset configured");
    for (Method m : c.methods) {
        if (m == Method::OpqBc && c.task != Task::SquaredDistance) {
            throw Error(ErrorKind::InvalidArgument, "opq-bc only applies to the sqdist task");
        }
    }
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Data {
    DenseMatrix train;
    DenseMatrix eval;
    DenseMatrix train_queries;
    DenseMatrix eval_queries;
    double query_g_condition = 0.0;
};

Data load_data(const ExperimentConfig& c) {
    DenseMatrix database, train_queries, eval_queries;
    double condition = std::numeric_limits<double>::quiet_NaN();
    if (c.synthetic) {
        SyntheticData s = gen_synthetic(*c.synthetic, c.seed);
        database = std::move(s.database);
        train_queries = std::move(s.train_queries);
        eval_queries = std::move(s.eval_queries);
        condition = s.query_g_condition;
    } else {
        database = io::read_fvecs(c.files->database);
        train_queries = io::read_fvecs(c.files->train_queries);
        eval_queries = io::read_fvecs(c.files->eval_queries);
    }
    if (c.task == Task::Cosine) {
        database = normalize_rows(database);
        train_queries = normalize_rows(train_queries);
        eval_queries = normalize_rows(eval_queries);
    }
    const std::size_t train = c.train_size ? c.train_size : database.rows() / 2;
    const std::size_t eval = c.eval_size ? c.eval_size : database.rows() - std::min(train, database.rows());
    if (train + eval > database.rows() || train == 0 || eval == 0) {
        throw Error(ErrorKind::InvalidArgument, "split " + std::to_string(train) + " + " + std::to_string(eval) +
                                                    " does not fit a database of " + std::to_string(database.rows()));
    }
    Data d;
    d.train = slice_rows(database, 0, train);
    d.eval = slice_rows(database, train, train + eval);
    d.train_queries = std::move(train_queries);
    d.eval_queries = std::move(eval_queries);
    d.query_g_condition = condition;
    return d;
}

double primary_error(Task task, const ReportRow& row) {
    return task == Task::SquaredDistance ? row.relative_error : row.mse;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

Report run_experiment(const ExperimentConfig& config) {
    validate(config);
    const Data data = load_data(config);
    const PairFunction function =
        config.task == Task::SquaredDistance ? PairFunction::SquaredDistance : PairFunction::ScalarProduct;
    const PairSampling sampling{config.max_pairs, config.seed};

    Report report;
    report.task = config.task;
    report.n = data.train.cols();
    report.train_size = data.train.rows();
    report.eval_size = data.eval.rows();
    report.query_g_condition = data.query_g_condition;

    for (std::size_t m : config.ms) {
        // Every method in a cell shares the seed, so an isotropic transform
        // reproduces the OPQ codebook exactly.
        const std::uint64_t cell_seed = config.seed * 1000003ULL + m;
        const OPQParams params{m, config.k, config.outer_iters, config.kmeans_iters, cell_seed};

        std::optional<OPQModel> opq;
        std::optional<MseTable> mse;
        CodeMatrix opq_codes;
        double opq_train_seconds = 0.0;
        std::string opq_error;
        auto ensure_opq = [&]() {
            if (opq || !opq_error.empty()) return;
            try {
                const auto t0 = Clock::now();
                opq = train_opq(data.train, params);
                opq_codes = opq->encode_all(data.eval);
                opq_train_seconds = seconds_since(t0);
            } catch (const std::exception& e) {
                opq_error = e.what();
            }
        };

        const std::size_t first_row = report.rows.size();
        for (Method method : config.methods) {
            ReportRow row;
            row.method = method;
            row.m = m;
            row.bytes = m * static_cast<std::size_t>(std::ceil(std::log2(std::max<std::size_t>(config.k, 2)) / 8.0));
            row.compression_ratio = 4.0 * static_cast<double>(report.n) / static_cast<double>(row.bytes);
            try {
                std::unique_ptr<PairEstimator> est;
                std::optional<PairQModel> pairq_model;
                const CodeMatrix* codes = nullptr;
                CodeMatrix pairq_codes;
                if (method == Method::PairQ) {
                    const auto t0 = Clock::now();
                    const PairTransform transform = function == PairFunction::ScalarProduct
                                                        ? learn_scalar_transform(data.train_queries)
                                                        : learn_sqdist_transform(data.train_queries);
                    pairq_model = train_pairq(transform, data.train, params);
                    pairq_codes = pairq_model->encode_all(data.eval);
                    row.train_seconds = seconds_since(t0);
                    row.objective_trace = pairq_model->opq.objective_trace;
                    est = std::make_unique<PairQEstimator>(*pairq_model);
                    codes = &pairq_codes;
                } else {
                    ensure_opq();
                    if (!opq_error.empty()) throw std::runtime_error(opq_error);
                    row.train_seconds = opq_train_seconds;
                    row.objective_trace = opq->objective_trace;
                    if (method == Method::OpqBc) {
                        const auto t0 = Clock::now();
                        if (!mse) mse = compute_mse_table(*opq, data.train);
                        row.train_seconds += seconds_since(t0);
                    }
                    est = std::make_unique<OpqEstimator>(*opq, function, method == Method::OpqBc ? &*mse : nullptr);
                    codes = &opq_codes;
                }
                const auto t0 = Clock::now();
                const MetricSummary s =
                    evaluate_pairs(*est, function, data.eval_queries, data.eval, *codes, sampling);
                row.eval_seconds = seconds_since(t0);
                row.mse = s.mse;
                row.relative_error = s.relative_error;
                row.bias = s.bias;
                row.pairs = s.pairs;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            report.rows.push_back(std::move(row));
        }

        const ReportRow* base = nullptr;
        for (std::size_t i = first_row; i < report.rows.size(); ++i) {
            if (report.rows[i].method == Method::Opq && report.rows[i].error.empty()) base = &report.rows[i];
        }
        if (base && primary_error(config.task, *base) > 0.0) {
            for (std::size_t i = first_row; i < report.rows.size(); ++i) {
                ReportRow& r = report.rows[i];
                if (&r == base || !r.error.empty()) continue;
                r.reduction_pct = 100.0 * (1.0 - primary_error(config.task, r) / primary_error(config.task, *base));
            }
        }
    }
    return report;
}

std::size_t Report::failed_cells() const {
    std::size_t n_failed = 0;
    for (const auto& r : rows) n_failed += r.error.empty() ? 0 : 1;
    return n_failed;
}

std::string Report::to_csv() const {
    std::ostringstream out;
    out << "task,method,M,bytes,compression_ratio,mse,relative_error,bias,reduction_pct,pairs,status\n";
    for (const auto& r : rows) {
        out << to_string(task) << ',' << to_string(r.method) << ',' << r.m << ',' << r.bytes << ','
            << format_double(r.compression_ratio) << ',';
        if (r.error.empty()) {
            out << format_double(r.mse) << ',';
            if (task == Task::SquaredDistance) out << format_double(r.relative_error);
            out << ',' << format_double(r.bias) << ',';
            if (r.reduction_pct) out << format_double(*r.reduction_pct);
            out << ',' << r.pairs << ",ok\n";
        } else {
            std::string msg = r.error;
            for (char& ch : msg)
                if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
            out << ",,,,," << "failed: " << msg << '\n';
        }
    }
    return out.str();
}

std::string Report::to_table() const {
    std::ostringstream out;
    const bool dist = task == Task::SquaredDistance;
    char line[256];
    std::snprintf(line, sizeof(line), "%-8s %4s %6s %8s %14s %14s %14s %10s\n", "method", "M", "bytes", "ratio",
                  dist ? "rel_err" : "mse", dist ? "mse" : "-", "bias", "reduction");
    out << line;
    for (const auto& r : rows) {
        if (!r.error.empty()) {
            std::snprintf(line, sizeof(line), "%-8s %4zu %6zu  FAILED: ", to_string(r.method).c_str(), r.m, r.bytes);
            out << line << r.error << '\n';
            continue;
        }
        std::string red = r.reduction_pct ? format_double(std::round(*r.reduction_pct * 10.0) / 10.0) + "%" : "";
        std::snprintf(line, sizeof(line), "%-8s %4zu %6zu %8.1f %14.6g %14.6g %14.6g %10s\n",
                      to_string(r.method).c_str(), r.m, r.bytes, r.compression_ratio,
                      dist ? r.relative_error : r.mse, dist ? r.mse : 0.0, r.bias, red.c_str());
        out << line;
    }
    return out.str();
}

std::string Report::to_json(const ExperimentConfig& config) const {
    nlohmann::json j;
    j["config"]["task"] = to_string(config.task);
    for (Method m : config.methods) j["config"]["methods"].push_back(to_string(m));
    j["config"]["M"] = config.ms;
    j["config"]["K"] = config.k;
    j["config"]["seed"] = config.seed;
    j["config"]["outer_iters"] = config.outer_iters;
    j["config"]["kmeans_iters"] = config.kmeans_iters;
    j["config"]["max_pairs"] = config.max_pairs;
    if (config.synthetic) {
        const auto& s = *config.synthetic;
        j["config"]["synthetic"] = {{"n", s.n},
                                    {"nx", s.nx},
                                    {"nq_train", s.nq_train},
                                    {"nq_eval", s.nq_eval},
                                    {"database_decay", s.database.decay},
                                    {"query_decay", s.queries.decay},
                                    {"query_mean_offset", s.queries.mean_offset}};
    } else if (config.files) {
        j["config"]["files"] = {{"database", config.files->database.string()},
                                {"train_queries", config.files->train_queries.string()},
                                {"eval_queries", config.files->eval_queries.string()}};
    }
    j["environment"]["kernels"] = std::string(kernels::to_string(kernels::active_isa()));
    j["environment"]["compiler"] = __VERSION__;
    j["data"] = {{"n", n}, {"train_size", train_size}, {"eval_size", eval_size}};
    if (std::isfinite(query_g_condition)) j["data"]["query_g_condition"] = query_g_condition;
    for (const auto& r : rows) {
        nlohmann::json row = {{"method", to_string(r.method)},
                              {"M", r.m},
                              {"bytes", r.bytes},
                              {"compression_ratio", r.compression_ratio},
                              {"train_seconds", r.train_seconds},
                              {"eval_seconds", r.eval_seconds},
                              {"objective_trace", r.objective_trace}};
        if (r.error.empty()) {
            row["mse"] = r.mse;
            row["bias"] = r.bias;
            row["pairs"] = r.pairs;
            if (task == Task::SquaredDistance) row["relative_error"] = r.relative_error;
            if (r.reduction_pct) row["reduction_pct"] = *r.reduction_pct;
        } else {
            row["error"] = r.error;
        }
        j["rows"].push_back(row);
    }
    return j.dump(2);
}

void write_report(const Report& report, const ExperimentConfig& config, const std::filesystem::path& csv_path) {
    std::ofstream csv(csv_path, std::ios::trunc);
    if (!csv) throw Error(ErrorKind::Io, "cannot write " + csv_path.string());
    csv << report.to_csv();
    std::filesystem::path json_path = csv_path;
    json_path.replace_extension(".json");
    std::ofstream js(json_path, std::ios::trunc);
    if (!js) throw Error(ErrorKind::Io, "cannot write " + json_path.string());
    js << report.to_json(config) << '\n';
}

}  // namespace pairq
