#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pairq/error.hpp"
#include "pairq/estimator.hpp"
#include "pairq/experiment.hpp"
#include "pairq/io.hpp"
#include "pairq/kernels.hpp"
#include "pairq/metrics.hpp"
#include "pairq/model_io.hpp"
#include "pairq/opq.hpp"
#include "pairq/pair_transform.hpp"
#include "pairq/synthetic.hpp"

namespace fs = std::filesystem;
using namespace pairq;

namespace {

struct SynthOptions {
    std::size_t n = 32;
    std::size_t nx = 10000;
    std::size_t nq_train = 2000;
    std::size_t nq_eval = 200;
    double db_decay = 0.5;
    double query_decay = 1.5;
    double query_offset = 0.0;
};

void add_synth_options(CLI::App* app, SynthOptions& o) {
    app->add_option("--n", o.n, "Dimension")->check(CLI::Range(2, 1 << 16));
    app->add_option("--nx", o.nx, "Database size");
    app->add_option("--nq-train", o.nq_train, "Training queries");
    app->add_option("--nq-eval", o.nq_eval, "Evaluation queries");
    app->add_option("--db-decay", o.db_decay, "Database eigenvalue decay exponent");
    app->add_option("--query-decay", o.query_decay, "Query eigenvalue decay exponent");
    app->add_option("--query-offset", o.query_offset, "Norm of the query mean");
}

SyntheticSpec to_spec(const SynthOptions& o) {
    SyntheticSpec s;
    s.n = o.n;
    s.nx = o.nx;
    s.nq_train = o.nq_train;
    s.nq_eval = o.nq_eval;
    s.database.decay = o.db_decay;
    s.queries.decay = o.query_decay;
    s.queries.mean_offset = o.query_offset;
    return s;
}

DenseMatrix load_points(const fs::path& path, Task task) {
    DenseMatrix m = io::read_fvecs(path);
    return task == Task::Cosine ? normalize_rows(m) : m;
}

PairFunction function_of(Task task) {
    return task == Task::SquaredDistance ? PairFunction::SquaredDistance : PairFunction::ScalarProduct;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pairwise quantization: train, encode and evaluate compressed vectors"};
    app.require_subcommand(1);
    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "Random seed")->capture_default_str();

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic Gaussian dataset as fvecs files");
    SynthOptions synth_opts;
    fs::path synth_dir = ".";
    add_synth_options(synth, synth_opts);
    synth->add_option("--out", synth_dir, "Output directory")->capture_default_str();

    // train
    auto* train = app.add_subcommand("train", "Train an OPQ or PairQ model");
    fs::path train_data, train_queries, model_out = "model.pairq";
    std::string method_name = "pairq", mode_name = "scalar";
    std::size_t m = 8, k = 256, outer_iters = 20, kmeans_iters = 25;
    train->add_option("--data", train_data, "Database vectors (fvecs)")->required();
    train->add_option("--train-queries", train_queries, "Query samples (fvecs), required for pairq");
    train->add_option("--method", method_name, "opq | opq-bc | pairq")->capture_default_str();
    train->add_option("--mode", mode_name, "scalar | cosine | sqdist")->capture_default_str();
    train->add_option("-M", m, "Blocks (bytes per vector)")->capture_default_str();
    train->add_option("-K", k, "Codewords per block")->capture_default_str();
    train->add_option("--outer-iters", outer_iters, "OPQ PQ steps")->capture_default_str();
    train->add_option("--kmeans-iters", kmeans_iters, "Lloyd iterations per PQ step")->capture_default_str();
    train->add_option("--out", model_out, "Model file")->capture_default_str();

    // encode
    auto* encode = app.add_subcommand("encode", "Encode vectors with a trained model (bvecs output)");
    fs::path encode_model, encode_data, codes_out = "codes.bvecs";
    std::string encode_mode = "scalar";
    encode->add_option("--model", encode_model, "Model file")->required();
    encode->add_option("--data", encode_data, "Vectors to encode (fvecs)")->required();
    encode->add_option("--mode", encode_mode, "scalar | cosine | sqdist")->capture_default_str();
    encode->add_option("--out", codes_out, "Codes file")->capture_default_str();

    // eval
    auto* eval = app.add_subcommand("eval", "Evaluate pairwise estimates against exact values");
    fs::path eval_model, eval_codes, eval_data, eval_queries;
    std::string eval_mode = "scalar";
    std::size_t max_pairs = 10'000'000;
    eval->add_option("--model", eval_model, "Model file")->required();
    eval->add_option("--codes", eval_codes, "Codes of the database (bvecs)")->required();
    eval->add_option("--data", eval_data, "Uncompressed database (fvecs)")->required();
    eval->add_option("--queries", eval_queries, "Evaluation queries (fvecs)")->required();
    eval->add_option("--mode", eval_mode, "scalar | cosine | sqdist")->capture_default_str();
    eval->add_option("--max-pairs", max_pairs, "Subsample above this many pairs")->capture_default_str();

    // bench
    auto* bench = app.add_subcommand("bench", "Run a (method, M) grid and write a CSV report");
    std::string bench_mode = "scalar";
    std::vector<std::string> bench_methods{"opq", "pairq"};
    std::vector<std::size_t> bench_ms{8};
    std::size_t bench_k = 256, train_size = 0, eval_size = 0;
    std::size_t bench_outer = 20, bench_kmeans = 25, bench_pairs = 10'000'000;
    fs::path bench_out = "report.csv", bench_data, bench_train_q, bench_eval_q;
    SynthOptions bench_synth;
    bench->add_option("--mode", bench_mode, "scalar | cosine | sqdist")->capture_default_str();
    bench->add_option("--method", bench_methods, "Methods to run")->capture_default_str();
    bench->add_option("-M", bench_ms, "Block counts")->capture_default_str();
    bench->add_option("-K", bench_k, "Codewords per block")->capture_default_str();
    bench->add_option("--data", bench_data, "Database (fvecs); synthetic data when absent");
    bench->add_option("--train-queries", bench_train_q, "Training queries (fvecs)");
    bench->add_option("--eval-queries", bench_eval_q, "Evaluation queries (fvecs)");
    bench->add_option("--train-size", train_size, "Database rows for training");
    bench->add_option("--eval-size", eval_size, "Database rows for evaluation");
    bench->add_option("--outer-iters", bench_outer, "OPQ PQ steps")->capture_default_str();
    bench->add_option("--kmeans-iters", bench_kmeans, "Lloyd iterations per PQ step")->capture_default_str();
    bench->add_option("--max-pairs", bench_pairs, "Subsample above this many pairs")->capture_default_str();
    bench->add_option("--out", bench_out, "CSV report; a .json sidecar is written next to it")
        ->capture_default_str();
    add_synth_options(bench, bench_synth);

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            const SyntheticData d = gen_synthetic(to_spec(synth_opts), seed);
            fs::create_directories(synth_dir);
            io::write_fvecs(synth_dir / "base.fvecs", d.database);
            io::write_fvecs(synth_dir / "train_queries.fvecs", d.train_queries);
            io::write_fvecs(synth_dir / "eval_queries.fvecs", d.eval_queries);
            std::printf("wrote %zu x %zu database, %zu + %zu queries to %s (query G condition %.4g)\n",
                        d.database.rows(), d.database.cols(), d.train_queries.rows(), d.eval_queries.rows(),
                        synth_dir.string().c_str(), d.query_g_condition);
            return 0;
        }

        if (train->parsed()) {
            const Task task = parse_task(mode_name);
            const Method method = parse_method(method_name);
            if (method == Method::OpqBc && task != Task::SquaredDistance) {
                throw Error(ErrorKind::InvalidArgument, "opq-bc only applies to --mode sqdist");
            }
            const DenseMatrix data = load_points(train_data, task);
            const OPQParams params{m, k, outer_iters, kmeans_iters, seed};
            io::StoredModel model;
            if (method == Method::PairQ) {
                if (train_queries.empty()) {
                    throw Error(ErrorKind::InvalidArgument, "pairq needs --train-queries");
                }
                const DenseMatrix queries = load_points(train_queries, task);
                const PairTransform transform = task == Task::SquaredDistance ? learn_sqdist_transform(queries)
                                                                              : learn_scalar_transform(queries);
                model = io::stored(train_pairq(transform, data, params));
            } else {
                model.opq = train_opq(data, params);
                if (method == Method::OpqBc) model.mse = compute_mse_table(model.opq, data);
            }
            io::save_model(model_out, model);
            const auto& trace = model.opq.objective_trace;
            std::printf("trained %s: M=%zu K=%zu, objective %.6g -> %.6g over %zu PQ steps%s\n",
                        to_string(method).c_str(), m, k, trace.front(), trace.back(), trace.size(),
                        model.opq.converged ? "" : " (final k-means not converged)");
            return 0;
        }

        if (encode->parsed()) {
            const Task task = parse_task(encode_mode);
            const io::StoredModel model = io::load_model(encode_model);
            const DenseMatrix data = load_points(encode_data, task);
            const CodeMatrix codes =
                model.transform ? io::as_pairq(model).encode_all(data) : model.opq.encode_all(data);
            io::write_bvecs(codes_out, codes);
            std::printf("encoded %zu vectors into %zu bytes each\n", codes.count, codes.m);
            return 0;
        }

        if (eval->parsed()) {
            const Task task = parse_task(eval_mode);
            const PairFunction function = function_of(task);
            const io::StoredModel model = io::load_model(eval_model);
            const DenseMatrix data = load_points(eval_data, task);
            const DenseMatrix queries = load_points(eval_queries, task);
            const CodeMatrix codes = io::read_bvecs(eval_codes);
            std::optional<PairQModel> pq_model;
            std::unique_ptr<PairEstimator> est;
            if (model.transform) {
                pq_model = io::as_pairq(model);
                const bool sq = pq_model->mode() == PairMode::SquaredDistance;
                if (sq != (function == PairFunction::SquaredDistance)) {
                    throw Error(ErrorKind::ModeMismatch, std::string("model was trained for ") +
                                                             to_string(pq_model->mode()) + ", --mode is " + eval_mode);
                }
                est = std::make_unique<PairQEstimator>(*pq_model);
            } else {
                const MseTable* mse = function == PairFunction::SquaredDistance && model.mse ? &*model.mse : nullptr;
                est = std::make_unique<OpqEstimator>(model.opq, function, mse);
            }
            const MetricSummary s = evaluate_pairs(*est, function, queries, data, codes, {max_pairs, seed});
            std::printf("estimator   %s\n", est->name().c_str());
            std::printf("pairs       %zu\n", s.pairs);
            std::printf("mse         %.9g\n", s.mse);
            if (function == PairFunction::SquaredDistance) {
                std::printf("rel_err     %.9g (%zu pairs excluded)\n", s.relative_error, s.excluded_pairs);
            }
            std::printf("bias        %.9g\n", s.bias);
            return 0;
        }

        if (bench->parsed()) {
            ExperimentConfig config;
            config.task = parse_task(bench_mode);
            config.methods.clear();
            for (const auto& name : bench_methods) config.methods.push_back(parse_method(name));
            config.ms = bench_ms;
            config.k = bench_k;
            if (bench_data.empty()) {
                config.synthetic = to_spec(bench_synth);
            } else {
                if (bench_train_q.empty() || bench_eval_q.empty()) {
                    throw Error(ErrorKind::InvalidArgument, "--data needs --train-queries and --eval-queries");
                }
                config.files = DatasetPaths{bench_data, bench_train_q, bench_eval_q};
            }
            config.train_size = train_size;
            config.eval_size = eval_size;
            config.outer_iters = bench_outer;
            config.kmeans_iters = bench_kmeans;
            config.seed = seed;
            config.max_pairs = bench_pairs;
            const Report report = run_experiment(config);
            write_report(report, config, bench_out);
            std::printf("task %s, n=%zu, train %zu, eval %zu, kernels %s\n", to_string(report.task).c_str(),
                        report.n, report.train_size, report.eval_size,
                        std::string(kernels::to_string(kernels::active_isa())).c_str());
            std::fputs(report.to_table().c_str(), stdout);
            const std::size_t failed = report.failed_cells();
            if (failed) {
                std::fprintf(stderr, "%zu cell(s) failed\n", failed);
                return 1;
            }
            return 0;
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error (%s): %s\n", to_string(e.kind()), e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
