// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pairq/estimator.hpp"
#include "pairq/experiment.hpp"
#include "pairq/kernels.hpp"
#include "pairq/kmeans.hpp"
#include "pairq/linalg.hpp"
#include "pairq/metrics.hpp"
#include "pairq/opq.hpp"
#include "pairq/pair_transform.hpp"
#include "pairq/synthetic.hpp"

using namespace pairq;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), f, args...);
    return buf;
}

DenseMatrix gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    DenseMatrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
    return m;
}

// Every objective trace produced by an OPQ training run in this process.
std::vector<std::pair<std::string, std::vector<double>>> g_traces;

void record(const std::string& label, const std::vector<double>& trace) { g_traces.emplace_back(label, trace); }

std::vector<std::size_t> all_rows(std::size_t n) {
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), 0);
    return rows;
}

// Mean over database rows of (truth - estimate) for one query, in long double.
double mean_signed_error(const PairEstimator& est, PairFunction f, std::span<const double> q, const DenseMatrix& x,
                         const CodeMatrix& codes) {
    const auto rows = all_rows(x.rows());
    std::vector<double> out(rows.size());
    est.estimate(q, codes, rows, out);
    long double sum = 0.0L;
    for (std::size_t i = 0; i < rows.size(); ++i) sum += true_value(f, q, x.row(i)) - out[i];
    return static_cast<double>(sum / rows.size());
}

double mean_norm(const DenseMatrix& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) s += std::sqrt(squared_norm(x.row(i)));
    return s / static_cast<double>(x.rows());
}

double mean_sqdist(std::span<const double> q, const DenseMatrix& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) s += squared_distance(q, x.row(i));
    return s / static_cast<double>(x.rows());
}

// ---------------------------------------------------------------------------

Outcome transform_factorization() {
    std::mt19937_64 rng(101);
    double worst_fact = 0.0, worst_mp = 0.0;
    std::size_t deficient = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + rng() % 63;
        // Some query sets have fewer samples than dimensions, so G is singular.
        const std::size_t nq = std::max<std::size_t>(1, n / 2 + rng() % (2 * n));
        deficient += nq < n ? 1 : 0;
        DenseMatrix q = gaussian(nq, n, rng);
        for (std::size_t i = 0; i < nq; ++i)
            for (std::size_t j = 0; j < n; ++j) q(i, j) *= std::pow(static_cast<double>(j + 1), -0.5);
        const PairTransform t = learn_scalar_transform(q);
        const DenseMatrix& c = t.c;
        const DenseMatrix& p = t.c_pinv;
        worst_fact = std::max(worst_fact, frobenius_norm(c.transposed() * c - t.g) / frobenius_norm(t.g));
        const DenseMatrix cp = c * p;
        const DenseMatrix pc = p * c;
        worst_mp = std::max({worst_mp, frobenius_norm(cp * c - c) / frobenius_norm(c),
                             frobenius_norm(pc * p - p) / frobenius_norm(p),
                             frobenius_norm(cp - cp.transposed()) / frobenius_norm(cp),
                             frobenius_norm(pc - pc.transposed()) / frobenius_norm(pc)});
    }
    return {worst_fact <= 1e-8 && worst_mp <= 1e-8,
            fmt("500 query sets (%zu rank-deficient), max ||C^T C - G||/||G|| = %.2e, max Moore-Penrose residual = "
                "%.2e (tol 1e-8)",
                deficient, worst_fact, worst_mp)};
}

Outcome loss_identity() {
    std::mt19937_64 rng(202);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + rng() % 15;
        const std::size_t nq = n + 1 + rng() % (3 * n);
        const DenseMatrix q = gaussian(nq, n, rng);
        const PairTransform t = learn_scalar_transform(q);
        const DenseMatrix x = gaussian(1, n, rng);
        const DenseMatrix zhat = gaussian(1, n, rng);
        const DenseVector xhat = matvec(t.c_pinv, zhat.row(0));
        long double lhs = 0.0L;
        for (std::size_t i = 0; i < nq; ++i) {
            const double e = dot(q.row(i), x.row(0)) - dot(q.row(i), xhat);
            lhs += static_cast<long double>(e) * e;
        }
        const double rhs = static_cast<double>(nq) * squared_distance(t.map(x.row(0)), zhat.row(0));
        worst = std::max(worst, std::abs(static_cast<double>(lhs) - rhs) / rhs);
    }
    return {worst <= 1e-8, fmt("1000 triples, max relative gap %.2e (tol 1e-8)", worst)};
}

Outcome lifting_identity() {
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> log_scale(-3.0, 3.0);
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t n = 1 + rng() % 128;
        const double s = std::pow(10.0, log_scale(rng));
        const DenseMatrix qx = gaussian(2, n, rng, s);
        const auto q = qx.row(0);
        const auto x = qx.row(1);
        const double scale = squared_norm(q) + squared_norm(x);
        const double gap = squared_distance(q, x) - squared_norm(q) - dot(lift_query(q), lift_point(x));
        worst = std::max(worst, std::abs(gap) / scale);
    }
    return {worst <= 1e-10, fmt("10^4 trials, max |gap| / (|q|^2 + |x|^2) = %.2e (tol 1e-10)", worst)};
}

struct UnbiasData {
    DenseMatrix x;
    DenseMatrix queries;  // probe queries
    DenseMatrix train_queries;
};

UnbiasData unbias_data() {
    SyntheticSpec spec;
    spec.n = 16;
    spec.nx = 10000;
    spec.nq_train = 2000;
    spec.nq_eval = 100;
    spec.database.decay = 0.5;
    spec.database.mean_offset = 1.0;
    spec.queries.decay = 1.0;
    spec.queries.mean_offset = 0.5;
    SyntheticData d = gen_synthetic(spec, 404);
    return {std::move(d.database), std::move(d.eval_queries), std::move(d.train_queries)};
}

const OPQParams kConverged{1, 256, 2, 5000, 7};

Outcome opq_scalar_unbiased() {
    const UnbiasData d = unbias_data();
    const OPQModel model = train_opq(d.x, kConverged);
    record("opq unbiasedness M=1", model.objective_trace);
    if (!model.converged) return {false, "k-means did not reach a fixed point"};
    const CodeMatrix codes = model.encode_all(d.x);
    const OpqEstimator est(model, PairFunction::ScalarProduct);
    const double mx = mean_norm(d.x);
    double worst = 0.0;
    for (std::size_t i = 0; i < d.queries.rows(); ++i) {
        const auto q = d.queries.row(i);
        const double bias = mean_signed_error(est, PairFunction::ScalarProduct, q, d.x, codes);
        worst = std::max(worst, std::abs(bias) / (std::sqrt(squared_norm(q)) * mx));
    }
    return {worst <= 1e-9,
            fmt("M=1 K=256 on 10^4 points, 100 queries, max |bias| / (|q| mean|x|) = %.2e (tol 1e-9)", worst)};
}

Outcome opq_sqdist_bias_identity() {
    const UnbiasData d = unbias_data();
    std::string detail;
    bool pass = true;
    for (std::size_t m : {1u, 4u}) {
        OPQParams params = kConverged;
        params.m = m;
        const OPQModel model = train_opq(d.x, params);
        record(fmt("opq bias identity M=%zu", m), model.objective_trace);
        if (!model.converged) return {false, fmt("M=%zu: k-means did not reach a fixed point", m)};
        const CodeMatrix codes = model.encode_all(d.x);
        const MseTable mse = compute_mse_table(model, d.x);
        long double corr = 0.0L;
        for (std::size_t i = 0; i < codes.count; ++i) corr += mse_correction(mse, codes.row(i));
        const double mean_corr = static_cast<double>(corr / codes.count);
        const OpqEstimator plain(model, PairFunction::SquaredDistance);
        const OpqEstimator corrected(model, PairFunction::SquaredDistance, &mse);
        double worst_gap = 0.0, worst_bc = 0.0, min_bias = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < d.queries.rows(); ++i) {
            const auto q = d.queries.row(i);
            const double bias = mean_signed_error(plain, PairFunction::SquaredDistance, q, d.x, codes);
            const double bc = mean_signed_error(corrected, PairFunction::SquaredDistance, q, d.x, codes);
            min_bias = std::min(min_bias, bias);
            worst_gap = std::max(worst_gap, std::abs(bias - mean_corr) / mean_corr);
            worst_bc = std::max(worst_bc, std::abs(bc) / mean_sqdist(q, d.x));
        }
        pass = pass && worst_gap <= 1e-8 && min_bias > 0.0 && worst_bc <= 1e-9;
        detail += fmt("%sM=%zu: bias %.4g vs mean MSE %.4g (max rel gap %.2e), OPQ+BC max |bias|/scale %.2e",
                      detail.empty() ? "" : "; ", m, min_bias, mean_corr, worst_gap, worst_bc);
    }
    return {pass, detail + " (tol 1e-8 / 1e-9)"};
}

Outcome pairq_unbiased() {
    const UnbiasData d = unbias_data();
    std::string detail;
    bool pass = true;
    for (PairFunction f : {PairFunction::ScalarProduct, PairFunction::SquaredDistance}) {
        const bool sq = f == PairFunction::SquaredDistance;
        const PairTransform t = sq ? learn_sqdist_transform(d.train_queries) : learn_scalar_transform(d.train_queries);
        const PairQModel model = train_pairq(t, d.x, kConverged);
        record(sq ? "pairq unbiasedness sqdist" : "pairq unbiasedness scalar", model.opq.objective_trace);
        if (!model.opq.converged) return {false, "k-means did not reach a fixed point"};
        const CodeMatrix codes = model.encode_all(d.x);
        const PairQEstimator est(model);
        const double mx = mean_norm(d.x);
        double worst = 0.0;
        for (std::size_t i = 0; i < d.queries.rows(); ++i) {
            const auto q = d.queries.row(i);
            const double bias = mean_signed_error(est, f, q, d.x, codes);
            const double scale = sq ? mean_sqdist(q, d.x) : std::sqrt(squared_norm(q)) * mx;
            worst = std::max(worst, std::abs(bias) / scale);
        }
        pass = pass && worst <= 1e-9;
        detail += fmt("%s%s max |bias|/scale %.2e", detail.empty() ? "" : ", ", sq ? "sqdist" : "scalar", worst);
    }
    return {pass, "M=1 K=256 on 10^4 points, " + detail + " (tol 1e-9)"};
}

void record_report(const Report& r, const std::string& label) {
    for (const auto& row : r.rows) {
        if (!row.objective_trace.empty()) {
            record(fmt("%s %s M=%zu", label.c_str(), to_string(row.method).c_str(), row.m), row.objective_trace);
        }
    }
}

Outcome scalar_error_vs_opq() {
    ExperimentConfig c;
    c.task = Task::Scalar;
    c.methods = {Method::Opq, Method::PairQ};
    c.ms = {5, 10, 25};
    c.k = 256;
    SyntheticSpec s;
    s.n = 100;
    s.nx = 50000;
    s.nq_train = 5000;
    s.nq_eval = 200;
    s.database.decay = 0.5;
    s.queries.decay = 1.5;
    c.synthetic = s;
    c.train_size = 25000;
    c.eval_size = 25000;
    c.outer_iters = 8;
    c.kmeans_iters = 10;
    c.seed = 7;
    const Report r = run_experiment(c);
    record_report(r, "scalar n=100");
    if (r.failed_cells() != 0) return {false, "failed cells: " + r.to_csv()};
    bool every = true;
    double best = -std::numeric_limits<double>::infinity();
    std::string detail = fmt("G condition %.0f;", r.query_g_condition);
    for (std::size_t i = 0; i + 1 < r.rows.size(); i += 2) {
        const auto& opq = r.rows[i];
        const auto& pq = r.rows[i + 1];
        every = every && pq.mse < opq.mse;
        best = std::max(best, *pq.reduction_pct);
        detail += fmt(" M=%zu OPQ %.4g PairQ %.4g (%.1f%%)", opq.m, opq.mse, pq.mse, *pq.reduction_pct);
    }
    return {every && best >= 10.0 && r.query_g_condition >= 100.0, detail};
}

Outcome relative_error_ordering() {
    ExperimentConfig c;
    c.task = Task::SquaredDistance;
    c.methods = {Method::Opq, Method::OpqBc, Method::PairQ};
    c.ms = {4, 8, 16};
    c.k = 256;
    SyntheticSpec s;
    s.n = 128;
    s.nx = 20000;
    s.nq_train = 5000;
    s.nq_eval = 200;
    s.database.decay = 0.5;
    s.queries.decay = 1.0;
    s.queries.mean_offset = 2.0;
    c.synthetic = s;
    c.train_size = 10000;
    c.eval_size = 10000;
    c.outer_iters = 8;
    c.kmeans_iters = 10;
    c.seed = 8;
    const Report r = run_experiment(c);
    record_report(r, "sqdist n=128");
    if (r.failed_cells() != 0) return {false, "failed cells: " + r.to_csv()};
    bool ordered = true;
    std::string detail;
    for (std::size_t i = 0; i + 2 < r.rows.size(); i += 3) {
        const double opq = r.rows[i].relative_error;
        const double bc = r.rows[i + 1].relative_error;
        const double pq = r.rows[i + 2].relative_error;
        ordered = ordered && pq < bc && bc < opq;
        detail += fmt("%sM=%zu PairQ %.4f < OPQ+BC %.4f < OPQ %.4f", detail.empty() ? "" : "; ", r.rows[i].m, pq, bc,
                      opq);
    }
    return {ordered, detail};
}

Outcome identity_degeneration() {
    const std::size_t n = 16;
    std::mt19937_64 rng(909);
    DenseMatrix x = gaussian(3000, n, rng);
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < n; ++j) x(i, j) *= std::pow(static_cast<double>(j + 1), -0.5);
    const DenseMatrix probe = gaussian(50, n, rng);
    const OPQParams params{4, 64, 5, 15, 9};
    const OPQModel opq = train_opq(x, params);
    record("identity OPQ", opq.objective_trace);
    const CodeMatrix opq_codes = opq.encode_all(x);
    const OpqEstimator opq_est(opq, PairFunction::ScalarProduct);
    const auto rows = all_rows(x.rows());

    bool pass = true;
    std::string detail;
    for (double s : {4.0, 8.0}) {
        // Rows s * e_i: G = (s^2 / n) I, i.e. lambda = 1 and 4.
        DenseMatrix queries(n, n);
        for (std::size_t i = 0; i < n; ++i) queries(i, i) = s;
        const PairQModel model = train_pairq(learn_scalar_transform(queries), x, params);
        record(fmt("identity PairQ s=%g", s), model.opq.objective_trace);
        const double root = std::sqrt(s * s / static_cast<double>(n));
        std::vector<double> normalized = model.opq.codebook.centroids();
        for (double& v : normalized) v /= root;
        const bool same_codebook = normalized == opq.codebook.centroids() && model.opq.rotation == opq.rotation;
        const CodeMatrix codes = model.encode_all(x);
        const PairQEstimator est(model);
        bool same_estimates = codes == opq_codes;
        std::vector<double> a(rows.size()), b(rows.size());
        for (std::size_t i = 0; i < probe.rows() && same_estimates; ++i) {
            est.estimate(probe.row(i), codes, rows, a);
            opq_est.estimate(probe.row(i), opq_codes, rows, b);
            same_estimates = a == b;
        }
        pass = pass && same_codebook && same_estimates;
        detail += fmt("%sG=%gI: codebook %s, estimates %s", detail.empty() ? "" : "; ", root * root,
                      same_codebook ? "identical" : "DIFFERENT", same_estimates ? "identical" : "DIFFERENT");
    }
    return {pass, detail + " (bit-for-bit, centroids divided by sqrt(lambda))"};
}

double exhaustive_optimum(const DenseMatrix& x, std::size_t k) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    std::vector<std::size_t> label(n, 0);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        double total = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            std::vector<double> mean(d, 0.0);
            std::size_t count = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (label[i] != c) continue;
                ++count;
                for (std::size_t t = 0; t < d; ++t) mean[t] += x(i, t);
            }
            if (count == 0) continue;
            for (double& v : mean) v /= static_cast<double>(count);
            for (std::size_t i = 0; i < n; ++i)
                if (label[i] == c) total += squared_distance(x.row(i), mean);
        }
        best = std::min(best, total);
        std::size_t pos = 0;
        while (pos < n && ++label[pos] == k) label[pos++] = 0;
        if (pos == n) break;
    }
    return best;
}

Outcome kmeans_oracle() {
    std::mt19937_64 rng(1010);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t k = 1 + rng() % 3;
        const std::size_t n = k + rng() % (9 - k);
        const std::size_t d = 1 + rng() % 2;
        const DenseMatrix x = gaussian(n, d, rng);
        double best = std::numeric_limits<double>::infinity();
        for (std::uint64_t restart = 0; restart < 20; ++restart) {
            const KMeansResult r = kmeans(x, {k, 100, restart});
            best = std::min(best, kmeans_objective(x, r.centroids, r.assignments));
        }
        const double opt = exhaustive_optimum(x, k);
        worst = std::max(worst, std::abs(best - opt));
    }
    return {worst <= 1e-9, fmt("50 instances (N<=8, K<=3, d<=2), max |best-of-20 - optimum| = %.2e (tol 1e-9)", worst)};
}

Outcome opq_monotonic() {
    // A few dedicated runs so the criterion is meaningful on its own.
    std::mt19937_64 rng(1111);
    for (std::size_t m : {1u, 2u, 4u, 8u}) {
        const DenseMatrix mix = orthogonal_polar(gaussian(16, 16, rng));
        DenseMatrix x = gaussian(2000, 16, rng);
        for (std::size_t i = 0; i < x.rows(); ++i)
            for (std::size_t j = 0; j < 16; ++j) x(i, j) *= std::pow(static_cast<double>(j + 1), -1.0);
        OPQParams params{m, 64, 12, 8, m};
        params.init = m == 4 ? RotationInit::Pca : RotationInit::Identity;
        record(fmt("monotonicity M=%zu", m), train_opq(map_rows(mix, x), params).objective_trace);
    }
    std::size_t steps = 0;
    double worst = -std::numeric_limits<double>::infinity();
    std::string worst_label;
    for (const auto& [label, trace] : g_traces) {
        for (std::size_t i = 1; i < trace.size(); ++i) {
            ++steps;
            const double rise = trace[i] - trace[i - 1];
            if (rise > worst) {
                worst = rise;
                worst_label = label;
            }
        }
    }
    return {worst <= 1e-9, fmt("%zu training runs, %zu consecutive steps, largest increase %.3g (%s) (slack 1e-9)",
                               g_traces.size(), steps, worst, worst_label.c_str())};
}

Outcome adc_equivalence() {
    std::mt19937_64 rng(1212);
    const std::size_t n = 32;
    const DenseMatrix x = gaussian(5000, n, rng);
    const OPQModel model = train_opq(x, {8, 256, 3, 8, 12});
    record("adc OPQ", model.objective_trace);

    // 100 queries x 1000 random codes = 10^5 pairs per table kind and kernel variant.
    const std::size_t nq = 100, nc = 1000, m = model.codebook.m();
    CodeMatrix codes(nc, m);
    for (auto& c : codes.data) c = static_cast<std::uint8_t>(rng() & 0xFF);
    const DenseMatrix queries = gaussian(nq, n, rng);

    std::vector<kernels::Isa> variants{kernels::Isa::Scalar};
    if (kernels::available(kernels::Isa::Avx2)) variants.push_back(kernels::Isa::Avx2);
    double worst = 0.0;
    std::size_t checked = 0;
    for (std::size_t i = 0; i < nq; ++i) {
        const DenseVector rq = model.rotate(queries.row(i));
        const LookupTable sp = build_lut_scalar(model, queries.row(i));
        const LookupTable sd = build_lut_sqdist(model, queries.row(i));
        std::vector<double> dense_sp(nc), dense_sd(nc);
        for (std::size_t c = 0; c < nc; ++c) {
            const DenseVector xhat = model.decode_rotated(codes.row(c));
            dense_sp[c] = dot(rq, xhat);
            dense_sd[c] = squared_distance(rq, xhat);
        }
        for (kernels::Isa isa : variants) {
            const auto& kt = kernels::table(isa);
            std::vector<double> out(nc);
            for (const auto* pair : {&sp, &sd}) {
                const auto& dense = pair == &sp ? dense_sp : dense_sd;
                kt.adc_scan(pair->values.data(), m, pair->k, codes.data.data(), nc, out.data());
                for (std::size_t c = 0; c < nc; ++c) {
                    worst = std::max(worst, std::abs(out[c] - dense[c]) / std::abs(dense[c]));
                    ++checked;
                }
            }
        }
    }

    // Throughput on a larger code set, informational only.
    const std::size_t big = 1'000'000;
    CodeMatrix many(big, m);
    for (auto& c : many.data) c = static_cast<std::uint8_t>(rng() & 0xFF);
    const LookupTable lut = build_lut_scalar(model, queries.row(0));
    std::vector<double> out(big);
    std::string speed;
    for (kernels::Isa isa : variants) {
        const auto& kt = kernels::table(isa);
        const auto t0 = Clock::now();
        for (int rep = 0; rep < 5; ++rep) kt.adc_scan(lut.values.data(), m, lut.k, many.data.data(), big, out.data());
        const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        speed += fmt(", %s %.0f Mcodes/s", kt.name, 5.0 * big / secs / 1e6);
    }
    return {worst <= 1e-5,
            fmt("%zu (query, code) comparisons over 10^5 pairs, max relative difference %.2e (tol 1e-5); M=%zu "
                "scan throughput",
                checked, worst, m) +
                speed};
}

struct Criterion {
    int id;
    const char* name;
    double time_limit;  // seconds, 0 for none
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria for the pairwise quantization library"};
    std::vector<int> only;
    app.add_option("--only", only, "Run only these criteria (1-12)");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria{
        {1, "transform factorization", 10.0, transform_factorization},
        {2, "loss-reduction identity", 5.0, loss_identity},
        {3, "distance lifting identity", 0.0, lifting_identity},
        {4, "OPQ scalar-product unbiasedness", 0.0, opq_scalar_unbiased},
        {5, "OPQ squared-distance bias identity", 0.0, opq_sqdist_bias_identity},
        {6, "PairQ unbiasedness", 0.0, pairq_unbiased},
        {7, "scalar-product error vs OPQ (synthetic, n=100)", 600.0, scalar_error_vs_opq},
        {8, "relative distance error ordering (synthetic, n=128)", 600.0, relative_error_ordering},
        {9, "identity degeneration", 0.0, identity_degeneration},
        {10, "k-means exhaustive oracle", 0.0, kmeans_oracle},
        // Runs after everything that trains OPQ so it sees every trace.
        {11, "OPQ objective monotonicity", 0.0, opq_monotonic},
        {12, "ADC equivalence", 0.0, adc_equivalence},
    };
    const std::set<int> selected(only.begin(), only.end());

    std::printf("kernels: %s\n", std::string(kernels::to_string(kernels::active_isa())).c_str());
    int failures = 0;
    for (const Criterion& c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        if (c.time_limit > 0.0 && secs > c.time_limit) {
            o.pass = false;
            o.detail += fmt(" [runtime %.1f s exceeds %.0f s]", secs, c.time_limit);
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s %2d %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
