#include "pairq/estimator.hpp"

#include <string>

#include "pairq/error.hpp"
#include "pairq/kernels.hpp"

namespace pairq {

LookupTable build_lut_scalar(const OPQModel& model, std::span<const double> r) {
    const DenseVector rr = model.rotate(r);
    const PQCodebook& cb = model.codebook;
    const auto& kt = kernels::active();
    LookupTable lut{cb.m(), cb.k(), LutKind::ScalarProduct, std::vector<double>(cb.m() * cb.k())};
    for (std::size_t j = 0; j < cb.m(); ++j) {
        const std::size_t width = cb.sub_dims()[j];
        const double* sub = rr.data() + cb.offset(j);
        const double* words = cb.block(j);
        for (std::size_t w = 0; w < cb.k(); ++w) lut.values[j * cb.k() + w] = kt.dot(sub, words + w * width, width);
    }
    return lut;
}

LookupTable build_lut_sqdist(const OPQModel& model, std::span<const double> q) {
    const DenseVector rq = model.rotate(q);
    const PQCodebook& cb = model.codebook;
    const auto& kt = kernels::active();
    LookupTable lut{cb.m(), cb.k(), LutKind::SquaredDistance, std::vector<double>(cb.m() * cb.k())};
    for (std::size_t j = 0; j < cb.m(); ++j) {
        kt.l2sqr_ny(rq.data() + cb.offset(j), cb.block(j), cb.k(), cb.sub_dims()[j],
                    lut.values.data() + j * cb.k());
    }
    return lut;
}

namespace {

void check_codes(const LookupTable& lut, const CodeMatrix& codes) {
    if (codes.count == 0) return;
    if (codes.m != lut.m) {
        throw Error(ErrorKind::DimensionMismatch, "codes have M = " + std::to_string(codes.m) +
                                                      ", table has M = " + std::to_string(lut.m));
    }
    if (lut.k >= 256) return;
    for (std::size_t i = 0; i < codes.data.size(); ++i) {
        if (codes.data[i] >= lut.k) {
            throw Error(ErrorKind::OutOfRange, "code " + std::to_string(i / codes.m) + " block " +
                                                   std::to_string(i % codes.m) + " index " +
                                                   std::to_string(codes.data[i]) + " >= K = " +
                                                   std::to_string(lut.k));
        }
    }
}

}  // namespace

void adc_scan_into(const LookupTable& lut, const CodeMatrix& codes, std::span<double> out) {
    check_codes(lut, codes);
    if (out.size() != codes.count) throw Error(ErrorKind::DimensionMismatch, "adc_scan output length");
    if (codes.count == 0) return;
    kernels::active().adc_scan(lut.values.data(), lut.m, lut.k, codes.data.data(), codes.count, out.data());
}

std::vector<double> adc_scan(const LookupTable& lut, const CodeMatrix& codes) {
    std::vector<double> out(codes.count);
    adc_scan_into(lut, codes, out);
    return out;
}

double adc_estimate(const LookupTable& lut, std::span<const std::uint8_t> code) {
    if (code.size() != lut.m) throw Error(ErrorKind::DimensionMismatch, "code length vs table M");
    double s = 0.0;
    for (std::size_t j = 0; j < lut.m; ++j) {
        if (code[j] >= lut.k) throw Error(ErrorKind::OutOfRange, "code index " + std::to_string(code[j]));
        s += lut.values[j * lut.k + code[j]];
    }
    return s;
}

MseTable compute_mse_table(const OPQModel& model, const DenseMatrix& training_data, EmptyCellPolicy policy) {
    const PQCodebook& cb = model.codebook;
    const auto& kt = kernels::active();
    const DenseMatrix rotated = rotate_all(model, training_data);
    MseTable table{cb.m(), cb.k(), std::vector<double>(cb.m() * cb.k(), 0.0)};
    std::vector<std::size_t> counts(cb.m() * cb.k(), 0);
    std::vector<double> block_total(cb.m(), 0.0);
    for (std::size_t i = 0; i < rotated.rows(); ++i) {
        const double* x = rotated.row(i).data();
        for (std::size_t j = 0; j < cb.m(); ++j) {
            double d = 0.0;
            const std::size_t w = kt.argmin_l2(x + cb.offset(j), cb.block(j), cb.k(), cb.sub_dims()[j], &d);
            table.values[j * cb.k() + w] += d;
            ++counts[j * cb.k() + w];
            block_total[j] += d;
        }
    }
    for (std::size_t j = 0; j < cb.m(); ++j) {
        const double fill = (policy == EmptyCellPolicy::BlockAverage && rotated.rows() > 0)
                                ? block_total[j] / static_cast<double>(rotated.rows())
                                : 0.0;
        for (std::size_t w = 0; w < cb.k(); ++w) {
            const std::size_t cell = j * cb.k() + w;
            table.values[cell] = counts[cell] == 0 ? fill : table.values[cell] / static_cast<double>(counts[cell]);
        }
    }
    return table;
}

double mse_correction(const MseTable& mse, std::span<const std::uint8_t> code) {
    if (code.size() != mse.m) {
        throw Error(ErrorKind::DimensionMismatch, "code length " + std::to_string(code.size()) +
                                                      " vs MSE table M = " + std::to_string(mse.m));
    }
    double s = 0.0;
    for (std::size_t j = 0; j < mse.m; ++j) {
        if (code[j] >= mse.k) {
            throw Error(ErrorKind::OutOfRange, "code index " + std::to_string(code[j]) + " in block " +
                                                   std::to_string(j));
        }
        s += mse.values[j * mse.k + code[j]];
    }
    return s;
}

double corrected_sqdist(double estimate, std::span<const std::uint8_t> code, const MseTable& mse) {
    return estimate + mse_correction(mse, code);
}

}  // namespace pairq
