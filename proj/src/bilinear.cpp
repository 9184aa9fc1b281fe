#include "qnesn/bilinear.hpp"

namespace qnesn {

namespace {

constexpr std::size_t kQuatLanes = 4;

std::size_t scalar_lanes(Model model) { return is_quaternion(model) ? kQuatLanes : 1; }

struct Writer {
    ThetaVector& out;
    void put(double v) { out.push_back(v); }
    void put(const Quaternion& q) {
        out.push_back(q.a);
        out.push_back(q.b);
        out.push_back(q.c);
        out.push_back(q.d);
    }
    template <typename S>
    void put(const Mat<S>& m) {
        for (const auto& e : m.data()) put(e);
    }
};

struct Reader {
    const ThetaVector& in;
    std::size_t pos{0};
    void get(double& v) { v = in[pos++]; }
    void get(Quaternion& q) {
        q.a = in[pos++];
        q.b = in[pos++];
        q.c = in[pos++];
        q.d = in[pos++];
    }
    template <typename S>
    Mat<S> get_mat(std::size_t rows, std::size_t cols) {
        Mat<S> m(rows, cols);
        for (auto& e : m.data()) get(e);
        return m;
    }
};

template <typename S>
ThetaVector pack_linear(const LinearModelParams<S>& p) {
    ThetaVector theta;
    Writer w{theta};
    w.put(p.w_in);
    w.put(p.w);
    w.put(p.w_out);
    return theta;
}

template <typename S>
ThetaVector pack_bilinear(const BilinearModelParams<S>& p) {
    p.readout.validate();
    ThetaVector theta;
    Writer w{theta};
    w.put(p.readout.a);
    for (const auto& bp : p.readout.b) w.put(bp);
    w.put(p.readout.c);
    w.put(p.w_in);
    w.put(p.w);
    return theta;
}

void check_length(const ThetaVector& theta, Model model, const Dims& dims) {
    const std::size_t want = theta_length(model, dims);
    if (theta.size() != want)
        throw std::invalid_argument("theta length " + std::to_string(theta.size()) +
                                    " does not match " + to_string(model) + " dims (expected " +
                                    std::to_string(want) + ")");
}

template <typename S>
LinearModelParams<S> unpack_linear(const ThetaVector& theta, const Dims& dims, Model model) {
    check_length(theta, model, dims);
    Reader r{theta};
    LinearModelParams<S> p;
    p.w_in = r.template get_mat<S>(dims.n_units, dims.input_width());
    p.w = r.template get_mat<S>(dims.n_units, dims.n_units);
    p.w_out = r.template get_mat<S>(dims.n_outputs, dims.readout_width());
    return p;
}

template <typename S>
BilinearModelParams<S> unpack_bilinear(const ThetaVector& theta, const Dims& dims, Model model) {
    check_length(theta, model, dims);
    const std::size_t m = dims.readout_width();
    const std::size_t lags = dims.filter_order - 1;
    Reader r{theta};
    BilinearModelParams<S> p;
    p.readout.order = dims.filter_order;
    p.readout.a = r.template get_mat<S>(dims.n_outputs, m);
    p.readout.b.reserve(dims.n_outputs);
    for (std::size_t i = 0; i < dims.n_outputs; ++i)
        p.readout.b.push_back(r.template get_mat<S>(lags, m));
    p.readout.c = r.template get_mat<S>(dims.n_outputs, lags);
    p.w_in = r.template get_mat<S>(dims.n_units, dims.input_width());
    p.w = r.template get_mat<S>(dims.n_units, dims.n_units);
    return p;
}

}  // namespace

std::size_t theta_length(Model model, const Dims& dims) {
    if (dims.filter_order < 2) throw std::invalid_argument("theta_length: filter order must be >= 2");
    const std::size_t lanes = scalar_lanes(model);
    const std::size_t m = dims.readout_width();
    const std::size_t reservoir =
        dims.n_units * dims.input_width() + dims.n_units * dims.n_units;
    switch (model) {
        case Model::esn_ga:
        case Model::qesn:
            return lanes * (reservoir + dims.n_outputs * m);
        case Model::nesn:
        case Model::qnesn: {
            const std::size_t lags = dims.filter_order - 1;
            const std::size_t readout =
                dims.n_outputs * m + dims.n_outputs * lags * m + dims.n_outputs * lags;
            return lanes * (reservoir + readout);
        }
        case Model::esn:
            break;
    }
    throw std::invalid_argument("theta_length: model '" + to_string(model) +
                                "' has no GA genome");
}

ThetaVector theta_pack(const LinearModelParams<double>& p) { return pack_linear(p); }
ThetaVector theta_pack(const LinearModelParams<Quaternion>& p) { return pack_linear(p); }
ThetaVector theta_pack(const BilinearModelParams<double>& p) { return pack_bilinear(p); }
ThetaVector theta_pack(const BilinearModelParams<Quaternion>& p) { return pack_bilinear(p); }

LinearModelParams<double> theta_unpack_linear_real(const ThetaVector& theta, const Dims& dims) {
    return unpack_linear<double>(theta, dims, Model::esn_ga);
}
LinearModelParams<Quaternion> theta_unpack_linear_quat(const ThetaVector& theta, const Dims& dims) {
    return unpack_linear<Quaternion>(theta, dims, Model::qesn);
}
BilinearModelParams<double> theta_unpack_bilinear_real(const ThetaVector& theta, const Dims& dims) {
    return unpack_bilinear<double>(theta, dims, Model::nesn);
}
BilinearModelParams<Quaternion> theta_unpack_bilinear_quat(const ThetaVector& theta, const Dims& dims) {
    return unpack_bilinear<Quaternion>(theta, dims, Model::qnesn);
}

}  // namespace qnesn
